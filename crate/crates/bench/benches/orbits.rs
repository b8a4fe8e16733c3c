use criterion::{criterion_group, criterion_main, Criterion};
use superfactor_bench::{orbit_start, systems};
use superfactor_core::action_angle::orbit_actions;
use superfactor_core::dynamics::{hamilton_flow, FlowControls};

fn flow(c: &mut Criterion) {
    let mut g = c.benchmark_group("flow");
    g.sample_size(20);
    for sys in systems() {
        let pt = orbit_start(&sys);
        let period = sys.radial_period(sys.hamiltonian(&pt)).unwrap();
        let ctl = FlowControls { dt: period / 200.0, ..FlowControls::default() };
        g.bench_function(sys.name(), |b| b.iter(|| hamilton_flow(&pt, &sys, 5.0 * period, &ctl).unwrap()));
        let traj = hamilton_flow(&pt, &sys, 5.0 * period, &ctl).unwrap();
        g.bench_function(format!("{}_actions", sys.name()), |b| b.iter(|| orbit_actions(&traj).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, flow);
criterion_main!(benches);
