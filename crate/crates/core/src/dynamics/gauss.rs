//! Gauss-Legendre collocation: `s` stages, order `2s`, symplectic and
//! time-symmetric. Stage equations are solved by fixed-point iteration.

#[derive(Clone, Debug, PartialEq)]
pub struct GaussLegendre {
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NoConvergence;

const MAX_ITERS: usize = 60;

impl GaussLegendre {
    /// `stages` in `1..=3`.
    pub fn new(stages: usize) -> Option<Self> {
        let r15 = 15f64.sqrt();
        let r3 = 3f64.sqrt();
        let (a, b) = match stages {
            1 => (vec![vec![0.5]], vec![1.0]),
            2 => (vec![vec![0.25, 0.25 - r3 / 6.0], vec![0.25 + r3 / 6.0, 0.25]], vec![0.5, 0.5]),
            3 => (
                vec![
                    vec![5.0 / 36.0, 2.0 / 9.0 - r15 / 15.0, 5.0 / 36.0 - r15 / 30.0],
                    vec![5.0 / 36.0 + r15 / 24.0, 2.0 / 9.0, 5.0 / 36.0 - r15 / 24.0],
                    vec![5.0 / 36.0 + r15 / 30.0, 2.0 / 9.0 + r15 / 15.0, 5.0 / 36.0],
                ],
                vec![5.0 / 18.0, 4.0 / 9.0, 5.0 / 18.0],
            ),
            _ => return None,
        };
        Some(Self { a, b })
    }

    pub fn stages(&self) -> usize {
        self.b.len()
    }

    pub fn order(&self) -> usize {
        2 * self.b.len()
    }

    /// One step of length `h` for `x' = f(x)`.
    pub fn step<const N: usize, F>(&self, f: F, x: &[f64; N], h: f64) -> Result<[f64; N], NoConvergence>
    where
        F: Fn(&[f64; N]) -> [f64; N],
    {
        let s = self.stages();
        let f0 = f(x);
        let mut k = vec![f0; s];
        let scale = x.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        let mut converged = false;
        for _ in 0..MAX_ITERS {
            let mut change = 0.0f64;
            let mut next = Vec::with_capacity(s);
            for i in 0..s {
                let mut y = *x;
                for (n, yn) in y.iter_mut().enumerate() {
                    *yn += h * (0..s).map(|j| self.a[i][j] * k[j][n]).sum::<f64>();
                }
                next.push(f(&y));
            }
            for i in 0..s {
                for n in 0..N {
                    change = change.max((next[i][n] - k[i][n]).abs());
                }
            }
            k = next;
            if !change.is_finite() {
                return Err(NoConvergence);
            }
            if change * h.abs() <= 4.0 * f64::EPSILON * scale {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(NoConvergence);
        }
        let mut out = *x;
        for (n, o) in out.iter_mut().enumerate() {
            *o += h * (0..s).map(|j| self.b[j] * k[j][n]).sum::<f64>();
        }
        Ok(out)
    }
}
