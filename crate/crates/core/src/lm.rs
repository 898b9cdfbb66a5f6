//! Damped least-squares (Levenberg–Marquardt style) minimizer with a
//! forward-difference numeric Jacobian. Dimensions here are tiny
//! (≤ 8 parameters, a few hundred residuals), so the normal-equations
//! route is fine.

use crate::numeric::solve_linear;
use crate::{Error, Result};

pub struct LmOptions {
    pub max_iterations: usize,
    /// Relative step used for the forward-difference Jacobian.
    pub fd_step: f64,
    /// Stop when the relative decrease of the cost falls below this.
    pub cost_tol: f64,
    /// Stop when the scaled step norm falls below this.
    pub step_tol: f64,
}

impl Default for LmOptions {
    fn default() -> Self {
        Self {
            max_iterations: 200,
            fd_step: 1e-7,
            cost_tol: 1e-12,
            step_tol: 1e-10,
        }
    }
}

pub struct LmResult {
    pub params: Vec<f64>,
    pub rms: f64,
    pub iterations: usize,
}

/// Minimize `‖residuals(p)‖²` starting from `initial`.
///
/// `scale` sets the magnitude used for finite-difference steps and for
/// the step-size convergence test of each parameter; it should be the
/// natural order of magnitude (e.g. a linewidth in Hz), never zero.
pub fn levenberg_marquardt<F>(
    residuals: F,
    initial: &[f64],
    scale: &[f64],
    opts: &LmOptions,
) -> Result<LmResult>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    assert_eq!(initial.len(), scale.len());
    let n = initial.len();
    let mut p = initial.to_vec();
    let mut r = residuals(&p);
    let m = r.len();
    if m < n {
        return Err(Error::InsufficientData(format!(
            "{m} residuals for {n} parameters"
        )));
    }
    let mut cost: f64 = r.iter().map(|v| v * v).sum();
    let mut lambda = 1e-3;

    for iter in 0..opts.max_iterations {
        // Numeric Jacobian, column per parameter.
        let mut jac = vec![vec![0.0; n]; m];
        for j in 0..n {
            let h = opts.fd_step * scale[j].abs().max(1e-30);
            let mut pj = p.clone();
            pj[j] += h;
            let rj = residuals(&pj);
            for i in 0..m {
                jac[i][j] = (rj[i] - r[i]) / h;
            }
        }
        let mut jtj = vec![vec![0.0; n]; n];
        let mut jtr = vec![0.0; n];
        for i in 0..m {
            for a in 0..n {
                jtr[a] += jac[i][a] * r[i];
                for b in 0..n {
                    jtj[a][b] += jac[i][a] * jac[i][b];
                }
            }
        }

        let mut improved = false;
        for _ in 0..12 {
            let mut lhs = jtj.clone();
            for a in 0..n {
                lhs[a][a] += lambda * jtj[a][a].max(1e-30);
            }
            let mut rhs: Vec<f64> = jtr.iter().map(|v| -v).collect();
            let step = match solve_linear(&mut lhs, &mut rhs) {
                Ok(s) => s,
                Err(_) => {
                    lambda *= 10.0;
                    continue;
                }
            };
            let trial: Vec<f64> = p.iter().zip(&step).map(|(a, s)| a + s).collect();
            let rt = residuals(&trial);
            let trial_cost: f64 = rt.iter().map(|v| v * v).sum();
            if trial_cost < cost {
                let step_small = step
                    .iter()
                    .zip(scale)
                    .all(|(s, sc)| s.abs() <= opts.step_tol * sc.abs().max(1e-30));
                let cost_drop = (cost - trial_cost) / cost.max(1e-300);
                p = trial;
                r = rt;
                cost = trial_cost;
                lambda = (lambda * 0.3).max(1e-12);
                improved = true;
                if step_small || cost_drop < opts.cost_tol {
                    return Ok(LmResult {
                        params: p,
                        rms: (cost / m as f64).sqrt(),
                        iterations: iter + 1,
                    });
                }
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            // Damping saturated: we are at a (possibly local) minimum.
            return Ok(LmResult {
                params: p,
                rms: (cost / m as f64).sqrt(),
                iterations: iter + 1,
            });
        }
    }
    Err(Error::FitFailure {
        iterations: opts.max_iterations,
        last_rms: (cost / m as f64).sqrt(),
    })
}
