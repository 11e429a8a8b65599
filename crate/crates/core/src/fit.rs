//! Small dense nonlinear least squares (Levenberg–Marquardt).

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct LmOptions {
    pub max_iter: usize,
    /// Stop when the relative cost decrease falls below this.
    pub ftol: f64,
    /// Stop when the relative step falls below this.
    pub xtol: f64,
    /// Relative central-difference step for the Jacobian.
    pub fd_step: f64,
}

impl Default for LmOptions {
    fn default() -> Self {
        Self { max_iter: 200, ftol: 1e-15, xtol: 1e-13, fd_step: 1e-6 }
    }
}

#[derive(Clone, Debug)]
pub struct LmResult {
    pub x: Vec<f64>,
    /// Sum of squared residuals.
    pub cost: f64,
    pub iterations: usize,
    /// `s² (JᵀJ)⁻¹` with `s² = cost/(n − p)`; `None` if singular or `n ≤ p`.
    pub covariance: Option<DMatrix<f64>>,
}

impl LmResult {
    pub fn std_err(&self, k: usize) -> f64 {
        self.covariance.as_ref().map_or(f64::NAN, |c| c[(k, k)].max(0.0).sqrt())
    }
}

fn jacobian<F>(f: &F, x: &[f64], r0: &DVector<f64>, h: f64) -> Result<DMatrix<f64>>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    let mut j = DMatrix::zeros(r0.len(), x.len());
    let mut xp = x.to_vec();
    for k in 0..x.len() {
        let step = h * x[k].abs().max(1e-8);
        xp[k] = x[k] + step;
        let up = f(&xp)?;
        xp[k] = x[k] - step;
        let down = f(&xp)?;
        xp[k] = x[k];
        for i in 0..r0.len() {
            j[(i, k)] = (up[i] - down[i]) / (2.0 * step);
        }
    }
    Ok(j)
}

/// Minimises `Σ r_i(x)²` from `x0`.
pub fn levenberg_marquardt<F>(f: F, x0: &[f64], opts: LmOptions) -> Result<LmResult>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    let mut x = x0.to_vec();
    let mut r = DVector::from_vec(f(&x)?);
    if r.iter().any(|v| !v.is_finite()) {
        return Err(Error::Fit { message: "non-finite residual at the starting point".into(), residual: f64::NAN });
    }
    let mut cost = r.norm_squared();
    let mut lambda = 1e-3;
    let mut iterations = 0;
    let mut jac = jacobian(&f, &x, &r, opts.fd_step)?;
    while iterations < opts.max_iter && cost > 0.0 {
        iterations += 1;
        let jtj = jac.transpose() * &jac;
        let g = jac.transpose() * &r;
        let mut improved = false;
        let mut tiny_step = false;
        for _ in 0..30 {
            let mut a = jtj.clone();
            for k in 0..x.len() {
                a[(k, k)] += lambda * jtj[(k, k)].max(1e-30);
            }
            let Some(step) = a.lu().solve(&(-&g)) else {
                lambda *= 10.0;
                continue;
            };
            let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
            let rt = match f(&trial) {
                Ok(v) if v.iter().all(|e| e.is_finite()) => DVector::from_vec(v),
                _ => {
                    lambda *= 10.0;
                    continue;
                }
            };
            let ct = rt.norm_squared();
            let xnorm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            tiny_step = step.norm() <= opts.xtol * (xnorm + opts.xtol);
            if ct < cost {
                let rel = (cost - ct) / cost;
                x = trial;
                r = rt;
                cost = ct;
                lambda = (lambda / 10.0).max(1e-15);
                improved = true;
                if rel < opts.ftol {
                    tiny_step = true;
                }
                break;
            }
            lambda *= 10.0;
            if tiny_step {
                break;
            }
        }
        if !improved || tiny_step {
            break;
        }
        jac = jacobian(&f, &x, &r, opts.fd_step)?;
    }
    let (n, p) = (r.len(), x.len());
    let covariance = if n > p {
        (jac.transpose() * &jac).try_inverse().map(|inv| inv * (cost / (n - p) as f64))
    } else {
        None
    };
    Ok(LmResult { x, cost, iterations, covariance })
}

/// Runs [`levenberg_marquardt`] from each start and keeps the lowest cost.
pub fn multi_start<F>(f: F, starts: &[Vec<f64>], opts: LmOptions) -> Result<LmResult>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    let mut best: Option<LmResult> = None;
    let mut last_err = None;
    for s in starts {
        match levenberg_marquardt(&f, s, opts) {
            Ok(res) => {
                if best.as_ref().is_none_or(|b| res.cost < b.cost) {
                    best = Some(res);
                }
            }
            Err(e) => last_err = Some(e),
        }
    }
    best.ok_or_else(|| last_err.unwrap_or_else(|| Error::arg("no starting points")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_fit_is_exact() {
        let t: Vec<f64> = (0..30).map(|k| k as f64 * 0.1).collect();
        let y: Vec<f64> = t.iter().map(|t| 2.0 * (-t / 0.7).exp() + 0.1).collect();
        let f = |p: &[f64]| Ok(t.iter().zip(&y).map(|(t, y)| p[0] * (-t / p[1]).exp() + p[2] - y).collect());
        let res = levenberg_marquardt(f, &[1.0, 1.5, 0.0], LmOptions::default()).unwrap();
        assert!((res.x[1] - 0.7).abs() < 1e-9, "{:?}", res.x);
        assert!(res.cost < 1e-20);
    }

    #[test]
    fn rosenbrock_converges() {
        let f = |p: &[f64]| Ok(vec![10.0 * (p[1] - p[0] * p[0]), 1.0 - p[0]]);
        let res = levenberg_marquardt(f, &[-1.2, 1.0], LmOptions::default()).unwrap();
        assert!((res.x[0] - 1.0).abs() < 1e-8 && (res.x[1] - 1.0).abs() < 1e-8);
    }

    #[test]
    fn covariance_matches_linear_regression() {
        let x: Vec<f64> = (0..10).map(f64::from).collect();
        let y = [0.1, 1.2, 1.9, 3.2, 3.9, 5.1, 6.0, 6.8, 8.1, 9.0];
        let f = |p: &[f64]| Ok(x.iter().zip(&y).map(|(x, y)| p[0] * x + p[1] - y).collect());
        let res = levenberg_marquardt(f, &[0.0, 0.0], LmOptions::default()).unwrap();
        let n = x.len() as f64;
        let mx = x.iter().sum::<f64>() / n;
        let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
        let s2 = res.cost / (n - 2.0);
        assert!((res.std_err(0) - (s2 / sxx).sqrt()).abs() < 1e-8);
    }

    #[test]
    fn multi_start_prefers_lower_cost() {
        let f = |p: &[f64]| Ok(vec![(p[0] - 3.0) * (p[0] + 1.0) * 0.5, p[0] - 3.0]);
        let res = multi_start(f, &[vec![-2.0], vec![4.0]], LmOptions::default()).unwrap();
        assert!((res.x[0] - 3.0).abs() < 1e-8);
    }
}
