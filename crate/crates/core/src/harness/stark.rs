//! Drive-induced frequency-shift coefficients from a concurrence curve.

use super::optimize::parabolic_peak;
use super::sweeps::{check_curve, stark_curve, Setup};
use crate::error::{Error, Result};
use crate::fit::{multi_start, LmOptions};

#[derive(Clone, Debug, PartialEq)]
pub struct StarkFit {
    pub lambda: [f64; 2],
    pub lambda_std: [f64; 2],
    /// Sum of squared concurrence residuals.
    pub residual: f64,
    pub fitted_curve: Vec<f64>,
    /// Peak drive strength (rad/µs) of the data and of the fitted model.
    pub peak_data: f64,
    pub peak_fit: f64,
}

/// Least-squares `(λ_A, λ_B)` for concurrence `conc` measured at drive
/// strengths `omegas` (rad/µs) with `Ω_B = ratio·Ω_A`. All other model
/// parameters come from `setup`.
pub fn fit_stark_lambda(setup: &Setup, omegas: &[f64], ratio: f64, conc: &[f64]) -> Result<StarkFit> {
    check_curve(omegas, conc)?;
    let resid = |p: &[f64]| -> Result<Vec<f64>> {
        let model = stark_curve(setup, omegas, ratio, [p[0], p[1]])?;
        Ok(model.iter().zip(conc).map(|(m, d)| m - d).collect())
    };
    let starts = [vec![0.0, 0.0], vec![0.15, 0.15], vec![0.15, -0.15], vec![-0.15, 0.15]];
    let opts = LmOptions { fd_step: 1e-4, ..LmOptions::default() };
    let res = multi_start(resid, &starts, opts)?;
    let scale: f64 = conc.iter().map(|c| c * c).sum();
    if !res.x.iter().all(|v| v.is_finite()) || res.cost > scale {
        return Err(Error::Fit { message: "Stark coefficients did not converge".into(), residual: res.cost });
    }
    let lambda = [res.x[0], res.x[1]];
    let fitted_curve = stark_curve(setup, omegas, ratio, lambda)?;
    Ok(StarkFit {
        lambda,
        lambda_std: [res.std_err(0), res.std_err(1)],
        residual: res.cost,
        peak_data: parabolic_peak(omegas, conc).0,
        peak_fit: parabolic_peak(omegas, &fitted_curve).0,
        fitted_curve,
    })
}
