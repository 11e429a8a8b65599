//! Network characterisation: scattering spectra, transmission efficiency,
//! T1 fits and drive-amplitude scaling.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{steady_state, LindbladModel};
use crate::error::{Error, Result};
use crate::fit::{multi_start, LmOptions};
use crate::linalg::{cr, destroy, eigh, C64};
use crate::output::Table;
use crate::units::to_mhz;

/// Weakly probed transmon emitting into a waveguide at rate `gamma`:
/// `H = Δ a†a + α a†a†aa + ξ(a + a†)`, output field `√γ a`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScatterConfig {
    pub detuning_grid: Vec<f64>,
    pub anharm: f64,
    pub xi: f64,
    pub gamma: f64,
    pub n_levels: usize,
}

impl ScatterConfig {
    pub fn validate(&self) -> Result<()> {
        if self.detuning_grid.is_empty() {
            return Err(Error::arg("detuning grid is empty"));
        }
        if self.detuning_grid.windows(2).any(|w| w[1] <= w[0]) || self.detuning_grid.iter().any(|d| !d.is_finite()) {
            return Err(Error::arg("detuning grid must be finite and strictly increasing"));
        }
        if self.n_levels < 3 {
            return Err(Error::arg("scattering model needs at least three levels"));
        }
        if !(self.gamma > 0.0) || !self.xi.is_finite() || !self.anharm.is_finite() {
            return Err(Error::arg("gamma must be positive and xi, anharm finite"));
        }
        Ok(())
    }

    fn with_xi(&self, xi: f64) -> Self {
        Self { xi, ..self.clone() }
    }
}

fn emitted_amplitude(cfg: &ScatterConfig, detuning: f64) -> Result<C64> {
    let n = cfg.n_levels;
    let a = destroy(n);
    let ad = a.dagger();
    let h = &(&(&ad.matmul(&a) * detuning) + &(&ad.matmul(&ad).matmul(&a).matmul(&a) * cfg.anharm))
        + &(&(&a + &ad) * cfg.xi);
    let model = LindbladModel::new(h, vec![&a * cfg.gamma.sqrt()])?;
    let rho = steady_state(&model)?;
    Ok(a.expect(&rho) * cr(cfg.gamma.sqrt()))
}

/// Steady-state emitted amplitude `√γ⟨a⟩` at each detuning.
pub fn driven_transmon_spectrum(cfg: &ScatterConfig) -> Result<Vec<C64>> {
    cfg.validate()?;
    cfg.detuning_grid.par_iter().map(|&d| emitted_amplitude(cfg, d)).collect()
}

/// Spectrum CSV with columns `detuning_MHz,re,im,magnitude`.
pub fn spectrum_table(cfg: &ScatterConfig, amplitudes: &[C64]) -> Table {
    let mut t = Table::new(&["detuning_MHz", "re", "im", "magnitude"]);
    for (d, a) in cfg.detuning_grid.iter().zip(amplitudes) {
        t.push(vec![to_mhz(*d), a.re, a.im, a.norm()]);
    }
    t
}

/// Drive-normalised transmission magnitude `N·√γ|⟨a⟩|/ξ` on the grid.
pub fn normalized_transmission(cfg: &ScatterConfig, normalization: f64) -> Result<Vec<f64>> {
    if cfg.xi == 0.0 {
        return Err(Error::arg("normalised transmission needs a nonzero drive"));
    }
    Ok(driven_transmon_spectrum(cfg)?.iter().map(|a| normalization * a.norm() / cfg.xi.abs()).collect())
}

/// Fitted drive amplitude and path normalisation of one spectrum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumFit {
    pub xi_hat: f64,
    pub xi_std: f64,
    pub gamma_hat: f64,
    /// Prefactor `N` of the drive-normalised transmission.
    pub normalized_magnitude: f64,
    pub normalized_std: f64,
    /// Sum of squared residuals.
    pub residual: f64,
}

/// Fits `(ξ, N)` to measured magnitudes on `template.detuning_grid` with the
/// known `template.gamma`. Five log-spaced starts in ξ.
pub fn fit_spectrum(template: &ScatterConfig, data: &[f64]) -> Result<SpectrumFit> {
    template.validate()?;
    if data.len() != template.detuning_grid.len() {
        return Err(Error::arg("one magnitude per detuning required"));
    }
    let shape = |xi: f64| -> Result<Vec<f64>> {
        let amps = driven_transmon_spectrum(&template.with_xi(xi))?;
        Ok(amps.iter().map(|a| a.norm() / xi).collect())
    };
    let resid = |p: &[f64]| -> Result<Vec<f64>> {
        let s = shape(p[0].abs())?;
        Ok(s.iter().zip(data).map(|(s, m)| p[1] * s - m).collect())
    };
    let span = template.detuning_grid.last().unwrap() - template.detuning_grid[0];
    let (lo, hi) = (0.05 * template.gamma, span.max(template.gamma));
    let mut starts = Vec::with_capacity(5);
    for k in 0..5 {
        let xi = lo * (hi / lo).powf(k as f64 / 4.0);
        let s = shape(xi)?;
        let ss: f64 = s.iter().map(|v| v * v).sum();
        let norm = if ss > 0.0 { s.iter().zip(data).map(|(a, b)| a * b).sum::<f64>() / ss } else { 1.0 };
        starts.push(vec![xi, norm]);
    }
    let res = multi_start(resid, &starts, LmOptions::default())?;
    let fit = SpectrumFit {
        xi_hat: res.x[0].abs(),
        xi_std: res.std_err(0),
        gamma_hat: template.gamma,
        normalized_magnitude: res.x[1],
        normalized_std: res.std_err(1),
        residual: res.cost,
    };
    let scale: f64 = data.iter().map(|v| v * v).sum();
    if !fit.xi_hat.is_finite() || fit.xi_hat == 0.0 || fit.residual > scale {
        return Err(Error::Fit { message: "spectrum fit did not converge".into(), residual: fit.residual });
    }
    Ok(fit)
}

/// `η² = (N_A/N_B)²` with first-order uncertainty from the fit covariances.
/// Qubit A's emission crosses the link, qubit B's does not.
pub fn transmission_efficiency(fit_a: &SpectrumFit, fit_b: &SpectrumFit) -> Result<(f64, f64)> {
    if fit_b.normalized_magnitude == 0.0 {
        return Err(Error::arg("reference spectrum has zero normalisation"));
    }
    let ratio = fit_a.normalized_magnitude / fit_b.normalized_magnitude;
    let rel = |v: f64, s: f64| if s.is_finite() { s / v } else { 0.0 };
    let rel_a = rel(fit_a.normalized_magnitude, fit_a.normalized_std);
    let rel_b = rel(fit_b.normalized_magnitude, fit_b.normalized_std);
    let eta2 = ratio * ratio;
    Ok((eta2, 2.0 * eta2 * rel_a.hypot(rel_b)))
}

/// Inverse-variance weighted mean of several `(value, σ)` estimates. Falls
/// back to the plain mean when any σ is zero.
pub fn combine_efficiency(estimates: &[(f64, f64)]) -> Result<(f64, f64)> {
    if estimates.is_empty() {
        return Err(Error::arg("no efficiency estimates"));
    }
    if estimates.iter().any(|(_, s)| !(*s > 0.0)) {
        let n = estimates.len() as f64;
        let mean = estimates.iter().map(|(v, _)| v).sum::<f64>() / n;
        return Ok((mean, 0.0));
    }
    let w: f64 = estimates.iter().map(|(_, s)| 1.0 / (s * s)).sum();
    let mean = estimates.iter().map(|(v, s)| v / (s * s)).sum::<f64>() / w;
    Ok((mean, w.sqrt().recip()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct T1Fit {
    pub t1: f64,
    pub t1_std: f64,
    pub amplitude: f64,
    pub offset: f64,
    pub residual: f64,
}

/// Fits `a·e^{−t/T1} + c`.
pub fn fit_exponential_t1(times: &[f64], populations: &[f64]) -> Result<T1Fit> {
    if times.len() != populations.len() {
        return Err(Error::arg("times and populations differ in length"));
    }
    if times.len() < 3 {
        return Err(Error::arg("a T1 fit needs at least three points"));
    }
    let (pmin, pmax) = populations.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &p| (a.min(p), b.max(p)));
    if !(pmax - pmin > 1e-12 * pmax.abs().max(1.0)) {
        return Err(Error::Fit { message: "data do not decay".into(), residual: 0.0 });
    }
    let span = times.last().unwrap() - times[0];
    let resid = |p: &[f64]| -> Result<Vec<f64>> {
        Ok(times.iter().zip(populations).map(|(t, y)| p[0] * (-(t - times[0]) / p[1]).exp() + p[2] - y).collect())
    };
    let a0 = populations[0] - populations.last().unwrap();
    let starts: Vec<Vec<f64>> = (0..5)
        .map(|k| vec![a0, span * 0.05 * 40f64.powf(k as f64 / 4.0), *populations.last().unwrap()])
        .collect();
    let res = multi_start(resid, &starts, LmOptions::default())?;
    let (amp, t1, off) = (res.x[0], res.x[1], res.x[2]);
    if !(t1 > 0.0) || t1 > 100.0 * span || amp.abs() < 1e-9 * (pmax - pmin) {
        return Err(Error::Fit { message: format!("no decay resolved (T1 = {t1})"), residual: res.cost });
    }
    // Amplitude refers to times[0]; shift it to t = 0.
    Ok(T1Fit { t1, t1_std: res.std_err(1), amplitude: amp * (times[0] / t1).exp(), offset: off, residual: res.cost })
}

/// Least-squares slope through the origin of Rabi frequency vs amplitude.
/// Returns `(slope, residual)`.
pub fn rabi_amplitude_scale(amplitudes: &[f64], rabi_freqs: &[f64]) -> Result<(f64, f64)> {
    if amplitudes.len() != rabi_freqs.len() || amplitudes.len() < 2 {
        return Err(Error::arg("need at least two (amplitude, frequency) pairs"));
    }
    let sxx: f64 = amplitudes.iter().map(|x| x * x).sum();
    if !(sxx > 0.0) {
        return Err(Error::Fit { message: "all amplitudes are zero".into(), residual: f64::NAN });
    }
    let slope = amplitudes.iter().zip(rabi_freqs).map(|(x, y)| x * y).sum::<f64>() / sxx;
    let residual = amplitudes.iter().zip(rabi_freqs).map(|(x, y)| (slope * x - y).powi(2)).sum();
    Ok((slope, residual))
}

/// Resonant Rabi frequency of an `n`-level transmon under
/// `(α/2)a†a†aa + (Ω/2)(a + a†)`: the splitting of the two dressed states
/// with most weight in the qubit subspace.
pub fn simulated_rabi_frequency(omega: f64, anharm: f64, n_levels: usize) -> Result<f64> {
    if n_levels < 2 {
        return Err(Error::arg("n_levels must be at least 2"));
    }
    let a = destroy(n_levels);
    let ad = a.dagger();
    let h = &(&ad.matmul(&ad).matmul(&a).matmul(&a) * (anharm / 2.0)) + &(&(&a + &ad) * (omega / 2.0));
    let (vals, vecs) = eigh(h.data());
    let mut weighted: Vec<(f64, f64)> = (0..n_levels)
        .map(|k| (vecs[(0, k)].norm_sqr() + vecs[(1, k)].norm_sqr(), vals[k]))
        .collect();
    weighted.sort_by(|x, y| y.0.total_cmp(&x.0));
    Ok((weighted[0].1 - weighted[1].1).abs())
}

#[cfg(test)]
#[path = "calibration_tests.rs"]
mod tests;
