use std::collections::BTreeMap;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::config::ExperimentConfig;
use super::stark::fit_stark_lambda;
use super::sweeps::{stark_curve, Setup};
use super::SweepResult;
use crate::calibration::{
    combine_efficiency, driven_transmon_spectrum, fit_exponential_t1, fit_spectrum, transmission_efficiency,
    ScatterConfig,
};
use crate::entanglement::{concurrence, fidelity, qubit_subspace};
use crate::error::{Error, Result};
use crate::linalg::DensityMatrix;
use crate::output::Table;
use crate::tomography::{
    bootstrap_concurrence_error, calibrate_detectors, cardinal_pairs, pauli_bars, physical_detector,
    prepare_cardinal_states, reconstruct_state, state_from_pauli, stream_seed, Acquisition, ReadoutModel,
    PAULI_LABELS,
};
use crate::units::{mhz, to_mhz};

/// Reads numeric CSV columns by header name.
pub fn read_csv_columns(path: &Path) -> Result<BTreeMap<String, Vec<f64>>> {
    let mut reader = csv::Reader::from_path(path)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    let mut cols: BTreeMap<String, Vec<f64>> = headers.iter().map(|h| (h.clone(), Vec::new())).collect();
    for (line, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        for (h, field) in headers.iter().zip(rec.iter()) {
            let v: f64 = field.trim().parse().map_err(|_| {
                Error::Config(format!("{}: line {}: column '{h}' is not a number", path.display(), line + 2))
            })?;
            cols.get_mut(h).unwrap().push(v);
        }
    }
    Ok(cols)
}

fn column<'a>(cols: &'a BTreeMap<String, Vec<f64>>, name: &str, path: &Path) -> Result<&'a [f64]> {
    cols.get(name)
        .map(|v| v.as_slice())
        .ok_or_else(|| Error::Config(format!("{}: missing column '{name}'", path.display())))
}

fn add_noise(values: &mut [f64], rel: f64, seed: u64, stream: u64) {
    if rel == 0.0 {
        return;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let d = Normal::new(0.0, rel).expect("finite noise");
    for v in values.iter_mut() {
        *v *= 1.0 + d.sample(&mut rng);
    }
}

/// Fifteen two-qubit Pauli expectations in canonical order.
pub fn export_pauli_bars(rho: &DensityMatrix) -> Result<Table> {
    let bars = pauli_bars(rho)?;
    let mut t = Table::labeled("term", &["value"]);
    for (label, b) in PAULI_LABELS.iter().zip(bars) {
        t.push_labeled(label, vec![b]);
    }
    Ok(t)
}

fn acquisition(cfg: &ExperimentConfig) -> Result<Acquisition> {
    let mut acq = Acquisition::noiseless();
    acq.shots = cfg.tomography.shots;
    if let Some(sigma) = cfg.tomography.noise_sigma {
        for (site, r) in acq.readouts.iter_mut().enumerate() {
            *r = ReadoutModel::new(ReadoutModel::default_for(site).axes, sigma)?;
        }
    }
    Ok(acq)
}

/// Detector tomography, state tomography of the configured steady state and
/// a bootstrap error bar on its concurrence.
pub fn run_tomography_demo(cfg: &ExperimentConfig) -> Result<SweepResult> {
    let setup = Setup::from_config(cfg)?;
    let (truth_state, _) = qubit_subspace(&setup.steady(&setup.drive)?)?;
    let acq = acquisition(cfg)?;
    let q = &setup.qubits;
    let truth = [physical_detector(&q[0], 1.0, -1.0)?, physical_detector(&q[1], 1.0, -1.0)?];
    let cards = [prepare_cardinal_states(&q[0])?, prepare_cardinal_states(&q[1])?];
    let fitted = calibrate_detectors(
        [&truth[0], &truth[1]],
        [&cards[0], &cards[1]],
        [&cards[0], &cards[1]],
        &acq,
        stream_seed(cfg.seed, 0),
    )?;
    let measure = |rho: &DensityMatrix, task: u64| -> Result<DensityMatrix> {
        let data = acq.measure(rho, [&truth[0], &truth[1]], stream_seed(cfg.seed, task))?;
        reconstruct_state(&data, &fitted[0], &fitted[1])
    };
    let estimate = measure(&truth_state, 1)?;
    let simulated = pauli_bars(&truth_state)?;
    let reconstructed = pauli_bars(&estimate)?;

    // Reconstruction discrepancies on the known cardinal products set the
    // bootstrap distribution.
    let mut discrepancies = Vec::new();
    for (s, rho) in cardinal_pairs([&cards[0], &cards[1]])?.iter().enumerate() {
        let est = pauli_bars(&measure(rho, 2 + s as u64)?)?;
        let exact = pauli_bars(rho)?;
        let mut d = [0.0; 15];
        for k in 0..15 {
            d[k] = est[k] - exact[k];
        }
        discrepancies.push(d);
    }
    let (boot_mean, boot_std) = bootstrap_concurrence_error(
        state_from_pauli,
        &reconstructed,
        &discrepancies,
        cfg.tomography.bootstrap_resamples,
        stream_seed(cfg.seed, 100),
    )?;

    let mut table = Table::labeled("term", &["simulated", "reconstructed"]);
    for (k, label) in PAULI_LABELS.iter().enumerate() {
        table.push_labeled(label, vec![simulated[k], reconstructed[k]]);
    }
    let mut result = SweepResult::new(cfg.mode, table);
    let s = &mut result.summary;
    s.insert("concurrence_simulated".into(), concurrence(&truth_state)?);
    s.insert("concurrence_reconstructed".into(), concurrence(&estimate)?);
    s.insert("concurrence_bootstrap_mean".into(), boot_mean);
    s.insert("concurrence_bootstrap_std".into(), boot_std);
    s.insert("fidelity".into(), fidelity(&truth_state, &estimate)?);
    result.extra_json.push(("detectors.json".into(), serde_json::to_value(&fitted)?));
    Ok(result)
}

/// Scattering template for one qubit. The scattering Hamiltonian carries
/// `α a†a†aa` with `α` half the transition anharmonicity.
fn scatter_template(setup: &Setup, site: usize, grid: Vec<f64>) -> ScatterConfig {
    let gamma = if site == 0 { setup.net.gamma_a } else { setup.net.gamma_b };
    ScatterConfig { detuning_grid: grid, anharm: setup.qubits[site].anharm / 2.0, xi: 0.0, gamma, n_levels: 4 }
}

/// Transmission efficiency from pairs of scattering spectra. Qubit A's
/// signal crosses the link with amplitude `η`; qubit B's does not.
/// Label, detunings and the A and B magnitudes.
type Spectrum = (String, Vec<f64>, Vec<f64>, Vec<f64>);

pub fn run_fit_s21(cfg: &ExperimentConfig) -> Result<SweepResult> {
    let setup = Setup::from_config(cfg)?;
    let mut spectra: Vec<Spectrum> = Vec::new();
    if cfg.calibration.data_csv.is_empty() {
        let grid: Vec<f64> = cfg.sweep.detuning_mhz.as_ref().expect("validated").values().iter().map(|&d| mhz(d)).collect();
        for (k, &xi) in cfg.calibration.xi_mhz.iter().enumerate() {
            let mut mags = Vec::new();
            for site in 0..2 {
                let mut c = scatter_template(&setup, site, grid.clone());
                c.xi = mhz(xi);
                let path = if site == 0 { setup.net.eta } else { 1.0 };
                let mut m: Vec<f64> = driven_transmon_spectrum(&c)?.iter().map(|a| path * a.norm() / c.xi).collect();
                add_noise(&mut m, cfg.calibration.noise_rel, cfg.seed, (2 * k + site) as u64);
                mags.push(m);
            }
            let b = mags.pop().unwrap();
            let a = mags.pop().unwrap();
            spectra.push((format!("xi={xi}"), grid.clone(), a, b));
        }
    } else {
        for path in &cfg.calibration.data_csv {
            let cols = read_csv_columns(path)?;
            let grid = column(&cols, "detuning_MHz", path)?.iter().map(|&d| mhz(d)).collect();
            let a = column(&cols, "magnitude_A", path)?.to_vec();
            let b = column(&cols, "magnitude_B", path)?.to_vec();
            spectra.push((path.display().to_string(), grid, a, b));
        }
    }

    let mut table = Table::labeled(
        "spectrum",
        &["xi_hat_A_MHz", "xi_hat_B_MHz", "normalization_A", "normalization_B", "eta_squared", "eta_squared_std"],
    );
    let mut data_table = Table::labeled("spectrum", &["detuning_MHz", "magnitude_A", "magnitude_B"]);
    let mut estimates = Vec::new();
    for (label, grid, a, b) in &spectra {
        let fa = fit_spectrum(&scatter_template(&setup, 0, grid.clone()), a)?;
        let fb = fit_spectrum(&scatter_template(&setup, 1, grid.clone()), b)?;
        let (eta2, sigma) = transmission_efficiency(&fa, &fb)?;
        estimates.push((eta2, sigma));
        table.push_labeled(
            label,
            vec![to_mhz(fa.xi_hat), to_mhz(fb.xi_hat), fa.normalized_magnitude, fb.normalized_magnitude, eta2, sigma],
        );
        for i in 0..grid.len() {
            data_table.push_labeled(label, vec![to_mhz(grid[i]), a[i], b[i]]);
        }
    }
    let (eta2, sigma) = combine_efficiency(&estimates)?;
    let mut result = SweepResult::new(cfg.mode, table);
    result.summary.insert("eta_squared".into(), eta2);
    result.summary.insert("eta_squared_std".into(), sigma);
    result.extra_tables.push(("spectra.csv".into(), data_table));
    Ok(result)
}

/// Exponential fits of excited-state decay for both qubits.
pub fn run_fit_t1(cfg: &ExperimentConfig) -> Result<SweepResult> {
    let q = cfg.qubit_specs();
    let (times, pops): (Vec<f64>, [Vec<f64>; 2]) = match cfg.calibration.data_csv.first() {
        Some(path) => {
            let cols = read_csv_columns(path)?;
            (
                column(&cols, "time_us", path)?.to_vec(),
                [column(&cols, "pop_A", path)?.to_vec(), column(&cols, "pop_B", path)?.to_vec()],
            )
        }
        None => {
            let times = cfg.times()?;
            let mut pops = [Vec::new(), Vec::new()];
            for (site, p) in pops.iter_mut().enumerate() {
                *p = times.iter().map(|t| 0.97 * (-t / q[site].t1).exp() + 0.02).collect();
                add_noise(p, cfg.calibration.noise_rel, cfg.seed, site as u64);
            }
            (times, pops)
        }
    };
    let mut table = Table::labeled("qubit", &["T1_ns", "T1_std_ns", "amplitude", "offset", "residual"]);
    let mut result_summary = BTreeMap::new();
    for (site, label) in ["A", "B"].iter().enumerate() {
        let f = fit_exponential_t1(&times, &pops[site])?;
        table.push_labeled(label, vec![f.t1 * 1e3, f.t1_std * 1e3, f.amplitude, f.offset, f.residual]);
        result_summary.insert(format!("T1_{label}_ns"), f.t1 * 1e3);
    }
    let mut result = SweepResult::new(cfg.mode, table);
    result.summary = result_summary;
    Ok(result)
}

/// Fits `(λ_A, λ_B)` to a concurrence-versus-drive curve. Synthetic data
/// use the configured drive λ values.
pub fn run_fit_lambda(cfg: &ExperimentConfig) -> Result<SweepResult> {
    let setup = Setup::from_config(cfg)?;
    let ratio = cfg.sweep.omega_ratios.as_ref().and_then(|r| r.first().copied()).unwrap_or(1.0);
    let (omegas, data): (Vec<f64>, Vec<f64>) = match cfg.calibration.data_csv.first() {
        Some(path) => {
            let cols = read_csv_columns(path)?;
            (
                column(&cols, "omega_A_MHz", path)?.iter().map(|&w| mhz(w)).collect(),
                column(&cols, "concurrence", path)?.to_vec(),
            )
        }
        None => {
            let om: Vec<f64> = cfg.omega_grid()?.iter().map(|&w| mhz(w)).collect();
            let truth = [setup.drive.lambda_a, setup.drive.lambda_b];
            let mut c = stark_curve(&setup, &om, ratio, truth)?;
            add_noise(&mut c, cfg.calibration.noise_rel, cfg.seed, 0);
            (om, c)
        }
    };
    let fit = fit_stark_lambda(&setup, &omegas, ratio, &data)?;
    let unshifted = stark_curve(&setup, &omegas, ratio, [0.0, 0.0])?;
    let mut table = Table::new(&["omega_A_MHz", "concurrence_data", "concurrence_fit", "concurrence_unshifted"]);
    for i in 0..omegas.len() {
        table.push(vec![to_mhz(omegas[i]), data[i], fit.fitted_curve[i], unshifted[i]]);
    }
    let mut result = SweepResult::new(cfg.mode, table);
    let s = &mut result.summary;
    s.insert("lambda_A".into(), fit.lambda[0]);
    s.insert("lambda_B".into(), fit.lambda[1]);
    s.insert("lambda_A_std".into(), fit.lambda_std[0]);
    s.insert("lambda_B_std".into(), fit.lambda_std[1]);
    s.insert("residual".into(), fit.residual);
    s.insert("peak_omega_data_MHz".into(), to_mhz(fit.peak_data));
    s.insert("peak_omega_fit_MHz".into(), to_mhz(fit.peak_fit));
    Ok(result)
}
