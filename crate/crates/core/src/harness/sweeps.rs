use std::collections::BTreeMap;

use super::config::{Condition, EpsilonRule, ExperimentConfig};
use super::optimize::{maximize_1d, maximize_2d, parabolic_peak};
use super::SweepResult;
use crate::dynamics::{evolve, evolve_exact, steady_state, Trajectory, TRAJECTORY_COLUMNS};
use crate::entanglement::{concurrence, fidelity, qubit_subspace, singlet};
use crate::error::{Error, Result};
use crate::linalg::DensityMatrix;
use crate::output::Table;
use crate::slh::{build_device_model, half_detuning, DriveSpec, NetworkSpec, TransmonSpec};
use crate::units::{mhz, to_mhz};

pub const METRIC_COLUMNS: [&str; 4] = ["concurrence", "purity", "fidelity_singlet", "leakage"];

/// Concurrence, purity, singlet fidelity of the qubit block, and population
/// outside the qubit subspace.
pub fn state_metrics(rho: &DensityMatrix) -> Result<[f64; 4]> {
    let (q, leakage) = qubit_subspace(rho)?;
    Ok([concurrence(rho)?, rho.purity(), fidelity(&q, &singlet().to_density())?, leakage])
}

/// Model parameters shared by every sweep.
#[derive(Clone, Debug)]
pub struct Setup {
    pub net: NetworkSpec,
    pub drive: DriveSpec,
    pub qubits: [TransmonSpec; 2],
    pub local_noise: bool,
}

impl Setup {
    pub fn from_config(cfg: &ExperimentConfig) -> Result<Self> {
        Ok(Self {
            net: cfg.network_spec()?,
            drive: cfg.drive_spec(),
            qubits: cfg.qubit_specs(),
            local_noise: cfg.local_noise,
        })
    }

    pub fn delta(&self) -> f64 {
        half_detuning(&self.qubits)
    }

    pub fn steady(&self, drive: &DriveSpec) -> Result<DensityMatrix> {
        steady_state(&build_device_model(&self.net, drive, &self.qubits, self.local_noise)?)
    }

    /// Drive with the given amplitudes and detuning (rad/µs), other fields
    /// from the configuration.
    pub fn drive_at(&self, omega_a: f64, omega_b: f64, epsilon: f64) -> DriveSpec {
        DriveSpec { omega_a, omega_b, epsilon, ..self.drive.clone() }
    }

    pub fn concurrence_at(&self, omega_a: f64, omega_b: f64, epsilon: f64) -> Result<f64> {
        concurrence(&self.steady(&self.drive_at(omega_a, omega_b, epsilon))?)
    }

    /// `ε = (Ω_B² − Ω_A²)/4Δ`.
    pub fn parabola(&self, omega_a: f64, omega_b: f64) -> f64 {
        (omega_b * omega_b - omega_a * omega_a) / (4.0 * self.delta())
    }
}

fn metric_row(prefix: &[f64], m: [f64; 4]) -> Vec<f64> {
    let mut row = prefix.to_vec();
    row.extend(m);
    row
}

fn columns<'a>(head: &[&'a str]) -> Vec<&'a str> {
    head.iter().copied().chain(METRIC_COLUMNS).collect()
}

fn suffix(key: &str, k: usize, n: usize) -> String {
    if n == 1 {
        key.to_string()
    } else {
        format!("{key}_{k}")
    }
}

pub fn run_steady(cfg: &ExperimentConfig) -> Result<SweepResult> {
    let setup = Setup::from_config(cfg)?;
    let d = &setup.drive;
    let rho = setup.steady(d)?;
    let m = state_metrics(&rho)?;
    let mut table = Table::new(&columns(&["omega_A_MHz", "omega_B_MHz", "epsilon_MHz"]));
    table.push(metric_row(&[to_mhz(d.omega_a), to_mhz(d.omega_b), to_mhz(d.epsilon)], m));
    let mut result = SweepResult::new(cfg.mode, table);
    result.summary.insert("concurrence".into(), m[0]);
    result.summary.insert("purity".into(), m[1]);
    Ok(result)
}

fn initial_state(setup: &Setup) -> Result<DensityMatrix> {
    let n = setup.net.n_levels;
    DensityMatrix::basis(&[n, n], &[0, 0])
}

/// Adaptive-step trajectory from the ground state.
pub fn run_trajectory(cfg: &ExperimentConfig) -> Result<SweepResult> {
    let setup = Setup::from_config(cfg)?;
    let model = build_device_model(&setup.net, &setup.drive, &setup.qubits, setup.local_noise)?;
    let traj = evolve(&model, &initial_state(&setup)?, &cfg.times()?)?;
    let mut table = Table::new(&TRAJECTORY_COLUMNS);
    for (i, t) in traj.times().iter().enumerate() {
        let mut row = vec![*t];
        for name in &TRAJECTORY_COLUMNS[1..] {
            row.push(traj.observable(name).expect("two-transmon trajectory")[i]);
        }
        table.push(row);
    }
    let mut result = SweepResult::new(cfg.mode, table);
    result.summary.insert("final_concurrence".into(), traj.observable("concurrence").unwrap().last().copied().unwrap());
    Ok(result)
}

/// Settling diagnostics of a concurrence trace against its steady value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Settling {
    pub steady: f64,
    /// Earliest grid time after which `|C/C_ss − 1| ≤ 1%` holds.
    pub settling_time: f64,
    /// Largest `|C(t) − C(t_ref)|/C_ss` for `t ≥ t_ref`, `t_ref` the first
    /// grid time at or after 10 µs.
    pub drift_after_10us: f64,
}

pub fn settling(times: &[f64], conc: &[f64], steady: f64) -> Settling {
    let mut settling_time = f64::NAN;
    for i in (0..times.len()).rev() {
        if (conc[i] / steady - 1.0).abs() > 0.01 {
            break;
        }
        settling_time = times[i];
    }
    let drift = match times.iter().position(|&t| t >= 10.0) {
        Some(r) => conc[r..].iter().map(|c| (c - conc[r]).abs() / steady).fold(0.0, f64::max),
        None => f64::NAN,
    };
    Settling { steady, settling_time, drift_after_10us: drift }
}

/// Concurrence versus drive-on time via exact propagators between grid
/// points, so that the grid may extend to milliseconds.
pub fn run_duration(cfg: &ExperimentConfig) -> Result<SweepResult> {
    let setup = Setup::from_config(cfg)?;
    let model = build_device_model(&setup.net, &setup.drive, &setup.qubits, setup.local_noise)?;
    let times = cfg.times()?;
    let traj: Trajectory = evolve_exact(&model, &initial_state(&setup)?, &times)?;
    let steady = concurrence(&steady_state(&model)?)?;
    let mut table = Table::new(&columns(&["time_us"]));
    for (t, rho) in times.iter().zip(traj.states()) {
        table.push(metric_row(&[*t], state_metrics(rho)?));
    }
    let s = settling(&times, traj.observable("concurrence").unwrap(), steady);
    let mut result = SweepResult::new(cfg.mode, table);
    result.summary.insert("steady_concurrence".into(), s.steady);
    result.summary.insert("settling_time_us".into(), s.settling_time);
    result.summary.insert("drift_after_10us".into(), s.drift_after_10us);
    Ok(result)
}

/// Concurrence versus `Ω_A` with `Ω_B = r Ω_A` for each configured ratio.
pub fn run_rabi(cfg: &ExperimentConfig) -> Result<SweepResult> {
    let setup = Setup::from_config(cfg)?;
    let omegas = cfg.omega_grid()?;
    let ratios = cfg.sweep.omega_ratios.clone().unwrap_or_else(|| vec![1.0]);
    let rule = cfg.sweep.epsilon_rule;
    let mut table = Table::new(&columns(&["omega_B_over_omega_A", "omega_A_MHz", "omega_B_MHz", "epsilon_MHz"]));
    let mut result_summary = BTreeMap::new();
    for (k, &r) in ratios.iter().enumerate() {
        let rows: Vec<(f64, f64, [f64; 4])> = par_map(&omegas, |&w| {
            let (oa, ob) = (mhz(w), r * mhz(w));
            let eps = match rule {
                EpsilonRule::Fixed => setup.drive.epsilon,
                EpsilonRule::Optimal => setup.parabola(oa, ob),
            };
            Ok((ob, eps, state_metrics(&setup.steady(&setup.drive_at(oa, ob, eps))?)?))
        })?;
        for (w, (ob, eps, m)) in omegas.iter().zip(&rows) {
            table.push(metric_row(&[r, *w, to_mhz(*ob), to_mhz(*eps)], *m));
        }
        let conc: Vec<f64> = rows.iter().map(|r| r.2[0]).collect();
        let (x, y, interior) = parabolic_peak(&omegas, &conc);
        result_summary.insert(suffix("peak_omega_A_MHz", k, ratios.len()), x);
        result_summary.insert(suffix("peak_concurrence", k, ratios.len()), y);
        result_summary.insert(suffix("peak_interior", k, ratios.len()), if interior { 1.0 } else { 0.0 });
    }
    let mut result = SweepResult::new(cfg.mode, table);
    result.summary = result_summary;
    Ok(result)
}

fn par_map<T, U, F>(items: &[T], f: F) -> Result<Vec<U>>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Result<U> + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

/// One point of the concurrence ridge of a landscape.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RidgePoint {
    pub omega_a: f64,
    pub epsilon: f64,
    pub parabola: f64,
    pub concurrence: f64,
    /// The maximum lies strictly inside the ε grid.
    pub interior: bool,
}

impl RidgePoint {
    pub fn relative_deviation(&self) -> f64 {
        (self.epsilon - self.parabola).abs() / self.parabola.abs()
    }
}

/// Ridge of maximal concurrence over `ε` at each `Ω_A` (all rad/µs), with
/// `Ω_B = ratio·Ω_A`.
pub fn landscape_ridge(setup: &Setup, ratio: f64, omegas: &[f64], epsilons: &[f64], rounds: usize) -> Result<Vec<RidgePoint>> {
    omegas
        .iter()
        .map(|&oa| {
            let ob = ratio * oa;
            let (opt, vals) = maximize_1d(|e| setup.concurrence_at(oa, ob, e), epsilons, rounds)?;
            let best = (0..vals.len()).fold(0, |b, k| if vals[k] > vals[b] { k } else { b });
            Ok(RidgePoint {
                omega_a: oa,
                epsilon: opt.x,
                parabola: setup.parabola(oa, ob),
                concurrence: opt.value,
                interior: best > 0 && best + 1 < vals.len(),
            })
        })
        .collect()
}

/// Largest relative ridge deviation over interior points with a nonzero
/// parabola and a resolvable ridge (`C > 1e-3`).
pub fn max_ridge_deviation(ridge: &[RidgePoint]) -> f64 {
    ridge
        .iter()
        .filter(|p| p.interior && p.concurrence > 1e-3 && p.parabola.abs() > 1e-12)
        .map(RidgePoint::relative_deviation)
        .fold(f64::NAN, |a, d| if a.is_nan() || d > a { d } else { a })
}

/// Concurrence surfaces over `(ε, Ω_A)` for each ratio, plus the ridge in
/// `ridge.csv`.
pub fn run_landscape(cfg: &ExperimentConfig) -> Result<SweepResult> {
    let setup = Setup::from_config(cfg)?;
    let omegas = cfg.omega_grid()?;
    let eps = cfg.epsilon_grid()?;
    let ratios = cfg.sweep.omega_ratios.clone().unwrap_or_else(|| vec![1.0]);
    let mut table = Table::new(&columns(&["omega_B_over_omega_A", "omega_A_MHz", "omega_B_MHz", "epsilon_MHz"]));
    let mut ridge_table = Table::new(&[
        "omega_B_over_omega_A",
        "omega_A_MHz",
        "epsilon_ridge_MHz",
        "epsilon_parabola_MHz",
        "concurrence_ridge",
        "interior",
    ]);
    let mut summary = BTreeMap::new();
    let points: Vec<(f64, f64)> = omegas.iter().flat_map(|&w| eps.iter().map(move |&e| (w, e))).collect();
    for (k, &r) in ratios.iter().enumerate() {
        let rows = par_map(&points, |&(w, e)| state_metrics(&setup.steady(&setup.drive_at(mhz(w), r * mhz(w), mhz(e)))?))?;
        for ((w, e), m) in points.iter().zip(rows) {
            table.push(metric_row(&[r, *w, r * w, *e], m));
        }
        let om: Vec<f64> = omegas.iter().map(|&w| mhz(w)).collect();
        let em: Vec<f64> = eps.iter().map(|&e| mhz(e)).collect();
        let ridge = landscape_ridge(&setup, r, &om, &em, cfg.refine_rounds())?;
        for p in &ridge {
            ridge_table.push(vec![
                r,
                to_mhz(p.omega_a),
                to_mhz(p.epsilon),
                to_mhz(p.parabola),
                p.concurrence,
                if p.interior { 1.0 } else { 0.0 },
            ]);
        }
        summary.insert(suffix("ridge_max_relative_deviation", k, ratios.len()), max_ridge_deviation(&ridge));
    }
    let mut result = SweepResult::new(cfg.mode, table);
    result.summary = summary;
    result.extra_tables.push(("ridge.csv".into(), ridge_table));
    Ok(result)
}

/// Best concurrence over `(Ω_A, ε)` for one decay-rate ratio and drive
/// condition.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MismatchPoint {
    pub gamma_ratio: f64,
    pub condition: Condition,
    pub omega_a: f64,
    pub omega_b: f64,
    pub epsilon: f64,
    pub grid_concurrence: f64,
    pub concurrence: f64,
}

/// `γ_B = ratio·γ_A`; `Ω_B` follows the condition. Grids in rad/µs.
pub fn mismatch_optimum(
    setup: &Setup,
    gamma_ratio: f64,
    condition: Condition,
    omegas: &[f64],
    epsilons: &[f64],
    rounds: usize,
) -> Result<MismatchPoint> {
    let mut s = setup.clone();
    s.net.gamma_b = gamma_ratio * s.net.gamma_a;
    let k = condition.omega_ratio(s.net.gamma_a, s.net.gamma_b);
    let (opt, _) = maximize_2d(|oa, e| s.concurrence_at(oa, k * oa, e), omegas, epsilons, rounds)?;
    Ok(MismatchPoint {
        gamma_ratio,
        condition,
        omega_a: opt.x,
        omega_b: k * opt.x,
        epsilon: opt.y,
        grid_concurrence: opt.grid_value,
        concurrence: opt.value,
    })
}

pub fn run_mismatch(cfg: &ExperimentConfig) -> Result<SweepResult> {
    let setup = Setup::from_config(cfg)?;
    let om: Vec<f64> = cfg.omega_grid()?.iter().map(|&w| mhz(w)).collect();
    let em: Vec<f64> = cfg.epsilon_grid()?.iter().map(|&e| mhz(e)).collect();
    let ratios = cfg.sweep.gamma_ratios.as_ref().expect("validated").values();
    let conditions = cfg.sweep.conditions.clone().unwrap_or_else(|| vec![Condition::Cqa, Condition::Tms]);
    let mut cols = vec!["gamma_B_over_gamma_A", "omega_A_MHz", "omega_B_MHz", "epsilon_MHz", "grid_concurrence"];
    cols.extend(METRIC_COLUMNS);
    let mut table = Table::labeled("condition", &cols);
    for &r in &ratios {
        for &c in &conditions {
            let p = mismatch_optimum(&setup, r, c, &om, &em, cfg.refine_rounds())?;
            let mut s = setup.clone();
            s.net.gamma_b = r * s.net.gamma_a;
            let m = state_metrics(&s.steady(&s.drive_at(p.omega_a, p.omega_b, p.epsilon))?)?;
            table.push_labeled(
                c.name(),
                metric_row(&[r, to_mhz(p.omega_a), to_mhz(p.omega_b), to_mhz(p.epsilon), p.grid_concurrence], m),
            );
        }
    }
    Ok(SweepResult::new(cfg.mode, table))
}

/// Concurrence curve for a given pair of Stark coefficients.
pub fn stark_curve(setup: &Setup, omegas: &[f64], ratio: f64, lambda: [f64; 2]) -> Result<Vec<f64>> {
    let mut s = setup.clone();
    s.drive.lambda_a = lambda[0];
    s.drive.lambda_b = lambda[1];
    par_map(omegas, |&oa| s.concurrence_at(oa, ratio * oa, s.drive.epsilon))
}

pub(crate) fn check_curve(omegas: &[f64], conc: &[f64]) -> Result<()> {
    if omegas.len() != conc.len() || omegas.len() < 3 {
        return Err(Error::arg("a Stark fit needs at least three (Ω, C) points"));
    }
    Ok(())
}
