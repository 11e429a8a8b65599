//! JSON experiment configuration. Field names carry their units.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::slh::{DriveSpec, NetworkSpec, TransmonSpec};
use crate::units::{ghz, mhz, ns};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Steady,
    Trajectory,
    SweepRabi,
    SweepLandscape,
    SweepMismatch,
    SweepDuration,
    TomographyDemo,
    FitS21,
    FitT1,
    FitLambda,
}

impl Mode {
    pub const ALL: [Mode; 10] = [
        Mode::Steady,
        Mode::Trajectory,
        Mode::SweepRabi,
        Mode::SweepLandscape,
        Mode::SweepMismatch,
        Mode::SweepDuration,
        Mode::TomographyDemo,
        Mode::FitS21,
        Mode::FitT1,
        Mode::FitLambda,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Mode::Steady => "steady",
            Mode::Trajectory => "trajectory",
            Mode::SweepRabi => "sweep-rabi",
            Mode::SweepLandscape => "sweep-landscape",
            Mode::SweepMismatch => "sweep-mismatch",
            Mode::SweepDuration => "sweep-duration",
            Mode::TomographyDemo => "tomography-demo",
            Mode::FitS21 => "fit-s21",
            Mode::FitT1 => "fit-t1",
            Mode::FitLambda => "fit-lambda",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Config(format!("mode: unknown mode '{s}'")))
    }
}

/// Explicit list or evenly spaced range (geometric when `log` is set).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Grid {
    List(Vec<f64>),
    Range {
        start: f64,
        stop: f64,
        points: usize,
        #[serde(default)]
        log: bool,
    },
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        match *self {
            Grid::List(ref v) => v.clone(),
            Grid::Range { start, stop, points, log } => {
                if points == 1 {
                    return vec![start];
                }
                (0..points)
                    .map(|k| {
                        let f = k as f64 / (points - 1) as f64;
                        if log {
                            start * (stop / start).powf(f)
                        } else {
                            start + (stop - start) * f
                        }
                    })
                    .collect()
            }
        }
    }

    fn check(&self, field: &str) -> Result<()> {
        if let Grid::Range { start, stop, points, log } = *self {
            if points == 0 {
                return Err(Error::Config(format!("{field}: points must be positive")));
            }
            if log && !(start > 0.0 && stop > 0.0) {
                return Err(Error::Config(format!("{field}: log grid needs positive bounds")));
            }
        }
        let v = self.values();
        if v.is_empty() {
            return Err(Error::Config(format!("{field}: grid is empty")));
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::Config(format!("{field}: grid values must be finite")));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkConfig {
    /// Derived from `T1` and the intrinsic `T1` when omitted.
    #[serde(rename = "gamma_A_MHz_over_2pi", default)]
    pub gamma_a_mhz: Option<f64>,
    #[serde(rename = "gamma_B_MHz_over_2pi", default)]
    pub gamma_b_mhz: Option<f64>,
    pub eta_squared: f64,
    #[serde(default)]
    pub prop_phase_rad: f64,
    pub n_levels: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DriveConfig {
    #[serde(rename = "omega_A_MHz_over_2pi")]
    pub omega_a_mhz: f64,
    #[serde(rename = "omega_B_MHz_over_2pi")]
    pub omega_b_mhz: f64,
    #[serde(rename = "epsilon_MHz_over_2pi")]
    pub epsilon_mhz: f64,
    #[serde(rename = "phase_B_rad")]
    pub phase_b_rad: f64,
    #[serde(rename = "lambda_A")]
    pub lambda_a: f64,
    #[serde(rename = "lambda_B")]
    pub lambda_b: f64,
}

impl DriveConfig {
    pub fn to_spec(&self) -> DriveSpec {
        DriveSpec {
            omega_a: mhz(self.omega_a_mhz),
            omega_b: mhz(self.omega_b_mhz),
            epsilon: mhz(self.epsilon_mhz),
            phase_b: self.phase_b_rad,
            lambda_a: self.lambda_a,
            lambda_b: self.lambda_b,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QubitConfig {
    #[serde(rename = "freq_GHz_over_2pi")]
    pub freq_ghz: f64,
    #[serde(rename = "anharm_MHz_over_2pi")]
    pub anharm_mhz: f64,
    #[serde(rename = "T1_ns")]
    pub t1_ns: f64,
    #[serde(rename = "T1_intrinsic_us")]
    pub t1_intrinsic_us: f64,
    #[serde(rename = "T2R_ns")]
    pub t2r_ns: f64,
}

impl QubitConfig {
    pub fn to_spec(&self) -> TransmonSpec {
        TransmonSpec {
            freq: ghz(self.freq_ghz),
            anharm: mhz(self.anharm_mhz),
            t1: ns(self.t1_ns),
            t1_intrinsic: self.t1_intrinsic_us,
            t2_ramsey: ns(self.t2r_ns),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QubitPair {
    #[serde(rename = "A")]
    pub a: QubitConfig,
    #[serde(rename = "B")]
    pub b: QubitConfig,
}

/// Drive-symmetry condition used when optimising over drive parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Condition {
    /// `Ω_B = Ω_A`.
    Cqa,
    /// `Ω_B = Ω_A √(γ_A/γ_B)`.
    Tms,
}

impl Condition {
    pub fn name(self) -> &'static str {
        match self {
            Condition::Cqa => "cqa",
            Condition::Tms => "tms",
        }
    }

    pub fn omega_ratio(self, gamma_a: f64, gamma_b: f64) -> f64 {
        match self {
            Condition::Cqa => 1.0,
            Condition::Tms => (gamma_a / gamma_b).sqrt(),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EpsilonRule {
    /// Use `drive.epsilon_MHz_over_2pi`.
    #[default]
    Fixed,
    /// `ε = (Ω_B² − Ω_A²)/4Δ` at every point.
    Optimal,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    #[serde(rename = "omega_A_MHz_over_2pi")]
    pub omega_a_mhz: Option<Grid>,
    #[serde(rename = "epsilon_MHz_over_2pi")]
    pub epsilon_mhz: Option<Grid>,
    #[serde(rename = "omega_B_over_omega_A")]
    pub omega_ratios: Option<Vec<f64>>,
    pub epsilon_rule: EpsilonRule,
    #[serde(rename = "gamma_B_over_gamma_A")]
    pub gamma_ratios: Option<Grid>,
    pub conditions: Option<Vec<Condition>>,
    pub times_us: Option<Grid>,
    #[serde(rename = "detuning_MHz_over_2pi")]
    pub detuning_mhz: Option<Grid>,
    pub refine_rounds: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TomographyConfig {
    /// Shots per setting; exact expectation values when absent.
    pub shots: Option<usize>,
    /// IQ noise; a quarter of the reference separation when absent.
    pub noise_sigma: Option<f64>,
    pub bootstrap_resamples: usize,
}

impl Default for TomographyConfig {
    fn default() -> Self {
        Self { shots: Some(10_000), noise_sigma: None, bootstrap_resamples: 50 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CalibrationConfig {
    /// Scattering drive amplitudes, one spectrum pair each.
    #[serde(rename = "xi_MHz_over_2pi")]
    pub xi_mhz: Vec<f64>,
    /// Relative Gaussian noise on synthetic data.
    pub noise_rel: f64,
    /// Measured data; synthetic data are generated when empty.
    pub data_csv: Vec<PathBuf>,
}

impl Default for CalibrationConfig {
    fn default() -> Self {
        Self { xi_mhz: vec![0.5, 1.0], noise_rel: 0.01, data_csv: Vec::new() }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub dir: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub network: NetworkConfig,
    #[serde(default)]
    pub drive: DriveConfig,
    pub qubits: QubitPair,
    #[serde(default = "default_true")]
    pub local_noise: bool,
    #[serde(default)]
    pub sweep: SweepConfig,
    #[serde(default)]
    pub tomography: TomographyConfig,
    #[serde(default)]
    pub calibration: CalibrationConfig,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output: OutputConfig,
}

fn default_true() -> bool {
    true
}

impl ExperimentConfig {
    /// Parses and validates. Errors carry line/column or the offending field.
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    /// SHA-256 of the canonical JSON serialisation.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serialises");
        hex::encode(Sha256::digest(canonical.as_bytes()))
    }

    pub fn qubit_specs(&self) -> [TransmonSpec; 2] {
        [self.qubits.a.to_spec(), self.qubits.b.to_spec()]
    }

    pub fn network_spec(&self) -> Result<NetworkSpec> {
        let q = self.qubit_specs();
        let rate = |given: Option<f64>, q: &TransmonSpec| match given {
            Some(g) => Ok(mhz(g)),
            None => q.waveguide_rate(),
        };
        Ok(NetworkSpec {
            gamma_a: rate(self.network.gamma_a_mhz, &q[0])?,
            gamma_b: rate(self.network.gamma_b_mhz, &q[1])?,
            eta: self.network.eta_squared.sqrt(),
            prop_phase: self.network.prop_phase_rad,
            n_levels: self.network.n_levels,
        })
    }

    pub fn drive_spec(&self) -> DriveSpec {
        self.drive.to_spec()
    }

    pub fn refine_rounds(&self) -> usize {
        self.sweep.refine_rounds.unwrap_or(3)
    }

    fn require<'a, T>(&self, value: &'a Option<T>, field: &str) -> Result<&'a T> {
        value
            .as_ref()
            .ok_or_else(|| Error::Config(format!("{field}: required for mode {}", self.mode.name())))
    }

    pub fn omega_grid(&self) -> Result<Vec<f64>> {
        Ok(self.require(&self.sweep.omega_a_mhz, "sweep.omega_A_MHz_over_2pi")?.values())
    }

    pub fn epsilon_grid(&self) -> Result<Vec<f64>> {
        Ok(self.require(&self.sweep.epsilon_mhz, "sweep.epsilon_MHz_over_2pi")?.values())
    }

    pub fn times(&self) -> Result<Vec<f64>> {
        Ok(self.require(&self.sweep.times_us, "sweep.times_us")?.values())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |field: &str, msg: &str| Err(Error::Config(format!("{field}: {msg}")));
        if !(0.0..=1.0).contains(&self.network.eta_squared) {
            return bad("network.eta_squared", "must lie in [0, 1]");
        }
        if !(2..=3).contains(&self.network.n_levels) {
            return bad("network.n_levels", "must be 2 or 3");
        }
        for (name, g) in [("gamma_A_MHz_over_2pi", self.network.gamma_a_mhz), ("gamma_B_MHz_over_2pi", self.network.gamma_b_mhz)] {
            if let Some(g) = g {
                if !(g > 0.0 && g.is_finite()) {
                    return bad(&format!("network.{name}"), "must be positive");
                }
            }
        }
        for (site, q) in [("A", &self.qubits.a), ("B", &self.qubits.b)] {
            for (name, v) in [("T1_ns", q.t1_ns), ("T1_intrinsic_us", q.t1_intrinsic_us), ("T2R_ns", q.t2r_ns)] {
                if !(v > 0.0 && v.is_finite()) {
                    return bad(&format!("qubits.{site}.{name}"), "must be positive");
                }
            }
            if !q.freq_ghz.is_finite() || !q.anharm_mhz.is_finite() {
                return bad(&format!("qubits.{site}"), "frequencies must be finite");
            }
        }
        self.network_spec().map_err(|e| Error::Config(format!("network: {e}")))?;
        self.drive_spec().validate().map_err(|e| Error::Config(format!("drive: {e}")))?;
        for q in self.qubit_specs() {
            q.dephasing_rate().map_err(|e| Error::Config(format!("qubits: {e}")))?;
        }

        let s = &self.sweep;
        let grids = [
            ("sweep.omega_A_MHz_over_2pi", &s.omega_a_mhz),
            ("sweep.epsilon_MHz_over_2pi", &s.epsilon_mhz),
            ("sweep.gamma_B_over_gamma_A", &s.gamma_ratios),
            ("sweep.times_us", &s.times_us),
            ("sweep.detuning_MHz_over_2pi", &s.detuning_mhz),
        ];
        for (name, g) in grids {
            if let Some(g) = g {
                g.check(name)?;
            }
        }
        if let Some(g) = &s.omega_a_mhz {
            if g.values().iter().any(|&w| w < 0.0) {
                return bad("sweep.omega_A_MHz_over_2pi", "drive amplitudes must be nonnegative");
            }
        }
        if let Some(g) = &s.gamma_ratios {
            if g.values().iter().any(|&r| !(r > 0.0)) {
                return bad("sweep.gamma_B_over_gamma_A", "ratios must be positive");
            }
        }
        if let Some(r) = &s.omega_ratios {
            if r.is_empty() || r.iter().any(|&x| !(x >= 0.0 && x.is_finite())) {
                return bad("sweep.omega_B_over_omega_A", "needs nonnegative finite ratios");
            }
        }
        if let Some(c) = &s.conditions {
            if c.is_empty() {
                return bad("sweep.conditions", "must not be empty");
            }
        }
        if let Some(t) = &s.times_us {
            let v = t.values();
            if v[0] < 0.0 || v.windows(2).any(|w| w[1] <= w[0]) {
                return bad("sweep.times_us", "must be nonnegative and strictly increasing");
            }
        }
        if let Some(d) = &s.detuning_mhz {
            if d.values().windows(2).any(|w| w[1] <= w[0]) {
                return bad("sweep.detuning_MHz_over_2pi", "must be strictly increasing");
            }
        }
        if let Some(sig) = self.tomography.noise_sigma {
            if !(sig > 0.0 && sig.is_finite()) {
                return bad("tomography.noise_sigma", "must be positive");
            }
        }
        if self.tomography.shots == Some(0) {
            return bad("tomography.shots", "must be positive");
        }
        if self.tomography.bootstrap_resamples < 2 {
            return bad("tomography.bootstrap_resamples", "must be at least 2");
        }
        if !(self.calibration.noise_rel >= 0.0 && self.calibration.noise_rel.is_finite()) {
            return bad("calibration.noise_rel", "must be nonnegative");
        }
        if self.calibration.xi_mhz.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
            return bad("calibration.xi_MHz_over_2pi", "drive amplitudes must be positive");
        }

        match self.mode {
            Mode::SweepRabi | Mode::FitLambda => {
                self.omega_grid()?;
            }
            Mode::SweepLandscape => {
                self.omega_grid()?;
                self.epsilon_grid()?;
            }
            Mode::SweepMismatch => {
                self.omega_grid()?;
                self.epsilon_grid()?;
                self.require(&s.gamma_ratios, "sweep.gamma_B_over_gamma_A")?;
            }
            Mode::Trajectory | Mode::SweepDuration | Mode::FitT1 => {
                self.times()?;
            }
            Mode::FitS21 => {
                self.require(&s.detuning_mhz, "sweep.detuning_MHz_over_2pi")?;
                if self.calibration.data_csv.is_empty() && self.calibration.xi_mhz.is_empty() {
                    return bad("calibration.xi_MHz_over_2pi", "needs at least one drive amplitude");
                }
            }
            Mode::Steady | Mode::TomographyDemo => {}
        }
        Ok(())
    }
}

/// Configuration with the measured device parameters, two-level model.
pub fn device_config(mode: Mode) -> ExperimentConfig {
    use crate::presets;
    let q = |spec: &TransmonSpec| QubitConfig {
        freq_ghz: spec.freq / ghz(1.0),
        anharm_mhz: presets::ANHARM_MHZ,
        t1_ns: spec.t1 * 1e3,
        t1_intrinsic_us: spec.t1_intrinsic,
        t2r_ns: spec.t2_ramsey * 1e3,
    };
    ExperimentConfig {
        mode,
        network: NetworkConfig {
            gamma_a_mhz: Some(presets::GAMMA_A_MHZ),
            gamma_b_mhz: Some(presets::GAMMA_B_MHZ),
            eta_squared: presets::ETA_SQUARED,
            prop_phase_rad: 0.0,
            n_levels: 2,
        },
        drive: DriveConfig::default(),
        qubits: QubitPair { a: q(&presets::qubit_a()), b: q(&presets::qubit_b()) },
        local_noise: true,
        sweep: SweepConfig::default(),
        tomography: TomographyConfig::default(),
        calibration: CalibrationConfig::default(),
        seed: 0,
        output: OutputConfig::default(),
    }
}
