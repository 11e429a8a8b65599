use std::f64::consts::{FRAC_PI_2, PI};

use super::{Axis, AxisPovm, DetectorModel};
use crate::dynamics::{integrate, liouvillian, EvolveOptions, LindbladModel};
use crate::error::{Error, Result};
use crate::linalg::{
    c, cr, destroy, hermitian_part, number, sigma_z, unvectorize, vectorize, CMatrix, CVector,
    DensityMatrix, QOperator,
};
use crate::slh::TransmonSpec;
use crate::units::ns;

/// Drive quadrature of a pulse.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PulseAxis {
    X,
    Y,
    Idle,
}

/// Single-period `sin²` envelope, `Ω(t) = A sin²(πt/T)` with `A = 2θ/T`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PulseSpec {
    /// µs.
    pub duration: f64,
    pub axis: PulseAxis,
    /// Target rotation angle (rad).
    pub angle: f64,
    pub drag_coefficient: f64,
}

impl PulseSpec {
    pub const STANDARD_NS: f64 = 16.0;

    pub fn new(axis: PulseAxis, angle: f64, duration: f64) -> Result<Self> {
        let p = Self { duration, axis, angle, drag_coefficient: 0.0 };
        p.validate()?;
        Ok(p)
    }

    /// 16 ns rotation.
    pub fn rotation(axis: PulseAxis, angle: f64) -> Self {
        Self { duration: ns(Self::STANDARD_NS), axis, angle, drag_coefficient: 0.0 }
    }

    pub fn idle() -> Self {
        Self::rotation(PulseAxis::Idle, 0.0)
    }

    pub fn with_drag(mut self, coefficient: f64) -> Self {
        self.drag_coefficient = coefficient;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.duration > 0.0 && self.duration.is_finite()) {
            return Err(Error::arg(format!("pulse duration must be positive, got {}", self.duration)));
        }
        if !self.angle.is_finite() || !self.drag_coefficient.is_finite() {
            return Err(Error::arg("pulse angle and DRAG coefficient must be finite"));
        }
        Ok(())
    }

    pub fn amplitude(&self) -> f64 {
        match self.axis {
            PulseAxis::Idle => 0.0,
            _ => 2.0 * self.angle / self.duration,
        }
    }

    pub fn envelope(&self, t: f64) -> f64 {
        self.amplitude() * (PI * t / self.duration).sin().powi(2)
    }

    pub fn envelope_derivative(&self, t: f64) -> f64 {
        self.amplitude() * (PI / self.duration) * (2.0 * PI * t / self.duration).sin()
    }
}

/// Free transmon in its own rotating frame with T1 and pure dephasing.
fn free_model(qubit: &TransmonSpec, n: usize) -> Result<LindbladModel> {
    let a = destroy(n);
    let ad = a.dagger();
    let kerr = ad.matmul(&ad).matmul(&a).matmul(&a);
    let h = &kerr * (qubit.anharm / 2.0);
    let mut ops = Vec::new();
    if qubit.t1.is_finite() {
        if qubit.t1 <= 0.0 {
            return Err(Error::arg("T1 must be positive"));
        }
        ops.push(&a * (1.0 / qubit.t1).sqrt());
    }
    let gamma_phi = qubit.dephasing_rate()?;
    if gamma_phi > 0.0 {
        ops.push(if n == 2 {
            &sigma_z() * (gamma_phi / 2.0).sqrt()
        } else {
            &number(n) * (2.0 * gamma_phi).sqrt()
        });
    }
    LindbladModel::new(h, ops)
}

fn drive_generators(n: usize) -> Result<(CMatrix, CMatrix)> {
    let a = destroy(n);
    let ad = a.dagger();
    let hx = &(&a + &ad) * 0.5;
    let hy = (&a - &ad).scale(c(0.0, 0.5));
    let lx = liouvillian(&LindbladModel::new(hx, vec![])?);
    let ly = liouvillian(&LindbladModel::new(hy, vec![])?);
    Ok((lx, ly))
}

/// Propagates a vectorised operator on an `n`-level transmon through `pulse`.
fn propagate_vec(pulse: &PulseSpec, qubit: &TransmonSpec, n: usize, v: &CVector) -> Result<CVector> {
    pulse.validate()?;
    if pulse.drag_coefficient != 0.0 && qubit.anharm == 0.0 {
        return Err(Error::arg("DRAG correction needs a nonzero anharmonicity"));
    }
    let l0 = liouvillian(&free_model(qubit, n)?);
    let (lx, ly) = drive_generators(n)?;
    let drag = |t: f64| {
        if pulse.drag_coefficient == 0.0 {
            0.0
        } else {
            pulse.drag_coefficient * pulse.envelope_derivative(t) / qubit.anharm
        }
    };
    let rhs = |t: f64, y: &CVector| -> CVector {
        let mut out = &l0 * y;
        let (fx, fy) = match pulse.axis {
            PulseAxis::X => (pulse.envelope(t), drag(t)),
            PulseAxis::Y => (-drag(t), pulse.envelope(t)),
            PulseAxis::Idle => (0.0, 0.0),
        };
        if fx != 0.0 {
            out += &lx * y * cr(fx);
        }
        if fy != 0.0 {
            out += &ly * y * cr(fy);
        }
        out
    };
    let scale = pulse.amplitude().abs() + qubit.anharm.abs() + 1.0 / pulse.duration;
    integrate(&rhs, v, 0.0, pulse.duration, scale, EvolveOptions::default()).map_err(|e| {
        Error::Solver(format!("pulse {:?} θ = {:.4} failed: {e}", pulse.axis, pulse.angle))
    })
}

/// Time-ordered Lindblad propagation of a single transmon through one pulse.
pub fn simulate_pulse(rho0: &DensityMatrix, pulse: &PulseSpec, qubit: &TransmonSpec) -> Result<DensityMatrix> {
    if rho0.dims().len() != 1 || rho0.dim() < 2 {
        return Err(Error::arg(format!("expected a single transmon state, got dims {:?}", rho0.dims())));
    }
    let n = rho0.dim();
    let y = propagate_vec(pulse, qubit, n, &vectorize(rho0.data()))?;
    let m = hermitian_part(&unvectorize(&y, n));
    let tr = m.trace().re;
    if (tr - 1.0).abs() > 1e-8 {
        return Err(Error::Solver(format!("pulse {:?}: trace drifted to {tr}", pulse.axis)));
    }
    let op = QOperator::new(m / cr(tr), vec![n])?;
    DensityMatrix::with_tolerance(op, EvolveOptions::default().state_tol)
}

fn simulate_sequence(rho0: &DensityMatrix, pulses: &[PulseSpec], qubit: &TransmonSpec) -> Result<DensityMatrix> {
    pulses.iter().try_fold(rho0.clone(), |rho, p| simulate_pulse(&rho, p, qubit))
}

/// Renormalised `{0, 1}` block of a single transmon state.
pub fn qubit_block(rho: &DensityMatrix) -> Result<DensityMatrix> {
    if rho.dims().len() != 1 || rho.dim() < 2 {
        return Err(Error::arg(format!("expected a single transmon state, got dims {:?}", rho.dims())));
    }
    let block = rho.data().view((0, 0), (2, 2)).into_owned();
    if block.trace().re < 1e-12 {
        return Err(Error::arg("state has no weight in the qubit subspace"));
    }
    DensityMatrix::from_matrix(block, vec![2])
}

pub const CARDINAL_LABELS: [&str; 6] = ["-z", "+z", "+x", "-x", "+y", "-y"];

fn cardinal_pulse(index: usize) -> Option<PulseSpec> {
    // R_y(π/2)|0⟩ points along −x and R_x(π/2)|0⟩ along +y.
    match index {
        0 => None,
        1 => Some(PulseSpec::rotation(PulseAxis::X, PI)),
        2 => Some(PulseSpec::rotation(PulseAxis::Y, -FRAC_PI_2)),
        3 => Some(PulseSpec::rotation(PulseAxis::Y, FRAC_PI_2)),
        4 => Some(PulseSpec::rotation(PulseAxis::X, FRAC_PI_2)),
        _ => Some(PulseSpec::rotation(PulseAxis::X, -FRAC_PI_2)),
    }
}

/// The six cardinal states on a three-level transmon, ordered as
/// [`CARDINAL_LABELS`].
pub fn prepare_cardinal_states(qubit: &TransmonSpec) -> Result<Vec<DensityMatrix>> {
    let ground = DensityMatrix::basis(&[3], &[0])?;
    (0..6)
        .map(|k| match cardinal_pulse(k) {
            None => Ok(ground.clone()),
            Some(p) => simulate_pulse(&ground, &p, qubit),
        })
        .collect()
}

/// Pre-rotation for a measurement axis. `E` is the projector onto the
/// negative eigenstate of the matching Pauli operator.
pub fn measurement_pulse(axis: Axis) -> PulseSpec {
    match axis {
        Axis::X => PulseSpec::rotation(PulseAxis::Y, -FRAC_PI_2),
        Axis::Y => PulseSpec::rotation(PulseAxis::X, FRAC_PI_2),
        Axis::Z => PulseSpec::idle(),
    }
}

/// Detector whose POVM elements are the Heisenberg images of the ground-state
/// projector under the noisy three-level pre-rotations.
pub fn physical_detector(qubit: &TransmonSpec, alpha: f64, beta: f64) -> Result<DetectorModel> {
    let n = 3;
    let mut axes = Vec::with_capacity(3);
    for axis in Axis::ALL {
        let pulse = measurement_pulse(axis);
        let mut e = CMatrix::zeros(2, 2);
        for j in 0..2 {
            for k in 0..2 {
                let mut m = CMatrix::zeros(n, n);
                m[(j, k)] = cr(1.0);
                let out = propagate_vec(&pulse, qubit, n, &vectorize(&m))?;
                e[(k, j)] = out[0];
            }
        }
        axes.push(AxisPovm::new(QOperator::single(hermitian_part(&e))?, alpha, beta)?);
    }
    DetectorModel::new(axes.try_into().expect("three axes"))
}

/// Expectation values of each measurement axis for a list of qubit states.
pub fn cardinal_expectations(states: &[DensityMatrix], detector: &DetectorModel) -> Result<Vec<[f64; 3]>> {
    states.iter().map(|s| detector.single_expectations(&qubit_block(s)?)).collect()
}

/// Standard AllXY pulse pairs. Upper case is π, lower case π/2, `I` idle.
pub const ALLXY_SEQUENCE: [&str; 21] = [
    "II", "XX", "YY", "XY", "YX", "xI", "yI", "xy", "yx", "xY", "yX", "Xy", "Yx", "xX", "Xx", "yY",
    "Yy", "XI", "YI", "xx", "yy",
];

fn allxy_pulse(ch: char) -> PulseSpec {
    match ch {
        'X' => PulseSpec::rotation(PulseAxis::X, PI),
        'Y' => PulseSpec::rotation(PulseAxis::Y, PI),
        'x' => PulseSpec::rotation(PulseAxis::X, FRAC_PI_2),
        'y' => PulseSpec::rotation(PulseAxis::Y, FRAC_PI_2),
        _ => PulseSpec::idle(),
    }
}

/// `⟨σz⟩` (ground = −1) after each AllXY pair on a three-level transmon.
pub fn allxy_diagnostic(qubit: &TransmonSpec) -> Result<[f64; 21]> {
    let ground = DensityMatrix::basis(&[3], &[0])?;
    let mut out = [0.0; 21];
    for (slot, pair) in out.iter_mut().zip(ALLXY_SEQUENCE) {
        let pulses: Vec<PulseSpec> = pair.chars().map(allxy_pulse).collect();
        let rho = simulate_sequence(&ground, &pulses, qubit)?;
        *slot = rho.population(1) - rho.population(0);
    }
    Ok(out)
}
