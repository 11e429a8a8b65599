//! SLH network components and the cascaded two-qubit model.
//!
//! A component is a triple `(S, L, H)`: a scalar scattering matrix, a vector
//! of coupling operators (one per port) and a Hamiltonian. Components are
//! chained with the series product `downstream ◁ upstream`.

use serde::{Deserialize, Serialize};

use crate::dynamics::{attach_local_noise, stark_shift_term, LindbladModel};
use crate::error::{Error, Result};
use crate::linalg::{c, cr, create, destroy, embed, number, sigma_x, sigma_z, CMatrix, QOperator, C64};

const TRIPLE_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct SLHTriple {
    s: CMatrix,
    l: Vec<QOperator>,
    h: QOperator,
}

impl SLHTriple {
    pub fn new(s: CMatrix, l: Vec<QOperator>, h: QOperator) -> Result<Self> {
        if !s.is_square() || s.nrows() != l.len() {
            return Err(Error::arg(format!(
                "scattering matrix {}x{} does not match {} coupling operators",
                s.nrows(),
                s.ncols(),
                l.len()
            )));
        }
        let unit_err = (s.adjoint() * &s - CMatrix::identity(s.nrows(), s.nrows())).camax();
        if unit_err > TRIPLE_TOL {
            return Err(Error::arg(format!("scattering matrix not unitary (error {unit_err:.3e})")));
        }
        if !h.is_hermitian(TRIPLE_TOL) {
            return Err(Error::arg("Hamiltonian is not Hermitian"));
        }
        if let Some(bad) = l.iter().find(|op| op.dims() != h.dims()) {
            return Err(Error::arg(format!(
                "coupling operator dims {:?} differ from Hamiltonian dims {:?}",
                bad.dims(),
                h.dims()
            )));
        }
        Ok(Self { s, l, h })
    }

    /// Passive component: `L = 0`, `H = 0`.
    pub fn passive(s: CMatrix, dims: &[usize]) -> Result<Self> {
        let n = s.nrows();
        Self::new(s, vec![QOperator::zeros(dims); n], QOperator::zeros(dims))
    }

    pub fn s(&self) -> &CMatrix {
        &self.s
    }

    pub fn l(&self) -> &[QOperator] {
        &self.l
    }

    pub fn h(&self) -> &QOperator {
        &self.h
    }

    pub fn ports(&self) -> usize {
        self.l.len()
    }

    pub fn dims(&self) -> &[usize] {
        self.h.dims()
    }

    /// Lifts every operator onto subsystem `site` of a composite space.
    pub fn embed(&self, site: usize, dims: &[usize]) -> Result<Self> {
        let l = self
            .l
            .iter()
            .map(|op| embed(op, site, dims))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            s: self.s.clone(),
            l,
            h: embed(&self.h, site, dims)?,
        })
    }

    /// Largest entrywise difference between two triples on the same space.
    pub fn max_abs_diff(&self, other: &SLHTriple) -> f64 {
        let ds = (&self.s - &other.s).camax();
        let dl = self
            .l
            .iter()
            .zip(&other.l)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max);
        ds.max(dl).max(self.h.max_abs_diff(&other.h))
    }

    /// Master equation generated by the triple; vanishing couplings are
    /// dropped.
    pub fn to_lindblad(&self) -> Result<LindbladModel> {
        let ops = self
            .l
            .iter()
            .filter(|op| op.data().camax() > 1e-14)
            .cloned()
            .collect();
        LindbladModel::new(self.h.clone(), ops)
    }
}

/// `downstream ◁ upstream`: `S = S₂S₁`, `L = L₂ + S₂L₁`,
/// `H = H₁ + H₂ + (L₂†S₂L₁ − L₁†S₂†L₂)/2i`.
pub fn series_product(downstream: &SLHTriple, upstream: &SLHTriple) -> Result<SLHTriple> {
    if downstream.ports() != upstream.ports() {
        return Err(Error::arg(format!(
            "series product port mismatch: {} vs {}",
            downstream.ports(),
            upstream.ports()
        )));
    }
    if downstream.dims() != upstream.dims() {
        return Err(Error::arg(format!(
            "series product dims mismatch: {:?} vs {:?}",
            downstream.dims(),
            upstream.dims()
        )));
    }
    let n = downstream.ports();
    let dims = downstream.dims();
    let s2 = &downstream.s;
    let s = s2 * &upstream.s;

    let mut s2l1 = vec![QOperator::zeros(dims); n];
    for (i, out) in s2l1.iter_mut().enumerate() {
        for j in 0..n {
            if s2[(i, j)] != cr(0.0) {
                *out = &*out + &upstream.l[j].scale(s2[(i, j)]);
            }
        }
    }
    let l: Vec<QOperator> = downstream
        .l
        .iter()
        .zip(&s2l1)
        .map(|(a, b)| a + b)
        .collect();

    let mut x = QOperator::zeros(dims);
    for (l2, sl1) in downstream.l.iter().zip(&s2l1) {
        x = &x + &l2.dagger().matmul(sl1);
    }
    // (X − X†)/2i
    let coupling = (&x - &x.dagger()).scale(c(0.0, -0.5));
    let h = &(&upstream.h + &downstream.h) + &coupling;
    SLHTriple::new(s, l, h.hermitian_part())
}

fn check_levels(n_levels: usize) -> Result<()> {
    if n_levels == 2 || n_levels == 3 {
        Ok(())
    } else {
        Err(Error::arg(format!("n_levels must be 2 or 3, got {n_levels}")))
    }
}

/// Driven qubit (or transmon) coupled to a two-port waveguide.
///
/// Two levels: `H = (δ/2)σz + (Ω/2)σx`. Three levels:
/// `H = δ n̂ + (α/2) a†a†aa + (Ω/2)(a + a†)`. `L = (√γ a, 0)`, `S = I`.
pub fn qubit_triple(
    gamma: f64,
    delta: f64,
    omega: f64,
    n_levels: usize,
    anharm: f64,
) -> Result<SLHTriple> {
    check_levels(n_levels)?;
    if gamma < 0.0 || !gamma.is_finite() {
        return Err(Error::arg(format!("decay rate must be nonnegative, got {gamma}")));
    }
    let a = destroy(n_levels);
    let ad = create(n_levels);
    let h = if n_levels == 2 {
        &(&sigma_z() * (0.5 * delta)) + &(&sigma_x() * (0.5 * omega))
    } else {
        let kerr = ad.matmul(&ad).matmul(&a).matmul(&a);
        let drive = &a + &ad;
        &(&(&number(n_levels) * delta) + &(&kerr * (0.5 * anharm))) + &(&drive * (0.5 * omega))
    };
    SLHTriple::new(
        CMatrix::identity(2, 2),
        vec![&a * gamma.sqrt(), QOperator::zeros(&[n_levels])],
        h,
    )
}

/// Lossy link: amplitude transmission `eta` on the through path, the rest
/// reflected into a loss port. `phase` multiplies the through path.
pub fn beam_splitter_triple(eta: f64, phase: f64, dims: &[usize]) -> Result<SLHTriple> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::arg(format!("eta must lie in [0, 1], got {eta}")));
    }
    let t = (1.0 - eta * eta).max(0.0).sqrt();
    let p = C64::from_polar(1.0, phase);
    let s = CMatrix::from_row_slice(2, 2, &[p * eta, p * (-t), cr(t), cr(eta)]);
    SLHTriple::passive(s, dims)
}

/// Link and coupling parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetworkSpec {
    /// Waveguide decay rate of qubit A, rad/µs.
    pub gamma_a: f64,
    pub gamma_b: f64,
    /// Amplitude transmission of the link.
    pub eta: f64,
    /// Propagation phase on the link, rad.
    pub prop_phase: f64,
    pub n_levels: usize,
}

impl NetworkSpec {
    pub fn validate(&self) -> Result<()> {
        check_levels(self.n_levels)?;
        for (name, g) in [("gamma_A", self.gamma_a), ("gamma_B", self.gamma_b)] {
            if g < 0.0 || !g.is_finite() {
                return Err(Error::arg(format!("{name} must be nonnegative, got {g}")));
            }
        }
        if !(0.0..=1.0).contains(&self.eta) {
            return Err(Error::arg(format!("eta must lie in [0, 1], got {}", self.eta)));
        }
        Ok(())
    }
}

/// Drive amplitudes and frequency, all angular (rad/µs).
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DriveSpec {
    pub omega_a: f64,
    pub omega_b: f64,
    /// Drive detuning from the midpoint of the two qubit frequencies.
    pub epsilon: f64,
    /// Phase of the downstream drive relative to the propagated field.
    pub phase_b: f64,
    pub lambda_a: f64,
    pub lambda_b: f64,
}

impl DriveSpec {
    pub fn validate(&self) -> Result<()> {
        if self.omega_a < 0.0 || self.omega_b < 0.0 {
            return Err(Error::arg("drive amplitudes must be nonnegative"));
        }
        let all = [self.omega_a, self.omega_b, self.epsilon, self.phase_b, self.lambda_a, self.lambda_b];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(Error::arg("drive parameters must be finite"));
        }
        Ok(())
    }
}

/// Transmon parameters. Frequencies rad/µs, times µs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransmonSpec {
    pub freq: f64,
    /// Anharmonicity (negative for a transmon).
    pub anharm: f64,
    /// Relaxation time with the waveguide connected.
    pub t1: f64,
    pub t1_intrinsic: f64,
    pub t2_ramsey: f64,
}

impl TransmonSpec {
    /// Waveguide decay rate `1/T1 − 1/T1_intrinsic`, so that attaching the
    /// intrinsic channel separately does not double count.
    pub fn waveguide_rate(&self) -> Result<f64> {
        if self.t1 <= 0.0 || self.t1_intrinsic <= 0.0 {
            return Err(Error::arg("relaxation times must be positive"));
        }
        let g = 1.0 / self.t1 - 1.0 / self.t1_intrinsic;
        if g < 0.0 {
            return Err(Error::arg("T1 exceeds the intrinsic T1"));
        }
        Ok(g)
    }

    /// Pure dephasing rate `1/T2R − 1/(2 T1)`.
    pub fn dephasing_rate(&self) -> Result<f64> {
        if self.t1 <= 0.0 || self.t2_ramsey <= 0.0 {
            return Err(Error::arg("T1 and T2R must be positive"));
        }
        let g = 1.0 / self.t2_ramsey - 0.5 / self.t1;
        if g < -1e-12 {
            return Err(Error::arg(format!(
                "T2R = {} exceeds 2·T1 = {}",
                self.t2_ramsey,
                2.0 * self.t1
            )));
        }
        Ok(g.max(0.0))
    }
}

/// Half the qubit-qubit detuning, `Δ = (ω_B − ω_A)/2`.
pub fn half_detuning(qubits: &[TransmonSpec; 2]) -> f64 {
    0.5 * (qubits[1].freq - qubits[0].freq)
}

/// Qubit detunings from the drive: `(Δ + ε, −(Δ − ε))`.
pub fn drive_frame_detunings(delta: f64, epsilon: f64) -> (f64, f64) {
    (delta + epsilon, -(delta - epsilon))
}

/// Cascaded model `B ◁ link ◁ A` in the frame rotating at the drive
/// frequency. Collapse operators are
/// `c₁ = η√γ_A a_A + e^{iφ}√γ_B a_B` (up to a global phase) and
/// `c₂ = √(1−η²)√γ_A a_A`. Stark terms `(λΩ²/δ) n̂` are added when `λ ≠ 0`.
pub fn build_cascaded_model(
    net: &NetworkSpec,
    drive: &DriveSpec,
    qubits: &[TransmonSpec; 2],
) -> Result<LindbladModel> {
    net.validate()?;
    drive.validate()?;
    let n = net.n_levels;
    let dims = [n, n];
    let delta = half_detuning(qubits);
    let (det_a, det_b) = drive_frame_detunings(delta, drive.epsilon);

    let qa = qubit_triple(net.gamma_a, det_a, drive.omega_a, n, qubits[0].anharm)?.embed(0, &dims)?;
    let qb = qubit_triple(net.gamma_b, det_b, drive.omega_b, n, qubits[1].anharm)?.embed(1, &dims)?;
    // Only the sum of propagation and drive phase is observable; it is put on
    // the through path of the link.
    let link = beam_splitter_triple(net.eta, -(net.prop_phase + drive.phase_b), &dims)?;
    let network = series_product(&qb, &series_product(&link, &qa)?)?;

    let mut h = network.h().clone();
    for (site, lambda, omega, det) in [
        (0, drive.lambda_a, drive.omega_a, det_a),
        (1, drive.lambda_b, drive.omega_b, det_b),
    ] {
        if lambda != 0.0 {
            let shift = stark_shift_term(lambda, omega, det, n)?;
            h = &h + &embed(&shift, site, &dims)?;
        }
    }
    let ops = network
        .l()
        .iter()
        .filter(|op| op.data().camax() > 1e-14)
        .cloned()
        .collect();
    LindbladModel::new(h, ops)
}

/// Cascaded model with optional intrinsic relaxation and dephasing of each
/// transmon.
pub fn build_device_model(
    net: &NetworkSpec,
    drive: &DriveSpec,
    qubits: &[TransmonSpec; 2],
    local_noise: bool,
) -> Result<LindbladModel> {
    let model = build_cascaded_model(net, drive, qubits)?;
    if local_noise {
        attach_local_noise(&model, qubits)
    } else {
        Ok(model)
    }
}
