//! Entanglement measures, analytic dark states and drive-symmetry conditions.

use nalgebra::Matrix2;

use crate::error::{Error, Result};
use crate::linalg::{
    c, cr, embed, partial_trace, sigma_minus, sigma_plus, sigma_y, sigma_z, sqrt_psd,
    tensor, CMatrix, CVector, DensityMatrix, QOperator, StateVector,
};
use crate::slh::{DriveSpec, NetworkSpec};

/// Restricts a two-transmon state to the `{0,1}⊗{0,1}` block.
///
/// Returns the renormalised qubit state and the population outside it.
pub fn qubit_subspace(rho: &DensityMatrix) -> Result<(DensityMatrix, f64)> {
    let dims = rho.dims();
    if dims.len() != 2 {
        return Err(Error::arg(format!("expected a two-subsystem state, got dims {dims:?}")));
    }
    if dims == [2, 2] {
        return Ok((rho.clone(), 0.0));
    }
    let nb = dims[1];
    let idx = [0, 1, nb, nb + 1];
    let block = CMatrix::from_fn(4, 4, |r, k| rho.data()[(idx[r], idx[k])]);
    let tr = block.trace().re;
    if tr < 1e-12 {
        return Err(Error::arg("state has no weight in the qubit subspace"));
    }
    let leakage = (1.0 - tr).max(0.0);
    let q = DensityMatrix::from_matrix(block, vec![2, 2])?;
    Ok((q, leakage))
}

/// Wootters concurrence. Larger transmon spaces are first projected onto the
/// qubit subspace and renormalised.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    let (q, _) = qubit_subspace(rho)?;
    let yy = tensor(&sigma_y(), &sigma_y());
    let r = q.data();
    let s = sqrt_psd(r);
    let s_flip = yy.data() * s.conjugate() * yy.data();
    let mut lam: Vec<f64> = (&s * s_flip).singular_values().iter().copied().collect();
    lam.sort_by(|a, b| b.total_cmp(a));
    Ok((lam[0] - lam[1] - lam[2] - lam[3]).max(0.0))
}

/// `√(2(1 − Tr ρ_A²))`, exact for pure states only.
pub fn concurrence_pure_formula(rho: &DensityMatrix) -> Result<f64> {
    let (q, _) = qubit_subspace(rho)?;
    let ra = partial_trace(&q, &[0])?;
    Ok((2.0 * (1.0 - ra.purity())).max(0.0).sqrt())
}

/// Uhlmann fidelity `(Tr √(√ρ σ √ρ))²`.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dims() != sigma.dims() {
        return Err(Error::arg(format!(
            "fidelity: dims {:?} vs {:?}",
            rho.dims(),
            sigma.dims()
        )));
    }
    let m = sqrt_psd(rho.data()) * sqrt_psd(sigma.data());
    let tr: f64 = m.singular_values().iter().sum();
    Ok((tr * tr).min(1.0))
}

/// Singlet `(|01⟩ − |10⟩)/√2`.
pub fn singlet() -> StateVector {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    StateVector::new(CVector::from_vec(vec![cr(0.0), cr(h), cr(-h), cr(0.0)]), vec![2, 2])
        .expect("unit norm")
}

/// Dark state of the symmetric lossless cascade:
/// `|00⟩ + [√2Ω/(2Δ − iγ)]|S⟩`, normalised.
pub fn cqa_dark_state(omega: f64, delta: f64, gamma: f64) -> Result<StateVector> {
    if omega == 0.0 && delta == 0.0 && gamma == 0.0 {
        return Err(Error::arg("cqa_dark_state: all parameters are zero"));
    }
    let den = c(2.0 * delta, -gamma);
    if den.norm() == 0.0 {
        return Ok(singlet());
    }
    let coef = cr(2f64.sqrt() * omega) / den;
    let s = singlet();
    let mut v = CVector::zeros(4);
    v[0] = cr(1.0);
    v += s.data() * coef;
    StateVector::normalized(v, vec![2, 2])
}

/// Drive parameters that match the synthetic squeezing of both dissipators.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OptimalDrive {
    pub omega_b_opt: f64,
    pub epsilon_opt: f64,
}

/// `Ω_B = Ω_A √(γ_A/γ_B)`, `ε = (Ω_B² − Ω_A²)/(4Δ)`.
pub fn optimal_drive_conditions(gamma_a: f64, gamma_b: f64, omega_a: f64, delta: f64) -> Result<OptimalDrive> {
    if gamma_a <= 0.0 || gamma_b <= 0.0 {
        return Err(Error::arg("decay rates must be positive"));
    }
    if delta == 0.0 {
        return Err(Error::Singular("optimal detuning needs Δ ≠ 0".into()));
    }
    let omega_b_opt = omega_a * (gamma_a / gamma_b).sqrt();
    let epsilon_opt = (omega_b_opt * omega_b_opt - omega_a * omega_a) / (4.0 * delta);
    Ok(OptimalDrive {
        omega_b_opt,
        epsilon_opt,
    })
}

/// Each qubit rotated into the eigenbasis of its driven Hamiltonian.
///
/// With `U = R_y(θ_A) ⊗ R_y(−θ_B)` the lab-frame coupling `√γ_A σ−_A + √γ_B σ−_B`
/// becomes `½(L₋ + L₊ + L_z)` and the local Hamiltonians become
/// `(Δ̃_A/2)τz_A − (Δ̃_B/2)τz_B`.
#[derive(Clone, Debug)]
pub struct RotatedFrame {
    pub theta_a: f64,
    pub theta_b: f64,
    pub delta_tilde_a: f64,
    pub delta_tilde_b: f64,
    /// Squeezing parameter from `tanh r = √γ_B(1 − cos θ_B)/(√γ_A(1 + cos θ_A))`.
    pub r: f64,
    /// The second expression `√γ_A(1 − cos θ_A)/(√γ_B(1 + cos θ_B))`.
    pub tanh_r_alt: f64,
    pub l_minus: QOperator,
    pub l_plus: QOperator,
    pub l_z: QOperator,
    pub gamma_tilde_minus: f64,
    pub gamma_tilde_plus: f64,
    gamma_a: f64,
}

impl RotatedFrame {
    pub fn tanh_r(&self) -> f64 {
        self.r.tanh()
    }

    /// Difference of the two `tanh r` expressions.
    pub fn squeezing_mismatch(&self) -> f64 {
        (self.r.tanh() - self.tanh_r_alt).abs()
    }

    /// Prefactor `cos θ_A − cos θ_B` of the residual exchange term.
    pub fn h_diss_prefactor(&self) -> f64 {
        self.theta_a.cos() - self.theta_b.cos()
    }

    /// `(Δ̃_A/2)τz_A − (Δ̃_B/2)τz_B`.
    pub fn local_hamiltonian(&self) -> QOperator {
        let za = embed(&sigma_z(), 0, &[2, 2]).expect("valid site");
        let zb = embed(&sigma_z(), 1, &[2, 2]).expect("valid site");
        &(&za * (0.5 * self.delta_tilde_a)) - &(&zb * (0.5 * self.delta_tilde_b))
    }

    /// Normalised dissipators `√γ̃₋(cosh r τ−_A − sinh r τ+_B)`,
    /// `√γ̃₊(cosh r τ−_B − sinh r τ+_A)` and `√γ_A sin θ_A (τz_A − τz_B)`.
    /// Only defined when both squeezing expressions agree.
    pub fn normalized_dissipators(&self) -> Result<[QOperator; 3]> {
        if self.squeezing_mismatch() > 1e-8 {
            return Err(Error::arg(format!(
                "squeezing strengths differ by {:.3e}; drive is not at the optimum",
                self.squeezing_mismatch()
            )));
        }
        let (ch, sh) = (self.r.cosh(), self.r.sinh());
        let d = [2, 2];
        let sm = |s| embed(&sigma_minus(), s, &d).expect("valid site");
        let sp = |s| embed(&sigma_plus(), s, &d).expect("valid site");
        let sz = |s| embed(&sigma_z(), s, &d).expect("valid site");
        let lm = &(&(&sm(0) * ch) - &(&sp(1) * sh)) * self.gamma_tilde_minus.max(0.0).sqrt();
        let lp = &(&(&sm(1) * ch) - &(&sp(0) * sh)) * self.gamma_tilde_plus.max(0.0).sqrt();
        let lz = &(&sz(0) - &sz(1)) * (self.gamma_a.sqrt() * self.theta_a.sin());
        Ok([lm, lp, lz])
    }

    pub fn tms_state(&self) -> StateVector {
        tms_dark_state(self.r).expect("finite r")
    }
}

/// Rotating-frame dissipators for a two-level network.
pub fn rotated_frame_dissipators(net: &NetworkSpec, drive: &DriveSpec, delta: f64) -> Result<RotatedFrame> {
    let (ga, gb) = (net.gamma_a, net.gamma_b);
    if ga < 0.0 || gb < 0.0 {
        return Err(Error::arg("decay rates must be nonnegative"));
    }
    let xa = delta + drive.epsilon;
    let xb = delta - drive.epsilon;
    let dta = drive.omega_a.hypot(xa);
    let dtb = drive.omega_b.hypot(xb);
    if dta == 0.0 || dtb == 0.0 {
        return Err(Error::Singular("rotated-frame splitting Δ̃ is zero".into()));
    }
    let theta_a = drive.omega_a.atan2(xa);
    let theta_b = drive.omega_b.atan2(xb);
    let (ca, sa) = (xa / dta, drive.omega_a / dta);
    let (cb, sb) = (xb / dtb, drive.omega_b / dtb);

    let d = [2, 2];
    let sm = |s| embed(&sigma_minus(), s, &d).expect("valid site");
    let sp = |s| embed(&sigma_plus(), s, &d).expect("valid site");
    let sz = |s| embed(&sigma_z(), s, &d).expect("valid site");
    let (rga, rgb) = (ga.sqrt(), gb.sqrt());
    let l_minus = &(&sm(0) * (rga * (ca + 1.0))) + &(&sp(1) * (rgb * (cb - 1.0)));
    let l_plus = &(&sm(1) * (rgb * (cb + 1.0))) + &(&sp(0) * (rga * (ca - 1.0)));
    let l_z = &(&sz(0) * (rga * sa)) - &(&sz(1) * (rgb * sb));

    let tanh_r = if rga * (1.0 + ca) > 0.0 { rgb * (1.0 - cb) / (rga * (1.0 + ca)) } else { f64::INFINITY };
    let tanh_r_alt = if rgb * (1.0 + cb) > 0.0 { rga * (1.0 - ca) / (rgb * (1.0 + cb)) } else { f64::INFINITY };
    let r = if tanh_r < 1.0 { tanh_r.atanh() } else { f64::INFINITY };
    let gamma_tilde_minus = 2.0 * ga * (1.0 + ca) / (1.0 + cb) * (ca + cb);
    let gamma_tilde_plus = 2.0 * gb * (1.0 + cb) / (1.0 + ca) * (ca + cb);

    Ok(RotatedFrame {
        theta_a,
        theta_b,
        delta_tilde_a: dta,
        delta_tilde_b: dtb,
        r,
        tanh_r_alt,
        l_minus,
        l_plus,
        l_z,
        gamma_tilde_minus,
        gamma_tilde_plus,
        gamma_a: ga,
    })
}

/// `(cosh r|00⟩ + sinh r|11⟩)/√(cosh 2r)`.
pub fn tms_dark_state(r: f64) -> Result<StateVector> {
    if !r.is_finite() {
        return Err(Error::arg("squeezing parameter must be finite"));
    }
    // Divide by cosh r first so large r does not overflow.
    let t = r.tanh();
    let v = CVector::from_vec(vec![cr(1.0), cr(0.0), cr(0.0), cr(t)]);
    StateVector::normalized(v, vec![2, 2])
}

/// `max_k ‖op_k ψ‖`.
pub fn dark_residual(ops: &[QOperator], psi: &StateVector) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for op in ops {
        worst = worst.max(op.apply(psi)?.norm());
    }
    Ok(worst)
}

/// Single-qubit rotation `exp(−iθ n·σ/2)` about a real unit axis.
pub fn rotation(axis: [f64; 3], theta: f64) -> QOperator {
    let n = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
    let (x, y, z) = (axis[0] / n, axis[1] / n, axis[2] / n);
    let (ch, sh) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    // n·σ with σy = [[0, i], [−i, 0]] and σz = diag(−1, 1).
    let ns = Matrix2::new(cr(-z), c(x, y), c(x, -y), cr(z));
    let m = Matrix2::identity() * cr(ch) - ns * c(0.0, sh);
    let data = CMatrix::from_iterator(2, 2, m.iter().copied());
    QOperator::single(data).expect("2x2")
}

/// Local unitary `U_A ⊗ U_B`.
pub fn local_unitary(ua: &QOperator, ub: &QOperator) -> QOperator {
    tensor(ua, ub)
}

#[cfg(test)]
#[path = "entanglement_tests.rs"]
mod tests;
