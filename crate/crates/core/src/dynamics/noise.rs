use super::LindbladModel;
use crate::error::{Error, Result};
use crate::linalg::{c, cr, destroy, embed, number, sigma_z, CVector, QOperator, StateVector};
use crate::slh::TransmonSpec;

/// Adds intrinsic relaxation `√(1/T1_int) a` and pure dephasing per qubit.
///
/// Dephasing is `√(γ_φ/2) σz` on two levels and `√(2γ_φ) n̂` on three, with
/// `γ_φ = 1/T2R − 1/(2 T1)`. Both give the same 0–1 coherence decay rate.
pub fn attach_local_noise(model: &LindbladModel, qubits: &[TransmonSpec; 2]) -> Result<LindbladModel> {
    let dims = model.dims().to_vec();
    if dims.len() != 2 {
        return Err(Error::arg("local noise expects a two-transmon model"));
    }
    let mut out = model.clone();
    for (site, q) in qubits.iter().enumerate() {
        let n = dims[site];
        if q.t1_intrinsic <= 0.0 {
            return Err(Error::arg("intrinsic T1 must be positive"));
        }
        let gamma_phi = q.dephasing_rate()?;
        let relax = &destroy(n) * (1.0 / q.t1_intrinsic).sqrt();
        out = out.with_collapse(embed(&relax, site, &dims)?)?;
        if gamma_phi > 0.0 {
            let deph = if n == 2 {
                &sigma_z() * (gamma_phi / 2.0).sqrt()
            } else {
                &number(n) * (2.0 * gamma_phi).sqrt()
            };
            out = out.with_collapse(embed(&deph, site, &dims)?)?;
        }
    }
    Ok(out)
}

/// Drive-induced frequency shift `(λΩ²/δ) n̂` on an `n_levels` transmon.
pub fn stark_shift_term(lambda: f64, omega: f64, delta: f64, n_levels: usize) -> Result<QOperator> {
    if delta == 0.0 {
        return Err(Error::Singular("Stark shift needs a nonzero detuning".into()));
    }
    if n_levels < 2 {
        return Err(Error::arg("n_levels must be at least 2"));
    }
    Ok(&number(n_levels) * (lambda * omega * omega / delta))
}

/// Leading-order steady state when only the upstream qubit is driven on
/// resonance through a lossless link with equal decay rates:
/// `|00⟩ − i(Ω/γ)|10⟩ + i(2Ω/γ)|01⟩`, normalised.
pub fn upstream_perturbative_state(omega: f64, gamma: f64) -> Result<StateVector> {
    if gamma <= 0.0 || !gamma.is_finite() {
        return Err(Error::arg(format!("gamma must be positive, got {gamma}")));
    }
    let x = omega / gamma;
    if x.abs() > 0.1 {
        log::warn!("upstream perturbative state used outside its range: Ω/γ = {x}");
    }
    // Index = 2·a + b with qubit A major.
    let v = CVector::from_vec(vec![cr(1.0), c(0.0, 2.0 * x), c(0.0, -x), cr(0.0)]);
    StateVector::normalized(v, vec![2, 2])
}
