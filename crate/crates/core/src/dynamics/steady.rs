use super::{liouvillian, LindbladModel};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_part, unvectorize, CMatrix, CVector, DensityMatrix, QOperator, C64};

/// Singular values below this fraction of the largest count as zero.
const NULL_GAP: f64 = 1e-8;

/// Unique stationary state of the model.
pub fn steady_state(model: &LindbladModel) -> Result<DensityMatrix> {
    steady_state_with_tolerance(model, 1e-9)
}

/// As [`steady_state`], validating positivity with `tol`.
pub fn steady_state_with_tolerance(model: &LindbladModel, tol: f64) -> Result<DensityMatrix> {
    let n = model.dim();
    let l = liouvillian(model);
    check_null_space(&l)?;

    // Replace the first row with the trace functional Σ_i ρ_ii = 1.
    let mut a = l;
    for col in 0..n * n {
        a[(0, col)] = C64::new(0.0, 0.0);
    }
    for i in 0..n {
        a[(0, i * n + i)] = C64::new(1.0, 0.0);
    }
    let mut b = CVector::zeros(n * n);
    b[0] = C64::new(1.0, 0.0);
    let x = a
        .lu()
        .solve(&b)
        .ok_or_else(|| Error::Solver("steady-state linear system is singular".into()))?;
    if x.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Solver("steady-state solve produced non-finite values".into()));
    }
    let mut rho = hermitian_part(&unvectorize(&x, n));
    let tr = rho.trace();
    rho /= tr;
    let op = QOperator::new(rho, model.dims().to_vec())?;
    DensityMatrix::with_tolerance(op, tol).map_err(|e| Error::Solver(format!("steady state is unphysical: {e}")))
}

fn check_null_space(l: &CMatrix) -> Result<()> {
    let sv = l.singular_values();
    let mut vals: Vec<f64> = sv.iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    let smax = *vals.last().unwrap_or(&0.0);
    if smax == 0.0 {
        return Err(Error::Degenerate {
            nullity: vals.len(),
            singular_values: vals.iter().take(4).copied().collect(),
        });
    }
    let nullity = vals.iter().filter(|&&s| s <= NULL_GAP * smax).count();
    if nullity > 1 {
        return Err(Error::Degenerate {
            nullity,
            singular_values: vals.iter().take(nullity + 1).copied().collect(),
        });
    }
    Ok(())
}

/// Eigenvalues of the Liouvillian (unsorted).
pub fn liouvillian_spectrum(model: &LindbladModel) -> Vec<C64> {
    complex_eigenvalues(&liouvillian(model))
}

/// General complex eigenvalues via the Schur form.
fn complex_eigenvalues(m: &CMatrix) -> Vec<C64> {
    let schur = m.clone().schur();
    let (_, t) = schur.unpack();
    (0..t.nrows()).map(|i| t[(i, i)]).collect()
}
