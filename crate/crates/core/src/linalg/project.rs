use super::{eigh, hermitian_part, reconstruct, CMatrix, DensityMatrix, QOperator};
use crate::error::{Error, Result};

/// Euclidean projection of `v` onto the probability simplex.
pub fn project_to_simplex(v: &[f64]) -> Vec<f64> {
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (k, &u) in sorted.iter().enumerate() {
        cumsum += u;
        let t = (cumsum - 1.0) / (k as f64 + 1.0);
        if u - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|&x| (x - theta).max(0.0)).collect()
}

/// Nearest density matrix in Frobenius norm: take the Hermitian part, then
/// project its spectrum onto the simplex.
pub fn project_to_physical(m: &CMatrix, dims: &[usize]) -> Result<DensityMatrix> {
    if !m.is_square() {
        return Err(Error::arg(format!(
            "project_to_physical: non-square {}x{} input",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::arg("project_to_physical: non-finite entries"));
    }
    let (vals, vecs) = eigh(&hermitian_part(m));
    let p = project_to_simplex(&vals);
    let out = reconstruct(&p, &vecs);
    let out = hermitian_part(&out);
    DensityMatrix::new(QOperator::new(out, dims.to_vec())?)
}
