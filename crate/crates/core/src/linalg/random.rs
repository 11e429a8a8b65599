//! Random states and unitaries for tests and demos.

use rand::Rng;
use rand_distr::StandardNormal;

use super::{c, CMatrix, CVector, DensityMatrix, QOperator, StateVector};

fn gaussian(rng: &mut impl Rng) -> f64 {
    rng.sample(StandardNormal)
}

/// Haar-random pure state.
pub fn random_state(dims: &[usize], rng: &mut impl Rng) -> StateVector {
    let n: usize = dims.iter().product();
    let v = CVector::from_fn(n, |_, _| c(gaussian(rng), gaussian(rng)));
    StateVector::normalized(v, dims.to_vec()).expect("nonzero gaussian vector")
}

/// Density matrix `G G† / Tr(G G†)` with `G` a complex Ginibre matrix of
/// `rank` columns.
pub fn random_density(dims: &[usize], rank: usize, rng: &mut impl Rng) -> DensityMatrix {
    let n: usize = dims.iter().product();
    let g = CMatrix::from_fn(n, rank.max(1), |_, _| c(gaussian(rng), gaussian(rng)));
    DensityMatrix::from_matrix(&g * g.adjoint(), dims.to_vec()).expect("positive definite sample")
}

/// Haar-random unitary from the QR decomposition of a Ginibre matrix.
pub fn random_unitary(n: usize, rng: &mut impl Rng) -> QOperator {
    let g = CMatrix::from_fn(n, n, |_, _| c(gaussian(rng), gaussian(rng)));
    let qr = g.qr();
    let (mut q, r) = qr.unpack();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    QOperator::single(q).expect("square")
}
