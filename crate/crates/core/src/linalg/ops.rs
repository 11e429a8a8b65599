//! Standard single-subsystem operators.

use super::{c, cr, CMatrix, QOperator};

fn q(data: CMatrix) -> QOperator {
    QOperator::single(data).expect("standard operators are square with side >= 2")
}

pub fn identity(n: usize) -> QOperator {
    QOperator::identity(&[n])
}

/// `[[0, 1], [1, 0]]`.
pub fn sigma_x() -> QOperator {
    q(CMatrix::from_row_slice(2, 2, &[cr(0.0), cr(1.0), cr(1.0), cr(0.0)]))
}

/// `[[0, i], [−i, 0]]`, so that `σx σy = i σz` with `σz = diag(−1, 1)`.
pub fn sigma_y() -> QOperator {
    q(CMatrix::from_row_slice(
        2,
        2,
        &[cr(0.0), c(0.0, 1.0), c(0.0, -1.0), cr(0.0)],
    ))
}

/// `diag(−1, +1)`: ground state has eigenvalue −1.
pub fn sigma_z() -> QOperator {
    q(CMatrix::from_row_slice(2, 2, &[cr(-1.0), cr(0.0), cr(0.0), cr(1.0)]))
}

/// `σ− = |0⟩⟨1|`.
pub fn sigma_minus() -> QOperator {
    destroy(2)
}

/// `σ+ = |1⟩⟨0|`.
pub fn sigma_plus() -> QOperator {
    create(2)
}

/// Truncated annihilation operator on `n` levels.
pub fn destroy(n: usize) -> QOperator {
    let mut m = CMatrix::zeros(n, n);
    for k in 1..n {
        m[(k - 1, k)] = cr((k as f64).sqrt());
    }
    q(m)
}

pub fn create(n: usize) -> QOperator {
    destroy(n).dagger()
}

/// Number operator `a†a`; equals `(σz + 1)/2` for two levels.
pub fn number(n: usize) -> QOperator {
    let mut m = CMatrix::zeros(n, n);
    for k in 0..n {
        m[(k, k)] = cr(k as f64);
    }
    q(m)
}

/// Projector `|k⟩⟨k|` on `n` levels.
pub fn projector(n: usize, k: usize) -> QOperator {
    let mut m = CMatrix::zeros(n, n);
    m[(k, k)] = cr(1.0);
    q(m)
}

/// Pauli operator by label: `'I'`, `'X'`, `'Y'`, `'Z'`.
pub fn pauli(label: char) -> Option<QOperator> {
    match label {
        'I' => Some(identity(2)),
        'X' => Some(sigma_x()),
        'Y' => Some(sigma_y()),
        'Z' => Some(sigma_z()),
        _ => None,
    }
}
