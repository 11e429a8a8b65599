//! Lindblad master-equation engine.
//!
//! `dρ/dt = −i[H, ρ] + Σ_k (c_k ρ c_k† − ½{c_k†c_k, ρ})`, with ρ vectorised by
//! column stacking.

mod evolve;
mod noise;
mod steady;
mod trajectory;

pub use evolve::{evolve, evolve_exact, evolve_with, propagate, propagate_exact, EvolveOptions};
pub(crate) use evolve::integrate;
pub use noise::{attach_local_noise, stark_shift_term, upstream_perturbative_state};
pub use steady::{liouvillian_spectrum, steady_state, steady_state_with_tolerance};
pub use trajectory::{Trajectory, TRAJECTORY_COLUMNS};

use crate::error::{Error, Result};
use crate::linalg::{c, CMatrix, QOperator};

const HERMITIAN_TOL: f64 = 1e-10;

/// Hamiltonian plus collapse operators on a common space.
#[derive(Clone, Debug, PartialEq)]
pub struct LindbladModel {
    h: QOperator,
    collapse_ops: Vec<QOperator>,
}

impl LindbladModel {
    pub fn new(h: QOperator, collapse_ops: Vec<QOperator>) -> Result<Self> {
        if !h.is_hermitian(HERMITIAN_TOL) {
            return Err(Error::arg("model Hamiltonian is not Hermitian"));
        }
        if let Some(bad) = collapse_ops.iter().find(|op| op.dims() != h.dims()) {
            return Err(Error::arg(format!(
                "collapse operator dims {:?} differ from Hamiltonian dims {:?}",
                bad.dims(),
                h.dims()
            )));
        }
        Ok(Self { h, collapse_ops })
    }

    pub fn h(&self) -> &QOperator {
        &self.h
    }

    pub fn collapse_ops(&self) -> &[QOperator] {
        &self.collapse_ops
    }

    pub fn dims(&self) -> &[usize] {
        self.h.dims()
    }

    pub fn dim(&self) -> usize {
        self.h.dim()
    }

    pub fn with_hamiltonian(&self, h: QOperator) -> Result<Self> {
        Self::new(h, self.collapse_ops.clone())
    }

    pub fn with_collapse(&self, op: QOperator) -> Result<Self> {
        let mut ops = self.collapse_ops.clone();
        ops.push(op);
        Self::new(self.h.clone(), ops)
    }

    /// Adds a Hermitian term to the Hamiltonian.
    pub fn add_hamiltonian(&self, term: &QOperator) -> Result<Self> {
        Self::new(&self.h + term, self.collapse_ops.clone())
    }

    /// `H_eff = H − (i/2) Σ_k c_k†c_k`.
    pub fn effective_hamiltonian(&self) -> QOperator {
        let mut decay = QOperator::zeros(self.dims());
        for op in &self.collapse_ops {
            decay = &decay + &op.dagger().matmul(op);
        }
        &self.h + &decay.scale(c(0.0, -0.5))
    }

    /// Right-hand side of the master equation evaluated directly on matrices.
    pub fn rhs(&self, rho: &CMatrix) -> CMatrix {
        let h = self.h.data();
        let mut out = (h * rho - rho * h) * c(0.0, -1.0);
        for op in &self.collapse_ops {
            let l = op.data();
            let ld = l.adjoint();
            let ldl = &ld * l;
            out += l * rho * &ld - (&ldl * rho + rho * &ldl) * c(0.5, 0.0);
        }
        out
    }
}

/// Dense Liouvillian superoperator acting on column-stacked ρ.
pub fn liouvillian(model: &LindbladModel) -> CMatrix {
    let n = model.dim();
    let id = CMatrix::identity(n, n);
    let h = model.h().data();
    let mut l = (id.kronecker(h) - h.transpose().kronecker(&id)) * c(0.0, -1.0);
    for op in model.collapse_ops() {
        let cm = op.data();
        let cdc = cm.adjoint() * cm;
        l += cm.conjugate().kronecker(cm);
        l -= (id.kronecker(&cdc) + cdc.transpose().kronecker(&id)) * c(0.5, 0.0);
    }
    l
}

/// `H_eff = H − (i/2) Σ_k c_k†c_k`.
pub fn effective_hamiltonian(model: &LindbladModel) -> QOperator {
    model.effective_hamiltonian()
}
