//! Complex dense linear algebra with subsystem structure.
//!
//! Operators carry the list of subsystem dimensions they act on. Composite
//! indices are ordered with the leftmost subsystem slowest-varying, so
//! `tensor(a, b)` is the ordinary Kronecker product `a ⊗ b`.
//!
//! Qubit basis: `|0⟩` is the ground state and `σz|0⟩ = −|0⟩`, `σz|1⟩ = +|1⟩`.

mod ops;
mod project;
pub mod random;
mod serial;

pub use ops::*;
pub use project::{project_to_physical, project_to_simplex};
pub use serial::DensityJson;

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

pub use nalgebra::Complex;

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Default tolerance for physicality and normalisation checks.
pub const DEFAULT_TOL: f64 = 1e-9;

pub const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn cr(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn check_dims(dims: &[usize], side: usize) -> Result<()> {
    if dims.is_empty() {
        return Err(Error::arg("empty subsystem dimension list"));
    }
    if let Some(d) = dims.iter().find(|&&d| d < 2) {
        return Err(Error::arg(format!("subsystem dimension {d} < 2")));
    }
    let prod: usize = dims.iter().product();
    if prod != side {
        return Err(Error::arg(format!(
            "dims {dims:?} (product {prod}) do not match side length {side}"
        )));
    }
    Ok(())
}

/// A square complex operator acting on a tensor-product space.
#[derive(Clone, Debug, PartialEq)]
pub struct QOperator {
    data: CMatrix,
    dims: Vec<usize>,
}

impl QOperator {
    pub fn new(data: CMatrix, dims: Vec<usize>) -> Result<Self> {
        if !data.is_square() {
            return Err(Error::arg(format!(
                "operator must be square, got {}x{}",
                data.nrows(),
                data.ncols()
            )));
        }
        check_dims(&dims, data.nrows())?;
        Ok(Self { data, dims })
    }

    /// Single-subsystem operator from a square matrix.
    pub fn single(data: CMatrix) -> Result<Self> {
        let n = data.nrows();
        Self::new(data, vec![n])
    }

    pub fn identity(dims: &[usize]) -> Self {
        let n = dims.iter().product();
        Self {
            data: CMatrix::identity(n, n),
            dims: dims.to_vec(),
        }
    }

    pub fn zeros(dims: &[usize]) -> Self {
        let n = dims.iter().product();
        Self {
            data: CMatrix::zeros(n, n),
            dims: dims.to_vec(),
        }
    }

    pub fn data(&self) -> &CMatrix {
        &self.data
    }

    pub fn into_data(self) -> CMatrix {
        self.data
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Side length of the matrix.
    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn dagger(&self) -> Self {
        Self {
            data: self.data.adjoint(),
            dims: self.dims.clone(),
        }
    }

    pub fn trace(&self) -> C64 {
        self.data.trace()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        hermiticity_error(&self.data) <= tol
    }

    /// Hermitian part `(A + A†)/2`.
    pub fn hermitian_part(&self) -> Self {
        Self {
            data: hermitian_part(&self.data),
            dims: self.dims.clone(),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            data: &self.data * s,
            dims: self.dims.clone(),
        }
    }

    pub fn matmul(&self, other: &QOperator) -> Self {
        assert_eq!(self.dims, other.dims, "operator dims mismatch");
        Self {
            data: &self.data * &other.data,
            dims: self.dims.clone(),
        }
    }

    /// `Tr[ρ A]`.
    pub fn expect(&self, rho: &DensityMatrix) -> C64 {
        assert_eq!(self.dims, rho.dims(), "operator/state dims mismatch");
        trace_product(rho.data(), &self.data)
    }

    pub fn apply(&self, psi: &StateVector) -> Result<CVector> {
        if self.dims != psi.dims {
            return Err(Error::arg(format!(
                "operator dims {:?} vs state dims {:?}",
                self.dims, psi.dims
            )));
        }
        Ok(&self.data * &psi.data)
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.data.norm()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &QOperator) -> f64 {
        assert_eq!(self.dims, other.dims, "operator dims mismatch");
        max_abs_diff(&self.data, &other.data)
    }
}

impl Add for &QOperator {
    type Output = QOperator;
    fn add(self, rhs: &QOperator) -> QOperator {
        assert_eq!(self.dims, rhs.dims, "operator dims mismatch");
        QOperator {
            data: &self.data + &rhs.data,
            dims: self.dims.clone(),
        }
    }
}

impl Sub for &QOperator {
    type Output = QOperator;
    fn sub(self, rhs: &QOperator) -> QOperator {
        assert_eq!(self.dims, rhs.dims, "operator dims mismatch");
        QOperator {
            data: &self.data - &rhs.data,
            dims: self.dims.clone(),
        }
    }
}

impl Mul for &QOperator {
    type Output = QOperator;
    fn mul(self, rhs: &QOperator) -> QOperator {
        self.matmul(rhs)
    }
}

impl Mul<C64> for &QOperator {
    type Output = QOperator;
    fn mul(self, s: C64) -> QOperator {
        self.scale(s)
    }
}

impl Mul<f64> for &QOperator {
    type Output = QOperator;
    fn mul(self, s: f64) -> QOperator {
        self.scale(cr(s))
    }
}

impl Neg for &QOperator {
    type Output = QOperator;
    fn neg(self) -> QOperator {
        self.scale(cr(-1.0))
    }
}

/// A density matrix: Hermitian, unit trace, positive semidefinite within
/// `tolerance`.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    op: QOperator,
    tolerance: f64,
}

impl DensityMatrix {
    pub fn new(op: QOperator) -> Result<Self> {
        Self::with_tolerance(op, DEFAULT_TOL)
    }

    pub fn with_tolerance(op: QOperator, tolerance: f64) -> Result<Self> {
        if tolerance < 0.0 || !tolerance.is_finite() {
            return Err(Error::arg("tolerance must be finite and nonnegative"));
        }
        let herm = hermiticity_error(op.data());
        if herm > tolerance {
            return Err(Error::arg(format!("not Hermitian (error {herm:.3e})")));
        }
        let tr = op.trace();
        if (tr.re - 1.0).abs() > tolerance || tr.im.abs() > tolerance {
            return Err(Error::arg(format!("trace {tr} differs from 1")));
        }
        let min_ev = eigvalsh(op.data())[0];
        if min_ev < -tolerance {
            return Err(Error::arg(format!("negative eigenvalue {min_ev:.3e}")));
        }
        Ok(Self { op, tolerance })
    }

    /// Builds a density matrix from a matrix, hermitising it and dividing by
    /// its trace before validation.
    pub fn from_matrix(data: CMatrix, dims: Vec<usize>) -> Result<Self> {
        let mut h = hermitian_part(&data);
        let tr = h.trace().re;
        if tr.abs() < 1e-300 || !tr.is_finite() {
            return Err(Error::arg("matrix has zero trace"));
        }
        h /= cr(tr);
        Self::new(QOperator::new(h, dims)?)
    }

    pub fn from_pure(psi: &StateVector) -> Self {
        let data = &psi.data * psi.data.adjoint();
        Self {
            op: QOperator {
                data,
                dims: psi.dims.clone(),
            },
            tolerance: DEFAULT_TOL,
        }
    }

    /// Computational basis state `|i₁ i₂ …⟩⟨i₁ i₂ …|`.
    pub fn basis(dims: &[usize], levels: &[usize]) -> Result<Self> {
        Ok(Self::from_pure(&StateVector::basis(dims, levels)?))
    }

    pub fn maximally_mixed(dims: &[usize]) -> Self {
        let n: usize = dims.iter().product();
        Self {
            op: QOperator {
                data: CMatrix::identity(n, n) / cr(n as f64),
                dims: dims.to_vec(),
            },
            tolerance: DEFAULT_TOL,
        }
    }

    pub fn op(&self) -> &QOperator {
        &self.op
    }

    pub fn into_op(self) -> QOperator {
        self.op
    }

    pub fn data(&self) -> &CMatrix {
        &self.op.data
    }

    pub fn dims(&self) -> &[usize] {
        &self.op.dims
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        trace_product(self.data(), self.data()).re
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        eigvalsh(self.data())
    }

    /// Real part of `Tr[ρ A]`.
    pub fn expect(&self, a: &QOperator) -> f64 {
        a.expect(self).re
    }

    pub fn population(&self, index: usize) -> f64 {
        self.data()[(index, index)].re
    }

    /// Trace distance `½‖ρ − σ‖₁`.
    pub fn trace_distance(&self, other: &DensityMatrix) -> Result<f64> {
        if self.dims() != other.dims() {
            return Err(Error::arg("trace distance: dims mismatch"));
        }
        let diff = self.data() - other.data();
        Ok(0.5 * eigvalsh(&diff).iter().map(|x| x.abs()).sum::<f64>())
    }

    /// Conjugation `U ρ U†`.
    pub fn transform(&self, u: &QOperator) -> Result<Self> {
        if u.dims() != self.dims() {
            return Err(Error::arg("transform: dims mismatch"));
        }
        let data = u.data() * self.data() * u.data().adjoint();
        Self::from_matrix(data, self.dims().to_vec())
    }
}

/// A normalised pure state.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    data: CVector,
    dims: Vec<usize>,
}

impl StateVector {
    /// Requires unit norm within [`DEFAULT_TOL`].
    pub fn new(data: CVector, dims: Vec<usize>) -> Result<Self> {
        check_dims(&dims, data.len())?;
        let n = data.norm();
        if (n - 1.0).abs() > DEFAULT_TOL {
            return Err(Error::arg(format!("state norm {n} is not 1")));
        }
        Ok(Self { data, dims })
    }

    /// Normalises `data`; fails on the zero vector.
    pub fn normalized(data: CVector, dims: Vec<usize>) -> Result<Self> {
        check_dims(&dims, data.len())?;
        let n = data.norm();
        if n < 1e-300 || !n.is_finite() {
            return Err(Error::arg("cannot normalise a zero vector"));
        }
        Ok(Self {
            data: data / cr(n),
            dims,
        })
    }

    pub fn basis(dims: &[usize], levels: &[usize]) -> Result<Self> {
        if dims.len() != levels.len() {
            return Err(Error::arg("basis: one level per subsystem required"));
        }
        let n: usize = dims.iter().product();
        check_dims(dims, n)?;
        let mut idx = 0;
        for (&d, &l) in dims.iter().zip(levels) {
            if l >= d {
                return Err(Error::arg(format!("level {l} out of range for dimension {d}")));
            }
            idx = idx * d + l;
        }
        let mut data = CVector::zeros(n);
        data[idx] = cr(1.0);
        Ok(Self {
            data,
            dims: dims.to_vec(),
        })
    }

    pub fn data(&self) -> &CVector {
        &self.data
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn amplitude(&self, index: usize) -> C64 {
        self.data[index]
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> C64 {
        self.data.dotc(&other.data)
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix::from_pure(self)
    }
}

/// Kronecker product with concatenated subsystem dimensions.
pub fn tensor(a: &QOperator, b: &QOperator) -> QOperator {
    let mut dims = a.dims.clone();
    dims.extend_from_slice(&b.dims);
    QOperator {
        data: a.data.kronecker(&b.data),
        dims,
    }
}

/// Tensor product of a list of operators, left to right.
pub fn tensor_all(ops: &[&QOperator]) -> QOperator {
    assert!(!ops.is_empty(), "tensor_all of an empty list");
    ops[1..]
        .iter()
        .fold(ops[0].clone(), |acc, op| tensor(&acc, op))
}

pub fn tensor_states(a: &StateVector, b: &StateVector) -> StateVector {
    let mut dims = a.dims.clone();
    dims.extend_from_slice(&b.dims);
    StateVector {
        data: a.data.kronecker(&b.data),
        dims,
    }
}

/// Partial trace of an arbitrary operator, keeping the subsystems listed in
/// `keep` (in their original order).
pub fn partial_trace_op(op: &QOperator, keep: &[usize]) -> Result<QOperator> {
    let dims = op.dims();
    let n_sub = dims.len();
    let mut keep_sorted = keep.to_vec();
    keep_sorted.sort_unstable();
    keep_sorted.dedup();
    if keep_sorted.len() != keep.len() {
        return Err(Error::arg("partial trace: repeated subsystem index"));
    }
    if keep.is_empty() {
        return Err(Error::arg("partial trace: keep set is empty"));
    }
    if let Some(&bad) = keep_sorted.iter().find(|&&k| k >= n_sub) {
        return Err(Error::arg(format!(
            "partial trace: subsystem {bad} out of range for {n_sub} subsystems"
        )));
    }
    let traced: Vec<usize> = (0..n_sub).filter(|i| !keep_sorted.contains(i)).collect();
    let kept_dims: Vec<usize> = keep_sorted.iter().map(|&k| dims[k]).collect();
    let traced_dims: Vec<usize> = traced.iter().map(|&k| dims[k]).collect();
    let nk: usize = kept_dims.iter().product();
    let nt: usize = traced_dims.iter().product();

    // Strides of each subsystem in the full index.
    let mut strides = vec![1usize; n_sub];
    for i in (0..n_sub.saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * dims[i + 1];
    }
    let compose = |sub_idx: usize, sub_dims: &[usize], which: &[usize]| -> usize {
        let mut rem = sub_idx;
        let mut full = 0;
        for (pos, &d) in sub_dims.iter().enumerate().rev() {
            full += (rem % d) * strides[which[pos]];
            rem /= d;
        }
        full
    };

    let kept_offsets: Vec<usize> = (0..nk).map(|k| compose(k, &kept_dims, &keep_sorted)).collect();
    let traced_offsets: Vec<usize> = (0..nt).map(|t| compose(t, &traced_dims, &traced)).collect();

    let mut out = CMatrix::zeros(nk, nk);
    for (r, &ro) in kept_offsets.iter().enumerate() {
        for (cc, &co) in kept_offsets.iter().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for &t in &traced_offsets {
                acc += op.data[(ro + t, co + t)];
            }
            out[(r, cc)] = acc;
        }
    }
    // A single kept subsystem of dimension d has dims [d]; QOperator::new
    // enforces d >= 2, which always holds here.
    QOperator::new(out, kept_dims)
}

/// Reduced density matrix on the subsystems in `keep`.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let reduced = partial_trace_op(rho.op(), keep)?;
    DensityMatrix::with_tolerance(reduced, rho.tolerance().max(DEFAULT_TOL))
}

/// Embeds a single-subsystem operator at position `site` of a composite
/// space with dimensions `dims`.
pub fn embed(op: &QOperator, site: usize, dims: &[usize]) -> Result<QOperator> {
    if site >= dims.len() {
        return Err(Error::arg(format!("embed: site {site} out of range")));
    }
    if op.dims() != [dims[site]] {
        return Err(Error::arg(format!(
            "embed: operator dims {:?} do not match subsystem dimension {}",
            op.dims(),
            dims[site]
        )));
    }
    let factors: Vec<QOperator> = dims
        .iter()
        .enumerate()
        .map(|(i, &d)| if i == site { op.clone() } else { QOperator::identity(&[d]) })
        .collect();
    let refs: Vec<&QOperator> = factors.iter().collect();
    Ok(tensor_all(&refs))
}

pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * cr(0.5)
}

/// Largest entry of `|A − A†|`.
pub fn hermiticity_error(m: &CMatrix) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// `Tr[A B]` without forming the product.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> C64 {
    let n = a.nrows();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

/// Eigen-decomposition of the Hermitian part of `m`: eigenvalues ascending,
/// eigenvectors as matching columns.
pub fn eigh(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let h = hermitian_part(m);
    let eig = h.symmetric_eigen();
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

pub fn eigvalsh(m: &CMatrix) -> Vec<f64> {
    let mut v: Vec<f64> = hermitian_part(m).symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Rebuilds `V diag(f(λ)) V†` from an eigen-decomposition.
pub fn from_spectrum(values: &[f64], vectors: &CMatrix, f: impl Fn(f64) -> f64) -> CMatrix {
    let mapped: Vec<f64> = values.iter().map(|&v| f(v)).collect();
    reconstruct(&mapped, vectors)
}

/// `V diag(values) V†`.
pub fn reconstruct(values: &[f64], vectors: &CMatrix) -> CMatrix {
    let mut scaled = vectors.clone();
    for (j, &v) in values.iter().enumerate() {
        scaled.column_mut(j).scale_mut(v);
    }
    scaled * vectors.adjoint()
}

/// Principal square root of a positive semidefinite matrix. Eigenvalues
/// below `1e-14` of the largest are treated as zero.
pub fn sqrt_psd(m: &CMatrix) -> CMatrix {
    let (vals, vecs) = eigh(m);
    let floor = 1e-14 * vals.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    from_spectrum(&vals, &vecs, |x| if x > floor { x.sqrt() } else { 0.0 })
}

/// Column-stacking vectorisation.
pub fn vectorize(m: &CMatrix) -> CVector {
    CVector::from_iterator(m.len(), m.iter().copied())
}

pub fn unvectorize(v: &CVector, n: usize) -> CMatrix {
    CMatrix::from_iterator(n, n, v.iter().copied())
}
