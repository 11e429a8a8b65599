use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{qubit_block, Axis};
use crate::entanglement::qubit_subspace;
use crate::error::{Error, Result};
use crate::linalg::{
    cr, eigvalsh, pauli, project_to_physical, tensor, trace_product, vectorize, CMatrix,
    DensityJson, DensityMatrix, QOperator,
};

const EIG_TOL: f64 = 1e-9;
const SOLVER_TOL: f64 = 1e-8;
const MAX_ITER: usize = 10_000;
const RANK_GAP: f64 = 1e-8;

/// Binary POVM `{E, I − E}` with outcome values `(α, β)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AxisPovm {
    e: QOperator,
    alpha: f64,
    beta: f64,
}

impl AxisPovm {
    pub fn new(e: QOperator, alpha: f64, beta: f64) -> Result<Self> {
        if e.dims() != [2] {
            return Err(Error::arg(format!("POVM element must be a qubit operator, got dims {:?}", e.dims())));
        }
        if !e.is_hermitian(EIG_TOL) {
            return Err(Error::arg("POVM element is not Hermitian"));
        }
        let eig = eigvalsh(e.data());
        if eig[0] < -EIG_TOL || eig[1] > 1.0 + EIG_TOL {
            return Err(Error::arg(format!("POVM element eigenvalues {eig:?} outside [0, 1]")));
        }
        if !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::arg("outcome values must be finite"));
        }
        Ok(Self { e: e.hermitian_part(), alpha, beta })
    }

    /// Projective measurement with `E` on the negative Pauli eigenstate.
    pub fn ideal(axis: Axis) -> Self {
        let s = pauli(axis.label().chars().next().unwrap()).expect("Pauli label");
        let e = &(&QOperator::identity(&[2]) - &s) * 0.5;
        Self { e, alpha: 1.0, beta: -1.0 }
    }

    pub fn e(&self) -> &QOperator {
        &self.e
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `αE + β(I − E)`.
    pub fn observable(&self) -> QOperator {
        &(&QOperator::identity(&[2]) * self.beta) + &(&self.e * (self.alpha - self.beta))
    }
}

/// Per-axis POVMs of one qubit, ordered X, Y, Z.
#[derive(Clone, Debug, PartialEq)]
pub struct DetectorModel {
    axes: [AxisPovm; 3],
    residuals: [f64; 3],
}

impl DetectorModel {
    pub fn new(axes: [AxisPovm; 3]) -> Result<Self> {
        Ok(Self { axes, residuals: [0.0; 3] })
    }

    pub fn ideal() -> Self {
        Self { axes: Axis::ALL.map(AxisPovm::ideal), residuals: [0.0; 3] }
    }

    pub fn axis(&self, axis: Axis) -> &AxisPovm {
        &self.axes[axis.index()]
    }

    /// Sum of squared residuals per axis from the fit that produced the model.
    pub fn residuals(&self) -> [f64; 3] {
        self.residuals
    }

    pub fn single_expectations(&self, rho: &DensityMatrix) -> Result<[f64; 3]> {
        if rho.dims() != [2] {
            return Err(Error::arg(format!("expected a qubit state, got dims {:?}", rho.dims())));
        }
        Ok(Axis::ALL.map(|a| rho.expect(&self.axis(a).observable())))
    }
}

#[derive(Serialize, Deserialize)]
struct AxisJson {
    axis: Axis,
    e: DensityJson,
    alpha: f64,
    beta: f64,
    residual: f64,
}

impl Serialize for DetectorModel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let axes: Vec<AxisJson> = Axis::ALL
            .iter()
            .map(|&a| {
                let p = self.axis(a);
                AxisJson {
                    axis: a,
                    e: DensityJson::from_matrix(p.e.data(), &[2]),
                    alpha: p.alpha,
                    beta: p.beta,
                    residual: self.residuals[a.index()],
                }
            })
            .collect();
        axes.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DetectorModel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = Vec::<AxisJson>::deserialize(d)?;
        let mut axes: Vec<Option<AxisPovm>> = vec![None, None, None];
        let mut residuals = [0.0; 3];
        for a in raw {
            let m = a.e.to_matrix().map_err(D::Error::custom)?;
            let e = QOperator::single(m).map_err(D::Error::custom)?;
            axes[a.axis.index()] = Some(AxisPovm::new(e, a.alpha, a.beta).map_err(D::Error::custom)?);
            residuals[a.axis.index()] = a.residual;
        }
        let axes: Vec<AxisPovm> = axes
            .into_iter()
            .collect::<Option<_>>()
            .ok_or_else(|| D::Error::custom("detector JSON must list X, Y and Z"))?;
        Ok(Self { axes: axes.try_into().expect("three axes"), residuals })
    }
}

/// Single and correlated expectations for one axis pair.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairExpectation {
    pub axis_a: Axis,
    pub axis_b: Axis,
    pub d_a: f64,
    pub d_b: f64,
    pub d_ab: f64,
}

/// Noiseless data for all nine axis pairs.
pub fn expected_data(rho: &DensityMatrix, det_a: &DetectorModel, det_b: &DetectorModel) -> Result<Vec<PairExpectation>> {
    let (q, _) = qubit_subspace(rho)?;
    let id = QOperator::identity(&[2]);
    Ok(Axis::pairs()
        .map(|(i, j)| {
            let (ma, mb) = (det_a.axis(i).observable(), det_b.axis(j).observable());
            PairExpectation {
                axis_a: i,
                axis_b: j,
                d_a: q.expect(&tensor(&ma, &id)),
                d_b: q.expect(&tensor(&id, &mb)),
                d_ab: q.expect(&tensor(&ma, &mb)),
            }
        })
        .collect())
}

fn bloch(rho: &DensityMatrix) -> [f64; 3] {
    ['X', 'Y', 'Z'].map(|p| rho.expect(&pauli(p).unwrap()))
}

fn singular_gap(m: &DMatrix<f64>) -> f64 {
    let sv = m.singular_values();
    let max = sv.max();
    if max == 0.0 {
        0.0
    } else {
        sv.min() / max
    }
}

/// Projects `(e0, e)` with `E = e0 I + e·σ` onto `0 ≼ E ≼ I`.
fn clip_element(x: &DVector<f64>) -> DVector<f64> {
    let r = (x[1] * x[1] + x[2] * x[2] + x[3] * x[3]).sqrt();
    let hi = (x[0] + r).clamp(0.0, 1.0);
    let lo = (x[0] - r).clamp(0.0, 1.0);
    let r_new = (hi - lo) / 2.0;
    let scale = if r > 0.0 { r_new / r } else { 0.0 };
    DVector::from_vec(vec![(hi + lo) / 2.0, x[1] * scale, x[2] * scale, x[3] * scale])
}

/// Box-constrained least squares `min ‖A x − b‖²` over valid POVM elements.
fn fit_element(a: &DMatrix<f64>, b: &DVector<f64>, warm: &DVector<f64>) -> DVector<f64> {
    let free = a.clone().svd(true, true).solve(b, 1e-14).expect("SVD with vectors");
    let clipped = clip_element(&free);
    if (&clipped - &free).norm() < 1e-14 {
        return free;
    }
    let lip = 2.0 * a.singular_values().max().powi(2);
    let grad = |x: &DVector<f64>| a.transpose() * (a * x - b) * 2.0;
    let mut x = clip_element(warm);
    let mut y = x.clone();
    let mut t = 1.0f64;
    for _ in 0..MAX_ITER {
        let next = clip_element(&(&y - grad(&y) / lip));
        let step = (&next - &x).norm();
        let t_next = (1.0 + (1.0 + 4.0 * t * t).sqrt()) / 2.0;
        y = &next + (&next - &x) * ((t - 1.0) / t_next);
        x = next;
        t = t_next;
        if step * lip < SOLVER_TOL * 1e-3 {
            break;
        }
    }
    x
}

/// Detector tomography by alternating least squares.
///
/// For fixed `(α, β)` the element `E` solves a constrained linear least
/// squares problem; for fixed `E` the outcome values are a 2×2 linear solve.
/// Starts from `(α, β) = (1, −1)`.
pub fn fit_povm(states: &[DensityMatrix], expectations: &[[f64; 3]]) -> Result<DetectorModel> {
    if states.len() != expectations.len() {
        return Err(Error::arg("one expectation triple per state required"));
    }
    let qubits: Vec<DensityMatrix> = states.iter().map(qubit_block).collect::<Result<_>>()?;
    let s = qubits.len();
    let design = DMatrix::from_fn(s, 4, |r, k| if k == 0 { 1.0 } else { bloch(&qubits[r])[k - 1] });
    if s < 4 || singular_gap(&design) < RANK_GAP {
        return Err(Error::Conditioning(format!(
            "detector tomography needs 4 linearly independent states, got {s} spanning too little"
        )));
    }
    let mut axes = Vec::with_capacity(3);
    let mut residuals = [0.0; 3];
    for axis in Axis::ALL {
        let d = DVector::from_fn(s, |r, _| expectations[r][axis.index()]);
        let (mut alpha, mut beta) = (1.0f64, -1.0f64);
        let mut x = DVector::from_vec(vec![0.5, 0.0, 0.0, 0.0]);
        for _ in 0..MAX_ITER {
            let k = alpha - beta;
            if k.abs() < 1e-12 {
                return Err(Error::Fit { message: format!("axis {}: outcome values collapsed", axis.label()), residual: f64::NAN });
            }
            let x_new = fit_element(&(&design * k), &d.map(|v| v - beta), &x);
            let t = &design * &x_new;
            let ab = DMatrix::from_fn(s, 2, |r, col| if col == 0 { t[r] } else { 1.0 - t[r] });
            let (a_new, b_new) = match ab.clone().svd(true, true).solve(&d, 1e-14) {
                Ok(v) if singular_gap(&ab) > RANK_GAP => (v[0], v[1]),
                _ => (alpha, beta),
            };
            let change = (&x_new - &x).amax().max((a_new - alpha).abs()).max((b_new - beta).abs());
            x = x_new;
            alpha = a_new;
            beta = b_new;
            if change < SOLVER_TOL {
                break;
            }
        }
        let t = &design * &x;
        residuals[axis.index()] = t.iter().zip(d.iter()).map(|(ti, di)| (alpha * ti + beta * (1.0 - ti) - di).powi(2)).sum();
        let e = &(&(&QOperator::identity(&[2]) * x[0]) + &(&pauli('X').unwrap() * x[1]))
            + &(&(&pauli('Y').unwrap() * x[2]) + &(&pauli('Z').unwrap() * x[3]));
        axes.push(AxisPovm::new(e, alpha, beta)?);
    }
    Ok(DetectorModel { axes: axes.try_into().expect("three axes"), residuals })
}

/// Physical two-qubit state from the 27 single and correlated expectations.
///
/// Unconstrained Pauli-basis least squares first; if that estimate is not
/// positive semidefinite, accelerated projected gradient over density
/// matrices takes over.
pub fn reconstruct_state(data: &[PairExpectation], det_a: &DetectorModel, det_b: &DetectorModel) -> Result<DensityMatrix> {
    let mut seen = [[false; 3]; 3];
    for p in data {
        let slot = &mut seen[p.axis_a.index()][p.axis_b.index()];
        if *slot {
            return Err(Error::arg(format!("duplicate axis pair {}{}", p.axis_a.label(), p.axis_b.label())));
        }
        *slot = true;
    }
    if seen.iter().flatten().any(|s| !s) {
        return Err(Error::arg("all nine axis pairs are required"));
    }
    let id = QOperator::identity(&[2]);
    let mut ops: Vec<CMatrix> = Vec::with_capacity(27);
    let mut targets: Vec<f64> = Vec::with_capacity(27);
    for p in data {
        let (ma, mb) = (det_a.axis(p.axis_a).observable(), det_b.axis(p.axis_b).observable());
        ops.push(tensor(&ma, &id).into_data());
        targets.push(p.d_a);
        ops.push(tensor(&id, &mb).into_data());
        targets.push(p.d_b);
        ops.push(tensor(&ma, &mb).into_data());
        targets.push(p.d_ab);
    }
    if targets.iter().any(|t| !t.is_finite()) {
        return Err(Error::Reconstruction("non-finite expectation value".into()));
    }

    let labels = ['I', 'X', 'Y', 'Z'];
    let basis: Vec<CMatrix> = labels
        .iter()
        .flat_map(|&a| labels.iter().map(move |&b| tensor(&pauli(a).unwrap(), &pauli(b).unwrap()).into_data()))
        .collect();
    let n = ops.len();
    let design = DMatrix::from_fn(n, 15, |r, k| trace_product(&basis[k + 1], &ops[r]).re / 4.0);
    if singular_gap(&design) < RANK_GAP {
        return Err(Error::Reconstruction("measurement operators are not informationally complete".into()));
    }
    let y = DVector::from_fn(n, |r, _| targets[r] - ops[r].trace().re / 4.0);
    let coeffs = design.svd(true, true).solve(&y, 1e-14).map_err(|e| Error::Reconstruction(e.to_string()))?;
    let mut lin = basis[0].clone();
    for (k, b) in basis[1..].iter().enumerate() {
        lin += b * cr(coeffs[k]);
    }
    lin /= cr(4.0);
    if eigvalsh(&lin)[0] >= -1e-12 {
        return project_to_physical(&lin, &[2, 2]);
    }

    let v = CMatrix::from_fn(n, 16, |r, k| vectorize(&ops[r])[k].conj());
    let lip = 2.0 * v.singular_values().max().powi(2);
    let grad = |rho: &CMatrix| {
        let mut g = CMatrix::zeros(4, 4);
        for (op, t) in ops.iter().zip(&targets) {
            g += op * cr(2.0 * (trace_product(rho, op).re - t));
        }
        g
    };
    let mut x = project_to_physical(&lin, &[2, 2])?.into_op().into_data();
    let mut z = x.clone();
    let mut t = 1.0f64;
    let mut converged = false;
    for _ in 0..MAX_ITER {
        let next = project_to_physical(&(&z - grad(&z) / cr(lip)), &[2, 2])?.into_op().into_data();
        let step = (&next - &x).norm();
        let t_next = (1.0 + (1.0 + 4.0 * t * t).sqrt()) / 2.0;
        z = &next + (&next - &x) * cr((t - 1.0) / t_next);
        x = next;
        t = t_next;
        if step * lip < SOLVER_TOL {
            converged = true;
            break;
        }
    }
    if !converged {
        log::warn!("state reconstruction stopped at the iteration limit");
    }
    DensityMatrix::from_matrix(x, vec![2, 2])
}
