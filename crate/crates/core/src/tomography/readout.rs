use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Axis, DetectorModel, PairExpectation};
use crate::entanglement::qubit_subspace;
use crate::error::{Error, Result};
use crate::linalg::{tensor, DensityMatrix, QOperator};
use crate::output::fmt_num;

/// IQ centroids of the two reference states of one axis. `minus` maps to
/// `p = 0`, `plus` to `p = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IqReference {
    pub plus: [f64; 2],
    pub minus: [f64; 2],
}

impl IqReference {
    fn delta(&self) -> (f64, f64) {
        (self.plus[0] - self.minus[0], self.plus[1] - self.minus[1])
    }

    pub fn separation(&self) -> f64 {
        let (di, dq) = self.delta();
        di.hypot(dq)
    }

    /// Projection of one IQ point onto the reference line.
    pub fn project(&self, i: f64, q: f64) -> f64 {
        let (di, dq) = self.delta();
        ((i - self.minus[0]) * di + (q - self.minus[1]) * dq) / (di * di + dq * dq)
    }

    fn point(&self, p: f64) -> [f64; 2] {
        let (di, dq) = self.delta();
        [self.minus[0] + p * di, self.minus[1] + p * dq]
    }
}

/// Gaussian-blob readout of one qubit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReadoutModel {
    pub axes: [IqReference; 3],
    pub noise_sigma: f64,
}

impl ReadoutModel {
    pub fn new(axes: [IqReference; 3], noise_sigma: f64) -> Result<Self> {
        let m = Self { axes, noise_sigma };
        m.validate()?;
        Ok(m)
    }

    /// Noise set to a quarter of the smallest blob separation.
    pub fn with_default_noise(axes: [IqReference; 3]) -> Result<Self> {
        let sep = axes.iter().map(IqReference::separation).fold(f64::INFINITY, f64::min);
        Self::new(axes, sep / 4.0)
    }

    pub fn validate(&self) -> Result<()> {
        for (axis, r) in Axis::ALL.iter().zip(&self.axes) {
            if !(r.separation() > 0.0) || r.plus.iter().chain(&r.minus).any(|v| !v.is_finite()) {
                return Err(Error::arg(format!("axis {}: IQ references must be finite and distinct", axis.label())));
            }
        }
        if !(self.noise_sigma >= 0.0 && self.noise_sigma.is_finite()) {
            return Err(Error::arg("IQ noise sigma must be finite and non-negative"));
        }
        Ok(())
    }

    pub fn axis(&self, axis: Axis) -> &IqReference {
        &self.axes[axis.index()]
    }

    /// Default references for qubit `site` (0 or 1): unit separation, a
    /// different offset and angle per axis, default noise.
    pub fn default_for(site: usize) -> Self {
        let axes = Axis::ALL.map(|a| {
            let k = a.index() as f64 + 3.0 * site as f64;
            let (off, phi) = (0.3 * k - 0.8, 0.7 + 0.9 * k);
            let minus = [off, 0.5 - 0.2 * k];
            IqReference { minus, plus: [minus[0] + phi.cos(), minus[1] + phi.sin()] }
        });
        Self::with_default_noise(axes).expect("default references are distinct")
    }
}

/// Averaged IQ moments of one record.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Moments {
    pub i_a: f64,
    pub q_a: f64,
    pub i_b: f64,
    pub q_b: f64,
    pub ii: f64,
    pub iq: f64,
    pub qi: f64,
    pub qq: f64,
}

/// Simultaneous single-shot IQ points `(I_a, Q_a, I_b, Q_b)` for one axis pair.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementRecord {
    pub axis_a: Axis,
    pub axis_b: Axis,
    shots: Vec<[f64; 4]>,
    moments: Moments,
}

impl MeasurementRecord {
    pub fn new(axis_a: Axis, axis_b: Axis, shots: Vec<[f64; 4]>) -> Result<Self> {
        if shots.is_empty() {
            return Err(Error::arg("a measurement record needs at least one shot"));
        }
        if shots.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::arg("non-finite IQ value"));
        }
        let n = shots.len() as f64;
        let mut m = Moments::default();
        for [ia, qa, ib, qb] in &shots {
            m.i_a += ia;
            m.q_a += qa;
            m.i_b += ib;
            m.q_b += qb;
            m.ii += ia * ib;
            m.iq += ia * qb;
            m.qi += qa * ib;
            m.qq += qa * qb;
        }
        for v in [&mut m.i_a, &mut m.q_a, &mut m.i_b, &mut m.q_b, &mut m.ii, &mut m.iq, &mut m.qi, &mut m.qq] {
            *v /= n;
        }
        Ok(Self { axis_a, axis_b, shots, moments: m })
    }

    pub fn shots(&self) -> &[[f64; 4]] {
        &self.shots
    }

    pub fn moments(&self) -> &Moments {
        &self.moments
    }
}

/// `d_i = 1 − 2⟨p_i⟩`, `d_j` likewise, and
/// `d_ij = 1 − 2⟨p_i⟩ − 2⟨p_j⟩ + 4⟨p_i p_j⟩` with `⟨p_i p_j⟩` expanded in the
/// averaged IQ products.
pub fn iq_to_expectation(record: &MeasurementRecord, ro_a: &ReadoutModel, ro_b: &ReadoutModel) -> Result<PairExpectation> {
    ro_a.validate()?;
    ro_b.validate()?;
    let (ra, rb) = (ro_a.axis(record.axis_a), ro_b.axis(record.axis_b));
    let m = record.moments();
    let (dia, dqa) = ra.delta();
    let (dib, dqb) = rb.delta();
    let (da, db) = (dia * dia + dqa * dqa, dib * dib + dqb * dqb);
    let [ia_m, qa_m] = ra.minus;
    let [ib_m, qb_m] = rb.minus;
    let p_a = ra.project(m.i_a, m.q_a);
    let p_b = rb.project(m.i_b, m.q_b);
    let p_ab = ((m.ii - m.i_a * ib_m - m.i_b * ia_m + ia_m * ib_m) * dia * dib
        + (m.iq - m.i_a * qb_m - m.q_b * ia_m + ia_m * qb_m) * dia * dqb
        + (m.qi - m.q_a * ib_m - m.i_b * qa_m + qa_m * ib_m) * dqa * dib
        + (m.qq - m.q_a * qb_m - m.q_b * qa_m + qa_m * qb_m) * dqa * dqb)
        / (da * db);
    Ok(PairExpectation {
        axis_a: record.axis_a,
        axis_b: record.axis_b,
        d_a: 1.0 - 2.0 * p_a,
        d_b: 1.0 - 2.0 * p_b,
        d_ab: 1.0 - 2.0 * p_a - 2.0 * p_b + 4.0 * p_ab,
    })
}

/// Draws `n_shots` joint outcomes per axis pair from the tensor-product POVM
/// and maps them to noisy IQ points. Outcome `E` lands at `p = (1 − α)/2`,
/// the other at `p = (1 − β)/2`. Pair `k` uses RNG stream `k`.
pub fn synthesize_shots(
    rho: &DensityMatrix,
    detectors: [&DetectorModel; 2],
    readouts: [&ReadoutModel; 2],
    n_shots: usize,
    seed: u64,
) -> Result<Vec<MeasurementRecord>> {
    if n_shots == 0 {
        return Err(Error::arg("n_shots must be at least 1"));
    }
    readouts[0].validate()?;
    readouts[1].validate()?;
    let (q, _) = qubit_subspace(rho)?;
    let pairs: Vec<(Axis, Axis)> = Axis::pairs().collect();
    pairs
        .par_iter()
        .enumerate()
        .map(|(task, &(i, j))| {
            let (pa, pb) = (detectors[0].axis(i), detectors[1].axis(j));
            let id = QOperator::identity(&[2]);
            let ea = [pa.e().clone(), &id - pa.e()];
            let eb = [pb.e().clone(), &id - pb.e()];
            let mut probs = [0.0; 4];
            for a in 0..2 {
                for b in 0..2 {
                    probs[2 * a + b] = q.expect(&tensor(&ea[a], &eb[b])).max(0.0);
                }
            }
            let total: f64 = probs.iter().sum();
            let values_a = [pa.alpha(), pa.beta()];
            let values_b = [pb.alpha(), pb.beta()];
            let (ra, rb) = (readouts[0].axis(i), readouts[1].axis(j));
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(task as u64);
            let noise_a = Normal::new(0.0, readouts[0].noise_sigma).map_err(|e| Error::arg(e.to_string()))?;
            let noise_b = Normal::new(0.0, readouts[1].noise_sigma).map_err(|e| Error::arg(e.to_string()))?;
            let shots = (0..n_shots)
                .map(|_| {
                    let u: f64 = rng.random::<f64>() * total;
                    let mut acc = 0.0;
                    let mut k = 3;
                    for (idx, p) in probs.iter().enumerate() {
                        acc += p;
                        if u < acc {
                            k = idx;
                            break;
                        }
                    }
                    let pt_a = ra.point((1.0 - values_a[k / 2]) / 2.0);
                    let pt_b = rb.point((1.0 - values_b[k % 2]) / 2.0);
                    [
                        pt_a[0] + noise_a.sample(&mut rng),
                        pt_a[1] + noise_a.sample(&mut rng),
                        pt_b[0] + noise_b.sample(&mut rng),
                        pt_b[1] + noise_b.sample(&mut rng),
                    ]
                })
                .collect();
            MeasurementRecord::new(i, j, shots)
        })
        .collect()
}

/// CSV with columns `axis_i,axis_j,shot,I_i,Q_i,I_j,Q_j`.
pub fn records_to_csv(records: &[MeasurementRecord]) -> String {
    let mut out = String::from("axis_i,axis_j,shot,I_i,Q_i,I_j,Q_j\n");
    for r in records {
        for (k, s) in r.shots.iter().enumerate() {
            write!(out, "{},{},{k}", r.axis_a.label(), r.axis_b.label()).unwrap();
            for v in s {
                write!(out, ",{}", fmt_num(*v)).unwrap();
            }
            out.push('\n');
        }
    }
    out
}
