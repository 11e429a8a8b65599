use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{
    expected_data, fit_povm, iq_to_expectation, physical_detector, prepare_cardinal_states,
    qubit_block, reconstruct_state, synthesize_shots, Axis, DetectorModel, PairExpectation,
    ReadoutModel,
};
use crate::entanglement::fidelity;
use crate::error::Result;
use crate::linalg::random::random_state;
use crate::linalg::{tensor, DensityMatrix, QOperator};
use crate::slh::TransmonSpec;

/// Shot settings; `None` shots means exact expectation values.
#[derive(Clone, Debug)]
pub struct Acquisition {
    pub shots: Option<usize>,
    pub readouts: [ReadoutModel; 2],
}

impl Acquisition {
    pub fn noiseless() -> Self {
        Self { shots: None, readouts: [ReadoutModel::default_for(0), ReadoutModel::default_for(1)] }
    }

    pub fn with_shots(shots: usize) -> Self {
        Self { shots: Some(shots), ..Self::noiseless() }
    }

    /// Nine pair expectations for `rho` as seen through `detectors`.
    pub fn measure(&self, rho: &DensityMatrix, detectors: [&DetectorModel; 2], seed: u64) -> Result<Vec<PairExpectation>> {
        match self.shots {
            None => expected_data(rho, detectors[0], detectors[1]),
            Some(n) => synthesize_shots(rho, detectors, [&self.readouts[0], &self.readouts[1]], n, seed)?
                .iter()
                .map(|r| iq_to_expectation(r, &self.readouts[0], &self.readouts[1]))
                .collect(),
        }
    }
}

/// Single-qubit expectations averaged over the records sharing each axis.
fn single_axis_means(data: &[PairExpectation]) -> [[f64; 3]; 2] {
    let mut out = [[0.0; 3]; 2];
    let mut counts = [[0.0; 3]; 2];
    for p in data {
        out[0][p.axis_a.index()] += p.d_a;
        counts[0][p.axis_a.index()] += 1.0;
        out[1][p.axis_b.index()] += p.d_b;
        counts[1][p.axis_b.index()] += 1.0;
    }
    for s in 0..2 {
        for a in Axis::ALL {
            out[s][a.index()] /= counts[s][a.index()];
        }
    }
    out
}

/// Cardinal states as two-qubit products `ρ_A^s ⊗ ρ_B^s` on the qubit block.
pub fn cardinal_pairs(cardinals: [&[DensityMatrix]; 2]) -> Result<Vec<DensityMatrix>> {
    cardinals[0]
        .iter()
        .zip(cardinals[1])
        .map(|(a, b)| {
            let (qa, qb) = (qubit_block(a)?, qubit_block(b)?);
            let op = tensor(qa.op(), qb.op());
            DensityMatrix::new(QOperator::new(op.into_data(), vec![2, 2])?)
        })
        .collect()
}

/// Detector tomography on measured cardinal states: the actual detectors
/// generate the data, the simulated cardinal states enter the fit.
pub fn calibrate_detectors(
    true_detectors: [&DetectorModel; 2],
    prepared: [&[DensityMatrix]; 2],
    simulated: [&[DensityMatrix]; 2],
    acq: &Acquisition,
    seed: u64,
) -> Result<[DetectorModel; 2]> {
    let pairs = cardinal_pairs(prepared)?;
    let mut singles = [Vec::new(), Vec::new()];
    for (s, rho) in pairs.iter().enumerate() {
        let data = acq.measure(rho, true_detectors, stream_seed(seed, s as u64))?;
        let [a, b] = single_axis_means(&data);
        singles[0].push(a);
        singles[1].push(b);
    }
    Ok([fit_povm(simulated[0], &singles[0])?, fit_povm(simulated[1], &singles[1])?])
}

/// Deterministic per-task seed derived from a master seed.
pub fn stream_seed(seed: u64, task: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(task);
    rng.random()
}

/// Outcome of a detector-plus-state tomography round trip.
#[derive(Clone, Debug)]
pub struct ClosureReport {
    pub detectors: [DetectorModel; 2],
    pub fidelities: Vec<f64>,
}

impl ClosureReport {
    pub fn min_fidelity(&self) -> f64 {
        self.fidelities.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn mean_fidelity(&self) -> f64 {
        self.fidelities.iter().sum::<f64>() / self.fidelities.len() as f64
    }
}

/// Fits detectors from pulse-simulated cardinal states, then reconstructs
/// `n_states` Haar-random pure states measured through the physical detectors.
pub fn tomography_closure(qubits: &[TransmonSpec; 2], n_states: usize, acq: &Acquisition, seed: u64) -> Result<ClosureReport> {
    let truth = [physical_detector(&qubits[0], 1.0, -1.0)?, physical_detector(&qubits[1], 1.0, -1.0)?];
    let cards = [prepare_cardinal_states(&qubits[0])?, prepare_cardinal_states(&qubits[1])?];
    let fitted = calibrate_detectors(
        [&truth[0], &truth[1]],
        [&cards[0], &cards[1]],
        [&cards[0], &cards[1]],
        acq,
        stream_seed(seed, 0),
    )?;
    let fidelities = (0..n_states)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(1000 + k as u64);
            let rho = random_state(&[2, 2], &mut rng).to_density();
            let data = acq.measure(&rho, [&truth[0], &truth[1]], rng.random())?;
            let est = reconstruct_state(&data, &fitted[0], &fitted[1])?;
            fidelity(&rho, &est)
        })
        .collect::<Result<_>>()?;
    Ok(ClosureReport { detectors: fitted, fidelities })
}
