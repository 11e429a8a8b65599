//! Measurement emulation and two-qubit state reconstruction.
//!
//! Each measurement axis is a pre-rotation followed by dispersive readout and
//! is described by a binary POVM `{E, I − E}` with outcome values `(α, β)`.
//! Only the combination `M = αE + β(I − E)` enters the recorded data, so
//! two-qubit expectations are `Tr[ρ (M_i ⊗ M_j)]`.

mod bootstrap;
mod pipeline;
mod povm;
mod pulse;
mod readout;

#[cfg(test)]
mod tests;

pub use bootstrap::{bootstrap_concurrence_error, pauli_bars, state_from_pauli, PAULI_LABELS};
pub use pipeline::{
    calibrate_detectors, cardinal_pairs, stream_seed, tomography_closure, Acquisition, ClosureReport,
};
pub use povm::{
    expected_data, fit_povm, reconstruct_state, AxisPovm, DetectorModel, PairExpectation,
};
pub use pulse::{
    allxy_diagnostic, cardinal_expectations, measurement_pulse, physical_detector,
    prepare_cardinal_states, qubit_block, simulate_pulse, PulseAxis, PulseSpec, ALLXY_SEQUENCE,
    CARDINAL_LABELS,
};
pub use readout::{
    iq_to_expectation, records_to_csv, synthesize_shots, IqReference, MeasurementRecord,
    Moments, ReadoutModel,
};

use serde::{Deserialize, Serialize};

/// Measurement axis label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn label(self) -> &'static str {
        match self {
            Axis::X => "X",
            Axis::Y => "Y",
            Axis::Z => "Z",
        }
    }

    /// All nine ordered pairs, qubit A major.
    pub fn pairs() -> impl Iterator<Item = (Axis, Axis)> {
        Axis::ALL.into_iter().flat_map(|a| Axis::ALL.into_iter().map(move |b| (a, b)))
    }
}
