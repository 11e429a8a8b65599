//! Simulation and analysis toolkit for driven-dissipative remote entanglement
//! between two qubits coupled through a unidirectional waveguide.

pub mod calibration;
pub mod dynamics;
pub mod entanglement;
pub mod error;
pub mod fit;
pub mod harness;
pub mod linalg;
pub mod output;
pub mod presets;
pub mod slh;
pub mod tomography;
pub mod units;

pub use error::{Error, Result};
