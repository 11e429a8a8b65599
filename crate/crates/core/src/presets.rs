//! Parameters of the measured two-qubit device.

use crate::slh::{DriveSpec, NetworkSpec, TransmonSpec};
use crate::units::{ghz, mhz, ns};

/// Waveguide decay rate of qubit A, `γ_A/2π` in MHz.
pub const GAMMA_A_MHZ: f64 = 0.53;
/// Waveguide decay rate of qubit B, `γ_B/2π` in MHz.
pub const GAMMA_B_MHZ: f64 = 1.22;
/// Power transmission of the link between the qubits.
pub const ETA_SQUARED: f64 = 0.98;
/// Qubit-qubit detuning `2Δ/2π` in MHz.
pub const QUBIT_DETUNING_MHZ: f64 = 26.6;
/// Placeholder anharmonicity `α/2π` in MHz (not measured).
pub const ANHARM_MHZ: f64 = -200.0;

pub fn qubit_a() -> TransmonSpec {
    TransmonSpec {
        freq: ghz(4.6522),
        anharm: mhz(ANHARM_MHZ),
        t1: ns(302.0),
        t1_intrinsic: 38.0,
        t2_ramsey: ns(476.0),
    }
}

pub fn qubit_b() -> TransmonSpec {
    TransmonSpec {
        freq: ghz(4.6522) + mhz(QUBIT_DETUNING_MHZ),
        anharm: mhz(ANHARM_MHZ),
        t1: ns(133.0),
        t1_intrinsic: 44.0,
        t2_ramsey: ns(266.0),
    }
}

pub fn qubits() -> [TransmonSpec; 2] {
    [qubit_a(), qubit_b()]
}

/// Half the qubit-qubit detuning, `Δ` in rad/µs.
pub fn delta() -> f64 {
    mhz(QUBIT_DETUNING_MHZ) / 2.0
}

pub fn network(n_levels: usize) -> NetworkSpec {
    NetworkSpec {
        gamma_a: mhz(GAMMA_A_MHZ),
        gamma_b: mhz(GAMMA_B_MHZ),
        eta: ETA_SQUARED.sqrt(),
        prop_phase: 0.0,
        n_levels,
    }
}

/// Symmetric drive of strength `Ω/2π = omega_mhz` on both qubits.
pub fn symmetric_drive(omega_mhz: f64) -> DriveSpec {
    DriveSpec {
        omega_a: mhz(omega_mhz),
        omega_b: mhz(omega_mhz),
        ..DriveSpec::default()
    }
}
