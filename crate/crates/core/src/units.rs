//! Unit conversions at the configuration boundary.
//!
//! Internally rates and frequencies are angular (rad/µs) and times are µs.

use std::f64::consts::TAU;

/// Cyclic frequency in MHz to angular rad/µs.
pub fn mhz(f: f64) -> f64 {
    TAU * f
}

/// Cyclic frequency in GHz to angular rad/µs.
pub fn ghz(f: f64) -> f64 {
    TAU * 1e3 * f
}

/// Angular rad/µs to cyclic MHz.
pub fn to_mhz(w: f64) -> f64 {
    w / TAU
}

pub fn ns(t: f64) -> f64 {
    t * 1e-3
}

pub fn to_ns(t_us: f64) -> f64 {
    t_us * 1e3
}
