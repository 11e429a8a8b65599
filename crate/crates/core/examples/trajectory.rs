//! Approach to the steady state from the ground state, out to a millisecond.

use cascade_ent::dynamics::{evolve_exact, steady_state};
use cascade_ent::entanglement::concurrence;
use cascade_ent::harness::settling;
use cascade_ent::linalg::DensityMatrix;
use cascade_ent::presets;
use cascade_ent::slh::build_device_model;

fn main() -> cascade_ent::Result<()> {
    let model = build_device_model(&presets::network(3), &presets::symmetric_drive(12.0), &presets::qubits(), true)?;
    let times: Vec<f64> = (0..=50).map(|k| 0.01 * 1e5f64.powf(k as f64 / 50.0)).collect();
    let traj = evolve_exact(&model, &DensityMatrix::basis(&[3, 3], &[0, 0])?, &times)?;
    let conc = traj.observable("concurrence").unwrap();
    for (t, c) in times.iter().zip(conc).step_by(5) {
        println!("t = {t:>10.3} us  C = {c:.5}");
    }
    let s = settling(&times, conc, concurrence(&steady_state(&model)?)?);
    println!(
        "steady C = {:.5}, within 1% after {:.3} us, drift after 10 us {:.2e}",
        s.steady, s.settling_time, s.drift_after_10us
    );
    Ok(())
}
