//! Steady state of the measured device under a symmetric drive, next to the
//! lossless dark state it approximates.

use cascade_ent::dynamics::steady_state;
use cascade_ent::entanglement::{concurrence, cqa_dark_state, fidelity, qubit_subspace};
use cascade_ent::harness::state_metrics;
use cascade_ent::presets;
use cascade_ent::slh::{build_cascaded_model, build_device_model, NetworkSpec};
use cascade_ent::units::mhz;

fn main() -> cascade_ent::Result<()> {
    let omega_mhz = 12.0;
    let drive = presets::symmetric_drive(omega_mhz);
    let qubits = presets::qubits();

    for n_levels in [2, 3] {
        let model = build_device_model(&presets::network(n_levels), &drive, &qubits, true)?;
        let [c, purity, f_singlet, leakage] = state_metrics(&steady_state(&model)?)?;
        println!(
            "{n_levels} levels: C = {c:.4}  purity = {purity:.4}  F(singlet) = {f_singlet:.4}  leakage = {leakage:.2e}"
        );
    }

    let gamma = mhz(presets::GAMMA_A_MHZ);
    let ideal = NetworkSpec { gamma_a: gamma, gamma_b: gamma, eta: 1.0, prop_phase: 0.0, n_levels: 2 };
    let rho = steady_state(&build_cascaded_model(&ideal, &drive, &qubits)?)?;
    let dark = cqa_dark_state(drive.omega_a, presets::delta(), gamma)?.to_density();
    let (q, _) = qubit_subspace(&rho)?;
    println!(
        "lossless, equal rates: C = {:.4}, F(dark state) = {:.12}",
        concurrence(&rho)?,
        fidelity(&q, &dark)?
    );
    Ok(())
}
