//! Detector tomography and state reconstruction of the steady state from
//! synthetic IQ shots, with a bootstrap error bar.

use cascade_ent::harness::{device_config, run_experiment, Mode};
use cascade_ent::presets;
use cascade_ent::tomography::{tomography_closure, Acquisition};

fn main() -> cascade_ent::Result<()> {
    let qubits = presets::qubits();
    for (name, acq) in [("noiseless", Acquisition::noiseless()), ("1e4 shots", Acquisition::with_shots(10_000))] {
        let r = tomography_closure(&qubits, 20, &acq, 1)?;
        println!("closure, {name}: mean F = {:.5}, min F = {:.5}", r.mean_fidelity(), r.min_fidelity());
    }

    let mut cfg = device_config(Mode::TomographyDemo);
    cfg.drive.omega_a_mhz = 12.0;
    cfg.drive.omega_b_mhz = 12.0;
    cfg.seed = 3;
    let result = run_experiment(&cfg, None)?;
    print!("{}", result.table.to_csv());
    for (k, v) in &result.summary {
        println!("{k} = {v:.4}");
    }
    Ok(())
}
