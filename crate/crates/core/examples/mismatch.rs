//! Best concurrence against the decay-rate mismatch for equal drives and for
//! drives matched to the squeezing condition.

use cascade_ent::entanglement::{dark_residual, rotated_frame_dissipators};
use cascade_ent::harness::{mismatch_optimum, Condition, Setup};
use cascade_ent::presets;
use cascade_ent::slh::{DriveSpec, NetworkSpec};
use cascade_ent::units::mhz;

fn main() -> cascade_ent::Result<()> {
    let setup = Setup { net: presets::network(2), drive: DriveSpec::default(), qubits: presets::qubits(), local_noise: true };
    let om: Vec<f64> = (0..21).map(|k| mhz(2.0 + 2.0 * k as f64)).collect();
    let em: Vec<f64> = (0..21).map(|k| mhz(-15.0 + k as f64)).collect();

    println!("{:>8} {:>8} {:>8}", "gB/gA", "CQA", "TMS");
    for r in [1.0, 1.5, 2.3, 3.0, 4.0] {
        let cqa = mismatch_optimum(&setup, r, Condition::Cqa, &om, &em, 3)?;
        let tms = mismatch_optimum(&setup, r, Condition::Tms, &om, &em, 3)?;
        println!("{r:>8.1} {:>8.4} {:>8.4}", cqa.concurrence, tms.concurrence);
    }

    // Lossless check that the matched drive leaves a squeezed dark state.
    let (ga, gb, delta, omega_a): (f64, f64, f64, f64) = (1.0, 2.3, 25.0, 40.0);
    let omega_b = omega_a * (ga / gb).sqrt();
    let net = NetworkSpec { gamma_a: ga, gamma_b: gb, eta: 1.0, prop_phase: 0.0, n_levels: 2 };
    let drive = DriveSpec { omega_a, omega_b, epsilon: (omega_b * omega_b - omega_a * omega_a) / (4.0 * delta), ..DriveSpec::default() };
    let frame = rotated_frame_dissipators(&net, &drive, delta)?;
    let ops = frame.normalized_dissipators()?;
    println!(
        "rotated frame: tanh r = {:.4} / {:.4}, dark residual {:.2e}",
        frame.tanh_r(),
        frame.tanh_r_alt,
        dark_residual(&ops[..2], &frame.tms_state())?
    );
    Ok(())
}
