//! Concurrence against drive strength for equal drives, with and without a
//! drive-induced frequency shift.

use cascade_ent::harness::{parabolic_peak, stark_curve, Setup};
use cascade_ent::presets;
use cascade_ent::slh::DriveSpec;
use cascade_ent::units::mhz;

fn main() -> cascade_ent::Result<()> {
    let setup = Setup { net: presets::network(3), drive: DriveSpec::default(), qubits: presets::qubits(), local_noise: true };
    let omegas_mhz: Vec<f64> = (1..=15).map(|k| 2.0 * k as f64).collect();
    let omegas: Vec<f64> = omegas_mhz.iter().map(|&w| mhz(w)).collect();

    let plain = stark_curve(&setup, &omegas, 1.0, [0.0, 0.0])?;
    let shifted = stark_curve(&setup, &omegas, 1.0, [0.1, 0.07])?;
    println!("{:>10} {:>10} {:>12}", "Omega/2pi", "C", "C (shifted)");
    for ((w, a), b) in omegas_mhz.iter().zip(&plain).zip(&shifted) {
        println!("{w:>10.1} {a:>10.4} {b:>12.4}");
    }
    let (x, y, _) = parabolic_peak(&omegas_mhz, &plain);
    println!("peak C = {y:.4} at {x:.2} MHz");
    Ok(())
}
