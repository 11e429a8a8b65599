//! Recovers drive-induced frequency-shift coefficients from a concurrence
//! curve.

use cascade_ent::harness::{fit_stark_lambda, stark_curve, Setup};
use cascade_ent::presets;
use cascade_ent::slh::DriveSpec;
use cascade_ent::units::mhz;

fn main() -> cascade_ent::Result<()> {
    let setup = Setup { net: presets::network(3), drive: DriveSpec::default(), qubits: presets::qubits(), local_noise: true };
    let omegas: Vec<f64> = (1..=15).map(|k| mhz(2.0 * k as f64)).collect();
    let truth = [0.1, 0.07];
    let data = stark_curve(&setup, &omegas, 1.0, truth)?;
    let fit = fit_stark_lambda(&setup, &omegas, 1.0, &data)?;
    println!(
        "lambda_A = {:.4} +/- {:.1e}, lambda_B = {:.4} +/- {:.1e} (true {truth:?})",
        fit.lambda[0], fit.lambda_std[0], fit.lambda[1], fit.lambda_std[1]
    );
    println!("peak at {:.2} MHz (data) / {:.2} MHz (fit)", fit.peak_data / mhz(1.0), fit.peak_fit / mhz(1.0));
    Ok(())
}
