//! Ridge of maximal concurrence in the (epsilon, Omega_A) plane for unequal
//! drives, compared with the analytic parabola.

use cascade_ent::harness::{landscape_ridge, max_ridge_deviation, Setup};
use cascade_ent::presets;
use cascade_ent::slh::DriveSpec;
use cascade_ent::units::{mhz, to_mhz};

fn main() -> cascade_ent::Result<()> {
    let setup = Setup { net: presets::network(2), drive: DriveSpec::default(), qubits: presets::qubits(), local_noise: true };
    let omegas: Vec<f64> = (0..6).map(|k| mhz(10.0 + 5.0 * k as f64)).collect();
    let eps: Vec<f64> = (0..41).map(|k| mhz(-15.0 + 0.5 * k as f64)).collect();
    let ratio = 0.66;

    let ridge = landscape_ridge(&setup, ratio, &omegas, &eps, 3)?;
    println!("{:>10} {:>12} {:>12} {:>8}", "Omega_A", "eps ridge", "eps parab.", "C");
    for p in &ridge {
        println!(
            "{:>10.1} {:>12.3} {:>12.3} {:>8.4}",
            to_mhz(p.omega_a),
            to_mhz(p.epsilon),
            to_mhz(p.parabola),
            p.concurrence
        );
    }
    println!("largest relative deviation: {:.2}%", 100.0 * max_ridge_deviation(&ridge));
    Ok(())
}
