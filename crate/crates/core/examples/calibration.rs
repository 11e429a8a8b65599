//! Link efficiency from driven-transmon transmission spectra and T1 from
//! decay curves.

use cascade_ent::calibration::{
    driven_transmon_spectrum, fit_exponential_t1, fit_spectrum, transmission_efficiency, ScatterConfig,
};
use cascade_ent::presets;
use cascade_ent::units::mhz;

fn main() -> cascade_ent::Result<()> {
    let eta2_true = 0.95f64;
    let template = ScatterConfig {
        detuning_grid: (0..41).map(|k| mhz(-4.0 + 0.2 * k as f64)).collect(),
        anharm: 0.5 * mhz(presets::ANHARM_MHZ),
        xi: mhz(0.5),
        gamma: mhz(presets::GAMMA_A_MHZ),
        n_levels: 4,
    };
    let spectrum = driven_transmon_spectrum(&template)?;
    let magnitude = |scale: f64| -> Vec<f64> { spectrum.iter().map(|a| scale * a.norm() / template.xi).collect() };
    let through = fit_spectrum(&template, &magnitude(eta2_true.sqrt()))?;
    let reference = fit_spectrum(&template, &magnitude(1.0))?;
    let (eta2, eta2_std) = transmission_efficiency(&through, &reference)?;
    println!("xi/2pi = {:.4} MHz, eta^2 = {eta2:.4} +/- {eta2_std:.1e} (true {eta2_true})", through.xi_hat / mhz(1.0));

    let times: Vec<f64> = (0..61).map(|k| 0.025 * k as f64).collect();
    for q in presets::qubits() {
        let pops: Vec<f64> = times.iter().map(|t| 0.97 * (-t / q.t1).exp() + 0.02).collect();
        let fit = fit_exponential_t1(&times, &pops)?;
        println!("T1 = {:.1} ns (true {:.1} ns)", fit.t1 * 1e3, q.t1 * 1e3);
    }
    Ok(())
}
