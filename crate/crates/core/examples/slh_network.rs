//! Builds the cascade from qubit and beam-splitter components and shows how
//! the link efficiency enters the master equation.

use cascade_ent::slh::{beam_splitter_triple, qubit_triple, series_product};

fn main() -> cascade_ent::Result<()> {
    let dims = [2, 2];
    let (gamma, delta, omega) = (1.0, 2.0, 1.5);
    let upstream = qubit_triple(gamma, delta, omega, 2, 0.0)?.embed(0, &dims)?;
    let downstream = qubit_triple(gamma, -delta, omega, 2, 0.0)?.embed(1, &dims)?;

    for eta in [1.0, 0.9, 0.0] {
        let link = beam_splitter_triple(eta, 0.0, &dims)?;
        let net = series_product(&downstream, &series_product(&link, &upstream)?)?;
        let model = net.to_lindblad()?;
        println!("eta = {eta}: {} ports, {} collapse operators", net.ports(), model.collapse_ops().len());
        let h = model.h().data();
        println!("  coupling <01|H|10> = {:.4}", h[(1, 2)]);
    }
    Ok(())
}
