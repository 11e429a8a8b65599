use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::entanglement::{concurrence, qubit_subspace};
use crate::error::{Error, Result};
use crate::linalg::{cr, pauli, project_to_physical, tensor, CMatrix, DensityMatrix};

/// Two-qubit Pauli labels without `II`, qubit A first.
pub const PAULI_LABELS: [&str; 15] = [
    "IX", "IY", "IZ", "XI", "XX", "XY", "XZ", "YI", "YX", "YY", "YZ", "ZI", "ZX", "ZY", "ZZ",
];

fn pauli_pair(label: &str) -> CMatrix {
    let mut ch = label.chars();
    let a = pauli(ch.next().unwrap()).unwrap();
    let b = pauli(ch.next().unwrap()).unwrap();
    tensor(&a, &b).into_data()
}

/// `⟨σ_a ⊗ σ_b⟩` in [`PAULI_LABELS`] order.
pub fn pauli_bars(rho: &DensityMatrix) -> Result<[f64; 15]> {
    let (q, _) = qubit_subspace(rho)?;
    let mut out = [0.0; 15];
    for (slot, label) in out.iter_mut().zip(PAULI_LABELS) {
        *slot = (q.data() * pauli_pair(label)).trace().re;
    }
    Ok(out)
}

/// Nearest physical state to `(I + Σ b_k P_k)/4`.
pub fn state_from_pauli(bars: &[f64; 15]) -> Result<DensityMatrix> {
    let mut m = CMatrix::identity(4, 4);
    for (b, label) in bars.iter().zip(PAULI_LABELS) {
        m += pauli_pair(label) * cr(*b);
    }
    project_to_physical(&(m / cr(4.0)), &[2, 2])
}

/// Mean and sample standard deviation of the concurrence over resampled
/// reconstructions. Each resample adds, per Pauli term, a discrepancy drawn
/// uniformly from the set; resample `r` uses RNG stream `r`.
pub fn bootstrap_concurrence_error<F>(
    pipeline: F,
    bars: &[f64; 15],
    discrepancies: &[[f64; 15]],
    n_resamples: usize,
    seed: u64,
) -> Result<(f64, f64)>
where
    F: Fn(&[f64; 15]) -> Result<DensityMatrix> + Sync,
{
    if discrepancies.is_empty() {
        return Err(Error::arg("discrepancy set is empty"));
    }
    if n_resamples < 2 {
        return Err(Error::arg("at least two resamples are needed"));
    }
    let values: Vec<f64> = (0..n_resamples)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(r as u64);
            let mut perturbed = *bars;
            for (k, v) in perturbed.iter_mut().enumerate() {
                *v += discrepancies[rng.random_range(0..discrepancies.len())][k];
            }
            concurrence(&pipeline(&perturbed)?)
        })
        .collect::<Result<_>>()?;
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Ok((mean, var.sqrt()))
}
