#![allow(dead_code)]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use schur_relent::states::{random_density, DensityMatrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random full-rank pair `(ρ, σ)`; `σ` is mixed with `I/d` to keep it well conditioned.
pub fn random_pair(d: usize, seed: u64) -> (DensityMatrix, DensityMatrix) {
    let mut r = rng(seed);
    let rho = random_density(d, &mut r);
    let s = random_density(d, &mut r);
    let mixed = s.matrix() * num_complex::Complex64::new(0.8, 0.0)
        + DensityMatrix::maximally_mixed(d).matrix() * num_complex::Complex64::new(0.2, 0.0);
    (rho, schur_relent::states::validate_state(&mixed).unwrap())
}

pub fn diag_state(p: &[f64]) -> DensityMatrix {
    DensityMatrix::from_spectrum(p).unwrap()
}
