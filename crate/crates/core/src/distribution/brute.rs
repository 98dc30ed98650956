//! Direct evaluation of `Tr[ρ̃^{⊗n} P_λ P_μ]` by traversing every permutation and every string.

use super::{
    atom_skeleton, check_pair, clamp_and_normalize, Backend, OutcomeDistribution, BRUTE_MAX_N, BRUTE_MAX_STATES,
};
use crate::combinatorics::cycles::{cycle_type_of, enumerate_partitions, next_permutation};
use crate::combinatorics::dims::{factorial, sn_dim};
use crate::combinatorics::{enumerate_weights, enumerate_young, CharacterCache, CycleType};
use crate::error::{Error, Result};
use crate::states::{DensityMatrix, SigmaSpectrum};
use num_complex::Complex64;
use num_traits::ToPrimitive;
use std::collections::HashMap;

/// Class-summed traces `A[c][μ] = Σ_{π∈c} Tr[ρ̃^{⊗n} U(π) P_μ]` and fixed-string counts.
pub(crate) struct ClassTraces {
    pub classes: Vec<Vec<usize>>,
    pub weights: Vec<Vec<usize>>,
    pub traces: Vec<Vec<Complex64>>,
    pub fixed: Vec<Vec<i128>>,
}

pub(crate) fn class_traces(rho_t: &[Complex64], d: usize, n: usize) -> ClassTraces {
    let classes = enumerate_partitions(n);
    let class_index: HashMap<Vec<usize>, usize> = classes.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
    let weights = enumerate_weights(n, d);
    let weight_index: HashMap<Vec<usize>, usize> = weights.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();

    let nstr = d.pow(n as u32);
    let mut digits = vec![0u8; nstr * n];
    let mut wtype = vec![0usize; nstr];
    for s in 0..nstr {
        let mut c = s;
        let mut occ = vec![0usize; d];
        for k in (0..n).rev() {
            let x = c % d;
            c /= d;
            digits[s * n + k] = x as u8;
            occ[x] += 1;
        }
        wtype[s] = weight_index[&occ];
    }

    let mut traces = vec![vec![Complex64::new(0.0, 0.0); weights.len()]; classes.len()];
    let mut fixed = vec![vec![0i128; weights.len()]; classes.len()];
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        let ci = class_index[&cycle_type_of(&perm)];
        let row = &mut traces[ci];
        let frow = &mut fixed[ci];
        for s in 0..nstr {
            let x = &digits[s * n..(s + 1) * n];
            let mut val = Complex64::new(1.0, 0.0);
            let mut is_fixed = true;
            for k in 0..n {
                let a = x[k] as usize;
                let b = x[perm[k]] as usize;
                val *= rho_t[a * d + b];
                is_fixed &= a == b;
            }
            row[wtype[s]] += val;
            if is_fixed {
                frow[wtype[s]] += 1;
            }
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    ClassTraces { classes, weights, traces, fixed }
}

/// Exact distribution for `n <= 8`, `d^n <= 2^14`.
pub fn brute_distribution(rho: &DensityMatrix, sigma: &SigmaSpectrum, n: usize) -> Result<OutcomeDistribution> {
    check_pair(rho, sigma)?;
    let d = sigma.dim();
    if n == 0 || n > BRUTE_MAX_N || (d as f64).powi(n as i32) > BRUTE_MAX_STATES as f64 {
        return Err(Error::GuardExceeded(format!(
            "brute backend needs 1 <= n <= {BRUTE_MAX_N} and d^n <= {BRUTE_MAX_STATES} (n={n}, d={d})"
        )));
    }
    let rt = sigma.rotate(rho);
    let rho_t: Vec<Complex64> = (0..d * d).map(|k| rt[(k / d, k % d)]).collect();
    let ct = class_traces(&rho_t, d, n);
    let nfact = factorial(n).to_i128().expect("n <= 8");
    let weight_pos: HashMap<&Vec<usize>, usize> = ct.weights.iter().enumerate().map(|(i, w)| (w, i)).collect();

    let mut cache = CharacterCache::new();
    let mut per_lambda: HashMap<Vec<usize>, (Vec<f64>, Vec<i128>)> = HashMap::new();
    for lambda in enumerate_young(n, d) {
        let dim_v = sn_dim(&lambda).to_f64().expect("small");
        let chars: Vec<i128> = ct
            .classes
            .iter()
            .map(|c| cache.character(&lambda, &CycleType::new(c.clone())).to_i128().expect("small"))
            .collect();
        let mut p = vec![0.0; ct.weights.len()];
        let mut k = vec![0i128; ct.weights.len()];
        for (w, (pw, kw)) in p.iter_mut().zip(k.iter_mut()).enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            let mut kacc = 0i128;
            for (ci, &chi) in chars.iter().enumerate() {
                acc += ct.traces[ci][w] * chi as f64;
                kacc += chi * ct.fixed[ci][w];
            }
            *pw = dim_v * acc.re / nfact as f64;
            debug_assert_eq!(kacc % nfact, 0);
            *kw = kacc / nfact;
        }
        per_lambda.insert(lambda.parts().to_vec(), (p, k));
    }

    let mut atoms = atom_skeleton(n, d, sigma);
    for a in atoms.iter_mut() {
        let (p, k) = &per_lambda[a.lambda.parts()];
        let w = weight_pos[&a.mu];
        a.p = p[w];
        let kk = u128::try_from(k[w]).expect("multiplicity is non-negative");
        assert_eq!(kk, a.multiplicity, "character-derived multiplicity disagrees with Kostka count");
    }
    let diagnostics = clamp_and_normalize(&mut atoms)?;
    Ok(OutcomeDistribution {
        n,
        d,
        backend: Backend::Brute,
        sigma_spectrum: sigma.eigenvalues.clone(),
        atoms,
        diagnostics,
        annotated: false,
    })
}
