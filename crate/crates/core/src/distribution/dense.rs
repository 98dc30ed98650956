//! Explicit operators on `(C^d)^{⊗n}` for small `d^n`: isotypic projectors, block spectra,
//! pinching and the operator form of the mean square error.
//!
//! Everything is expressed in `σ`'s eigenbasis, where `σ^{⊗n}` is diagonal and the weight
//! projectors `P_μ` are coordinate projectors. `P_λ` is basis independent.

use crate::combinatorics::cycles::{cycle_type_of, next_permutation};
use crate::combinatorics::dims::{factorial, schur_dim_total, sn_dim};
use crate::combinatorics::{enumerate_young, CharacterCache, CycleType, KostkaCache, YoungIndex};
use crate::error::{Error, Result};
use crate::linalg::{herm_eig, kron_power, psd_power, spectral_fn, trace_prod_re, CMat, SUPPORT_CUTOFF};
use crate::states::{relative_entropy, sandwiched_renyi, DensityMatrix, SigmaSpectrum};
use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::Serialize;
use std::collections::HashMap;

/// Largest `d^n` for which dense operators are built.
pub const DENSE_MAX_STATES: usize = 1024;

pub struct DenseModel {
    pub n: usize,
    pub d: usize,
    /// `ρ̃^{⊗n}` in `σ`'s eigenbasis.
    pub rho_n: CMat,
    /// Diagonal of `σ^{⊗n}` in its eigenbasis, as logs.
    pub ln_sigma_n: Vec<f64>,
    /// Occupation vector of each basis string.
    pub string_weight: Vec<Vec<usize>>,
    pub projectors: Vec<(YoungIndex, CMat)>,
    pub rho: DensityMatrix,
    pub sigma: DensityMatrix,
}

fn string_digits(s: usize, n: usize, d: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    let mut c = s;
    for k in (0..n).rev() {
        out[k] = c % d;
        c /= d;
    }
    out
}

/// `P_λ = (dim V_λ / n!) Σ_π χ^λ(π) U(π)` for every `λ ∈ Y_d^n`.
pub fn isotypic_projectors(n: usize, d: usize) -> Result<Vec<(YoungIndex, CMat)>> {
    let big_n = checked_states(n, d)?;
    let shapes = enumerate_young(n, d);
    let nfact = factorial(n).to_f64().expect("small");
    let coef: Vec<f64> = shapes.iter().map(|l| sn_dim(l).to_f64().expect("small") / nfact).collect();
    let digits: Vec<Vec<usize>> = (0..big_n).map(|s| string_digits(s, n, d)).collect();
    let mut cache = CharacterCache::new();
    let mut chars: HashMap<Vec<usize>, Vec<f64>> = HashMap::new();
    let mut mats: Vec<CMat> = shapes.iter().map(|_| CMat::zeros(big_n, big_n)).collect();
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        let ct = cycle_type_of(&perm);
        let chi = chars
            .entry(ct.clone())
            .or_insert_with(|| {
                let c = CycleType::new(ct);
                shapes.iter().map(|l| cache.character(l, &c).to_f64().expect("small")).collect()
            })
            .clone();
        for (x, dx) in digits.iter().enumerate() {
            let mut y = 0;
            for k in 0..n {
                y = y * d + dx[perm[k]];
            }
            for (li, m) in mats.iter_mut().enumerate() {
                m[(y, x)] += Complex64::new(coef[li] * chi[li], 0.0);
            }
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(shapes.into_iter().zip(mats).collect())
}

fn checked_states(n: usize, d: usize) -> Result<usize> {
    let big = (d as f64).powi(n as i32);
    if n == 0 || big > DENSE_MAX_STATES as f64 {
        return Err(Error::GuardExceeded(format!(
            "dense operators need 1 <= n and d^n <= {DENSE_MAX_STATES} (n={n}, d={d})"
        )));
    }
    Ok(d.pow(n as u32))
}

#[derive(Clone, Debug)]
pub struct BlockEig {
    /// Eigenvalues of `ρ_λ` (trace `P(λ)`), descending, length `dim U_λ`.
    pub spectrum: Vec<f64>,
    /// `log(ρ_λ ⊗ I_{V_λ})` on its support, embedded in the full space.
    pub log_block: CMat,
}

impl DenseModel {
    pub fn new(rho: &DensityMatrix, sigma: &DensityMatrix, n: usize) -> Result<DenseModel> {
        let spec = SigmaSpectrum::new(sigma)?;
        let d = spec.dim();
        if rho.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, found: rho.dim() });
        }
        let big_n = checked_states(n, d)?;
        let rho_n = kron_power(&spec.rotate(rho), n);
        let ln_s = spec.ln_eigenvalues();
        let string_weight: Vec<Vec<usize>> = (0..big_n)
            .map(|s| {
                let mut w = vec![0; d];
                for x in string_digits(s, n, d) {
                    w[x] += 1;
                }
                w
            })
            .collect();
        let ln_sigma_n = string_weight.iter().map(|w| w.iter().zip(&ln_s).map(|(&m, &l)| m as f64 * l).sum()).collect();
        Ok(DenseModel {
            n,
            d,
            rho_n,
            ln_sigma_n,
            string_weight,
            projectors: isotypic_projectors(n, d)?,
            rho: rho.clone(),
            sigma: sigma.clone(),
        })
    }

    fn projector(&self, lambda: &YoungIndex) -> Result<&CMat> {
        self.projectors.iter().find(|(l, _)| l == lambda).map(|(_, p)| p).ok_or_else(|| {
            Error::InvalidParameter(format!("{lambda} is not a Young index of weight {} and length {}", self.n, self.d))
        })
    }

    /// `P_λ ρ^{⊗n} P_λ = ρ_λ ⊗ I/dim V_λ`: eigenvalues come in runs of `dim V_λ`; each run sums to
    /// one eigenvalue of `ρ_λ`.
    pub fn block_eig(&self, lambda: &YoungIndex) -> Result<BlockEig> {
        let p = self.projector(lambda)?;
        let dim_v = sn_dim(lambda).to_usize().expect("small");
        let dim_u = crate::combinatorics::weyl_dim(lambda).to_usize().expect("small");
        let block = p * &self.rho_n * p;
        let eig = herm_eig(&block);
        let mut desc = eig.values.clone();
        desc.reverse();
        let spectrum: Vec<f64> =
            (0..dim_u).map(|k| desc[k * dim_v..(k + 1) * dim_v].iter().sum::<f64>().max(0.0)).collect();
        let scale = dim_v as f64;
        let log_block = spectral_fn(&eig, |l| (l * scale).ln(), |l| l * scale > SUPPORT_CUTOFF);
        Ok(BlockEig { spectrum, log_block })
    }

    /// `(λ, μ)` block projectors `P_λ P_μ` with non-zero rank.
    pub fn lambda_mu_blocks(&self) -> Vec<CMat> {
        let mut kc = KostkaCache::new();
        let weights = crate::combinatorics::enumerate_weights(self.n, self.d);
        let mut out = Vec::new();
        for (lambda, p) in &self.projectors {
            for mu in &weights {
                if kc.kostka(lambda, mu) == 0 {
                    continue;
                }
                let mut b = p.clone();
                for (s, w) in self.string_weight.iter().enumerate() {
                    if w != mu {
                        b.column_mut(s).fill(Complex64::new(0.0, 0.0));
                    }
                }
                out.push(b);
            }
        }
        out
    }

    /// `Tr ρ^{⊗n} A²` with `A = (1/n)(log ρ^{⊗n} − log σ^{⊗n}) − D − (1/n) Σ_λ log(ρ_λ ⊗ I)`.
    pub fn operator_mse(&self) -> Result<f64> {
        let dval = relative_entropy(&self.rho, &self.sigma)?;
        let nf = self.n as f64;
        let big_n = self.rho_n.nrows();
        let mut a = crate::linalg::log_on_support(&self.rho_n);
        for (s, l) in self.ln_sigma_n.iter().enumerate() {
            a[(s, s)] -= Complex64::new(*l, 0.0);
        }
        for (lambda, _) in &self.projectors {
            a -= self.block_eig(lambda)?.log_block;
        }
        let a = a.unscale(nf) - CMat::identity(big_n, big_n) * Complex64::new(dval, 0.0);
        Ok(trace_prod_re(&self.rho_n, &(&a * &a)))
    }

    /// `Tr ρ_n (log ρ_n)²` for `ρ_n = ⊕_λ ρ_λ`.
    pub fn block_log_second_moment(&self) -> Result<f64> {
        let mut s = 0.0;
        for (lambda, _) in &self.projectors {
            for e in self.block_eig(lambda)?.spectrum {
                if e > SUPPORT_CUTOFF {
                    s += e * e.ln() * e.ln();
                }
            }
        }
        Ok(s)
    }
}

/// Spectrum of `ρ_λ`, descending.
pub fn block_spectrum(rho: &DensityMatrix, sigma: &DensityMatrix, n: usize, lambda: &YoungIndex) -> Result<Vec<f64>> {
    Ok(DenseModel::new(rho, sigma, n)?.block_eig(lambda)?.spectrum)
}

/// Minimum eigenvalue of `B Γ(state) − state` with `Γ(X) = Σ_b P_b X P_b`.
pub fn pinching_defect(state: &CMat, blocks: &[CMat]) -> Result<f64> {
    let dim = state.nrows();
    if blocks.is_empty() {
        return Err(Error::InvalidParameter("no projectors".into()));
    }
    let mut sum = CMat::zeros(dim, dim);
    for (i, p) in blocks.iter().enumerate() {
        if p.nrows() != dim || crate::linalg::max_abs_diff(&(p * p), p) > 1e-9 {
            return Err(Error::InvalidParameter(format!("block {i} is not a projector")));
        }
        for q in &blocks[i + 1..] {
            if (p * q).iter().any(|z| z.norm() > 1e-9) {
                return Err(Error::InvalidParameter("projectors are not orthogonal".into()));
            }
        }
        sum += p;
    }
    if crate::linalg::max_abs_diff(&sum, &CMat::identity(dim, dim)) > 1e-9 {
        return Err(Error::InvalidParameter("projectors do not sum to the identity".into()));
    }
    let mut pinched = CMat::zeros(dim, dim);
    for p in blocks {
        pinched += p * state * p;
    }
    let m = pinched * Complex64::new(blocks.len() as f64, 0.0) - state;
    Ok(herm_eig(&m).values[0])
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct RenyiTraceCheck {
    /// `Tr Γ(ρ^{⊗n})^α (σ^{⊗n})^{1−α}`.
    pub lhs: f64,
    /// `d_{n,d}^{1−α} (Tr(σ^{(1−α)/2α} ρ σ^{(1−α)/2α})^α)^n`.
    pub rhs: f64,
    pub holds: bool,
}

/// Trace form of the pinched Rényi bound, `Γ` the `(λ, μ)` pinching.
pub fn renyi_trace_check(rho: &DensityMatrix, sigma: &DensityMatrix, n: usize, alpha: f64) -> Result<RenyiTraceCheck> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!("alpha must lie in (0,1), got {alpha}")));
    }
    let model = DenseModel::new(rho, sigma, n)?;
    let blocks = model.lambda_mu_blocks();
    let dim = model.rho_n.nrows();
    let mut pinched = CMat::zeros(dim, dim);
    for p in &blocks {
        pinched += p * &model.rho_n * p;
    }
    let pa = psd_power(&pinched, alpha);
    let lhs: f64 = (0..dim).map(|s| pa[(s, s)].re * ((1.0 - alpha) * model.ln_sigma_n[s]).exp()).sum();
    let q = ((alpha - 1.0) * sandwiched_renyi(rho, sigma, alpha)?).exp();
    let dnd = schur_dim_total(n, model.d).to_f64().expect("finite");
    let rhs = dnd.powf(1.0 - alpha) * q.powi(n as i32);
    Ok(RenyiTraceCheck { lhs, rhs, holds: lhs <= rhs * (1.0 + 1e-9) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::trace;

    #[test]
    fn projectors_resolve_identity() {
        for (n, d) in [(2, 2), (3, 2), (3, 3), (4, 2)] {
            let ps = isotypic_projectors(n, d).unwrap();
            let dim = d.pow(n as u32);
            let mut sum = CMat::zeros(dim, dim);
            for (l, p) in &ps {
                assert!(crate::linalg::max_abs_diff(&(p * p), p) < 1e-12);
                let rank = trace(p).re;
                let expect = (crate::combinatorics::weyl_dim(l) * sn_dim(l)).to_f64().unwrap();
                assert!((rank - expect).abs() < 1e-10);
                sum += p;
            }
            assert!(crate::linalg::max_abs_diff(&sum, &CMat::identity(dim, dim)) < 1e-12);
        }
    }

    #[test]
    fn block_spectrum_of_mixed_pair() {
        let half = DensityMatrix::maximally_mixed(2);
        let sym = YoungIndex::new(vec![0, 2]).unwrap();
        let anti = YoungIndex::new(vec![1, 1]).unwrap();
        let s = block_spectrum(&half, &half, 2, &sym).unwrap();
        assert_eq!(s.len(), 3);
        assert!(s.iter().all(|v| (v - 0.25).abs() < 1e-14));
        let a = block_spectrum(&half, &half, 2, &anti).unwrap();
        assert!((a.iter().sum::<f64>() - 0.25).abs() < 1e-14);
    }

    #[test]
    fn pure_state_lives_in_symmetric_block() {
        let zero = DensityMatrix::from_spectrum(&[1.0, 0.0]).unwrap();
        let half = DensityMatrix::maximally_mixed(2);
        let top = YoungIndex::new(vec![0, 3]).unwrap();
        let s = block_spectrum(&zero, &half, 3, &top).unwrap();
        assert!((s[0] - 1.0).abs() < 1e-14 && s[1..].iter().all(|v| v.abs() < 1e-14));
    }

    #[test]
    fn pinching_examples() {
        let h = Complex64::new(0.5, 0.0);
        let plus = CMat::from_row_slice(2, 2, &[h, h, h, h]);
        assert!(pinching_defect(&plus, &[CMat::identity(2, 2)]).unwrap().abs() < 1e-15);
        let p0 = crate::linalg::diag(&[1.0, 0.0]);
        let p1 = crate::linalg::diag(&[0.0, 1.0]);
        assert!(pinching_defect(&plus, &[p0.clone(), p1]).unwrap().abs() < 1e-15);
        assert!(pinching_defect(&plus, &[p0]).is_err());
    }

    #[test]
    fn renyi_trace_for_equal_states() {
        let s = DensityMatrix::from_spectrum(&[0.3, 0.7]).unwrap();
        let c = renyi_trace_check(&s, &s, 3, 0.5).unwrap();
        assert!((c.lhs - 1.0).abs() < 1e-12);
        assert!(c.holds);
    }
}
