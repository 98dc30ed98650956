//! Exact outcome distribution of the Schur-basis measurement aggregated over weight blocks.
//!
//! Inside a block `(λ, μ)` the operator `σ^{⊗n}` is the scalar `Π s_i^{μ_i}`, so every fine
//! outcome in the block carries the same estimate; only block masses are computed.

pub mod brute;
pub mod cycle_poly;
pub mod dense;
pub mod marginal;
pub mod poly;

use crate::combinatorics::dims::LnFactorials;
use crate::combinatorics::{enumerate_weights, enumerate_young, KostkaCache, YoungIndex};
use crate::error::{Error, Result};
use crate::states::{DensityMatrix, SigmaSpectrum};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Raw masses below `−NEGATIVE_ABORT` signal a numerical failure rather than roundoff.
pub const NEGATIVE_ABORT: f64 = 1e-6;
/// Raw masses below `−NEGATIVE_NOTE` are counted in the diagnostics.
pub const NEGATIVE_NOTE: f64 = 1e-9;
/// Largest `d^n` the brute backend accepts.
pub const BRUTE_MAX_STATES: usize = 1 << 14;
pub const BRUTE_MAX_N: usize = 8;
pub const CYCLE_MAX_N: usize = 30;
pub const CYCLE_MAX_D: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    Brute,
    CyclePoly,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Brute => "brute",
            Backend::CyclePoly => "cycle_poly",
        })
    }
}

impl FromStr for Backend {
    type Err = Error;
    fn from_str(s: &str) -> Result<Backend> {
        match s {
            "brute" => Ok(Backend::Brute),
            "cycle_poly" => Ok(Backend::CyclePoly),
            _ => Err(Error::Parse(format!("unknown backend {s:?}"))),
        }
    }
}

/// `brute` when `d^n <= 2^14` (and `n <= 8`), otherwise `cycle_poly`.
pub fn auto_backend(n: usize, d: usize) -> Backend {
    let fits = n <= BRUTE_MAX_N && (d as f64).powi(n as i32) <= BRUTE_MAX_STATES as f64;
    if fits {
        Backend::Brute
    } else {
        Backend::CyclePoly
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OutcomeAtom {
    pub lambda: YoungIndex,
    /// Occupation numbers in `σ`'s eigenbasis (eigenvalues descending).
    pub mu: Vec<usize>,
    /// `Tr ρ^{⊗n} P_λ P_μ`.
    pub p: f64,
    /// `ln(dim V_λ Π s_i^{μ_i})`; the unit mass is kept in log space.
    pub ln_q_unit: f64,
    /// `K_{λμ}`, the dimension of the `μ`-weight space of `U_λ`.
    pub multiplicity: u128,
    pub ln_dim_v: f64,
    pub ln_e: f64,
    /// `−(1/n) ln q_unit`; `NaN` until annotated.
    pub x: f64,
    /// Entropy-based approximation of `x`; `NaN` until annotated.
    pub x_star: f64,
}

impl OutcomeAtom {
    pub fn q_unit(&self) -> f64 {
        self.ln_q_unit.exp()
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ClampDiagnostics {
    /// Atoms whose raw mass was negative.
    pub clamped: usize,
    /// Atoms whose raw mass was below `−1e−9`.
    pub below_note: usize,
    pub min_raw: f64,
    /// Raw `Σp` before renormalization.
    pub raw_total: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct OutcomeDistribution {
    pub n: usize,
    pub d: usize,
    pub backend: Backend,
    pub sigma_spectrum: Vec<f64>,
    pub atoms: Vec<OutcomeAtom>,
    pub diagnostics: ClampDiagnostics,
    pub annotated: bool,
}

impl OutcomeDistribution {
    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.p).sum()
    }

    /// `Σ K_{λμ} q_unit`, which is `Tr σ^{⊗n} = 1`.
    pub fn total_sigma_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.multiplicity as f64 * a.q_unit()).sum()
    }

    /// `P(λ) = Σ_μ p(λ, μ)`, in `enumerate_young` order.
    pub fn lambda_marginal(&self) -> Vec<(YoungIndex, f64)> {
        let mut out: Vec<(YoungIndex, f64)> = Vec::new();
        for a in &self.atoms {
            match out.last_mut() {
                Some((l, p)) if *l == a.lambda => *p += a.p,
                _ => out.push((a.lambda.clone(), a.p)),
            }
        }
        out
    }
}

/// Every `(λ, μ)` with `K_{λμ} > 0`, lexicographic, with the `σ`-side data filled in.
pub(crate) fn atom_skeleton(n: usize, d: usize, sigma: &SigmaSpectrum) -> Vec<OutcomeAtom> {
    let ln_s = sigma.ln_eigenvalues();
    let lf = LnFactorials::new(n);
    let mut kc = KostkaCache::new();
    let weights = enumerate_weights(n, d);
    let mut atoms = Vec::new();
    for lambda in enumerate_young(n, d) {
        let ln_dim_v = lf.ln_sn_dim(lambda.parts());
        let ln_e = crate::combinatorics::dims::ln_e_factor(lambda.parts());
        for mu in &weights {
            let k = kc.kostka(&lambda, mu);
            if k == 0 {
                continue;
            }
            let ln_sigma: f64 = mu.iter().zip(&ln_s).map(|(&m, &l)| m as f64 * l).sum();
            atoms.push(OutcomeAtom {
                lambda: lambda.clone(),
                mu: mu.clone(),
                p: 0.0,
                ln_q_unit: ln_dim_v + ln_sigma,
                multiplicity: k,
                ln_dim_v,
                ln_e,
                x: f64::NAN,
                x_star: f64::NAN,
            });
        }
    }
    atoms
}

/// Clamps roundoff negatives to zero and renormalizes; errors below `−1e−6`.
pub(crate) fn clamp_and_normalize(atoms: &mut [OutcomeAtom]) -> Result<ClampDiagnostics> {
    let mut diag = ClampDiagnostics { min_raw: f64::INFINITY, ..Default::default() };
    for (i, a) in atoms.iter_mut().enumerate() {
        if !a.p.is_finite() {
            return Err(Error::NegativeProbability { value: a.p, atom: i });
        }
        diag.min_raw = diag.min_raw.min(a.p);
        diag.raw_total += a.p;
        if a.p < 0.0 {
            if a.p < -NEGATIVE_ABORT {
                return Err(Error::NegativeProbability { value: a.p, atom: i });
            }
            if a.p < -NEGATIVE_NOTE {
                diag.below_note += 1;
            }
            diag.clamped += 1;
            a.p = 0.0;
        }
    }
    let total: f64 = atoms.iter().map(|a| a.p).sum();
    if (total - 1.0).abs() > NEGATIVE_ABORT {
        return Err(Error::InvalidState(format!("outcome masses sum to {total}")));
    }
    for a in atoms.iter_mut() {
        a.p /= total;
    }
    Ok(diag)
}

fn check_pair(rho: &DensityMatrix, sigma: &SigmaSpectrum) -> Result<()> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch { expected: sigma.dim(), found: rho.dim() });
    }
    Ok(())
}

/// Computes the distribution with the requested backend.
pub fn compute(rho: &DensityMatrix, sigma: &SigmaSpectrum, n: usize, backend: Backend) -> Result<OutcomeDistribution> {
    match backend {
        Backend::Brute => brute::brute_distribution(rho, sigma, n),
        Backend::CyclePoly => cycle_poly::cycle_poly_distribution(rho, sigma, n),
    }
}

pub use brute::brute_distribution;
pub use cycle_poly::cycle_poly_distribution;
