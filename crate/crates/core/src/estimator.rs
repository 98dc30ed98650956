//! Classical post-processing of the Schur-basis outcome: the estimate, its entropy-based
//! approximation, exact error statistics, sampling and the normality report.

use crate::combinatorics::dims::{ln_biguint, schur_dim_total, shannon_entropy_of_type};
use crate::distribution::OutcomeDistribution;
use crate::error::{Error, Result};
use crate::states::SigmaSpectrum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

/// Draws per independently seeded stream in [`sample_outcomes`].
pub const SAMPLE_CHUNK: usize = 1 << 16;

/// `x* = −H(λ/n) − Σ (μ_i/n) log s_i`.
///
/// Satisfies `0 <= x − x* <= ((d−1) log(n+1) − log e(λ))/n`.
pub fn x_star(lambda_parts: &[usize], mu: &[usize], ln_s: &[f64]) -> f64 {
    let n: usize = lambda_parts.iter().sum();
    let nf = n as f64;
    -shannon_entropy_of_type(lambda_parts) - mu.iter().zip(ln_s).map(|(&m, &l)| m as f64 * l).sum::<f64>() / nf
}

/// The variant with `+H(λ/n)`; it drifts from `x` by about `2H(λ/n)` and is kept only so the
/// two orientations can be compared.
pub fn x_star_plus_entropy(lambda_parts: &[usize], mu: &[usize], ln_s: &[f64]) -> f64 {
    x_star(lambda_parts, mu, ln_s) + 2.0 * shannon_entropy_of_type(lambda_parts)
}

/// Fills `x = −(1/n) log(dim V_λ Π s_i^{μ_i})` and `x*` on every atom.
pub fn annotate_estimates(mut dist: OutcomeDistribution, sigma: &SigmaSpectrum) -> Result<OutcomeDistribution> {
    if sigma.eigenvalues.len() != dist.d {
        return Err(Error::DimensionMismatch { expected: dist.d, found: sigma.eigenvalues.len() });
    }
    if sigma.eigenvalues.iter().zip(&dist.sigma_spectrum).any(|(a, b)| (a - b).abs() > 1e-15) {
        return Err(Error::InvalidParameter("sigma spectrum differs from the one used for the distribution".into()));
    }
    let ln_s = sigma.ln_eigenvalues();
    let nf = dist.n as f64;
    for a in dist.atoms.iter_mut() {
        let ln_sigma: f64 = a.mu.iter().zip(&ln_s).map(|(&m, &l)| m as f64 * l).sum();
        a.ln_q_unit = a.ln_dim_v + ln_sigma;
        a.x = -a.ln_q_unit / nf;
        a.x_star = x_star(a.lambda.parts(), &a.mu, &ln_s);
    }
    dist.annotated = true;
    Ok(dist)
}

fn require_annotated(dist: &OutcomeDistribution) -> Result<()> {
    if !dist.annotated {
        return Err(Error::InvalidParameter("distribution has not been annotated with estimates".into()));
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct MseStats {
    pub mean_x: f64,
    pub mse: f64,
    pub bias: f64,
    pub mse_star: f64,
    pub bias_star: f64,
}

/// Exact `Σ p (x − D)²` and friends.
pub fn exact_mse(dist: &OutcomeDistribution, d_true: f64) -> Result<MseStats> {
    require_annotated(dist)?;
    if !d_true.is_finite() {
        return Err(Error::SupportViolation);
    }
    let (mut m, mut m2, mut ms, mut ms2) = (0.0, 0.0, 0.0, 0.0);
    for a in &dist.atoms {
        m += a.p * a.x;
        m2 += a.p * (a.x - d_true).powi(2);
        ms += a.p * a.x_star;
        ms2 += a.p * (a.x_star - d_true).powi(2);
    }
    Ok(MseStats { mean_x: m, mse: m2, bias: m - d_true, mse_star: ms2, bias_star: ms - d_true })
}

/// `[D, D + log d_{n,d}/n]`, the interval that always contains `E[x]`.
pub fn mean_interval(d_true: f64, n: usize, ln_dnd: f64) -> (f64, f64) {
    (d_true, d_true + ln_dnd / n as f64)
}

/// `[D − (d+1)(d−1) log(n+1)/n, D]`, the lower-side interval.
pub fn mean_interval_lower_side(d_true: f64, n: usize, d: usize) -> (f64, f64) {
    let w = ((d + 1) * (d - 1)) as f64 * ((n + 1) as f64).ln() / n as f64;
    (d_true - w, d_true)
}

#[derive(Clone, Debug, Serialize)]
pub struct EstimatorReport {
    pub n: usize,
    pub d: usize,
    #[serde(rename = "D")]
    pub d_true: f64,
    #[serde(rename = "V")]
    pub v: f64,
    pub mean_x: f64,
    pub mse: f64,
    pub bias: f64,
    pub mse_star: f64,
    pub bias_star: f64,
    pub thb_rhs: f64,
    /// `None` when `V = 0`.
    pub ks: Option<f64>,
}

pub fn estimator_report(dist: &OutcomeDistribution, d_true: f64, v: f64) -> Result<EstimatorReport> {
    let s = exact_mse(dist, d_true)?;
    let ln_dnd = ln_biguint(&schur_dim_total(dist.n, dist.d));
    let ks = if v > 0.0 { Some(normality_report(dist, d_true, v)?.ks) } else { None };
    Ok(EstimatorReport {
        n: dist.n,
        d: dist.d,
        d_true,
        v,
        mean_x: s.mean_x,
        mse: s.mse,
        bias: s.bias,
        mse_star: s.mse_star,
        bias_star: s.bias_star,
        thb_rhs: crate::bounds::thb_rhs_ln(dist.n, v, ln_dnd),
        ks,
    })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct TailMasses {
    pub epsilon: f64,
    /// `P{x − D > ε}`.
    pub delta_plus: f64,
    /// `P{x − D < −ε}`.
    pub delta_minus: f64,
    /// Atoms with `|x − D| = ε` exactly, excluded from both.
    pub boundary_atoms: usize,
}

pub fn tail_probabilities(dist: &OutcomeDistribution, d_true: f64, epsilon: f64) -> Result<TailMasses> {
    require_annotated(dist)?;
    let (mut plus, mut minus, mut boundary) = (0.0, 0.0, 0);
    for a in &dist.atoms {
        let dev = a.x - d_true;
        if dev > epsilon {
            plus += a.p;
        } else if dev < -epsilon {
            minus += a.p;
        } else if dev.abs() == epsilon {
            boundary += 1;
        }
    }
    Ok(TailMasses { epsilon, delta_plus: plus, delta_minus: minus, boundary_atoms: boundary })
}

#[derive(Clone, Copy, Debug, Serialize, PartialEq)]
pub struct Sample {
    pub draw_index: usize,
    pub x: f64,
    pub x_star: f64,
}

/// `m` i.i.d. draws by inverse CDF over the atom order.
///
/// Draw `k` uses stream `k / 65536` of a ChaCha8 generator seeded with `seed`, so any
/// partition of the draws into whole chunks reproduces the same sequence.
pub fn sample_outcomes(dist: &OutcomeDistribution, m: usize, seed: u64) -> Result<Vec<Sample>> {
    require_annotated(dist)?;
    if m == 0 {
        return Err(Error::InvalidParameter("need at least one draw".into()));
    }
    let mut cdf = Vec::with_capacity(dist.atoms.len());
    let mut acc = 0.0;
    for a in &dist.atoms {
        acc += a.p;
        cdf.push(acc);
    }
    let mut out = Vec::with_capacity(m);
    for chunk in 0..m.div_ceil(SAMPLE_CHUNK) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(chunk as u64);
        let hi = ((chunk + 1) * SAMPLE_CHUNK).min(m);
        for k in chunk * SAMPLE_CHUNK..hi {
            let u: f64 = rng.random::<f64>() * acc;
            let idx = cdf.partition_point(|&c| c <= u).min(dist.atoms.len() - 1);
            let a = &dist.atoms[idx];
            out.push(Sample { draw_index: k, x: a.x, x_star: a.x_star });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct NormalityReport {
    /// `sup_z |F_n(z) − Φ(z)|` for `z = √n (x − D)/√V`.
    pub ks: f64,
    /// `(z, mass)`, ascending in `z`, equal `z` merged.
    pub standardized: Vec<(f64, f64)>,
    /// `(1/n) Σ p (log(p/K))²`, the mass of each block spread evenly over its `K` fine outcomes.
    pub log_term_second_moment: f64,
    /// `(log d_{n,d})²/n`.
    pub log_term_bound: f64,
    /// The bound needs at least three fine outcomes.
    pub log_term_bound_applies: bool,
}

pub fn normality_report(dist: &OutcomeDistribution, d_true: f64, v: f64) -> Result<NormalityReport> {
    require_annotated(dist)?;
    if !(v > 0.0) {
        return Err(Error::Degenerate("V = 0: the standardized estimate is undefined".into()));
    }
    let nf = dist.n as f64;
    let scale = nf.sqrt() / v.sqrt();
    let mut pts: Vec<(f64, f64)> = dist.atoms.iter().map(|a| ((a.x - d_true) * scale, a.p)).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut merged: Vec<(f64, f64)> = Vec::with_capacity(pts.len());
    for (z, p) in pts {
        match merged.last_mut() {
            Some((zz, pp)) if *zz == z => *pp += p,
            _ => merged.push((z, p)),
        }
    }
    let phi = Normal::standard();
    let mut ks = 0.0f64;
    let mut below = 0.0;
    for &(z, p) in &merged {
        let c = phi.cdf(z);
        ks = ks.max((below - c).abs());
        below += p;
        ks = ks.max((below - c).abs());
    }
    let mut m2 = 0.0;
    for a in &dist.atoms {
        if a.p > 0.0 {
            let l = (a.p / a.multiplicity as f64).ln();
            m2 += a.p * l * l;
        }
    }
    let dnd = schur_dim_total(dist.n, dist.d);
    let ln_dnd = ln_biguint(&dnd);
    Ok(NormalityReport {
        ks,
        standardized: merged,
        log_term_second_moment: m2 / nf,
        log_term_bound: ln_dnd * ln_dnd / nf,
        log_term_bound_applies: dnd >= num_bigint::BigUint::from(3u32),
    })
}
