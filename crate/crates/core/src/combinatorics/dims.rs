use super::young::{enumerate_young, YoungIndex};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

/// Exact `dim U_λ = Π_{i<j} (j − i + λ_j − λ_i)/(j − i)`.
pub fn weyl_dim(lambda: &YoungIndex) -> BigUint {
    let p = lambda.parts();
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..p.len() {
        for j in (i + 1)..p.len() {
            num *= BigUint::from(j - i + p[j] - p[i]);
            den *= BigUint::from(j - i);
        }
    }
    debug_assert!((&num % &den).is_zero());
    num / den
}

/// Natural log of `dim U_λ` in floating point, for shapes too large for exact work.
pub fn ln_weyl_dim(parts: &[usize]) -> f64 {
    let mut s = 0.0;
    for i in 0..parts.len() {
        for j in (i + 1)..parts.len() {
            s += ((j - i + parts[j] - parts[i]) as f64).ln() - ((j - i) as f64).ln();
        }
    }
    s
}

/// `e(λ) = Π_{i<j} (λ_j − λ_i − i + j)/(λ_j + j − i)`, exact.
pub fn e_factor(lambda: &YoungIndex) -> BigRational {
    let p = lambda.parts();
    let mut e = BigRational::one();
    for i in 0..p.len() {
        for j in (i + 1)..p.len() {
            let num = BigUint::from(p[j] - p[i] + j - i);
            let den = BigUint::from(p[j] + j - i);
            e *= BigRational::new(num.into(), den.into());
        }
    }
    e
}

pub fn ln_e_factor(parts: &[usize]) -> f64 {
    let mut s = 0.0;
    for i in 0..parts.len() {
        for j in (i + 1)..parts.len() {
            s += ((parts[j] - parts[i] + j - i) as f64).ln() - ((parts[j] + j - i) as f64).ln();
        }
    }
    s
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

/// `n!/Π λ_i!`.
pub fn multinomial(parts: &[usize]) -> BigUint {
    let n: usize = parts.iter().sum();
    let den = parts.iter().fold(BigUint::one(), |acc, &p| acc * factorial(p));
    factorial(n) / den
}

/// `(dim V_λ, e(λ))` with `dim V_λ = (n!/λ!) e(λ)`.
pub fn sn_dim_and_e(lambda: &YoungIndex) -> (BigUint, BigRational) {
    let e = e_factor(lambda);
    let v = BigRational::from_integer(multinomial(lambda.parts()).into()) * &e;
    assert!(v.is_integer(), "dim V is not an integer for {lambda}");
    let v = v.to_integer().to_biguint().expect("dim V is positive");
    (v, e)
}

pub fn sn_dim(lambda: &YoungIndex) -> BigUint {
    sn_dim_and_e(lambda).0
}

/// Table of `ln k!` for `k <= n`.
#[derive(Clone, Debug)]
pub struct LnFactorials(Vec<f64>);

impl LnFactorials {
    pub fn new(n: usize) -> LnFactorials {
        let mut t = Vec::with_capacity(n + 1);
        let mut acc = 0.0f64;
        t.push(0.0);
        for k in 1..=n {
            acc += (k as f64).ln();
            t.push(acc);
        }
        LnFactorials(t)
    }

    #[inline]
    pub fn get(&self, k: usize) -> f64 {
        self.0[k]
    }

    /// `ln dim V_λ`.
    pub fn ln_sn_dim(&self, parts: &[usize]) -> f64 {
        let n: usize = parts.iter().sum();
        self.get(n) - parts.iter().map(|&p| self.get(p)).sum::<f64>() + ln_e_factor(parts)
    }
}

/// Natural log of a big unsigned integer.
pub fn ln_biguint(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("finite").ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("finite");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

#[derive(Clone, Debug)]
pub struct DimensionRecord {
    pub lambda: YoungIndex,
    pub u_dim: BigUint,
    pub v_dim: BigUint,
    pub e_factor: BigRational,
}

impl DimensionRecord {
    pub fn new(lambda: &YoungIndex) -> DimensionRecord {
        let (v_dim, e_factor) = sn_dim_and_e(lambda);
        DimensionRecord { lambda: lambda.clone(), u_dim: weyl_dim(lambda), v_dim, e_factor }
    }
}

/// Per-block dimensions of `(C^d)^{⊗n}` together with the polynomial counting bounds.
#[derive(Clone, Debug)]
pub struct SchurDimensions {
    pub n: usize,
    pub d: usize,
    pub blocks: Vec<DimensionRecord>,
    /// `d_{n,d} = Σ_λ dim U_λ`.
    pub total_schur_dim: BigUint,
    /// `(n+1)^{d−1}`, bounds the number of blocks.
    pub block_count_bound: BigUint,
    /// `(n+1)^{d(d−1)/2}`, bounds each `dim U_λ`.
    pub u_dim_bound: BigUint,
    /// `(n+1)^{(d+2)(d−1)/2}`, bounds `d_{n,d}`.
    pub total_bound: BigUint,
}

pub fn total_schur_dim(n: usize, d: usize) -> SchurDimensions {
    let blocks: Vec<DimensionRecord> = enumerate_young(n, d).iter().map(DimensionRecord::new).collect();
    let total = blocks.iter().fold(BigUint::zero(), |acc, b| acc + &b.u_dim);
    let base = BigUint::from(n + 1);
    SchurDimensions {
        n,
        d,
        blocks,
        total_schur_dim: total,
        block_count_bound: base.pow((d - 1) as u32),
        u_dim_bound: base.pow((d * (d - 1) / 2) as u32),
        total_bound: base.pow(((d + 2) * (d - 1) / 2) as u32),
    }
}

/// `d_{n,d}` alone.
pub fn schur_dim_total(n: usize, d: usize) -> BigUint {
    enumerate_young(n, d).iter().fold(BigUint::zero(), |acc, l| acc + weyl_dim(l))
}

/// `ln d_{n,d}` computed in floating point (large `n`).
pub fn ln_schur_dim_total(n: usize, d: usize) -> f64 {
    let logs: Vec<f64> = enumerate_young(n, d).iter().map(|l| ln_weyl_dim(l.parts())).collect();
    let m = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    m + logs.iter().map(|v| (v - m).exp()).sum::<f64>().ln()
}

#[derive(Clone, Debug, Serialize)]
pub struct TypeEntropyBounds {
    /// Shannon entropy of `λ/n` in nats.
    pub entropy: f64,
    pub ln_multinomial: f64,
    /// `n H − (d−1) ln(n+1)`.
    pub ln_lower: f64,
    /// `n H`.
    pub ln_upper: f64,
    pub holds: bool,
}

pub fn shannon_entropy_of_type(parts: &[usize]) -> f64 {
    let n: usize = parts.iter().sum();
    if n == 0 {
        return 0.0;
    }
    let nf = n as f64;
    parts
        .iter()
        .filter(|&&p| p > 0)
        .map(|&p| {
            let q = p as f64 / nf;
            -q * q.ln()
        })
        .sum()
}

/// `e^{nH}(n+1)^{−(d−1)} <= n!/λ! <= e^{nH}`, compared in log space on the exact multinomial.
pub fn type_entropy_bounds(lambda: &YoungIndex) -> TypeEntropyBounds {
    let n = lambda.n();
    let d = lambda.d();
    let h = shannon_entropy_of_type(lambda.parts());
    let ln_m = ln_biguint(&multinomial(lambda.parts()));
    let ln_upper = n as f64 * h;
    let ln_lower = ln_upper - (d as f64 - 1.0) * ((n + 1) as f64).ln();
    let slack = 1e-12 * (1.0 + ln_upper.abs());
    let holds = ln_lower <= ln_m + slack && ln_m <= ln_upper + slack;
    TypeEntropyBounds { entropy: h, ln_multinomial: ln_m, ln_lower, ln_upper, holds }
}

/// `Σ_{l=1}^{d} (d−l)^{1−s} n^s / (s l^s)`, an upper bound on `ln dim U_λ`.
pub fn zoi_dim_bound(n: usize, d: usize, s: f64) -> f64 {
    assert!(s > 0.0 && s < 1.0, "s must lie in (0,1)");
    let nf = n as f64;
    (1..=d).map(|l| ((d - l) as f64).powf(1.0 - s) * nf.powf(s) / (s * (l as f64).powf(s))).sum()
}
