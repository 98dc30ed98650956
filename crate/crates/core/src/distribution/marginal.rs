//! The `λ`-marginal when `σ ∝ I`.
//!
//! With `σ = I/d` the estimate depends on `λ` alone, `x(λ) = log d − (1/n) log dim V_λ`, and
//! `P(λ) = dim V_λ s_λ(r)` for the spectrum `r` of `ρ`. This reaches `n` in the thousands.

use crate::error::{Error, Result};
use serde::Serialize;

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Debug, Default)]
struct Sum {
    s: f64,
    c: f64,
}

impl Sum {
    #[inline]
    fn add(&mut self, x: f64) {
        let t = self.s + x;
        if self.s.abs() >= x.abs() {
            self.c += (self.s - t) + x;
        } else {
            self.c += (x - t) + self.s;
        }
        self.s = t;
    }

    fn get(self) -> f64 {
        self.s + self.c
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MarginalTail {
    pub n: usize,
    pub d: usize,
    #[serde(rename = "D")]
    pub d_true: f64,
    pub epsilon: f64,
    pub delta_plus: f64,
    pub delta_minus: f64,
    pub total_mass: f64,
    pub mean_x: f64,
    pub mse: f64,
    /// Blocks evaluated exactly.
    pub blocks: u64,
    /// Blocks with `|x − D| = ε` exactly (excluded from both tails).
    pub boundary: u64,
    /// Upper bound on the probability of blocks skipped as negligible.
    pub pruned_mass_bound: f64,
}

enum Spectrum {
    Uniform,
    Distinct { ln_r: Vec<f64>, ln_vandermonde: f64, perms: Vec<(Vec<usize>, f64)> },
}

fn permutations(d: usize) -> Vec<(Vec<usize>, f64)> {
    let mut p: Vec<usize> = (0..d).collect();
    let mut out = Vec::new();
    loop {
        let mut inv = 0;
        for i in 0..d {
            for j in (i + 1)..d {
                if p[i] > p[j] {
                    inv += 1;
                }
            }
        }
        out.push((p.clone(), if inv % 2 == 0 { 1.0 } else { -1.0 }));
        if !crate::combinatorics::cycles::next_permutation(&mut p) {
            return out;
        }
    }
}

fn classify(r: &[f64]) -> Result<Spectrum> {
    let d = r.len();
    let mut sorted = r.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    if sorted[d - 1] <= 0.0 {
        return Err(Error::RankDeficient(sorted[d - 1]));
    }
    if sorted[0] - sorted[d - 1] <= 1e-15 {
        return Ok(Spectrum::Uniform);
    }
    let mut ln_v = 0.0;
    for i in 0..d {
        for k in (i + 1)..d {
            let gap = sorted[i] - sorted[k];
            if gap <= 1e-9 {
                return Err(Error::Degenerate("spectrum must be uniform or have distinct eigenvalues".into()));
            }
            ln_v += gap.ln();
        }
    }
    Ok(Spectrum::Distinct {
        ln_r: sorted.iter().map(|x| x.ln()).collect(),
        ln_vandermonde: ln_v,
        perms: permutations(d),
    })
}

struct Tables {
    ln_int: Vec<f64>,
    ln_fact: Vec<f64>,
}

impl Tables {
    fn new(n: usize, d: usize) -> Tables {
        let top = n + d + 1;
        let ln_int: Vec<f64> = (0..=top).map(|k| if k == 0 { 0.0 } else { (k as f64).ln() }).collect();
        let mut ln_fact = vec![0.0; top + 1];
        for k in 1..=top {
            ln_fact[k] = ln_fact[k - 1] + ln_int[k];
        }
        Tables { ln_int, ln_fact }
    }
}

/// Log of an upper bound on `P(λ)` summed over every completion of a prefix.
///
/// `P(λ) <= dim U_λ · e^{−n KL(λ/n ‖ r↑)}` because `s_λ(r)` has `dim U_λ` monomials, each at most
/// the one pairing `λ` with `r` in the same order. Relaxing the order constraint on the free
/// entries gives the closed-form minimum over completions.
struct PruneBound<'a> {
    n: usize,
    r_asc: &'a [f64],
    ln_r_asc: Vec<f64>,
    /// `r_asc` suffix sums.
    tail: Vec<f64>,
    ln_u_max: f64,
    ln_n1: f64,
}

impl<'a> PruneBound<'a> {
    fn new(n: usize, r_asc: &'a [f64]) -> PruneBound<'a> {
        let d = r_asc.len();
        let mut tail = vec![0.0; d + 1];
        for i in (0..d).rev() {
            tail[i] = tail[i + 1] + r_asc[i];
        }
        let mut ln_u_max = 0.0;
        for i in 0..d {
            for j in (i + 1)..d {
                ln_u_max += ((n + j - i) as f64 / (j - i) as f64).ln();
            }
        }
        PruneBound {
            n,
            r_asc,
            ln_r_asc: r_asc.iter().map(|x| x.ln()).collect(),
            tail,
            ln_u_max,
            ln_n1: ((n + 1) as f64).ln(),
        }
    }

    /// `kl_prefix` is `Σ q ln(q/r)` over the fixed entries and `used` their total count.
    fn ln_bound(&self, k: usize, kl_prefix: f64, used: usize) -> f64 {
        let d = self.r_asc.len();
        let nf = self.n as f64;
        let rest = (self.n - used) as f64 / nf;
        let kl = if rest > 0.0 { kl_prefix + rest * (rest / self.tail[k]).ln() } else { kl_prefix };
        self.ln_u_max + (d - k) as f64 * self.ln_n1 - nf * kl.max(0.0)
    }

    fn term(&self, i: usize, v: usize) -> f64 {
        if v == 0 {
            0.0
        } else {
            let q = v as f64 / self.n as f64;
            q * (q.ln() - self.ln_r_asc[i])
        }
    }
}

/// Subtrees whose bound falls below this are skipped and their bound is accumulated instead.
const LN_PRUNE: f64 = -60.0;
/// Same for a single block, against `dim U · dim V · max monomial`.
const LN_PRUNE_LEAF: f64 = -50.0;

/// Calls `f(λ)` for each non-decreasing `d`-tuple summing to `n` that survives pruning, and
/// returns an upper bound on the total probability of the skipped tuples.
fn for_each_young_pruned(n: usize, r_asc: &[f64], f: &mut dyn FnMut(&[usize])) -> f64 {
    struct Walk<'b, 'c> {
        b: PruneBound<'b>,
        cur: Vec<usize>,
        pruned: Sum,
        f: &'c mut dyn FnMut(&[usize]),
    }
    impl Walk<'_, '_> {
        fn rec(&mut self, rem: usize, min: usize, kl: f64) {
            let d = self.b.r_asc.len();
            let k = self.cur.len();
            let slots = d - k;
            if slots == 1 {
                if rem >= min {
                    self.cur.push(rem);
                    (self.f)(&self.cur);
                    self.cur.pop();
                }
                return;
            }
            if min * slots > rem {
                return;
            }
            let hi = rem / slots;
            let used = self.b.n - rem;
            // convex in v, so the surviving values form an interval around the relaxed optimum
            let opt = (rem as f64 * self.b.r_asc[k] / self.b.tail[k]).round() as usize;
            let start = opt.clamp(min, hi);
            let mut v = start;
            loop {
                let kv = kl + self.b.term(k, v);
                let lb = self.b.ln_bound(k + 1, kv, used + v);
                if lb < LN_PRUNE {
                    self.pruned.add((((hi - v + 1) as f64).ln() + lb).exp());
                    break;
                }
                self.cur.push(v);
                self.rec(rem - v, v, kv);
                self.cur.pop();
                if v == hi {
                    break;
                }
                v += 1;
            }
            if start == min {
                return;
            }
            let mut v = start - 1;
            loop {
                let kv = kl + self.b.term(k, v);
                let lb = self.b.ln_bound(k + 1, kv, used + v);
                if lb < LN_PRUNE {
                    self.pruned.add((((v - min + 1) as f64).ln() + lb).exp());
                    break;
                }
                self.cur.push(v);
                self.rec(rem - v, v, kv);
                self.cur.pop();
                if v == min {
                    break;
                }
                v -= 1;
            }
        }
    }
    let mut w = Walk { b: PruneBound::new(n, r_asc), cur: Vec::with_capacity(r_asc.len()), pruned: Sum::default(), f };
    w.rec(n, 0, 0.0);
    w.pruned.get()
}

/// Exact tail masses of `x − D` for `σ = I/d` and `ρ` with spectrum `r`.
///
/// `r` must be uniform or have pairwise distinct entries (the bialternant is used otherwise).
pub fn sigma_uniform_tail(r: &[f64], n: usize, epsilon: f64) -> Result<MarginalTail> {
    let d = r.len();
    if d < 1 || n < 1 {
        return Err(Error::InvalidParameter("need d >= 1 and n >= 1".into()));
    }
    if !(epsilon > 0.0) {
        return Err(Error::InvalidParameter("epsilon must be positive".into()));
    }
    let total: f64 = r.iter().sum();
    if (total - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidState(format!("spectrum sums to {total}")));
    }
    let spec = classify(r)?;
    let ln_d = (d as f64).ln();
    let entropy: f64 = r.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.ln()).sum();
    let d_true = ln_d - entropy;
    let t = Tables::new(n, d);
    let nf = n as f64;
    let (mut plus, mut minus, mut mass, mut m1, mut m2) =
        (Sum::default(), Sum::default(), Sum::default(), Sum::default(), Sum::default());
    let (mut blocks, mut boundary) = (0u64, 0u64);
    let mut ln_u_const = 0.0;
    for i in 0..d {
        for j in (i + 1)..d {
            ln_u_const += t.ln_int[j - i];
        }
    }
    let mut exps = vec![0.0; d];
    let mut r_asc = r.to_vec();
    r_asc.sort_by(|a, b| a.total_cmp(b));
    let mut skipped = Sum::default();
    let pruned = for_each_young_pruned(n, &r_asc, &mut |lam: &[usize]| {
        // ln dim V = ln n! − Σ ln λ_i! + Σ_{i<j} [ln(λ_j − λ_i + j − i) − ln(λ_j + j − i)]
        let mut shared = 0.0;
        let mut den = 0.0;
        for i in 0..d {
            for j in (i + 1)..d {
                shared += t.ln_int[lam[j] - lam[i] + j - i];
                den += t.ln_int[lam[j] + j - i];
            }
        }
        let mut ln_v = t.ln_fact[n] + shared - den;
        for &l in lam {
            ln_v -= t.ln_fact[l];
        }
        let ln_p = match &spec {
            Spectrum::Uniform => ln_v + shared - ln_u_const - nf * ln_d,
            Spectrum::Distinct { ln_r, ln_vandermonde, perms } => {
                let ln_cap = shared - ln_u_const + ln_v + (0..d).map(|k| lam[d - 1 - k] as f64 * ln_r[k]).sum::<f64>();
                if ln_cap < LN_PRUNE_LEAF {
                    skipped.add(ln_cap.exp());
                    return;
                }
                // exponents of the bialternant, largest first, paired with r sorted descending
                for k in 0..d {
                    exps[k] = (lam[d - 1 - k] + d - 1 - k) as f64;
                }
                let l_id: f64 = (0..d).map(|k| exps[k] * ln_r[k]).sum();
                let mut s = 0.0;
                for (p, sign) in perms {
                    let l: f64 = (0..d).map(|k| exps[k] * ln_r[p[k]]).sum();
                    s += sign * (l - l_id).exp();
                }
                ln_v + l_id + s.max(f64::MIN_POSITIVE).ln() - ln_vandermonde
            }
        };
        let p = ln_p.exp();
        let x = ln_d - ln_v / nf;
        let dev = x - d_true;
        blocks += 1;
        mass.add(p);
        m1.add(p * x);
        m2.add(p * dev * dev);
        if dev > epsilon {
            plus.add(p);
        } else if dev < -epsilon {
            minus.add(p);
        } else if dev.abs() == epsilon {
            boundary += 1;
        }
    });
    Ok(MarginalTail {
        n,
        d,
        d_true,
        epsilon,
        delta_plus: plus.get(),
        delta_minus: minus.get(),
        total_mass: mass.get(),
        mean_x: m1.get(),
        mse: m2.get(),
        blocks,
        boundary,
        pruned_mass_bound: pruned + skipped.get(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_mass_is_one() {
        for d in 2..=4 {
            let r = vec![1.0 / d as f64; d];
            let t = sigma_uniform_tail(&r, 40, 0.5).unwrap();
            assert!((t.total_mass - 1.0).abs() < 1e-12, "d={d} {}", t.total_mass);
            assert!(t.d_true.abs() < 1e-15);
            assert_eq!(t.delta_minus, 0.0);
        }
    }

    #[test]
    fn distinct_mass_is_one() {
        for r in [vec![0.7, 0.3], vec![0.6, 0.3, 0.1], vec![0.4, 0.3, 0.2, 0.1]] {
            let t = sigma_uniform_tail(&r, 60, 0.25).unwrap();
            assert!((t.total_mass - 1.0).abs() < 1e-11, "{r:?} {}", t.total_mass);
        }
    }

    #[test]
    fn rejects_partial_degeneracy() {
        assert!(sigma_uniform_tail(&[0.4, 0.3, 0.3], 5, 0.1).is_err());
    }
}
