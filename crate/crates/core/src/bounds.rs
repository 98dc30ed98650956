//! Closed-form right-hand sides and their free-parameter optimisation.
//!
//! One-dimensional minimisations use a log-spaced scan followed by golden-section refinement.
//! Probability bounds are reported both raw and clamped at 1.

use crate::combinatorics::dims::{ln_schur_dim_total, zoi_dim_bound};
use crate::error::{Error, Result};
use serde::Serialize;

const GRID_POINTS: usize = 96;
const GOLDEN_TOL: f64 = 1e-10;

/// Scan `f` on a log grid over `[lo, hi]`, then refine around the best grid point.
pub fn minimize_log_grid(lo: f64, hi: f64, f: impl Fn(f64) -> f64) -> (f64, f64) {
    assert!(lo > 0.0 && hi > lo);
    let (llo, lhi) = (lo.ln(), hi.ln());
    let grid: Vec<f64> =
        (0..GRID_POINTS).map(|i| (llo + (lhi - llo) * i as f64 / (GRID_POINTS - 1) as f64).exp()).collect();
    let mut best = 0;
    let mut best_v = f64::INFINITY;
    for (i, &a) in grid.iter().enumerate() {
        let v = f(a);
        if v < best_v {
            best_v = v;
            best = i;
        }
    }
    let a = grid[best.saturating_sub(1)];
    let b = grid[(best + 1).min(GRID_POINTS - 1)];
    let (x, v) = golden_section(a, b, &f);
    if v < best_v {
        (x, v)
    } else {
        (grid[best], best_v)
    }
}

/// Golden-section minimum of a unimodal `f` on `[a, b]`.
pub fn golden_section(mut a: f64, mut b: f64, f: impl Fn(f64) -> f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > GOLDEN_TOL * (1.0 + a.abs() + b.abs()) {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// `(√(V/n) + ln_dnd/n)²` with `ln_dnd = log d_{n,d}`.
pub fn thb_rhs_ln(n: usize, v: f64, ln_dnd: f64) -> f64 {
    let nf = n as f64;
    ((v / nf).sqrt() + ln_dnd / nf).powi(2)
}

/// The same bound with the exact `d_{n,d}` for `n` copies of a `d`-level system.
pub fn thb_rhs(n: usize, d: usize, v: f64) -> f64 {
    thb_rhs_ln(n, v, ln_schur_dim_total(n, d))
}

/// The same bound with `d_{n,d}` replaced by `(n+1)^{(d+2)(d−1)/2}`.
pub fn thb_rhs_bvt(n: usize, d: usize, v: f64) -> f64 {
    let ln = ((d + 2) * (d - 1)) as f64 / 2.0 * ((n + 1) as f64).ln();
    thb_rhs_ln(n, v, ln)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct TailBound {
    /// Minimised right-hand side, not clamped.
    pub raw: f64,
    /// `min(1, raw)`.
    pub value: f64,
    pub alpha: f64,
    /// Auxiliary threshold `r` of the upper-tail bound, `NaN` for the lower tail.
    pub r: f64,
}

impl TailBound {
    fn from_ln(ln_raw: f64, alpha: f64, r: f64) -> TailBound {
        let raw = ln_raw.exp();
        TailBound { raw, value: raw.min(1.0), alpha, r }
    }
}

pub const ALPHA_LOWER_RANGE: (f64, f64) = (0.01, 0.99);
pub const ALPHA_UPPER_RANGE: (f64, f64) = (0.01, 20.0);

/// Bound on `P{x < R}` for `R < D`:
/// `min_{α∈[0.01,0.99]} d_{n,d}^α e^{−nα(D_{1−α} − R)}`.
///
/// `renyi_lower(α)` must return `D_{1−α}(ρ‖σ)`.
pub fn lower_tail_bound(n: usize, ln_dnd: f64, r: f64, renyi_lower: impl Fn(f64) -> f64) -> TailBound {
    let nf = n as f64;
    let ln_f = |a: f64| a * ln_dnd - nf * a * (renyi_lower(a) - r);
    let (a, v) = minimize_log_grid(ALPHA_LOWER_RANGE.0, ALPHA_LOWER_RANGE.1, ln_f);
    TailBound::from_ln(v, a, f64::NAN)
}

/// `log min_{r>0} (A e^{nαr} + N e^{−nr})` and its minimiser, where `ln_a = log A`.
fn ln_upper_inner(n: usize, ln_dnd: f64, alpha: f64, ln_a: f64) -> (f64, f64) {
    let nf = n as f64;
    let r = (ln_dnd - alpha.ln() - ln_a) / (nf * (1.0 + alpha));
    if r <= 0.0 {
        // decreasing towards r = 0 from the right; the infimum is A + N
        return (log_add(ln_a, ln_dnd), 0.0);
    }
    (log_add(ln_a + nf * alpha * r, ln_dnd - nf * r), r)
}

fn log_add(a: f64, b: f64) -> f64 {
    let m = a.max(b);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + ((a - m).exp() + (b - m).exp()).ln()
}

/// Bound on `P{x > R}` for `R > D`:
/// `min_{α>0, r>0} e^{−nα(R − r − D_{1+α})} + d_{n,d} e^{−nr}`.
///
/// `renyi_upper(α)` must return `D_{1+α}(ρ‖σ)`. For each `α` the optimal `r` is closed form.
pub fn upper_tail_bound(n: usize, ln_dnd: f64, r: f64, renyi_upper: impl Fn(f64) -> f64) -> TailBound {
    let nf = n as f64;
    let ln_a = |a: f64| -nf * a * (r - renyi_upper(a));
    let (a, v) =
        minimize_log_grid(ALPHA_UPPER_RANGE.0, ALPHA_UPPER_RANGE.1, |a| ln_upper_inner(n, ln_dnd, a, ln_a(a)).0);
    TailBound::from_ln(v, a, ln_upper_inner(n, ln_dnd, a, ln_a(a)).1)
}

/// The upper-tail expression read with exponent `−n(R − r − α D_{1+α})`. It is not a valid bound
/// in general and is reported only for comparison.
pub fn upper_tail_alt_exponent(n: usize, ln_dnd: f64, r: f64, renyi_upper: impl Fn(f64) -> f64) -> TailBound {
    let nf = n as f64;
    // B e^{nr} + N e^{−nr} is minimised at e^{2nr} = N/B
    let inner = |a: f64| {
        let ln_b = -nf * (r - a * renyi_upper(a));
        let rr = (ln_dnd - ln_b) / (2.0 * nf);
        if rr <= 0.0 {
            (log_add(ln_b, ln_dnd), 0.0)
        } else {
            ((2.0f64).ln() + 0.5 * (ln_dnd + ln_b), rr)
        }
    };
    let (a, v) = minimize_log_grid(ALPHA_UPPER_RANGE.0, ALPHA_UPPER_RANGE.1, |a| inner(a).0);
    TailBound::from_ln(v, a, inner(a).1)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Th4Bound {
    pub exact: f64,
    pub simple: f64,
    /// Minimiser of `c^{s−1}/(s(1−s))`.
    pub s: f64,
}

/// `(1/ε²)(√c0/√c + min_s c^{s−1}/(s(1−s)))²` and `(√c0 + 4)²/(c ε²)`.
pub fn th4_rhs(c: f64, c0: f64, epsilon: f64) -> Result<Th4Bound> {
    if !(c > 0.0) || !(c0 >= 0.0) || !(epsilon > 0.0) {
        return Err(Error::InvalidParameter(format!("need c > 0, c0 >= 0, epsilon > 0 (got {c}, {c0}, {epsilon})")));
    }
    let lc = c.ln();
    // log of c^{s−1}/(s(1−s)) is convex in s
    let ln_g = |s: f64| (s - 1.0) * lc - s.ln() - (1.0 - s).ln();
    let (mut s, mut v) = golden_section(1e-12, 1.0 - 1e-12, ln_g);
    if ln_g(0.5) < v {
        s = 0.5;
        v = ln_g(0.5);
    }
    let e2 = epsilon * epsilon;
    let exact = ((c0 / c).sqrt() + v.exp()).powi(2) / e2;
    let simple = (c0.sqrt() + 4.0).powi(2) / (c * e2);
    Ok(Th4Bound { exact, simple, s })
}

/// The `c` at which the simple bound equals `target`.
pub fn c_for_simple_bound(c0: f64, epsilon: f64, target: f64) -> f64 {
    (c0.sqrt() + 4.0).powi(2) / (target * epsilon * epsilon)
}

/// Largest `V(ρ‖I/d)/d²` over spectra `(1−p, p/(d−1), …, p/(d−1))`.
///
/// Returns `(value, p)`.
pub fn c0_proxy(d: usize) -> (f64, f64) {
    let dm1 = (d - 1) as f64;
    let var = |p: f64| {
        let l = ((1.0 - p) * dm1 / p).ln();
        p * (1.0 - p) * l * l
    };
    let (p, v) = minimize_log_grid(1e-9, 1.0 - 1e-9, |p| -var(p));
    (-v / (d * d) as f64, p)
}

/// `(1−p, p w_1/(d−1), …, p w_{d−1}/(d−1))` with weights spread evenly over `[1−split, 1+split]`,
/// so that a positive `split` makes the entries pairwise distinct.
pub fn two_level_spectrum(d: usize, p: f64, split: f64) -> Vec<f64> {
    let m = d - 1;
    let mut out = vec![1.0 - p];
    for k in 0..m {
        let w = if m == 1 { 1.0 } else { 1.0 - split + 2.0 * split * k as f64 / (m - 1) as f64 };
        out.push(p * w / m as f64);
    }
    out
}

/// Copies needed by plain tomography followed by a continuity bound:
/// `d²(log d + t d)²/ε′²`.
pub fn tomography_baseline(d: usize, t: f64, eps_prime: f64) -> Result<f64> {
    if d < 2 || !(t > 0.0) || !(eps_prime > 0.0) {
        return Err(Error::InvalidParameter("need d >= 2, t > 0, eps' > 0".into()));
    }
    let df = d as f64;
    Ok(df * df * (df.ln() + t * df).powi(2) / (eps_prime * eps_prime))
}

/// `((d−1) log(n+1) − log e(λ))/n`, the exact ceiling on `x − x*`.
pub fn nm2_gap_tight(n: usize, d: usize, ln_e: f64) -> f64 {
    ((d - 1) as f64 * ((n + 1) as f64).ln() - ln_e) / n as f64
}

/// `(d log(n+1) − log e(λ))/n`.
pub fn nm2_gap(n: usize, d: usize, ln_e: f64) -> f64 {
    (d as f64 * ((n + 1) as f64).ln() - ln_e) / n as f64
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub n: usize,
    pub d: usize,
    pub thb_rhs: f64,
    pub bvt: f64,
    pub zoi_half: f64,
    pub th4: Th4Bound,
}

pub fn bound_report(n: usize, d: usize, v: f64, c0: f64, epsilon: f64) -> Result<BoundReport> {
    let c = n as f64 / (d * d) as f64;
    Ok(BoundReport {
        n,
        d,
        thb_rhs: thb_rhs(n, d, v),
        bvt: thb_rhs_bvt(n, d, v),
        zoi_half: zoi_dim_bound(n, d, 0.5),
        th4: th4_rhs(c, c0, epsilon)?,
    })
}
