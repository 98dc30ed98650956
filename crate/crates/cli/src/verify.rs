//! The invariant suite run by `verify` over the bundled corpus.

use num_bigint::BigUint;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use schur_relent::bounds::{lower_tail_bound, nm2_gap, th4_rhs, thb_rhs, thb_rhs_bvt, upper_tail_bound};
use schur_relent::combinatorics::dims::ln_weyl_dim;
use schur_relent::combinatorics::{
    enumerate_young, ln_schur_dim_total, sn_character, sn_dim, type_entropy_bounds, weyl_dim, zoi_dim_bound, CycleType,
};
use schur_relent::distribution::dense::{pinching_defect, renyi_trace_check, DenseModel};
use schur_relent::distribution::{brute_distribution, cycle_poly_distribution, OutcomeDistribution};
use schur_relent::estimator::{annotate_estimates, exact_mse, mean_interval, sample_outcomes, tail_probabilities};
use schur_relent::states::{
    haar_unitary, llo_bound_check, parse_state_json, random_density, relative_entropy, relative_varentropy,
    sandwiched_renyi, sld_quantities, validate_state, DensityMatrix, SigmaSpectrum,
};
use schur_relent::Result;

const CORPUS: &[(&str, &str)] = &[
    ("qubit_mixed", include_str!("../corpus/qubit_mixed.json")),
    ("qubit_diag_a", include_str!("../corpus/qubit_diag_a.json")),
    ("qubit_diag_b", include_str!("../corpus/qubit_diag_b.json")),
    ("qubit_rot_a", include_str!("../corpus/qubit_rot_a.json")),
    ("qubit_rot_b", include_str!("../corpus/qubit_rot_b.json")),
    ("qutrit_rot_a", include_str!("../corpus/qutrit_rot_a.json")),
    ("qutrit_rot_b", include_str!("../corpus/qutrit_rot_b.json")),
    ("qutrit_skewed", include_str!("../corpus/qutrit_skewed.json")),
];

/// `(ρ, σ)` by corpus name.
const PAIRS: &[(&str, &str)] = &[
    ("qubit_diag_a", "qubit_diag_b"),
    ("qubit_rot_a", "qubit_diag_b"),
    ("qubit_rot_b", "qubit_rot_a"),
    ("qubit_diag_a", "qubit_mixed"),
    ("qutrit_rot_a", "qutrit_rot_b"),
    ("qutrit_rot_b", "qutrit_skewed"),
];

pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

struct Pair {
    label: String,
    rho: DensityMatrix,
    sigma: DensityMatrix,
}

impl Pair {
    fn d(&self) -> usize {
        self.rho.dim()
    }

    fn dist(&self, n: usize, brute: bool) -> Result<OutcomeDistribution> {
        let s = SigmaSpectrum::new(&self.sigma)?;
        let raw =
            if brute { brute_distribution(&self.rho, &s, n)? } else { cycle_poly_distribution(&self.rho, &s, n)? };
        annotate_estimates(raw, &s)
    }
}

struct Ctx {
    pairs: Vec<Pair>,
    seed: u64,
}

type Outcome = Result<(bool, String)>;
type Check = (&'static str, fn(&Ctx) -> Outcome);

fn state(name: &str) -> DensityMatrix {
    let text = CORPUS.iter().find(|(n, _)| *n == name).map(|(_, t)| *t).expect("corpus entry");
    parse_state_json(text).expect("corpus states are valid")
}

fn random_pair(d: usize, rng: &mut ChaCha8Rng) -> (DensityMatrix, DensityMatrix) {
    let rho = random_density(d, rng);
    let s = random_density(d, rng);
    let mixed =
        s.matrix() * Complex64::new(0.8, 0.0) + DensityMatrix::maximally_mixed(d).matrix() * Complex64::new(0.2, 0.0);
    (rho, validate_state(&mixed).expect("convex mixture of states"))
}

fn worst(label: &str, value: f64, current: &mut (f64, String)) {
    if value > current.0 {
        *current = (value, label.to_string());
    }
}

fn combinatorics_identity(_: &Ctx) -> Outcome {
    let mut cases = 0;
    for (dmax, nmax) in [(3usize, 8usize), (4, 5)] {
        for d in 2..=dmax {
            for n in 1..=nmax {
                let sum =
                    enumerate_young(n, d).iter().fold(BigUint::from(0u32), |acc, l| acc + weyl_dim(l) * sn_dim(l));
                if sum != BigUint::from(d).pow(n as u32) {
                    return Ok((false, format!("n={n} d={d}: {sum}")));
                }
                cases += 1;
            }
        }
    }
    Ok((true, format!("{cases} (n, d) cases")))
}

fn polynomial_counts(_: &Ctx) -> Outcome {
    for d in 2..=4usize {
        for n in 1..=12usize {
            let ys = enumerate_young(n, d);
            let base = BigUint::from(n + 1);
            if BigUint::from(ys.len()) > base.pow((d - 1) as u32) {
                return Ok((false, format!("block count at n={n} d={d}")));
            }
            if let Some(l) = ys.iter().find(|l| weyl_dim(l) > base.pow((d * (d - 1) / 2) as u32)) {
                return Ok((false, format!("dim U{l} at n={n}")));
            }
        }
    }
    Ok((true, "n <= 12, d <= 4".into()))
}

fn character_identity(_: &Ctx) -> Outcome {
    for n in 1..=8usize {
        for l in enumerate_young(n, n.min(4)) {
            let chi = sn_character(&l, &CycleType::identity(n));
            if chi != sn_dim(&l).into() {
                return Ok((false, format!("{l}: {chi}")));
            }
        }
    }
    Ok((true, "n <= 8".into()))
}

fn zoi_blocks(_: &Ctx) -> Outcome {
    let mut margin = f64::INFINITY;
    for d in 2..=4usize {
        for n in 1..=20usize {
            for l in enumerate_young(n, d) {
                for s in [0.25, 0.5, 0.75] {
                    margin = margin.min(zoi_dim_bound(n, d, s) - ln_weyl_dim(l.parts()));
                }
            }
        }
    }
    Ok((margin >= -1e-9, format!("min margin {margin:.3e}")))
}

fn type_entropy(_: &Ctx) -> Outcome {
    for d in 2..=4usize {
        for n in 1..=20usize {
            if let Some(l) = enumerate_young(n, d).into_iter().find(|l| !type_entropy_bounds(l).holds) {
                return Ok((false, format!("{l}")));
            }
        }
    }
    Ok((true, "n <= 20, d <= 4".into()))
}

fn divergence_positivity(c: &Ctx) -> Outcome {
    let mut low = (f64::INFINITY, String::new());
    for p in &c.pairs {
        let dv = relative_entropy(&p.rho, &p.sigma)?;
        if dv < low.0 {
            low = (dv, p.label.clone());
        }
        if relative_entropy(&p.rho, &p.rho)?.abs() > 1e-8 {
            return Ok((false, format!("{}: D(ρ‖ρ) != 0", p.label)));
        }
    }
    Ok((low.0 > 1e-8, format!("min D = {:.3e} ({})", low.0, low.1)))
}

fn sld_identity(c: &Ctx) -> Outcome {
    let mut w = (0.0, String::new());
    for p in &c.pairs {
        let s = sld_quantities(&p.rho, &p.sigma)?;
        worst(&p.label, (s.inner - relative_varentropy(&p.rho, &p.sigma)?).abs(), &mut w);
    }
    Ok((w.0 <= 1e-10, format!("max |<L,L> - V| = {:.3e} {}", w.0, w.1)))
}

fn renyi_shape(c: &Ctx) -> Outcome {
    for p in &c.pairs {
        let vals = [0.3, 0.5, 0.8, 1.2, 2.0]
            .iter()
            .map(|&a| sandwiched_renyi(&p.rho, &p.sigma, a))
            .collect::<Result<Vec<_>>>()?;
        if vals.windows(2).any(|w| w[1] < w[0] - 1e-12) {
            return Ok((false, format!("{} not monotone: {vals:?}", p.label)));
        }
        let dv = relative_entropy(&p.rho, &p.sigma)?;
        let v = relative_varentropy(&p.rho, &p.sigma)?;
        for a in [0.99, 1.01] {
            if (sandwiched_renyi(&p.rho, &p.sigma, a)? - dv).abs() > 0.05 * (1.0 + v) {
                return Ok((false, format!("{} discontinuous at 1", p.label)));
            }
        }
    }
    Ok((true, format!("{} pairs", c.pairs.len())))
}

fn unitary_invariance(c: &Ctx) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed ^ 0x5eed);
    let mut w = (0.0, String::new());
    for p in &c.pairs {
        let u = haar_unitary(p.d(), &mut rng);
        let (r, s) = (p.rho.conjugate(&u)?, p.sigma.conjugate(&u)?);
        worst(&p.label, (relative_entropy(&p.rho, &p.sigma)? - relative_entropy(&r, &s)?).abs(), &mut w);
        worst(&p.label, (relative_varentropy(&p.rho, &p.sigma)? - relative_varentropy(&r, &s)?).abs(), &mut w);
        worst(&p.label, (sandwiched_renyi(&p.rho, &p.sigma, 0.5)? - sandwiched_renyi(&r, &s, 0.5)?).abs(), &mut w);
        let a = p.dist(3, true)?;
        let spec = SigmaSpectrum::new(&s)?;
        let b = annotate_estimates(brute_distribution(&r, &spec, 3)?, &spec)?;
        // Degenerate σ leaves the weight basis free, so compare basis-independent summaries.
        let dv = relative_entropy(&p.rho, &p.sigma)?;
        let (ma, mb) = (exact_mse(&a, dv)?, exact_mse(&b, dv)?);
        worst(&p.label, (ma.mean_x - mb.mean_x).abs().max((ma.mse - mb.mse).abs()), &mut w);
        for l in enumerate_young(3, p.d()) {
            let mass = |d: &OutcomeDistribution| d.atoms.iter().filter(|t| t.lambda == l).map(|t| t.p).sum::<f64>();
            worst(&p.label, (mass(&a) - mass(&b)).abs(), &mut w);
        }
    }
    Ok((w.0 <= 1e-10, format!("max change {:.3e} {}", w.0, w.1)))
}

fn copies_for(d: usize) -> std::ops::RangeInclusive<usize> {
    if d == 2 {
        1..=6
    } else {
        1..=4
    }
}

fn backend_equivalence(c: &Ctx) -> Outcome {
    let mut w = (0.0, String::new());
    for p in &c.pairs {
        for n in copies_for(p.d()) {
            let (a, b) = (p.dist(n, true)?, p.dist(n, false)?);
            if a.atoms.len() != b.atoms.len() {
                return Ok((false, format!("{} n={n}: atom sets differ", p.label)));
            }
            for (x, y) in a.atoms.iter().zip(&b.atoms) {
                if x.lambda != y.lambda || x.mu != y.mu || x.multiplicity != y.multiplicity {
                    return Ok((false, format!("{} n={n}: labels differ", p.label)));
                }
                worst(&format!("{} n={n}", p.label), (x.p - y.p).abs(), &mut w);
            }
        }
    }
    Ok((w.0 <= 1e-9, format!("max |Δp| = {:.3e} {}", w.0, w.1)))
}

fn normalization(c: &Ctx) -> Outcome {
    let mut w = (0.0, String::new());
    for p in &c.pairs {
        for n in copies_for(p.d()) {
            for brute in [true, false] {
                let d = p.dist(n, brute)?;
                let label = format!("{} n={n}", p.label);
                worst(&label, (d.total_mass() - 1.0).abs(), &mut w);
                worst(&label, (d.total_sigma_mass() - 1.0).abs(), &mut w);
            }
        }
    }
    Ok((w.0 <= 1e-9, format!("max defect {:.3e} {}", w.0, w.1)))
}

fn kostka_consistency(c: &Ctx) -> Outcome {
    for p in &c.pairs {
        for n in copies_for(p.d()) {
            let d = p.dist(n, true)?;
            for l in enumerate_young(n, p.d()) {
                let total: u128 = d.atoms.iter().filter(|a| a.lambda == l).map(|a| a.multiplicity).sum();
                if BigUint::from(total) != weyl_dim(&l) {
                    return Ok((false, format!("{} n={n} {l}", p.label)));
                }
            }
        }
    }
    Ok((true, "weight multiplicities sum to dim U".into()))
}

fn pinching(c: &Ctx) -> Outcome {
    let mut low = (f64::INFINITY, String::new());
    for p in &c.pairs {
        let top = if p.d() == 2 { 4 } else { 3 };
        for n in 1..=top {
            let m = DenseModel::new(&p.rho, &p.sigma, n)?;
            let v = pinching_defect(&m.rho_n, &m.lambda_mu_blocks())?;
            if v < low.0 {
                low = (v, format!("{} n={n}", p.label));
            }
            if !renyi_trace_check(&p.rho, &p.sigma, n, 0.5)?.holds {
                return Ok((false, format!("{} n={n}: pinched Rényi trace bound", p.label)));
            }
        }
    }
    Ok((low.0 >= -1e-9, format!("min eigenvalue {:.3e} {}", low.0, low.1)))
}

fn mean_interval_check(c: &Ctx) -> Outcome {
    for p in &c.pairs {
        let dv = relative_entropy(&p.rho, &p.sigma)?;
        for n in copies_for(p.d()) {
            let s = exact_mse(&p.dist(n, false)?, dv)?;
            let (lo, hi) = mean_interval(dv, n, ln_schur_dim_total(n, p.d()));
            if s.mean_x < lo - 1e-9 || s.mean_x > hi + 1e-9 {
                return Ok((false, format!("{} n={n}: E[x] = {} outside [{lo}, {hi}]", p.label, s.mean_x)));
            }
            if s.mse < s.bias * s.bias - 1e-12 || s.mse_star < s.bias_star * s.bias_star - 1e-12 {
                return Ok((false, format!("{} n={n}: mse below bias²", p.label)));
            }
        }
    }
    Ok((true, "D <= E[x] <= D + log d_{n,d}/n".into()))
}

fn operator_identity(c: &Ctx) -> Outcome {
    let mut w = (0.0, String::new());
    for p in &c.pairs {
        let dv = relative_entropy(&p.rho, &p.sigma)?;
        let top = if p.d() == 2 { 4 } else { 3 };
        for n in 1..=top {
            let a = exact_mse(&p.dist(n, true)?, dv)?.mse;
            let b = DenseModel::new(&p.rho, &p.sigma, n)?.operator_mse()?;
            worst(&format!("{} n={n}", p.label), (a - b).abs(), &mut w);
        }
    }
    Ok((w.0 <= 1e-8, format!("max |Δ| = {:.3e} {}", w.0, w.1)))
}

fn gap_check(c: &Ctx) -> Outcome {
    let mut w = (f64::NEG_INFINITY, String::new());
    for p in &c.pairs {
        for n in copies_for(p.d()) {
            for a in &p.dist(n, false)?.atoms {
                let gap = a.x - a.x_star;
                if gap < -1e-12 {
                    return Ok((false, format!("{} n={n} {}: x < x*", p.label, a.lambda)));
                }
                worst(&format!("{} n={n}", p.label), gap - nm2_gap(n, p.d(), a.ln_e), &mut w);
            }
        }
    }
    Ok((w.0 <= 1e-12, format!("max gap excess {:.3e} {}", w.0, w.1)))
}

fn thb_check(c: &Ctx) -> Outcome {
    let mut w = (f64::NEG_INFINITY, String::new());
    for p in &c.pairs {
        let dv = relative_entropy(&p.rho, &p.sigma)?;
        let v = relative_varentropy(&p.rho, &p.sigma)?;
        let start = if p.d() == 2 { 2 } else { 1 };
        for n in start..=*copies_for(p.d()).end() {
            let mse = exact_mse(&p.dist(n, false)?, dv)?.mse;
            worst(&format!("{} n={n}", p.label), mse - thb_rhs(n, p.d(), v), &mut w);
        }
    }
    Ok((w.0 <= 1e-9, format!("max mse - rhs = {:.3e} {}", w.0, w.1)))
}

fn sampling_consistency(c: &Ctx) -> Outcome {
    let p = &c.pairs[1];
    let dist = p.dist(5, true)?;
    let m = 100_000;
    let mut xs: Vec<f64> = sample_outcomes(&dist, m, c.seed)?.into_iter().map(|s| s.x).collect();
    xs.sort_by(f64::total_cmp);
    let mut atoms: Vec<(f64, f64)> = dist.atoms.iter().map(|a| (a.x, a.p)).collect();
    atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (mut cdf, mut k, mut ks) = (0.0, 0usize, 0.0f64);
    for (i, &(x, q)) in atoms.iter().enumerate() {
        cdf += q;
        if atoms.get(i + 1).is_some_and(|a| a.0 == x) {
            continue;
        }
        while k < m && xs[k] <= x {
            k += 1;
        }
        ks = ks.max((k as f64 / m as f64 - cdf).abs());
    }
    let limit = 1.63 / (m as f64).sqrt();
    Ok((ks < limit, format!("KS {ks:.3e} against {limit:.3e}")))
}

fn thb_forms(_: &Ctx) -> Outcome {
    for d in 2..=4 {
        for n in 1..=30 {
            if thb_rhs(n, d, 0.5) > thb_rhs_bvt(n, d, 0.5) + 1e-15 {
                return Ok((false, format!("n={n} d={d}")));
            }
        }
    }
    Ok((true, "n <= 30, d <= 4".into()))
}

fn large_deviations(c: &Ctx) -> Outcome {
    let mut informative = 0;
    for p in c.pairs.iter().filter(|p| p.d() == 2) {
        let dv = relative_entropy(&p.rho, &p.sigma)?;
        for n in [4, 8] {
            let dist = p.dist(n, false)?;
            let ln_dnd = ln_schur_dim_total(n, 2);
            for k in 1..=5 {
                let eps = 0.15 * k as f64 * (1.0 + dv);
                let t = tail_probabilities(&dist, dv, eps)?;
                let up = upper_tail_bound(n, ln_dnd, dv + eps, |a| {
                    sandwiched_renyi(&p.rho, &p.sigma, 1.0 + a).unwrap_or(f64::INFINITY)
                });
                let lo = lower_tail_bound(n, ln_dnd, dv - eps, |a| {
                    sandwiched_renyi(&p.rho, &p.sigma, 1.0 - a).unwrap_or(f64::NEG_INFINITY)
                });
                if t.delta_plus > up.value + 1e-9 || t.delta_minus > lo.value + 1e-9 {
                    return Ok((false, format!("{} n={n} ε={eps}", p.label)));
                }
                informative += (up.value < 1.0) as usize + (lo.value < 1.0) as usize;
            }
        }
    }
    Ok((true, format!("{informative} non-vacuous comparisons")))
}

fn th4_chain(_: &Ctx) -> Outcome {
    for c in [0.1, 1.0, 10.0, 100.0] {
        for c0 in [0.0, 1.0, 10.0] {
            let b = th4_rhs(c, c0, 0.5)?;
            if b.exact > b.simple * (1.0 + 1e-12) {
                return Ok((false, format!("c={c} c0={c0}")));
            }
        }
    }
    Ok((true, "exact <= simple on the grid".into()))
}

fn llo(c: &Ctx) -> Outcome {
    for p in &c.pairs {
        let t = -p.sigma.min_eigenvalue().ln() / p.d() as f64;
        let r = llo_bound_check(&p.rho, &p.sigma, t)?;
        if !r.holds {
            return Ok((false, format!("{}: {} > {}", p.label, r.lhs, r.rhs)));
        }
    }
    Ok((true, "sqrt V <= log d + t d".into()))
}

const CHECKS: &[Check] = &[
    ("schur_weyl_dimension_identity", combinatorics_identity),
    ("polynomial_block_counts", polynomial_counts),
    ("character_at_identity", character_identity),
    ("zoi_bound_per_block", zoi_blocks),
    ("type_entropy_sandwich", type_entropy),
    ("relative_entropy_positive", divergence_positivity),
    ("sld_inner_equals_varentropy", sld_identity),
    ("renyi_monotone_and_continuous", renyi_shape),
    ("unitary_invariance", unitary_invariance),
    ("backend_equivalence", backend_equivalence),
    ("normalization", normalization),
    ("kostka_consistency", kostka_consistency),
    ("pinching_inequality", pinching),
    ("mean_interval", mean_interval_check),
    ("operator_mse_identity", operator_identity),
    ("per_outcome_gap", gap_check),
    ("mse_below_thb", thb_check),
    ("sampling_consistency", sampling_consistency),
    ("thb_exact_below_polynomial", thb_forms),
    ("large_deviation_bounds", large_deviations),
    ("sample_complexity_chain", th4_chain),
    ("varentropy_growth", llo),
];

pub fn run_suite(extra: Option<&(DensityMatrix, DensityMatrix)>, seed: u64) -> Vec<CheckResult> {
    let mut pairs: Vec<Pair> =
        PAIRS.iter().map(|(r, s)| Pair { label: format!("{r}|{s}"), rho: state(r), sigma: state(s) }).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for d in [2, 3] {
        for k in 0..2 {
            let (rho, sigma) = random_pair(d, &mut rng);
            pairs.push(Pair { label: format!("random_d{d}_{k}"), rho, sigma });
        }
    }
    if let Some((rho, sigma)) = extra {
        pairs.push(Pair { label: "user".into(), rho: rho.clone(), sigma: sigma.clone() });
    }
    let ctx = Ctx { pairs, seed };
    CHECKS
        .iter()
        .map(|(name, f)| {
            let (passed, detail) = match f(&ctx) {
                Ok(r) => r,
                Err(e) => (false, format!("error: {e}")),
            };
            CheckResult { name: name.to_string(), passed, detail }
        })
        .collect()
}
