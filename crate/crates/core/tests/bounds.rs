mod common;

use common::{diag_state, random_pair};
use proptest::prelude::*;
use schur_relent::bounds::{
    c0_proxy, lower_tail_bound, th4_rhs, thb_rhs, thb_rhs_bvt, tomography_baseline, upper_tail_alt_exponent,
    upper_tail_bound,
};
use schur_relent::combinatorics::dims::ln_weyl_dim;
use schur_relent::combinatorics::{
    enumerate_young, ln_schur_dim_total, type_entropy_bounds, zoi_dim_bound, YoungIndex,
};
use schur_relent::distribution::marginal::sigma_uniform_tail;
use schur_relent::distribution::{compute, Backend};
use schur_relent::estimator::{annotate_estimates, tail_probabilities};
use schur_relent::states::{relative_entropy, relative_varentropy, sandwiched_renyi, DensityMatrix, SigmaSpectrum};

fn tails(rho: &DensityMatrix, sigma: &DensityMatrix, n: usize, dv: f64, eps: f64) -> (f64, f64) {
    let s = SigmaSpectrum::new(sigma).unwrap();
    let dist = annotate_estimates(compute(rho, &s, n, Backend::CyclePoly).unwrap(), &s).unwrap();
    let t = tail_probabilities(&dist, dv, eps).unwrap();
    (t.delta_plus, t.delta_minus)
}

#[test]
fn large_deviation_bounds_hold() {
    let mut informative = 0;
    for seed in 0..10 {
        let (rho, sigma) = random_pair(2, 600 + seed);
        let dv = relative_entropy(&rho, &sigma).unwrap();
        for n in [4, 6, 10] {
            let ln_dnd = ln_schur_dim_total(n, 2);
            for k in 1..=4 {
                let eps = 0.2 * k as f64 * (1.0 + dv);
                let (plus, minus) = tails(&rho, &sigma, n, dv, eps);
                let up = upper_tail_bound(n, ln_dnd, dv + eps, |a| sandwiched_renyi(&rho, &sigma, 1.0 + a).unwrap());
                let lo = lower_tail_bound(n, ln_dnd, dv - eps, |a| sandwiched_renyi(&rho, &sigma, 1.0 - a).unwrap());
                assert!(plus <= up.value + 1e-9, "seed {seed} n={n} eps={eps}: {plus} > {}", up.value);
                assert!(minus <= lo.value + 1e-9, "seed {seed} n={n} eps={eps}: {minus} > {}", lo.value);
                informative += (up.value < 1.0) as usize + (lo.value < 1.0) as usize;
            }
        }
    }
    assert!(informative > 20, "{informative}");
}

#[test]
fn commuting_pairs_match_classical_renyi() {
    let (p, s) = ([0.8, 0.2], [0.35, 0.65]);
    let (rho, sigma) = (diag_state(&p), diag_state(&s));
    let classical = |a: f64| (p[0].powf(a) * s[0].powf(1.0 - a) + p[1].powf(a) * s[1].powf(1.0 - a)).ln() / (a - 1.0);
    let dv = relative_entropy(&rho, &sigma).unwrap();
    for n in [4, 8, 20] {
        let ln_dnd = ln_schur_dim_total(n, 2);
        for r in [dv + 0.3, dv + 0.8] {
            let q = upper_tail_bound(n, ln_dnd, r, |a| sandwiched_renyi(&rho, &sigma, 1.0 + a).unwrap());
            let c = upper_tail_bound(n, ln_dnd, r, |a| classical(1.0 + a));
            assert!((q.raw - c.raw).abs() <= 1e-8 * (1.0 + c.raw));
        }
        for r in [dv - 0.3, dv - 0.8] {
            let q = lower_tail_bound(n, ln_dnd, r, |a| sandwiched_renyi(&rho, &sigma, 1.0 - a).unwrap());
            let c = lower_tail_bound(n, ln_dnd, r, |a| classical(1.0 - a));
            assert!((q.raw - c.raw).abs() <= 1e-8 * (1.0 + c.raw));
        }
    }
}

#[test]
fn alternative_upper_exponent_is_reported() {
    let (rho, sigma) = random_pair(2, 5);
    let dv = relative_entropy(&rho, &sigma).unwrap();
    let ln_dnd = ln_schur_dim_total(8, 2);
    let b = upper_tail_alt_exponent(8, ln_dnd, dv + 0.5, |a| sandwiched_renyi(&rho, &sigma, 1.0 + a).unwrap());
    assert!(b.raw.is_finite() && b.value <= 1.0);
}

#[test]
fn exact_dimension_beats_polynomial_bound() {
    for d in 2..=4 {
        for n in 1..=30 {
            for v in [0.0, 0.5, 3.0] {
                assert!(thb_rhs(n, d, v) <= thb_rhs_bvt(n, d, v) + 1e-15, "d={d} n={n}");
            }
        }
    }
}

#[test]
fn thb_attains_first_order() {
    let gap = |n: usize| n as f64 * (thb_rhs(n, 2, 0.7) - 0.7 / n as f64);
    assert!(gap(100) > gap(1000) && gap(1000) > gap(10000));
}

#[test]
fn th4_chain() {
    for c in [0.1, 1.0, 10.0, 100.0] {
        for c0 in [0.0, 1.0, 10.0] {
            let b = th4_rhs(c, c0, 0.3).unwrap();
            assert!(b.exact <= b.simple * (1.0 + 1e-12), "c={c} c0={c0}");
        }
    }
    let c0: f64 = 0.7;
    let (eps, target) = (0.2, 0.05);
    let c = (c0.sqrt() + 4.0).powi(2) / (target * eps * eps);
    assert!((th4_rhs(c, c0, eps).unwrap().simple - target).abs() < 1e-14);
}

#[test]
fn c0_proxy_matches_grid_scan() {
    for d in 2..=5 {
        let (v, _) = c0_proxy(d);
        let dm1 = (d - 1) as f64;
        let scan = (1..100_000)
            .map(|k| {
                let p = k as f64 / 100_000.0;
                let l = ((1.0 - p) * dm1 / p).ln();
                p * (1.0 - p) * l * l
            })
            .fold(0.0f64, f64::max)
            / (d * d) as f64;
        assert!(v >= scan - 1e-12 && v - scan < 1e-6, "d={d}: {v} vs {scan}");
    }
}

#[test]
fn c0_proxy_is_attained_by_a_state() {
    let (v, p) = c0_proxy(3);
    let rho = diag_state(&[1.0 - p, p / 2.0, p / 2.0]);
    let var = relative_varentropy(&rho, &DensityMatrix::maximally_mixed(3)).unwrap();
    assert!((var / 9.0 - v).abs() < 1e-12);
}

#[test]
fn tomography_ratio_grows_like_d_squared() {
    let ratio = |d: usize| tomography_baseline(d, 1.0, 0.1).unwrap() / (d * d) as f64;
    let r: Vec<f64> = [16usize, 32, 64].iter().map(|&d| ratio(d) / (d * d) as f64).collect();
    assert!(r.windows(2).all(|w| (w[1] / w[0] - 1.0).abs() < 0.15), "{r:?}");
}

#[test]
fn marginal_engine_matches_full_distribution() {
    for (spec, n) in
        [(vec![0.6, 0.4], 20usize), (vec![0.5, 0.3, 0.2], 8), (vec![1.0 / 3.0; 3], 7), (vec![0.55, 0.25, 0.2], 12)]
    {
        let d = spec.len();
        let rho = diag_state(&spec);
        let sigma = DensityMatrix::maximally_mixed(d);
        let dv = relative_entropy(&rho, &sigma).unwrap();
        for eps in [0.05, 0.2] {
            let (plus, minus) = tails(&rho, &sigma, n, dv, eps);
            let m = sigma_uniform_tail(&spec, n, eps).unwrap();
            assert!((m.total_mass - 1.0).abs() < 1e-10);
            assert!(m.pruned_mass_bound < 1e-15);
            assert!((m.delta_plus - plus).abs() < 1e-10 && (m.delta_minus - minus).abs() < 1e-10, "{spec:?} n={n}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn type_entropy_sandwich(parts in prop::collection::vec(0usize..12, 2..5)) {
        let n: usize = parts.iter().sum();
        prop_assume!(n > 0);
        let d = parts.len();
        let lam = YoungIndex::from_unordered(parts.clone(), d).unwrap();
        let b = type_entropy_bounds(&lam);
        prop_assert!(b.holds);
        prop_assert!(b.ln_lower <= b.ln_multinomial + 1e-9 && b.ln_multinomial <= b.ln_upper + 1e-9);
    }

    #[test]
    fn zoi_bound_dominates(n in 1usize..40, d in 2usize..5, s in 0.05f64..0.95) {
        for lam in enumerate_young(n, d) {
            prop_assert!(ln_weyl_dim(lam.parts()) <= zoi_dim_bound(n, d, s) + 1e-9, "{}", lam);
        }
    }

    #[test]
    fn tail_bounds_are_probabilities(n in 1usize..30, r in -2.0f64..2.0, dv in 0.0f64..1.0) {
        let ln_dnd = ln_schur_dim_total(n, 2);
        let u = upper_tail_bound(n, ln_dnd, r, |a| dv + 0.1 * a);
        let l = lower_tail_bound(n, ln_dnd, r, |a| dv - 0.1 * a);
        prop_assert!((0.0..=1.0).contains(&u.value) && (0.0..=1.0).contains(&l.value));
    }
}
