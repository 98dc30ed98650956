mod common;

use common::{diag_state, random_pair};
use schur_relent::bounds::{nm2_gap, nm2_gap_tight, thb_rhs};
use schur_relent::combinatorics::{ln_schur_dim_total, YoungIndex};
use schur_relent::distribution::dense::DenseModel;
use schur_relent::distribution::{compute, Backend, OutcomeDistribution};
use schur_relent::estimator::{
    annotate_estimates, exact_mse, mean_interval, normality_report, sample_outcomes, tail_probabilities,
    x_star_plus_entropy,
};
use schur_relent::states::{relative_entropy, relative_varentropy, DensityMatrix, SigmaSpectrum};

fn run(rho: &DensityMatrix, sigma: &DensityMatrix, n: usize, backend: Backend) -> OutcomeDistribution {
    let s = SigmaSpectrum::new(sigma).unwrap();
    annotate_estimates(compute(rho, &s, n, backend).unwrap(), &s).unwrap()
}

#[test]
fn per_outcome_gap_is_bounded() {
    for (d, ns) in [(2usize, 2..=8usize), (3, 2..=6)] {
        for n in ns {
            for seed in 0..4 {
                let (rho, sigma) = random_pair(d, seed * 31 + n as u64);
                let dist = run(&rho, &sigma, n, Backend::CyclePoly);
                for a in &dist.atoms {
                    let gap = a.x - a.x_star;
                    assert!(gap >= -1e-12, "{} {:?}: {gap}", a.lambda, a.mu);
                    assert!(gap <= nm2_gap_tight(n, d, a.ln_e) + 1e-12);
                    assert!(nm2_gap_tight(n, d, a.ln_e) <= nm2_gap(n, d, a.ln_e));
                }
            }
        }
    }
}

#[test]
fn entropy_plus_variant_overshoots() {
    // with +H the surrogate sits about 2H(λ/n) above x, past the gap ceiling
    let (rho, sigma) = random_pair(2, 3);
    let dist = run(&rho, &sigma, 8, Backend::Brute);
    let ln_s = SigmaSpectrum::new(&sigma).unwrap().ln_eigenvalues();
    let a = dist.atoms.iter().find(|a| a.lambda.parts() == [4, 4]).unwrap();
    let plus = x_star_plus_entropy(a.lambda.parts(), &a.mu, &ln_s);
    assert!(plus - a.x > nm2_gap(8, 2, a.ln_e));
}

#[test]
fn atom_mse_matches_operator_identity() {
    let rho = diag_state(&[0.9, 0.1]);
    let sigma = DensityMatrix::maximally_mixed(2);
    let cases: Vec<(DensityMatrix, DensityMatrix, usize)> = std::iter::once((rho, sigma, 4))
        .chain((0..6).map(|s| {
            let (r, q) = random_pair(2, 200 + s);
            (r, q, 2 + s as usize % 4)
        }))
        .chain((0..3).map(|s| {
            let (r, q) = random_pair(3, 250 + s);
            (r, q, 2 + s as usize % 2)
        }))
        .collect();
    for (rho, sigma, n) in cases {
        let dv = relative_entropy(&rho, &sigma).unwrap();
        let dist = run(&rho, &sigma, n, Backend::Brute);
        let mse = exact_mse(&dist, dv).unwrap().mse;
        let op = DenseModel::new(&rho, &sigma, n).unwrap().operator_mse().unwrap();
        assert!((mse - op).abs() < 1e-8, "n={n}: {mse} vs {op}");
    }
}

#[test]
fn mse_is_below_thb() {
    for (d, ns) in [(2usize, 2..=12usize), (3, 1..=6)] {
        for n in ns {
            for seed in 0..6 {
                let (rho, sigma) = random_pair(d, 4000 + seed + 10 * n as u64);
                let dv = relative_entropy(&rho, &sigma).unwrap();
                let v = relative_varentropy(&rho, &sigma).unwrap();
                let s = exact_mse(&run(&rho, &sigma, n, Backend::CyclePoly), dv).unwrap();
                assert!(s.mse <= thb_rhs(n, d, v) + 1e-9, "d={d} n={n}: {} > {}", s.mse, thb_rhs(n, d, v));
                assert!(s.mse >= s.bias * s.bias - 1e-15);
                assert!(s.mse_star >= s.bias_star * s.bias_star - 1e-15);
            }
        }
    }
}

#[test]
fn single_qubit_copy_can_exceed_thb() {
    // d_{1,2} = 2 is too small for the second-moment step behind the bound
    let rho = diag_state(&[0.1, 0.9]);
    let dv = relative_entropy(&rho, &rho).unwrap();
    let s = exact_mse(&run(&rho, &rho, 1, Backend::Brute), dv).unwrap();
    assert!((s.mse - 0.5402).abs() < 1e-4, "{}", s.mse);
    assert!(s.mse > thb_rhs(1, 2, 0.0));
}

#[test]
fn mean_lies_above_divergence() {
    for (d, n) in [(2, 1), (2, 5), (2, 12), (3, 2), (3, 5)] {
        for seed in 0..8 {
            let (rho, sigma) = random_pair(d, 7000 + seed);
            let dv = relative_entropy(&rho, &sigma).unwrap();
            let s = exact_mse(&run(&rho, &sigma, n, Backend::CyclePoly), dv).unwrap();
            let (lo, hi) = mean_interval(dv, n, ln_schur_dim_total(n, d));
            assert!(s.mean_x >= lo - 1e-9 && s.mean_x <= hi + 1e-9, "d={d} n={n}: {} not in [{lo}, {hi}]", s.mean_x);
        }
    }
}

#[test]
fn trivial_point() {
    let half = DensityMatrix::maximally_mixed(2);
    let dist = run(&half, &half, 1, Backend::Brute);
    let s = exact_mse(&dist, 0.0).unwrap();
    let ln2 = 2f64.ln();
    assert!((s.mse - ln2 * ln2).abs() < 1e-15);
    assert!((s.mse - thb_rhs(1, 2, 0.0)).abs() < 1e-15);
    assert!(exact_mse(&dist, f64::INFINITY).is_err());
}

#[test]
fn chebyshev_controls_tails() {
    for seed in 0..10 {
        let (rho, sigma) = random_pair(2, 50 + seed);
        let dv = relative_entropy(&rho, &sigma).unwrap();
        let dist = run(&rho, &sigma, 10, Backend::CyclePoly);
        let mse = exact_mse(&dist, dv).unwrap().mse;
        for eps in [0.05, 0.1, 0.3, 1.0] {
            let t = tail_probabilities(&dist, dv, eps).unwrap();
            assert!((0.0..=1.0).contains(&t.delta_plus) && (0.0..=1.0).contains(&t.delta_minus));
            assert!(t.delta_plus + t.delta_minus <= mse / (eps * eps) + 1e-12);
        }
        let t = tail_probabilities(&dist, dv, 100.0).unwrap();
        assert_eq!((t.delta_plus, t.delta_minus), (0.0, 0.0));
    }
}

#[test]
fn sampled_moments_match_exact_ones() {
    let half = DensityMatrix::maximally_mixed(2);
    let dist = run(&half, &half, 2, Backend::Brute);
    let m = 100_000;
    let draws = sample_outcomes(&dist, m, 11).unwrap();
    let sq: Vec<f64> = draws.iter().map(|s| s.x * s.x).collect();
    let emp = sq.iter().sum::<f64>() / m as f64;
    let exact = exact_mse(&dist, 0.0).unwrap().mse;
    let fourth: f64 = dist.atoms.iter().map(|a| a.p * a.x.powi(4)).sum();
    let se = ((fourth - exact * exact) / m as f64).sqrt();
    assert!((emp - exact).abs() <= 3.0 * se + 1e-12, "{emp} vs {exact} (se {se})");
}

#[test]
fn sampled_cdf_converges() {
    let (rho, sigma) = random_pair(2, 8);
    let dist = run(&rho, &sigma, 6, Backend::Brute);
    let mean: f64 = dist.atoms.iter().map(|a| a.p * a.x).sum();
    let var: f64 = dist.atoms.iter().map(|a| a.p * (a.x - mean).powi(2)).sum();
    for seed in [1u64, 2] {
        let m = 100_000;
        let draws = sample_outcomes(&dist, m, seed).unwrap();
        let emp_mean = draws.iter().map(|s| s.x).sum::<f64>() / m as f64;
        assert!((emp_mean - mean).abs() <= 5.0 * (var / m as f64).sqrt());
        let mut xs: Vec<f64> = draws.iter().map(|s| s.x).collect();
        xs.sort_by(f64::total_cmp);
        let mut atoms: Vec<(f64, f64)> = dist.atoms.iter().map(|a| (a.x, a.p)).collect();
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (mut exact_cdf, mut ks, mut k) = (0.0, 0.0f64, 0);
        for (i, &(x, p)) in atoms.iter().enumerate() {
            exact_cdf += p;
            if atoms.get(i + 1).is_some_and(|a| a.0 == x) {
                continue;
            }
            while k < m && xs[k] <= x {
                k += 1;
            }
            ks = ks.max((k as f64 / m as f64 - exact_cdf).abs());
        }
        assert!(ks < 1.63 / (m as f64).sqrt(), "seed {seed}: {ks}");
    }
}

#[test]
fn normality_improves_with_n() {
    let rho = diag_state(&[0.7, 0.3]);
    let sigma = diag_state(&[0.4, 0.6]);
    let dv = relative_entropy(&rho, &sigma).unwrap();
    let v = relative_varentropy(&rho, &sigma).unwrap();
    let ks: Vec<f64> = [6, 12, 24]
        .iter()
        .map(|&n| normality_report(&run(&rho, &sigma, n, Backend::CyclePoly), dv, v).unwrap().ks)
        .collect();
    assert!(ks[0] > ks[1] && ks[1] > ks[2], "{ks:?}");
}

#[test]
fn vanishing_log_term_second_moment() {
    for (d, n) in [(2, 4), (2, 10), (2, 20), (3, 3), (3, 8)] {
        for seed in 0..4 {
            let (rho, sigma) = random_pair(d, 880 + seed);
            let dv = relative_entropy(&rho, &sigma).unwrap();
            let v = relative_varentropy(&rho, &sigma).unwrap();
            let r = normality_report(&run(&rho, &sigma, n, Backend::CyclePoly), dv, v).unwrap();
            assert!(r.log_term_bound_applies);
            assert!(r.log_term_second_moment <= r.log_term_bound + 1e-12, "d={d} n={n}");
        }
    }
}

#[test]
fn block_state_second_moment() {
    for (d, n) in [(2, 2), (2, 3), (2, 5), (3, 2), (3, 3)] {
        for seed in 0..3 {
            let (rho, sigma) = random_pair(d, 123 + seed);
            let m = DenseModel::new(&rho, &sigma, n).unwrap().block_log_second_moment().unwrap();
            let l = ln_schur_dim_total(n, d);
            assert!(m <= l * l + 1e-12, "d={d} n={n}: {m} > {}", l * l);
        }
    }
}

#[test]
fn identical_states_are_degenerate() {
    let (rho, _) = random_pair(2, 1);
    let dist = run(&rho, &rho, 4, Backend::Brute);
    assert!(normality_report(&dist, 0.0, 0.0).is_err());
    let s = exact_mse(&dist, 0.0).unwrap();
    let l = ln_schur_dim_total(4, 2) / 4.0;
    assert!(s.mse <= l * l + 1e-12);
}

#[test]
fn estimates_depend_only_on_labels() {
    let rho = diag_state(&[0.5, 0.5]);
    let s = 0.3;
    let sigma = diag_state(&[1.0 - s, s]);
    let dist = run(&rho, &sigma, 2, Backend::Brute);
    let lam = YoungIndex::new(vec![0, 2]).unwrap();
    let a = dist.atoms.iter().find(|a| a.lambda == lam && a.mu == [0, 2]).unwrap();
    assert!((a.x + s.ln()).abs() < 1e-15 && (a.x_star - a.x).abs() < 1e-15);
}
