use crate::output::{big, float, int, text, Report, Table};
use crate::parallel::par_map;
use crate::{verify, BackendChoice, Cli, CliError, CliResult, Command, CopiesArgs, PairArgs, StateKind};
use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use schur_relent::bounds::{
    c0_proxy, c_for_simple_bound, lower_tail_bound, th4_rhs, tomography_baseline, two_level_spectrum,
    upper_tail_alt_exponent, upper_tail_bound,
};
use schur_relent::combinatorics::{ln_schur_dim_total, total_schur_dim};
use schur_relent::distribution::marginal::sigma_uniform_tail;
use schur_relent::distribution::{auto_backend, compute, Backend, OutcomeDistribution};
use schur_relent::estimator::{
    annotate_estimates, estimator_report, normality_report, sample_outcomes, tail_probabilities,
};
use schur_relent::params::{parse_n_range, parse_real_grid};
use schur_relent::states::{
    divergence_set, fidelity, parse_state_json, random_mixed, random_pure_depolarized, relative_entropy,
    relative_varentropy, sandwiched_renyi, DensityMatrix, SigmaSpectrum, StateFile,
};
use serde_json::{json, Value};
use std::path::Path;

/// Spread applied to the two-level family so its spectrum has distinct entries.
const FAMILY_SPLIT: f64 = 0.5;

pub fn dispatch(cli: &Cli) -> CliResult<(Report, CliResult<()>)> {
    let report = match &cli.command {
        Command::Dims { n, n_range, d } => dims(&copies(*n, n_range.as_deref())?, &parse_n_range(d)?),
        Command::Divergence { pair, alpha } => divergence(pair, alpha)?,
        Command::Distribution { pair, n, backend } => distribution(pair, *n, *backend)?,
        Command::Estimate { pair, copies, samples } => estimate(pair, copies, *samples, cli.seed)?,
        Command::Tail { pair, copies, epsilon } => tail(pair, copies, epsilon)?,
        Command::Normality { pair, copies } => normality(pair, copies)?,
        Command::ComplexityScan { d, epsilon, c, target, t } => {
            complexity_scan(&parse_n_range(d)?, *epsilon, *c, *target, *t)?
        }
        Command::Verify { rho, sigma } => {
            let extra = match (rho, sigma) {
                (Some(r), Some(s)) => Some((load_state(r)?, load_state(s)?)),
                _ => None,
            };
            let results = verify::run_suite(extra.as_ref(), cli.seed);
            let failed = results.iter().filter(|r| !r.passed).count();
            let mut t = Table::new(&["check", "passed", "detail"]);
            for r in &results {
                t.push(vec![text(&r.name), Value::Bool(r.passed), text(&r.detail)]);
            }
            let verdict = if failed == 0 { Ok(()) } else { Err(CliError::Verify { failed, total: results.len() }) };
            return Ok((Report::Table(t), verdict));
        }
        Command::GenerateStates { kind, d, spectrum, p } => {
            generate_states(*kind, *d, spectrum.as_deref(), *p, cli.seed)?
        }
    };
    Ok((report, Ok(())))
}

fn load_state(path: &Path) -> CliResult<DensityMatrix> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })?;
    Ok(parse_state_json(&text)?)
}

fn load_pair(pair: &PairArgs) -> CliResult<(DensityMatrix, DensityMatrix)> {
    let rho = load_state(&pair.rho)?;
    let sigma = load_state(&pair.sigma)?;
    if rho.dim() != sigma.dim() {
        return Err(schur_relent::Error::DimensionMismatch { expected: rho.dim(), found: sigma.dim() }.into());
    }
    Ok((rho, sigma))
}

fn copies(n: Option<usize>, range: Option<&str>) -> CliResult<Vec<usize>> {
    match (n, range) {
        (Some(0), _) => Err(CliError::Usage("--n must be at least 1".into())),
        (Some(n), _) => Ok(vec![n]),
        (None, Some(r)) => Ok(parse_n_range(r)?),
        (None, None) => Err(CliError::Usage("one of --n or --n-range is required".into())),
    }
}

fn resolve(choice: BackendChoice, n: usize, d: usize) -> Backend {
    match choice {
        BackendChoice::Auto => auto_backend(n, d),
        BackendChoice::Brute => Backend::Brute,
        BackendChoice::CyclePoly => Backend::CyclePoly,
    }
}

fn annotated(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    n: usize,
    choice: BackendChoice,
) -> CliResult<OutcomeDistribution> {
    let spec = SigmaSpectrum::new(sigma)?;
    let dist = compute(rho, &spec, n, resolve(choice, n, rho.dim()))?;
    Ok(annotate_estimates(dist, &spec)?)
}

/// One report per `n`: a single object for `--n`, an array for `--n-range`.
fn per_n(ns: &[usize], table: Table) -> Report {
    match rows_to_json(&table) {
        Value::Array(mut rows) if ns.len() == 1 && rows.len() == 1 => Report::Document { json: rows.remove(0), table },
        _ => Report::Table(table),
    }
}

fn rows_to_json(t: &Table) -> Value {
    Value::Array(
        t.rows
            .iter()
            .map(|r| Value::Object(t.columns.iter().map(|c| c.to_string()).zip(r.iter().cloned()).collect()))
            .collect(),
    )
}

fn dims(ns: &[usize], ds: &[usize]) -> Report {
    let mut table = Table::new(&["n", "d", "lambda", "u_dim", "v_dim", "e_factor"]);
    let mut docs = Vec::new();
    for &n in ns {
        for &d in ds {
            let s = total_schur_dim(n, d);
            let sum = s.blocks.iter().fold(BigUint::from(0u32), |acc, b| acc + &b.u_dim * &b.v_dim);
            let d_pow_n = BigUint::from(d).pow(n as u32);
            let mut blocks = Vec::new();
            for b in &s.blocks {
                let lam: Vec<usize> = b.lambda.parts().to_vec();
                table.push(vec![
                    int(n as i128),
                    int(d as i128),
                    json!(lam),
                    big(&b.u_dim),
                    big(&b.v_dim),
                    text(&b.e_factor),
                ]);
                blocks.push(json!({"lambda": lam, "u_dim": big(&b.u_dim), "v_dim": big(&b.v_dim), "e_factor": text(&b.e_factor)}));
            }
            docs.push(json!({
                "n": n,
                "d": d,
                "total_schur_dim": big(&s.total_schur_dim),
                "block_count": s.blocks.len(),
                "block_count_bound": big(&s.block_count_bound),
                "u_dim_bound": big(&s.u_dim_bound),
                "total_bound": big(&s.total_bound),
                "schur_weyl_sum": big(&sum),
                "schur_weyl_identity": sum == d_pow_n,
                "blocks": blocks,
            }));
        }
    }
    let json = if docs.len() == 1 { docs.remove(0) } else { Value::Array(docs) };
    Report::Document { json, table }
}

fn divergence(pair: &PairArgs, alpha: &str) -> CliResult<Report> {
    let (rho, sigma) = load_pair(pair)?;
    let alphas = parse_real_grid(alpha)?;
    if let Some(a) = alphas.iter().find(|&&a| !(a > 0.0) || a == 1.0) {
        return Err(CliError::Usage(format!("Rényi order {a} must be positive and different from 1")));
    }
    let set = divergence_set(&rho, &sigma, &alphas)?;
    let f = fidelity(&rho, &sigma)?;
    let mut table = Table::new(&["quantity", "alpha", "value"]);
    table.push(vec![text("D"), Value::Null, float(set.d)]);
    table.push(vec![text("V"), Value::Null, float(set.v)]);
    table.push(vec![text("fidelity"), Value::Null, float(f)]);
    for &(a, v) in &set.renyi {
        table.push(vec![text("renyi"), float(a), float(v)]);
    }
    let json = json!({
        "d": rho.dim(),
        "D": float(set.d),
        "V": float(set.v),
        "fidelity": float(f),
        "renyi": set.renyi.iter().map(|&(a, v)| json!({"alpha": float(a), "value": float(v)})).collect::<Vec<_>>(),
    });
    Ok(Report::Document { json, table })
}

fn distribution(pair: &PairArgs, n: usize, backend: BackendChoice) -> CliResult<Report> {
    if n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    let (rho, sigma) = load_pair(pair)?;
    let dist = annotated(&rho, &sigma, n, backend)?;
    let mut table = Table::new(&["lambda", "mu", "p", "q_unit", "multiplicity", "x", "x_star"]);
    for a in &dist.atoms {
        table.push(vec![
            json!(a.lambda.parts()),
            json!(a.mu),
            float(a.p),
            float(a.ln_q_unit.exp()),
            int(a.multiplicity as i128),
            float(a.x),
            float(a.x_star),
        ]);
    }
    let json = json!({
        "n": n,
        "d": dist.d,
        "backend": dist.backend.to_string(),
        "sigma_spectrum": dist.sigma_spectrum.iter().map(|&s| float(s)).collect::<Vec<_>>(),
        "diagnostics": {
            "clamped": dist.diagnostics.clamped,
            "below_note": dist.diagnostics.below_note,
            "min_raw": float(dist.diagnostics.min_raw),
            "raw_total": float(dist.diagnostics.raw_total),
        },
        "atoms": rows_to_json(&table),
    });
    Ok(Report::Document { json, table })
}

fn estimate(pair: &PairArgs, c: &CopiesArgs, samples: Option<usize>, seed: u64) -> CliResult<Report> {
    let (rho, sigma) = load_pair(pair)?;
    let ns = copies(c.n, c.n_range.as_deref())?;
    if let Some(m) = samples {
        if ns.len() != 1 {
            return Err(CliError::Usage("--samples needs a single --n".into()));
        }
        let dist = annotated(&rho, &sigma, ns[0], c.backend)?;
        let mut t = Table::new(&["draw_index", "x", "x_star"]);
        for s in sample_outcomes(&dist, m, seed)? {
            t.push(vec![int(s.draw_index as i128), float(s.x), float(s.x_star)]);
        }
        return Ok(Report::Table(t));
    }
    let dv = relative_entropy(&rho, &sigma)?;
    let v = relative_varentropy(&rho, &sigma)?;
    let rows = par_map(&ns, |&n| -> CliResult<Vec<Value>> {
        let r = estimator_report(&annotated(&rho, &sigma, n, c.backend)?, dv, v)?;
        Ok(vec![
            int(r.n as i128),
            int(r.d as i128),
            float(r.d_true),
            float(r.v),
            float(r.mean_x),
            float(r.mse),
            float(r.bias),
            float(r.mse_star),
            float(r.bias_star),
            float(r.thb_rhs),
            r.ks.map(float).unwrap_or(Value::Null),
        ])
    });
    let mut t = Table::new(&["n", "d", "D", "V", "mean_x", "mse", "bias", "mse_star", "bias_star", "thb_rhs", "ks"]);
    for r in rows {
        t.push(r?);
    }
    Ok(per_n(&ns, t))
}

fn tail(pair: &PairArgs, c: &CopiesArgs, epsilon: &str) -> CliResult<Report> {
    let (rho, sigma) = load_pair(pair)?;
    let ns = copies(c.n, c.n_range.as_deref())?;
    let eps = parse_real_grid(epsilon)?;
    if let Some(e) = eps.iter().find(|&&e| !(e > 0.0)) {
        return Err(CliError::Usage(format!("epsilon {e} must be positive")));
    }
    let dv = relative_entropy(&rho, &sigma)?;
    let d = rho.dim();
    let upper = |a: f64| sandwiched_renyi(&rho, &sigma, 1.0 + a).unwrap_or(f64::INFINITY);
    let lower = |a: f64| sandwiched_renyi(&rho, &sigma, 1.0 - a).unwrap_or(f64::NEG_INFINITY);
    let rows = par_map(&ns, |&n| -> CliResult<Vec<Vec<Value>>> {
        let dist = annotated(&rho, &sigma, n, c.backend)?;
        let ln_dnd = ln_schur_dim_total(n, d);
        let mut out = Vec::new();
        for &e in &eps {
            let t = tail_probabilities(&dist, dv, e)?;
            let bp = upper_tail_bound(n, ln_dnd, dv + e, upper);
            let bm = lower_tail_bound(n, ln_dnd, dv - e, lower);
            let alt = upper_tail_alt_exponent(n, ln_dnd, dv + e, upper);
            out.push(vec![
                int(n as i128),
                float(e),
                float(t.delta_plus),
                float(t.delta_minus),
                float(bp.value),
                float(bm.value),
                int(t.boundary_atoms as i128),
                float(alt.value),
            ]);
        }
        Ok(out)
    });
    let mut t = Table::new(&[
        "n",
        "epsilon",
        "delta_plus",
        "delta_minus",
        "bound_plus",
        "bound_minus",
        "boundary_atoms",
        "bound_plus_alt_exponent",
    ]);
    for r in rows {
        for row in r? {
            t.push(row);
        }
    }
    Ok(Report::Table(t))
}

fn normality(pair: &PairArgs, c: &CopiesArgs) -> CliResult<Report> {
    let (rho, sigma) = load_pair(pair)?;
    let ns = copies(c.n, c.n_range.as_deref())?;
    let dv = relative_entropy(&rho, &sigma)?;
    let v = relative_varentropy(&rho, &sigma)?;
    let rows = par_map(&ns, |&n| -> CliResult<Vec<Value>> {
        let r = normality_report(&annotated(&rho, &sigma, n, c.backend)?, dv, v)?;
        Ok(vec![int(n as i128), float(r.ks), float(r.log_term_second_moment), float(r.log_term_bound)])
    });
    let mut t = Table::new(&["n", "ks", "log_term_second_moment", "log_term_bound"]);
    for r in rows {
        t.push(r?);
    }
    Ok(Report::Table(t))
}

fn complexity_scan(ds: &[usize], epsilon: f64, c: Option<f64>, target: f64, t: f64) -> CliResult<Report> {
    if !(epsilon > 0.0) || !(target > 0.0) {
        return Err(CliError::Usage("--epsilon and --target must be positive".into()));
    }
    if let Some(&d) = ds.iter().find(|&&d| d < 2) {
        return Err(CliError::Usage(format!("dimension {d} is below 2")));
    }
    let mut points = Vec::new();
    for &d in ds {
        let (c0, p) = c0_proxy(d);
        let cc = c.unwrap_or_else(|| c_for_simple_bound(c0, epsilon, target));
        let n = (cc * (d * d) as f64).ceil() as usize;
        points.push((d, n, cc, c0, "maximally_mixed", vec![1.0 / d as f64; d]));
        points.push((d, n, cc, c0, "two_level", two_level_spectrum(d, p, FAMILY_SPLIT)));
    }
    let rows = par_map(&points, |(d, n, cc, c0, family, spec)| -> CliResult<Vec<Value>> {
        let m = sigma_uniform_tail(spec, *n, epsilon)?;
        let th4 = th4_rhs(*cc, *c0, epsilon)?;
        let mass = m.delta_plus + m.delta_minus;
        let base = tomography_baseline(*d, t, target)?;
        Ok(vec![
            int(*d as i128),
            int(*n as i128),
            float(*cc),
            float(*c0),
            text(family),
            float(m.d_true),
            float(m.delta_plus),
            float(m.delta_minus),
            float(mass),
            float(m.pruned_mass_bound),
            float(th4.exact),
            float(th4.simple),
            Value::Bool(mass <= th4.simple),
            float(base),
            float(base / *n as f64),
        ])
    });
    let mut tab = Table::new(&[
        "d",
        "n",
        "c",
        "c0",
        "family",
        "D",
        "delta_plus",
        "delta_minus",
        "tail_mass",
        "pruned_mass_bound",
        "th4_exact",
        "th4_simple",
        "within_bound",
        "tomography_baseline",
        "tomography_ratio",
    ]);
    for r in rows {
        tab.push(r?);
    }
    Ok(Report::Table(tab))
}

fn generate_states(
    kind: StateKind,
    d: Option<usize>,
    spectrum: Option<&str>,
    p: Option<f64>,
    seed: u64,
) -> CliResult<Report> {
    let spec = spectrum.map(parse_real_grid).transpose()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let file = match kind {
        StateKind::Diagonal => {
            let s = spec.ok_or_else(|| CliError::Usage("diagonal needs --spectrum".into()))?;
            let rho = DensityMatrix::from_spectrum(&s)?;
            StateFile::Spectrum { spectrum: (0..rho.dim()).map(|i| rho.matrix()[(i, i)].re).collect() }
        }
        StateKind::RandomMixed => {
            let s = spec.ok_or_else(|| CliError::Usage("random_mixed needs --spectrum".into()))?;
            StateFile::from_state(&random_mixed(&s, &mut rng)?)
        }
        StateKind::RandomPureDepolarized => {
            let d = d.ok_or_else(|| CliError::Usage("random_pure_depolarized needs --d".into()))?;
            let p = p.ok_or_else(|| CliError::Usage("random_pure_depolarized needs --p".into()))?;
            if d < 2 {
                return Err(CliError::Usage("--d must be at least 2".into()));
            }
            StateFile::from_state(&random_pure_depolarized(d, p, &mut rng)?)
        }
    };
    if let Some(d) = d {
        let dim = match &file {
            StateFile::Matrix { dim, .. } => *dim,
            StateFile::Spectrum { spectrum } => spectrum.len(),
        };
        if dim != d {
            return Err(CliError::Usage(format!("--d {d} does not match the spectrum length {dim}")));
        }
    }
    let json = serde_json::to_value(&file).map_err(schur_relent::Error::from)?;
    let mut table = Table::new(&["row", "col", "re", "im"]);
    let raw = file.to_raw()?;
    for i in 0..raw.nrows() {
        for j in 0..raw.ncols() {
            table.push(vec![int(i as i128), int(j as i128), float(raw[(i, j)].re), float(raw[(i, j)].im)]);
        }
    }
    Ok(Report::Document { json, table })
}
