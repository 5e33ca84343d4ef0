//! Dispatch from a command and configuration to the numerical suites.
//!
//! Every case draws from its own ChaCha stream, keyed by the run seed, the
//! suite and the case index, so results do not depend on scheduling. Cases
//! run in parallel and rows are sorted by case key before emission.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use scalefield::bundle_fields::Lattice;
use scalefield::gauge::{covariance_residual, reduce_to_standard, Su2Map};
use scalefield::scaled_scalars::{
    conjugate_then_scale_mismatch, rel_ops, scale_then_multiply_mismatch, w_map, BaseNumber, FieldOps, Level,
    ScaledValue,
};
use scalefield::studies::{
    axiom_case, convergence_catalog, convergence_study, curl_catalog, curl_lattice, curl_study, map_law_errors,
    random_gauge_setup, random_reduction_setup, relativization_case, rotational_field, witness_case,
    AXIOM_IDENTITIES, MAP_LAWS,
};
use scalefield::tol::rel_err;

use crate::config::{complex, Command, RunConfig};
use crate::report::{Cell, Report};

/// Generator for case `index` of suite `suite`.
pub fn case_rng(seed: u64, suite: u32, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((suite as u64) << 40) | index as u64);
    rng
}

pub fn run(command: Command, cfg: &RunConfig) -> scalefield::Result<Report> {
    match command {
        Command::Axioms => axioms(cfg),
        Command::ScaleDemo => scale_demo(cfg),
        Command::Convergence => convergence(cfg),
        Command::CurlDiagnostic => curl_diagnostic(cfg),
        Command::GaugeCheck => gauge_check(cfg),
        Command::ReduceCheck => reduce_check(cfg),
    }
}

const AXIOM_COLUMNS: [&str; 6] = ["suite", "case", "check", "error", "tolerance", "pass"];

fn check_row(suite: &str, case: usize, check: &str, error: f64, tol: f64) -> Vec<Cell> {
    vec![
        Cell::text(suite),
        Cell::int(case),
        Cell::text(check),
        Cell::float(error),
        Cell::float(tol),
        Cell::Bool(error <= tol),
    ]
}

fn axioms(cfg: &RunConfig) -> scalefield::Result<Report> {
    let spec = &cfg.axioms;
    let tol = cfg.tolerances.identity;
    let seed = cfg.seed;
    let mut rows = Vec::new();

    let field: Vec<[f64; 12]> = (0..spec.pairs)
        .into_par_iter()
        .map(|i| axiom_case(&mut case_rng(seed, 1, i), spec.kind, spec.triples))
        .collect::<scalefield::Result<_>>()?;
    for (i, errs) in field.iter().enumerate() {
        for (name, e) in AXIOM_IDENTITIES.iter().zip(errs) {
            rows.push(check_row("field_axioms", i, name, *e, tol));
        }
    }

    let maps: Vec<[f64; 3]> = (0..spec.map_cases)
        .into_par_iter()
        .map(|i| map_law_errors(&mut case_rng(seed, 2, i)))
        .collect::<scalefield::Result<_>>()?;
    for (i, errs) in maps.iter().enumerate() {
        for (name, e) in MAP_LAWS.iter().zip(errs) {
            rows.push(check_row("map_laws", i, name, *e, tol));
        }
    }

    let rel: Vec<_> = (0..spec.relativization_cases)
        .into_par_iter()
        .map(|i| relativization_case(&mut case_rng(seed, 3, i)))
        .collect::<scalefield::Result<_>>()?;
    for (i, r) in rel.iter().enumerate() {
        let mismatch = if r.exact { 0.0 } else { 1.0 };
        rows.push(check_row("relativization", i, "canonical_bits", mismatch, 0.0));
    }

    let wit: Vec<_> = (0..spec.witness_cases)
        .into_par_iter()
        .map(|i| witness_case(&mut case_rng(seed, 4, i)))
        .collect::<scalefield::Result<_>>()?;
    for (i, w) in wit.iter().enumerate() {
        rows.push(check_row("witness", i, "mul_ratio", w.ratio_err, tol));
        let rule = if w.conj_paths_differ == w.ratio_is_complex { 0.0 } else { 1.0 };
        rows.push(check_row("witness", i, "conj_rule", rule, 0.0));
    }
    Ok(Report::new("axioms", seed, &AXIOM_COLUMNS, rows, "error"))
}

fn scale_demo(cfg: &RunConfig) -> scalefield::Result<Report> {
    let lv = &cfg.levels;
    let tol = cfg.tolerances.identity;
    let s = Level::complex(complex(lv.s))?;
    let t = Level::complex(complex(lv.t))?;
    let a = ScaledValue::new(complex(lv.a), t)?;
    let b = ScaledValue::new(complex(lv.b), t)?;
    let q = t.ratio(&s);
    let ops = rel_ops(s, t)?;
    let (operate_first, scale_first) = scale_then_multiply_mismatch(s, t, &a, &b)?;
    let (conj_first, conj_after) = conjugate_then_scale_mismatch(s, t, &a)?;
    let label = w_map(s, t, BaseNumber::new(complex(lv.a)))?.label();

    let row = |name: &str, z: Complex64, err: f64, ok: bool| {
        vec![Cell::text(name), Cell::float(z.re), Cell::float(z.im), Cell::float(err), Cell::Bool(ok)]
    };
    let ratio = scale_first / operate_first;
    let ratio_err = rel_err(ratio, q, 0.0);
    let unit_err = rel_err(ops.unit(), q, 0.0);
    let conj_gap = (conj_first - conj_after).norm();
    let rows = vec![
        row("t_over_s", q, 0.0, true),
        row("unit", ops.unit(), unit_err, unit_err <= tol),
        row("product_then_rescale", operate_first, 0.0, true),
        row("rescale_then_product", scale_first, 0.0, true),
        row("mismatch_ratio", ratio, ratio_err, ratio_err <= tol),
        row("conjugate_then_rescale", conj_first, 0.0, true),
        row("rescale_then_conjugate", conj_after, 0.0, true),
        row("conjugation_gap", Complex64::new(conj_gap, 0.0), 0.0, (conj_gap != 0.0) == (q.im != 0.0)),
        row("w_label", label, 0.0, true),
    ];
    Ok(Report::new(
        "scale-demo",
        cfg.seed,
        &["quantity", "re", "im", "error", "pass"],
        rows,
        "error",
    ))
}

fn convergence(cfg: &RunConfig) -> scalefield::Result<Report> {
    let spec = &cfg.convergence;
    let tol = &cfg.tolerances;
    let mut cases = if spec.catalog { convergence_catalog() } else { Vec::new() };
    cases.extend(spec.cases.iter().cloned());
    let results: Vec<_> = cases
        .par_iter()
        .map(|c| convergence_study(c, &spec.steps))
        .collect::<scalefield::Result<_>>()?;

    let mut keyed: Vec<(String, usize, Vec<Cell>)> = Vec::new();
    let mut orders = Vec::new();
    for (case, r) in cases.iter().zip(&results) {
        let ok = (tol.order_min..=tol.order_max).contains(&r.order) && r.model_ratio() <= tol.model_factor;
        orders.push((case.name.clone(), r.order));
        for (k, row) in r.rows.iter().enumerate() {
            keyed.push((
                case.name.clone(),
                k,
                vec![
                    Cell::text(&case.name),
                    Cell::int(case.mu),
                    Cell::float(row.h),
                    Cell::float(row.discrete.re),
                    Cell::float(row.discrete.im),
                    Cell::float(row.continuum.re),
                    Cell::float(row.continuum.im),
                    Cell::float(row.abs_error),
                    Cell::float(r.order),
                    Cell::float(r.model_ratio()),
                    Cell::Bool(ok),
                ],
            ));
        }
    }
    keyed.sort_by(|a, b| (&a.0, a.1).cmp(&(&b.0, b.1)));
    orders.sort_by(|a, b| a.0.cmp(&b.0));
    let columns = [
        "case",
        "mu",
        "h",
        "discrete_re",
        "discrete_im",
        "continuum_re",
        "continuum_im",
        "abs_error",
        "fitted_order",
        "model_ratio",
        "pass",
    ];
    let rows = keyed.into_iter().map(|(_, _, r)| r).collect();
    Ok(Report::new("convergence", cfg.seed, &columns, rows, "abs_error").with_fitted_orders(orders))
}

fn curl_diagnostic(cfg: &RunConfig) -> scalefield::Result<Report> {
    let spec = &cfg.curl;
    let mut cases = if spec.catalog { curl_catalog() } else { Vec::new() };
    cases.extend(spec.cases.iter().cloned());
    let results: Vec<_> = cases
        .par_iter()
        .map(|c| curl_study(c, spec.size, spec.spacing))
        .collect::<scalefield::Result<_>>()?;

    let row = |case: &str, field: &str, curl: f64, bound: f64, expected: bool| {
        let integrable = curl <= bound;
        (
            (case.to_string(), field.to_string()),
            vec![
                Cell::text(case),
                Cell::text(field),
                Cell::float(curl),
                Cell::float(bound),
                Cell::Bool(integrable),
                Cell::Bool(expected),
                Cell::Bool(integrable == expected),
            ],
        )
    };
    let mut keyed = Vec::new();
    for (c, r) in cases.iter().zip(&results) {
        keyed.push(row(&c.name, "Gamma", r.max_curl_gamma, r.bound_gamma, true));
        keyed.push(row(&c.name, "Delta", r.max_curl_delta, r.bound_delta, true));
    }
    if spec.rotational {
        let (curl, bound) = rotational_curl(&curl_lattice(spec.size, spec.spacing)?, spec.spacing)?;
        keyed.push(row("rotational", "B", curl, bound, false));
    }
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    let columns = ["case", "field", "max_curl", "bound", "integrable", "expected_integrable", "pass"];
    let rows = keyed.into_iter().map(|(_, r)| r).collect();
    Ok(Report::new("curl-diagnostic", cfg.seed, &columns, rows, "max_curl"))
}

/// Largest curl of `B = (−y, x)` and the allowance a linear gradient field
/// would get (rounding floor only).
fn rotational_curl(lattice: &Lattice, h: f64) -> scalefield::Result<(f64, f64)> {
    let v = rotational_field(lattice);
    let mut worst: f64 = 0.0;
    for site in lattice.interior_sites() {
        worst = worst.max(scalefield::covariant_derivatives::curl_check(lattice, &v, site, 0, 1)?.abs());
    }
    let vmax = v.iter().flatten().fold(0.0_f64, |m, x| m.max(x.abs()));
    Ok((worst, 8.0 * f64::EPSILON * vmax / h))
}

/// Up to `n` interior sites, evenly strided.
fn pick_sites(lattice: &Lattice, n: usize) -> Vec<usize> {
    let all = lattice.interior_sites();
    if n == 0 || all.len() <= n {
        return all;
    }
    (0..n).map(|i| all[i * all.len() / n]).collect()
}

fn gauge_check(cfg: &RunConfig) -> scalefield::Result<Report> {
    let lattice = cfg.lattice.build()?;
    let maps: Vec<(String, Su2Map)> = match &cfg.gauge.maps {
        Some(m) => m.iter().map(|m| (m.name.clone(), m.map.clone())).collect(),
        None => Su2Map::catalog(lattice.dim()),
    };
    let sites = pick_sites(&lattice, cfg.gauge.sites);
    let tol = cfg.tolerances.covariance;
    let per_seed: Vec<Vec<((usize, usize, usize, usize), Vec<Cell>)>> = (0..cfg.gauge.seeds)
        .into_par_iter()
        .map(|j| {
            let mut setup = random_gauge_setup(&mut case_rng(cfg.seed, 5, j), &lattice)?;
            if let Some(c) = cfg.couplings {
                setup.gauge = setup.gauge.with_couplings(c)?;
            }
            let mut out = Vec::new();
            for (m, (name, map)) in maps.iter().enumerate() {
                for &site in &sites {
                    for mu in 0..lattice.dim() {
                        let r = covariance_residual(
                            &setup.psi,
                            &setup.scaling,
                            &setup.connection,
                            &setup.gauge,
                            map,
                            site,
                            mu,
                        )?;
                        out.push((
                            (m, j, site, mu),
                            vec![
                                Cell::text(name),
                                Cell::int(j),
                                Cell::int(site),
                                Cell::int(mu),
                                Cell::float(r),
                                Cell::Bool(r <= tol),
                            ],
                        ));
                    }
                }
            }
            Ok(out)
        })
        .collect::<scalefield::Result<_>>()?;
    let mut keyed: Vec<_> = per_seed.into_iter().flatten().collect();
    keyed.sort_by_key(|(k, _)| *k);
    let rows = keyed.into_iter().map(|(_, r)| r).collect();
    Ok(Report::new(
        "gauge-check",
        cfg.seed,
        &["map", "seed", "site", "mu", "residual", "pass"],
        rows,
        "residual",
    ))
}

fn reduce_check(cfg: &RunConfig) -> scalefield::Result<Report> {
    let lattice = cfg.lattice.build()?;
    let interior = lattice.interior_sites();
    let tol = cfg.tolerances.reduction;
    let rows: Vec<Vec<Cell>> = (0..cfg.reduce.cases)
        .into_par_iter()
        .map(|j| {
            let mut rng = case_rng(cfg.seed, 6, j);
            let mut setup = random_reduction_setup(&mut rng, &lattice)?;
            if let Some(c) = cfg.couplings {
                setup.gauge = setup.gauge.with_couplings(c)?;
            }
            let site = interior[rng.gen_range(0..interior.len())];
            let mu = rng.gen_range(0..lattice.dim());
            let gap = reduce_to_standard(&setup.psi, &setup.scaling, &setup.connection, &setup.gauge, site, mu)?;
            Ok(vec![
                Cell::int(j),
                Cell::int(site),
                Cell::int(mu),
                Cell::Bool(setup.gauge.has_e()),
                Cell::float(gap),
                Cell::Bool(gap <= tol),
            ])
        })
        .collect::<scalefield::Result<_>>()?;
    Ok(Report::new(
        "reduce-check",
        cfg.seed,
        &["case", "site", "mu", "with_e", "gap", "pass"],
        rows,
        "gap",
    ))
}
