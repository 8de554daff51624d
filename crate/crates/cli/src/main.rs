//! `sqgraph`: exact searches, constructions, closed forms and check suites
//! for `(s,q)`-multigraphs.
//!
//! Exit codes: 0 on success, 2 on a usage error, 3 when a budget cut a
//! search or count short, 4 when a verify run has hard failures.

mod args;
mod emit;

use std::fs::{self, File};
use std::io::{self, BufWriter};
use std::path::Path;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::Parser;
use serde_json::{json, Value};

use args::{Cli, Command, Format, Instance, List, Shared, VerifyArgs};
use emit::{write_records, Record};
use sqgraph_core::formulas::{
    check_ar_condition, min_r, nonjump_value, product_density, product_density_limit, sigma_asymptotic_coeff, theorem_value, x_star,
};
use sqgraph_core::multigraph::max_s_set_sum;
use sqgraph_core::search::{cached_run, ResultCache};
use sqgraph_core::verify::{run_suites, Suite, SuiteReport, VerifyConfig};
use sqgraph_core::{
    build_iterated, pi_exact, sigma_exact, Error, IteratedSpec, Mode, Multigraph, Params, PartSizes, SearchConfig,
};

const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_CHECKS: u8 = 4;

/// Significant digits of printed densities.
const DENSITY_DIGITS: u32 = 12;
/// Significant digits of printed closed forms.
const FORMULA_DIGITS: u32 = 20;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(match e.downcast_ref::<Error>() {
                Some(Error::InvalidInput(_)) => EXIT_USAGE,
                Some(Error::Budget { .. }) => EXIT_BUDGET,
                _ => 1,
            })
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    let sh = &cli.shared;
    match cli.command {
        Command::Exsum(inst) => search(Mode::Sum, &inst, sh),
        Command::Expi(inst) => search(Mode::Product, &inst, sh),
        Command::Count(inst) => search(Mode::Count, &inst, sh),
        Command::Construct { a, r, d, n } => construct(Params::new(a, r, d)?, n, sh),
        Command::Iterate { a, levels, sizes, s } => iterate(IteratedSpec { a, levels }, sizes, &s, sh),
        Command::Verify(v) => verify(&v, sh),
        Command::Formulas { a, r, d } => formulas(&a.0, &r.0, &d.0, sh),
    }
}

fn search_config(sh: &Shared) -> SearchConfig {
    SearchConfig { threads: sh.threads as usize, node_budget: sh.budget, ..Default::default() }
}

fn object(v: Value) -> Record {
    match v {
        Value::Object(m) => m,
        _ => unreachable!("records are objects"),
    }
}

fn write_witness(path: &Path, g: &Multigraph) -> Result<String> {
    fs::write(path, g.to_json() + "\n").with_context(|| format!("cannot write {}", path.display()))?;
    Ok(path.display().to_string())
}

fn search(mode: Mode, inst: &Instance, sh: &Shared) -> Result<u8> {
    let cache = sh.cache.as_ref().map(ResultCache::new);
    let (out, cached) = cached_run(mode, inst.n, inst.s, inst.q, &search_config(sh), cache.as_ref())?;
    let density = out.density(sh.precision)?.map(|d| d.to_significant(DENSITY_DIGITS));
    let witness = match (&sh.out, &out.witness) {
        (Some(path), Some(g)) => Some(write_witness(path, g)?),
        _ => None,
    };
    let rec = object(json!({
        "mode": mode.to_string(),
        "n": out.n,
        "s": out.s,
        "q": out.q,
        "value": out.value.to_string(),
        "density_approx": density,
        "optimal": out.optimal,
        "cached": cached,
        "witness": witness,
        "nodes": out.stats.nodes,
        "bound_prunes": out.stats.bound_prunes,
        "symmetry_prunes": out.stats.symmetry_prunes,
        "wall_ms": out.stats.wall_ms,
    }));
    write_records(&[rec], sh.format, None)?;
    if !out.optimal {
        eprintln!("node budget exhausted: value is a lower bound only");
        return Ok(EXIT_BUDGET);
    }
    Ok(0)
}

/// Writes into `--out` when given, otherwise inlines the witness.
fn witness_field(g: &Multigraph, sh: &Shared, name: &str) -> Result<Value> {
    match &sh.out {
        Some(dir) => {
            fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
            Ok(Value::String(write_witness(&dir.join(name), g)?))
        }
        None => Ok(serde_json::to_value(g)?),
    }
}

fn construct(p: Params, n: usize, sh: &Shared) -> Result<u8> {
    let sum = sigma_exact(p, n)?;
    let prod = pi_exact(p, n)?;
    let stem = format!("construct_a{}_r{}_d{}_n{n}", p.a, p.r, p.d);
    let sum_w = witness_field(&sum.witness(p)?, sh, &format!("{stem}_sum.json"))?;
    let prod_w = witness_field(&prod.witness(p)?, sh, &format!("{stem}_product.json"))?;
    let density = product_density(&prod.value, n, sh.precision)?.map(|d| d.to_significant(DENSITY_DIGITS));
    let share = if p.r >= 2 {
        Some(x_star(p, sh.precision)?.mul_int(n as i64).to_significant(6))
    } else {
        None
    };
    let rec = object(json!({
        "a": p.a,
        "r": p.r,
        "d": p.d,
        "n": n,
        "sum_value": sum.value.to_string(),
        "sum_sizes": sum.argmax,
        "product_value": prod.value.to_string(),
        "product_sizes": prod.argmax,
        "product_density_approx": density,
        "v0": prod.argmax.v0(),
        "x_star_times_n_approx": share,
        "sum_witness": sum_w,
        "product_witness": prod_w,
    }));
    write_records(&[rec], sh.format, None)?;
    Ok(0)
}

fn iterate(spec: IteratedSpec, sizes: Vec<Vec<usize>>, s_list: &[usize], sh: &Shared) -> Result<u8> {
    let sizes: Vec<PartSizes> = sizes.into_iter().map(PartSizes::new).collect();
    let g = build_iterated(&spec, &sizes)?;
    let levels: Vec<String> = spec.levels.iter().map(|(r, d)| format!("{r}:{d}")).collect();
    let mut rec = object(json!({
        "a": spec.a,
        "levels": levels.join(";"),
        "n": g.n(),
        "edge_sum": g.total(),
        "product": g.product().to_string(),
    }));
    for &s in s_list {
        rec.insert(format!("max_sum_s{s}"), json!(max_s_set_sum(&g, s)?.0));
    }
    let name = format!("iterate_a{}_{}.json", spec.a, levels.join("_").replace(':', "-"));
    rec.insert("witness".into(), witness_field(&g, sh, &name)?);
    write_records(&[rec], sh.format, None)?;
    Ok(0)
}

fn max_or_zero(v: &[u32]) -> u32 {
    v.iter().copied().max().unwrap_or(0)
}

fn points(a: &[u32], r: &[u32], d: &[u32]) -> Vec<Params> {
    let mut out = Vec::new();
    for &a in a {
        for &r in r {
            for &d in d {
                if let Ok(p) = Params::new(a, r, d) {
                    out.push(p);
                }
            }
        }
    }
    out
}

fn verify_config(v: &VerifyArgs, sh: &Shared) -> VerifyConfig {
    let mut cfg = VerifyConfig::default();
    cfg.options.digits = sh.precision;
    cfg.options.abort_on_fail = !v.keep_going;
    cfg.conjecture.search = search_config(sh);
    cfg.counting.budget = sh.budget;
    if v.extended {
        cfg.conjecture.n_hi = 7;
    }
    if let Some((lo, hi)) = v.n {
        (cfg.conjecture.n_lo, cfg.conjecture.n_hi) = (lo, hi);
        (cfg.counting.n_lo, cfg.counting.n_hi) = (lo, hi);
        cfg.transformations.n = hi;
    }
    cfg.conjecture.s = v.s;
    if let Some(seed) = v.seed {
        cfg.transformations.seed = seed;
    }
    if let Some(t) = v.trials {
        cfg.transformations.trials = t;
    }
    if v.a.is_some() || v.r.is_some() || v.d.is_some() {
        let pick = |x: &Option<List>, dflt: &[u32]| x.as_ref().map_or_else(|| dflt.to_vec(), |l| l.0.clone());
        cfg.conjecture.points = points(&pick(&v.a, &[2, 3]), &pick(&v.r, &[2, 3]), &pick(&v.d, &[1]));
        cfg.transformations.points = points(&pick(&v.a, &[2, 3]), &pick(&v.r, &[2]), &pick(&v.d, &[1, 2]));
        let (ca, cr) = (pick(&v.a, &[2]), pick(&v.r, &[2]));
        cfg.counting.points = ca.iter().flat_map(|&a| cr.iter().map(move |&r| (a, r))).collect();
    }
    if let Some(List(a)) = &v.a {
        let m = max_or_zero(a);
        cfg.identities.a_max = m;
        cfg.identities.rec_a_max = m;
        cfg.closed_forms.a_max = m;
        let c = &mut cfg.conditions;
        (c.r3_a_max, c.cubic_a_max, c.ar_max, c.large_a_max) = (m, m, m, m);
    }
    if let Some(List(r)) = &v.r {
        let m = max_or_zero(r);
        cfg.identities.r_max = m;
        cfg.identities.rec_r_max = m;
        cfg.closed_forms.r_max = m;
    }
    if let Some(List(d)) = &v.d {
        let m = max_or_zero(d);
        cfg.identities.rec_d_max = m;
        (cfg.conditions.cubic_d_max, cfg.conditions.large_d_max) = (m, m);
    }
    cfg
}

fn write_report(rep: &SuiteReport, format: Format, out: Option<&Path>) -> Result<()> {
    let write = |w: &mut dyn io::Write| -> Result<()> {
        match format {
            Format::Jsonl => rep.write_jsonl(w)?,
            Format::Csv => rep.write_csv(w)?,
        }
        Ok(())
    };
    match out {
        Some(path) => {
            let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
            write(&mut BufWriter::new(file))
        }
        None => write(&mut io::stdout().lock()),
    }
}

fn verify(v: &VerifyArgs, sh: &Shared) -> Result<u8> {
    let suites = if v.suite == "all" { Suite::ALL.to_vec() } else { vec![v.suite.parse::<Suite>()?] };
    let rep = run_suites(&suites, &verify_config(v, sh))?;
    write_report(&rep, sh.format, sh.out.as_deref())?;
    let failures = rep.hard_failures();
    let aborted: Vec<String> = rep.aborted.iter().map(|s| s.to_string()).collect();
    eprintln!(
        "{} rows, {} hard failures, {} reported-only, {} inconclusive{}",
        rep.rows.len(),
        failures,
        rep.count(sqgraph_core::verify::Status::Reported),
        rep.count(sqgraph_core::verify::Status::Inconclusive),
        if aborted.is_empty() { String::new() } else { format!(", aborted: {}", aborted.join(",")) }
    );
    Ok(if failures > 0 { EXIT_CHECKS } else { 0 })
}

fn formulas(a: &[u32], r: &[u32], d: &[u32], sh: &Shared) -> Result<u8> {
    let digits = sh.precision;
    let mut records = Vec::new();
    for p in points(a, r, d) {
        let (x, limit) = if p.r >= 2 {
            (
                Some(x_star(p, digits)?.to_significant(FORMULA_DIGITS)),
                Some(product_density_limit(p, digits)?.to_significant(FORMULA_DIGITS)),
            )
        } else {
            (None, None)
        };
        let theorem = if p.d == 1 && p.r >= 2 {
            Some(theorem_value(p.a, p.r, digits)?.to_significant(FORMULA_DIGITS))
        } else {
            None
        };
        let least_r = if p.d >= 1 { Some(min_r(p.a, p.d)?) } else { None };
        records.push(object(json!({
            "a": p.a,
            "r": p.r,
            "d": p.d,
            "s_base": p.s_base(),
            "sigma_coeff": sigma_asymptotic_coeff(p)?.to_string(),
            "x_star": x,
            "product_density_limit": limit,
            "theorem_value": theorem,
            "nonjump_value": nonjump_value(p.a, p.r, digits)?.to_significant(FORMULA_DIGITS),
            "min_r": least_r,
            "ar_condition": check_ar_condition(p.a, p.r, p.d)?,
        })));
    }
    write_records(&records, sh.format, sh.out.as_deref())?;
    Ok(0)
}
