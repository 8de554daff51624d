use num_bigint::{BigInt, BigUint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt::Write as _;

use super::{Flow, Recorder, Status, Suite, SuiteReport, VerifyOptions};
use crate::combinat::{binomial, choose2};
use crate::constructions::{pi_exact, sigma_exact};
use crate::error::Result;
use crate::formulas::{
    check_ar_condition, check_r_condition, fk_ex_sigma, min_r, product_density, product_density_limit, theorem_value,
    turan_number, x_star_recurrence_residual, BigReal, Rational,
};
use crate::multigraph::{are_clones, clone_saturate, in_g_family, in_h_family, raise_min_weights, Multigraph};
use crate::params::Params;
use crate::search::{count_family, ex_pi_search, SearchConfig, MAX_SEARCH_N};
use crate::Error;

fn tiny(digits: u32, exp: u32) -> BigReal {
    BigReal::from_ratio(1, BigInt::from(10u32).pow(exp), digits).expect("nonzero")
}

fn density(value: &BigUint, n: usize, digits: u32) -> Result<BigReal> {
    Ok(product_density(value, n, digits)?.expect("n >= 2"))
}

/// Product-extremal search against the construction.
#[derive(Clone, Debug)]
pub struct ConjectureGrid {
    pub points: Vec<Params>,
    /// Defaults to `(r-1)(d+1)+2` per point.
    pub s: Option<usize>,
    pub n_lo: usize,
    pub n_hi: usize,
    /// Construction seeding is always switched off so dominance is not
    /// true by construction.
    pub search: SearchConfig,
}

impl Default for ConjectureGrid {
    fn default() -> Self {
        let points = [(2, 2), (2, 3), (3, 2), (3, 3)].map(|(a, r)| Params { a, r, d: 1 }).to_vec();
        ConjectureGrid { points, s: None, n_lo: 4, n_hi: 6, search: SearchConfig::default() }
    }
}

pub fn verify_conjecture(grid: &ConjectureGrid, opts: &VerifyOptions) -> Result<SuiteReport> {
    let digits = opts.digits;
    let search = SearchConfig { seed_constructions: false, ..grid.search.clone() };
    let mut rec = Recorder::new(Suite::Conjecture, opts);
    let flow = (|| -> Flow {
        for &p in &grid.points {
            p.validate()?;
            let s = grid.s.unwrap_or_else(|| p.s_base());
            let q = sigma_exact(p, s)?.value;
            let limit = if p.r >= 2 { Some(product_density_limit(p, digits)?) } else { None };
            let limit_text = limit.as_ref().map_or_else(|| "n/a".to_string(), |l| l.to_significant(12));
            let mut trend: Vec<(BigReal, bool)> = Vec::new();
            for n in grid.n_lo..=grid.n_hi {
                let pt = format!("{p},s={s},n={n}");
                if n < s.max(2) || n > MAX_SEARCH_N {
                    let why = format!("search needs s <= n <= {MAX_SEARCH_N}");
                    rec.record("conjecture_dominance", &pt, Status::Skipped, "", "", why)?;
                    continue;
                }
                let cons = pi_exact(p, n)?.value;
                let out = ex_pi_search(n, s, q, &search)?;
                let dominant = out.value >= cons;
                if dominant || out.optimal {
                    let note = if out.optimal { "" } else { "node budget exhausted; left is a lower bound" };
                    rec.hard("conjecture_dominance", &pt, dominant, &out.value, &cons, note)?;
                } else {
                    let note = "node budget exhausted below the construction";
                    rec.record("conjecture_dominance", &pt, Status::Inconclusive, &out.value, &cons, note)?;
                }
                let dens = density(&out.value, n, digits)?;
                if out.optimal {
                    let equal = out.value == cons;
                    rec.reported("conjecture_equality", &pt, &out.value, &cons, format!("equal: {equal}"))?;
                    trend.push((dens.clone(), equal));
                } else {
                    let note = "node budget exhausted";
                    rec.record("conjecture_equality", &pt, Status::Inconclusive, &out.value, &cons, note)?;
                }
                let cdens = density(&cons, n, digits)?.to_significant(12);
                let note = format!("approximate; construction density {cdens}; right is the n -> infinity limit");
                rec.reported("conjecture_density", &pt, dens.to_significant(12), &limit_text, note)?;
            }
            if !trend.is_empty() {
                let nondecreasing = trend.windows(2).all(|w| w[0].0 <= w[1].0);
                let eps = tiny(digits, 9);
                let bounded = limit.as_ref().is_none_or(|l| {
                    let cap = l.add(&eps);
                    trend.iter().filter(|(_, eq)| *eq).all(|(x, _)| *x <= cap)
                });
                let series: Vec<String> = trend.iter().map(|(x, _)| x.to_significant(12)).collect();
                let note = format!("nondecreasing: {nondecreasing}; within limit where equal: {bounded}");
                rec.reported("conjecture_density_trend", format!("{p},s={s}"), series.join(";"), &limit_text, note)?;
            }
        }
        Ok(())
    })();
    rec.finish(flow)
}

/// Exact identities and thresholds for the sum-optimal compositions.
#[derive(Clone, Debug)]
pub struct IdentityGrid {
    /// Points `1 <= a <= a_max`, `2 <= r <= r_max`, `0 <= d < a`.
    pub a_max: u32,
    pub r_max: u32,
    /// How far above `(r-1)(d+1)+2` the large-`V_0` threshold is checked.
    pub threshold_extra: usize,
    /// Recurrence grid `a <= rec_a_max`, `2 <= r <= rec_r_max`,
    /// `d <= min(a-1, rec_d_max)`.
    pub rec_a_max: u32,
    pub rec_r_max: u32,
    pub rec_d_max: u32,
}

impl Default for IdentityGrid {
    fn default() -> Self {
        IdentityGrid { a_max: 6, r_max: 5, threshold_extra: 3, rec_a_max: 20, rec_r_max: 10, rec_d_max: 5 }
    }
}

pub fn verify_identities(grid: &IdentityGrid, opts: &VerifyOptions) -> Result<SuiteReport> {
    let mut rec = Recorder::new(Suite::Identities, opts);
    let flow = (|| -> Flow {
        for a in 1..=grid.a_max {
            for r in 2..=grid.r_max {
                for d in 0..a {
                    identities_at(&mut rec, Params { a, r, d }, grid.threshold_extra)?;
                }
            }
        }
        let bound = tiny(opts.digits, 12);
        for a in 1..=grid.rec_a_max {
            for r in 2..=grid.rec_r_max {
                for d in 0..=grid.rec_d_max.min(a - 1) {
                    let p = Params { a, r, d };
                    let res = x_star_recurrence_residual(p, opts.digits)?;
                    let ok = res < bound;
                    rec.hard("x_star_recurrence", p, ok, format!("{:.3e}", res.to_f64()), "1e-12", "")?;
                }
            }
        }
        Ok(())
    })();
    rec.finish(flow)
}

fn identities_at(rec: &mut Recorder, p: Params, extra: usize) -> Flow {
    let (a, r, d) = (u64::from(p.a), u64::from(p.r), u64::from(p.d));
    let base = p.s_base();
    let opt: Vec<_> = (0..=base + extra).map(|s| sigma_exact(p, s)).collect::<Result<_>>()?;
    for sp in 2..base {
        let spu = sp as u64;
        let diff = opt[sp + 1].value - opt[sp].value;
        let formula = spu * (a + 1) - (spu - 1) / (r - 1);
        let ok = diff == formula && diff + d + 1 >= spu * (a + 1);
        let note = format!("lower bound {}", spu * (a + 1) - d - 1);
        rec.hard("sigma_difference", format!("{p},s'={sp}"), ok, diff, formula, note)?;
    }
    for i in 1..=p.d {
        let s = (p.r as usize - 1) * (p.d - i + 2) as usize + 2;
        let lhs = opt[s].value;
        let rhs = sigma_exact(Params { d: p.d - i, ..p }, s)?.value;
        rec.hard("sigma_strict_drop", format!("{p},i={i},s={s}"), lhs < rhs, lhs, rhs, "")?;
    }
    let v0s = |s: usize| -> String {
        let v: Vec<String> = opt[s].all_argmax.iter().map(|c| c.v0().to_string()).collect();
        v.join(";")
    };
    for (s, o) in opt.iter().enumerate().take(base + extra + 1).skip(base) {
        let ok = o.all_argmax.iter().any(|c| c.v0() >= 2);
        rec.hard("threshold_large_v0", format!("{p},s={s}"), ok, v0s(s), ">= 2", "left lists |V_0| over all optima")?;
    }
    for (s, o) in opt.iter().enumerate().take(base + 1).skip(2) {
        let ok = o.all_argmax.iter().any(|c| c.v0() <= 1);
        rec.hard("threshold_small_v0", format!("{p},s={s}"), ok, v0s(s), "<= 1", "left lists |V_0| over all optima")?;
    }
    Ok(())
}

/// Integer power inequalities behind the stability lemmas.
#[derive(Clone, Debug)]
pub struct ConditionGrid {
    pub r3_a_max: u32,
    pub cubic_d_max: u32,
    pub cubic_a_max: u32,
    /// `a, r` in `2..=ar_max` for `d = 1`.
    pub ar_max: u32,
    pub large_d_max: u32,
    pub large_a_max: u32,
    /// `r` runs over `d(d+1) ..= d(d+1) + large_r_span`.
    pub large_r_span: u32,
}

impl Default for ConditionGrid {
    fn default() -> Self {
        ConditionGrid {
            r3_a_max: 200,
            cubic_d_max: 6,
            cubic_a_max: 50,
            ar_max: 100,
            large_d_max: 5,
            large_a_max: 30,
            large_r_span: 20,
        }
    }
}

pub fn verify_conditions(grid: &ConditionGrid, opts: &VerifyOptions) -> Result<SuiteReport> {
    let mut rec = Recorder::new(Suite::Conditions, opts);
    let flow = (|| -> Flow {
        for a in 2..=grid.r3_a_max {
            let m = min_r(a, 1)?;
            rec.hard("r_condition_three", format!("a={a},d=1"), m <= 3, m, 3, "left is the least R")?;
        }
        for d in 1..=grid.cubic_d_max {
            let big_r = d * (1 + d + d * d);
            for a in d + 1..=grid.cubic_a_max {
                let m = min_r(a, d)?;
                let at_r = check_r_condition(a, d, big_r)?;
                let note = format!("condition at R = {big_r}: {at_r}; left is the least R");
                rec.hard("r_condition_cubic", format!("a={a},d={d}"), m <= big_r && at_r, m, big_r, note)?;
            }
        }
        for a in 2..=grid.ar_max {
            for r in 2..=grid.ar_max {
                let ok = check_ar_condition(a, r, 1)?;
                rec.hard("ar_condition_d1", format!("a={a},r={r},d=1"), ok, ok, true, "")?;
            }
        }
        for d in 1..=grid.large_d_max {
            let lo = (d * (d + 1)).max(2);
            for a in d + 1..=grid.large_a_max {
                for r in lo..=lo + grid.large_r_span {
                    let ok = check_ar_condition(a, r, d)?;
                    rec.hard("ar_condition_large_r", format!("a={a},r={r},d={d}"), ok, ok, true, "")?;
                }
            }
        }
        Ok(())
    })();
    rec.finish(flow)
}

/// Exact family counts at `s = 2r`.
#[derive(Clone, Debug)]
pub struct CountingGrid {
    /// `(a, r)` pairs, both at least 2.
    pub points: Vec<(u32, u32)>,
    pub n_lo: usize,
    pub n_hi: usize,
    /// Node budget per count.
    pub budget: u64,
}

impl Default for CountingGrid {
    fn default() -> Self {
        CountingGrid { points: vec![(2, 2)], n_lo: 4, n_hi: 5, budget: crate::search::DEFAULT_NODE_BUDGET }
    }
}

/// `(a-1) C(2r,2) + ex(2r, K_{r+1}) - 1`, the shifted bound whose family is
/// counted.
pub fn counting_q(a: u32, r: u32) -> Result<u64> {
    let s = 2 * u64::from(r);
    Ok(u64::from(a - 1) * binomial(s, 2) + turan_number(s, u64::from(r) + 1)? - 1)
}

pub fn verify_counting(grid: &CountingGrid, opts: &VerifyOptions) -> Result<SuiteReport> {
    let digits = opts.digits;
    let mut rec = Recorder::new(Suite::Counting, opts);
    let flow = (|| -> Flow {
        for &(a, r) in &grid.points {
            if a < 2 || r < 2 {
                return Err(crate::error::invalid("counting needs a, r >= 2").into());
            }
            let s = 2 * r as usize;
            let q = counting_q(a, r)?;
            let limit = theorem_value(a, r, digits)?;
            let log_limit = limit.ln()?.to_significant(12);
            let mut series: Vec<BigReal> = Vec::new();
            for n in grid.n_lo..=grid.n_hi {
                let pt = format!("a={a},r={r},s={s},q={q},n={n}");
                if n < s || n > MAX_SEARCH_N {
                    let why = format!("count needs s <= n <= {MAX_SEARCH_N}");
                    rec.record("count_sanity", &pt, Status::Skipped, "", "", why)?;
                    continue;
                }
                let count = match count_family(n, s, q, grid.budget) {
                    Ok(out) => out.value,
                    Err(Error::Budget { .. }) => {
                        rec.record("count_sanity", &pt, Status::Inconclusive, "", "", "node budget exhausted")?;
                        continue;
                    }
                    Err(e) => return Err(e.into()),
                };
                rec.hard("count_sanity", &pt, count >= BigUint::from(1u32), &count, ">= 1", "")?;
                let log_density = BigReal::from_int(count.clone(), digits).ln()?.div_int(choose2(n) as i64);
                let note = format!(
                    "approximate; |F|^(1/C(n,2)) = {}, limit {}; left is log|F|/C(n,2)",
                    log_density.exp().to_significant(12),
                    limit.to_significant(12)
                );
                rec.reported("count_density", &pt, log_density.to_significant(12), &log_limit, note)?;
                series.push(log_density);
            }
            if !series.is_empty() {
                let nondecreasing = series.windows(2).all(|w| w[0] <= w[1]);
                let text: Vec<String> = series.iter().map(|x| x.to_significant(12)).collect();
                let pt = format!("a={a},r={r},s={s},q={q}");
                rec.reported("count_density_trend", pt, text.join(";"), &log_limit, format!("nondecreasing: {nondecreasing}"))?;
            }
        }
        Ok(())
    })();
    rec.finish(flow)
}

/// Randomised checks of raising and cloning.
#[derive(Clone, Debug)]
pub struct TransformGrid {
    pub points: Vec<Params>,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    /// Rejection-sampling attempts per point.
    pub max_attempts: u64,
}

impl Default for TransformGrid {
    fn default() -> Self {
        let points = [(2, 2, 1), (3, 2, 1), (3, 2, 2)].map(|(a, r, d)| Params { a, r, d }).to_vec();
        TransformGrid { points, n: 6, trials: 1000, seed: 20_240_601, max_attempts: 20_000_000 }
    }
}

fn clone_pairs(g: &Multigraph) -> Result<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    for (i, j, _) in g.pairs() {
        if are_clones(g, i, j)? {
            out.push((i, j));
        }
    }
    Ok(out)
}

/// Passing count and the first counterexample for one aggregated check.
#[derive(Default)]
struct Tally {
    evaluated: usize,
    passed: usize,
    first_failure: Option<String>,
}

impl Tally {
    fn add(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.evaluated += 1;
        if ok {
            self.passed += 1;
        } else if self.first_failure.is_none() {
            self.first_failure = Some(witness());
        }
    }

    fn emit(&self, rec: &mut Recorder, check: &str, pt: &str) -> Flow {
        let ok = self.passed == self.evaluated;
        let note = self.first_failure.as_ref().map_or_else(String::new, |w| format!("first failure: {w}"));
        rec.hard(check, pt, ok, format!("{}/{}", self.passed, self.evaluated), self.evaluated, note)
    }
}

/// Uniform weights in `0..=a+1` filtered by `G`-membership.
fn sample_members(p: Params, n: usize, s: usize, want: usize, attempts: u64, rng: &mut ChaCha8Rng) -> Result<Vec<Multigraph>> {
    let mut out = Vec::with_capacity(want);
    for _ in 0..attempts {
        if out.len() == want {
            break;
        }
        let g = Multigraph::from_fn(n, |_, _| rng.gen_range(0..=p.a + 1))?;
        if in_g_family(&g, p, s)? {
            out.push(g);
        }
    }
    Ok(out)
}

pub fn verify_transformations(grid: &TransformGrid, opts: &VerifyOptions) -> Result<SuiteReport> {
    let mut rec = Recorder::new(Suite::Transformations, opts);
    let flow = (|| -> Flow {
        for (idx, &p) in grid.points.iter().enumerate() {
            p.validate()?;
            let s = p.s_base();
            let n = grid.n;
            let pt = format!("{p},s={s},n={n}");
            let mut rng = ChaCha8Rng::seed_from_u64(grid.seed ^ (idx as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let members = sample_members(p, n, s, grid.trials, grid.max_attempts, &mut rng)?;
            let note = format!("seed {}; weights uniform in 0..={}", grid.seed, p.a + 1);
            rec.reported("transform_sampler", &pt, members.len(), grid.trials, note)?;

            let (mut product, mut in_h, mut clones) = (Tally::default(), Tally::default(), Tally::default());
            for g in &members {
                let outcome = raise_min_weights(g, p, s).and_then(|h1| Ok((clone_saturate(&h1, p, s)?, h1)));
                let (h2, h1) = match outcome {
                    Ok(x) => x,
                    Err(e) => {
                        in_h.add(false, || format!("{} ({e})", g.to_json()));
                        continue;
                    }
                };
                let (p0, p1, p2) = (g.product(), h1.product(), h2.product());
                product.add(p0 <= p1 && p1 <= p2, || format!("{} ({p0} -> {p1} -> {p2})", g.to_json()));
                in_h.add(in_h_family(&h2, p, s)?, || g.to_json());
                let mut lost = String::new();
                for (u, v) in clone_pairs(g)? {
                    if !are_clones(&h2, u, v)? {
                        let _ = write!(lost, "({u},{v})");
                    }
                }
                clones.add(lost.is_empty(), || format!("{} loses {lost}", g.to_json()));
            }
            product.emit(&mut rec, "transform_product", &pt)?;
            in_h.emit(&mut rec, "transform_lands_in_h", &pt)?;
            clones.emit(&mut rec, "transform_clones_preserved", &pt)?;

            let constant = Multigraph::constant(n, p.a)?;
            let raised = raise_min_weights(&constant, p, s)?;
            let cloned = clone_saturate(&raised, p, s)?;
            let fixed = raised == constant && cloned == constant;
            rec.hard("transform_fixed_point", &pt, fixed, fixed, true, "")?;

            let mut planted = constant.clone();
            planted.set_weight(0, 1, p.low() - 1);
            let raised = raise_min_weights(&planted, p, s)?;
            let (before, after) = (planted.product(), raised.product());
            rec.hard("transform_planted_edge", &pt, before < after, &before, &after, "left before, right after raising")?;
        }
        Ok(())
    })();
    rec.finish(flow)
}

/// Floor-sum densities and the Turán-type closed forms.
#[derive(Clone, Debug)]
pub struct ClosedFormGrid {
    pub a_max: u32,
    pub r_max: u32,
    pub turan_n_max: usize,
}

impl Default for ClosedFormGrid {
    fn default() -> Self {
        ClosedFormGrid { a_max: 10, r_max: 5, turan_n_max: 12 }
    }
}

pub fn verify_closed_forms(grid: &ClosedFormGrid, opts: &VerifyOptions) -> Result<SuiteReport> {
    let mut rec = Recorder::new(Suite::ClosedForms, opts);
    let flow = (|| -> Flow {
        let pinned = fk_ex_sigma(4, 15)?;
        let want = Rational::new(BigInt::from(7), BigInt::from(3));
        rec.hard("fk_pinned", "s=4,q=15", pinned == want, &pinned, &want, "")?;
        for a in 2..=grid.a_max {
            for r in 1..=grid.r_max {
                let p = Params { a, r, d: 1 };
                let s = 2 * r as usize;
                let sigma = sigma_exact(p, s)?.value;
                let got = fk_ex_sigma(s as u64, sigma)?;
                let want = Rational::from_integer(BigInt::from(a))
                    + Rational::new(BigInt::from(2 * i64::from(r) - 3), BigInt::from(2 * r - 1));
                rec.hard("fk_turan_family", format!("{p},s={s},q={sigma}"), got == want, &got, &want, "")?;
                let formula = u64::from(a) * binomial(s as u64, 2) + turan_number(s as u64, u64::from(r) + 1)? - 1;
                rec.hard("sigma_turan_d1", format!("{p},s={s}"), sigma == formula, sigma, formula, "")?;
            }
        }
        for a in 1..=grid.a_max {
            for r in 1..=grid.r_max {
                let p = Params { a, r, d: 0 };
                for n in 0..=grid.turan_n_max {
                    let sigma = sigma_exact(p, n)?.value;
                    let formula = u64::from(a) * binomial(n as u64, 2) + turan_number(n as u64, u64::from(r) + 1)?;
                    rec.hard("sigma_turan_d0", format!("{p},n={n}"), sigma == formula, sigma, formula, "")?;
                }
            }
        }
        Ok(())
    })();
    rec.finish(flow)
}
