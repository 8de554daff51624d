//! The generalised Turán multigraphs `T_{r,d}(a,n)` and their optimal part
//! sizes.
//!
//! Vertices of `V_0` come first, then `V_1`, and so on. Inside `V_0` every
//! pair has weight `a - d`, inside the other parts `a`, and across parts
//! `a + 1`.

use num_bigint::BigUint;
use num_traits::{One, Pow};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::combinat::{balanced_split, choose2};
use crate::error::{invalid, Result};
use crate::multigraph::{Multigraph, MAX_VERTICES};
use crate::params::Params;

/// Sizes `(v_0, v_1, ..., v_{r-1})`; zero parts are allowed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PartSizes(Vec<usize>);

impl PartSizes {
    pub fn new(sizes: Vec<usize>) -> Self {
        PartSizes(sizes)
    }

    pub fn sizes(&self) -> &[usize] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn r(&self) -> usize {
        self.0.len()
    }

    pub fn v0(&self) -> usize {
        self.0.first().copied().unwrap_or(0)
    }

    fn check(&self, params: Params) -> Result<()> {
        params.validate()?;
        if self.r() != params.r as usize {
            return Err(invalid(format!("{} part sizes given for r = {}", self.r(), params.r)));
        }
        Ok(())
    }

    /// Pair counts `(inside V_0, inside the other parts, across parts)`.
    pub fn pair_counts(&self) -> (u64, u64, u64) {
        let inner0 = choose2(self.v0()) as u64;
        let inner: u64 = self.0.iter().skip(1).map(|&v| choose2(v) as u64).sum();
        let cross = choose2(self.n()) as u64 - inner0 - inner;
        (inner0, inner, cross)
    }

    /// Part index of every vertex.
    pub fn labels(&self) -> Vec<usize> {
        self.0.iter().enumerate().flat_map(|(i, &v)| std::iter::repeat_n(i, v)).collect()
    }
}

/// `T_{r,d}(a,n)` with the given part sizes.
pub fn build_trd(params: Params, sizes: &PartSizes) -> Result<Multigraph> {
    sizes.check(params)?;
    let n = sizes.n();
    if n == 0 || n > MAX_VERTICES {
        return Err(invalid(format!("n = {n} outside 1..={MAX_VERTICES}")));
    }
    let part = sizes.labels();
    Multigraph::from_fn(n, |i, j| match (part[i], part[j]) {
        (0, 0) => params.a - params.d,
        (x, y) if x == y => params.a,
        _ => params.a + 1,
    })
}

/// Edge sum of `T_{r,d}(a,n)` with these sizes.
pub fn sum_of(params: Params, sizes: &PartSizes) -> Result<u64> {
    sizes.check(params)?;
    let (inner0, inner, cross) = sizes.pair_counts();
    Ok(u64::from(params.a - params.d) * inner0 + u64::from(params.a) * inner + u64::from(params.a + 1) * cross)
}

/// Edge product of `T_{r,d}(a,n)` with these sizes.
pub fn product_of(params: Params, sizes: &PartSizes) -> Result<BigUint> {
    sizes.check(params)?;
    let (inner0, inner, cross) = sizes.pair_counts();
    let p = |base: u32, e: u64| -> BigUint { Pow::pow(BigUint::from(base), e) };
    Ok(p(params.a - params.d, inner0) * p(params.a, inner) * p(params.a + 1, cross))
}

fn log_product(params: Params, sizes: &PartSizes) -> f64 {
    let (inner0, inner, cross) = sizes.pair_counts();
    inner0 as f64 * f64::from(params.a - params.d).ln()
        + inner as f64 * f64::from(params.a).ln()
        + cross as f64 * f64::from(params.a + 1).ln()
}

/// Optimal part sizes for one objective. `argmax` is the lexicographically
/// least optimal composition; `all_argmax` lists every optimal composition
/// with `v_1 >= ... >= v_{r-1}`, in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartOptimum<V> {
    pub params: Params,
    pub n: usize,
    pub value: V,
    pub argmax: PartSizes,
    pub all_argmax: Vec<PartSizes>,
}

impl<V: ToString> PartOptimum<V> {
    pub fn witness(&self, params: Params) -> Result<Multigraph> {
        build_trd(params, &self.argmax)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "n": self.n,
            "params": self.params,
            "value": self.value.to_string(),
            "argmax": self.argmax,
            "all_argmax": self.all_argmax,
        })
    }
}

/// For fixed `v_0` the remaining vertices are best split evenly: both
/// objectives grow with the number of cross pairs, and the even split is
/// the unique sorted composition maximising it.
fn candidates(params: Params, n: usize) -> Vec<PartSizes> {
    let rest = params.r as usize - 1;
    let v0_range = if rest == 0 { n..=n } else { 0..=n };
    v0_range
        .map(|v0| {
            let mut sizes = vec![v0];
            sizes.extend(balanced_split(n - v0, rest));
            PartSizes(sizes)
        })
        .collect()
}

/// `Σ_{r,d}(a,n)`: the largest edge sum over `T_{r,d}(a,n)`.
pub fn sigma_exact(params: Params, n: usize) -> Result<PartOptimum<u64>> {
    params.validate()?;
    let scored: Vec<(u64, PartSizes)> = candidates(params, n)
        .into_iter()
        .map(|c| sum_of(params, &c).map(|v| (v, c)))
        .collect::<Result<_>>()?;
    let best = scored.iter().map(|(v, _)| *v).max().expect("at least one composition");
    let all_argmax: Vec<PartSizes> = scored.into_iter().filter(|(v, _)| *v == best).map(|(_, c)| c).collect();
    Ok(PartOptimum { params, n, value: best, argmax: all_argmax[0].clone(), all_argmax })
}

/// `Π_{r,d}(a,n)`: the largest edge product over `T_{r,d}(a,n)`.
///
/// Candidates are ranked by logarithm; everything within a relative `1e-9`
/// of the best is compared exactly.
pub fn pi_exact(params: Params, n: usize) -> Result<PartOptimum<BigUint>> {
    params.validate()?;
    let cands = candidates(params, n);
    let logs: Vec<f64> = cands.iter().map(|c| log_product(params, c)).collect();
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let slack = 1e-9 * top.abs().max(1.0);
    let mut best: Option<BigUint> = None;
    let mut all_argmax = Vec::new();
    for (c, &l) in cands.iter().zip(&logs) {
        if l < top - slack {
            continue;
        }
        let v = product_of(params, c)?;
        match &best {
            Some(b) if v < *b => {}
            Some(b) if v == *b => all_argmax.push(c.clone()),
            _ => {
                best = Some(v);
                all_argmax = vec![c.clone()];
            }
        }
    }
    let value = best.unwrap_or_else(BigUint::one);
    Ok(PartOptimum { params, n, value, argmax: all_argmax[0].clone(), all_argmax })
}

/// Nested construction: `V_0` of each level is replaced by the next level,
/// built at base multiplicity `a - d` of the level above. The last level's
/// `V_0` stays a constant clique of weight `a_last - d_last`.
///
/// Two levels are the tested configuration; deeper nesting is accepted but
/// experimental.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IteratedSpec {
    pub a: u32,
    /// `(r, d)` per level, outermost first.
    pub levels: Vec<(u32, u32)>,
}

impl IteratedSpec {
    /// `Params` of every level, with the effective base multiplicity.
    pub fn level_params(&self) -> Result<Vec<Params>> {
        if self.levels.is_empty() {
            return Err(invalid("an iterated construction needs at least one level"));
        }
        let mut a = self.a;
        let mut out = Vec::with_capacity(self.levels.len());
        for (k, &(r, d)) in self.levels.iter().enumerate() {
            let p = Params::new(a, r, d).map_err(|e| invalid(format!("level {k}: {e}")))?;
            out.push(p);
            a -= d;
        }
        Ok(out)
    }
}

/// Builds an iterated construction. `sizes[k]` are the part sizes of level
/// `k`, and must sum to `v_0` of level `k - 1`.
pub fn build_iterated(spec: &IteratedSpec, sizes: &[PartSizes]) -> Result<Multigraph> {
    let levels = spec.level_params()?;
    if sizes.len() != levels.len() {
        return Err(invalid(format!("{} size vectors for {} levels", sizes.len(), levels.len())));
    }
    for (k, (p, s)) in levels.iter().zip(sizes).enumerate() {
        s.check(*p).map_err(|e| invalid(format!("level {k}: {e}")))?;
        if k > 0 && s.n() != sizes[k - 1].v0() {
            return Err(invalid(format!(
                "level {k} has {} vertices but V_0 of level {} has {}",
                s.n(),
                k - 1,
                sizes[k - 1].v0()
            )));
        }
    }
    let mut g = build_trd(levels[0], &sizes[0])?;
    // vertices 0..v0 of each level form that level's V_0
    for k in 1..levels.len() {
        if sizes[k].n() < 2 {
            break;
        }
        let inner = build_trd(levels[k], &sizes[k])?;
        for (i, j, w) in inner.pairs() {
            g.set_weight(i, j, w);
        }
    }
    Ok(g)
}
