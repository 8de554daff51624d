//! Exact `ex_Σ(n,s,q)`, `ex_Π(n,s,q)` and `|F(n,s,q)|` for small `n`.

mod cache;
mod count;
mod engine;
mod layout;
mod oracle;

pub use cache::{cached_run, CacheKey, CacheRecord, ResultCache, ENGINE_VERSION};
pub use layout::MAX_SEARCH_N;
pub use oracle::{oracle_scan, OracleScan};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use crate::combinat::choose2;
use crate::constructions::{pi_exact, sigma_exact};
use crate::error::{invalid, Error, Result};
use crate::formulas::{product_density, BigReal};
use crate::multigraph::{max_s_set_sum, Multigraph};
use crate::params::Params;
use engine::{Objective, Problem, Shared};
use layout::Layout;

pub const DEFAULT_NODE_BUDGET: u64 = 2_000_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Sum,
    Product,
    Count,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Sum => "sum",
            Mode::Product => "product",
            Mode::Count => "count",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sum" => Ok(Mode::Sum),
            "product" => Ok(Mode::Product),
            "count" => Ok(Mode::Count),
            _ => Err(invalid(format!("unknown mode {s:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    /// Worker threads; `1` gives a reproducible witness.
    pub threads: usize,
    /// Nodes explored before giving up with a lower bound only.
    pub node_budget: u64,
    /// Start from the best `T_{r,d}(a,n)` member that fits, not only from
    /// the constant graph.
    pub seed_constructions: bool,
    /// Orderly-generation filter on adjacent vertex transpositions.
    pub symmetry: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { threads: 1, node_budget: DEFAULT_NODE_BUDGET, seed_constructions: true, symmetry: true }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub bound_prunes: u64,
    pub symmetry_prunes: u64,
    pub wall_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub mode: Mode,
    pub n: usize,
    pub s: usize,
    pub q: u64,
    pub value: BigUint,
    pub witness: Option<Multigraph>,
    /// `false` when the node budget ran out; `value` is then a lower bound.
    pub optimal: bool,
    pub stats: SearchStats,
}

impl SearchOutcome {
    /// `value^(1/C(n,2))` for products, `value / C(n,2)` for sums.
    pub fn density(&self, digits: u32) -> Result<Option<BigReal>> {
        match self.mode {
            Mode::Product => product_density(&self.value, self.n, digits),
            Mode::Sum if self.n >= 2 => BigReal::from_ratio(self.value.clone(), choose2(self.n) as i64, digits).map(Some),
            _ => Ok(None),
        }
    }

    /// Re-derives the value from the witness and checks the
    /// `(s,q)`-property on a separate code path.
    pub fn check_witness(&self) -> Result<bool> {
        let Some(g) = &self.witness else { return Ok(self.mode == Mode::Count) };
        let fits = max_s_set_sum(g, self.s)?.0 <= self.q;
        let realised = match self.mode {
            Mode::Sum => BigUint::from(g.total()),
            Mode::Product => g.product(),
            Mode::Count => return Ok(false),
        };
        Ok(fits && realised == self.value)
    }
}

/// Feasible seeds: the constant graph and, optionally, the best member of
/// every `T_{r,d}(a,n)` whose `s`-sets fit under `q`.
fn seeds(n: usize, s: usize, q: u64, objective: Objective, constructions: bool) -> Result<Vec<Multigraph>> {
    let pairs_s = choose2(s) as u64;
    let base = q / pairs_s;
    let mut out = vec![Multigraph::constant(n, u32::try_from(base).map_err(|_| invalid("q too large"))?)?];
    if !constructions {
        return Ok(out);
    }
    for a in 1..=base as u32 {
        for r in 1..=n as u32 {
            for d in 0..a {
                let params = Params::new(a, r, d)?;
                if sigma_exact(params, s)?.value > q {
                    continue;
                }
                let g = match objective {
                    Objective::Sum => sigma_exact(params, n)?.witness(params)?,
                    Objective::Product => pi_exact(params, n)?.witness(params)?,
                };
                out.push(g);
            }
        }
    }
    Ok(out)
}

fn optimise(n: usize, s: usize, q: u64, objective: Objective, cfg: &SearchConfig) -> Result<SearchOutcome> {
    let start = Instant::now();
    let lay = Layout::new(n, s)?;
    let mode = match objective {
        Objective::Sum => Mode::Sum,
        Objective::Product => Mode::Product,
    };
    let pairs_s = choose2(s) as u64;
    if objective == Objective::Product && q < pairs_s {
        // every s-set holds a zero pair, so the product vanishes
        return Ok(SearchOutcome {
            mode,
            n,
            s,
            q,
            value: BigUint::zero(),
            witness: Some(Multigraph::new(n)?),
            optimal: true,
            stats: SearchStats { wall_ms: start.elapsed().as_millis() as u64, ..Default::default() },
        });
    }
    let (minw, wmax) = match objective {
        Objective::Sum => (0, q),
        Objective::Product => (1, q - pairs_s + 1),
    };
    let wmax = u32::try_from(wmax).map_err(|_| invalid("q too large"))?;
    let pb = Problem { lay, objective, q, minw, wmax, symmetry: cfg.symmetry };
    let sh = Shared::new(objective, cfg.node_budget);
    for g in seeds(n, s, q, objective, cfg.seed_constructions)? {
        let v = match objective {
            Objective::Sum => BigUint::from(g.total()),
            Objective::Product => g.product(),
        };
        sh.offer(v, g.weights());
    }
    engine::run(&pb, &sh, cfg.threads.max(1));
    let (value, weights) = sh.result().expect("seeded incumbent");
    let mut stats = sh.stats();
    stats.wall_ms = start.elapsed().as_millis() as u64;
    Ok(SearchOutcome {
        mode,
        n,
        s,
        q,
        value,
        witness: Some(Multigraph::from_weights(n, weights)?),
        optimal: !sh.stopped(),
        stats,
    })
}

/// `ex_Π(n,s,q)`: the largest product of weights over `(s,q)`-graphs.
pub fn ex_pi_search(n: usize, s: usize, q: u64, cfg: &SearchConfig) -> Result<SearchOutcome> {
    optimise(n, s, q, Objective::Product, cfg)
}

/// `ex_Σ(n,s,q)`: the largest total weight over `(s,q)`-graphs.
pub fn ex_sigma_search(n: usize, s: usize, q: u64, cfg: &SearchConfig) -> Result<SearchOutcome> {
    optimise(n, s, q, Objective::Sum, cfg)
}

/// `|F(n,s,q)|`. Weights above `q` are impossible since every pair lies in
/// an `s`-set. Exceeding the node budget is an error, never a partial count.
pub fn count_family(n: usize, s: usize, q: u64, budget: u64) -> Result<SearchOutcome> {
    let start = Instant::now();
    let lay = Layout::new(n, s)?;
    let (value, nodes) = count::count(&lay, q, budget)?;
    Ok(SearchOutcome {
        mode: Mode::Count,
        n,
        s,
        q,
        value,
        witness: None,
        optimal: true,
        stats: SearchStats { nodes, wall_ms: start.elapsed().as_millis() as u64, ..Default::default() },
    })
}

/// Exhaustive reference for all three modes, over weights `0..=weight_cap`.
pub fn brute_force_oracle(n: usize, s: usize, q: u64, mode: Mode, weight_cap: u32, budget: u64) -> Result<SearchOutcome> {
    let start = Instant::now();
    let scan = oracle_scan(n, s, q, weight_cap, budget)?;
    let (value, witness) = match mode {
        Mode::Sum => (BigUint::from(scan.max_sum), Some(Multigraph::from_weights(n, scan.sum_witness)?)),
        Mode::Product => (scan.max_product, Some(Multigraph::from_weights(n, scan.product_witness)?)),
        Mode::Count => (scan.count, None),
    };
    Ok(SearchOutcome {
        mode,
        n,
        s,
        q,
        value,
        witness,
        optimal: true,
        stats: SearchStats { nodes: scan.assignments, wall_ms: start.elapsed().as_millis() as u64, ..Default::default() },
    })
}

/// `(q+1)^C(n,2)`, the count at `s = 2`.
pub fn count_for_pairs(n: usize, q: u64) -> BigUint {
    (0..choose2(n)).fold(BigUint::one(), |acc, _| acc * BigUint::from(q + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::PartSizes;
    use crate::formulas::am_gm_bound;

    fn quick() -> SearchConfig {
        SearchConfig::default()
    }

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn single_set_instances() {
        for s in 2..=5 {
            let pairs = choose2(s) as u64;
            for a in 1..=3 {
                let out = ex_pi_search(s, s, a * pairs, &quick()).unwrap();
                assert_eq!(out.value, am_gm_bound(a, pairs, 0).unwrap());
                assert!(out.check_witness().unwrap());
            }
            for q in [0, 3, 7, 11] {
                assert_eq!(ex_sigma_search(s, s, q, &quick()).unwrap().value, big(q));
            }
        }
        let out = ex_pi_search(4, 4, 15, &quick()).unwrap();
        assert_eq!(out.value, big(216));
        assert_eq!(out.witness.unwrap(), crate::build_trd(Params::new(2, 2, 1).unwrap(), &PartSizes::new(vec![1, 3])).unwrap());
    }

    #[test]
    fn degenerate_products() {
        let out = ex_pi_search(4, 3, 2, &quick()).unwrap();
        assert_eq!(out.value, big(0));
        assert!(out.check_witness().unwrap());
        assert!(ex_pi_search(3, 4, 10, &quick()).is_err());
    }

    #[test]
    fn counts() {
        for n in 2..=4 {
            for q in 0..=4 {
                let c = count_family(n, 2, q, u64::MAX).unwrap();
                assert_eq!(c.value, count_for_pairs(n, q));
            }
        }
        assert_eq!(count_family(4, 4, 3, u64::MAX).unwrap().value, big(84));
        assert!(matches!(count_family(5, 2, 9, 1000), Err(Error::Budget { .. })));
    }

    #[test]
    fn oracle_agreement_with_variants() {
        // every engine setting must reproduce the unpruned scan
        let configs = [
            SearchConfig { seed_constructions: false, symmetry: false, ..quick() },
            SearchConfig { seed_constructions: false, symmetry: true, ..quick() },
            SearchConfig { seed_constructions: true, symmetry: true, threads: 3, ..quick() },
        ];
        for n in 3..=4 {
            for s in 2..=n {
                for q in 0..=9 {
                    let scan = oracle_scan(n, s, q, q as u32, u64::MAX).unwrap();
                    for cfg in &configs {
                        let p = ex_pi_search(n, s, q, cfg).unwrap();
                        assert_eq!(p.value, scan.max_product, "n={n} s={s} q={q} {cfg:?}");
                        assert!(p.check_witness().unwrap());
                        let m = ex_sigma_search(n, s, q, cfg).unwrap();
                        assert_eq!(m.value, big(scan.max_sum), "n={n} s={s} q={q} {cfg:?}");
                        assert!(m.check_witness().unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn five_vertices() {
        // Construction 1 gives 5832 here; the search value is data
        let out = ex_pi_search(5, 4, 15, &quick()).unwrap();
        assert!(out.optimal);
        assert!(out.value >= big(5832));
        assert!(out.check_witness().unwrap());
        let unseeded = ex_pi_search(5, 4, 15, &SearchConfig { seed_constructions: false, threads: 4, ..quick() }).unwrap();
        assert_eq!(unseeded.value, out.value);
        let sum = ex_sigma_search(5, 4, 15, &quick()).unwrap();
        assert!(sum.value >= big(25));
    }

    #[test]
    fn budget_flags_lower_bound() {
        let cfg = SearchConfig { node_budget: 10, seed_constructions: false, ..quick() };
        let out = ex_pi_search(6, 4, 15, &cfg).unwrap();
        assert!(!out.optimal);
        assert!(out.check_witness().unwrap());
    }

    #[test]
    fn densities() {
        let out = ex_pi_search(4, 4, 15, &quick()).unwrap();
        let d = out.density(30).unwrap().unwrap();
        assert_eq!(d.to_decimal(11), "2.44948974278");
        let s = ex_sigma_search(4, 4, 15, &quick()).unwrap();
        assert_eq!(s.density(30).unwrap().unwrap().to_decimal(3), "2.500");
    }

    #[test]
    fn monotone_in_q_and_s() {
        let cfg = quick();
        for n in 4..=5 {
            let mut prev = big(0);
            for q in 6..=16 {
                let v = ex_pi_search(n, 4, q, &cfg).unwrap().value;
                assert!(v >= prev);
                prev = v;
            }
            for q in [10, 14] {
                let v3 = ex_pi_search(n, 3, q, &cfg).unwrap().value;
                let v4 = ex_pi_search(n, 4, q, &cfg).unwrap().value;
                assert!(v4 <= v3);
            }
        }
    }
}
