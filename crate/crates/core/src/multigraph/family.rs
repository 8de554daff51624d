use super::{Multigraph, VertexSet};
use crate::combinat::Subsets;
use crate::constructions::sigma_exact;
use crate::error::{invalid, Result};
use crate::params::Params;

/// Checks the `(s,q)`-property. Returns `Ok(None)` when every `s`-set
/// supports at most `q`, otherwise the first violating `s`-set in colex order.
pub fn satisfies_sq(g: &Multigraph, s: usize, q: u64) -> Result<Option<VertexSet>> {
    if s < 2 || s > g.n() {
        return Err(invalid(format!("s = {s} outside 2..={}", g.n())));
    }
    Ok(Subsets::new(g.n(), s)
        .map(VertexSet)
        .find(|&x| g.edge_sum_unchecked(x) > q))
}

/// The largest `s`-set sum and the first `s`-set (colex) attaining it.
pub fn max_s_set_sum(g: &Multigraph, s: usize) -> Result<(u64, VertexSet)> {
    if s < 2 || s > g.n() {
        return Err(invalid(format!("s = {s} outside 2..={}", g.n())));
    }
    let mut best = (0, VertexSet::EMPTY);
    for x in Subsets::new(g.n(), s).map(VertexSet) {
        let sum = g.edge_sum_unchecked(x);
        if best.1.is_empty() || sum > best.0 {
            best = (sum, x);
        }
    }
    Ok(best)
}

/// Membership of `G(n, s, Σ_{r,d}(a,s))`: the `(s', Σ_{r,d}(a,s'))`-property
/// for every `2 <= s' <= s`. Sizes above `n` hold vacuously.
pub fn in_g_family(g: &Multigraph, params: Params, s: usize) -> Result<bool> {
    params.validate()?;
    if s < 2 {
        return Err(invalid("s must be at least 2"));
    }
    for sp in 2..=s.min(g.n()) {
        let bound = sigma_exact(params, sp)?.value;
        if satisfies_sq(g, sp, bound)?.is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `u` and `v` agree on every third vertex.
pub fn are_clones(g: &Multigraph, u: usize, v: usize) -> Result<bool> {
    if u == v {
        return Err(invalid("clone test needs two distinct vertices"));
    }
    if u >= g.n() || v >= g.n() {
        return Err(invalid(format!("vertex out of range 0..{}", g.n())));
    }
    Ok((0..g.n())
        .filter(|&z| z != u && z != v)
        .all(|z| g.weight(u, z) == g.weight(v, z)))
}

/// Membership of `H(n, s, Σ_{r,d}(a,s))`: in the `G` family, no weight below
/// `a - d`, and every pair of weight exactly `a - d` is a clone pair.
pub fn in_h_family(g: &Multigraph, params: Params, s: usize) -> Result<bool> {
    if !in_g_family(g, params, s)? {
        return Ok(false);
    }
    let low = params.low();
    for (i, j, w) in g.pairs() {
        if w < low || (w == low && !are_clones(g, i, j)?) {
            return Ok(false);
        }
    }
    Ok(true)
}
