//! The two product-nondecreasing moves that carry a member of the `G`
//! family into the `H` family: raising light edges and cloning across
//! non-clone pairs of weight `a - d`.

use super::{are_clones, in_g_family, Multigraph};
use crate::combinat::choose2;
use crate::error::{invalid, Error, Result};
use crate::params::Params;

fn check_scope(params: Params, s: usize) -> Result<()> {
    params.validate()?;
    if s < 2 || s > params.s_base() {
        return Err(invalid(format!(
            "transformations are defined for 2 <= s <= (r-1)(d+1)+2 = {}, got s = {s}",
            params.s_base()
        )));
    }
    Ok(())
}

/// Raises every weight below `a - d` to `a - d`, one pair at a time in colex
/// order. Each step keeps the multigraph in the `G` family.
pub fn raise_min_weights(g: &Multigraph, params: Params, s: usize) -> Result<Multigraph> {
    check_scope(params, s)?;
    if !in_g_family(g, params, s)? {
        return Err(Error::Contract(format!("input is not in G(n, {s}, Σ_{{r,d}}(a,{s})) for {params}")));
    }
    let low = params.low();
    let mut out = g.clone();
    for (i, j, w) in g.pairs() {
        if w < low {
            out.set_weight(i, j, low);
        }
    }
    Ok(out)
}

/// Repeatedly picks the first (colex) pair `uv` of weight `a - d` whose ends
/// are not clones and overwrites the row of the endpoint with the smaller
/// product-degree by the other endpoint's row. When the product-degrees tie,
/// the direction leaving more clone pairs wins, then overwriting the lower
/// label; always overwriting the lower label can loop forever. Returns the
/// result and the number of cloning steps.
///
/// Clone pairs of the input are not always preserved: overwriting `v` can
/// separate `v` from its former clones.
pub fn clone_saturate_steps(g: &Multigraph, params: Params, s: usize) -> Result<(Multigraph, usize)> {
    check_scope(params, s)?;
    let low = params.low();
    if g.min_weight().is_some_and(|m| m < low) {
        return Err(Error::Contract(format!("input has a weight below a - d = {low}")));
    }
    if !in_g_family(g, params, s)? {
        return Err(Error::Contract(format!("input is not in G(n, {s}, Σ_{{r,d}}(a,{s})) for {params}")));
    }
    let n = g.n();
    // A step can break clone pairs that involve the source vertex, so the
    // number of clone pairs is not monotone; cap the loop.
    let cap = 8 * choose2(n) + 8;
    let mut cur = g.clone();
    for step in 0..=cap {
        let Some((i, j)) = first_unsaturated_pair(&cur, low)? else {
            return Ok((cur, step));
        };
        let (pi, pj) = (cur.product_degree(i)?, cur.product_degree(j)?);
        let overwrite_i = match pi.cmp(&pj) {
            std::cmp::Ordering::Less => true,
            std::cmp::Ordering::Greater => false,
            // keep more clone pairs; lower label on a full tie
            std::cmp::Ordering::Equal => {
                clone_pairs(&copy_row(&cur, j, i))? >= clone_pairs(&copy_row(&cur, i, j))?
            }
        };
        let (source, target) = if overwrite_i { (j, i) } else { (i, j) };
        cur = copy_row(&cur, source, target);
    }
    Err(Error::Contract(format!("cloning did not settle within {cap} steps")))
}

/// [`clone_saturate_steps`] without the step count.
pub fn clone_saturate(g: &Multigraph, params: Params, s: usize) -> Result<Multigraph> {
    clone_saturate_steps(g, params, s).map(|(out, _)| out)
}

/// `g` with the row of `target` overwritten by that of `source`, except on
/// the pair joining them.
fn copy_row(g: &Multigraph, source: usize, target: usize) -> Multigraph {
    let mut out = g.clone();
    for z in (0..g.n()).filter(|&z| z != source && z != target) {
        out.set_weight(target, z, g.weight(source, z));
    }
    out
}

fn clone_pairs(g: &Multigraph) -> Result<usize> {
    let mut count = 0;
    for u in 0..g.n() {
        for v in u + 1..g.n() {
            count += usize::from(are_clones(g, u, v)?);
        }
    }
    Ok(count)
}

fn first_unsaturated_pair(g: &Multigraph, low: u32) -> Result<Option<(usize, usize)>> {
    for (i, j, w) in g.pairs() {
        if w == low && !are_clones(g, i, j)? {
            return Ok(Some((i, j)));
        }
    }
    Ok(None)
}
