//! Detection of good copies of small patterns.
//!
//! A good copy of an ordinary graph `H` in a multigraph `G` (relative to a
//! base multiplicity `a`) is a vertex set `X` with `|X| = |V(H)|` such that
//! every pair inside `X` has weight at least `a`, and the pairs of weight
//! exactly `a + 1` inside `X` form a graph isomorphic to `H`. Weights above
//! `a + 1` are allowed inside `X`; they simply are not edges of that graph.

use serde::{Deserialize, Serialize};

use super::{Multigraph, VertexSet};
use crate::error::{invalid, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GoodPattern {
    /// `K_r(t_1, ..., t_r)`.
    CompleteMultipartite(Vec<usize>),
    Cycle5,
    Path4,
    /// `K_r(3, ..., 3)` with one edge deleted.
    AlmostKr3(usize),
}

impl GoodPattern {
    pub fn vertex_count(&self) -> usize {
        match self {
            GoodPattern::CompleteMultipartite(parts) => parts.iter().sum(),
            GoodPattern::Cycle5 => 5,
            GoodPattern::Path4 => 4,
            GoodPattern::AlmostKr3(r) => 3 * r,
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            GoodPattern::CompleteMultipartite(parts) if parts.is_empty() || parts.contains(&0) => {
                Err(invalid("multipartite pattern needs at least one part, all nonempty"))
            }
            GoodPattern::AlmostKr3(r) if *r < 2 => Err(invalid("K_r(3) minus an edge needs r >= 2")),
            _ => Ok(()),
        }
    }
}

/// One realisation of a pattern, in the vertex labels of the host.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GoodCopy {
    /// Parts listed in the order of the pattern's part sizes.
    Multipartite { parts: Vec<Vec<usize>> },
    /// Cycle order (for `C_5`) or path order (for `P_4`).
    Sequence(Vec<usize>),
    /// The `r` triples and the one missing cross pair.
    AlmostMultipartite { parts: Vec<Vec<usize>>, missing: (usize, usize) },
}

impl GoodCopy {
    pub fn vertex_set(&self) -> VertexSet {
        match self {
            GoodCopy::Multipartite { parts } | GoodCopy::AlmostMultipartite { parts, .. } => {
                parts.iter().flatten().copied().collect()
            }
            GoodCopy::Sequence(seq) => seq.iter().copied().collect(),
        }
    }
}

/// Finds the lexicographically least (by sorted vertex list) good copy of
/// `pattern` inside `within`, or `None`.
pub fn find_good_copy(g: &Multigraph, a: u32, pattern: &GoodPattern, within: VertexSet) -> Result<Option<GoodCopy>> {
    pattern.validate()?;
    if !within.is_subset(g.vertices()) {
        return Err(invalid(format!("{within:?} is not a subset of the vertex set")));
    }
    let k = pattern.vertex_count();
    if k > within.len() {
        return Err(invalid(format!("pattern has {k} vertices but only {} are available", within.len())));
    }
    let pool = within.to_vec();
    let mut chosen = Vec::with_capacity(k);
    Ok(search(g, a, pattern, &pool, 0, k, &mut chosen))
}

fn search(
    g: &Multigraph,
    a: u32,
    pattern: &GoodPattern,
    pool: &[usize],
    start: usize,
    k: usize,
    chosen: &mut Vec<usize>,
) -> Option<GoodCopy> {
    if chosen.len() == k {
        return recognise(g, a, pattern, chosen);
    }
    let need = k - chosen.len();
    for idx in start..=pool.len() - need {
        let v = pool[idx];
        if chosen.iter().all(|&u| g.weight(u, v) >= a) {
            chosen.push(v);
            if let Some(found) = search(g, a, pattern, pool, idx + 1, k, chosen) {
                return Some(found);
            }
            chosen.pop();
        }
    }
    None
}

/// Adjacency (as local bitmasks) of the weight-`(a+1)` graph on `verts`.
fn top_level(g: &Multigraph, a: u32, verts: &[usize]) -> Vec<u32> {
    let mut adj = vec![0u32; verts.len()];
    for x in 0..verts.len() {
        for y in x + 1..verts.len() {
            if g.weight(verts[x], verts[y]) == a + 1 {
                adj[x] |= 1 << y;
                adj[y] |= 1 << x;
            }
        }
    }
    adj
}

fn recognise(g: &Multigraph, a: u32, pattern: &GoodPattern, verts: &[usize]) -> Option<GoodCopy> {
    let adj = top_level(g, a, verts);
    let label = |local: &[usize]| local.iter().map(|&x| verts[x]).collect::<Vec<_>>();
    match pattern {
        GoodPattern::CompleteMultipartite(sizes) => {
            let classes = non_adjacency_classes(&adj)?;
            match_parts(&classes, sizes).map(|parts| GoodCopy::Multipartite {
                parts: parts.iter().map(|p| label(p)).collect(),
            })
        }
        GoodPattern::Cycle5 => {
            if adj.iter().any(|m| m.count_ones() != 2) {
                return None;
            }
            let order = walk(&adj, 0)?;
            (order.len() == 5).then(|| GoodCopy::Sequence(label(&order)))
        }
        GoodPattern::Path4 => {
            let degrees: Vec<u32> = adj.iter().map(|m| m.count_ones()).collect();
            if degrees.iter().sum::<u32>() != 6 || degrees.iter().any(|&d| d == 0 || d > 2) {
                return None;
            }
            let start = degrees.iter().position(|&d| d == 1)?;
            let order = walk(&adj, start)?;
            (order.len() == 4).then(|| GoodCopy::Sequence(label(&order)))
        }
        GoodPattern::AlmostKr3(r) => {
            let m = adj.len();
            for x in 0..m {
                for y in x + 1..m {
                    if adj[x] >> y & 1 == 1 {
                        continue;
                    }
                    let mut patched = adj.clone();
                    patched[x] |= 1 << y;
                    patched[y] |= 1 << x;
                    let Some(classes) = non_adjacency_classes(&patched) else { continue };
                    if classes.len() == *r && classes.iter().all(|c| c.len() == 3) {
                        return Some(GoodCopy::AlmostMultipartite {
                            parts: classes.iter().map(|c| label(c)).collect(),
                            missing: (verts[x], verts[y]),
                        });
                    }
                }
            }
            None
        }
    }
}

/// When the graph is complete multipartite, its parts (classes of
/// non-adjacency), ordered by smallest member.
fn non_adjacency_classes(adj: &[u32]) -> Option<Vec<Vec<usize>>> {
    let m = adj.len();
    let all = if m == 32 { u32::MAX } else { (1u32 << m) - 1 };
    let mut assigned = 0u32;
    let mut classes = Vec::new();
    for v in 0..m {
        if assigned >> v & 1 == 1 {
            continue;
        }
        let class = all & !adj[v];
        for u in (0..m).filter(|&u| class >> u & 1 == 1) {
            if all & !adj[u] != class {
                return None;
            }
        }
        assigned |= class;
        classes.push((0..m).filter(|&u| class >> u & 1 == 1).collect());
    }
    Some(classes)
}

/// Assigns classes to the requested part sizes; equal sizes keep class order.
fn match_parts(classes: &[Vec<usize>], sizes: &[usize]) -> Option<Vec<Vec<usize>>> {
    if classes.len() != sizes.len() {
        return None;
    }
    let mut used = vec![false; classes.len()];
    let mut parts = Vec::with_capacity(sizes.len());
    for &size in sizes {
        let idx = (0..classes.len()).find(|&i| !used[i] && classes[i].len() == size)?;
        used[idx] = true;
        parts.push(classes[idx].clone());
    }
    Some(parts)
}

/// Follows a path or cycle from `start`, preferring the smaller neighbour.
fn walk(adj: &[u32], start: usize) -> Option<Vec<usize>> {
    let mut order = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    loop {
        let next = (0..adj.len()).find(|&u| adj[cur] >> u & 1 == 1 && u != prev && !order.contains(&u));
        match next {
            Some(u) => {
                order.push(u);
                prev = cur;
                cur = u;
            }
            None => return Some(order),
        }
    }
}
