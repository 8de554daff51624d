//! Dense multigraph representation and the local quantities defined on it.

mod family;
mod pattern;
mod transform;

pub use family::{are_clones, in_g_family, in_h_family, max_s_set_sum, satisfies_sq};
pub use pattern::{find_good_copy, GoodCopy, GoodPattern};
pub use transform::{clone_saturate, clone_saturate_steps, raise_min_weights};

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::combinat::{choose2, pair_rank, pair_unrank};
use crate::error::{invalid, Error, Result};

/// Vertex sets are bitmasks, so multigraphs are limited to 64 vertices.
pub const MAX_VERTICES: usize = 64;

/// A subset of `0..n`, stored as a bitmask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(pub u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn full(n: usize) -> Self {
        if n >= 64 {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(v: usize) -> Self {
        VertexSet(1u64 << v)
    }

    pub fn range(lo: usize, hi: usize) -> Self {
        VertexSet(VertexSet::full(hi).0 & !VertexSet::full(lo).0)
    }

    pub fn contains(self, v: usize) -> bool {
        v < 64 && self.0 >> v & 1 == 1
    }

    pub fn insert(&mut self, v: usize) {
        self.0 |= 1u64 << v;
    }

    pub fn remove(&mut self, v: usize) {
        self.0 &= !(1u64 << v);
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Self) -> Self {
        VertexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        VertexSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        VertexSet(self.0 & !other.0)
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Members in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(v)
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = VertexSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// An ordinary graph on `0..n`, as adjacency bitmasks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleGraph {
    adj: Vec<u64>,
}

impl SimpleGraph {
    pub fn empty(n: usize) -> Self {
        SimpleGraph { adj: vec![0; n] }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = SimpleGraph::empty(n);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert_ne!(u, v);
        self.adj[u] |= 1 << v;
        self.adj[v] |= 1 << u;
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u] >> v & 1 == 1
    }

    pub fn neighbors(&self, v: usize) -> VertexSet {
        VertexSet(self.adj[v])
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for v in 0..self.n() {
            for u in VertexSet(self.adj[v]).iter().filter(|&u| u < v) {
                out.push((u, v));
            }
        }
        out.sort();
        out
    }
}

/// A multigraph on `0..n`: every unordered pair carries a nonnegative
/// integer weight (multiplicity), stored densely by colex pair rank.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Multigraph {
    n: usize,
    w: Vec<u32>,
}

impl Multigraph {
    /// The edgeless multigraph (all weights zero).
    pub fn new(n: usize) -> Result<Self> {
        Self::constant(n, 0)
    }

    pub fn constant(n: usize, weight: u32) -> Result<Self> {
        if n == 0 || n > MAX_VERTICES {
            return Err(invalid(format!("vertex count must be in 1..={MAX_VERTICES}, got {n}")));
        }
        Ok(Multigraph { n, w: vec![weight; choose2(n)] })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> u32) -> Result<Self> {
        let mut g = Self::new(n)?;
        for (rank, slot) in g.w.iter_mut().enumerate() {
            let (i, j) = pair_unrank(rank);
            *slot = f(i, j);
        }
        Ok(g)
    }

    /// Builds from weights listed in colex pair order.
    pub fn from_weights(n: usize, weights: Vec<u32>) -> Result<Self> {
        if n == 0 || n > MAX_VERTICES || weights.len() != choose2(n) {
            return Err(invalid(format!(
                "expected {} weights for n = {n}, got {}",
                choose2(n),
                weights.len()
            )));
        }
        Ok(Multigraph { n, w: weights })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    /// Weights in colex pair order.
    pub fn weights(&self) -> &[u32] {
        &self.w
    }

    #[inline]
    pub fn weight(&self, i: usize, j: usize) -> u32 {
        self.w[pair_rank(i, j)]
    }

    pub fn set_weight(&mut self, i: usize, j: usize, weight: u32) {
        assert!(i != j && i < self.n && j < self.n, "pair ({i},{j}) out of range");
        self.w[pair_rank(i, j)] = weight;
    }

    pub fn min_weight(&self) -> Option<u32> {
        self.w.iter().copied().min()
    }

    pub fn max_weight(&self) -> Option<u32> {
        self.w.iter().copied().max()
    }

    /// Iterates `(i, j, w)` with `i < j` in colex order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.w.iter().enumerate().map(|(rank, &w)| {
            let (i, j) = pair_unrank(rank);
            (i, j, w)
        })
    }

    fn check_set(&self, x: VertexSet) -> Result<()> {
        if !x.is_subset(self.vertices()) {
            return Err(invalid(format!("vertex set {x:?} not contained in 0..{}", self.n)));
        }
        Ok(())
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            return Err(invalid(format!("vertex {v} out of range 0..{}", self.n)));
        }
        Ok(())
    }

    /// `S(G[X])`, the sum of multiplicities of pairs inside `X`.
    pub fn edge_sum(&self, x: VertexSet) -> Result<u64> {
        self.check_set(x)?;
        Ok(self.edge_sum_unchecked(x))
    }

    pub(crate) fn edge_sum_unchecked(&self, x: VertexSet) -> u64 {
        let verts = x.to_vec();
        let mut total = 0u64;
        for (k, &j) in verts.iter().enumerate() {
            for &i in &verts[..k] {
                total += u64::from(self.weight(i, j));
            }
        }
        total
    }

    /// `P(G[X])`, the product of multiplicities of pairs inside `X`.
    pub fn edge_product(&self, x: VertexSet) -> Result<BigUint> {
        self.check_set(x)?;
        let verts = x.to_vec();
        let mut acc = BigUint::one();
        for (k, &j) in verts.iter().enumerate() {
            for &i in &verts[..k] {
                acc *= self.weight(i, j);
            }
        }
        Ok(acc)
    }

    /// `P(G)` over all pairs.
    pub fn product(&self) -> BigUint {
        self.w.iter().fold(BigUint::one(), |acc, &w| acc * w)
    }

    /// `e(G)`, the total multiplicity.
    pub fn total(&self) -> u64 {
        self.w.iter().map(|&w| u64::from(w)).sum()
    }

    fn check_cross(&self, x: VertexSet, y: VertexSet) -> Result<()> {
        self.check_set(x)?;
        self.check_set(y)?;
        if !x.is_disjoint(y) {
            return Err(invalid(format!("sets {x:?} and {y:?} overlap")));
        }
        Ok(())
    }

    /// `S(G[X, Y])` for disjoint `X`, `Y`.
    pub fn cross_sum(&self, x: VertexSet, y: VertexSet) -> Result<u64> {
        self.check_cross(x, y)?;
        Ok(x.iter()
            .flat_map(|u| y.iter().map(move |v| (u, v)))
            .map(|(u, v)| u64::from(self.weight(u, v)))
            .sum())
    }

    /// `P(G[X, Y])` for disjoint `X`, `Y`.
    pub fn cross_product(&self, x: VertexSet, y: VertexSet) -> Result<BigUint> {
        self.check_cross(x, y)?;
        let mut acc = BigUint::one();
        for u in x.iter() {
            for v in y.iter() {
                acc *= self.weight(u, v);
            }
        }
        Ok(acc)
    }

    pub fn degree(&self, v: usize) -> Result<u64> {
        self.check_vertex(v)?;
        Ok((0..self.n).filter(|&u| u != v).map(|u| u64::from(self.weight(u, v))).sum())
    }

    pub fn product_degree(&self, v: usize) -> Result<BigUint> {
        self.check_vertex(v)?;
        Ok((0..self.n)
            .filter(|&u| u != v)
            .fold(BigUint::one(), |acc, u| acc * self.weight(u, v)))
    }

    /// `G^{(m)}`: the simple graph of pairs with weight exactly `m`.
    pub fn level_subgraph(&self, m: u32) -> SimpleGraph {
        let mut g = SimpleGraph::empty(self.n);
        for (i, j, w) in self.pairs() {
            if w == m {
                g.add_edge(i, j);
            }
        }
        g
    }

    /// `N^{(m)}_X(v)`: vertices of `X` joined to `v` with weight exactly `m`.
    pub fn level_neighborhood(&self, v: usize, x: VertexSet, m: u32) -> Result<VertexSet> {
        self.check_vertex(v)?;
        self.check_set(x)?;
        Ok(x.iter().filter(|&u| u != v && self.weight(u, v) == m).collect())
    }

    /// `N_W`: the vertices outside `W` joined with weight `m` to every member of `W`.
    pub fn common_level_neighborhood(&self, w: VertexSet, m: u32) -> Result<VertexSet> {
        self.check_set(w)?;
        if w.is_empty() {
            return Err(invalid("common neighbourhood of an empty set"));
        }
        let outside = self.vertices().difference(w);
        let mut acc = outside;
        for v in w.iter() {
            acc = acc.intersection(self.level_neighborhood(v, outside, m)?);
        }
        Ok(acc)
    }

    /// The multigraph induced on `x`, relabelled to `0..|x|` in increasing order.
    pub fn induced(&self, x: VertexSet) -> Result<Multigraph> {
        self.check_set(x)?;
        let verts = x.to_vec();
        Multigraph::from_fn(verts.len(), |i, j| self.weight(verts[i], verts[j]))
    }

    /// Relabels vertices: vertex `v` of `self` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Multigraph> {
        if perm.len() != self.n {
            return Err(invalid("permutation length differs from vertex count"));
        }
        let mut seen = VertexSet::EMPTY;
        for &p in perm {
            if p >= self.n || seen.contains(p) {
                return Err(invalid("not a permutation"));
            }
            seen.insert(p);
        }
        let mut out = Multigraph::new(self.n)?;
        for (i, j, w) in self.pairs() {
            out.set_weight(perm[i], perm[j], w);
        }
        Ok(out)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("multigraph serialises")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

impl fmt::Debug for Multigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Multigraph(n={})", self.n)?;
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n)
                .map(|j| if i == j { "-".into() } else { self.weight(i, j).to_string() })
                .collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Wire form: `{"n": 4, "edges": [[0, 1, 2], ...]}` with every pair exactly once.
#[derive(Serialize, Deserialize)]
struct MultigraphDoc {
    n: usize,
    edges: Vec<(usize, usize, u32)>,
}

impl Serialize for Multigraph {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        MultigraphDoc { n: self.n, edges: self.pairs().collect() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Multigraph {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let doc = MultigraphDoc::deserialize(deserializer)?;
        Multigraph::try_from(doc).map_err(serde::de::Error::custom)
    }
}

impl TryFrom<MultigraphDoc> for Multigraph {
    type Error = Error;

    fn try_from(doc: MultigraphDoc) -> Result<Self> {
        let n = doc.n;
        if n == 0 || n > MAX_VERTICES {
            return Err(Error::Format(format!("n = {n} outside 1..={MAX_VERTICES}")));
        }
        let mut slots: Vec<Option<u32>> = vec![None; choose2(n)];
        for (i, j, w) in doc.edges {
            if i >= j || j >= n {
                return Err(Error::Format(format!("edge [{i}, {j}] must satisfy i < j < n")));
            }
            let slot = &mut slots[pair_rank(i, j)];
            if slot.is_some() {
                return Err(Error::Format(format!("pair [{i}, {j}] listed twice")));
            }
            *slot = Some(w);
        }
        let w = slots
            .into_iter()
            .enumerate()
            .map(|(rank, s)| {
                s.ok_or_else(|| {
                    let (i, j) = pair_unrank(rank);
                    Error::Format(format!("pair [{i}, {j}] missing"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Multigraph { n, w })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build_trd, PartSizes};
    use crate::params::Params;

    fn t221(sizes: &[usize]) -> Multigraph {
        build_trd(Params::new(2, 2, 1).unwrap(), &PartSizes::new(sizes.to_vec())).unwrap()
    }

    #[test]
    fn sums_and_products() {
        let g = Multigraph::constant(4, 2).unwrap();
        assert_eq!(g.edge_sum(g.vertices()).unwrap(), 12);
        assert_eq!(g.edge_product(g.vertices()).unwrap(), BigUint::from(64u32));
        assert_eq!(g.edge_sum(VertexSet::singleton(2)).unwrap(), 0);
        assert_eq!(g.edge_product(VertexSet::singleton(2)).unwrap(), BigUint::one());

        let t = t221(&[1, 3]);
        assert_eq!(t.edge_sum(t.vertices()).unwrap(), 15);
        let t5 = t221(&[2, 3]);
        assert_eq!(t5.edge_product(t5.vertices()).unwrap(), BigUint::from(5832u32));

        let mut z = Multigraph::constant(4, 3).unwrap();
        z.set_weight(1, 3, 0);
        assert_eq!(z.edge_product(z.vertices()).unwrap(), BigUint::from(0u32));
    }

    #[test]
    fn out_of_range_sets_are_rejected() {
        let g = Multigraph::constant(3, 1).unwrap();
        assert!(g.edge_sum(VertexSet::singleton(5)).is_err());
        assert!(g.degree(3).is_err());
        assert!(g.cross_sum(VertexSet(0b011), VertexSet(0b010)).is_err());
    }

    #[test]
    fn cross_quantities() {
        let t = t221(&[1, 3]);
        let v0 = VertexSet::singleton(0);
        let v1 = VertexSet::range(1, 4);
        assert_eq!(t.cross_sum(v0, v1).unwrap(), 9);
        assert_eq!(t.cross_product(v0, v1).unwrap(), BigUint::from(27u32));
        assert_eq!(t.cross_sum(VertexSet::EMPTY, v1).unwrap(), 0);
        assert_eq!(t.cross_product(VertexSet::EMPTY, v1).unwrap(), BigUint::one());
        let a = 5u32;
        let c = Multigraph::constant(5, a).unwrap();
        assert_eq!(c.cross_sum(VertexSet(0b11), VertexSet(0b11100)).unwrap(), 6 * u64::from(a));
        assert_eq!(c.cross_product(VertexSet(0b11), VertexSet(0b11100)).unwrap(), BigUint::from(a).pow(6));
    }

    #[test]
    fn degrees() {
        let c = Multigraph::constant(5, 3).unwrap();
        assert_eq!(c.degree(0).unwrap(), 12);
        assert_eq!(c.product_degree(4).unwrap(), BigUint::from(81u32));
        let single = Multigraph::constant(1, 7).unwrap();
        assert_eq!(single.degree(0).unwrap(), 0);
        assert_eq!(single.product_degree(0).unwrap(), BigUint::one());
        let t = t221(&[1, 3]);
        assert_eq!(t.degree(0).unwrap(), 9);
        assert_eq!(t.product_degree(0).unwrap(), BigUint::from(27u32));
    }

    #[test]
    fn levels() {
        let c = Multigraph::constant(5, 2).unwrap();
        assert_eq!(c.level_subgraph(2).edge_count(), 10);
        assert_eq!(c.level_subgraph(3).edge_count(), 0);

        let t = t221(&[2, 3]);
        let top = t.level_subgraph(3);
        assert_eq!(top.edge_count(), 6);
        for u in 0..2 {
            for v in 2..5 {
                assert!(top.has_edge(u, v));
            }
        }
        let total: usize = (0..=4).map(|m| t.level_subgraph(m).edge_count()).sum();
        assert_eq!(total, 10);
        assert_eq!(t.level_neighborhood(0, t.vertices(), 3).unwrap(), VertexSet::range(2, 5));
    }

    #[test]
    fn common_neighborhoods() {
        let t = build_trd(Params::new(2, 3, 1).unwrap(), &PartSizes::new(vec![3, 3, 3])).unwrap();
        let w = VertexSet::range(3, 9);
        assert_eq!(t.common_level_neighborhood(w, 3).unwrap(), VertexSet::range(0, 3));
        let single = VertexSet::singleton(4);
        assert_eq!(
            t.common_level_neighborhood(single, 3).unwrap(),
            t.level_neighborhood(4, t.vertices().difference(single), 3).unwrap()
        );
        let c = Multigraph::constant(6, 4).unwrap();
        assert_eq!(c.common_level_neighborhood(VertexSet(0b101), 4).unwrap(), VertexSet(0b111010));
        assert!(c.common_level_neighborhood(VertexSet::EMPTY, 4).is_err());
    }

    #[test]
    fn json_wire_format() {
        let t = t221(&[1, 2]);
        let text = t.to_json();
        assert_eq!(text, r#"{"n":3,"edges":[[0,1,3],[0,2,3],[1,2,2]]}"#);
        assert_eq!(Multigraph::from_json(&text).unwrap(), t);
        assert!(Multigraph::from_json(r#"{"n":3,"edges":[[0,1,3],[0,2,3]]}"#).is_err());
        assert!(Multigraph::from_json(r#"{"n":2,"edges":[[0,1,3],[0,1,3]]}"#).is_err());
        assert!(Multigraph::from_json(r#"{"n":2,"edges":[[1,0,3]]}"#).is_err());
    }
}
