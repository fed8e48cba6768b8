//! `r`-uniform hypergraphs: subset degrees, `(j, p)`-norms, hyperclique
//! counting, complete constructions, and exhaustive enumeration.

use std::collections::{BTreeSet, HashMap};
use std::ops::Range;

use itertools::Itertools;

use crate::error::{invalid, Error, Result};
use crate::realmath::{self, binom_int};

/// Largest number of candidate edges `C(n, r)` that [`enumerate_all_hypergraphs`] accepts.
pub const MAX_ENUMERATION_BITS: u64 = 24;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Hypergraph {
    n: usize,
    r: usize,
    edges: BTreeSet<Vec<usize>>,
}

/// Calls `pred` on every `k`-subset of `items` (in lexicographic position
/// order) until it returns `false`. Returns whether all calls returned `true`.
fn all_subsets<F: FnMut(&[usize]) -> bool>(items: &[usize], k: usize, buf: &mut Vec<usize>, pred: &mut F) -> bool {
    fn go<F: FnMut(&[usize]) -> bool>(items: &[usize], start: usize, k: usize, buf: &mut Vec<usize>, pred: &mut F) -> bool {
        if buf.len() == k {
            return pred(buf);
        }
        let need = k - buf.len();
        for i in start..=items.len() - need {
            buf.push(items[i]);
            let ok = go(items, i + 1, k, buf, pred);
            buf.pop();
            if !ok {
                return false;
            }
        }
        true
    }
    if k > items.len() {
        return true;
    }
    buf.clear();
    go(items, 0, k, buf, pred)
}

/// Colexicographic comparison of sorted sets.
fn colex(a: &[usize], b: &[usize]) -> std::cmp::Ordering {
    a.iter().rev().cmp(b.iter().rev())
}

impl Hypergraph {
    pub fn new(n: usize, r: usize) -> Result<Self> {
        if r == 0 {
            return Err(invalid("uniformity r must be positive"));
        }
        Ok(Self {
            n,
            r,
            edges: BTreeSet::new(),
        })
    }

    /// Builds a hypergraph from edges given in any vertex order; repeated
    /// edges collapse.
    pub fn from_edges<I, E>(n: usize, r: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: AsRef<[usize]>,
    {
        let mut h = Self::new(n, r)?;
        for e in edges {
            h.add_edge(e.as_ref())?;
        }
        Ok(h)
    }

    /// Inserts an edge; returns `false` if it was already present.
    pub fn add_edge(&mut self, edge: &[usize]) -> Result<bool> {
        let sorted = self.normalize(edge, self.r)?;
        Ok(self.edges.insert(sorted))
    }

    fn normalize(&self, set: &[usize], size: usize) -> Result<Vec<usize>> {
        if set.len() != size {
            return Err(invalid(format!("expected {size} vertices, got {:?}", set)));
        }
        let mut sorted = set.to_vec();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(invalid(format!("repeated vertex in {:?}", set)));
        }
        if let Some(&v) = sorted.last() {
            if v >= self.n {
                return Err(invalid(format!("vertex {v} out of range for n = {}", self.n)));
            }
        }
        Ok(sorted)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as sorted vertex vectors in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = &[usize]> + '_ {
        self.edges.iter().map(Vec::as_slice)
    }

    /// Membership test for a sorted `r`-set.
    pub fn contains(&self, sorted_edge: &[usize]) -> bool {
        self.edges.contains(sorted_edge)
    }

    /// Vertices lying in at least one edge, ascending.
    pub fn active_vertices(&self) -> Vec<usize> {
        let mut seen = vec![false; self.n];
        for e in &self.edges {
            for &v in e {
                seen[v] = true;
            }
        }
        (0..self.n).filter(|&v| seen[v]).collect()
    }

    fn check_subset_size(&self, j: usize) -> Result<()> {
        if j == 0 || j >= self.r {
            return Err(invalid(format!("subset size j must satisfy 1 <= j < r = {}, got {j}", self.r)));
        }
        Ok(())
    }

    /// `deg(S)`: the number of edges containing the `j`-set `S`, `j < r`.
    pub fn subset_degree(&self, s: &[usize]) -> Result<u64> {
        if s.len() >= self.r {
            return Err(invalid(format!("|S| = {} must be below r = {}", s.len(), self.r)));
        }
        let sorted = self.normalize(s, s.len())?;
        let count = self
            .edges
            .iter()
            .filter(|e| sorted.iter().all(|v| e.binary_search(v).is_ok()))
            .count();
        Ok(count as u64)
    }

    /// Every `j`-set of positive degree with its degree, in colexicographic
    /// order. Sets of degree zero are omitted.
    pub fn subset_degrees(&self, j: usize) -> Result<Vec<(Vec<usize>, u64)>> {
        self.check_subset_size(j)?;
        let mut counts: HashMap<Vec<usize>, u64> = HashMap::new();
        let mut buf = Vec::with_capacity(j);
        for e in &self.edges {
            all_subsets(e, j, &mut buf, &mut |s| {
                *counts.entry(s.to_vec()).or_insert(0) += 1;
                true
            });
        }
        let mut out: Vec<_> = counts.into_iter().collect();
        out.sort_unstable_by(|a, b| colex(&a.0, &b.0));
        Ok(out)
    }

    /// Positive subset degrees as a multiset, sorted ascending.
    pub fn degree_profile(&self, j: usize) -> Result<Vec<u64>> {
        let mut degs: Vec<u64> = self.subset_degrees(j)?.into_iter().map(|(_, d)| d).collect();
        degs.sort_unstable();
        Ok(degs)
    }

    /// The `(j, p)`-norm `(Σ_{|S| = j} deg(S)ᵖ)^(1/p)`.
    pub fn hyper_norm(&self, j: usize, p: f64) -> Result<f64> {
        realmath::lp_norm(&self.degree_profile(j)?, p)
    }

    /// Whether adding `v` (larger than every element of `chosen`) keeps every
    /// `r`-subset of `chosen ∪ {v}` through `v` an edge.
    fn extends(&self, chosen: &[usize], v: usize, buf: &mut Vec<usize>) -> bool {
        if chosen.len() + 1 < self.r {
            return true;
        }
        all_subsets(chosen, self.r - 1, buf, &mut |s| {
            let mut e = s.to_vec();
            e.push(v);
            self.edges.contains(&e)
        })
    }

    fn visit_hypercliques<F: FnMut(&[usize])>(&self, t: usize, visit: &mut F) {
        fn go<F: FnMut(&[usize])>(
            h: &Hypergraph,
            active: &[usize],
            start: usize,
            t: usize,
            chosen: &mut Vec<usize>,
            buf: &mut Vec<usize>,
            visit: &mut F,
        ) {
            if chosen.len() == t {
                visit(chosen);
                return;
            }
            let need = t - chosen.len();
            if active.len() < start + need {
                return;
            }
            for i in start..=active.len() - need {
                let v = active[i];
                if h.extends(chosen, v, buf) {
                    chosen.push(v);
                    go(h, active, i + 1, t, chosen, buf, visit);
                    chosen.pop();
                }
            }
        }
        let active = self.active_vertices();
        let mut chosen = Vec::with_capacity(t);
        let mut buf = Vec::with_capacity(self.r);
        go(self, &active, 0, t, &mut chosen, &mut buf, visit);
    }

    /// `k^r_t(H)`: `t`-sets all of whose `r`-subsets are edges. Requires `t >= r`.
    pub fn count_hypercliques(&self, t: usize) -> Result<u64> {
        if t < self.r {
            return Err(invalid(format!("t = {t} must be at least r = {}", self.r)));
        }
        let mut count = 0;
        self.visit_hypercliques(t, &mut |_| count += 1);
        Ok(count)
    }

    /// All `t`-hypercliques, sorted, in lexicographic order.
    pub fn list_hypercliques(&self, t: usize) -> Result<Vec<Vec<usize>>> {
        if t < self.r {
            return Err(invalid(format!("t = {t} must be at least r = {}", self.r)));
        }
        let mut out = Vec::new();
        self.visit_hypercliques(t, &mut |c| out.push(c.to_vec()));
        Ok(out)
    }

    /// Vertex-disjoint union; `other`'s vertices are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Hypergraph) -> Result<Hypergraph> {
        if self.r != other.r {
            return Err(invalid("uniformities differ"));
        }
        let shift = self.n;
        let shifted = other.edges.iter().map(|e| e.iter().map(|v| v + shift).collect::<Vec<_>>());
        Hypergraph::from_edges(self.n + other.n, self.r, self.edges.iter().cloned().chain(shifted))
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Hypergraph> {
        if perm.len() != self.n || !perm.iter().all(|&v| v < self.n) || perm.iter().unique().count() != self.n {
            return Err(invalid("not a permutation of the vertex set"));
        }
        Hypergraph::from_edges(
            self.n,
            self.r,
            self.edges.iter().map(|e| e.iter().map(|&v| perm[v]).collect::<Vec<_>>()),
        )
    }
}

/// `K_u^(r)`: every `r`-subset of `u` vertices.
pub fn construct_complete_hyper(u: usize, r: usize) -> Result<Hypergraph> {
    construct_disjoint_complete_hyper(1, u, r)
}

/// `m` vertex-disjoint copies of `K_u^(r)` in consecutive blocks.
pub fn construct_disjoint_complete_hyper(m: usize, u: usize, r: usize) -> Result<Hypergraph> {
    if u < r {
        return Err(invalid(format!("need u >= r, got u = {u}, r = {r}")));
    }
    let edges = (0..m).flat_map(|block| (block * u..(block + 1) * u).combinations(r));
    Hypergraph::from_edges(m * u, r, edges)
}

/// Every labeled `r`-uniform hypergraph on `n` vertices, as
/// `(edge mask, hypergraph)`; bit `i` selects the `i`-th `r`-subset in
/// lexicographic order.
#[derive(Clone, Debug)]
pub struct AllHypergraphs {
    n: usize,
    r: usize,
    candidates: Vec<Vec<usize>>,
    masks: Range<u64>,
}

impl AllHypergraphs {
    pub fn total(&self) -> u64 {
        self.masks.end - self.masks.start
    }

    pub fn candidates(&self) -> &[Vec<usize>] {
        &self.candidates
    }

    /// The same enumeration restricted to a bitmask range.
    pub fn with_range(mut self, masks: Range<u64>) -> Self {
        self.masks = masks;
        self
    }

    pub fn decode(&self, mask: u64) -> Hypergraph {
        Hypergraph {
            n: self.n,
            r: self.r,
            edges: self
                .candidates
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, e)| e.clone())
                .collect(),
        }
    }
}

impl Iterator for AllHypergraphs {
    type Item = (u64, Hypergraph);

    fn next(&mut self) -> Option<Self::Item> {
        let mask = self.masks.next()?;
        Some((mask, self.decode(mask)))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        self.masks.size_hint()
    }
}

pub fn enumerate_all_hypergraphs(n: usize, r: usize) -> Result<AllHypergraphs> {
    if r == 0 {
        return Err(invalid("uniformity r must be positive"));
    }
    let bits = binom_int(n as u64, r as u64);
    if bits > u128::from(MAX_ENUMERATION_BITS) {
        return Err(Error::TooLarge(format!(
            "C({n}, {r}) = {bits} candidate edges exceeds {MAX_ENUMERATION_BITS}"
        )));
    }
    Ok(AllHypergraphs {
        n,
        r,
        candidates: (0..n).combinations(r).collect(),
        masks: 0..1u64 << bits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_hypercliques(h: &Hypergraph, t: usize) -> u64 {
        (0..h.n())
            .combinations(t)
            .filter(|c| c.iter().copied().combinations(h.r()).all(|e| h.contains(&e)))
            .count() as u64
    }

    fn random_hyper(n: usize, r: usize, mask: u64) -> Hypergraph {
        let all: Vec<_> = (0..n).combinations(r).collect();
        let edges = all.iter().enumerate().filter(|(i, _)| mask >> (i % 64) & 1 == 1).map(|(_, e)| e.clone());
        Hypergraph::from_edges(n, r, edges).unwrap()
    }

    #[test]
    fn subset_degree_examples() {
        let k5 = construct_complete_hyper(5, 3).unwrap();
        for v in 0..5 {
            assert_eq!(k5.subset_degree(&[v]).unwrap(), 6);
        }
        let single = Hypergraph::from_edges(3, 3, [[0, 1, 2]]).unwrap();
        assert_eq!(single.subset_degree(&[0]).unwrap(), 1);
        assert_eq!(single.subset_degree(&[2, 1]).unwrap(), 1);
        assert!(single.subset_degree(&[0, 1, 2]).is_err());
        assert!(single.subset_degree(&[0, 0]).is_err());
    }

    #[test]
    fn norm_examples() {
        let k5 = construct_complete_hyper(5, 3).unwrap();
        assert_eq!(k5.hyper_norm(1, 1.0).unwrap(), 30.0);
        assert_eq!(k5.hyper_norm(2, 1.0).unwrap(), 30.0);
        let empty = Hypergraph::new(6, 3).unwrap();
        assert_eq!(empty.hyper_norm(1, 2.0).unwrap(), 0.0);
        assert_eq!(empty.hyper_norm(2, 0.5).unwrap(), 0.0);
        assert!(k5.hyper_norm(1, 0.0).is_err());
        assert!(k5.hyper_norm(3, 1.0).is_err());
        assert!(k5.hyper_norm(0, 1.0).is_err());
    }

    #[test]
    fn hyperclique_examples() {
        let k5 = construct_complete_hyper(5, 3).unwrap();
        assert_eq!(k5.count_hypercliques(4).unwrap(), 5);
        let mut minus: Vec<Vec<usize>> = k5.edges().map(<[usize]>::to_vec).collect();
        minus.retain(|e| e != &[0, 1, 2]);
        let h = Hypergraph::from_edges(5, 3, minus).unwrap();
        assert_eq!(h.count_hypercliques(4).unwrap(), naive_hypercliques(&h, 4));
        assert_eq!(h.count_hypercliques(4).unwrap(), 3);
        assert!(k5.count_hypercliques(2).is_err());
        assert_eq!(k5.count_hypercliques(3).unwrap(), 10);
    }

    #[test]
    fn hypercliques_match_naive() {
        for (n, r) in [(6, 3), (7, 3), (8, 3), (7, 4)] {
            for seed in 0..25u64 {
                let mask = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (seed << 7);
                let h = random_hyper(n, r, mask);
                for t in r..=r + 2 {
                    assert_eq!(h.count_hypercliques(t).unwrap(), naive_hypercliques(&h, t), "n={n} r={r} t={t}");
                }
            }
        }
    }

    #[test]
    fn complete_counts() {
        for r in 2..=4usize {
            for u in r..=8usize {
                let h = construct_complete_hyper(u, r).unwrap();
                assert_eq!(h.edge_count() as u128, binom_int(u as u64, r as u64));
                for t in r..=u {
                    assert_eq!(u128::from(h.count_hypercliques(t).unwrap()), binom_int(u as u64, t as u64));
                }
            }
        }
        assert_eq!(construct_complete_hyper(4, 3).unwrap().edge_count(), 4);
        let two = construct_disjoint_complete_hyper(2, 4, 3).unwrap();
        assert_eq!(two.edge_count(), 8);
        assert_eq!(two.count_hypercliques(4).unwrap(), 2);
        assert_eq!(construct_complete_hyper(3, 3).unwrap().edge_count(), 1);
        assert!(construct_complete_hyper(2, 3).is_err());
    }

    #[test]
    fn norm_at_r2_matches_graph_norm() {
        use crate::graph::{degree_norm, random_graph};
        for seed in 0..30 {
            let g = random_graph(9, 0.45, seed).unwrap();
            let h = Hypergraph::from_edges(9, 2, g.edges().map(|(a, b)| [a, b])).unwrap();
            for p in [0.5, 1.0, 2.0, 3.5] {
                let a = degree_norm(&g, p).unwrap();
                let b = h.hyper_norm(1, p).unwrap();
                assert!((a - b).abs() <= 1e-12 * a.max(1.0));
            }
            assert_eq!(h.count_hypercliques(3).unwrap(), crate::graph::count_cliques(&g, 3));
        }
    }

    #[test]
    fn degree_sum_double_counts_edges() {
        for n in 3..=5usize {
            for (_, h) in enumerate_all_hypergraphs(n, 3).unwrap() {
                for j in 1..3usize {
                    let sum: u64 = h.subset_degrees(j).unwrap().iter().map(|(_, d)| d).sum();
                    assert_eq!(u128::from(sum), binom_int(3, j as u64) * h.edge_count() as u128);
                }
            }
        }
    }

    #[test]
    fn subset_degrees_colex_and_consistent() {
        let h = random_hyper(7, 3, 0xDEAD_BEEF);
        let degs = h.subset_degrees(2).unwrap();
        assert!(degs.windows(2).all(|w| colex(&w[0].0, &w[1].0).is_lt()));
        for (s, d) in &degs {
            assert_eq!(h.subset_degree(s).unwrap(), *d);
        }
    }

    #[test]
    fn enumeration_sizes() {
        assert_eq!(enumerate_all_hypergraphs(4, 3).unwrap().count(), 16);
        assert_eq!(enumerate_all_hypergraphs(5, 3).unwrap().total(), 1024);
        assert_eq!(enumerate_all_hypergraphs(6, 3).unwrap().total(), 1 << 20);
        assert!(enumerate_all_hypergraphs(8, 3).is_err());
        let all: BTreeSet<_> = enumerate_all_hypergraphs(4, 3).unwrap().map(|(_, h)| h.edges).collect();
        assert_eq!(all.len(), 16);
    }

    #[test]
    fn additivity_over_disjoint_union() {
        for seed in 0..20u64 {
            let a = random_hyper(6, 3, seed.wrapping_mul(0x2545_F491_4F6C_DD1D));
            let b = random_hyper(5, 3, seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) | 0xFF);
            let u = a.disjoint_union(&b).unwrap();
            for t in 3..=5 {
                assert_eq!(
                    u.count_hypercliques(t).unwrap(),
                    a.count_hypercliques(t).unwrap() + b.count_hypercliques(t).unwrap()
                );
            }
        }
    }

    #[test]
    fn rejects_malformed_edges() {
        assert!(Hypergraph::from_edges(4, 3, [[0, 1]]).is_err());
        assert!(Hypergraph::from_edges(4, 3, [[0, 1, 1]]).is_err());
        assert!(Hypergraph::from_edges(4, 3, [[0, 1, 4]]).is_err());
        let mut h = Hypergraph::new(4, 3).unwrap();
        assert!(h.add_edge(&[2, 0, 1]).unwrap());
        assert!(!h.add_edge(&[0, 1, 2]).unwrap());
    }
}
