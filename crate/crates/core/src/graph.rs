//! Simple undirected graphs on `0..n` with one neighbour bitset per vertex.
//!
//! Clique counting orders vertices by degeneracy and recurses over
//! forward-neighbourhood intersections. Graphs with at most 64 vertices take
//! a single-word path, which is what the exhaustive suites exercise.

use std::ops::Range;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::realmath;

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    adj: Vec<u64>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

/// Degrees of a graph in vertex order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeSequence(Vec<u64>);

impl DegreeSequence {
    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn max(&self) -> u64 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    /// `(Σ dᵖ)^(1/p)`; `p = f64::INFINITY` gives the maximum degree.
    pub fn norm(&self, p: f64) -> Result<f64> {
        realmath::lp_norm(&self.0, p)
    }

    /// `log₂ Σ dᵖ` for finite `p`.
    pub fn log2_power_sum(&self, p: f64) -> Result<f64> {
        realmath::log2_power_sum(&self.0, p)
    }
}

#[inline]
fn words_for(n: usize) -> usize {
    n.div_ceil(WORD).max(1)
}

/// Bits strictly above `v` within word `v / 64`.
#[inline]
fn above_mask(v: usize) -> u64 {
    u64::MAX.checked_shl((v % WORD) as u32 + 1).unwrap_or(0)
}

fn iter_bits(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(w, &word)| {
        let mut rest = word;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let b = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(w * WORD + b)
        })
    })
}

fn popcount(words: &[u64]) -> u64 {
    words.iter().map(|w| u64::from(w.count_ones())).sum()
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        let words = words_for(n);
        Self {
            n,
            words,
            adj: vec![0; n * words],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for a in 0..n {
            for b in a + 1..n {
                g.set_edge(a, b);
            }
        }
        g
    }

    /// Builds a graph from an edge list. Duplicate edges collapse; loops and
    /// out-of-range endpoints are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Self::empty(n);
        for (a, b) in edges {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    /// Decodes an edge bitmask where bit `i` is the `i`-th pair in
    /// lexicographic order `(0,1), (0,2), …, (n-2,n-1)`. Requires `n <= 11`.
    pub fn from_edge_mask(n: usize, mask: u64) -> Self {
        debug_assert!(n * n.saturating_sub(1) / 2 <= 64);
        let mut g = Self::empty(n);
        let mut bit = 0;
        for a in 0..n {
            for b in a + 1..n {
                if mask >> bit & 1 == 1 {
                    g.set_edge(a, b);
                }
                bit += 1;
            }
        }
        g
    }

    pub fn add_edge(&mut self, a: usize, b: usize) -> Result<()> {
        if a == b {
            return Err(invalid(format!("self-loop at vertex {a}")));
        }
        if a >= self.n || b >= self.n {
            return Err(invalid(format!("edge ({a}, {b}) out of range for n = {}", self.n)));
        }
        self.set_edge(a, b);
        Ok(())
    }

    #[inline]
    fn set_edge(&mut self, a: usize, b: usize) {
        self.adj[a * self.words + b / WORD] |= 1 << (b % WORD);
        self.adj[b * self.words + a / WORD] |= 1 << (a % WORD);
    }

    #[inline]
    fn row(&self, v: usize) -> &[u64] {
        &self.adj[v * self.words..(v + 1) * self.words]
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.n && b < self.n && self.row(a)[b / WORD] >> (b % WORD) & 1 == 1
    }

    pub fn degree(&self, v: usize) -> u64 {
        popcount(self.row(v))
    }

    pub fn degrees(&self) -> DegreeSequence {
        DegreeSequence((0..self.n).map(|v| self.degree(v)).collect())
    }

    pub fn edge_count(&self) -> u64 {
        (0..self.n).map(|v| self.degree(v)).sum::<u64>() / 2
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        iter_bits(self.row(v))
    }

    /// Edges `(a, b)` with `a < b` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |a| self.neighbors(a).filter(move |&b| b > a).map(move |b| (a, b)))
    }

    /// Vertex-disjoint union; `other`'s vertices are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.n;
        let mut g = Graph::empty(self.n + other.n);
        for (a, b) in self.edges() {
            g.set_edge(a, b);
        }
        for (a, b) in other.edges() {
            g.set_edge(a + shift, b + shift);
        }
        g
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.n {
            return Err(invalid("permutation length differs from vertex count"));
        }
        let mut seen = vec![false; self.n];
        for &v in perm {
            if v >= self.n || std::mem::replace(&mut seen[v], true) {
                return Err(invalid("not a permutation"));
            }
        }
        Graph::from_edges(self.n, self.edges().map(|(a, b)| (perm[a], perm[b])))
    }

    pub fn is_clique(&self, vertices: &[usize]) -> bool {
        vertices.iter().enumerate().all(|(i, &a)| {
            a < self.n && vertices[i + 1..].iter().all(|&b| self.has_edge(a, b))
        })
    }

    /// Smallest-last (degeneracy) vertex order.
    pub fn degeneracy_order(&self) -> Vec<usize> {
        let n = self.n;
        let mut deg: Vec<usize> = (0..n).map(|v| self.degree(v) as usize).collect();
        let max_deg = deg.iter().copied().max().unwrap_or(0);
        let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); max_deg + 1];
        for v in 0..n {
            buckets[deg[v]].push(v);
        }
        let mut removed = vec![false; n];
        let mut order = Vec::with_capacity(n);
        let mut low = 0;
        while order.len() < n {
            low = low.min(max_deg);
            while buckets[low].is_empty() {
                low += 1;
            }
            let v = buckets[low].pop().expect("non-empty bucket");
            if removed[v] || deg[v] != low {
                continue;
            }
            removed[v] = true;
            order.push(v);
            for u in self.neighbors(v) {
                if !removed[u] {
                    deg[u] -= 1;
                    buckets[deg[u]].push(u);
                    low = low.min(deg[u]);
                }
            }
        }
        order
    }
}

/// `ℓᵖ`-norm of the degree sequence; `p = f64::INFINITY` is the maximum degree.
pub fn degree_norm(g: &Graph, p: f64) -> Result<f64> {
    g.degrees().norm(p)
}

// ---------------------------------------------------------------------------
// Clique counting
// ---------------------------------------------------------------------------

/// Counts `k`-cliques among `cand` in a forward-oriented single-word graph
/// (`fwd[i]` holds only neighbours `> i`).
fn count_forward_u64(fwd: &[u64], cand: u64, k: usize) -> u64 {
    match k {
        0 => 1,
        1 => u64::from(cand.count_ones()),
        2 => {
            let mut total = 0;
            let mut rest = cand;
            while rest != 0 {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                total += u64::from((cand & fwd[i]).count_ones());
            }
            total
        }
        _ => {
            let mut total = 0;
            let mut rest = cand;
            while rest.count_ones() as usize >= k {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let next = cand & fwd[i];
                if next.count_ones() as usize >= k - 1 {
                    total += count_forward_u64(fwd, next, k - 1);
                }
            }
            total
        }
    }
}

/// Multi-word analogue of [`count_forward_u64`]; `fwd` has `words` words per row.
fn count_forward_words(fwd: &[u64], words: usize, cand: &[u64], k: usize) -> u64 {
    match k {
        0 => 1,
        1 => popcount(cand),
        _ => {
            let mut next = vec![0u64; words];
            let mut total = 0;
            for i in iter_bits(cand) {
                let row = &fwd[i * words..(i + 1) * words];
                let mut size = 0;
                for w in 0..words {
                    next[w] = cand[w] & row[w];
                    size += next[w].count_ones() as usize;
                }
                if size >= k - 1 {
                    total += count_forward_words(fwd, words, &next, k - 1);
                }
            }
            total
        }
    }
}

impl Graph {
    fn forward_u64(&self) -> Vec<u64> {
        (0..self.n).map(|v| self.adj[v] & above_mask(v)).collect()
    }

    /// Number of `k`-cliques inside the induced subgraph on the bitset
    /// `within` (words of length `self.words`).
    fn count_within(&self, within: &[u64], k: usize) -> u64 {
        if self.words == 1 {
            return count_forward_u64(&self.forward_u64(), within[0], k);
        }
        let mut fwd = self.adj.clone();
        for v in 0..self.n {
            let row = &mut fwd[v * self.words..(v + 1) * self.words];
            let w = v / WORD;
            row[..w].iter_mut().for_each(|x| *x = 0);
            row[w] &= above_mask(v);
        }
        count_forward_words(&fwd, self.words, within, k)
    }

    fn all_vertices(&self) -> Vec<u64> {
        let mut mask = vec![0u64; self.words];
        for v in 0..self.n {
            mask[v / WORD] |= 1 << (v % WORD);
        }
        mask
    }
}

/// Counts the `(t-1)`-cliques in the forward neighbourhood of one vertex
/// under a degeneracy order.
fn count_from_vertex(g: &Graph, pos: &[usize], v: usize, t: usize) -> u64 {
    let mut fwd: Vec<usize> = g.neighbors(v).filter(|&u| pos[u] > pos[v]).collect();
    if fwd.len() < t - 1 {
        return 0;
    }
    fwd.sort_unstable_by_key(|&u| pos[u]);
    let m = fwd.len();
    if m <= WORD {
        let local: Vec<u64> = (0..m)
            .map(|i| {
                (i + 1..m)
                    .filter(|&j| g.has_edge(fwd[i], fwd[j]))
                    .fold(0u64, |acc, j| acc | 1 << j)
            })
            .collect();
        let all = if m == WORD { u64::MAX } else { (1u64 << m) - 1 };
        count_forward_u64(&local, all, t - 1)
    } else {
        let words = words_for(m);
        let mut local = vec![0u64; m * words];
        for i in 0..m {
            for j in i + 1..m {
                if g.has_edge(fwd[i], fwd[j]) {
                    local[i * words + j / WORD] |= 1 << (j % WORD);
                }
            }
        }
        let mut all = vec![0u64; words];
        for j in 0..m {
            all[j / WORD] |= 1 << (j % WORD);
        }
        count_forward_words(&local, words, &all, t - 1)
    }
}

/// Exact number of `t`-cliques `k_t(G)`; `k_1 = n`, `k_2 = |E|`.
pub fn count_cliques(g: &Graph, t: usize) -> u64 {
    match t {
        0 => 1,
        1 => g.n as u64,
        2 => g.edge_count(),
        _ if g.n <= WORD => count_forward_u64(&g.forward_u64(), g.all_vertices()[0], t),
        _ => {
            let order = g.degeneracy_order();
            let mut pos = vec![0; g.n];
            for (i, &v) in order.iter().enumerate() {
                pos[v] = i;
            }
            if g.n >= 512 {
                (0..g.n).into_par_iter().map(|v| count_from_vertex(g, &pos, v, t)).sum()
            } else {
                (0..g.n).map(|v| count_from_vertex(g, &pos, v, t)).sum()
            }
        }
    }
}

fn visit_cliques<F: FnMut(&[usize])>(g: &Graph, cand: &[u64], k: usize, stack: &mut Vec<usize>, visit: &mut F) {
    if k == 0 {
        visit(stack);
        return;
    }
    let mut next = vec![0u64; g.words];
    for v in iter_bits(cand) {
        let row = g.row(v);
        let w = v / WORD;
        let mut size = 0;
        for i in 0..g.words {
            next[i] = if i < w {
                0
            } else if i == w {
                cand[i] & row[i] & above_mask(v)
            } else {
                cand[i] & row[i]
            };
            size += next[i].count_ones() as usize;
        }
        if size + 1 >= k {
            stack.push(v);
            visit_cliques(g, &next, k - 1, stack, visit);
            stack.pop();
        }
    }
}

/// Calls `visit` once per `t`-clique, as a sorted vertex slice, in
/// lexicographic order.
pub fn for_each_clique<F: FnMut(&[usize])>(g: &Graph, t: usize, mut visit: F) {
    let mut stack = Vec::with_capacity(t);
    visit_cliques(g, &g.all_vertices(), t, &mut stack, &mut visit);
}

/// All `t`-cliques as sorted vertex vectors, lexicographically ordered.
pub fn list_cliques(g: &Graph, t: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for_each_clique(g, t, |c| out.push(c.to_vec()));
    out
}

/// Number of `t`-cliques containing the clique `s`.
pub fn clique_extension_count(g: &Graph, s: &[usize], t: usize) -> Result<u64> {
    let mut sorted = s.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != s.len() || !g.is_clique(&sorted) {
        return Err(Error::NotAClique(s.to_vec()));
    }
    if s.len() > t {
        return Err(invalid(format!("|S| = {} exceeds t = {t}", s.len())));
    }
    let mut common = g.all_vertices();
    for &v in s {
        for (c, r) in common.iter_mut().zip(g.row(v)) {
            *c &= r;
        }
    }
    Ok(g.count_within(&common, t - s.len()))
}

// ---------------------------------------------------------------------------
// Constructions
// ---------------------------------------------------------------------------

/// Vertex-disjoint union of complete graphs, laid out in consecutive blocks.
pub fn construct_disjoint_cliques(sizes: &[usize]) -> Graph {
    let n = sizes.iter().sum();
    let mut g = Graph::empty(n);
    let mut start = 0;
    for &size in sizes {
        for a in start..start + size {
            for b in a + 1..start + size {
                g.set_edge(a, b);
            }
        }
        start += size;
    }
    g
}

/// `q` copies of `K_{Δ+1}` followed by one `K_r`, where `n = q(Δ+1) + r`.
pub fn construct_gls(n: usize, max_degree: usize) -> Graph {
    let block = max_degree + 1;
    let mut sizes = vec![block; n / block];
    if !n.is_multiple_of(block) {
        sizes.push(n % block);
    }
    construct_disjoint_cliques(&sizes)
}

// ---------------------------------------------------------------------------
// Enumeration and sampling
// ---------------------------------------------------------------------------

/// Largest vertex count accepted by [`enumerate_all_graphs`].
pub const MAX_ENUMERATION_N: usize = 8;

/// Every labeled graph on `n` vertices, ordered by edge bitmask (see
/// [`Graph::from_edge_mask`]).
#[derive(Clone, Debug)]
pub struct AllGraphs {
    n: usize,
    masks: Range<u64>,
}

impl AllGraphs {
    pub fn total(&self) -> u64 {
        self.masks.end - self.masks.start
    }

    /// The same enumeration restricted to a bitmask range.
    pub fn range(n: usize, masks: Range<u64>) -> Self {
        Self { n, masks }
    }
}

impl Iterator for AllGraphs {
    type Item = (u64, Graph);

    fn next(&mut self) -> Option<Self::Item> {
        let mask = self.masks.next()?;
        Some((mask, Graph::from_edge_mask(self.n, mask)))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        self.masks.size_hint()
    }
}

pub fn graph_mask_count(n: usize) -> u64 {
    1u64 << (n * n.saturating_sub(1) / 2)
}

pub fn enumerate_all_graphs(n: usize) -> Result<AllGraphs> {
    if n > MAX_ENUMERATION_N {
        return Err(Error::TooLarge(format!(
            "exhaustive enumeration supports n <= {MAX_ENUMERATION_N}, got {n}"
        )));
    }
    Ok(AllGraphs {
        n,
        masks: 0..graph_mask_count(n),
    })
}

/// Erdős–Rényi `G(n, q)` drawn from `rng`, pairs visited lexicographically.
pub fn random_graph_with<R: Rng>(n: usize, edge_prob: f64, rng: &mut R) -> Result<Graph> {
    if !(0.0..=1.0).contains(&edge_prob) {
        return Err(invalid(format!("edge probability must lie in [0, 1], got {edge_prob}")));
    }
    let mut g = Graph::empty(n);
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(edge_prob) {
                g.set_edge(a, b);
            }
        }
    }
    Ok(g)
}

/// Erdős–Rényi `G(n, q)`; identical output for identical seeds.
pub fn random_graph(n: usize, edge_prob: f64, seed: u64) -> Result<Graph> {
    random_graph_with(n, edge_prob, &mut ChaCha8Rng::seed_from_u64(seed))
}
