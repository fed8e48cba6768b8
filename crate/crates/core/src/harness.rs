//! Exhaustive and randomised checks of the clique bounds.
//!
//! Every instance is checked at its own exact norm, the smallest admissible
//! `C`. Work is split into chunks of consecutive instance ids, each chunk is
//! tallied sequentially, and chunk tallies are merged in id order, so a
//! report depends only on its parameters and seed.

use std::collections::HashMap;
use std::time::Instant;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{self, BoundResult, Regime};
use crate::error::{invalid, Error, Result};
use crate::graph::{self, count_cliques, degree_norm, Graph};
use crate::hypergraph::{self, construct_complete_hyper, MAX_ENUMERATION_BITS};
use crate::realmath::{self, binom_int, lp_norm, CliqueParams, HyperParams};

/// A count may exceed its bound by this much (absolute, scaled up for bounds above 1).
pub const VIOLATION_TOL: f64 = 1e-9;
/// Default largest `n` for exhaustive graph runs.
pub const DEFAULT_MAX_GRAPH_N: usize = 7;
/// Default largest number of candidate edges for exhaustive hypergraph runs.
pub const DEFAULT_MAX_HYPER_BITS: u64 = 20;

const CHUNK: u64 = 1 << 14;
const RANDOM_CHUNK: u64 = 256;

/// One instance evaluated at one exponent.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    /// Edge bitmask for exhaustive suites, sample index for random ones.
    pub instance: u64,
    pub p: f64,
    pub k_t: u64,
    pub bound: f64,
    pub norm: f64,
}

impl Observation {
    pub fn ratio(&self) -> f64 {
        self.k_t as f64 / self.bound
    }

    pub fn is_violation(&self) -> bool {
        self.k_t as f64 > self.bound + VIOLATION_TOL * self.bound.max(1.0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentStats {
    pub p: f64,
    pub checked: u64,
    pub violations: u64,
    /// Instances with `k_t = 0` and bound `0`, left out of the ratio.
    pub skipped_zero: u64,
    pub max_ratio: f64,
    pub witness: Option<Observation>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub instances_checked: u64,
    pub violations: Vec<Observation>,
    /// Largest `k_t / bound` over checks with a positive bound; `0` if none.
    pub max_ratio: f64,
    pub witness: Option<Observation>,
    pub per_p: Vec<ExponentStats>,
    /// Samples meeting and failing the fixed-`n` hypothesis, when applicable.
    pub precondition_met: Option<u64>,
    pub precondition_failed: Option<u64>,
    pub elapsed_seconds: f64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.max_ratio <= 1.0 + VIOLATION_TOL
    }

    /// Equality ignoring wall-clock time.
    pub fn same_outcome(&self, other: &Self) -> bool {
        let mut a = self.clone();
        a.elapsed_seconds = other.elapsed_seconds;
        &a == other
    }
}

/// Whether `a` should replace `b` as the witness: larger ratio, then smaller id.
fn outranks(a: &Observation, b: &Observation) -> bool {
    let (ra, rb) = (a.ratio(), b.ratio());
    ra > rb || (ra == rb && a.instance < b.instance)
}

#[derive(Clone, Debug, Default)]
struct ExponentTally {
    checked: u64,
    violations: u64,
    skipped_zero: u64,
    best: Option<Observation>,
}

impl ExponentTally {
    fn offer(&mut self, obs: &Observation) {
        if self.best.as_ref().is_none_or(|b| outranks(obs, b)) {
            self.best = Some(obs.clone());
        }
    }

    fn merge(&mut self, other: ExponentTally) {
        self.checked += other.checked;
        self.violations += other.violations;
        self.skipped_zero += other.skipped_zero;
        if let Some(b) = other.best {
            self.offer(&b);
        }
    }
}

#[derive(Clone, Debug)]
struct Tally {
    instances: u64,
    per_p: Vec<ExponentTally>,
    violations: Vec<(usize, Observation)>,
    precondition_met: u64,
    precondition_failed: u64,
}

impl Tally {
    fn new(exponents: usize) -> Self {
        Self {
            instances: 0,
            per_p: vec![ExponentTally::default(); exponents],
            violations: Vec::new(),
            precondition_met: 0,
            precondition_failed: 0,
        }
    }

    fn record(&mut self, pi: usize, obs: Observation) {
        let slot = &mut self.per_p[pi];
        slot.checked += 1;
        if obs.is_violation() {
            slot.violations += 1;
            self.violations.push((pi, obs));
            return;
        }
        if obs.bound > 0.0 {
            slot.offer(&obs);
        } else {
            slot.skipped_zero += 1;
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.instances += other.instances;
        for (a, b) in self.per_p.iter_mut().zip(other.per_p) {
            a.merge(b);
        }
        self.violations.extend(other.violations);
        self.precondition_met += other.precondition_met;
        self.precondition_failed += other.precondition_failed;
        self
    }

    fn finish(mut self, suite: String, p_list: &[f64], fixed_n: bool, started: Instant) -> VerificationReport {
        self.violations.sort_by_key(|(pi, o)| (o.instance, *pi));
        let mut witness: Option<Observation> = None;
        for slot in &self.per_p {
            if let Some(b) = &slot.best {
                if witness.as_ref().is_none_or(|w| outranks(b, w)) {
                    witness = Some(b.clone());
                }
            }
        }
        let per_p = self
            .per_p
            .into_iter()
            .zip(p_list)
            .map(|(s, &p)| ExponentStats {
                p,
                checked: s.checked,
                violations: s.violations,
                skipped_zero: s.skipped_zero,
                max_ratio: s.best.as_ref().map_or(0.0, Observation::ratio),
                witness: s.best,
            })
            .collect();
        VerificationReport {
            suite,
            instances_checked: self.instances,
            violations: self.violations.into_iter().map(|(_, o)| o).collect(),
            max_ratio: witness.as_ref().map_or(0.0, Observation::ratio),
            witness,
            per_p,
            precondition_met: fixed_n.then_some(self.precondition_met),
            precondition_failed: fixed_n.then_some(self.precondition_failed),
            elapsed_seconds: started.elapsed().as_secs_f64(),
        }
    }
}

/// Runs `work` over `[0, total)` in chunks and merges the tallies in order.
fn run_chunked<F>(total: u64, chunk: u64, exponents: usize, work: F) -> Result<Tally>
where
    F: Fn(std::ops::Range<u64>) -> Result<Tally> + Sync,
{
    let chunks: Vec<_> = (0..total.div_ceil(chunk))
        .map(|i| i * chunk..((i + 1) * chunk).min(total))
        .collect();
    let tallies: Vec<Tally> = chunks.into_par_iter().map(&work).collect::<Result<_>>()?;
    Ok(tallies.into_iter().fold(Tally::new(exponents), Tally::merge))
}

fn check_exponents(p_list: &[f64]) -> Result<()> {
    if p_list.is_empty() {
        return Err(invalid("at least one exponent p is required"));
    }
    if let Some(p) = p_list.iter().find(|p| !(**p > 0.0) || !p.is_finite()) {
        return Err(invalid(format!("exponents must be positive and finite, got {p}")));
    }
    Ok(())
}

/// Bounds are a function of the degree multiset, so they are memoised on it.
struct BoundCache<F> {
    compute: F,
    memo: HashMap<(usize, Vec<u64>), (f64, f64)>,
}

impl<F: Fn(usize, &[u64]) -> Result<(f64, f64)>> BoundCache<F> {
    fn new(compute: F) -> Self {
        Self {
            compute,
            memo: HashMap::new(),
        }
    }

    /// `(norm, bound)` for exponent index `pi` and a sorted degree profile.
    fn get(&mut self, pi: usize, profile: Vec<u64>) -> Result<(f64, f64)> {
        if let Some(&v) = self.memo.get(&(pi, profile.clone())) {
            return Ok(v);
        }
        let v = (self.compute)(pi, &profile)?;
        self.memo.insert((pi, profile), v);
        Ok(v)
    }
}

#[allow(clippy::type_complexity)]
fn graph_bound_cache(t: u32, p_list: &[f64]) -> BoundCache<impl Fn(usize, &[u64]) -> Result<(f64, f64)> + '_> {
    BoundCache::new(move |pi: usize, degrees: &[u64]| {
        let p = p_list[pi];
        let norm = lp_norm(degrees, p)?;
        Ok((norm, bounds::clique_bound(p, t, norm)?.bound))
    })
}

fn tally_graph(
    tally: &mut Tally,
    cache: &mut BoundCache<impl Fn(usize, &[u64]) -> Result<(f64, f64)>>,
    instance: u64,
    g: &Graph,
    t: usize,
    p_list: &[f64],
) -> Result<()> {
    let k_t = count_cliques(g, t);
    let mut profile = g.degrees().as_slice().to_vec();
    profile.sort_unstable();
    tally.instances += 1;
    for (pi, &p) in p_list.iter().enumerate() {
        let (norm, bound) = cache.get(pi, profile.clone())?;
        tally.record(pi, Observation { instance, p, k_t, bound, norm });
    }
    Ok(())
}

/// Checks the clique bound on every labeled graph with `n` vertices.
///
/// `n` above [`DEFAULT_MAX_GRAPH_N`] needs `allow_large`, which raises the
/// limit to [`graph::MAX_ENUMERATION_N`].
pub fn verify_exhaustive_graphs(n: usize, t: u32, p_list: &[f64], allow_large: bool) -> Result<VerificationReport> {
    let started = Instant::now();
    check_exponents(p_list)?;
    CliqueParams::new(t, p_list[0])?;
    let limit = if allow_large { graph::MAX_ENUMERATION_N } else { DEFAULT_MAX_GRAPH_N };
    if n > limit {
        return Err(Error::TooLarge(format!("exhaustive graph runs allow n <= {limit}, got {n}")));
    }
    let total = graph::enumerate_all_graphs(n)?.total();
    let tally = run_chunked(total, CHUNK, p_list.len(), |range| {
        let mut tally = Tally::new(p_list.len());
        let mut cache = graph_bound_cache(t, p_list);
        for (mask, g) in graph::AllGraphs::range(n, range) {
            tally_graph(&mut tally, &mut cache, mask, &g, t as usize, p_list)?;
        }
        Ok(tally)
    })?;
    Ok(tally.finish(format!("graphs-exhaustive n={n} t={t}"), p_list, false, started))
}

/// Independent stream for sample `index` of a seeded run.
fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Checks the clique bound on `samples` seeded `G(n, q)` graphs.
pub fn verify_random_graphs(
    n: usize,
    samples: u64,
    edge_prob: f64,
    t: u32,
    p_list: &[f64],
    seed: u64,
) -> Result<VerificationReport> {
    let started = Instant::now();
    check_exponents(p_list)?;
    CliqueParams::new(t, p_list[0])?;
    if n > 64 {
        return Err(invalid(format!("random graph runs allow n <= 64, got {n}")));
    }
    if !(0.0..=1.0).contains(&edge_prob) {
        return Err(invalid(format!("edge probability must lie in [0, 1], got {edge_prob}")));
    }
    let tally = run_chunked(samples, RANDOM_CHUNK, p_list.len(), |range| {
        let mut tally = Tally::new(p_list.len());
        let mut cache = graph_bound_cache(t, p_list);
        for i in range {
            let g = graph::random_graph_with(n, edge_prob, &mut sample_rng(seed, i))?;
            tally_graph(&mut tally, &mut cache, i, &g, t as usize, p_list)?;
        }
        Ok(tally)
    })?;
    Ok(tally.finish(
        format!("graphs-random n={n} q={edge_prob} t={t} seed={seed}"),
        p_list,
        false,
        started,
    ))
}

/// Precomputed incidence data for `r`-uniform hypergraphs on `n` vertices,
/// indexed by the candidate-edge bitmask of [`hypergraph::AllHypergraphs`].
struct HyperTables {
    /// For each candidate edge, the indices of its `j`-subsets.
    edge_subsets: Vec<Vec<usize>>,
    subset_count: usize,
    /// For each `t`-set, the mask of its `r`-subsets.
    clique_masks: Vec<u64>,
}

impl HyperTables {
    fn new(n: usize, r: usize, j: usize, t: usize) -> Self {
        let candidates: Vec<Vec<usize>> = (0..n).combinations(r).collect();
        let index: HashMap<Vec<usize>, usize> = (0..n).combinations(j).enumerate().map(|(i, s)| (s, i)).collect();
        let edge_index: HashMap<&[usize], usize> =
            candidates.iter().enumerate().map(|(i, e)| (e.as_slice(), i)).collect();
        let edge_subsets = candidates
            .iter()
            .map(|e| e.iter().copied().combinations(j).map(|s| index[&s]).collect())
            .collect();
        let clique_masks = (0..n)
            .combinations(t)
            .map(|c| {
                c.into_iter()
                    .combinations(r)
                    .fold(0u64, |m, e| m | 1 << edge_index[e.as_slice()])
            })
            .collect();
        Self {
            edge_subsets,
            subset_count: index.len(),
            clique_masks,
        }
    }

    /// `(k^r_t, sorted positive j-degrees)` of the hypergraph with edge mask `mask`.
    fn evaluate(&self, mask: u64, degrees: &mut [u64]) -> (u64, Vec<u64>) {
        degrees.iter_mut().for_each(|d| *d = 0);
        let mut bits = mask;
        while bits != 0 {
            let e = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            for &s in &self.edge_subsets[e] {
                degrees[s] += 1;
            }
        }
        let k = self.clique_masks.iter().filter(|&&c| mask & c == c).count() as u64;
        let mut profile: Vec<u64> = degrees.iter().copied().filter(|&d| d > 0).collect();
        profile.sort_unstable();
        (k, profile)
    }
}

/// Checks the hyperclique bound on every `r`-uniform hypergraph on `n` vertices.
///
/// Runs with more than [`DEFAULT_MAX_HYPER_BITS`] candidate edges need
/// `allow_large`, which raises the limit to [`MAX_ENUMERATION_BITS`].
pub fn verify_exhaustive_hypergraphs(
    n: usize,
    r: u32,
    j: u32,
    t: u32,
    p_list: &[f64],
    allow_large: bool,
) -> Result<VerificationReport> {
    let started = Instant::now();
    check_exponents(p_list)?;
    HyperParams::new(t, r, j, p_list[0])?;
    let bits = binom_int(n as u64, u64::from(r));
    let limit = if allow_large { MAX_ENUMERATION_BITS } else { DEFAULT_MAX_HYPER_BITS };
    if bits > u128::from(limit) {
        return Err(Error::TooLarge(format!(
            "C({n}, {r}) = {bits} candidate edges exceeds the limit of {limit}"
        )));
    }
    let total = hypergraph::enumerate_all_hypergraphs(n, r as usize)?.total();
    let tables = HyperTables::new(n, r as usize, j as usize, t as usize);
    let tally = run_chunked(total, CHUNK, p_list.len(), |range| {
        let mut tally = Tally::new(p_list.len());
        let mut degrees = vec![0u64; tables.subset_count];
        let mut cache = BoundCache::new(|pi: usize, profile: &[u64]| {
            let p = p_list[pi];
            let norm = lp_norm(profile, p)?;
            Ok((norm, bounds::hyperclique_bound(p, t, r, j, norm)?.bound))
        });
        for mask in range {
            let (k_t, profile) = tables.evaluate(mask, &mut degrees);
            tally.instances += 1;
            for (pi, &p) in p_list.iter().enumerate() {
                let (norm, bound) = cache.get(pi, profile.clone())?;
                tally.record(pi, Observation { instance: mask, p, k_t, bound, norm });
            }
        }
        Ok(tally)
    })?;
    Ok(tally.finish(
        format!("hyper-exhaustive n={n} r={r} j={j} t={t}"),
        p_list,
        false,
        started,
    ))
}

/// Checks the fixed-`n` bound on the given graphs, all with the same vertex count.
///
/// Graphs failing the hypothesis `n (s_ℝ - 1)ᵖ <= Cᵖ` at their own norm are
/// counted and not checked. The instance id is the position in `graphs`.
pub fn verify_fixed_n_on(graphs: &[Graph], t: u32, p: f64) -> Result<VerificationReport> {
    let started = Instant::now();
    let params = CliqueParams::new(t, p)?;
    if !params.is_supercritical() {
        return Err(invalid(format!("the fixed-n bound needs p > t - 1, got p = {p}, t = {t}")));
    }
    let tally = run_chunked(graphs.len() as u64, RANDOM_CHUNK, 1, |range| {
        let mut tally = Tally::new(1);
        for i in range {
            tally.instances += 1;
            fixed_n_step(&mut tally, i, &graphs[i as usize], t, p)?;
        }
        Ok(tally)
    })?;
    Ok(tally.finish(format!("fixed-n t={t} p={p}"), &[p], true, started))
}

fn fixed_n_step(tally: &mut Tally, instance: u64, g: &Graph, t: u32, p: f64) -> Result<()> {
    let norm = degree_norm(g, p)?;
    match bounds::fixed_n_bound(g.n(), p, t, norm) {
        Ok(b) => {
            tally.precondition_met += 1;
            let k_t = count_cliques(g, t as usize);
            tally.record(0, Observation { instance, p, k_t, bound: b.bound, norm });
        }
        Err(Error::Precondition(_)) => tally.precondition_failed += 1,
        Err(e) => return Err(e),
    }
    Ok(())
}

/// Checks the fixed-`n` bound on seeded random `n`-vertex graphs. Each
/// sample first draws its own edge probability uniformly from `[0, 1]`, so
/// both sparse and dense graphs occur.
pub fn verify_fixed_n(n: usize, t: u32, p: f64, samples: u64, seed: u64) -> Result<VerificationReport> {
    let started = Instant::now();
    let params = CliqueParams::new(t, p)?;
    if !params.is_supercritical() {
        return Err(invalid(format!("the fixed-n bound needs p > t - 1, got p = {p}, t = {t}")));
    }
    if n == 0 || n > 64 {
        return Err(invalid(format!("fixed-n runs allow 1 <= n <= 64, got {n}")));
    }
    let tally = run_chunked(samples, RANDOM_CHUNK, 1, |range| {
        let mut tally = Tally::new(1);
        for i in range {
            let mut rng = sample_rng(seed, i);
            let q: f64 = rng.gen();
            let g = graph::random_graph_with(n, q, &mut rng)?;
            tally.instances += 1;
            fixed_n_step(&mut tally, i, &g, t, p)?;
        }
        Ok(tally)
    })?;
    Ok(tally.finish(format!("fixed-n n={n} t={t} p={p} seed={seed}"), &[p], true, started))
}

/// An extremal family whose members should meet a bound with equality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Construction {
    /// `K_u`, tight below the threshold.
    Clique { u: usize },
    /// `m` disjoint copies of `K_u`, tight above the threshold when `u = s_ℕ`.
    DisjointCliques { m: usize, u: usize },
    /// `n/u` disjoint copies of `K_u` against the fixed-`n` bound.
    FixedN { n: usize, u: usize },
    /// The complete `r`-uniform hypergraph on `u` vertices under the `(j, p)`-norm.
    CompleteHyper { u: usize, r: usize, j: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TightnessReport {
    pub construction: Construction,
    pub t: u32,
    pub p: f64,
    pub k_t: u64,
    pub norm: f64,
    pub bound: BoundResult,
    pub ratio: f64,
}

impl TightnessReport {
    pub fn is_tight(&self) -> bool {
        (self.ratio - 1.0).abs() <= VIOLATION_TOL
    }
}

fn not_tight(msg: String) -> Error {
    Error::Precondition(msg)
}

/// Evaluates an extremal construction against its bound.
///
/// Constructions outside the setting where they are extremal are refused
/// with [`Error::Precondition`] rather than reported as loose.
pub fn verify_tightness(construction: Construction, t: u32, p: f64) -> Result<TightnessReport> {
    let tu = t as usize;
    let (k_t, norm, bound) = match construction {
        Construction::CompleteHyper { u, r, j } => {
            let params = HyperParams::new(t, r as u32, j as u32, p)?;
            if params.is_supercritical() {
                return Err(not_tight(format!(
                    "a single complete hypergraph is extremal only for p <= {}",
                    params.threshold()
                )));
            }
            if u < tu {
                return Err(not_tight(format!("K_{u} has no {t}-vertex hyperclique")));
            }
            let h = construct_complete_hyper(u, r)?;
            let norm = h.hyper_norm(j, p)?;
            let bound = bounds::hyperclique_bound(p, t, r as u32, j as u32, norm)?;
            (h.count_hypercliques(tu)?, norm, bound)
        }
        _ => {
            let params = CliqueParams::new(t, p)?;
            let (g, bound_for) = match construction {
                Construction::Clique { u } => {
                    if params.is_supercritical() {
                        return Err(not_tight(format!("a single clique is extremal only for p <= {}", params.threshold())));
                    }
                    if u < tu {
                        return Err(not_tight(format!("K_{u} has no {t}-clique")));
                    }
                    (Graph::complete(u), None)
                }
                Construction::DisjointCliques { m, u } => {
                    if !params.is_supercritical() {
                        return Err(not_tight(format!("disjoint cliques are extremal only for p > {}", params.threshold())));
                    }
                    let s_int = realmath::select_s_int(&params)?;
                    if u as u64 != s_int || m == 0 {
                        return Err(not_tight(format!("need m >= 1 copies of K_u with u = s_N = {s_int}, got m = {m}, u = {u}")));
                    }
                    (graph::construct_disjoint_cliques(&vec![u; m]), None)
                }
                Construction::FixedN { n, u } => {
                    if u == 0 || n % u != 0 || u < tu {
                        return Err(not_tight(format!("need t <= u and u dividing n, got n = {n}, u = {u}")));
                    }
                    (graph::construct_disjoint_cliques(&vec![u; n / u]), Some(n))
                }
                Construction::CompleteHyper { .. } => unreachable!(),
            };
            let norm = degree_norm(&g, p)?;
            let bound = match bound_for {
                Some(n) => bounds::fixed_n_bound(n, p, t, norm)?,
                None => bounds::clique_bound(p, t, norm)?,
            };
            (count_cliques(&g, tu), norm, bound)
        }
    };
    Ok(TightnessReport {
        construction,
        t,
        p,
        k_t,
        norm,
        ratio: k_t as f64 / bound.bound,
        bound,
    })
}

/// Numerical checks on `h` and its critical point for `p > t - 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Prop9Report {
    pub p: f64,
    pub t: u32,
    pub s_real: f64,
    pub s_int: u64,
    /// `|g(s_ℝ)|`.
    pub root_residual: f64,
    /// `h` strictly increases on a grid left of `s_ℝ` and strictly decreases right of it.
    pub unimodal_ok: bool,
    /// `g` strictly decreases across the whole grid.
    pub monotone_ok: bool,
    /// Central difference of `h` at `s_ℝ`, relative to `h(s_ℝ)`.
    pub relative_slope: f64,
    pub slope_ok: bool,
}

impl Prop9Report {
    pub fn passed(&self) -> bool {
        self.root_residual <= VIOLATION_TOL && self.unimodal_ok && self.monotone_ok && self.slope_ok
    }
}

fn strictly(values: &[f64], cmp: impl Fn(f64, f64) -> bool) -> bool {
    values.windows(2).all(|w| cmp(w[0], w[1]))
}

/// Checks root, unimodality and flatness of `h` at `s_ℝ` on a grid of
/// `grid_size` points per side. The left grid is geometric in the distance
/// from the pole `t - 1`; the right grid is geometric from `s_ℝ` to
/// `max(10³, 10 s_ℝ)`.
pub fn check_proposition9(p: f64, t: u32, grid_size: usize) -> Result<Prop9Report> {
    let params = CliqueParams::new(t, p)?;
    if !params.is_supercritical() {
        return Err(invalid(format!("need p > t - 1, got p = {p}, t = {t}")));
    }
    if grid_size < 2 {
        return Err(invalid("grid size must be at least 2"));
    }
    let pole = params.threshold();
    let s = realmath::solve_s_real(&params)?;
    let width = s - pole;
    let steps = grid_size as f64 - 1.0;
    let left: Vec<f64> = (0..grid_size)
        .map(|i| pole + width * 10f64.powf(-6.0 * (1.0 - i as f64 / steps)))
        .collect();
    let top = (10.0 * s).max(1e3);
    let right: Vec<f64> = (0..grid_size).map(|i| s * (top / s).powf(i as f64 / steps)).collect();

    let ln_h = |x: f64| realmath::ln_h(x, &params);
    let left_h = left.iter().map(|&x| ln_h(x)).collect::<Result<Vec<_>>>()?;
    let right_h = right.iter().map(|&x| ln_h(x)).collect::<Result<Vec<_>>>()?;
    let unimodal_ok = strictly(&left_h, |a, b| a < b) && strictly(&right_h, |a, b| a > b);

    let grid: Vec<f64> = left.iter().chain(&right[1..]).copied().collect();
    let g = grid.iter().map(|&x| realmath::g_value(x, &params)).collect::<Result<Vec<_>>>()?;
    let monotone_ok = strictly(&g, |a, b| a > b);

    let delta = 1e-4 * width.min(s);
    let at = ln_h(s)?;
    let relative_slope = ((ln_h(s + delta)? - at).exp() - (ln_h(s - delta)? - at).exp()) / (2.0 * delta);

    Ok(Prop9Report {
        p,
        t,
        s_real: s,
        s_int: realmath::select_s_int(&params)?,
        root_residual: realmath::g_value(s, &params)?.abs(),
        unimodal_ok,
        monotone_ok,
        relative_slope,
        slope_ok: relative_slope.abs() <= 1e-6,
    })
}

/// Whether a regime label matches `p` relative to the threshold.
pub fn regime_for(p: f64, threshold: f64) -> Regime {
    if p > threshold {
        Regime::Supercritical
    } else {
        Regime::Subcritical
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::{enumerate_all_hypergraphs, Hypergraph};

    #[test]
    fn exhaustive_n4() {
        let r = verify_exhaustive_graphs(4, 3, &[1.0], false).unwrap();
        assert_eq!(r.instances_checked, 64);
        assert!(r.passed());
        assert!((r.max_ratio - 1.0).abs() < 1e-9);
        // The lone triangle on {0,1,2} (mask 0b1011) is tight and precedes K4.
        assert_eq!(r.witness.as_ref().unwrap().instance, 0b1011);
        let k4 = verify_exhaustive_graphs(4, 3, &[1.0], false).unwrap();
        assert!(k4.same_outcome(&r));
        assert_eq!(verify_tightness(Construction::Clique { u: 4 }, 3, 1.0).unwrap().ratio, 1.0);
    }

    #[test]
    fn exhaustive_n3() {
        let r = verify_exhaustive_graphs(3, 3, &[2.0], false).unwrap();
        assert_eq!(r.instances_checked, 8);
        assert!(r.passed());
        assert_eq!(r.witness.as_ref().unwrap().instance, 7);
        assert!((r.max_ratio - 1.0).abs() < 1e-9);
        // Only the empty graph has bound 0; sparse graphs have small positive bounds.
        assert_eq!(r.per_p[0].skipped_zero, 1);
    }

    #[test]
    fn exhaustive_guard() {
        assert!(matches!(verify_exhaustive_graphs(8, 3, &[1.0], false), Err(Error::TooLarge(_))));
        assert!(verify_exhaustive_graphs(9, 3, &[1.0], true).is_err());
        assert!(verify_exhaustive_graphs(5, 2, &[1.0], false).is_err());
        assert!(verify_exhaustive_graphs(5, 3, &[], false).is_err());
    }

    #[test]
    fn exhaustive_n5_multi_p() {
        let r = verify_exhaustive_graphs(5, 3, &[0.5, 1.0, 2.0, 3.0], false).unwrap();
        assert_eq!(r.instances_checked, 1024);
        assert!(r.passed());
        assert_eq!(r.per_p.len(), 4);
        assert!(r.per_p.iter().all(|s| s.checked == 1024));
    }

    #[test]
    fn random_suite() {
        let r = verify_random_graphs(20, 500, 0.5, 3, &[1.0, 2.0, 3.0], 1).unwrap();
        assert!(r.passed());
        let again = verify_random_graphs(20, 500, 0.5, 3, &[1.0, 2.0, 3.0], 1).unwrap();
        assert!(r.same_outcome(&again));

        let full = verify_random_graphs(8, 3, 1.0, 3, &[1.0], 5).unwrap();
        assert!((full.max_ratio - 1.0).abs() < 1e-9);

        let none = verify_random_graphs(8, 3, 0.0, 3, &[1.0], 5).unwrap();
        assert_eq!(none.per_p[0].skipped_zero, 3);
        assert!(none.witness.is_none());
        assert_eq!(none.max_ratio, 0.0);
    }

    #[test]
    fn random_samples_are_independent_of_chunking() {
        let g = graph::random_graph_with(10, 0.5, &mut sample_rng(3, 700)).unwrap();
        let r = verify_random_graphs(10, 701, 0.5, 3, &[1.0], 3).unwrap();
        let last = r.per_p[0].checked;
        assert_eq!(last, 701);
        assert_eq!(g, graph::random_graph_with(10, 0.5, &mut sample_rng(3, 700)).unwrap());
    }

    #[test]
    fn tightness_examples() {
        let k4 = verify_tightness(Construction::Clique { u: 4 }, 3, 1.0).unwrap();
        assert!(k4.is_tight());
        let five = verify_tightness(Construction::DisjointCliques { m: 5, u: 3 }, 3, 3.0).unwrap();
        assert_eq!(five.k_t, 5);
        assert!((five.bound.bound - 5.0).abs() < 1e-9);
        assert!((five.norm.powf(3.0) - 120.0).abs() < 1e-9);
        let fixed = verify_tightness(Construction::FixedN { n: 12, u: 4 }, 3, 3.0).unwrap();
        assert!((fixed.bound.bound - 12.0).abs() < 1e-9 && fixed.is_tight());
        let hyper = verify_tightness(Construction::CompleteHyper { u: 5, r: 3, j: 1 }, 4, 1.0).unwrap();
        assert!(hyper.is_tight());
    }

    #[test]
    fn tightness_refusals() {
        let refusals = [
            (Construction::Clique { u: 4 }, 3.0),
            (Construction::Clique { u: 2 }, 1.0),
            (Construction::DisjointCliques { m: 3, u: 4 }, 3.0),
            (Construction::DisjointCliques { m: 3, u: 3 }, 1.0),
            (Construction::FixedN { n: 10, u: 4 }, 3.0),
        ];
        for (c, p) in refusals {
            assert!(matches!(verify_tightness(c, 3, p), Err(Error::Precondition(_))), "{c:?}");
        }
        let hyper = verify_tightness(Construction::CompleteHyper { u: 5, r: 3, j: 1 }, 4, 2.0);
        assert!(matches!(hyper, Err(Error::Precondition(_))));
    }

    #[test]
    fn hyper_tables_match_library() {
        let all = enumerate_all_hypergraphs(5, 3).unwrap();
        let tables = HyperTables::new(5, 3, 2, 4);
        let mut degrees = vec![0; tables.subset_count];
        for mask in (0..all.total()).step_by(37) {
            let h: Hypergraph = all.decode(mask);
            let (k, profile) = tables.evaluate(mask, &mut degrees);
            assert_eq!(k, h.count_hypercliques(4).unwrap());
            assert_eq!(profile, h.degree_profile(2).unwrap());
        }
    }

    #[test]
    fn exhaustive_hypergraphs_small() {
        let r = verify_exhaustive_hypergraphs(5, 3, 1, 4, &[1.0, 1.5], false).unwrap();
        assert_eq!(r.instances_checked, 1024);
        assert!(r.passed());
        assert!((r.per_p[0].max_ratio - 1.0).abs() < 1e-9);
        assert_eq!(r.per_p[0].witness.as_ref().unwrap().instance, 1023);

        let r = verify_exhaustive_hypergraphs(4, 3, 1, 4, &[1.0], false).unwrap();
        assert_eq!(r.instances_checked, 16);
        assert!((r.max_ratio - 1.0).abs() < 1e-9);
        assert_eq!(r.witness.unwrap().instance, 15);

        assert!(matches!(
            verify_exhaustive_hypergraphs(7, 3, 1, 4, &[1.0], false),
            Err(Error::TooLarge(_))
        ));
    }

    #[test]
    fn fixed_n_suite() {
        let r = verify_fixed_n(12, 3, 3.0, 300, 7).unwrap();
        assert!(r.passed());
        let met = r.precondition_met.unwrap();
        assert_eq!(met + r.precondition_failed.unwrap(), 300);
        assert!(met > 0 && r.precondition_failed.unwrap() > 0);

        let fixture = [graph::construct_disjoint_cliques(&[4, 4, 4]), Graph::empty(12)];
        let r = verify_fixed_n_on(&fixture, 3, 3.0).unwrap();
        assert!((r.max_ratio - 1.0).abs() < 1e-9);
        assert_eq!((r.precondition_met, r.precondition_failed), (Some(1), Some(1)));
        assert!(verify_fixed_n(12, 3, 2.0, 10, 7).is_err());
    }

    #[test]
    fn maximiser_shape_examples() {
        let r = check_proposition9(3.0, 3, 200).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!((r.s_real - 3.0).abs() < 1e-9 && r.root_residual < 1e-12);
        let r = check_proposition9(5.0, 4, 200).unwrap();
        assert!(r.passed());
        assert!((r.s_real - 4.280776).abs() < 1e-6);
        let r = check_proposition9(2.1, 3, 200).unwrap();
        assert!(r.passed());
        assert!((r.s_real - 12.0).abs() < 1e-9);
        assert!(check_proposition9(2.0, 3, 200).is_err());
    }

    #[test]
    fn report_json_round_trip() {
        let r = verify_exhaustive_graphs(4, 3, &[1.0, 2.5], false).unwrap();
        let text = serde_json::to_string(&r).unwrap();
        let back: VerificationReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn witness_tie_break_prefers_smaller_id() {
        let a = Observation { instance: 5, p: 1.0, k_t: 1, bound: 1.0, norm: 6.0 };
        let b = Observation { instance: 9, ..a.clone() };
        assert!(outranks(&a, &b) && !outranks(&b, &a));
    }
}
