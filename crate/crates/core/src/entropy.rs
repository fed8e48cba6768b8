//! Exact entropy chains of uniformly sampled, uniformly ordered set families.
//!
//! A member `A` of a family of `d`-sets is drawn uniformly and its elements
//! are put in uniformly random order `(X₁, …, X_d)`. Every prefix probability
//! is a ratio of integers: an ordered prefix realising the `k`-set `S` has
//! probability `N(S) (d-k)! / (d! |F|)`, where `N(S)` counts members
//! containing `S`. Entropies are summed from these exact counts, so the
//! chain inequalities can be checked at their equality cases.
//!
//! The claim diagnostics evaluate both sides of the inequalities that link
//! the chain to degree norms on concrete graphs and hypergraphs.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::{list_cliques, Graph};
use crate::hypergraph::Hypergraph;
use crate::realmath::{self, falling_binom, CliqueParams, HyperParams};

/// Absolute tolerance on `x`-values for every chain check.
pub const CHAIN_TOL: f64 = 1e-9;

/// Families at least this large compute prefix sizes in parallel.
const PARALLEL_FAMILY: usize = 1024;

/// Nonempty family of distinct `d`-subsets of `{0, …, n-1}`, each stored sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetFamily {
    ground_size: usize,
    member_size: usize,
    members: Vec<Vec<usize>>,
}

impl SetFamily {
    pub fn new(ground_size: usize, member_size: usize, members: Vec<Vec<usize>>) -> Result<Self> {
        if members.is_empty() {
            return Err(invalid("set family must be nonempty"));
        }
        if member_size == 0 {
            return Err(invalid("member size must be positive"));
        }
        let mut members: Vec<Vec<usize>> = members
            .into_iter()
            .map(|mut m| {
                m.sort_unstable();
                m
            })
            .collect();
        for m in &members {
            if m.len() != member_size {
                return Err(invalid(format!("member {m:?} does not have size {member_size}")));
            }
            if m.windows(2).any(|w| w[0] == w[1]) || m[member_size - 1] >= ground_size {
                return Err(invalid(format!("member {m:?} is not a subset of 0..{ground_size}")));
            }
        }
        members.sort_unstable();
        if members.windows(2).any(|w| w[0] == w[1]) {
            return Err(invalid("set family has repeated members"));
        }
        Ok(Self {
            ground_size,
            member_size,
            members,
        })
    }

    /// The `t`-cliques of `g`.
    pub fn from_cliques(g: &Graph, t: usize) -> Result<Self> {
        let cliques = list_cliques(g, t);
        if cliques.is_empty() || t == 0 {
            return Err(Error::NoClique(t));
        }
        Ok(Self {
            ground_size: g.n(),
            member_size: t,
            members: cliques,
        })
    }

    /// The `t`-hypercliques of `h`.
    pub fn from_hypercliques(h: &Hypergraph, t: usize) -> Result<Self> {
        let cliques = h.list_hypercliques(t)?;
        if cliques.is_empty() {
            return Err(Error::NoClique(t));
        }
        Ok(Self {
            ground_size: h.n(),
            member_size: t,
            members: cliques,
        })
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn member_size(&self) -> usize {
        self.member_size
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Vec<usize>] {
        &self.members
    }

    /// `N(S)` for every `k`-set `S` contained in at least one member.
    pub fn extension_counts(&self, k: usize) -> HashMap<Vec<usize>, u64> {
        let mut counts = HashMap::new();
        let mut buf = Vec::with_capacity(k);
        for m in &self.members {
            for_each_subset(m, k, 0, &mut buf, &mut |s| {
                *counts.entry(s.to_vec()).or_insert(0) += 1;
            });
        }
        counts
    }

    /// Applies `perm` to the ground set.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.ground_size {
            return Err(invalid("permutation length differs from ground size"));
        }
        let members = self
            .members
            .iter()
            .map(|m| m.iter().map(|&v| perm[v]).collect())
            .collect();
        Self::new(self.ground_size, self.member_size, members)
    }
}

fn for_each_subset<F: FnMut(&[usize])>(items: &[usize], k: usize, start: usize, buf: &mut Vec<usize>, f: &mut F) {
    if buf.len() == k {
        f(buf);
        return;
    }
    let need = k - buf.len();
    for i in start..=items.len() - need {
        buf.push(items[i]);
        for_each_subset(items, k, i + 1, buf, f);
        buf.pop();
    }
}

/// Neumaier-compensated sum.
fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0;
    let mut carry = 0.0;
    for v in values {
        let next = sum + v;
        carry += if sum.abs() >= v.abs() {
            (sum - next) + v
        } else {
            (v - next) + sum
        };
        sum = next;
    }
    sum + carry
}

fn log2_factorial(k: usize) -> f64 {
    compensated_sum((2..=k).map(|i| (i as f64).log2()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyChainReport {
    pub ground_size: usize,
    pub member_size: usize,
    pub family_size: usize,
    /// `H(X₁, …, X_k)` in bits for `k = 1..=d`.
    pub prefix_entropy: Vec<f64>,
    /// `x_k = 2^{H(X_k | X₁ … X_{k-1})}`.
    pub x: Vec<f64>,
    /// Whether `x_k >= x_{k+1} + 1` for all `k`, within [`CHAIN_TOL`].
    pub chain_ok: bool,
    /// `∏ x_k`, which equals `d! |F|`.
    pub product: f64,
}

impl EntropyChainReport {
    /// `H(X_k | X₁ … X_{k-1})` for 1-based `k`.
    pub fn conditional(&self, k: usize) -> f64 {
        let prev = if k > 1 { self.prefix_entropy[k - 2] } else { 0.0 };
        self.prefix_entropy[k - 1] - prev
    }
}

/// `H(X₁, …, X_k)` from the extension counts of `k`-sets.
fn prefix_entropy(family: &SetFamily, k: usize) -> f64 {
    let d = family.member_size;
    let counts = family.extension_counts(k);
    // Unordered prefix set S has probability N(S) / (C(d,k) |F|); each of its
    // k! orderings is equally likely.
    let denom = realmath::binom_int(d as u64, k as u64) as f64 * family.len() as f64;
    let log_denom = denom.log2();
    let spread = compensated_sum(counts.values().map(|&n| {
        let nf = n as f64;
        (nf / denom) * (log_denom - nf.log2())
    }));
    log2_factorial(k) + spread
}

/// Exact entropy chain of `family`.
pub fn entropy_chain(family: &SetFamily) -> EntropyChainReport {
    let d = family.member_size;
    let prefix: Vec<f64> = if family.len() >= PARALLEL_FAMILY {
        (1..=d).into_par_iter().map(|k| prefix_entropy(family, k)).collect()
    } else {
        (1..=d).map(|k| prefix_entropy(family, k)).collect()
    };
    let x: Vec<f64> = (0..d)
        .map(|i| {
            let prev = if i > 0 { prefix[i - 1] } else { 0.0 };
            (prefix[i] - prev).exp2()
        })
        .collect();
    let product = x.iter().product();
    let chain_ok = lemma8_margins(&x).iter().all(|&m| m >= -CHAIN_TOL);
    EntropyChainReport {
        ground_size: family.ground_size,
        member_size: d,
        family_size: family.len(),
        prefix_entropy: prefix,
        x,
        chain_ok,
        product,
    }
}

fn lemma8_margins(x: &[f64]) -> Vec<f64> {
    x.windows(2).map(|w| w[0] - w[1] - 1.0).collect()
}

/// Outcome of the chain check `x₁ >= x₂ + 1 >= … >= x_d + d - 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lemma8Check {
    pub holds: bool,
    /// `x_k - x_{k+1} - 1` for `k = 1..d-1`.
    pub margins: Vec<f64>,
}

pub fn lemma8_check(report: &EntropyChainReport, tol: f64) -> Lemma8Check {
    let margins = lemma8_margins(&report.x);
    Lemma8Check {
        holds: margins.iter().all(|&m| m >= -tol),
        margins,
    }
}

/// `lhs > rhs` up to [`CHAIN_TOL`] relative noise.
fn strictly_exceeds(lhs: f64, rhs: f64) -> bool {
    lhs > rhs - CHAIN_TOL * rhs.abs().max(1.0)
}

fn clique_chain(g: &Graph, t: usize) -> Result<(SetFamily, EntropyChainReport)> {
    if t < 2 {
        return Err(invalid(format!("clique size t must be at least 2, got {t}")));
    }
    let family = SetFamily::from_cliques(g, t)?;
    let report = entropy_chain(&family);
    Ok((family, report))
}

/// Both sides of `x₁ x₂ᵖ > u (u-1)ᵖ`, which must hold whenever
/// `k_t(G) > C(u, t)` and `0 < p <= t - 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmallPClaim {
    pub x1: f64,
    pub x2: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub cliques: u64,
    pub binom_u: f64,
    /// `k_t(G) > C(u, t)`.
    pub hypothesis: bool,
    /// `Some(lhs > rhs)` when the hypothesis holds, otherwise `None`.
    pub holds: Option<bool>,
}

pub fn claim_small_p(g: &Graph, t: usize, p: f64, u: f64) -> Result<SmallPClaim> {
    if !(p > 0.0) || p > (t as f64 - 1.0) {
        return Err(invalid(format!("need 0 < p <= t - 1, got p = {p}, t = {t}")));
    }
    if !(u >= 1.0) || !u.is_finite() {
        return Err(invalid(format!("u must be finite and at least 1, got {u}")));
    }
    let (family, report) = clique_chain(g, t)?;
    let (x1, x2) = (report.x[0], report.x[1]);
    let lhs = x1 * x2.powf(p);
    let rhs = u * (u - 1.0).powf(p);
    let cliques = family.len() as u64;
    let binom_u = falling_binom(u, t as u32);
    let hypothesis = cliques as f64 > binom_u;
    Ok(SmallPClaim {
        x1,
        x2,
        lhs,
        rhs,
        cliques,
        binom_u,
        hypothesis,
        holds: hypothesis.then(|| strictly_exceeds(lhs, rhs)),
    })
}

/// `H(X₁) + p H(X₂ | X₁)` against `log₂ Σ deg(v)ᵖ`; `gap = rhs - lhs >= 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Claim6Gap {
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
}

pub fn claim6_gap(g: &Graph, t: usize, p: f64) -> Result<Claim6Gap> {
    if !(p > 0.0) || !p.is_finite() {
        return Err(invalid(format!("p must be positive and finite, got {p}")));
    }
    let (_, report) = clique_chain(g, t)?;
    let lhs = report.conditional(1) + p * report.conditional(2);
    let rhs = g.degrees().log2_power_sum(p)?;
    Ok(Claim6Gap { lhs, rhs, gap: rhs - lhs })
}

/// Both sides of `x₁ x₂ᵖ > n (u-1)ᵖ` for `p > t - 1`, which must hold when
/// `k_t(G) > (n/u) C(u,t)` and `s_ℝ <= u`; `x₁ <= n` always.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Claim7 {
    pub x1: f64,
    pub x2: f64,
    pub n: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub chain_n_ok: bool,
    pub cliques: u64,
    /// `(n/u) C(u, t)`.
    pub fixed_n_value: f64,
    /// `s_ℝ <= u`, equivalently `n (s_ℝ - 1)ᵖ <= Cᵖ` at `C = n^(1/p) (u-1)`.
    pub precondition: bool,
    pub hypothesis: bool,
    pub holds: Option<bool>,
}

pub fn claim7(g: &Graph, t: usize, p: f64, u: f64) -> Result<Claim7> {
    let params = CliqueParams::new(t as u32, p)?;
    if !params.is_supercritical() {
        return Err(invalid(format!("need p > t - 1, got p = {p}, t = {t}")));
    }
    if !(u >= 1.0) || !u.is_finite() {
        return Err(invalid(format!("u must be finite and at least 1, got {u}")));
    }
    let (family, report) = clique_chain(g, t)?;
    let n = g.n();
    let (x1, x2) = (report.x[0], report.x[1]);
    let lhs = x1 * x2.powf(p);
    let rhs = n as f64 * (u - 1.0).powf(p);
    let cliques = family.len() as u64;
    let fixed_n_value = n as f64 / u * falling_binom(u, t as u32);
    let precondition = realmath::solve_s_real(&params)? <= u;
    let hypothesis = precondition && cliques as f64 > fixed_n_value;
    Ok(Claim7 {
        x1,
        x2,
        n,
        lhs,
        rhs,
        chain_n_ok: x1 <= n as f64 + CHAIN_TOL,
        cliques,
        fixed_n_value,
        precondition,
        hypothesis,
        holds: hypothesis.then(|| strictly_exceeds(lhs, rhs)),
    })
}

/// Entropy estimates behind the subcritical hypergraph bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HyperEntropyDiagnostic {
    pub x: Vec<f64>,
    /// `x₁ ⋯ x_j`.
    pub a: f64,
    /// `x_{j+1} ⋯ x_r`.
    pub b: f64,
    /// `x_{r+1} ⋯ x_t`.
    pub cfac: f64,
    /// `H(X₁…X_j) + p H(X_{j+1}…X_r | X₁…X_j)`.
    pub lhs5: f64,
    /// `log₂(j! (r-j)!ᵖ Σ_S deg(S)ᵖ)`.
    pub rhs5: f64,
    pub eq5_ok: bool,
    pub hypercliques: u64,
    /// `A Bᵖ`.
    pub abp: f64,
    /// `u(u-1)⋯(u-j+1) · ((u-j)⋯(u-r+1))ᵖ`.
    pub abp_target: f64,
    /// `k^r_t(H) > C(u, t)`.
    pub hypothesis: bool,
    pub abp_ok: Option<bool>,
}

pub fn hyper_entropy_diagnostic(
    h: &Hypergraph,
    t: usize,
    r: usize,
    j: usize,
    p: f64,
    u: f64,
) -> Result<HyperEntropyDiagnostic> {
    let params = HyperParams::new(t as u32, r as u32, j as u32, p)?;
    if params.is_supercritical() {
        return Err(invalid(format!(
            "need p <= (t-j)/(r-j) = {}, got p = {p}",
            params.threshold()
        )));
    }
    if h.r() != r {
        return Err(invalid(format!("hypergraph is {}-uniform, not {r}-uniform", h.r())));
    }
    if !(u > (r - 1) as f64) || !u.is_finite() {
        return Err(invalid(format!("u must exceed r - 1 = {}, got {u}", r - 1)));
    }
    let family = SetFamily::from_hypercliques(h, t)?;
    let report = entropy_chain(&family);
    let x = report.x.clone();
    let a: f64 = x[..j].iter().product();
    let b: f64 = x[j..r].iter().product();
    let cfac: f64 = x[r..].iter().product();
    let h_j = report.prefix_entropy[j - 1];
    let h_r = report.prefix_entropy[r - 1];
    let lhs5 = h_j + p * (h_r - h_j);
    let rhs5 = log2_factorial(j) + p * log2_factorial(r - j) + realmath::log2_power_sum(&h.degree_profile(j)?, p)?;
    let falling = |from: usize, to: usize| -> f64 { (from..to).map(|i| u - i as f64).product() };
    let abp = a * b.powf(p);
    let abp_target = falling(0, j) * falling(j, r).powf(p);
    let hypercliques = family.len() as u64;
    let hypothesis = hypercliques as f64 > falling_binom(u, t as u32);
    Ok(HyperEntropyDiagnostic {
        x,
        a,
        b,
        cfac,
        lhs5,
        rhs5,
        eq5_ok: lhs5 <= rhs5 + CHAIN_TOL,
        hypercliques,
        abp,
        abp_target,
        hypothesis,
        abp_ok: hypothesis.then(|| abp >= abp_target - CHAIN_TOL * abp_target.abs().max(1.0)),
    })
}
