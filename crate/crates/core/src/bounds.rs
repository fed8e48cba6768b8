//! Closed-form upper bounds on clique counts, dispatched by regime.
//!
//! | function | constraint | extremal family |
//! |---|---|---|
//! | [`clique_bound`], `p <= t-1` | `‖d(G)‖_p <= C` | one `u`-clique |
//! | [`clique_bound`], `p > t-1` | `‖d(G)‖_p <= C` | disjoint `s_ℕ`-cliques |
//! | [`fixed_n_bound`] | `n` vertices, `p > t-1` | `n/u` disjoint `u`-cliques |
//! | [`kruskal_katona_bound`] | `e` edges | one clique |
//! | [`chase_gls_bound`] | max degree `Δ`, `n` vertices | disjoint `K_{Δ+1}` |
//! | [`hyperclique_bound`] | `‖d(H)‖_{j,p} <= C` | complete hypergraphs |
//!
//! Bounds are returned as reals and never floored.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::realmath::{
    self, binom_int, falling_binom, ln_binom_pos, CliqueParams, HyperParams, LOG_SPACE_C, LOG_SPACE_P,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Subcritical,
    Supercritical,
}

impl Regime {
    pub fn short_name(self) -> &'static str {
        match self {
            Regime::Subcritical => "sub",
            Regime::Supercritical => "super",
        }
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Regime::Subcritical => "subcritical",
            Regime::Supercritical => "supercritical",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundResult {
    pub regime: Regime,
    /// The critical parameter: the norm-equation root when subcritical,
    /// otherwise the maximiser the bound is evaluated at.
    pub u: f64,
    pub s_real: Option<f64>,
    pub s_int: Option<u64>,
    pub bound: f64,
}

fn check_c(c: f64) -> Result<()> {
    if !(c >= 0.0) || !c.is_finite() {
        return Err(invalid(format!("C must be finite and nonnegative, got {c}")));
    }
    Ok(())
}

/// `C(u, t)` for `u >= t - 1` and `0` below.
///
/// Below `t - 1` the falling factorial alternates in sign, so clamping it at
/// zero alone would make the bound non-monotone in `C`. Any instance with a
/// `t`-clique has `u >= t`, so zero is exact there.
fn subcritical_value(u: f64, t: u32) -> f64 {
    if u <= f64::from(t - 1) {
        0.0
    } else {
        falling_binom(u, t)
    }
}

/// `Cᵖ · exp(ln_factor)` evaluated in log space.
fn scale_by_c_pow(c: f64, p: f64, ln_factor: f64) -> f64 {
    if c == 0.0 {
        0.0
    } else {
        (p * c.ln() + ln_factor).exp()
    }
}

/// Upper bound on `k_t(G)` for every graph with `‖d(G)‖_p <= C`.
///
/// For `p <= t-1` this is `max{C(u,t), 0}` with `u^(1/p)(u-1) = C`; above the
/// threshold it is `Cᵖ h(s_ℕ)`. `p = ∞` is refused; use [`chase_gls_bound`].
pub fn clique_bound(p: f64, t: u32, c: f64) -> Result<BoundResult> {
    if p.is_infinite() && p > 0.0 {
        return Err(invalid("p = ∞ needs n and Δ; use the maximum-degree bound instead"));
    }
    let params = CliqueParams::new(t, p)?;
    check_c(c)?;
    if !params.is_supercritical() {
        let u = if c == 0.0 { 1.0 } else { realmath::solve_u_small(c, p)? };
        return Ok(BoundResult {
            regime: Regime::Subcritical,
            u,
            s_real: None,
            s_int: None,
            bound: subcritical_value(u, t),
        });
    }
    let s_real = realmath::solve_s_real(&params)?;
    let s_int = realmath::select_s_int(&params)?;
    let u = s_int as f64;
    let bound = if p > LOG_SPACE_P || c > LOG_SPACE_C {
        scale_by_c_pow(c, p, realmath::ln_h(u, &params)?)
    } else {
        c.powf(p) * realmath::h_value(u, &params)?
    };
    Ok(BoundResult {
        regime: Regime::Supercritical,
        u,
        s_real: Some(s_real),
        s_int: Some(s_int),
        bound,
    })
}

/// Whether `n (s_ℝ - 1)ᵖ <= Cᵖ`, the hypothesis of the fixed-`n` bound.
///
/// Compared in log space with a `1e-12` relative allowance so that a `C`
/// obtained as a rounded `p`-th root still qualifies.
pub fn fixed_n_precondition(n: usize, params: &CliqueParams, c: f64) -> Result<bool> {
    let s = realmath::solve_s_real(params)?;
    let lhs = (n as f64).ln() + params.p * (s - 1.0).ln();
    let rhs = params.p * c.ln();
    Ok(lhs <= rhs + 1e-12)
}

/// Upper bound `(n/u) C(u,t)` with `u = C / n^(1/p) + 1` for `n`-vertex graphs,
/// valid when `p > t - 1` and `n (s_ℝ - 1)ᵖ <= Cᵖ`.
///
/// A failed hypothesis is reported as [`Error::Precondition`].
pub fn fixed_n_bound(n: usize, p: f64, t: u32, c: f64) -> Result<BoundResult> {
    let params = CliqueParams::new(t, p)?;
    if !params.is_supercritical() {
        return Err(invalid(format!("the fixed-n bound needs p > t - 1, got p = {p}, t = {t}")));
    }
    if n == 0 {
        return Err(invalid("n must be positive"));
    }
    check_c(c)?;
    let s_real = realmath::solve_s_real(&params)?;
    if c == 0.0 || !fixed_n_precondition(n, &params, c)? {
        return Err(Error::Precondition(format!(
            "n (s_R - 1)^p = {} exceeds C^p = {}",
            n as f64 * (s_real - 1.0).powf(p),
            c.powf(p)
        )));
    }
    let nf = n as f64;
    let u = c / nf.powf(1.0 / p) + 1.0;
    let bound = (ln_binom_pos(u, t) + nf.ln() - u.ln()).exp();
    Ok(BoundResult {
        regime: Regime::Supercritical,
        u,
        s_real: Some(s_real),
        s_int: None,
        bound: bound.max(0.0),
    })
}

/// Kruskal–Katona in Lovász form: `max{C(u,t), 0}` where `C(u,2) = e`.
pub fn kruskal_katona_bound(edges: f64, t: u32) -> Result<f64> {
    if t < 3 {
        return Err(invalid(format!("t must be at least 3, got {t}")));
    }
    if !(edges >= 0.0) || !edges.is_finite() {
        return Err(invalid(format!("edge count must be finite and nonnegative, got {edges}")));
    }
    let u = 0.5 * (1.0 + (1.0 + 8.0 * edges).sqrt());
    Ok(subcritical_value(u, t))
}

/// Maximum number of `t`-cliques among `n`-vertex graphs of maximum degree
/// `Δ`: `q C(Δ+1, t) + C(r, t)` with `n = q(Δ+1) + r`, `0 <= r <= Δ`.
pub fn chase_gls_bound(n: u64, max_degree: u64, t: u64) -> u128 {
    let block = max_degree + 1;
    u128::from(n / block) * binom_int(block, t) + binom_int(n % block, t)
}

/// Upper bound on `k^r_t(H)` for `r`-uniform `H` with `‖d(H)‖_{j,p} <= C`.
///
/// Subcritical (`p <= (t-j)/(r-j)`): `max{C(u,t), 0}` with
/// `C(u,j)^(1/p) C(u-j,r-j) = C`. Supercritical: `Cᵖ h̃(s̃_ℝ)` at the real
/// maximiser.
pub fn hyperclique_bound(p: f64, t: u32, r: u32, j: u32, c: f64) -> Result<BoundResult> {
    let params = HyperParams::new(t, r, j, p)?;
    check_c(c)?;
    if !params.is_supercritical() {
        let u = if c == 0.0 {
            f64::from(r - 1)
        } else {
            realmath::solve_u_hyper(c, &params)?
        };
        return Ok(BoundResult {
            regime: Regime::Subcritical,
            u,
            s_real: None,
            s_int: None,
            bound: subcritical_value(u, t),
        });
    }
    let s = realmath::solve_s_real_hyper(&params)?;
    let bound = if p > LOG_SPACE_P || c > LOG_SPACE_C {
        scale_by_c_pow(c, p, realmath::ln_htilde(s, &params)?)
    } else {
        c.powf(p) * realmath::htilde_value(s, &params)?
    };
    Ok(BoundResult {
        regime: Regime::Supercritical,
        u: s,
        s_real: Some(s),
        s_int: None,
        bound,
    })
}
