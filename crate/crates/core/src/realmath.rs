//! Real-valued helpers behind every bound: generalized binomials, the
//! objective `h(x) = C(x,t) / (x (x-1)^p)` and its hypergraph analogue, the
//! sign functions of their derivatives, and bisection solvers for the
//! maximisers and for norm inversion.
//!
//! All solvers bisect. The functions they bracket are strictly monotone on
//! the relevant interval, so bisection always converges; the tolerance is
//! absolute on the abscissa.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Absolute tolerance on the abscissa for every bisection.
pub const SOLVER_TOL: f64 = 1e-12;
/// Iteration cap for every bisection.
pub const SOLVER_MAX_ITER: usize = 200;
/// Initial offset from the pole when bracketing a derivative root.
const BRACKET_OFFSET: f64 = 1e-6;
/// Past these thresholds products like `(x-1)^p` are evaluated in log space.
pub const LOG_SPACE_P: f64 = 30.0;
pub const LOG_SPACE_C: f64 = 1e6;

/// Clique size and norm exponent for the graph bounds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CliqueParams {
    pub t: u32,
    pub p: f64,
}

impl CliqueParams {
    pub fn new(t: u32, p: f64) -> Result<Self> {
        if t < 3 {
            return Err(invalid(format!("clique size t must be at least 3, got {t}")));
        }
        check_exponent(p)?;
        Ok(Self { t, p })
    }

    /// The regime boundary `t - 1`.
    pub fn threshold(&self) -> f64 {
        f64::from(self.t - 1)
    }

    pub fn is_supercritical(&self) -> bool {
        self.p > self.threshold()
    }

    /// The same parameters viewed as a 2-uniform hypergraph with `j = 1`.
    pub fn as_hyper(&self) -> HyperParams {
        HyperParams {
            t: self.t,
            r: 2,
            j: 1,
            p: self.p,
        }
    }
}

/// Clique size `t`, uniformity `r`, subset size `j` and exponent `p` for the
/// hypergraph bounds. Requires `t > r > j >= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HyperParams {
    pub t: u32,
    pub r: u32,
    pub j: u32,
    pub p: f64,
}

impl HyperParams {
    pub fn new(t: u32, r: u32, j: u32, p: f64) -> Result<Self> {
        if !(t > r && r > j && j >= 1) {
            return Err(invalid(format!(
                "need t > r > j >= 1, got t={t}, r={r}, j={j}"
            )));
        }
        check_exponent(p)?;
        Ok(Self { t, r, j, p })
    }

    /// The regime boundary `(t - j) / (r - j)`.
    pub fn threshold(&self) -> f64 {
        f64::from(self.t - self.j) / f64::from(self.r - self.j)
    }

    pub fn is_supercritical(&self) -> bool {
        self.p > self.threshold()
    }
}

fn check_exponent(p: f64) -> Result<()> {
    if !(p > 0.0) || !p.is_finite() {
        return Err(invalid(format!("exponent p must be positive and finite, got {p}")));
    }
    Ok(())
}

/// `u (u-1) ... (u-t+1) / t!` without argument checks.
pub(crate) fn falling_binom(u: f64, t: u32) -> f64 {
    (0..t).fold(1.0, |acc, i| acc * (u - f64::from(i)) / f64::from(i + 1))
}

/// Natural log of `C(x, t)` for `x > t - 1`, where every factor is positive.
pub(crate) fn ln_binom_pos(x: f64, t: u32) -> f64 {
    (0..t)
        .map(|i| (x - f64::from(i)).ln() - f64::from(i + 1).ln())
        .sum()
}

/// Generalized binomial coefficient `u (u-1) ... (u-t+1) / t!` for real `u >= 0`.
///
/// The value can be negative when `u < t - 1` is not an integer; callers that
/// need `max{C(u,t), 0}` clamp explicitly.
pub fn binom_real(u: f64, t: u32) -> Result<f64> {
    if !(u >= 0.0) || !u.is_finite() {
        return Err(invalid(format!("binomial argument must be a finite u >= 0, got {u}")));
    }
    if t == 0 {
        return Err(invalid("binomial lower index must be positive"));
    }
    Ok(falling_binom(u, t))
}

/// Exact integer binomial coefficient, zero when `k > n`.
pub fn binom_int(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * u128::from(n - i) / u128::from(i + 1))
}

fn check_domain(x: f64, t: u32) -> Result<()> {
    if !(x > f64::from(t - 1)) || !x.is_finite() {
        return Err(invalid(format!("x must exceed t - 1 = {}, got {x}", t - 1)));
    }
    Ok(())
}

/// `ln h(x)`; finite for every `x > t - 1`.
pub fn ln_h(x: f64, params: &CliqueParams) -> Result<f64> {
    check_domain(x, params.t)?;
    Ok(ln_binom_pos(x, params.t) - x.ln() - params.p * (x - 1.0).ln())
}

/// `h(x) = C(x, t) / (x (x-1)^p)` on `(t-1, ∞)`.
pub fn h_value(x: f64, params: &CliqueParams) -> Result<f64> {
    if params.p > LOG_SPACE_P {
        return ln_h(x, params).map(f64::exp);
    }
    check_domain(x, params.t)?;
    Ok(falling_binom(x, params.t) / (x * (x - 1.0).powf(params.p)))
}

/// Sign function of `h'`: `g(x) = Σ_{i=1}^{t-1} (i-1)/(x-i) + t - 1 - p`.
///
/// Strictly decreasing on `(t-1, ∞)` with a pole at `t - 1`.
pub fn g_value(x: f64, params: &CliqueParams) -> Result<f64> {
    check_domain(x, params.t)?;
    Ok(g_unchecked(x, params.t, params.p))
}

fn g_unchecked(x: f64, t: u32, p: f64) -> f64 {
    let sum: f64 = (1..t)
        .map(|i| f64::from(i - 1) / (x - f64::from(i)))
        .sum();
    sum + f64::from(t - 1) - p
}

/// `ln h̃(x)` where `h̃(x) = C(x,t) / (C(x,j) C(x-j, r-j)^p)`.
pub fn ln_htilde(x: f64, params: &HyperParams) -> Result<f64> {
    check_domain(x, params.t)?;
    let HyperParams { t, r, j, p } = *params;
    Ok(ln_binom_pos(x, t) - ln_binom_pos(x, j) - p * ln_binom_pos(x - f64::from(j), r - j))
}

pub fn htilde_value(x: f64, params: &HyperParams) -> Result<f64> {
    if params.p > LOG_SPACE_P {
        return ln_htilde(x, params).map(f64::exp);
    }
    check_domain(x, params.t)?;
    let HyperParams { t, r, j, p } = *params;
    let denom = falling_binom(x, j) * falling_binom(x - f64::from(j), r - j).powf(p);
    Ok(falling_binom(x, t) / denom)
}

/// Logarithmic derivative of `h̃`:
/// `Σ_{i=j}^{t-1} 1/(x-i) - p Σ_{i=j}^{r-1} 1/(x-i)`.
pub fn gtilde_value(x: f64, params: &HyperParams) -> Result<f64> {
    check_domain(x, params.t)?;
    Ok(gtilde_unchecked(x, params))
}

fn gtilde_unchecked(x: f64, params: &HyperParams) -> f64 {
    let recip = |lo: u32, hi: u32| -> f64 { (lo..hi).map(|i| 1.0 / (x - f64::from(i))).sum() };
    recip(params.j, params.t) - params.p * recip(params.j, params.r)
}

/// Bisection on `[lo, hi]` for a function with opposite signs at the ends.
///
/// Stops once the bracket is narrower than `tol` or cannot shrink further in
/// floating point.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64, max_iter: usize) -> Result<f64> {
    let f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.is_nan() || f_hi.is_nan() || (f_lo > 0.0) == (f_hi > 0.0) {
        return Err(Error::Solver(format!(
            "no sign change on [{lo}, {hi}] (f = {f_lo}, {f_hi})"
        )));
    }
    let lo_positive = f_lo > 0.0;
    for _ in 0..max_iter {
        let mid = lo + 0.5 * (hi - lo);
        if hi - lo <= tol || mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if (f_mid > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if hi - lo <= tol {
        Ok(lo + 0.5 * (hi - lo))
    } else {
        Err(Error::Solver(format!(
            "bisection did not converge in {max_iter} iterations (bracket [{lo}, {hi}])"
        )))
    }
}

/// Brackets the root of a function that is `+∞` at `edge⁺` and eventually
/// negative: offset `1e-6` from the pole, then double the offset.
fn bracket_from_pole<F: Fn(f64) -> f64>(f: &F, edge: f64) -> Result<(f64, f64)> {
    let mut offset = BRACKET_OFFSET;
    let mut lo = edge + offset;
    while !(f(lo) > 0.0) {
        offset *= 0.5;
        lo = edge + offset;
        if lo <= edge {
            return Err(Error::Solver(format!("no positive value right of {edge}")));
        }
    }
    let mut step = offset;
    loop {
        step *= 2.0;
        let hi = edge + step;
        if !hi.is_finite() || step > 1e300 {
            return Err(Error::Solver(format!("no sign change right of {edge}")));
        }
        if f(hi) < 0.0 {
            return Ok((lo, hi));
        }
        lo = hi;
    }
}

/// Brackets the root of an increasing function that is negative at `lo`.
fn bracket_increasing<F: Fn(f64) -> f64>(f: &F, lo: f64, start: f64) -> Result<(f64, f64)> {
    let mut lo = lo;
    let mut hi = start;
    while f(hi) < 0.0 {
        lo = hi;
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::Solver("norm equation has no finite root".into()));
        }
    }
    Ok((lo, hi))
}

/// The unique critical point `s_ℝ` of `h` on `(t-1, ∞)`; requires `p > t - 1`.
pub fn solve_s_real(params: &CliqueParams) -> Result<f64> {
    if !params.is_supercritical() {
        return Err(invalid(format!(
            "s_R exists only for p > t - 1 (t = {}, p = {})",
            params.t, params.p
        )));
    }
    let (t, p) = (params.t, params.p);
    let g = |x: f64| g_unchecked(x, t, p);
    let (lo, hi) = bracket_from_pole(&g, params.threshold())?;
    bisect(g, lo, hi, SOLVER_TOL, SOLVER_MAX_ITER)
}

/// The integer `s_ℕ >= t` maximising `h`.
///
/// Only `⌊s_ℝ⌋` and `⌈s_ℝ⌉` (clamped to `t`) can win; on an exact tie the
/// smaller one is returned.
pub fn select_s_int(params: &CliqueParams) -> Result<u64> {
    let s = solve_s_real(params)?;
    let t = f64::from(params.t);
    let below = s.floor().max(t);
    let above = s.ceil().max(t);
    let winner = if above > below && ln_h(above, params)? > ln_h(below, params)? {
        above
    } else {
        below
    };
    Ok(winner as u64)
}

fn use_log_space(c: f64, p: f64) -> bool {
    p > LOG_SPACE_P || c > LOG_SPACE_C
}

/// The unique `u > 1` with `u^(1/p) (u - 1) = C`.
pub fn solve_u_small(c: f64, p: f64) -> Result<f64> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(invalid(format!("C must be positive and finite, got {c}")));
    }
    check_exponent(p)?;
    if use_log_space(c, p) {
        let target = p * c.ln();
        let f = |u: f64| u.ln() + p * (u - 1.0).ln() - target;
        let (lo, hi) = bracket_increasing(&f, 1.0, 2.0)?;
        bisect(f, lo, hi, SOLVER_TOL, SOLVER_MAX_ITER)
    } else {
        let target = c.powf(p);
        let f = |u: f64| u * (u - 1.0).powf(p) - target;
        let (lo, hi) = bracket_increasing(&f, 1.0, 2.0)?;
        bisect(f, lo, hi, SOLVER_TOL, SOLVER_MAX_ITER)
    }
}

/// The maximiser `s̃_ℝ` of `h̃` on `(t-1, ∞)`; requires `p > (t-j)/(r-j)`.
pub fn solve_s_real_hyper(params: &HyperParams) -> Result<f64> {
    if !params.is_supercritical() {
        return Err(invalid(format!(
            "s~_R exists only for p > (t-j)/(r-j) = {} (got p = {})",
            params.threshold(),
            params.p
        )));
    }
    let g = |x: f64| gtilde_unchecked(x, params);
    let (lo, hi) = bracket_from_pole(&g, f64::from(params.t - 1))?;
    bisect(g, lo, hi, SOLVER_TOL, SOLVER_MAX_ITER)
}

/// The unique `u > r - 1` with `C(u,j)^(1/p) C(u-j, r-j) = C`.
pub fn solve_u_hyper(c: f64, params: &HyperParams) -> Result<f64> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(invalid(format!("C must be positive and finite, got {c}")));
    }
    let HyperParams { r, j, p, .. } = *params;
    let jf = f64::from(j);
    let edge = f64::from(r - 1);
    if use_log_space(c, p) {
        let target = p * c.ln();
        let f = |u: f64| falling_binom(u, j).ln() + p * falling_binom(u - jf, r - j).ln() - target;
        let (lo, hi) = bracket_increasing(&f, edge, edge + 1.0)?;
        bisect(f, lo, hi, SOLVER_TOL, SOLVER_MAX_ITER)
    } else {
        let target = c.powf(p);
        let f = |u: f64| falling_binom(u, j) * falling_binom(u - jf, r - j).powf(p) - target;
        let (lo, hi) = bracket_increasing(&f, edge, edge + 1.0)?;
        bisect(f, lo, hi, SOLVER_TOL, SOLVER_MAX_ITER)
    }
}

/// `(Σ vᵖ)^(1/p)` over nonnegative integers; `p = ∞` gives the maximum.
///
/// Terms are scaled by the maximum before exponentiation so large `p` does
/// not overflow.
pub fn lp_norm(values: &[u64], p: f64) -> Result<f64> {
    if !(p > 0.0) {
        return Err(invalid(format!("norm exponent must be positive, got {p}")));
    }
    let max = values.iter().copied().max().unwrap_or(0);
    if max == 0 {
        return Ok(0.0);
    }
    if p.is_infinite() {
        return Ok(max as f64);
    }
    if p == 1.0 {
        return Ok(values.iter().map(|&v| v as f64).sum());
    }
    let m = max as f64;
    let scaled: f64 = values
        .iter()
        .filter(|&&v| v > 0)
        .map(|&v| (v as f64 / m).powf(p))
        .sum();
    Ok(m * scaled.powf(1.0 / p))
}

/// `log₂ Σ vᵖ` for finite `p > 0`; `-∞` when every value is zero.
pub fn log2_power_sum(values: &[u64], p: f64) -> Result<f64> {
    check_exponent(p)?;
    let max = values.iter().copied().max().unwrap_or(0);
    if max == 0 {
        return Ok(f64::NEG_INFINITY);
    }
    let m = max as f64;
    let scaled: f64 = values
        .iter()
        .filter(|&&v| v > 0)
        .map(|&v| (v as f64 / m).powf(p))
        .sum();
    Ok(p * m.log2() + scaled.log2())
}
