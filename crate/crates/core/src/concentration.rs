//! Concentration bounds for martingales with bounded jumps.
//!
//! [`azuma_bound`] uses only the jump bounds. [`refined_bound`] also uses a
//! bound on the conditional variance of each jump and replaces the Gaussian
//! exponent `delta^2 / 2` with the binary divergence
//! `D((delta + gamma)/(1 + gamma) || gamma/(1 + gamma))`, where
//! `gamma = sigma^2 / d^2` and `delta = alpha / d`.
//!
//! Bounds above 1 are returned as computed, without clamping.

use std::fmt;
use std::str::FromStr;

use crate::error::{domain, Error, Result};

/// Uniform jump bound `d` and conditional-variance bound `sigma_sq` of a
/// martingale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MartingaleParams {
    d: f64,
    sigma_sq: f64,
}

impl MartingaleParams {
    pub fn new(d: f64, sigma_sq: f64) -> Result<Self> {
        if !(d > 0.0 && d.is_finite()) {
            return Err(domain(format!(
                "jump bound d = {d} must be positive and finite"
            )));
        }
        if !(sigma_sq > 0.0) {
            return Err(domain(format!("sigma_sq = {sigma_sq} must be positive")));
        }
        // A conditional variance cannot exceed the squared jump bound.
        if sigma_sq > d * d * (1.0 + 1e-12) {
            return Err(domain(format!(
                "sigma_sq = {sigma_sq} exceeds d^2 = {}",
                d * d
            )));
        }
        Ok(Self {
            d,
            sigma_sq: sigma_sq.min(d * d),
        })
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn sigma_sq(&self) -> f64 {
        self.sigma_sq
    }

    pub fn gamma(&self) -> f64 {
        self.sigma_sq / (self.d * self.d)
    }

    pub fn delta(&self, alpha: f64) -> f64 {
        alpha / self.d
    }
}

/// One- or two-sided deviation event. The two-sided bound carries a factor 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Sidedness {
    #[default]
    OneSided,
    TwoSided,
}

impl Sidedness {
    pub fn factor(self) -> f64 {
        match self {
            Sidedness::OneSided => 1.0,
            Sidedness::TwoSided => 2.0,
        }
    }
}

impl FromStr for Sidedness {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "one" | "one-sided" => Ok(Sidedness::OneSided),
            "two" | "two-sided" => Ok(Sidedness::TwoSided),
            other => Err(domain(format!(
                "sidedness must be 'one' or 'two', got {other:?}"
            ))),
        }
    }
}

impl fmt::Display for Sidedness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sidedness::OneSided => "one",
            Sidedness::TwoSided => "two",
        })
    }
}

/// Azuma-Hoeffding: `P(|X_n - X_0| >= r) <= 2 exp(-r^2 / (2 sum d_k^2))`.
pub fn azuma_bound(jump_bounds: &[f64], r: f64) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(domain(format!(
            "azuma_bound: deviation r = {r} must be >= 0"
        )));
    }
    if let Some(bad) = jump_bounds.iter().find(|d| !(**d >= 0.0 && d.is_finite())) {
        return Err(domain(format!(
            "azuma_bound: jump bound {bad} must be >= 0"
        )));
    }
    if r == 0.0 {
        return Ok(2.0);
    }
    let sum_sq: f64 = jump_bounds.iter().map(|d| d * d).sum();
    if sum_sq == 0.0 {
        // A constant martingale cannot deviate.
        return Ok(0.0);
    }
    Ok(2.0 * (-r * r / (2.0 * sum_sq)).exp())
}

/// [`azuma_bound`] for `n` steps sharing the jump bound `d`.
pub fn azuma_bound_uniform(d: f64, n: u64, r: f64) -> Result<f64> {
    if !(d >= 0.0 && d.is_finite()) {
        return Err(domain(format!("azuma_bound: jump bound {d} must be >= 0")));
    }
    if !(r >= 0.0) {
        return Err(domain(format!(
            "azuma_bound: deviation r = {r} must be >= 0"
        )));
    }
    if r == 0.0 {
        return Ok(2.0);
    }
    let sum_sq = n as f64 * d * d;
    if sum_sq == 0.0 {
        return Ok(0.0);
    }
    Ok(2.0 * (-r * r / (2.0 * sum_sq)).exp())
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma <= 1.0 {
        Ok(())
    } else {
        Err(domain(format!("gamma = {gamma} outside (0, 1]")))
    }
}

/// Per-step exponent of the refined bound,
/// `D((delta + gamma)/(1 + gamma) || gamma/(1 + gamma))`.
///
/// Evaluated in the `ln_1p` form
/// `(delta+gamma)/(1+gamma) ln(1 + delta/gamma) + (1-delta)/(1+gamma) ln(1-delta)`
/// which keeps relative accuracy for small `delta`. Returns `+inf` for
/// `delta > 1`, where the deviation is impossible.
pub fn refined_exponent(delta: f64, gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    if !(delta >= 0.0) {
        return Err(domain(format!("delta = {delta} must be >= 0")));
    }
    if delta > 1.0 {
        return Ok(f64::INFINITY);
    }
    let head = (delta + gamma) / (1.0 + gamma) * (delta / gamma).ln_1p();
    let tail = if delta == 1.0 {
        0.0
    } else {
        (1.0 - delta) / (1.0 + gamma) * (-delta).ln_1p()
    };
    Ok((head + tail).max(0.0))
}

/// Refined concentration bound on `P(X_n - X_0 >= alpha n)` (one-sided) or
/// `P(|X_n - X_0| >= alpha n)` (two-sided). Exactly 0 when `alpha > d`.
pub fn refined_bound(
    params: &MartingaleParams,
    n: u64,
    alpha: f64,
    sided: Sidedness,
) -> Result<f64> {
    if n == 0 {
        return Err(domain("refined_bound: n must be >= 1"));
    }
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(domain(format!(
            "refined_bound: alpha = {alpha} must be finite and >= 0"
        )));
    }
    let exponent = refined_exponent(params.delta(alpha), params.gamma())?;
    if exponent.is_infinite() {
        return Ok(0.0);
    }
    Ok(sided.factor() * (-(n as f64) * exponent).exp())
}

/// One row of [`sqrt_scaling_report`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingRow {
    pub n: u64,
    /// Two-sided refined bound at deviation `alpha * sqrt(n)`.
    pub bound: f64,
    /// `2 exp(-delta^2 / (2 gamma))`.
    pub asymptote: f64,
    pub ratio: f64,
}

/// Refined bound at deviations growing like `sqrt(n)`, next to its
/// `n`-independent Gaussian limit.
pub fn sqrt_scaling_report(
    params: &MartingaleParams,
    alpha: f64,
    n_grid: &[u64],
) -> Result<Vec<ScalingRow>> {
    if n_grid.is_empty() {
        return Err(domain("sqrt_scaling_report: empty n grid"));
    }
    if n_grid.windows(2).any(|w| w[0] >= w[1]) || n_grid[0] == 0 {
        return Err(domain(
            "sqrt_scaling_report: n grid must be positive and increasing",
        ));
    }
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(domain(format!(
            "sqrt_scaling_report: alpha = {alpha} must be >= 0"
        )));
    }
    let delta = params.delta(alpha);
    let asymptote = 2.0 * (-delta * delta / (2.0 * params.gamma())).exp();
    n_grid
        .iter()
        .map(|&n| {
            let per_step = alpha / (n as f64).sqrt();
            let bound = refined_bound(params, n, per_step, Sidedness::TwoSided)?;
            Ok(ScalingRow {
                n,
                bound,
                asymptote,
                ratio: bound / asymptote,
            })
        })
        .collect()
}

/// `(1 + u) ln(1 + u)`, extended by continuity to 0 at `u = -1`.
pub fn xlogx(u: f64) -> Result<f64> {
    if !(u >= -1.0) {
        return Err(domain(format!("xlogx: u = {u} < -1")));
    }
    if u == -1.0 {
        return Ok(0.0);
    }
    Ok((1.0 + u) * u.ln_1p())
}

/// Polynomial lower bound on `(1 + u) ln(1 + u)`: `u + u^2/2` on `[-1, 0]`
/// and `u + u^2/2 - u^3/6` for `u >= 0`.
pub fn xlogx_floor(u: f64) -> Result<f64> {
    if !(u >= -1.0) {
        return Err(domain(format!("xlogx_floor: u = {u} < -1")));
    }
    let quad = u + u * u / 2.0;
    Ok(if u <= 0.0 {
        quad
    } else {
        quad - u * u * u / 6.0
    })
}

/// `delta^2/(2 gamma) - delta^3/(6 gamma^2 (1 + gamma))`, a lower bound on
/// [`refined_exponent`] for `delta` in `[0, 1]`.
pub fn quad_cubic_floor(delta: f64, gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    if !(0.0..=1.0).contains(&delta) {
        return Err(domain(format!(
            "quad_cubic_floor: delta = {delta} outside [0, 1]"
        )));
    }
    Ok(delta * delta / (2.0 * gamma) - delta.powi(3) / (6.0 * gamma * gamma * (1.0 + gamma)))
}
