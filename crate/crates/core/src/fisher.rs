//! Parametric families and the local behaviour of the exponents.
//!
//! As `theta' -> theta`, with `J` the Fisher information:
//! - `D(P_theta || P_theta') / h^2 -> J/2`
//! - `C(P_theta, P_theta') / h^2 -> J/8`, and the refined bound `E_L` has the same limit
//! - the Azuma bound divided by `h^2` tends to `a(theta) J/8` with `a` in `[0, 1]`
//!
//! [`limit_ratios`] measures these ratios on an offset ladder and
//! extrapolates them to `h = 0`.

use crate::error::{domain, Error, Result};
use crate::exponents::{
    azuma_error_exponent_bound, chernoff_information, refined_error_exponent_bound,
};
use crate::probdist::{kl_divergence, HypothesisPair, Pmf};
use crate::scalar::extrapolate_to_zero;

/// Offsets below this cannot resolve the PMF difference in `f64`.
pub const MIN_OFFSET: f64 = 1e-7;

/// Step used for the finite-difference score when no analytic score exists.
pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// A one-parameter family of strictly positive PMFs on a fixed alphabet.
///
/// Implementations must be pure: the same `theta` always yields the same
/// PMF, and evaluation may happen from several threads.
pub trait ParametricFamily: Send + Sync {
    fn name(&self) -> &str;

    fn labels(&self) -> Vec<String>;

    /// Open parameter interval `(lo, hi)`.
    fn domain(&self) -> (f64, f64);

    /// Probabilities at `theta`; only called for `theta` inside the domain.
    fn probs(&self, theta: f64) -> Vec<f64>;

    /// Analytic score `d/dtheta ln P_theta(x)`, if known.
    fn score(&self, _theta: f64) -> Option<Vec<f64>> {
        None
    }

    fn contains(&self, theta: f64) -> bool {
        let (lo, hi) = self.domain();
        theta > lo && theta < hi
    }

    fn pmf(&self, theta: f64) -> Result<Pmf> {
        if !self.contains(theta) {
            let (lo, hi) = self.domain();
            return Err(Error::OutOfDomain(format!(
                "{}: theta = {theta} outside ({lo}, {hi})",
                self.name()
            )));
        }
        Pmf::new(self.labels(), self.probs(theta))
    }
}

/// `P_theta = (1 - theta, theta)` on `{0, 1}`, `theta` in `(0, 1)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Bernoulli;

pub fn bernoulli_family() -> Bernoulli {
    Bernoulli
}

impl ParametricFamily for Bernoulli {
    fn name(&self) -> &str {
        "bernoulli"
    }

    fn labels(&self) -> Vec<String> {
        vec!["0".into(), "1".into()]
    }

    fn domain(&self) -> (f64, f64) {
        (0.0, 1.0)
    }

    fn probs(&self, theta: f64) -> Vec<f64> {
        vec![1.0 - theta, theta]
    }

    fn score(&self, theta: f64) -> Option<Vec<f64>> {
        Some(vec![-1.0 / (1.0 - theta), 1.0 / theta])
    }
}

/// Ternary family `(theta(1-alpha)/(1+theta), alpha, (1-alpha)/(1+theta))`
/// for `theta > 0`. Its Azuma-bound factor `a(theta)` is
/// `(1 - alpha) min(theta, 1/theta)`, so it vanishes as `alpha -> 1`.
#[derive(Debug, Clone, Copy)]
pub struct Ternary {
    alpha: f64,
}

pub fn ternary_family(alpha: f64) -> Result<Ternary> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(domain(format!(
            "ternary family: alpha = {alpha} outside (0, 1)"
        )));
    }
    Ok(Ternary { alpha })
}

impl Ternary {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

impl ParametricFamily for Ternary {
    fn name(&self) -> &str {
        "ternary"
    }

    fn labels(&self) -> Vec<String> {
        vec!["0".into(), "1".into(), "2".into()]
    }

    fn domain(&self) -> (f64, f64) {
        (0.0, f64::INFINITY)
    }

    fn probs(&self, theta: f64) -> Vec<f64> {
        let rest = (1.0 - self.alpha) / (1.0 + theta);
        vec![theta * rest, self.alpha, rest]
    }

    fn score(&self, theta: f64) -> Option<Vec<f64>> {
        Some(vec![
            1.0 / theta - 1.0 / (1.0 + theta),
            0.0,
            -1.0 / (1.0 + theta),
        ])
    }
}

/// How [`fisher_information_with`] obtains the score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScoreMethod {
    /// Analytic score when the family provides one, else finite differences.
    #[default]
    Auto,
    FiniteDifference,
}

fn check_offset<F: ParametricFamily + ?Sized>(family: &F, theta: f64, h: f64) -> Result<()> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(domain(format!("offset h = {h} must be positive")));
    }
    if !family.contains(theta - h) || !family.contains(theta + h) {
        let (lo, hi) = family.domain();
        return Err(Error::OutOfDomain(format!(
            "{}: theta +/- h = {theta} +/- {h} leaves ({lo}, {hi})",
            family.name()
        )));
    }
    Ok(())
}

/// `J(theta) = sum_x P_theta(x) score(x)^2`.
pub fn fisher_information<F: ParametricFamily + ?Sized>(
    family: &F,
    theta: f64,
    h: f64,
) -> Result<f64> {
    fisher_information_with(family, theta, h, ScoreMethod::Auto)
}

pub fn fisher_information_with<F: ParametricFamily + ?Sized>(
    family: &F,
    theta: f64,
    h: f64,
    method: ScoreMethod,
) -> Result<f64> {
    check_offset(family, theta, h)?;
    let center = family.pmf(theta)?;
    let analytic = match method {
        ScoreMethod::Auto => family.score(theta),
        ScoreMethod::FiniteDifference => None,
    };
    let score = match analytic {
        Some(s) => s,
        None => {
            let up = family.pmf(theta + h)?;
            let down = family.pmf(theta - h)?;
            up.ln_probs()
                .iter()
                .zip(down.ln_probs())
                .map(|(a, b)| (a - b) / (2.0 * h))
                .collect()
        }
    };
    Ok(center
        .probs()
        .iter()
        .zip(&score)
        .map(|(p, s)| p * s * s)
        .sum())
}

/// Side of `theta` on which the second distribution is taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Direction {
    /// `theta' = theta + h`.
    #[default]
    Above,
    /// `theta' = theta - h`.
    Below,
}

/// The four normalized measures at one offset `h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitRatios {
    /// `D(P_theta || P_theta') / h^2`, target `J/2`.
    pub divergence: f64,
    /// `C / h^2`, target `J/8`.
    pub chernoff: f64,
    /// `E_L / h^2`, target `J/8`.
    pub el: f64,
    /// Azuma bound over `h^2`, target `a(theta) J/8`.
    pub loosened: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OffsetRow {
    pub h: f64,
    pub ratios: LimitRatios,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FisherLimitReport {
    pub theta: f64,
    pub direction: Direction,
    pub j: f64,
    pub rows: Vec<OffsetRow>,
    /// Polynomial extrapolation of each ratio to `h = 0`.
    pub limits: LimitRatios,
    /// Extrapolated Azuma ratio divided by `J/8`.
    pub a_theta: f64,
}

impl FisherLimitReport {
    pub fn j_over_2(&self) -> f64 {
        self.j / 2.0
    }

    pub fn j_over_8(&self) -> f64 {
        self.j / 8.0
    }
}

pub fn limit_ratios<F: ParametricFamily + ?Sized>(
    family: &F,
    theta: f64,
    offsets: &[f64],
) -> Result<FisherLimitReport> {
    limit_ratios_toward(family, theta, offsets, Direction::Above)
}

pub fn limit_ratios_toward<F: ParametricFamily + ?Sized>(
    family: &F,
    theta: f64,
    offsets: &[f64],
    direction: Direction,
) -> Result<FisherLimitReport> {
    if offsets.is_empty() {
        return Err(domain("limit_ratios: no offsets given"));
    }
    for &h in offsets {
        if h > 0.0 && h < MIN_OFFSET {
            return Err(Error::DegenerateIncrements);
        }
        check_offset(family, theta, h)?;
    }
    for (i, a) in offsets.iter().enumerate() {
        if offsets[i + 1..].contains(a) {
            return Err(domain(format!("limit_ratios: offset {a} repeated")));
        }
    }

    let center = family.pmf(theta)?;
    let mut rows = Vec::with_capacity(offsets.len());
    for &h in offsets {
        let shifted = match direction {
            Direction::Above => theta + h,
            Direction::Below => theta - h,
        };
        let pair = HypothesisPair::new(center.clone(), family.pmf(shifted)?)?;
        let h2 = h * h;
        rows.push(OffsetRow {
            h,
            ratios: LimitRatios {
                divergence: kl_divergence(pair.p1(), pair.p2())? / h2,
                chernoff: chernoff_information(&pair).value / h2,
                el: refined_error_exponent_bound(&pair)? / h2,
                loosened: azuma_error_exponent_bound(&pair)? / h2,
            },
        });
    }

    let hs: Vec<f64> = rows.iter().map(|r| r.h).collect();
    let extrapolate = |pick: fn(&LimitRatios) -> f64| {
        let ys: Vec<f64> = rows.iter().map(|r| pick(&r.ratios)).collect();
        extrapolate_to_zero(&hs, &ys)
    };
    let limits = LimitRatios {
        divergence: extrapolate(|r| r.divergence),
        chernoff: extrapolate(|r| r.chernoff),
        el: extrapolate(|r| r.el),
        loosened: extrapolate(|r| r.loosened),
    };
    let j = fisher_information(
        family,
        theta,
        DEFAULT_FD_STEP.min(offsets.iter().copied().fold(f64::INFINITY, f64::min)),
    )?;
    Ok(FisherLimitReport {
        theta,
        direction,
        j,
        a_theta: limits.loosened / (j / 8.0),
        rows,
        limits,
    })
}
