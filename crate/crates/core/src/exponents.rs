//! Exact error exponents and their martingale lower bounds.
//!
//! The test decides H1 when the LLR exceeds `n * upper`, H2 when it falls
//! below `n * lower`, and declares an erasure in between. With
//! `lambda_1 = -upper` and `lambda_2 = -lower`, Cramér's theorem gives
//!
//! | probability | event | exponent |
//! |---|---|---|
//! | `alpha^(1)` | `L <= n upper` under H1 | `I(lambda_1)` |
//! | `alpha^(2)` | `L <= n lower` under H1 | `I(lambda_2)` |
//! | `beta^(1)`  | `L >= n lower` under H2 | `I(lambda_2) - lambda_2` |
//! | `beta^(2)`  | `L >= n upper` under H2 | `I(lambda_1) - lambda_1` |
//!
//! where `I` is the Fenchel-Legendre transform of the log-MGF `H` of
//! `ln(P2/P1)` under P1. Event 1 is "error or erasure", event 2 is "error".

use crate::concentration::refined_exponent;
use crate::error::{Error, Result};
use crate::probdist::{
    llr_stats, log_mgf, log_mgf_derivative, Hypothesis, HypothesisPair, LlrStats,
};
use crate::scalar::{bisect, golden_section, parabolic_polish};

/// Guard band on the admissibility window.
pub const THRESHOLD_GUARD: f64 = 1e-12;
/// Slack allowed when checking `azuma <= refined <= exact`.
pub const ORDERING_SLACK: f64 = 1e-12;

const T_TOLERANCE: f64 = 1e-12;
const MAX_BISECTION_ITERATIONS: usize = 200;
const MAX_BRACKET: f64 = 64.0;

/// Erasure decision thresholds in nats per sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    pub upper: f64,
    pub lower: f64,
}

impl Thresholds {
    pub fn new(upper: f64, lower: f64) -> Self {
        Self { upper, lower }
    }

    /// A single threshold, i.e. no erasure option.
    pub fn single(lambda: f64) -> Self {
        Self::new(lambda, lambda)
    }

    pub fn zero() -> Self {
        Self::single(0.0)
    }

    /// Checks `-D(P2||P1) < lower <= upper < D(P1||P2)` with a guard band.
    pub fn check(&self, pair: &HypothesisPair) -> Result<()> {
        let max = pair.d12();
        let min = -pair.d21();
        let ok = self.upper.is_finite()
            && self.lower.is_finite()
            && self.lower > min + THRESHOLD_GUARD
            && self.lower <= self.upper
            && self.upper < max - THRESHOLD_GUARD;
        if ok {
            Ok(())
        } else {
            Err(Error::InadmissibleThresholds {
                upper: self.upper,
                lower: self.lower,
                min,
                max,
            })
        }
    }

    /// `(lambda_1, lambda_2) = (-upper, -lower)`.
    pub fn lambdas(&self) -> (f64, f64) {
        (-self.upper, -self.lower)
    }
}

/// Which decision event a bound refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Event {
    /// Error or erasure (event 1).
    ErrorOrErasure,
    /// Error (event 2).
    Error,
}

impl Event {
    pub const BOTH: [Event; 2] = [Event::ErrorOrErasure, Event::Error];

    pub fn index(self) -> usize {
        match self {
            Event::ErrorOrErasure => 1,
            Event::Error => 2,
        }
    }
}

/// A value for each (hypothesis i, event j) pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComponentTable {
    values: [[f64; 2]; 2],
}

impl ComponentTable {
    pub fn from_fn(mut f: impl FnMut(Hypothesis, Event) -> f64) -> Self {
        let mut values = [[0.0; 2]; 2];
        for h in Hypothesis::BOTH {
            for e in Event::BOTH {
                values[h.index() - 1][e.index() - 1] = f(h, e);
            }
        }
        Self { values }
    }

    pub fn get(&self, hypothesis: Hypothesis, event: Event) -> f64 {
        self.values[hypothesis.index() - 1][event.index() - 1]
    }

    /// `min_i value(i, j)`.
    pub fn min_over_hypotheses(&self, event: Event) -> f64 {
        let j = event.index() - 1;
        self.values[0][j].min(self.values[1][j])
    }

    pub fn iter(&self) -> impl Iterator<Item = (Hypothesis, Event, f64)> + '_ {
        Hypothesis::BOTH
            .into_iter()
            .flat_map(move |h| Event::BOTH.into_iter().map(move |e| (h, e, self.get(h, e))))
    }
}

/// `I(r)` and the slope `t*` at which the supremum is attained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFunctionResult {
    pub value: f64,
    pub t_star: f64,
}

/// `I(r) = sup_t (t r - H(t))`.
///
/// Solves `H'(t) = r` by bisection. The bracket starts at `[0, 1]` and is
/// doubled outward up to `|t| = 64`.
pub fn rate_function(pair: &HypothesisPair, r: f64) -> Result<RateFunctionResult> {
    let llr21: Vec<f64> = pair.llr().iter().map(|v| -v).collect();
    let min = llr21.iter().copied().fold(f64::INFINITY, f64::min);
    let max = llr21.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(r > min && r < max) {
        return Err(Error::OutOfDomain(format!(
            "rate function argument {r} outside the open range ({min}, {max}) of ln(P2/P1)"
        )));
    }
    let g = |t: f64| log_mgf_derivative(pair, t) - r;

    let mut lo = 0.0_f64;
    while g(lo) > 0.0 {
        lo = if lo == 0.0 { -1.0 } else { 2.0 * lo };
        if lo < -MAX_BRACKET {
            return Err(Error::OutOfDomain(format!(
                "rate function: root of H'(t) = {r} lies below t = -{MAX_BRACKET}"
            )));
        }
    }
    let mut hi = 1.0_f64;
    while g(hi) < 0.0 {
        hi *= 2.0;
        if hi > MAX_BRACKET {
            return Err(Error::OutOfDomain(format!(
                "rate function: root of H'(t) = {r} lies above t = {MAX_BRACKET}"
            )));
        }
    }
    let t_star = bisect(
        g,
        lo,
        hi,
        T_TOLERANCE,
        MAX_BISECTION_ITERATIONS,
        "rate function bisection",
    )?;
    let value = (t_star * r - log_mgf(pair, t_star)).max(0.0);
    Ok(RateFunctionResult { value, t_star })
}

/// Chernoff information with its minimizing slope.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChernoffResult {
    pub value: f64,
    pub t_star: f64,
}

/// `C(P1, P2) = -min_{t in [0,1]} H(t)`.
///
/// Golden-section search on `[0, 1]`, then a three-point parabolic step.
pub fn chernoff_information(pair: &HypothesisPair) -> ChernoffResult {
    let h = |t: f64| log_mgf(pair, t);
    let (t, ht) = golden_section(h, 0.0, 1.0, T_TOLERANCE, 200);
    let (t_star, h_min) = parabolic_polish(h, t, ht, 1e-3, 0.0, 1.0);
    ChernoffResult {
        value: (-h_min).max(0.0),
        t_star,
    }
}

/// The six exact exponents for one pair of thresholds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactExponents {
    pub alpha1: f64,
    pub alpha2: f64,
    pub beta1: f64,
    pub beta2: f64,
    /// Error-or-erasure probability exponent.
    pub pe1: f64,
    /// Error probability exponent.
    pub pe2: f64,
    pub rate_at_lambda1: RateFunctionResult,
    pub rate_at_lambda2: RateFunctionResult,
}

impl ExactExponents {
    /// Exact exponent of the probability bounded by component `(i, j)`.
    pub fn component(&self, hypothesis: Hypothesis, event: Event) -> f64 {
        match (hypothesis, event) {
            (Hypothesis::H1, Event::ErrorOrErasure) => self.alpha1,
            (Hypothesis::H1, Event::Error) => self.alpha2,
            (Hypothesis::H2, Event::ErrorOrErasure) => self.beta1,
            (Hypothesis::H2, Event::Error) => self.beta2,
        }
    }

    pub fn pe(&self, event: Event) -> f64 {
        match event {
            Event::ErrorOrErasure => self.pe1,
            Event::Error => self.pe2,
        }
    }
}

pub fn exact_exponents(pair: &HypothesisPair, th: &Thresholds) -> Result<ExactExponents> {
    th.check(pair)?;
    let (lambda1, lambda2) = th.lambdas();
    let rate1 = rate_function(pair, lambda1)?;
    let rate2 = if lambda2 == lambda1 {
        rate1
    } else {
        rate_function(pair, lambda2)?
    };
    let alpha1 = rate1.value;
    let alpha2 = rate2.value;
    let beta1 = (rate2.value - lambda2).max(0.0);
    let beta2 = (rate1.value - lambda1).max(0.0);
    Ok(ExactExponents {
        alpha1,
        alpha2,
        beta1,
        beta2,
        pe1: alpha1.min(beta1),
        pe2: alpha2.min(beta2),
        rate_at_lambda1: rate1,
        rate_at_lambda2: rate2,
    })
}

/// Martingale quantities shared by the refined and Azuma bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundInputs {
    pub stats: [LlrStats; 2],
    /// `epsilon_{i,j}`: distance from the martingale start to the event
    /// boundary, per sample.
    pub epsilons: ComponentTable,
    /// `delta_{i,j} = epsilon_{i,j} / d_i`.
    pub deltas: ComponentTable,
}

impl BoundInputs {
    pub fn stats(&self, hypothesis: Hypothesis) -> &LlrStats {
        &self.stats[hypothesis.index() - 1]
    }

    pub fn gammas(&self) -> [f64; 2] {
        [self.stats[0].gamma, self.stats[1].gamma]
    }
}

pub fn bound_inputs(pair: &HypothesisPair, th: &Thresholds) -> Result<BoundInputs> {
    let stats = [
        llr_stats(pair, Hypothesis::H1)?,
        llr_stats(pair, Hypothesis::H2)?,
    ];
    th.check(pair)?;
    let (d12, d21) = (pair.d12(), pair.d21());
    let epsilons = ComponentTable::from_fn(|h, e| match (h, e) {
        (Hypothesis::H1, Event::ErrorOrErasure) => d12 - th.upper,
        (Hypothesis::H2, Event::ErrorOrErasure) => d21 + th.lower,
        (Hypothesis::H1, Event::Error) => d12 - th.lower,
        (Hypothesis::H2, Event::Error) => d21 + th.upper,
    });
    let deltas = ComponentTable::from_fn(|h, e| epsilons.get(h, e) / stats[h.index() - 1].d);
    Ok(BoundInputs {
        stats,
        epsilons,
        deltas,
    })
}

/// Lower bounds on the exponents: one value per component and the minimum
/// over hypotheses for each event.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowerBounds {
    pub components: ComponentTable,
    pub pe1: f64,
    pub pe2: f64,
}

impl LowerBounds {
    fn from_components(components: ComponentTable) -> Self {
        Self {
            pe1: components.min_over_hypotheses(Event::ErrorOrErasure),
            pe2: components.min_over_hypotheses(Event::Error),
            components,
        }
    }

    pub fn pe(&self, event: Event) -> f64 {
        match event {
            Event::ErrorOrErasure => self.pe1,
            Event::Error => self.pe2,
        }
    }
}

fn refined_from_inputs(inputs: &BoundInputs) -> Result<LowerBounds> {
    let mut err = None;
    let components = ComponentTable::from_fn(|h, e| {
        match refined_exponent(inputs.deltas.get(h, e), inputs.stats(h).gamma) {
            Ok(v) => v,
            Err(e) => {
                err.get_or_insert(e);
                f64::NAN
            }
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(LowerBounds::from_components(components)),
    }
}

fn azuma_from_inputs(inputs: &BoundInputs) -> LowerBounds {
    LowerBounds::from_components(ComponentTable::from_fn(|h, e| {
        let d = inputs.deltas.get(h, e);
        d * d / 2.0
    }))
}

/// Exponent lower bounds from the refined concentration inequality.
/// A component with `delta > 1` is `+inf` (the event is impossible).
pub fn refined_lower_bounds(pair: &HypothesisPair, th: &Thresholds) -> Result<LowerBounds> {
    refined_from_inputs(&bound_inputs(pair, th)?)
}

/// Exponent lower bounds `delta_{i,j}^2 / 2` from the Azuma inequality.
pub fn azuma_lower_bounds(pair: &HypothesisPair, th: &Thresholds) -> Result<LowerBounds> {
    Ok(azuma_from_inputs(&bound_inputs(pair, th)?))
}

/// Zero-threshold refined bound `E_L = min_i D((delta_i+gamma_i)/(1+gamma_i) || gamma_i/(1+gamma_i))`
/// with `delta_1 = D(P1||P2)/d_1` and `delta_2 = D(P2||P1)/d_2`.
pub fn refined_error_exponent_bound(pair: &HypothesisPair) -> Result<f64> {
    Ok(refined_lower_bounds(pair, &Thresholds::zero())?.pe2)
}

/// Zero-threshold loosened bound `min_i delta_i^2 / 2`.
pub fn azuma_error_exponent_bound(pair: &HypothesisPair) -> Result<f64> {
    Ok(azuma_lower_bounds(pair, &Thresholds::zero())?.pe2)
}

/// Reference values for the mirrored pair `(0.4, 0.6)` vs
/// `(0.6, 0.4)` at zero threshold. They weight the second-hypothesis jump
/// variance by P1 instead of P2, hence `gamma2 = 7/9` where the definition
/// gives 2/3, and a refined bound of 1.77e-2 instead of the Chernoff value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceValues {
    pub chernoff: f64,
    pub refined_lb: f64,
    pub azuma_lb: f64,
    pub gamma1: f64,
    pub gamma2: f64,
}

const MIRRORED_BENCHMARK: ReferenceValues = ReferenceValues {
    chernoff: 2.04e-2,
    refined_lb: 1.77e-2,
    azuma_lb: 1.39e-2,
    gamma1: 2.0 / 3.0,
    gamma2: 7.0 / 9.0,
};

fn reference_values(pair: &HypothesisPair, th: &Thresholds) -> Option<ReferenceValues> {
    if pair.len() != 2 || th.upper != 0.0 || th.lower != 0.0 {
        return None;
    }
    let close = |a: &[f64], b: [f64; 2]| a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12);
    let (p1, p2) = (pair.p1().probs(), pair.p2().probs());
    let matches = (close(p1, [0.4, 0.6]) && close(p2, [0.6, 0.4]))
        || (close(p1, [0.6, 0.4]) && close(p2, [0.4, 0.6]));
    matches.then_some(MIRRORED_BENCHMARK)
}

/// Exact exponents, refined and Azuma lower bounds side by side.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentReport {
    pub thresholds: Thresholds,
    pub exact: ExactExponents,
    pub refined: LowerBounds,
    pub azuma: LowerBounds,
    pub inputs: BoundInputs,
    /// Refined over Azuma exponent, per component.
    pub improvement: ComponentTable,
    /// `1 / gamma_i`, the second-order improvement factor for small deltas.
    pub second_order_factor: [f64; 2],
    pub reference: Option<ReferenceValues>,
}

impl ExponentReport {
    pub fn gammas(&self) -> [f64; 2] {
        self.inputs.gammas()
    }
}

pub fn compare_report(pair: &HypothesisPair, th: &Thresholds) -> Result<ExponentReport> {
    let inputs = bound_inputs(pair, th)?;
    let exact = exact_exponents(pair, th)?;
    let refined = refined_from_inputs(&inputs)?;
    let azuma = azuma_from_inputs(&inputs);

    for (h, e, r) in refined.components.iter() {
        let a = azuma.components.get(h, e);
        let x = exact.component(h, e);
        if a > r + ORDERING_SLACK || r > x + ORDERING_SLACK {
            return Err(Error::InvariantViolation(format!(
                "component ({},{}) ordering azuma {a} <= refined {r} <= exact {x} fails",
                h.index(),
                e.index()
            )));
        }
    }
    for e in Event::BOTH {
        let (a, r, x) = (azuma.pe(e), refined.pe(e), exact.pe(e));
        if a > r + ORDERING_SLACK || r > x + ORDERING_SLACK {
            return Err(Error::InvariantViolation(format!(
                "P_e^({}) ordering azuma {a} <= refined {r} <= exact {x} fails",
                e.index()
            )));
        }
    }

    let improvement =
        ComponentTable::from_fn(|h, e| refined.components.get(h, e) / azuma.components.get(h, e));
    let gammas = inputs.gammas();
    Ok(ExponentReport {
        thresholds: *th,
        exact,
        refined,
        azuma,
        improvement,
        second_order_factor: [1.0 / gammas[0], 1.0 / gammas[1]],
        reference: reference_values(pair, th),
        inputs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::probdist::binary_kl;
    use proptest::prelude::*;

    fn mirrored_pair() -> HypothesisPair {
        HypothesisPair::from_probs(vec![0.4, 0.6], vec![0.6, 0.4]).unwrap()
    }

    fn near_fair_pair() -> HypothesisPair {
        HypothesisPair::from_probs(vec![0.49, 0.51], vec![0.51, 0.49]).unwrap()
    }

    /// Dense grid supremum of `t r - H(t)` followed by a fine local grid.
    fn grid_rate(pair: &HypothesisPair, r: f64, lo: f64, hi: f64) -> f64 {
        let steps = ((hi - lo) / 1e-4).round() as usize;
        let (mut best_t, mut best) = (lo, f64::NEG_INFINITY);
        for k in 0..=steps {
            let t = lo + k as f64 * 1e-4;
            let v = t * r - log_mgf(pair, t);
            if v > best {
                best = v;
                best_t = t;
            }
        }
        for k in -1000..=1000 {
            let t = best_t + k as f64 * 1e-7;
            best = best.max(t * r - log_mgf(pair, t));
        }
        best
    }

    #[test]
    fn thresholds_admissibility() {
        let pair = mirrored_pair();
        assert!(Thresholds::zero().check(&pair).is_ok());
        assert!(Thresholds::new(0.02, -0.02).check(&pair).is_ok());
        assert!(matches!(
            Thresholds::single(0.9).check(&pair),
            Err(Error::InadmissibleThresholds { .. })
        ));
        assert!(Thresholds::new(-0.01, 0.01).check(&pair).is_err());
        assert!(Thresholds::single(pair.d12()).check(&pair).is_err());
        assert!(Thresholds::single(-pair.d21()).check(&pair).is_err());
    }

    #[test]
    fn rate_function_at_the_means() {
        let pair = HypothesisPair::from_probs(vec![0.2, 0.5, 0.3], vec![0.4, 0.1, 0.5]).unwrap();
        let at_mean1 = rate_function(&pair, -pair.d12()).unwrap();
        assert!(at_mean1.value.abs() < 1e-12);
        assert!(at_mean1.t_star.abs() < 1e-9);
        let r = pair.d21();
        let at_mean2 = rate_function(&pair, r).unwrap();
        assert!((at_mean2.value - r).abs() < 1e-12);
        assert!((at_mean2.t_star - 1.0).abs() < 1e-9);
    }

    #[test]
    fn rate_function_mirrored_pair_zero() {
        let i0 = rate_function(&mirrored_pair(), 0.0).unwrap();
        assert!((i0.value - 2.04e-2).abs() < 5e-5);
        assert!((i0.value - chernoff_information(&mirrored_pair()).value).abs() < 1e-10);
    }

    #[test]
    fn rate_function_out_of_domain() {
        let pair = mirrored_pair();
        let edge = (1.5f64).ln();
        assert!(matches!(
            rate_function(&pair, edge),
            Err(Error::OutOfDomain(_))
        ));
        assert!(matches!(
            rate_function(&pair, -edge - 1.0),
            Err(Error::OutOfDomain(_))
        ));
    }

    #[test]
    fn rate_function_matches_grid_oracle() {
        let pair =
            HypothesisPair::from_probs(vec![0.1, 0.2, 0.3, 0.4], vec![0.3, 0.3, 0.2, 0.2]).unwrap();
        for r in [-0.3, -0.1, 0.0, 0.2, 0.5] {
            let fast = rate_function(&pair, r).unwrap();
            let slow = grid_rate(&pair, r, -8.0, 8.0);
            assert!((fast.value - slow).abs() < 1e-8, "r = {r}");
            let residual = fast.t_star * r - log_mgf(&pair, fast.t_star) - fast.value;
            assert!(residual.abs() < 1e-15);
        }
    }

    #[test]
    fn chernoff_examples() {
        let same = HypothesisPair::from_probs(vec![0.3, 0.7], vec![0.3, 0.7]).unwrap();
        assert!(chernoff_information(&same).value.abs() < 1e-15);

        let c = chernoff_information(&mirrored_pair());
        let closed = -(2.0 * 0.24f64.sqrt()).ln();
        assert!((c.value - closed).abs() < 1e-14);
        assert!((c.t_star - 0.5).abs() < 1e-6);

        let c2 = chernoff_information(&near_fair_pair());
        assert!((c2.value - 2.000e-4).abs() < 5e-7);
    }

    #[test]
    fn chernoff_symmetry() {
        let pair = HypothesisPair::from_probs(vec![0.1, 0.6, 0.3], vec![0.5, 0.2, 0.3]).unwrap();
        let a = chernoff_information(&pair).value;
        let b = chernoff_information(&pair.swapped()).value;
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn exact_exponents_zero_threshold() {
        let ex = exact_exponents(&mirrored_pair(), &Thresholds::zero()).unwrap();
        assert!((ex.pe1 - 2.04e-2).abs() < 5e-5);
        assert_eq!(ex.pe1, ex.pe2);
    }

    #[test]
    fn exact_exponents_single_threshold_collapses() {
        let pair = HypothesisPair::from_probs(vec![0.2, 0.3, 0.5], vec![0.3, 0.4, 0.3]).unwrap();
        let lambda = 0.01;
        let ex = exact_exponents(&pair, &Thresholds::single(lambda)).unwrap();
        let i = rate_function(&pair, -lambda).unwrap().value;
        assert!((ex.pe1 - i.min(i + lambda)).abs() < 1e-15);
        assert_eq!(ex.pe1, ex.pe2);
    }

    #[test]
    fn exact_exponents_against_grid() {
        let pair = mirrored_pair();
        let th = Thresholds::new(0.02, -0.02);
        let ex = exact_exponents(&pair, &th).unwrap();
        let i1 = grid_rate(&pair, -0.02, -5.0, 5.0);
        let i2 = grid_rate(&pair, 0.02, -5.0, 5.0);
        assert!((ex.alpha1 - i1).abs() < 1e-8);
        assert!((ex.alpha2 - i2).abs() < 1e-8);
        assert!((ex.beta1 - (i2 - 0.02)).abs() < 1e-8);
        assert!((ex.beta2 - (i1 + 0.02)).abs() < 1e-8);
        assert!(ex.pe1 <= ex.pe2);
    }

    #[test]
    fn refined_mirrored_pair_component() {
        let lb = refined_lower_bounds(&mirrored_pair(), &Thresholds::zero()).unwrap();
        let c = lb.components.get(Hypothesis::H1, Event::Error);
        assert!((c - binary_kl(0.5, 0.4).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn refined_near_fair_pair() {
        let el = refined_error_exponent_bound(&near_fair_pair()).unwrap();
        assert!((el - 1.997e-4).abs() < 5e-7);
    }

    #[test]
    fn refined_identical_pair_rejected() {
        let same = HypothesisPair::from_probs(vec![0.3, 0.7], vec![0.3, 0.7]).unwrap();
        assert_eq!(
            refined_lower_bounds(&same, &Thresholds::zero()).unwrap_err(),
            Error::DegenerateIncrements
        );
    }

    #[test]
    fn near_identical_pair_bounds_vanish() {
        let pair =
            HypothesisPair::from_probs(vec![0.5, 0.5], vec![0.5 + 1e-6, 0.5 - 1e-6]).unwrap();
        let report = compare_report(&pair, &Thresholds::zero()).unwrap();
        assert!(report.exact.pe2 < 1e-11);
        assert!(report.refined.pe2 < 1e-11);
        assert!(report.azuma.pe2 <= report.refined.pe2 + ORDERING_SLACK);
    }

    #[test]
    fn azuma_mirrored_pair() {
        let el = azuma_error_exponent_bound(&mirrored_pair()).unwrap();
        assert!((el - 1.0 / 72.0).abs() < 1e-12);
        assert!((el - 1.39e-2).abs() < 5e-5);
    }

    #[test]
    fn compare_report_mirrored_pair() {
        let report = compare_report(&mirrored_pair(), &Thresholds::zero()).unwrap();
        assert!((report.exact.pe2 - 2.04e-2).abs() < 5e-5);
        assert!((report.azuma.pe2 - 1.0 / 72.0).abs() < 1e-12);
        assert!((report.gammas()[1] - 2.0 / 3.0).abs() < 1e-12);
        assert!((report.second_order_factor[0] - 1.5).abs() < 1e-12);
        let reference = report.reference.expect("benchmark pair is annotated");
        assert_eq!(reference.gamma2, 7.0 / 9.0);

        let other = HypothesisPair::from_probs(vec![0.3, 0.7], vec![0.6, 0.4]).unwrap();
        assert!(compare_report(&other, &Thresholds::zero())
            .unwrap()
            .reference
            .is_none());
    }

    fn pair_strategy() -> impl Strategy<Value = HypothesisPair> {
        (2usize..=5).prop_flat_map(|k| {
            (
                proptest::collection::vec(0.05f64..1.0, k),
                proptest::collection::vec(0.05f64..1.0, k),
            )
                .prop_filter_map("distinct pair", |(a, b)| {
                    let sa: f64 = a.iter().sum();
                    let sb: f64 = b.iter().sum();
                    let a: Vec<f64> = a.iter().map(|x| x / sa).collect();
                    let b: Vec<f64> = b.iter().map(|x| x / sb).collect();
                    let gap = a
                        .iter()
                        .zip(&b)
                        .map(|(x, y)| (x - y).abs())
                        .fold(0.0, f64::max);
                    (gap > 1e-3).then(|| HypothesisPair::from_probs(a, b).unwrap())
                })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn ordering_holds(pair in pair_strategy(), u in 0.0f64..1.0, v in 0.0f64..1.0) {
            let lo = -pair.d21() * 0.95;
            let hi = pair.d12() * 0.95;
            let a = lo + (hi - lo) * u;
            let b = lo + (hi - lo) * v;
            let th = Thresholds::new(a.max(b), a.min(b));
            let report = compare_report(&pair, &th).unwrap();
            for e in Event::BOTH {
                prop_assert!(report.azuma.pe(e) <= report.refined.pe(e) + ORDERING_SLACK);
                prop_assert!(report.refined.pe(e) <= report.exact.pe(e) + ORDERING_SLACK);
            }
        }

        #[test]
        fn erasure_monotonicity(pair in pair_strategy(), w in 0.0f64..0.9, extra in 0.0f64..0.5) {
            let narrow = Thresholds::new(pair.d12() * w * 0.5, -pair.d21() * w * 0.5);
            let wide = Thresholds::new(
                narrow.upper + (pair.d12() * 0.95 - narrow.upper) * extra,
                narrow.lower - (narrow.lower + pair.d21() * 0.95) * extra,
            );
            let n = exact_exponents(&pair, &narrow).unwrap();
            let w = exact_exponents(&pair, &wide).unwrap();
            prop_assert!(w.pe1 <= n.pe1 + 1e-12);
            prop_assert!(w.pe2 >= n.pe2 - 1e-12);
        }

        #[test]
        fn chernoff_equals_rate_at_zero(pair in pair_strategy()) {
            let c = chernoff_information(&pair).value;
            let i0 = rate_function(&pair, 0.0).unwrap().value;
            prop_assert!((c - i0).abs() < 1e-10);
            let swapped = chernoff_information(&pair.swapped()).value;
            prop_assert!((c - swapped).abs() < 1e-12);
        }

        #[test]
        fn rate_function_convex_nonnegative(pair in pair_strategy(), a in 0.05f64..0.95, b in 0.05f64..0.95) {
            let llr21: Vec<f64> = pair.llr().iter().map(|v| -v).collect();
            let min = llr21.iter().copied().fold(f64::INFINITY, f64::min);
            let max = llr21.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let ra = min + (max - min) * a;
            let rb = min + (max - min) * b;
            let ia = rate_function(&pair, ra).unwrap().value;
            let ib = rate_function(&pair, rb).unwrap().value;
            let im = rate_function(&pair, 0.5 * (ra + rb)).unwrap().value;
            prop_assert!(ia >= 0.0 && ib >= 0.0);
            prop_assert!(im <= 0.5 * (ia + ib) + 1e-10);
        }
    }
}
