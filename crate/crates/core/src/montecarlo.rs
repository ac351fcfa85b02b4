//! Simulation-side checks of the exponents.
//!
//! Every trial draws its randomness from a ChaCha stream keyed by the master
//! seed and selected by `(purpose, hypothesis, trial index)`, and trial
//! results are merged by integer addition. Results are therefore identical
//! for any rayon pool size.
//!
//! The LLR of a sample is evaluated from its symbol counts,
//! `L = sum_x count(x) ln(P1(x)/P2(x))`, the same expression the exact
//! binomial oracle uses, so ties with `n * lambda` are classified
//! identically by both. Events follow the probability definitions literally:
//! `alpha` events use `L <= n lambda`, `beta` events use `L >= n lambda`, and an
//! outcome on a threshold counts toward both.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::exponents::Thresholds;
use crate::probdist::{log_sum_exp, Hypothesis, HypothesisPair};

/// Two-sided 95% standard normal quantile.
pub const WILSON_Z: f64 = 1.959_963_984_540_054;

/// Relative tolerance, scaled by `n max|llr|`, within which `L` is
/// considered equal to a threshold.
pub const TIE_TOLERANCE: f64 = 1e-12;

const MAX_TRIAL_INDEX: u64 = 1 << 48;

#[derive(Debug, Clone, Copy)]
enum Purpose {
    Test = 1,
    Trace = 2,
    Sll = 3,
}

fn stream_rng(seed: u64, purpose: Purpose, hypothesis: Hypothesis, index: u64) -> ChaCha8Rng {
    debug_assert!(index < MAX_TRIAL_INDEX);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((purpose as u64) << 56) | ((hypothesis.index() as u64) << 48) | index);
    rng
}

fn sampler(pair: &HypothesisPair, hypothesis: Hypothesis) -> WeightedIndex<f64> {
    WeightedIndex::new(pair.pmf(hypothesis).probs()).expect("PMF weights are positive and finite")
}

fn llr_from_counts(llr: &[f64], counts: &[u64]) -> f64 {
    llr.iter().zip(counts).map(|(l, &c)| c as f64 * l).sum()
}

/// Threshold comparisons shared by the simulator and the exact oracle.
#[derive(Debug, Clone, Copy)]
struct DecisionRule {
    upper: f64,
    lower: f64,
    tol: f64,
}

impl DecisionRule {
    fn new(pair: &HypothesisPair, th: &Thresholds, n: u64) -> Self {
        let scale = pair.llr().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let n = n as f64;
        Self {
            upper: n * th.upper,
            lower: n * th.lower,
            tol: TIE_TOLERANCE * n * scale.max(1.0),
        }
    }

    fn at_most(&self, l: f64, bound: f64) -> bool {
        l <= bound + self.tol
    }

    fn at_least(&self, l: f64, bound: f64) -> bool {
        l >= bound - self.tol
    }

    /// `(alpha1, alpha2)` events, meaningful under H1.
    fn alpha_events(&self, l: f64) -> (bool, bool) {
        (self.at_most(l, self.upper), self.at_most(l, self.lower))
    }

    /// `(beta1, beta2)` events, meaningful under H2.
    fn beta_events(&self, l: f64) -> (bool, bool) {
        (self.at_least(l, self.lower), self.at_least(l, self.upper))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    /// Samples per trial.
    pub n: u64,
    /// Trials per hypothesis.
    pub trials: u64,
    pub seed: u64,
    pub thresholds: Thresholds,
    /// Prior of H1; the prior of H2 is `1 - pi1`.
    pub pi1: f64,
}

impl SimConfig {
    pub fn new(n: u64, trials: u64, seed: u64, thresholds: Thresholds, pi1: f64) -> Self {
        Self {
            n,
            trials,
            seed,
            thresholds,
            pi1,
        }
    }

    pub fn pi2(&self) -> f64 {
        1.0 - self.pi1
    }

    pub fn validate(&self, pair: &HypothesisPair) -> Result<()> {
        if self.n == 0 {
            return Err(domain("simulation: n must be >= 1"));
        }
        if self.trials == 0 || self.trials >= MAX_TRIAL_INDEX {
            return Err(domain(format!(
                "simulation: trials = {} must be in [1, 2^48)",
                self.trials
            )));
        }
        if !(self.pi1 > 0.0 && self.pi1 < 1.0) {
            return Err(domain(format!(
                "simulation: prior pi1 = {} outside (0, 1)",
                self.pi1
            )));
        }
        self.thresholds.check(pair)
    }
}

/// Closed interval `[lower, upper]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }
}

/// Wilson score interval for `successes` out of `trials` at normal quantile `z`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> Interval {
    let m = trials as f64;
    let p = successes as f64 / m;
    let z2 = z * z;
    let denom = 1.0 + z2 / m;
    let center = (p + z2 / (2.0 * m)) / denom;
    let half = z * (p * (1.0 - p) / m + z2 / (4.0 * m * m)).sqrt() / denom;
    Interval {
        lower: if successes == 0 {
            0.0
        } else {
            (center - half).max(0.0)
        },
        upper: if successes == trials {
            1.0
        } else {
            (center + half).min(1.0)
        },
    }
}

/// A probability estimate with its 95% interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub interval: Interval,
    /// Event count, for estimates that are plain frequencies.
    pub count: Option<u64>,
    pub trials: u64,
    /// `-ln(value) / n`, absent when the estimate is 0.
    pub empirical_exponent: Option<f64>,
    /// `3 / trials` upper bound reported for zero counts.
    pub rule_of_three: Option<f64>,
}

impl Estimate {
    fn frequency(count: u64, trials: u64, n: u64) -> Self {
        let value = count as f64 / trials as f64;
        Self {
            value,
            interval: wilson_interval(count, trials, WILSON_Z),
            count: Some(count),
            trials,
            empirical_exponent: (count > 0).then(|| -value.ln() / n as f64),
            rule_of_three: (count == 0).then(|| 3.0 / trials as f64),
        }
    }

    /// Prior-weighted combination. Its interval combines the endpoints of
    /// the two component intervals.
    fn mixture(a: &Estimate, pi_a: f64, b: &Estimate, pi_b: f64, n: u64) -> Self {
        let value = pi_a * a.value + pi_b * b.value;
        Self {
            value,
            interval: Interval {
                lower: pi_a * a.interval.lower + pi_b * b.interval.lower,
                upper: pi_a * a.interval.upper + pi_b * b.interval.upper,
            },
            count: None,
            trials: a.trials,
            empirical_exponent: (value > 0.0).then(|| -value.ln() / n as f64),
            rule_of_three: (value == 0.0).then(|| 3.0 / a.trials as f64),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
struct EventCounts {
    first: u64,
    second: u64,
}

impl EventCounts {
    fn merge(self, other: Self) -> Self {
        Self {
            first: self.first + other.first,
            second: self.second + other.second,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimResult {
    pub n: u64,
    pub trials: u64,
    pub alpha1: Estimate,
    pub alpha2: Estimate,
    pub beta1: Estimate,
    pub beta2: Estimate,
    pub pe1: Estimate,
    pub pe2: Estimate,
}

fn count_events(
    pair: &HypothesisPair,
    config: &SimConfig,
    hypothesis: Hypothesis,
    rule: &DecisionRule,
) -> EventCounts {
    let llr = pair.llr();
    let dist = sampler(pair, hypothesis);
    let k = pair.len();
    (0..config.trials)
        .into_par_iter()
        .map_init(
            || vec![0u64; k],
            |counts, trial| {
                counts.iter_mut().for_each(|c| *c = 0);
                let mut rng = stream_rng(config.seed, Purpose::Test, hypothesis, trial);
                for _ in 0..config.n {
                    counts[dist.sample(&mut rng)] += 1;
                }
                let l = llr_from_counts(&llr, counts);
                let (first, second) = match hypothesis {
                    Hypothesis::H1 => rule.alpha_events(l),
                    Hypothesis::H2 => rule.beta_events(l),
                };
                EventCounts {
                    first: first as u64,
                    second: second as u64,
                }
            },
        )
        .reduce(EventCounts::default, EventCounts::merge)
}

/// Monte Carlo estimates of the error and error-or-erasure probabilities.
///
/// Runs `config.trials` trials under each hypothesis on the current rayon
/// pool.
pub fn simulate_test(pair: &HypothesisPair, config: &SimConfig) -> Result<SimResult> {
    config.validate(pair)?;
    let rule = DecisionRule::new(pair, &config.thresholds, config.n);
    let under1 = count_events(pair, config, Hypothesis::H1, &rule);
    let under2 = count_events(pair, config, Hypothesis::H2, &rule);
    let (n, m) = (config.n, config.trials);
    let alpha1 = Estimate::frequency(under1.first, m, n);
    let alpha2 = Estimate::frequency(under1.second, m, n);
    let beta1 = Estimate::frequency(under2.first, m, n);
    let beta2 = Estimate::frequency(under2.second, m, n);
    let (pi1, pi2) = (config.pi1, config.pi2());
    Ok(SimResult {
        n,
        trials: m,
        pe1: Estimate::mixture(&alpha1, pi1, &beta1, pi2, n),
        pe2: Estimate::mixture(&alpha2, pi1, &beta2, pi2, n),
        alpha1,
        alpha2,
        beta1,
        beta2,
    })
}

/// Exact tail probabilities for a binary alphabet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactTail {
    pub alpha1: f64,
    pub alpha2: f64,
    pub beta1: f64,
    pub beta2: f64,
}

impl ExactTail {
    pub fn pe1(&self, pi1: f64) -> f64 {
        pi1 * self.alpha1 + (1.0 - pi1) * self.beta1
    }

    pub fn pe2(&self, pi1: f64) -> f64 {
        pi1 * self.alpha2 + (1.0 - pi1) * self.beta2
    }
}

/// Exact `alpha` and `beta` probabilities on a binary alphabet, where the
/// LLR depends on the sample only through the count of the first symbol.
/// Binomial terms are accumulated in the log domain.
pub fn exact_binary_tail(pair: &HypothesisPair, n: u64, th: &Thresholds) -> Result<ExactTail> {
    if pair.len() != 2 {
        return Err(Error::NotBinary(pair.len()));
    }
    if n == 0 {
        return Err(domain("exact_binary_tail: n must be >= 1"));
    }
    th.check(pair)?;
    let rule = DecisionRule::new(pair, th, n);
    let llr = pair.llr();

    let mut ln_choose = Vec::with_capacity(n as usize + 1);
    let mut acc = 0.0;
    ln_choose.push(acc);
    for k in 1..=n {
        acc += ((n - k + 1) as f64).ln() - (k as f64).ln();
        ln_choose.push(acc);
    }

    let mut terms: [Vec<f64>; 4] = Default::default();
    let (l1a, l1b) = (pair.p1().ln_probs()[0], pair.p1().ln_probs()[1]);
    let (l2a, l2b) = (pair.p2().ln_probs()[0], pair.p2().ln_probs()[1]);
    for k in 0..=n {
        let counts = [k, n - k];
        let l = llr_from_counts(&llr, &counts);
        let (kf, rest) = (k as f64, (n - k) as f64);
        let c = ln_choose[k as usize];
        let under1 = c + kf * l1a + rest * l1b;
        let under2 = c + kf * l2a + rest * l2b;
        let (a1, a2) = rule.alpha_events(l);
        let (b1, b2) = rule.beta_events(l);
        for (hit, slot, term) in [
            (a1, 0, under1),
            (a2, 1, under1),
            (b1, 2, under2),
            (b2, 3, under2),
        ] {
            if hit {
                terms[slot].push(term);
            }
        }
    }
    let prob = |v: &Vec<f64>| {
        if v.is_empty() {
            0.0
        } else {
            log_sum_exp(v).exp().min(1.0)
        }
    };
    Ok(ExactTail {
        alpha1: prob(&terms[0]),
        alpha2: prob(&terms[1]),
        beta1: prob(&terms[2]),
        beta2: prob(&terms[3]),
    })
}

fn check_points(points: &[(f64, f64)]) -> Result<()> {
    if points.len() < 3 {
        return Err(domain("empirical_exponent: need at least 3 points"));
    }
    if let Some((n, p)) = points.iter().find(|(_, p)| !(*p > 0.0 && *p < 1.0)) {
        return Err(domain(format!(
            "empirical_exponent: estimate {p} at n = {n} outside (0, 1); increase trials or reduce n"
        )));
    }
    let first = points[0].0;
    if points.iter().all(|(n, _)| *n == first) {
        return Err(domain("empirical_exponent: all points share the same n"));
    }
    Ok(())
}

fn least_squares(xs: impl Iterator<Item = (f64, f64)> + Clone) -> (f64, f64) {
    let m = xs.clone().count() as f64;
    let (sx, sy) = xs.clone().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / m, sy / m);
    let (sxy, sxx) = xs.fold((0.0, 0.0), |(a, b), (x, y)| {
        (a + (x - mx) * (y - my), b + (x - mx) * (x - mx))
    });
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Least-squares fit of `-ln p` against `n`: returns `(slope, intercept)`.
/// The slope estimates the exponent; the intercept absorbs a constant
/// prefactor.
pub fn empirical_exponent(points: &[(f64, f64)]) -> Result<(f64, f64)> {
    check_points(points)?;
    Ok(least_squares(points.iter().map(|&(n, p)| (n, -p.ln()))))
}

/// Same fit after removing a `n^(-1/2)` prefactor, i.e. regressing
/// `-ln p - ln(n)/2` on `n`. Tail probabilities of lattice sums decay like
/// `n^(-1/2) e^(-n I)`, which biases the plain fit upward by roughly
/// `1/(2 n)`.
pub fn empirical_exponent_sqrt_corrected(points: &[(f64, f64)]) -> Result<(f64, f64)> {
    check_points(points)?;
    Ok(least_squares(
        points.iter().map(|&(n, p)| (n, -p.ln() - 0.5 * n.ln())),
    ))
}

/// One realization of `U_k = E[L | X_1..X_k]` under one hypothesis.
#[derive(Debug, Clone, PartialEq)]
pub struct MartingaleTrace {
    pub hypothesis: Hypothesis,
    /// `U_0, ..., U_n`.
    pub values: Vec<f64>,
    /// Realized jumps, `ln(P1/P2)(X_k) - D(P1||P2)` under H1 and
    /// `ln(P1/P2)(X_k) + D(P2||P1)` under H2.
    pub increments: Vec<f64>,
    pub symbols: Vec<usize>,
    /// The realized LLR of the whole sample, from symbol counts.
    pub llr: f64,
    /// Expected start value: `n D(P1||P2)` under H1, `-n D(P2||P1)` under H2.
    pub start: f64,
}

impl MartingaleTrace {
    pub fn n(&self) -> usize {
        self.increments.len()
    }

    /// Checks the start value, the end value against the realized LLR, the
    /// jump bound `d`, and that consecutive values differ by the recorded jumps.
    pub fn verify(&self, d: f64) -> Result<()> {
        let fail = |msg: String| Err(Error::InvariantViolation(msg));
        if self.values[0] != self.start {
            return fail(format!(
                "U_0 = {} but expected {}",
                self.values[0], self.start
            ));
        }
        let end = *self.values.last().expect("trace has n + 1 values");
        if (end - self.llr).abs() > 1e-9 {
            return fail(format!("U_n = {end} but realized LLR is {}", self.llr));
        }
        for (k, (w, inc)) in self.values.windows(2).zip(&self.increments).enumerate() {
            if inc.abs() > d + 1e-12 {
                return fail(format!("jump {k} = {inc} exceeds d = {d}"));
            }
            let scale = 1.0 + w[0].abs().max(w[1].abs());
            if ((w[1] - w[0]) - inc).abs() > 1e-12 * scale {
                return fail(format!("U_{} - U_{k} disagrees with jump {inc}", k + 1));
            }
        }
        Ok(())
    }
}

pub fn martingale_trace(
    pair: &HypothesisPair,
    hypothesis: Hypothesis,
    n: u64,
    seed: u64,
) -> Result<MartingaleTrace> {
    if n == 0 {
        return Err(domain("martingale_trace: n must be >= 1"));
    }
    let llr = pair.llr();
    // Per-sample drift of E[L | F_k] once a symbol is revealed.
    let drift = match hypothesis {
        Hypothesis::H1 => pair.d12(),
        Hypothesis::H2 => -pair.d21(),
    };
    let dist = sampler(pair, hypothesis);
    let mut rng = stream_rng(seed, Purpose::Trace, hypothesis, 0);

    let len = n as usize;
    let start = n as f64 * drift;
    let mut values = Vec::with_capacity(len + 1);
    let mut increments = Vec::with_capacity(len);
    let mut symbols = Vec::with_capacity(len);
    let mut counts = vec![0u64; pair.len()];
    let mut partial = 0.0;
    values.push(start);
    for k in 1..=n {
        let x = dist.sample(&mut rng);
        counts[x] += 1;
        symbols.push(x);
        partial += llr[x];
        increments.push(llr[x] - drift);
        values.push(partial + (n - k) as f64 * drift);
    }
    Ok(MartingaleTrace {
        hypothesis,
        values,
        increments,
        symbols,
        llr: llr_from_counts(&llr, &counts),
        start,
    })
}

/// Sample mean of `L/n` over independent trials and its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SllResult {
    pub mean: f64,
    pub std_error: f64,
    /// Almost-sure limit: `D(P1||P2)` under H1, `-D(P2||P1)` under H2.
    pub target: f64,
}

impl SllResult {
    pub fn z_score(&self) -> f64 {
        (self.mean - self.target) / self.std_error
    }
}

pub fn sll_check(
    pair: &HypothesisPair,
    hypothesis: Hypothesis,
    n: u64,
    trials: u64,
    seed: u64,
) -> Result<SllResult> {
    if n == 0 || !(2..MAX_TRIAL_INDEX).contains(&trials) {
        return Err(domain("sll_check: need n >= 1 and at least 2 trials"));
    }
    let llr = pair.llr();
    let dist = sampler(pair, hypothesis);
    let k = pair.len();
    let normalized: Vec<f64> = (0..trials)
        .into_par_iter()
        .map_init(
            || vec![0u64; k],
            |counts, trial| {
                counts.iter_mut().for_each(|c| *c = 0);
                let mut rng = stream_rng(seed, Purpose::Sll, hypothesis, trial);
                for _ in 0..n {
                    counts[dist.sample(&mut rng)] += 1;
                }
                llr_from_counts(&llr, counts) / n as f64
            },
        )
        .collect();
    let m = trials as f64;
    let mean = normalized.iter().sum::<f64>() / m;
    let var = normalized.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1.0);
    Ok(SllResult {
        mean,
        std_error: (var / m).sqrt(),
        target: match hypothesis {
            Hypothesis::H1 => pair.d12(),
            Hypothesis::H2 => -pair.d21(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::probdist::llr_stats;
    use proptest::prelude::*;

    fn mirrored_pair() -> HypothesisPair {
        HypothesisPair::from_probs(vec![0.4, 0.6], vec![0.6, 0.4]).unwrap()
    }

    /// Exhaustive enumeration of all `2^n` sequences.
    fn enumerate_tail(pair: &HypothesisPair, n: u32, th: &Thresholds) -> [f64; 4] {
        let (p1, p2) = (pair.p1().probs(), pair.p2().probs());
        let mut out = [0.0; 4];
        for mask in 0..(1u32 << n) {
            let (mut w1, mut w2, mut l) = (1.0, 1.0, 0.0);
            for i in 0..n {
                let x = ((mask >> i) & 1) as usize;
                w1 *= p1[x];
                w2 *= p2[x];
                l += (p1[x] / p2[x]).ln();
            }
            let (up, lo) = (n as f64 * th.upper, n as f64 * th.lower);
            let eps = 1e-12;
            if l <= up + eps {
                out[0] += w1;
            }
            if l <= lo + eps {
                out[1] += w1;
            }
            if l >= lo - eps {
                out[2] += w2;
            }
            if l >= up - eps {
                out[3] += w2;
            }
        }
        out
    }

    #[test]
    fn wilson_basics() {
        let i = wilson_interval(50, 100, WILSON_Z);
        assert!(i.contains(0.5));
        assert!((i.lower - 0.4038).abs() < 1e-4);
        let zero = wilson_interval(0, 100, WILSON_Z);
        assert_eq!(zero.lower, 0.0);
        assert!(zero.upper > 0.0 && zero.upper < 0.05);
    }

    #[test]
    fn exact_tail_single_sample() {
        let tail = exact_binary_tail(&mirrored_pair(), 1, &Thresholds::zero()).unwrap();
        assert!((tail.alpha2 - 0.4).abs() < 1e-15);
        assert!((tail.alpha1 - 0.4).abs() < 1e-15);
        assert!((tail.beta1 - 0.4).abs() < 1e-15);
    }

    #[test]
    fn exact_tail_matches_enumeration() {
        let pair = HypothesisPair::from_probs(vec![0.3, 0.7], vec![0.55, 0.45]).unwrap();
        for th in [Thresholds::zero(), Thresholds::new(0.05, -0.1)] {
            for n in [2u32, 3, 7, 12] {
                let tail = exact_binary_tail(&pair, n as u64, &th).unwrap();
                let brute = enumerate_tail(&pair, n, &th);
                for (a, b) in [tail.alpha1, tail.alpha2, tail.beta1, tail.beta2]
                    .iter()
                    .zip(brute)
                {
                    assert!((a - b).abs() < 1e-13, "n = {n}: {a} vs {b}");
                }
            }
        }
        // Mirrored pair at n = 2: outcomes 00, 01, 10, 11 with L = -2c, 0, 0, 2c.
        let tail = exact_binary_tail(&mirrored_pair(), 2, &Thresholds::zero()).unwrap();
        assert!((tail.alpha2 - (0.16 + 2.0 * 0.24)).abs() < 1e-15);
        assert!((tail.beta2 - (0.16 + 2.0 * 0.24)).abs() < 1e-15);
    }

    #[test]
    fn exact_tail_rejections() {
        let pair = mirrored_pair();
        assert!(matches!(
            exact_binary_tail(&pair, 10, &Thresholds::single(0.9)),
            Err(Error::InadmissibleThresholds { .. })
        ));
        let ternary = HypothesisPair::from_probs(vec![0.2, 0.3, 0.5], vec![0.3, 0.3, 0.4]).unwrap();
        assert_eq!(
            exact_binary_tail(&ternary, 3, &Thresholds::zero()).unwrap_err(),
            Error::NotBinary(3)
        );
    }

    #[test]
    fn empirical_exponent_synthetic() {
        let pts: Vec<(f64, f64)> = (1..=6)
            .map(|k| (k as f64 * 10.0, (-0.03 * k as f64 * 10.0).exp()))
            .collect();
        let (slope, icpt) = empirical_exponent(&pts).unwrap();
        assert!((slope - 0.03).abs() < 1e-12);
        assert!(icpt.abs() < 1e-10);

        let pts: Vec<(f64, f64)> = (1..=6)
            .map(|k| (k as f64 * 10.0, 0.25 * (-0.03 * k as f64 * 10.0).exp()))
            .collect();
        let (slope, icpt) = empirical_exponent(&pts).unwrap();
        assert!((slope - 0.03).abs() < 1e-12);
        assert!((icpt - 4.0f64.ln()).abs() < 1e-10);

        assert!(empirical_exponent(&pts[..2]).is_err());
        assert!(empirical_exponent(&[(1.0, 0.5), (2.0, 0.0), (3.0, 0.1)]).is_err());
    }

    #[test]
    fn simulate_rejections() {
        let pair = mirrored_pair();
        let bad = SimConfig::new(10, 0, 1, Thresholds::zero(), 0.5);
        assert!(simulate_test(&pair, &bad).is_err());
        let bad = SimConfig::new(10, 10, 1, Thresholds::single(0.5), 0.5);
        assert!(matches!(
            simulate_test(&pair, &bad),
            Err(Error::InadmissibleThresholds { .. })
        ));
        let bad = SimConfig::new(10, 10, 1, Thresholds::zero(), 1.0);
        assert!(simulate_test(&pair, &bad).is_err());
    }

    #[test]
    fn simulate_subset_invariant_and_determinism() {
        let pair = HypothesisPair::from_probs(vec![0.2, 0.5, 0.3], vec![0.35, 0.3, 0.35]).unwrap();
        let th = Thresholds::new(0.05, -0.05);
        let cfg = SimConfig::new(30, 4000, 7, th, 0.3);
        let a = simulate_test(&pair, &cfg).unwrap();
        assert!(a.alpha2.value <= a.alpha1.value);
        assert!(a.beta2.value <= a.beta1.value);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let b = pool.install(|| simulate_test(&pair, &cfg).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn near_identical_pair_is_a_coin_flip() {
        let pair =
            HypothesisPair::from_probs(vec![0.5, 0.5], vec![0.5 + 1e-4, 0.5 - 1e-4]).unwrap();
        // Odd n avoids ties at L = 0.
        let cfg = SimConfig::new(11, 20_000, 3, Thresholds::zero(), 0.5);
        let r = simulate_test(&pair, &cfg).unwrap();
        assert!(r.pe2.interval.contains(0.5), "{:?}", r.pe2);
    }

    #[test]
    fn trace_mirrored_pair() {
        let pair = mirrored_pair();
        let stats = llr_stats(&pair, Hypothesis::H1).unwrap();
        let trace = martingale_trace(&pair, Hypothesis::H1, 10, 99).unwrap();
        assert_eq!(trace.values.len(), 11);
        assert_eq!(trace.values[0], 10.0 * pair.d12());
        assert!((trace.values[0] - 0.81093).abs() < 1e-5);
        let table: Vec<f64> = stats.increments.iter().map(|i| i.value).collect();
        for inc in &trace.increments {
            assert!(table.iter().any(|t| (t - inc).abs() < 1e-15));
            assert!((inc + 0.48656).abs() < 1e-5 || (inc - 0.32437).abs() < 1e-5);
        }
        trace.verify(stats.d).unwrap();
        assert!(martingale_trace(&pair, Hypothesis::H1, 0, 1).is_err());
    }

    #[test]
    fn trace_h2_start() {
        let pair = HypothesisPair::from_probs(vec![0.1, 0.3, 0.6], vec![0.3, 0.3, 0.4]).unwrap();
        let stats = llr_stats(&pair, Hypothesis::H2).unwrap();
        let trace = martingale_trace(&pair, Hypothesis::H2, 50, 5).unwrap();
        assert_eq!(trace.values[0], -50.0 * pair.d21());
        trace.verify(stats.d).unwrap();
    }

    #[test]
    fn trace_increments_are_centered() {
        let pair = mirrored_pair();
        let stats = llr_stats(&pair, Hypothesis::H1).unwrap();
        let trace = martingale_trace(&pair, Hypothesis::H1, 1_000_000, 2024).unwrap();
        let mean = trace.increments.iter().sum::<f64>() / 1e6;
        assert!(mean.abs() < 3.0 * stats.sigma_sq.sqrt() / 1e3);
    }

    #[test]
    fn sll_examples() {
        let pair = mirrored_pair();
        let h1 = sll_check(&pair, Hypothesis::H1, 10_000, 100, 1).unwrap();
        assert!(h1.z_score().abs() < 4.0);
        assert!((h1.mean - 0.0811).abs() < 2e-3);
        let h2 = sll_check(&pair, Hypothesis::H2, 10_000, 100, 1).unwrap();
        assert!(h2.z_score().abs() < 4.0);
        assert!((h2.mean + 0.0811).abs() < 2e-3);

        let close = HypothesisPair::from_probs(vec![0.5, 0.5], vec![0.5001, 0.4999]).unwrap();
        let z = sll_check(&close, Hypothesis::H1, 1000, 200, 3).unwrap();
        assert!(z.mean.abs() < 1e-3);
    }

    fn arb_pair() -> impl Strategy<Value = HypothesisPair> {
        (2usize..5).prop_flat_map(|k| {
            (
                proptest::collection::vec(0.05f64..1.0, k),
                proptest::collection::vec(0.05f64..1.0, k),
            )
                .prop_filter_map("distinct pair", |(a, b)| {
                    let (sa, sb): (f64, f64) = (a.iter().sum(), b.iter().sum());
                    let p1: Vec<f64> = a.iter().map(|v| v / sa).collect();
                    let p2: Vec<f64> = b.iter().map(|v| v / sb).collect();
                    let pair = HypothesisPair::from_probs(p1, p2).ok()?;
                    (pair.d12() > 1e-3).then_some(pair)
                })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn subset_and_pool_independence(
            pair in arb_pair(),
            seed: u64,
            n in 1u64..40,
            up in 0.0f64..1.0,
            down in 0.0f64..1.0,
        ) {
            let (lo, hi) = (-pair.d21(), pair.d12());
            let upper = lo + (hi - lo) * (0.02 + 0.96 * up);
            let lower = lo + (upper - lo) * (0.02 + 0.96 * down);
            let cfg = SimConfig::new(n, 300, seed, Thresholds::new(upper, lower), 0.4);
            let r = simulate_test(&pair, &cfg).unwrap();
            prop_assert!(r.alpha2.count.unwrap() <= r.alpha1.count.unwrap());
            prop_assert!(r.beta2.count.unwrap() <= r.beta1.count.unwrap());
            prop_assert!(r.pe2.value <= r.pe1.value);
            let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
            prop_assert_eq!(pool.install(|| simulate_test(&pair, &cfg).unwrap()), r);
        }

        #[test]
        fn traces_satisfy_invariants(pair in arb_pair(), seed: u64, n in 1u64..200, second: bool) {
            let h = if second { Hypothesis::H2 } else { Hypothesis::H1 };
            let d = llr_stats(&pair, h).unwrap().d;
            let trace = martingale_trace(&pair, h, n, seed).unwrap();
            prop_assert_eq!(trace.values.len() as u64, n + 1);
            prop_assert!(trace.verify(d).is_ok());
        }

        #[test]
        fn wilson_contains_point_estimate(m in 1u64..5000, frac in 0.0f64..=1.0) {
            let k = ((m as f64) * frac).floor() as u64;
            let i = wilson_interval(k, m, WILSON_Z);
            let p = k as f64 / m as f64;
            prop_assert!(i.lower <= p && p <= i.upper);
            prop_assert!(i.lower >= 0.0 && i.upper <= 1.0);
        }
    }
}
