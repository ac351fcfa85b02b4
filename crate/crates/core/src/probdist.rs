//! Finite-alphabet probability mass functions and the information measures
//! built on them.
//!
//! Every quantity is in nats. All PMFs are strictly positive, so every
//! divergence between two PMFs on the same alphabet is finite.
//!
//! The log-likelihood ratio of a sample is `ln P1(x) - ln P2(x)`. Under either
//! hypothesis the centered per-sample LLR is a bounded martingale difference;
//! [`llr_stats`] tabulates it together with its jump bound `d` and
//! conditional variance `sigma_sq`.

use std::collections::HashSet;
use std::fmt;

use crate::error::{domain, Error, Result};

/// Input normalization tolerance. Sums within this distance of 1 are
/// renormalized, anything further is rejected.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

/// A strictly positive probability mass function on a labelled finite alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf {
    labels: Vec<String>,
    probs: Vec<f64>,
    ln_probs: Vec<f64>,
}

impl Pmf {
    pub fn new<S: Into<String>>(labels: Vec<S>, probs: Vec<f64>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() != probs.len() {
            return Err(Error::LengthMismatch {
                labels: labels.len(),
                probs: probs.len(),
            });
        }
        if probs.len() < 2 {
            return Err(Error::TooFewSymbols(probs.len()));
        }
        let mut seen = HashSet::with_capacity(labels.len());
        for label in &labels {
            if !seen.insert(label.as_str()) {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        for (index, &value) in probs.iter().enumerate() {
            // NaN fails this test too.
            if !(value > 0.0) {
                return Err(Error::NonPositiveProbability { index, value });
            }
        }
        let sum: f64 = probs.iter().sum();
        if !((sum - 1.0).abs() <= NORMALIZATION_TOLERANCE) {
            return Err(Error::NotNormalized { sum });
        }
        let probs: Vec<f64> = probs.iter().map(|p| p / sum).collect();
        let ln_probs = probs.iter().map(|p| p.ln()).collect();
        Ok(Self {
            labels,
            probs,
            ln_probs,
        })
    }

    /// Alphabet `0, 1, ..., k-1` labelled by decimal index.
    pub fn from_probs(probs: Vec<f64>) -> Result<Self> {
        let labels = (0..probs.len()).map(|i| i.to_string()).collect();
        Self::new(labels, probs)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn ln_probs(&self) -> &[f64] {
        &self.ln_probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn same_alphabet(&self, other: &Pmf) -> bool {
        self.labels == other.labels
    }
}

/// Which hypothesis generates the data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Hypothesis {
    H1,
    H2,
}

impl Hypothesis {
    pub const BOTH: [Hypothesis; 2] = [Hypothesis::H1, Hypothesis::H2];

    pub fn index(self) -> usize {
        match self {
            Hypothesis::H1 => 1,
            Hypothesis::H2 => 2,
        }
    }
}

impl TryFrom<u8> for Hypothesis {
    type Error = Error;

    fn try_from(value: u8) -> Result<Self> {
        match value {
            1 => Ok(Hypothesis::H1),
            2 => Ok(Hypothesis::H2),
            other => Err(domain(format!(
                "hypothesis index must be 1 or 2, got {other}"
            ))),
        }
    }
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H{}", self.index())
    }
}

/// Two PMFs on one alphabet: `p1` under H1, `p2` under H2.
#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisPair {
    p1: Pmf,
    p2: Pmf,
}

impl HypothesisPair {
    pub fn new(p1: Pmf, p2: Pmf) -> Result<Self> {
        if !p1.same_alphabet(&p2) {
            return Err(Error::AlphabetMismatch);
        }
        Ok(Self { p1, p2 })
    }

    /// Builds both PMFs on a decimal-indexed alphabet.
    pub fn from_probs(p1: Vec<f64>, p2: Vec<f64>) -> Result<Self> {
        Self::new(Pmf::from_probs(p1)?, Pmf::from_probs(p2)?)
    }

    pub fn p1(&self) -> &Pmf {
        &self.p1
    }

    pub fn p2(&self) -> &Pmf {
        &self.p2
    }

    pub fn pmf(&self, hypothesis: Hypothesis) -> &Pmf {
        match hypothesis {
            Hypothesis::H1 => &self.p1,
            Hypothesis::H2 => &self.p2,
        }
    }

    pub fn labels(&self) -> &[String] {
        self.p1.labels()
    }

    pub fn len(&self) -> usize {
        self.p1.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p1.is_empty()
    }

    /// Per-symbol log-likelihood ratio `ln P1(x) - ln P2(x)`.
    ///
    /// Computed as a difference of logs so that mirrored pairs produce
    /// exactly negated values.
    pub fn llr(&self) -> Vec<f64> {
        self.p1
            .ln_probs()
            .iter()
            .zip(self.p2.ln_probs())
            .map(|(a, b)| a - b)
            .collect()
    }

    /// `D(P1 || P2)`.
    pub fn d12(&self) -> f64 {
        kl_unchecked(&self.p1, &self.p2)
    }

    /// `D(P2 || P1)`.
    pub fn d21(&self) -> f64 {
        kl_unchecked(&self.p2, &self.p1)
    }

    /// The pair with the roles of the hypotheses exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            p1: self.p2.clone(),
            p2: self.p1.clone(),
        }
    }
}

fn kl_unchecked(p: &Pmf, q: &Pmf) -> f64 {
    p.probs()
        .iter()
        .zip(p.ln_probs().iter().zip(q.ln_probs()))
        .map(|(w, (lp, lq))| w * (lp - lq))
        .sum::<f64>()
        .max(0.0)
}

/// Relative entropy `D(p || q)` in nats.
pub fn kl_divergence(p: &Pmf, q: &Pmf) -> Result<f64> {
    if !p.same_alphabet(q) {
        return Err(Error::AlphabetMismatch);
    }
    Ok(kl_unchecked(p, q))
}

/// Divergence between the Bernoulli laws `(p, 1-p)` and `(q, 1-q)`, with
/// `0 ln 0 = 0`.
pub fn binary_kl(p: f64, q: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(domain(format!("binary_kl: p = {p} outside [0, 1]")));
    }
    if !(q > 0.0 && q < 1.0) {
        return Err(domain(format!("binary_kl: q = {q} outside (0, 1)")));
    }
    let term = |a: f64, b: f64| if a == 0.0 { 0.0 } else { a * (a / b).ln() };
    Ok((term(p, q) + term(1.0 - p, 1.0 - q)).max(0.0))
}

/// Rényi divergence of order `t`, `1/(t-1) ln sum_x p(x)^t q(x)^(1-t)`.
///
/// With this convention `H(t) = (t - 1) D_t(P2 || P1)`.
pub fn renyi_divergence(p: &Pmf, q: &Pmf, t: f64) -> Result<f64> {
    if !p.same_alphabet(q) {
        return Err(Error::AlphabetMismatch);
    }
    if t == 1.0 || !t.is_finite() {
        return Err(domain(format!(
            "renyi_divergence: order t = {t} not supported"
        )));
    }
    let exponents: Vec<f64> = p
        .ln_probs()
        .iter()
        .zip(q.ln_probs())
        .map(|(lp, lq)| t * lp + (1.0 - t) * lq)
        .collect();
    Ok(log_sum_exp(&exponents) / (t - 1.0))
}

pub(crate) fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    max + values.iter().map(|v| (v - max).exp()).sum::<f64>().ln()
}

fn tilted_exponents(pair: &HypothesisPair, t: f64) -> Vec<f64> {
    pair.p1
        .ln_probs()
        .iter()
        .zip(pair.p2.ln_probs())
        .map(|(l1, l2)| (1.0 - t) * l1 + t * l2)
        .collect()
}

/// `H(t) = ln sum_x P1(x)^(1-t) P2(x)^t`, the log-MGF of `ln(P2/P1)` under P1.
pub fn log_mgf(pair: &HypothesisPair, t: f64) -> f64 {
    log_sum_exp(&tilted_exponents(pair, t))
}

/// `H'(t)`: the mean of `ln(P2/P1)` under the tilted law `P1^(1-t) P2^t / e^H(t)`.
pub fn log_mgf_derivative(pair: &HypothesisPair, t: f64) -> f64 {
    let exps = tilted_exponents(pair, t);
    let max = exps.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut norm = 0.0;
    let mut acc = 0.0;
    for ((e, l1), l2) in exps.iter().zip(pair.p1.ln_probs()).zip(pair.p2.ln_probs()) {
        let w = (e - max).exp();
        norm += w;
        acc += w * (l2 - l1);
    }
    acc / norm
}

/// One row of the increment table: a symbol's probability under the
/// generating hypothesis and the martingale jump it causes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Increment {
    pub prob: f64,
    pub value: f64,
}

/// Jump statistics of the Doob martingale of the LLR under one hypothesis.
#[derive(Debug, Clone, PartialEq)]
pub struct LlrStats {
    pub hypothesis: Hypothesis,
    /// Uniform jump bound, `max_x |increment(x)|`.
    pub d: f64,
    /// Conditional variance of a jump.
    pub sigma_sq: f64,
    /// `sigma_sq / d^2`, in `(0, 1]`.
    pub gamma: f64,
    pub increments: Vec<Increment>,
}

impl LlrStats {
    /// Probability-weighted mean of the increments (zero up to round-off).
    pub fn mean_increment(&self) -> f64 {
        self.increments.iter().map(|i| i.prob * i.value).sum()
    }
}

/// Increment table of the martingale `E[L | X_1..X_k]`.
///
/// Under H1 the increments are `ln(P1/P2)(x) - D(P1||P2)` weighted by P1;
/// under H2 they are `ln(P2/P1)(x) - D(P2||P1)` weighted by P2.
pub fn llr_stats(pair: &HypothesisPair, hypothesis: Hypothesis) -> Result<LlrStats> {
    let (gen, other) = match hypothesis {
        Hypothesis::H1 => (&pair.p1, &pair.p2),
        Hypothesis::H2 => (&pair.p2, &pair.p1),
    };
    let mean = kl_unchecked(gen, other);
    let increments: Vec<Increment> = gen
        .probs()
        .iter()
        .zip(gen.ln_probs().iter().zip(other.ln_probs()))
        .map(|(&prob, (lg, lo))| Increment {
            prob,
            value: (lg - lo) - mean,
        })
        .collect();
    let d = increments
        .iter()
        .map(|i| i.value.abs())
        .fold(0.0_f64, f64::max);
    if !(d > 0.0) {
        return Err(Error::DegenerateIncrements);
    }
    let d_sq = d * d;
    let sigma_sq = increments
        .iter()
        .map(|i| i.prob * i.value * i.value)
        .sum::<f64>()
        .min(d_sq);
    if !(sigma_sq > 0.0) {
        return Err(Error::DegenerateIncrements);
    }
    Ok(LlrStats {
        hypothesis,
        d,
        sigma_sq,
        gamma: sigma_sq / d_sq,
        increments,
    })
}
