//! Shared inputs for the benchmarks.

use devex_core::HypothesisPair;

/// The mirrored pair `(0.4, 0.6)` vs `(0.6, 0.4)`.
pub fn mirrored_pair() -> HypothesisPair {
    HypothesisPair::from_probs(vec![0.4, 0.6], vec![0.6, 0.4]).expect("valid pair")
}

/// A fixed pair on `k` symbols with distinct, strictly positive weights.
pub fn pair_on(k: usize) -> HypothesisPair {
    let p1: Vec<f64> = (1..=k).map(|i| i as f64).collect();
    let p2: Vec<f64> = (1..=k).map(|i| (k + 1 - i) as f64 + 0.5).collect();
    let (s1, s2): (f64, f64) = (p1.iter().sum(), p2.iter().sum());
    HypothesisPair::from_probs(
        p1.into_iter().map(|v| v / s1).collect(),
        p2.into_iter().map(|v| v / s2).collect(),
    )
    .expect("valid pair")
}
