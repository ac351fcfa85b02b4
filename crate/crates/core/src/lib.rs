//! Error exponents for binary hypothesis testing on finite alphabets.
//!
//! The crate computes exact large-deviation exponents (rate function,
//! Chernoff information), lower bounds on them obtained from martingale
//! concentration inequalities (a refined variance-aware bound and the plain
//! Azuma-Hoeffding bound), their local behaviour in terms of Fisher
//! information, and Monte Carlo and exact-enumeration checks of all of it.
//!
//! Modules:
//! - [`probdist`]: PMFs, divergences, the log-MGF and LLR increment statistics.
//! - [`concentration`]: Azuma and refined bounds, polynomial floors.
//! - [`exponents`]: rate function, Chernoff information, exact and bounded exponents.
//! - [`fisher`]: parametric families and Fisher-information limits.
//! - [`montecarlo`]: deterministic parallel simulation and exact binary tails.

// Validation uses `!(x > 0.0)` style checks so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod concentration;
pub mod error;
pub mod exponents;
pub mod fisher;
pub mod montecarlo;
pub mod probdist;
pub(crate) mod scalar;

pub use concentration::{MartingaleParams, Sidedness};
pub use error::{Error, Result};
pub use exponents::{ExponentReport, Thresholds};
pub use fisher::{FisherLimitReport, ParametricFamily};
pub use montecarlo::{SimConfig, SimResult};
pub use probdist::{Hypothesis, HypothesisPair, LlrStats, Pmf};
