//! Expected bit-comparison cost of Quickselect on bit-string keys.
//!
//! Quickselect, run on keys drawn uniformly from (0,1) and represented as
//! bit strings, has an expected total number of *bit* comparisons mu(m, n)
//! that this crate computes three independent ways:
//!
//! - exact arbitrary-precision rationals: a Bernoulli-number formula for the
//!   smallest key ([`exact_mu::mu1_exact`]), a five-sum formula for the
//!   rank-averaged cost ([`exact_mu::mu_avg_exact`]), and a finite-summation
//!   cascade for arbitrary rank ([`cascade::mu_general_exact`]);
//! - floating-point asymptotics: closed forms with Riemann-zeta/Gamma
//!   fluctuation constants, slope constants, and large-n expansions
//!   ([`asymptotics`]);
//! - Monte Carlo simulation of the algorithm itself on lazily generated
//!   random bit streams ([`simulate`]).
//!
//! The three routes cross-validate each other; [`validate`] bundles the
//! checks behind the `qselbits validate` CLI subcommand.

pub mod asymptotics;
pub mod cascade;
pub mod complex_fn;
pub mod exact_mu;
pub mod rational;
pub mod sequences;
pub mod simulate;
pub mod table;
pub mod validate;

pub use cascade::{mu_general_exact, CascadeOptions};
pub use exact_mu::{mu1_exact, mu_avg_exact, MuKind, MuValue};
pub use rational::Rational;
pub use simulate::{monte_carlo, SelectStats};
pub use table::{mu_table, MuTable};

/// Default number of digits after the decimal point in decimal renderings.
pub const DEFAULT_DIGITS: usize = 12;

/// Errors surfaced by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("rank m={m} out of range 1..={n}")]
    InvalidRank { m: usize, n: usize },
    #[error("coefficient index r={r} invalid for j={j} (want 0 <= r < j)")]
    InvalidCoeffIndex { j: u64, r: u64 },
    #[error("keys agree on the first {0} bits; pseudo-random substreams likely collide")]
    DepthCapExceeded(usize),
    #[error("fixed bit key exhausted after {0} bits")]
    FixedKeyExhausted(usize),
    #[error("gamma pole at nonpositive integer z={0}")]
    GammaPole(f64),
    #[error("zeta pole at s=1")]
    ZetaPole,
    #[error("trial count must be at least 1")]
    NoTrials,
}

pub type Result<T> = std::result::Result<T, Error>;
