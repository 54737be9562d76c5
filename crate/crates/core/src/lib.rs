//! Exact-arithmetic engine for Hodge integrals with at most one λ-class.
//!
//! The crate computes ∫_{M̄_{g,n}} ψ₁^{k₁}⋯ψₙ^{kₙ} λ_j exactly, as arbitrary-precision
//! rationals, by assembling linear relations among all integrals of a fixed dimension
//! and solving them by exact Gaussian elimination. Each relation at a degree d couples
//! a sum over partitions ν ⊢ d of normalized double Hurwitz weights (closed sinh-product
//! formula, cross-checked against a symmetric-group character oracle) with localization
//! vertex sums expanded over multiset configurations.
//!
//! Module map:
//! - [`exact`]: rationals, Bernoulli numbers, dense truncated power series
//! - [`partitions`]: partitions, exponent tuples, vertex-configuration enumeration
//! - [`characters`]: Murnaghan–Nakayama characters and the Burnside character sum
//! - [`hurwitz`]: normalized double Hurwitz weights (sinh product, both branches)
//! - [`hodge`]: integral keys, value table, per-vertex contributions and config sums
//! - [`recursion`]: unknown groups and relation rows per degree
//! - [`solver`]: incremental exact Gaussian elimination
//! - [`engine`]: orchestration, on-disk cache, closed-formula verification oracles

pub mod characters;
pub mod engine;
pub mod exact;
pub mod hodge;
pub mod hurwitz;
pub mod partitions;
pub mod recursion;
pub mod solver;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("series reciprocal requires a nonzero constant term")]
    ZeroConstantTerm,

    #[error("partition sizes do not match: {0} vs {1}")]
    SizeMismatch(usize, usize),

    #[error("M-bar_({genus},{points}) is not a stable moduli space")]
    UnstableModuli { genus: u32, points: usize },

    #[error("degree {d} is outside the validity window; minimal legal degree is {min_d}")]
    DegreeWindow { d: u32, min_d: u32 },

    #[error("inconsistent relation row at degree {d}: zero coefficients with nonzero constant")]
    InconsistentRow { d: u32 },

    #[error("system is rank-deficient: rank {rank} of {unknowns} unknowns; need more relations")]
    RankDeficient { rank: usize, unknowns: usize },

    #[error(
        "degree escalation exceeded ceiling {ceiling} for group (g={genus}, e={e}): \
         rank {rank} of {unknowns}"
    )]
    EscalationExceeded {
        genus: u32,
        e: String,
        ceiling: u32,
        rank: usize,
        unknowns: usize,
    },

    #[error("internal bookkeeping error: {0}")]
    Internal(String),

    #[error("cache line {line}: {message}")]
    Cache { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
