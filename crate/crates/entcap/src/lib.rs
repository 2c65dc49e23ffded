//! # entcap
//!
//! Entropy-constrained capacity of the additive Gaussian noise channel,
//! built on the machinery of truncated moment problems.
//!
//! The channel is `Y = sqrt(snr) * X + Z` with standard Gaussian noise `Z`.
//! Under a power constraint alone the capacity is `C(snr) = 1/2 ln(1 + snr)`,
//! achieved by Gaussian input. Adding an entropy constraint `H(X) <= h`
//! forces the input to be discrete, and the question becomes: how much
//! mutual information can a low-entropy atomic distribution carry? At low
//! SNR this reduces to a moment-matching problem — how many initial Gaussian
//! moments can a distribution of entropy at most `h` replicate — and the
//! answer (three, once `h` is below an explicit threshold) pins the capacity
//! gap to fourth order in the SNR.
//!
//! ## Modules
//!
//! - [`moments`] — moment sequences, Hankel matrices, positive-semidefinite
//!   verdicts, and truncated-moment-problem feasibility.
//! - [`atomic`] — finitely supported distributions: moments, entropy,
//!   standardization, recovery from moment sequences, and Gauss–Hermite
//!   quadrature distributions.
//! - [`low_entropy`] — the dominant-atom decomposition of low-entropy
//!   variables, the critical tail-mass threshold, the four-moment
//!   infeasibility certificate, and the constructive three-moment matcher.
//! - [`channel`] — AWGN mutual information, MMSE, and the I-MMSE integral
//!   identities for atomic inputs.
//! - [`capacity`] — lower bounds on the entropy-constrained capacity by
//!   multi-start optimization, the three-moment baseline, and the low-SNR
//!   gap-scaling experiment.
//! - [`cli`] — the `entcap` command-line surface (thin wrappers over the
//!   library, JSON/CSV output).
//!
//! ## Examples
//!
//! Each major capability has a runnable example:
//!
//! ```bash
//! cargo run -p entcap --example hankel_feasibility
//! cargo run -p entcap --example prony_recovery
//! cargo run -p entcap --example gauss_hermite_moments
//! cargo run -p entcap --example decompose_compose
//! cargo run -p entcap --example eta_thresholds
//! cargo run -p entcap --example three_moment_match
//! cargo run -p entcap --example four_moment_certificate
//! cargo run -p entcap --example awgn_information
//! cargo run -p entcap --example capacity_lower_bound
//! cargo run -p entcap --example snr4_gap_scaling
//! ```
//!
//! ## Quick start
//!
//! ```rust
//! use entcap::atomic::gauss_hermite;
//! use entcap::low_entropy::{critical_tail_mass, TargetMoments};
//!
//! // The Gaussian threshold: no distribution of entropy below
//! // h2(1/3) ~ 0.92 bits matches four Gaussian moments.
//! let gaussian = TargetMoments::standard_normal();
//! let threshold = critical_tail_mass(&gaussian).unwrap();
//! assert!((threshold.value - 1.0 / 3.0).abs() < 1e-12);
//!
//! // The 3-point Gauss-Hermite distribution matches five Gaussian moments
//! // and sits just above that entropy threshold.
//! let gh3 = gauss_hermite(3).unwrap();
//! assert!(gh3.entropy(2.0) > threshold.entropy_threshold_bits);
//! ```
//!
//! All information quantities inside the library are in nats; interfaces
//! that accept or report entropy take an explicit logarithm base, and the
//! CLI defaults to bits.

use thiserror::Error;

mod linalg;

pub mod atomic;
pub mod capacity;
pub mod channel;
pub mod cli;
pub mod low_entropy;
pub mod moments;

pub use atomic::AtomicDistribution;
pub use moments::{HankelMatrix, MomentSequence, PsdVerdict};

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A moment sequence does not have enough entries for the requested operation.
    #[error("moment sequence too short: need at least {needed} values, got {got}")]
    SequenceTooShort { needed: usize, got: usize },

    /// A probability moment sequence must start with s0 = 1.
    #[error("moment sequence not normalized: s0 = {0}, expected 1")]
    NotNormalized(f64),

    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A distribution is degenerate (single atom / zero variance) where
    /// positive variance is required.
    #[error("degenerate distribution: {0}")]
    Degenerate(String),

    /// The dominant-atom decomposition hypothesis fails (no atom carries
    /// more than half the mass).
    #[error("decomposition hypothesis violated: {0}")]
    HypothesisViolation(String),

    /// A structural invariant would be violated by the requested construction.
    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    /// No representing measure exists for the given moments.
    #[error("no representing measure: {0}")]
    Infeasible(String),

    /// A precondition documented on the operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Numerical failure (non-convergence, loss of precision).
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Invalid optimizer or integration configuration.
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable machine-readable code for CLI payloads.
    pub fn code(&self) -> &'static str {
        match self {
            Error::SequenceTooShort { .. } => "sequence_too_short",
            Error::NotNormalized(_) => "not_normalized",
            Error::Domain(_) => "domain",
            Error::Degenerate(_) => "degenerate",
            Error::HypothesisViolation(_) => "hypothesis_violation",
            Error::InvariantViolation(_) => "invariant_violation",
            Error::Infeasible(_) => "infeasible",
            Error::Precondition(_) => "precondition",
            Error::Numerical(_) => "numerical",
            Error::Config(_) => "config",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
