//! Crate-wide error type.
//!
//! The numerical routines fail in a small number of well-defined ways (a
//! bracket without a sign change, an orbit leaving the annulus, a pair
//! outside a generating-function domain, ...).  They all surface as variants
//! of [`Error`] so callers can match on the failure mode instead of parsing
//! strings.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// The radius of curvature dipped to zero or below somewhere.
    #[error("domain is not strictly convex: rho({theta:.6}) = {value:.3e}")]
    NotConvex { theta: f64, value: f64 },

    /// `rho_hat(1)` must vanish for the boundary to close up.
    #[error("closure constraint violated: |rho_hat(1)| = {magnitude:.3e}")]
    ClosureDefect { magnitude: f64 },

    /// Malformed domain data (bad axes, harmonics out of range, ...).
    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    /// A root finder could not find (or keep) a sign change.
    #[error("bracketing failed: {0}")]
    Bracketing(String),

    /// A query point had to be strictly outside the domain but was not.
    #[error("point ({x:.6}, {y:.6}) is not strictly exterior to the domain")]
    NotExterior { x: f64, y: f64 },

    /// Chord angle outside the open interval (0, pi).
    #[error("chord angle {phi:.6} outside (0, pi)")]
    AngleRange { phi: f64 },

    /// An orbit left the annulus bounds.
    #[error("orbit escaped the annulus at step {step}")]
    Escape { step: usize },

    /// A pair (q, Q) fell outside the generating-function domain.
    #[error("pair ({q:.6}, {q1:.6}) outside the generating-function domain")]
    OutsideGeneratingDomain { q: f64, q1: f64 },

    /// The model has no generating function (outer billiards).
    #[error("model provides no generating function")]
    NoGeneratingFunction,

    /// |dQ/dp| fell below the degeneracy threshold.
    #[error("degenerate twist: |dQ/dp| = {value:.3e} at (q, p) = ({q:.6}, {p:.6})")]
    DegenerateTwist { q: f64, p: f64, value: f64 },

    /// (m, n) must be coprime with n >= 1.
    #[error("invalid rotation data {m}/{n}: {reason}")]
    BadRotation { m: i64, n: u32, reason: &'static str },

    /// m/n fell outside the model's estimated twist interval.
    #[error("rotation number {rho:.6} outside the twist-interval estimate ({lower:.6}, {upper:.6})")]
    OutsideTwistInterval { rho: f64, lower: f64, upper: f64 },

    /// The fiber scan found no displacement root over a base point.
    #[error("no root of the displacement defect on the fiber over q = {q:.6}")]
    NoRoot { q: f64 },

    /// Continuation could not follow the root branch past a grid node.
    #[error("continuation lost the root branch at grid index {index}")]
    BranchLost { index: usize },

    /// An iterative solver ran out of iterations.
    #[error("solver did not converge: {0}")]
    NotConverged(String),

    /// Brute-force minimality is only feasible for short segments.
    #[error("segment with {len} points exceeds the brute-force limit of {limit}")]
    SegmentTooLong { len: usize, limit: usize },

    /// A documented precondition was violated by the caller.
    #[error("precondition violated: {0}")]
    Contract(String),

    /// Bad experiment configuration.
    #[error("config error: {0}")]
    Config(String),

    /// Filesystem trouble while reading configs or writing results.
    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
