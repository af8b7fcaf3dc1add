//! Numerical laboratory for exact symplectic twist maps of the annulus and
//! planar convex billiards.
//!
//! The crate provides:
//!
//! - strictly convex domains described either by the Fourier coefficients of
//!   their radius of curvature or as closed-form ellipses ([`geometry`]);
//! - three billiard-type twist maps over such domains — the classical
//!   (Birkhoff) billiard, the outer (dual) billiard in envelope coordinates,
//!   and the symplectic billiard — plus an affine shear toy model
//!   ([`models`]);
//! - a two-defect solver that looks for (m, n)-periodic invariant graphs by
//!   solving the positional defect `Delta1` along each fiber and measuring
//!   the leftover momentum defect `Delta2` ([`solver`]);
//! - one-parameter family scans that classify where in a family such graphs
//!   survive ([`scan`]);
//! - a deterministic experiment runner behind the `caustics` binary
//!   ([`cli`]).
//!
//! Conventions used throughout: every domain is rescaled to perimeter one,
//! every base coordinate lives on R/Z (lifted to the real line where maps
//! need it), and every algorithm is deterministic — reruns and worker counts
//! never change output bytes.

pub mod cli;
pub mod error;
pub mod geometry;
pub mod models;
pub mod numerics;
pub mod scan;
pub mod solver;
pub mod tol;
pub mod twist;

pub use error::{Error, Result};
pub use geometry::{wedge, BoundaryFrame, Domain, DomainSpec, Vec2};
pub use solver::PeriodicGraph;
pub use twist::{PhasePoint, RotationData, TwistMap};
