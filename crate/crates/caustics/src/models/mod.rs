//! The twist-map models: three billiard systems over a convex domain and
//! an integrable affine shear used as a control case.
//!
//! All four share the conventions of [`crate::twist`]: base coordinates
//! live on R/Z (lifted), momenta in an open fiber interval, and the twist
//! is positive.  The Birkhoff and symplectic billiards carry closed-form
//! generating functions; the outer billiard is defined purely as a map.

mod birkhoff;
mod outer;
mod shear;
mod symplectic;

pub use birkhoff::BirkhoffBilliard;
pub use outer::OuterBilliard;
pub use shear::ShearMap;
pub use symplectic::SymplecticBilliard;
