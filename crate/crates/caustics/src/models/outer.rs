//! The outer (dual) billiard in tangency-envelope coordinates.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::geometry::{wedge, Domain, Vec2};
use crate::numerics::{refine_root, scan_brackets};
use crate::tol;
use crate::twist::{PhasePoint, TwistMap};

/// Offset of the scan window past the departing tangency, where the
/// corner function is already negative.
const TANGENCY_GAP: f64 = 1e-9;

/// Outer billiard map in the coordinates `(q, r)`: `q` is the tangent
/// angle of the support line divided by `2 pi` and `r = l^2 / 2`, where
/// `l` is the distance from the tangency point back to the vertex.
///
/// A phase point `(q, r)` is the vertex `z = gamma(theta) - l T(theta)`
/// with `theta = 2 pi q`; the map reflects `z` through its tangency point
/// and re-expresses the image in the same chart.  Grazing vertices
/// (`r -> 0`) barely advance and faraway ones (`r -> infinity`) approach
/// the half-turn advance, so the twist interval is `(0, 1/2)`.  No
/// generating function is exposed.
#[derive(Debug, Clone)]
pub struct OuterBilliard {
    domain: Domain,
}

impl OuterBilliard {
    pub fn new(domain: Domain) -> Self {
        OuterBilliard { domain }
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    /// The vertex (support-line) representation of a phase point.
    pub fn vertex(&self, z: PhasePoint) -> Result<Vec2> {
        if z.p.is_nan() || z.p <= 0.0 {
            return Err(Error::Contract(format!(
                "envelope coordinate {:.6} outside the open fiber (0, inf)",
                z.p
            )));
        }
        let frame = self.domain.frame_at_angle(TAU * z.q);
        Ok(frame.position - (2.0 * z.p).sqrt() * frame.tangent)
    }

    /// The phase-space chart of an exterior vertex: tangency angle
    /// fraction in `[0, 1)` and envelope coordinate.
    pub fn chart(&self, vertex: Vec2) -> Result<PhasePoint> {
        let theta = self.domain.tangency_from_exterior(vertex)?;
        let frame = self.domain.frame_at_angle(theta);
        let ell = -frame.tangent.dot(&(vertex - frame.position));
        Ok(PhasePoint::new(theta / TAU, ell * ell / 2.0))
    }
}

impl TwistMap for OuterBilliard {
    fn name(&self) -> &'static str {
        "outer"
    }

    fn forward(&self, z: PhasePoint) -> Result<PhasePoint> {
        let u0 = self.domain.native_of_tangent_angle(TAU * z.q);
        let frame = self.domain.frame_native(u0);
        let ell = (2.0 * z.p).sqrt();
        if !(ell > 0.0 && ell.is_finite()) {
            return Err(Error::Contract(format!(
                "envelope coordinate {:.6} outside the open fiber (0, inf)",
                z.p
            )));
        }
        // Reflect the vertex through its tangency point.
        let image = frame.position + ell * frame.tangent;
        // The image tangency lies strictly within the next half-turn: the
        // corner function is negative just past u0 and positive at the
        // antipode.
        let g = |u: f64| wedge(self.domain.tangent_native(u), image - self.domain.point_native(u));
        let brackets = scan_brackets(g, u0 + TANGENCY_GAP, u0 + PI, tol::EXIT_SCAN);
        let bracket = brackets.first().copied().ok_or_else(|| {
            Error::Bracketing(format!("no image tangency ahead of q = {:.6}", z.q))
        })?;
        let root = refine_root(g, bracket, tol::ROOT_TOL)?;
        let hit = self.domain.frame_native(root.x);
        let ell1 = -hit.tangent.dot(&(image - hit.position));
        Ok(PhasePoint::new(self.domain.tangent_angle_of_native(root.x) / TAU, ell1 * ell1 / 2.0))
    }

    fn fiber_interval(&self, _q: f64) -> (f64, f64) {
        (0.0, f64::INFINITY)
    }

    fn fiber_scale(&self) -> f64 {
        1.0 / (2.0 * PI * PI)
    }
}
