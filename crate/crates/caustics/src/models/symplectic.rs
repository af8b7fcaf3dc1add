//! The symplectic billiard in arclength-area coordinates.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{wedge, Domain, Vec2};
use crate::numerics::newton_bisect;
use crate::tol;
use crate::twist::{GeneratingFunction, PhasePoint, TwistMap};

/// Symplectic billiard map in the coordinates `(t, s)`: `t` is normalized
/// arclength and `s = omega(T(t), gamma(t') - c)` is the area-form pairing
/// of the tangent at the current point with the next point (positions
/// taken relative to the area centroid `c`).
///
/// Three consecutive points obey the corner (reflection) rule: `gamma(t2)
/// - gamma(t0)` is parallel to the tangent at `t1`.  The generating
/// function is minus the centered area form, `S(t, t1) = -omega(gamma(t)
/// - c, gamma(t1) - c)`, and the admissible window keeps `t1` strictly
/// between `t` and its parallel-tangent parameter.
#[derive(Debug, Clone)]
pub struct SymplecticBilliard {
    gen: AreaForm,
}

impl SymplecticBilliard {
    pub fn new(domain: Domain) -> Self {
        SymplecticBilliard { gen: AreaForm { domain } }
    }

    pub fn domain(&self) -> &Domain {
        &self.gen.domain
    }

    /// Centered position at a native parameter.
    fn centered(&self, u: f64) -> Vec2 {
        let domain = self.domain();
        domain.point_native(u) - domain.center()
    }
}

impl TwistMap for SymplecticBilliard {
    fn name(&self) -> &'static str {
        "symplectic"
    }

    fn forward(&self, z: PhasePoint) -> Result<PhasePoint> {
        let domain = self.domain();
        let u1 = domain.native_of_arclength(z.q);
        let tangent = domain.tangent_native(u1);
        let (lo, hi) = (
            wedge(tangent, self.centered(u1)),
            wedge(tangent, self.centered(u1 + PI)),
        );
        if !(z.p > lo && z.p < hi) {
            return Err(Error::Contract(format!(
                "momentum {:.6} outside the open fiber ({lo:.6}, {hi:.6})",
                z.p
            )));
        }
        // The next parameter solves omega(T(t1), gamma_c(t2)) = s, which is
        // strictly increasing between the tangency and its antipode.
        let u2 = newton_bisect(
            |u| {
                (
                    wedge(tangent, self.centered(u)) - z.p,
                    wedge(tangent, domain.derivative_native(u)),
                )
            },
            u1,
            u1 + PI,
            u1 + PI * (z.p - lo) / (hi - lo),
            tol::ROOT_TOL,
        );
        // Corner rule: the third point lies on the chord through gamma(t1)
        // parallel to the tangent at t2; that function is also strictly
        // increasing over the following half-turn.
        let tangent2 = domain.tangent_native(u2);
        let base = self.centered(u1);
        let u3 = newton_bisect(
            |u| {
                (
                    wedge(tangent2, self.centered(u) - base),
                    wedge(tangent2, domain.derivative_native(u)),
                )
            },
            u2,
            u2 + PI,
            u2 + (u2 - u1).min(PI - 1e-3),
            tol::ROOT_TOL,
        );
        Ok(PhasePoint::new(
            domain.arclength_of_native(u2),
            wedge(tangent2, self.centered(u3)),
        ))
    }

    fn fiber_interval(&self, q: f64) -> (f64, f64) {
        let domain = self.domain();
        let u = domain.native_of_arclength(q);
        let tangent = domain.tangent_native(u);
        (wedge(tangent, self.centered(u)), wedge(tangent, self.centered(u + PI)))
    }

    fn fiber_scale(&self) -> f64 {
        1.0 / PI
    }

    fn generating(&self) -> Option<&dyn GeneratingFunction> {
        Some(&self.gen)
    }
}

/// Minus the centered area form of two boundary points.
#[derive(Debug, Clone)]
struct AreaForm {
    domain: Domain,
}

impl AreaForm {
    fn natives(&self, q: f64, q1: f64) -> Result<(f64, f64)> {
        if !self.in_domain(q, q1) {
            return Err(Error::OutsideGeneratingDomain { q, q1 });
        }
        Ok((self.domain.native_of_arclength(q), self.domain.native_of_arclength(q1)))
    }

    fn centered(&self, u: f64) -> Vec2 {
        self.domain.point_native(u) - self.domain.center()
    }
}

impl GeneratingFunction for AreaForm {
    fn value(&self, q: f64, q1: f64) -> Result<f64> {
        let (u, u1) = self.natives(q, q1)?;
        Ok(-wedge(self.centered(u), self.centered(u1)))
    }

    fn d1(&self, q: f64, q1: f64) -> Result<f64> {
        let (u, u1) = self.natives(q, q1)?;
        // d gamma / dt is the unit tangent in normalized arclength.
        Ok(-wedge(self.domain.tangent_native(u), self.centered(u1)))
    }

    fn d2(&self, q: f64, q1: f64) -> Result<f64> {
        let (u, u1) = self.natives(q, q1)?;
        Ok(wedge(self.domain.tangent_native(u1), self.centered(u)))
    }

    fn d12(&self, q: f64, q1: f64) -> Result<f64> {
        let (u, u1) = self.natives(q, q1)?;
        Ok(-wedge(self.domain.tangent_native(u), self.domain.tangent_native(u1)))
    }

    fn in_domain(&self, q: f64, q1: f64) -> bool {
        q1 > q && q1 < self.domain.antipodal_arclength(q)
    }
}
