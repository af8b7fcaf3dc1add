//! The classical (Birkhoff) billiard in arclength-cosine coordinates.

use crate::error::{Error, Result};
use crate::geometry::Domain;
use crate::twist::{GeneratingFunction, PhasePoint, TwistMap};

/// Inner billiard map in the coordinates `(s, sigma)`: `s` is normalized
/// arclength and `sigma = -cos(phi)` with `phi` the angle from the
/// oriented tangent to the outgoing chord.
///
/// The generating function is minus the chord length, `S(s, s1) =
/// -|gamma(s1) - gamma(s)|`; grazing shots correspond to `sigma` near
/// `-1` (forward) and `+1` (backward), so the fiber is `(-1, 1)`.
#[derive(Debug, Clone)]
pub struct BirkhoffBilliard {
    gen: ChordLength,
}

impl BirkhoffBilliard {
    pub fn new(domain: Domain) -> Self {
        BirkhoffBilliard { gen: ChordLength { domain } }
    }

    pub fn domain(&self) -> &Domain {
        &self.gen.domain
    }
}

impl TwistMap for BirkhoffBilliard {
    fn name(&self) -> &'static str {
        "birkhoff"
    }

    fn forward(&self, z: PhasePoint) -> Result<PhasePoint> {
        if !(z.p > -1.0 && z.p < 1.0) {
            return Err(Error::Contract(format!(
                "momentum {:.6} outside the open fiber (-1, 1)",
                z.p
            )));
        }
        let domain = self.domain();
        let phi = (-z.p).acos();
        let s1 = domain.chord_second_hit(z.q, phi)?;
        let from = domain.frame_at_arclength(z.q).position;
        let hit = domain.frame_at_arclength(s1);
        let unit = (hit.position - from).normalize();
        Ok(PhasePoint::new(s1, -unit.dot(&hit.tangent)))
    }

    fn fiber_interval(&self, _q: f64) -> (f64, f64) {
        (-1.0, 1.0)
    }

    fn fiber_scale(&self) -> f64 {
        2.0
    }

    fn generating(&self) -> Option<&dyn GeneratingFunction> {
        Some(&self.gen)
    }
}

/// Minus the Euclidean chord length between two boundary points.
#[derive(Debug, Clone)]
struct ChordLength {
    domain: Domain,
}

impl ChordLength {
    /// Chord data shared by the derivatives: both frames, the chord
    /// length and its unit direction.
    fn chord(
        &self,
        q: f64,
        q1: f64,
    ) -> Result<(crate::geometry::BoundaryFrame, crate::geometry::BoundaryFrame, f64, crate::geometry::Vec2)>
    {
        if !(q1 > q && q1 < q + 1.0) {
            return Err(Error::OutsideGeneratingDomain { q, q1 });
        }
        let a = self.domain.frame_at_arclength(q);
        let b = self.domain.frame_at_arclength(q1);
        let chord = b.position - a.position;
        let len = chord.norm();
        Ok((a, b, len, chord / len))
    }
}

impl GeneratingFunction for ChordLength {
    fn value(&self, q: f64, q1: f64) -> Result<f64> {
        let (_, _, len, _) = self.chord(q, q1)?;
        Ok(-len)
    }

    fn d1(&self, q: f64, q1: f64) -> Result<f64> {
        let (a, _, _, unit) = self.chord(q, q1)?;
        Ok(unit.dot(&a.tangent))
    }

    fn d2(&self, q: f64, q1: f64) -> Result<f64> {
        let (_, b, _, unit) = self.chord(q, q1)?;
        Ok(-unit.dot(&b.tangent))
    }

    fn d12(&self, q: f64, q1: f64) -> Result<f64> {
        let (a, b, len, unit) = self.chord(q, q1)?;
        let along = unit.dot(&a.tangent) * unit.dot(&b.tangent);
        Ok((a.tangent.dot(&b.tangent) - along) / len)
    }

    fn in_domain(&self, q: f64, q1: f64) -> bool {
        q1 > q && q1 < q + 1.0
    }
}
