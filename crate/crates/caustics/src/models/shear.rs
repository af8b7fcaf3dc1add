//! Affine shear on the unit fiber: the integrable control model.

use crate::error::{Error, Result};
use crate::twist::{GeneratingFunction, PhasePoint, TwistMap};

/// The map `F(q, p) = (q + offset + p, p)` with `p` in `(0, 1)`.
///
/// Every rotation number in `(offset, 1 + offset)` is realized by the
/// horizontal invariant circle `p = rho - offset`, so invariant graphs
/// exist for a whole interval of rotation numbers — the trivial side of
/// the dichotomy the billiard models are compared against.
#[derive(Debug, Clone)]
pub struct ShearMap {
    offset: f64,
    gen: ShearGenerating,
}

impl ShearMap {
    pub fn new(offset: f64) -> Self {
        ShearMap { offset, gen: ShearGenerating { offset } }
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }
}

impl TwistMap for ShearMap {
    fn name(&self) -> &'static str {
        "shear"
    }

    fn forward(&self, z: PhasePoint) -> Result<PhasePoint> {
        let (lo, hi) = self.fiber_interval(z.q);
        if !(z.p > lo && z.p < hi) {
            return Err(Error::Contract(format!(
                "momentum {:.6} outside the open fiber ({lo:.3}, {hi:.3})",
                z.p
            )));
        }
        Ok(PhasePoint::new(z.q + self.offset + z.p, z.p))
    }

    fn fiber_interval(&self, _q: f64) -> (f64, f64) {
        (0.0, 1.0)
    }

    fn fiber_scale(&self) -> f64 {
        1.0
    }

    fn generating(&self) -> Option<&dyn GeneratingFunction> {
        Some(&self.gen)
    }
}

/// `S(q, q1) = (q1 - q - offset)^2 / 2`, so that `p = -d1 S = q1 - q -
/// offset` reproduces the shear.
#[derive(Debug, Clone)]
struct ShearGenerating {
    offset: f64,
}

impl ShearGenerating {
    fn step(&self, q: f64, q1: f64) -> Result<f64> {
        let p = q1 - q - self.offset;
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::OutsideGeneratingDomain { q, q1 });
        }
        Ok(p)
    }
}

impl GeneratingFunction for ShearGenerating {
    fn value(&self, q: f64, q1: f64) -> Result<f64> {
        Ok(self.step(q, q1)?.powi(2) / 2.0)
    }

    fn d1(&self, q: f64, q1: f64) -> Result<f64> {
        Ok(-self.step(q, q1)?)
    }

    fn d2(&self, q: f64, q1: f64) -> Result<f64> {
        self.step(q, q1)
    }

    fn d12(&self, q: f64, q1: f64) -> Result<f64> {
        self.step(q, q1)?;
        Ok(-1.0)
    }

    fn in_domain(&self, q: f64, q1: f64) -> bool {
        self.step(q, q1).is_ok()
    }
}
