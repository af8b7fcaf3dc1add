//! Closed-form ellipse boundary `ψ ↦ (a cos ψ, b sin ψ)`.
//!
//! The parametric form avoids Fourier truncation entirely; only arclength
//! needs quadrature, and that is cached in a cumulative per-cell table at
//! construction so later evaluations stay one Gauss-Legendre panel away
//! from a table node.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::geometry::Vec2;
use crate::numerics::{gauss_legendre, newton_bisect};

/// Cells of the cumulative arclength table over one period.
const ARC_TABLE: usize = 512;

#[derive(Debug, Clone)]
pub struct EllipseCurve {
    a: f64,
    b: f64,
    perimeter: f64,
    /// Raw arclength at `ψ_j = 2πj/ARC_TABLE`, `j = 0..=ARC_TABLE`.
    s_table: Vec<f64>,
}

impl EllipseCurve {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(b > 0.0 && a >= b && a.is_finite()) {
            return Err(Error::InvalidDomain(format!(
                "ellipse semi-axes must satisfy a ≥ b > 0, got a={a}, b={b}"
            )));
        }
        let speed = |psi: f64| ((a * psi.sin()).powi(2) + (b * psi.cos()).powi(2)).sqrt();
        let mut s_table = Vec::with_capacity(ARC_TABLE + 1);
        s_table.push(0.0);
        let step = TAU / ARC_TABLE as f64;
        let mut acc = 0.0;
        for j in 0..ARC_TABLE {
            let lo = j as f64 * step;
            acc += gauss_legendre(speed, lo, lo + step, 1);
            s_table.push(acc);
        }
        Ok(EllipseCurve { a, b, perimeter: acc, s_table })
    }

    pub fn semi_axes(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn perimeter_raw(&self) -> f64 {
        self.perimeter
    }

    pub fn speed(&self, psi: f64) -> f64 {
        ((self.a * psi.sin()).powi(2) + (self.b * psi.cos()).powi(2)).sqrt()
    }

    pub fn point_raw(&self, psi: f64) -> Vec2 {
        Vec2::new(self.a * psi.cos(), self.b * psi.sin())
    }

    pub fn tangent_raw(&self, psi: f64) -> Vec2 {
        let v = Vec2::new(-self.a * psi.sin(), self.b * psi.cos());
        v / self.speed(psi)
    }

    /// Radius of curvature in the parametric variable.
    pub fn rho_of_psi(&self, psi: f64) -> f64 {
        self.speed(psi).powi(3) / (self.a * self.b)
    }

    /// Radius of curvature as a function of the tangent angle.
    pub fn rho_of_theta(&self, theta: f64) -> f64 {
        let h2 = (self.a * theta.sin()).powi(2) + (self.b * theta.cos()).powi(2);
        (self.a * self.b).powi(2) / h2.powf(1.5)
    }

    /// Raw arclength as a monotone lift: `s(ψ + 2π) = s(ψ) + perimeter`.
    pub fn s_raw(&self, psi: f64) -> f64 {
        let wraps = (psi / TAU).floor();
        let frac = psi - wraps * TAU;
        let step = TAU / ARC_TABLE as f64;
        let cell = ((frac / step) as usize).min(ARC_TABLE - 1);
        let base = cell as f64 * step;
        let within = if frac > base {
            gauss_legendre(|p| self.speed(p), base, frac, 1)
        } else {
            0.0
        };
        wraps * self.perimeter + self.s_table[cell] + within
    }

    /// Parametric angle at a given fraction `s ∈ [0, 1)` of the perimeter.
    pub fn psi_of_s_frac(&self, s_frac: f64) -> f64 {
        let target = s_frac * self.perimeter;
        let cell = self.s_table.partition_point(|&s| s <= target).clamp(1, ARC_TABLE);
        let step = TAU / ARC_TABLE as f64;
        let (plo, phi) = ((cell - 1) as f64 * step, cell as f64 * step);
        let (slo, shi) = (self.s_table[cell - 1], self.s_table[cell]);
        let guess = if shi > slo { plo + (phi - plo) * (target - slo) / (shi - slo) } else { plo };
        newton_bisect(
            |psi| (self.s_raw(psi) - target, self.speed(psi)),
            plo,
            phi,
            guess,
            1e-14 * (1.0 + self.perimeter),
        )
    }

    /// Tangent angle as a continuous increasing lift of the parametric
    /// angle: `θ(ψ + 2π) = θ(ψ) + 2π`, with `θ(0) = π/2`.
    pub fn theta_of_psi(&self, psi: f64) -> f64 {
        // The unit tangent is parallel to (a cos x, b sin x) at x = ψ + π/2;
        // reduce x to a half-period where the direction has positive first
        // component, take the principal angle there, and restore the shift.
        let x = psi + 0.5 * PI;
        let k = (x / PI).round();
        let r = x - k * PI;
        k * PI + (self.b * r.sin()).atan2(self.a * r.cos())
    }

    /// Inverse of [`Self::theta_of_psi`], again as a lift.
    pub fn psi_of_theta(&self, theta: f64) -> f64 {
        let k = (theta / PI).round();
        let r = theta - k * PI;
        k * PI + (self.a * r.sin()).atan2(self.b * r.cos()) - 0.5 * PI
    }
}
