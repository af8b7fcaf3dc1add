//! Curves given by a truncated Fourier series of the radius of curvature
//! in the tangent-angle parametrization.
//!
//! The series is stored one-sided: `coeffs[k]` is the coefficient of
//! `e^{ikθ}` for `k ≥ 0`, and the negative harmonics are the implied
//! conjugates, so ϱ is real.  Position and arclength use the closed-form
//! antiderivatives of `ϱ(θ)e^{iθ}` and `ϱ(θ)`, which keeps every boundary
//! evaluation exact up to rounding — no quadrature enters the dynamics.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::Vec2;
use crate::numerics::newton_bisect;
use crate::tol;

/// Nodes of the lookup table backing arclength inversion.
const INVERSION_TABLE: usize = 1024;
/// Grid density for the strict-convexity sample.
const CONVEXITY_SAMPLES: usize = 1024;

#[derive(Debug, Clone)]
pub struct FourierCurve {
    /// One-sided coefficients of ϱ; index = harmonic, `coeffs[0]` real.
    coeffs: Vec<Complex64>,
    /// Raw perimeter `2π·coeffs[0].re`.
    perimeter: f64,
    /// Raw arclength at uniform θ nodes (seed for arclength inversion).
    s_table: Vec<f64>,
}

impl FourierCurve {
    /// Build from signed-index entries, folding negative harmonics onto the
    /// one-sided representation.  Listed `k > 0` entries imply their
    /// conjugate mirror; explicitly listed negative entries must match it.
    /// Harmonics above `cutoff` are discarded.
    pub fn from_indexed(entries: &[(i32, Complex64)], cutoff: usize) -> Result<Self> {
        let mut positive: Vec<Option<Complex64>> = Vec::new();
        let mut negative: Vec<Option<Complex64>> = Vec::new();
        for &(k, c) in entries {
            let idx = k.unsigned_abs() as usize;
            if idx > cutoff {
                continue;
            }
            let side = if k >= 0 { &mut positive } else { &mut negative };
            if side.len() <= idx {
                side.resize(idx + 1, None);
            }
            if side[idx].is_some() {
                return Err(Error::InvalidDomain(format!(
                    "harmonic {k} listed more than once"
                )));
            }
            side[idx] = Some(c);
        }
        let order = positive.len().max(negative.len()).max(1);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); order];
        for (k, slot) in coeffs.iter_mut().enumerate() {
            let pos = positive.get(k).copied().flatten();
            let neg = negative.get(k).copied().flatten().map(|c| c.conj());
            *slot = match (pos, neg) {
                (Some(p), Some(n)) => {
                    if (p - n).norm() > 1e-13 * (1.0 + p.norm()) {
                        return Err(Error::InvalidDomain(format!(
                            "harmonics ±{k} are not conjugate-symmetric"
                        )));
                    }
                    p
                }
                (Some(p), None) => p,
                (None, Some(n)) => n,
                (None, None) => Complex64::new(0.0, 0.0),
            };
        }
        if coeffs[0].im.abs() > 1e-14 * (1.0 + coeffs[0].re.abs()) {
            return Err(Error::InvalidDomain(
                "constant harmonic of the curvature radius must be real".into(),
            ));
        }
        coeffs[0].im = 0.0;
        Self::new(coeffs)
    }

    /// Build from one-sided coefficients, validating closure and convexity.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        let mut curve = FourierCurve { coeffs, perimeter: 0.0, s_table: Vec::new() };
        if curve.coeffs.is_empty() {
            curve.coeffs.push(Complex64::new(0.0, 0.0));
        }
        // Closed curve ⇔ the first harmonic of ϱ vanishes.
        if curve.coeffs.len() > 1 {
            let c1 = curve.coeffs[1].norm();
            if c1 >= tol::CLOSURE_TOL {
                return Err(Error::ClosureDefect { magnitude: c1 });
            }
        }
        // Strict convexity: ϱ > 0 on a dense sample.
        for j in 0..CONVEXITY_SAMPLES {
            let theta = std::f64::consts::TAU * j as f64 / CONVEXITY_SAMPLES as f64;
            let value = curve.rho_raw(theta);
            if value.is_nan() || value <= 0.0 {
                return Err(Error::NotConvex { theta, value });
            }
        }
        curve.perimeter = std::f64::consts::TAU * curve.coeffs[0].re;
        // Seed table for arclength inversion: raw arclength at uniform θ,
        // strictly increasing because ϱ > 0.
        curve.s_table = (0..=INVERSION_TABLE)
            .map(|j| curve.s_raw(std::f64::consts::TAU * j as f64 / INVERSION_TABLE as f64))
            .collect();
        Ok(curve)
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn perimeter_raw(&self) -> f64 {
        self.perimeter
    }

    /// Radius of curvature ϱ(θ) of the raw curve.
    pub fn rho_raw(&self, theta: f64) -> f64 {
        let e = Complex64::cis(theta);
        let mut w = e;
        let mut value = self.coeffs[0].re;
        for &c in &self.coeffs[1..] {
            value += 2.0 * (c * w).re;
            w *= e;
        }
        value
    }

    /// Raw position `γ(θ) = ∫₀^θ ϱ(t)e^{it} dt`, via the exact
    /// antiderivative of each harmonic.  `γ(0) = (0, 0)`.
    pub fn point_raw(&self, theta: f64) -> Vec2 {
        let e = Complex64::cis(theta);
        let mut z = Complex64::new(0.0, 0.0);
        // Harmonics k ≥ 0 contribute c_k (e^{i(k+1)θ} − 1) / (i(k+1)).
        let mut w = e;
        for (k, &c) in self.coeffs.iter().enumerate() {
            z += c * (w - 1.0) / Complex64::new(0.0, (k + 1) as f64);
            w *= e;
        }
        // Mirror harmonics −j, j ≥ 2 (the −1 term vanishes by closure).
        let ec = e.conj();
        let mut w = ec;
        for (j, &c) in self.coeffs.iter().enumerate().skip(2) {
            z += c.conj() * (w - 1.0) / Complex64::new(0.0, 1.0 - j as f64);
            w *= ec;
        }
        Vec2::new(z.re, z.im)
    }

    /// Raw arclength `s(θ) = ∫₀^θ ϱ`, as a monotone lift:
    /// `s(θ + 2π) = s(θ) + perimeter`.
    pub fn s_raw(&self, theta: f64) -> f64 {
        let e = Complex64::cis(theta);
        let mut s = self.coeffs[0].re * theta;
        let mut w = e;
        for (k, &c) in self.coeffs.iter().enumerate().skip(1) {
            s += 2.0 * (c * (w - 1.0) / Complex64::new(0.0, k as f64)).re;
            w *= e;
        }
        s
    }

    /// Tangent angle at a given fraction `s ∈ [0, 1)` of the perimeter.
    pub fn theta_of_s_frac(&self, s_frac: f64) -> f64 {
        let target = s_frac * self.perimeter;
        let cell = self.s_table.partition_point(|&s| s <= target).clamp(1, INVERSION_TABLE);
        let step = std::f64::consts::TAU / INVERSION_TABLE as f64;
        let (tlo, thi) = ((cell - 1) as f64 * step, cell as f64 * step);
        let (slo, shi) = (self.s_table[cell - 1], self.s_table[cell]);
        let guess = if shi > slo { tlo + (thi - tlo) * (target - slo) / (shi - slo) } else { tlo };
        newton_bisect(
            |theta| (self.s_raw(theta) - target, self.rho_raw(theta)),
            tlo,
            thi,
            guess,
            1e-14 * (1.0 + self.perimeter),
        )
    }
}
