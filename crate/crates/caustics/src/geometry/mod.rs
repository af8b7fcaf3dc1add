//! Strictly convex analytic domains and the geometric primitives the
//! billiard models are built from: boundary frames, chords, exterior
//! tangent lines and antipodal (parallel-tangent) parameters.
//!
//! Two boundary representations live behind [`Domain`]: a truncated
//! Fourier series of the radius of curvature ϱ(θ) in the tangent-angle
//! parametrization, and a closed-form ellipse.  Every domain is rescaled
//! to perimeter one at construction; all public coordinates (arclength
//! `s`, positions, curvatures) refer to the rescaled curve.  Arclength and
//! the tangent angle are exposed as monotone lifts, so `s + 1` and
//! `θ + 2π` denote one full turn.

mod ellipse;
mod fourier;

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{gauss_legendre, refine_root, scan_brackets};
use crate::tol;

use ellipse::EllipseCurve;
use fourier::FourierCurve;

/// Planar vector/point.
pub type Vec2 = nalgebra::Vector2<f64>;

/// Cross product of plane vectors (the standard area form ω).
pub fn wedge(a: Vec2, b: Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}

/// Rotate a vector counterclockwise.
pub fn rotate(v: Vec2, angle: f64) -> Vec2 {
    let (sin, cos) = angle.sin_cos();
    Vec2::new(cos * v.x - sin * v.y, sin * v.x + cos * v.y)
}

/// Serializable description of a domain, prior to validation.
///
/// `strip` is informational analyticity metadata and does not influence
/// any computation.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DomainSpec {
    /// Radius of curvature `ϱ(θ) = Σ_k ϱ̂_k e^{ikθ}` given by `(k, re, im)`
    /// triples.  Entries with `k > 0` imply their conjugate mirror;
    /// explicitly listed negative harmonics must match it.  Harmonics
    /// beyond `cutoff` (default 64) are discarded.
    FourierRho {
        coefficients: Vec<(i32, f64, f64)>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        strip: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        cutoff: Option<usize>,
    },
    /// Semi-axes `a ≥ b > 0`, parametrized as `(a cos ψ, b sin ψ)`.
    Ellipse {
        a: f64,
        b: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        strip: Option<f64>,
    },
}

impl DomainSpec {
    /// Circle of perimeter one (constant ϱ = 1/2π).
    pub fn circle() -> Self {
        DomainSpec::FourierRho {
            coefficients: vec![(0, 1.0 / TAU, 0.0)],
            strip: None,
            cutoff: None,
        }
    }

    pub fn ellipse(a: f64, b: f64) -> Self {
        DomainSpec::Ellipse { a, b, strip: None }
    }

    /// Ellipse with unit semi-major axis and the given eccentricity.
    pub fn ellipse_with_eccentricity(e: f64) -> Self {
        DomainSpec::Ellipse { a: 1.0, b: (1.0 - e * e).sqrt(), strip: None }
    }

    /// Validate and build the evaluator.
    pub fn build(&self) -> Result<Domain> {
        Domain::new(self)
    }
}

/// Boundary data at one point of the perimeter-one curve.
#[derive(Debug, Clone, Copy)]
pub struct BoundaryFrame {
    /// Normalized arclength (lift).
    pub s: f64,
    /// Tangent angle (lift).
    pub theta: f64,
    /// Native curve parameter (lift): tangent angle for Fourier domains,
    /// the parametric angle ψ for ellipses.
    pub u: f64,
    pub position: Vec2,
    /// Unit tangent, counterclockwise orientation.
    pub tangent: Vec2,
    /// Curvature of the normalized curve (positive).
    pub curvature: f64,
}

impl BoundaryFrame {
    /// Inward unit normal (the curve is counterclockwise).
    pub fn inward_normal(&self) -> Vec2 {
        Vec2::new(-self.tangent.y, self.tangent.x)
    }
}

#[derive(Debug, Clone)]
enum CurveKind {
    Fourier(FourierCurve),
    Ellipse(EllipseCurve),
}

/// Immutable perimeter-one boundary evaluator.
#[derive(Debug, Clone)]
pub struct Domain {
    curve: CurveKind,
    /// `1 / raw perimeter`; multiplies raw positions and lengths.
    scale: f64,
    /// Area centroid of the normalized curve.
    center: Vec2,
    strip: Option<f64>,
}

impl Domain {
    pub fn new(spec: &DomainSpec) -> Result<Self> {
        match spec {
            DomainSpec::FourierRho { coefficients, strip, cutoff } => {
                let entries: Vec<(i32, Complex64)> = coefficients
                    .iter()
                    .map(|&(k, re, im)| (k, Complex64::new(re, im)))
                    .collect();
                let curve =
                    FourierCurve::from_indexed(&entries, cutoff.unwrap_or(tol::FOURIER_CUTOFF))?;
                let scale = 1.0 / curve.perimeter_raw();
                let mut domain = Domain {
                    curve: CurveKind::Fourier(curve),
                    scale,
                    center: Vec2::zeros(),
                    strip: *strip,
                };
                domain.center = domain.centroid_by_quadrature();
                Ok(domain)
            }
            DomainSpec::Ellipse { a, b, strip } => {
                let curve = EllipseCurve::new(*a, *b)?;
                let scale = 1.0 / curve.perimeter_raw();
                Ok(Domain {
                    curve: CurveKind::Ellipse(curve),
                    scale,
                    center: Vec2::zeros(),
                    strip: *strip,
                })
            }
        }
    }

    /// Area centroid of the normalized curve (the origin for ellipses).
    pub fn center(&self) -> Vec2 {
        self.center
    }

    /// Perimeter before rescaling.
    pub fn perimeter_raw(&self) -> f64 {
        match &self.curve {
            CurveKind::Fourier(c) => c.perimeter_raw(),
            CurveKind::Ellipse(c) => c.perimeter_raw(),
        }
    }

    pub fn analyticity_strip(&self) -> Option<f64> {
        self.strip
    }

    /// One-sided Fourier coefficients of the raw ϱ, when this domain is a
    /// Fourier one.
    pub fn fourier_coefficients(&self) -> Option<&[Complex64]> {
        match &self.curve {
            CurveKind::Fourier(c) => Some(c.coefficients()),
            CurveKind::Ellipse(_) => None,
        }
    }

    /// Radius of curvature of the normalized curve at a tangent angle.
    pub fn rho(&self, theta: f64) -> f64 {
        self.rho_raw(theta) * self.scale
    }

    /// Radius of curvature of the raw (unscaled) curve at a tangent angle.
    pub fn rho_raw(&self, theta: f64) -> f64 {
        match &self.curve {
            CurveKind::Fourier(c) => c.rho_raw(theta),
            CurveKind::Ellipse(c) => c.rho_of_theta(theta),
        }
    }

    /// Position on the normalized curve at a native parameter.
    pub fn point_native(&self, u: f64) -> Vec2 {
        let p = match &self.curve {
            CurveKind::Fourier(c) => c.point_raw(u),
            CurveKind::Ellipse(c) => c.point_raw(u),
        };
        p * self.scale
    }

    /// Unit tangent at a native parameter.
    pub fn tangent_native(&self, u: f64) -> Vec2 {
        match &self.curve {
            CurveKind::Fourier(_) => Vec2::new(u.cos(), u.sin()),
            CurveKind::Ellipse(c) => c.tangent_raw(u),
        }
    }

    /// Derivative of the normalized position with respect to the native
    /// parameter.
    pub fn derivative_native(&self, u: f64) -> Vec2 {
        match &self.curve {
            CurveKind::Fourier(c) => {
                let rho = c.rho_raw(u) * self.scale;
                Vec2::new(rho * u.cos(), rho * u.sin())
            }
            CurveKind::Ellipse(c) => {
                let (a, b) = c.semi_axes();
                Vec2::new(-a * u.sin() * self.scale, b * u.cos() * self.scale)
            }
        }
    }

    /// Normalized arclength lift at a native parameter.
    pub fn arclength_of_native(&self, u: f64) -> f64 {
        let s = match &self.curve {
            CurveKind::Fourier(c) => c.s_raw(u),
            CurveKind::Ellipse(c) => c.s_raw(u),
        };
        s * self.scale
    }

    /// Native parameter lift at a normalized arclength.
    pub fn native_of_arclength(&self, s: f64) -> f64 {
        let wraps = s.floor();
        let frac = s - wraps;
        let u = match &self.curve {
            CurveKind::Fourier(c) => c.theta_of_s_frac(frac),
            CurveKind::Ellipse(c) => c.psi_of_s_frac(frac),
        };
        u + wraps * TAU
    }

    /// Tangent-angle lift at a native parameter.
    pub fn tangent_angle_of_native(&self, u: f64) -> f64 {
        match &self.curve {
            CurveKind::Fourier(_) => u,
            CurveKind::Ellipse(c) => c.theta_of_psi(u),
        }
    }

    /// Native-parameter lift at a tangent angle.
    pub fn native_of_tangent_angle(&self, theta: f64) -> f64 {
        match &self.curve {
            CurveKind::Fourier(_) => theta,
            CurveKind::Ellipse(c) => c.psi_of_theta(theta),
        }
    }

    fn curvature_native(&self, u: f64) -> f64 {
        let rho_raw = match &self.curve {
            CurveKind::Fourier(c) => c.rho_raw(u),
            CurveKind::Ellipse(c) => c.rho_of_psi(u),
        };
        1.0 / (rho_raw * self.scale)
    }

    /// Full boundary frame at a native parameter.
    pub fn frame_native(&self, u: f64) -> BoundaryFrame {
        BoundaryFrame {
            s: self.arclength_of_native(u),
            theta: self.tangent_angle_of_native(u),
            u,
            position: self.point_native(u),
            tangent: self.tangent_native(u),
            curvature: self.curvature_native(u),
        }
    }

    /// Boundary frame at a normalized arclength (lift).
    pub fn frame_at_arclength(&self, s: f64) -> BoundaryFrame {
        self.frame_native(self.native_of_arclength(s))
    }

    /// Boundary frame at a tangent angle (lift).
    pub fn frame_at_angle(&self, theta: f64) -> BoundaryFrame {
        self.frame_native(self.native_of_tangent_angle(theta))
    }

    /// Arclength of the parallel-tangent (antipodal) parameter, as a lift
    /// value in `(s, s + 1)`.
    pub fn antipodal_arclength(&self, s: f64) -> f64 {
        match &self.curve {
            // Central symmetry: the antipode is exactly half a perimeter away.
            CurveKind::Ellipse(_) => s + 0.5,
            CurveKind::Fourier(_) => {
                let u = self.native_of_arclength(s);
                self.arclength_of_native(u + std::f64::consts::PI)
            }
        }
    }

    /// Second intersection of the boundary with the ray leaving `γ(s)` at
    /// angle `φ ∈ (0, π)` from the tangent, measured counterclockwise
    /// (into the domain).  Returns the arclength lift `s1 ∈ (s, s + 1)`.
    pub fn chord_second_hit(&self, s: f64, phi: f64) -> Result<f64> {
        if !(phi > 0.0 && phi < std::f64::consts::PI) {
            return Err(Error::AngleRange { phi });
        }
        let u0 = self.native_of_arclength(s);
        let origin = self.point_native(u0);
        let dir = rotate(self.tangent_native(u0), phi);
        // Signed side of the ray: negative just after departure, positive
        // just before return, with a single crossing at the exit point.
        let g = |u: f64| wedge(dir, self.point_native(u) - origin);
        let gap = 1e-7;
        let brackets = scan_brackets(g, u0 + gap, u0 + TAU - gap, tol::EXIT_SCAN);
        let bracket = brackets.first().copied().ok_or_else(|| {
            Error::Bracketing(format!("chord from s={s:.6} at phi={phi:.6} found no exit"))
        })?;
        let root = refine_root(g, bracket, tol::ROOT_TOL)?;
        Ok(self.arclength_of_native(root.x))
    }

    /// Both tangency parameters of an exterior point, refined from a
    /// full-period scan of the tangency condition ω(γ′(u), z − γ(u)) = 0.
    fn tangency_roots(&self, z: Vec2) -> Result<Vec<f64>> {
        let g = |u: f64| wedge(self.tangent_native(u), z - self.point_native(u));
        let brackets = scan_brackets(g, 0.0, TAU, tol::CHORD_SCAN);
        if brackets.is_empty() {
            return Err(Error::NotExterior { x: z.x, y: z.y });
        }
        brackets
            .into_iter()
            .map(|b| refine_root(g, b, tol::ROOT_TOL).map(|r| r.x))
            .collect()
    }

    /// Tangency parameter of the tangent line through the exterior point
    /// `z` whose direction from `z` to the tangency point agrees with the
    /// counterclockwise boundary orientation.  Returns the tangent angle
    /// in `[0, 2π)`.
    pub fn tangency_from_exterior(&self, z: Vec2) -> Result<f64> {
        let roots = self.tangency_roots(z)?;
        for u in roots {
            // Orientation rule: the tangency point lies ahead of z, i.e.
            // z sits behind it against the tangent direction.
            if self.tangent_native(u).dot(&(z - self.point_native(u))) < 0.0 {
                return Ok(self.tangent_angle_of_native(u).rem_euclid(TAU));
            }
        }
        Err(Error::NotExterior { x: z.x, y: z.y })
    }

    /// Area centroid via Green's theorem in the native parameter.
    fn centroid_by_quadrature(&self) -> Vec2 {
        let area = 0.5
            * gauss_legendre(
                |u| wedge(self.point_native(u), self.derivative_native(u)),
                0.0,
                TAU,
                tol::QUAD_PANELS,
            );
        let moment_x = 0.5
            * gauss_legendre(
                |u| self.point_native(u).x.powi(2) * self.derivative_native(u).y,
                0.0,
                TAU,
                tol::QUAD_PANELS,
            );
        let moment_y = -0.5
            * gauss_legendre(
                |u| self.point_native(u).y.powi(2) * self.derivative_native(u).x,
                0.0,
                TAU,
                tol::QUAD_PANELS,
            );
        Vec2::new(moment_x / area, moment_y / area)
    }
}
