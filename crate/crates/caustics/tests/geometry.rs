//! Oracle tests for the domain layer: closed-form values for circles and
//! ellipses, quadrature cross-checks for Fourier domains, and the chord /
//! tangency primitives the billiard maps rely on.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI, TAU};

use approx::assert_abs_diff_eq;
use caustics::numerics::gauss_legendre;
use caustics::{Domain, DomainSpec, Error, Vec2};

fn circle() -> Domain {
    DomainSpec::circle().build().unwrap()
}

fn ellipse_half() -> Domain {
    DomainSpec::ellipse(1.0, 0.5).build().unwrap()
}

/// A strictly convex, centrally symmetric Fourier domain that is not a
/// circle (even harmonics only).
fn wavy() -> Domain {
    DomainSpec::FourierRho {
        coefficients: vec![(0, 1.0 / TAU, 0.0), (2, 0.01, -0.004), (4, 0.002, 0.001)],
        strip: None,
        cutoff: None,
    }
    .build()
    .unwrap()
}

#[test]
fn circle_radius_of_curvature_is_inverse_two_pi() {
    let domain = circle();
    for k in 0..7 {
        let theta = k as f64 * 0.9;
        assert_abs_diff_eq!(domain.rho(theta), 1.0 / TAU, epsilon = 1e-15);
    }
}

#[test]
fn unit_circle_as_ellipse_has_unit_raw_radius() {
    let domain = DomainSpec::ellipse(1.0, 1.0).build().unwrap();
    assert_abs_diff_eq!(domain.rho_raw(0.3), 1.0, epsilon = 1e-14);
    assert_abs_diff_eq!(domain.perimeter_raw(), TAU, epsilon = 1e-12);
}

#[test]
fn circle_boundary_points_match_closed_form() {
    let domain = circle();
    let base = domain.frame_at_angle(0.0);
    assert_abs_diff_eq!(base.position.x, 0.0, epsilon = 1e-14);
    assert_abs_diff_eq!(base.position.y, 0.0, epsilon = 1e-14);
    assert_abs_diff_eq!(base.tangent.x, 1.0, epsilon = 1e-14);
    assert_abs_diff_eq!(base.tangent.y, 0.0, epsilon = 1e-14);

    let top = domain.frame_at_angle(PI);
    assert_abs_diff_eq!(top.position.x, 0.0, epsilon = 1e-13);
    assert_abs_diff_eq!(top.position.y, 1.0 / PI, epsilon = 1e-13);
}

#[test]
fn circle_center_is_at_radius_height() {
    let center = circle().center();
    assert_abs_diff_eq!(center.x, 0.0, epsilon = 1e-12);
    assert_abs_diff_eq!(center.y, 1.0 / TAU, epsilon = 1e-12);
}

#[test]
fn ellipse_center_is_origin() {
    let center = ellipse_half().center();
    assert_abs_diff_eq!(center.x, 0.0, epsilon = 1e-15);
    assert_abs_diff_eq!(center.y, 0.0, epsilon = 1e-15);
}

#[test]
fn ellipse_perimeter_matches_quadrature() {
    let domain = ellipse_half();
    let (a, b) = (1.0, 0.5);
    let speed = |psi: f64| ((a * psi.sin()).powi(2) + (b * psi.cos()).powi(2)).sqrt();
    let oracle = gauss_legendre(speed, 0.0, TAU, 64);
    assert_abs_diff_eq!(domain.perimeter_raw(), oracle, epsilon = 1e-11);
}

#[test]
fn ellipse_frame_curvature_is_consistent_with_rho() {
    let domain = ellipse_half();
    for k in 0..11 {
        let psi = k as f64 * 0.61;
        let frame = domain.frame_native(psi);
        assert_abs_diff_eq!(1.0 / frame.curvature, domain.rho(frame.theta), epsilon = 1e-12);
    }
}

#[test]
fn ellipse_eccentricity_constructor_sets_axes() {
    let spec = DomainSpec::ellipse_with_eccentricity(0.5);
    match spec {
        DomainSpec::Ellipse { a, b, .. } => {
            assert_abs_diff_eq!(a, 1.0, epsilon = 0.0);
            assert_abs_diff_eq!(b, 0.75f64.sqrt(), epsilon = 1e-15);
        }
        _ => panic!("expected an ellipse spec"),
    }
}

#[test]
fn fourier_positions_match_quadrature_oracle() {
    let domain = wavy();
    for &u in &[0.0, 0.3, 1.1, 2.5, 4.0, TAU - 0.2, TAU, 7.1] {
        let x = gauss_legendre(|t| domain.rho(t) * t.cos(), 0.0, u, 512);
        let y = gauss_legendre(|t| domain.rho(t) * t.sin(), 0.0, u, 512);
        let p = domain.point_native(u);
        assert_abs_diff_eq!(p.x, x, epsilon = 1e-12);
        assert_abs_diff_eq!(p.y, y, epsilon = 1e-12);
    }
}

#[test]
fn fourier_curve_closes_after_one_period() {
    let domain = wavy();
    for &u in &[0.0, 0.7, 2.9] {
        let p0 = domain.point_native(u);
        let p1 = domain.point_native(u + TAU);
        assert_abs_diff_eq!((p1 - p0).norm(), 0.0, epsilon = 1e-12);
    }
}

#[test]
fn nonzero_first_harmonic_is_rejected() {
    let spec = DomainSpec::FourierRho {
        coefficients: vec![(0, 1.0 / TAU, 0.0), (1, 0.01, 0.0)],
        strip: None,
        cutoff: None,
    };
    match spec.build() {
        Err(Error::ClosureDefect { magnitude }) => assert!(magnitude > 1e-12),
        other => panic!("expected a closure defect, got {other:?}"),
    }
}

#[test]
fn nonconvex_curvature_data_is_rejected() {
    let spec = DomainSpec::FourierRho {
        coefficients: vec![(0, 1.0 / TAU, 0.0), (2, 0.2, 0.0)],
        strip: None,
        cutoff: None,
    };
    match spec.build() {
        Err(Error::NotConvex { value, .. }) => assert!(value <= 0.0),
        other => panic!("expected a convexity failure, got {other:?}"),
    }
}

#[test]
fn degenerate_ellipse_axes_are_rejected() {
    assert!(matches!(DomainSpec::ellipse(1.0, 0.0).build(), Err(Error::InvalidDomain(_))));
    assert!(matches!(DomainSpec::ellipse(0.5, 1.0).build(), Err(Error::InvalidDomain(_))));
}

#[test]
fn arclength_roundtrips_on_both_representations() {
    for domain in [circle(), ellipse_half(), wavy()] {
        for &s in &[-0.3, 0.0, 0.1, 0.37, 0.5, 0.93, 1.0, 1.7] {
            let u = domain.native_of_arclength(s);
            assert_abs_diff_eq!(domain.arclength_of_native(u), s, epsilon = 1e-10);
        }
        assert_abs_diff_eq!(domain.arclength_of_native(TAU), 1.0, epsilon = 1e-12);
    }
}

#[test]
fn arclength_is_monotone_in_the_native_parameter() {
    for domain in [ellipse_half(), wavy()] {
        let mut last = domain.arclength_of_native(-1.0);
        for j in 1..=1000 {
            let u = -1.0 + j as f64 * (TAU + 2.0) / 1000.0;
            let s = domain.arclength_of_native(u);
            assert!(s > last, "arclength not increasing at u = {u}");
            last = s;
        }
    }
}

#[test]
fn tangent_angle_lifts_roundtrip_on_the_ellipse() {
    let domain = ellipse_half();
    for j in -20..=20 {
        let psi = j as f64 * 0.37;
        let theta = domain.tangent_angle_of_native(psi);
        assert_abs_diff_eq!(domain.native_of_tangent_angle(theta), psi, epsilon = 1e-12);
    }
    // One full turn of the parameter is one full turn of the tangent.
    let lift = domain.tangent_angle_of_native(1.3 + TAU);
    assert_abs_diff_eq!(lift, domain.tangent_angle_of_native(1.3) + TAU, epsilon = 1e-12);
}

#[test]
fn frame_at_angle_reports_the_requested_angle() {
    for domain in [circle(), ellipse_half(), wavy()] {
        for &theta in &[0.0, 0.9, 2.2, 3.9, 5.5, 6.9] {
            let frame = domain.frame_at_angle(theta);
            assert_abs_diff_eq!(frame.theta, theta, epsilon = 1e-11);
            // The tangent must agree with the tangent angle.
            assert_abs_diff_eq!(frame.tangent.x, theta.cos(), epsilon = 1e-11);
            assert_abs_diff_eq!(frame.tangent.y, theta.sin(), epsilon = 1e-11);
        }
    }
}

#[test]
fn circle_chord_arcs_match_inscribed_angle() {
    let domain = circle();
    // A chord meeting the tangent at angle phi spans an arc phi / pi.
    let s1 = domain.chord_second_hit(0.0, FRAC_PI_2).unwrap();
    assert_abs_diff_eq!(s1, 0.5, epsilon = 1e-12);
    let s1 = domain.chord_second_hit(0.0, FRAC_PI_3).unwrap();
    assert_abs_diff_eq!(s1, 1.0 / 3.0, epsilon = 1e-12);
    let s1 = domain.chord_second_hit(0.25, 2.0 * FRAC_PI_3).unwrap();
    assert_abs_diff_eq!(s1, 0.25 + 2.0 / 3.0, epsilon = 1e-12);
}

#[test]
fn chord_lift_is_strictly_between_s_and_s_plus_one() {
    let domain = ellipse_half();
    for k in 0..9 {
        let s = 0.3 + k as f64 * 0.11;
        for &phi in &[0.05, 0.4, FRAC_PI_2, 2.6, PI - 0.05] {
            let s1 = domain.chord_second_hit(s, phi).unwrap();
            assert!(s1 > s && s1 < s + 1.0, "chord left the lift window: {s} -> {s1}");
        }
    }
}

#[test]
fn ellipse_major_axis_chord_hits_the_opposite_vertex() {
    let domain = ellipse_half();
    // Start at the left vertex (half the perimeter); the tangent there
    // points in -y, so the +x ray sits at phi = pi/2.
    let s1 = domain.chord_second_hit(0.5, FRAC_PI_2).unwrap();
    assert_abs_diff_eq!(s1, 1.0, epsilon = 1e-11);
}

#[test]
fn chord_rejects_degenerate_angles() {
    let domain = circle();
    assert!(matches!(domain.chord_second_hit(0.0, 0.0), Err(Error::AngleRange { .. })));
    assert!(matches!(domain.chord_second_hit(0.0, PI), Err(Error::AngleRange { .. })));
    assert!(matches!(domain.chord_second_hit(0.0, -0.3), Err(Error::AngleRange { .. })));
}

#[test]
fn circle_tangency_from_exterior_matches_closed_form() {
    let domain = circle();
    let radius = 1.0 / TAU;
    let center = domain.center();
    // From a point two radii to the right of the center the oriented
    // tangency sits at tangent angle 5 pi / 6.
    let z = center + Vec2::new(2.0 * radius, 0.0);
    let theta = domain.tangency_from_exterior(z).unwrap();
    assert_abs_diff_eq!(theta, 5.0 * PI / 6.0, epsilon = 1e-11);
}

#[test]
fn faraway_tangency_approaches_the_perpendicular_angle() {
    let domain = circle();
    let center = domain.center();
    let z = center + Vec2::new(1.0e6, 0.0);
    let theta = domain.tangency_from_exterior(z).unwrap();
    assert_abs_diff_eq!(theta, PI, epsilon = 1e-5);
}

#[test]
fn interior_points_have_no_tangency() {
    let domain = ellipse_half();
    let result = domain.tangency_from_exterior(Vec2::new(0.01, 0.002));
    assert!(matches!(result, Err(Error::NotExterior { .. })));
}

#[test]
fn tangency_point_lies_on_the_tangent_line() {
    let domain = wavy();
    for k in 0..8 {
        let angle = k as f64 * 0.7;
        let z = domain.center() + Vec2::new(0.8 * angle.cos(), 0.8 * angle.sin());
        let theta = domain.tangency_from_exterior(z).unwrap();
        let frame = domain.frame_at_angle(theta);
        let offset = z - frame.position;
        // z - gamma is parallel to the tangent and points backwards.
        assert_abs_diff_eq!(
            frame.tangent.x * offset.y - frame.tangent.y * offset.x,
            0.0,
            epsilon = 1e-10
        );
        assert!(frame.tangent.dot(&offset) < 0.0);
    }
}

#[test]
fn antipodal_arclength_is_half_a_turn_under_central_symmetry() {
    // Ellipses are exactly centrally symmetric; the wavy domain has even
    // harmonics only, which also gives central symmetry.
    for domain in [circle(), ellipse_half(), wavy()] {
        for &s in &[0.0, 0.13, 0.5, 0.77, 1.2] {
            assert_abs_diff_eq!(domain.antipodal_arclength(s), s + 0.5, epsilon = 1e-10);
        }
    }
}

#[test]
fn antipodal_tangent_is_reversed() {
    let domain = wavy();
    let s = 0.21;
    let frame = domain.frame_at_arclength(s);
    let other = domain.frame_at_arclength(domain.antipodal_arclength(s));
    assert_abs_diff_eq!(other.tangent.x, -frame.tangent.x, epsilon = 1e-10);
    assert_abs_diff_eq!(other.tangent.y, -frame.tangent.y, epsilon = 1e-10);
}

#[test]
fn domain_spec_round_trips_through_serde() {
    let specs = vec![DomainSpec::circle(), DomainSpec::ellipse(1.0, 0.5)];
    for spec in specs {
        let json = serde_json::to_string(&spec).unwrap();
        let back: DomainSpec = serde_json::from_str(&json).unwrap();
        let a = spec.build().unwrap();
        let b = back.build().unwrap();
        assert_abs_diff_eq!(a.perimeter_raw(), b.perimeter_raw(), epsilon = 0.0);
        let pa = a.point_native(1.1);
        let pb = b.point_native(1.1);
        assert_abs_diff_eq!((pa - pb).norm(), 0.0, epsilon = 0.0);
    }
}
