//! Family scans: member construction, classification of acceptance
//! patterns, and thread-count independence of the output.

use approx::assert_abs_diff_eq;
use caustics::scan::{
    classify, scan_family, Classification, Family, FamilyKind, FamilySpec, MemberStatus,
    ModelKind, ScanOptions, ScanRecord,
};
use caustics::twist::RotationData;
use caustics::Error;

fn rotation(m: i64, n: u32) -> RotationData {
    RotationData::new(m, n).unwrap()
}

fn spec(
    family: FamilyKind,
    model: ModelKind,
    rot: (i64, u32),
    range: (f64, f64),
    samples: usize,
) -> FamilySpec {
    FamilySpec {
        family,
        model,
        rotation: rotation(rot.0, rot.1),
        eps_lo: range.0,
        eps_hi: range.1,
        samples,
    }
}

fn record(eps: f64, accepted: bool) -> ScanRecord {
    ScanRecord {
        eps,
        status: if accepted { MemberStatus::Accepted } else { MemberStatus::Rejected },
        in_twist_interval: true,
        sup_delta2: Some(0.0),
        max_delta1: Some(0.0),
        closure_defect: Some(0.0),
        branches_at_seed: 1,
    }
}

#[test]
fn family_validation_rejects_bad_specs() {
    let bad = [
        // Reversed range.
        spec(FamilyKind::EllipseEccentricity, ModelKind::Birkhoff, (1, 3), (0.4, 0.1), 4),
        // No samples.
        spec(FamilyKind::EllipseEccentricity, ModelKind::Birkhoff, (1, 3), (0.0, 0.4), 0),
        // Several samples on a degenerate range.
        spec(FamilyKind::EllipseEccentricity, ModelKind::Birkhoff, (1, 3), (0.2, 0.2), 3),
        // Eccentricity leaves [0, 1).
        spec(FamilyKind::EllipseEccentricity, ModelKind::Birkhoff, (1, 3), (0.5, 1.0), 4),
        // Shear model with a billiard family.
        spec(FamilyKind::EllipseEccentricity, ModelKind::Shear, (1, 3), (0.0, 0.4), 4),
        // Billiard model with the shear family.
        spec(FamilyKind::ShearOffset, ModelKind::Birkhoff, (1, 3), (0.0, 0.4), 4),
        // Harmonic 0 does not perturb.
        spec(
            FamilyKind::FourierPerturbation { base_eccentricity: 0.5, harmonic: 0 },
            ModelKind::Birkhoff,
            (1, 3),
            (0.0, 0.05),
            4,
        ),
        // Harmonic 1 breaks closure.
        spec(
            FamilyKind::FourierPerturbation { base_eccentricity: 0.5, harmonic: 1 },
            ModelKind::Birkhoff,
            (1, 3),
            (0.0, 0.05),
            4,
        ),
    ];
    for s in bad {
        assert!(matches!(Family::new(s.clone()), Err(Error::Config(_))), "accepted {s:?}");
    }
}

#[test]
fn epsilon_grid_is_uniform_and_inclusive() {
    let family = Family::new(spec(
        FamilyKind::EllipseEccentricity,
        ModelKind::Birkhoff,
        (1, 3),
        (0.0, 0.5),
        6,
    ))
    .unwrap();
    let eps = family.epsilons();
    assert_eq!(eps.len(), 6);
    for (i, e) in eps.iter().enumerate() {
        assert_abs_diff_eq!(*e, 0.1 * i as f64, epsilon = 1e-15);
    }

    let single = Family::new(spec(
        FamilyKind::EllipseEccentricity,
        ModelKind::Birkhoff,
        (1, 3),
        (0.3, 0.3),
        1,
    ))
    .unwrap();
    assert_eq!(single.epsilons(), vec![0.3]);
}

#[test]
fn classification_covers_the_dichotomy() {
    let make = |flags: &[bool]| -> Vec<ScanRecord> {
        flags.iter().enumerate().map(|(i, &f)| record(i as f64, f)).collect()
    };
    assert_eq!(classify(&make(&[true, true, true])), Classification::WholeInterval);
    assert_eq!(classify(&make(&[false, false, false])), Classification::Empty);
    assert_eq!(classify(&[]), Classification::Empty);
    assert_eq!(
        classify(&make(&[true, false, false, true, false])),
        Classification::IsolatedPoints { eps: vec![0.0, 3.0] },
    );
    // Two runs, but one is a pair: still isolated (four acceptances).
    assert_eq!(
        classify(&make(&[true, true, false, true, true, false])),
        Classification::IsolatedPoints { eps: vec![0.0, 1.0, 3.0, 4.0] },
    );
    // Three runs: no longer isolated.
    assert_eq!(
        classify(&make(&[true, false, true, false, true, false])),
        Classification::Inconclusive { runs: 3, accepted: 3 },
    );
    // Six acceptances: too many for the isolated picture.
    assert_eq!(
        classify(&make(&[true, true, true, true, true, true, false])),
        Classification::Inconclusive { runs: 1, accepted: 6 },
    );
}

#[test]
fn shear_family_keeps_its_graph_everywhere() {
    let family = Family::new(spec(
        FamilyKind::ShearOffset,
        ModelKind::Shear,
        (1, 2),
        (0.05, 0.25),
        5,
    ))
    .unwrap();
    let result = scan_family(&family, &ScanOptions { grid: 32, ..ScanOptions::default() });
    assert_eq!(result.classification, Classification::WholeInterval);
    for r in &result.records {
        assert_eq!(r.status, MemberStatus::Accepted);
        assert!(r.in_twist_interval, "eps {} outside twist interval", r.eps);
        assert!(r.sup_delta2.unwrap() < 1e-13);
        assert_eq!(r.branches_at_seed, 1);
    }
}

#[test]
fn ellipse_half_rotation_survives_only_at_the_circle() {
    let family = Family::new(spec(
        FamilyKind::EllipseEccentricity,
        ModelKind::Birkhoff,
        (1, 2),
        (0.0, 0.5),
        6,
    ))
    .unwrap();
    let result = scan_family(&family, &ScanOptions { grid: 64, ..ScanOptions::default() });
    assert_eq!(result.classification, Classification::IsolatedPoints { eps: vec![0.0] });
    assert_eq!(result.records[0].status, MemberStatus::Accepted);
    for r in &result.records[1..] {
        assert_eq!(r.status, MemberStatus::Rejected, "eps {}", r.eps);
        let sup = r.sup_delta2.unwrap();
        assert!(sup > 1e-5, "eps {} has sup |Delta2| = {sup:.3e}", r.eps);
        assert!(r.in_twist_interval);
    }
}

#[test]
fn ellipse_third_rotation_survives_everywhere() {
    let family = Family::new(spec(
        FamilyKind::EllipseEccentricity,
        ModelKind::Birkhoff,
        (1, 3),
        (0.0, 0.5),
        6,
    ))
    .unwrap();
    let result = scan_family(&family, &ScanOptions { grid: 64, ..ScanOptions::default() });
    assert_eq!(result.classification, Classification::WholeInterval);
    for r in &result.records {
        let sup = r.sup_delta2.unwrap();
        assert!(sup < 1e-8, "eps {} has sup |Delta2| = {sup:.3e}", r.eps);
    }
}

#[test]
fn curvature_perturbation_destroys_the_graph() {
    let family = Family::new(spec(
        FamilyKind::FourierPerturbation { base_eccentricity: 0.5, harmonic: 2 },
        ModelKind::Birkhoff,
        (1, 3),
        (0.0, 0.01),
        3,
    ))
    .unwrap();
    let result = scan_family(&family, &ScanOptions { grid: 64, ..ScanOptions::default() });
    assert_eq!(
        result.classification,
        Classification::IsolatedPoints { eps: vec![0.0] },
        "records: {:?}",
        result
            .records
            .iter()
            .map(|r| (r.eps, r.status.label(), r.sup_delta2))
            .collect::<Vec<_>>(),
    );
    // The unperturbed member is the (integrable) base ellipse.
    assert!(result.records[0].sup_delta2.unwrap() < 1e-8);
    for r in &result.records[1..] {
        let sup = r.sup_delta2.unwrap();
        assert!(sup > 1e-7, "eps {} has sup |Delta2| = {sup:.3e}", r.eps);
    }
}

#[test]
fn symplectic_half_rotation_family_is_empty() {
    let family = Family::new(spec(
        FamilyKind::EllipseEccentricity,
        ModelKind::Symplectic,
        (1, 2),
        (0.0, 0.4),
        3,
    ))
    .unwrap();
    let result = scan_family(&family, &ScanOptions { grid: 32, ..ScanOptions::default() });
    assert_eq!(result.classification, Classification::Empty);
    for r in &result.records {
        assert_eq!(r.status, MemberStatus::NoRoot, "eps {}", r.eps);
    }
}

#[test]
fn fingerprint_tracks_spec_and_options() {
    let family = Family::new(spec(
        FamilyKind::ShearOffset,
        ModelKind::Shear,
        (1, 2),
        (0.1, 0.1),
        1,
    ))
    .unwrap();
    let a = scan_family(&family, &ScanOptions { grid: 16, ..ScanOptions::default() });
    let b = scan_family(&family, &ScanOptions { grid: 16, ..ScanOptions::default() });
    assert_eq!(a.fingerprint, b.fingerprint);
    assert_eq!(a.fingerprint.len(), 16);
    let c = scan_family(&family, &ScanOptions { grid: 32, ..ScanOptions::default() });
    assert_ne!(a.fingerprint, c.fingerprint);
}

#[test]
fn scan_output_is_independent_of_worker_count() {
    let run = |threads: usize| -> String {
        let pool =
            rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            let family = Family::new(spec(
                FamilyKind::EllipseEccentricity,
                ModelKind::Birkhoff,
                (1, 3),
                (0.0, 0.4),
                4,
            ))
            .unwrap();
            let result =
                scan_family(&family, &ScanOptions { grid: 32, ..ScanOptions::default() });
            serde_json::to_string_pretty(&result).unwrap()
        })
    };
    let serial = run(1);
    let parallel = run(8);
    assert_eq!(serial, parallel);
}
