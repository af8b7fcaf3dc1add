//! One-parameter family scans.
//!
//! A [`Family`] produces a twist map for every parameter value `eps` on a
//! uniform grid, and [`scan_family`] asks, member by member, whether the
//! requested (m, n)-periodic invariant graph is present.  The pattern of
//! acceptances over the grid is then summarised by a [`Classification`]:
//! graphs present on the whole grid, nowhere, or only at a handful of
//! isolated parameters.  The last case is the expected picture for a
//! rational rotation number — periodic invariant graphs are destroyed by
//! generic perturbations, surviving only on a discrete set of parameters —
//! and the scan output is labelled as numerical evidence, never proof.
//!
//! Scans are deterministic: a serial continuation pass chooses the fiber
//! branch for every member first, and the parallel full-resolution pass
//! that follows is a pure function of those seeds, so the output does not
//! depend on the number of worker threads.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Domain, DomainSpec};
use crate::models::{BirkhoffBilliard, OuterBilliard, ShearMap, SymplecticBilliard};
use crate::solver::{build_candidate_graph, solve_eta, EtaSeed, GraphOptions};
use crate::tol;
use crate::twist::{twist_interval_estimate, RotationData, TwistMap};

/// Which dynamical system each family member drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    Birkhoff,
    Outer,
    Symplectic,
    Shear,
}

impl ModelKind {
    fn build(self, domain: Domain) -> Result<Box<dyn TwistMap>> {
        match self {
            ModelKind::Birkhoff => Ok(Box::new(BirkhoffBilliard::new(domain))),
            ModelKind::Outer => Ok(Box::new(OuterBilliard::new(domain))),
            ModelKind::Symplectic => Ok(Box::new(SymplecticBilliard::new(domain))),
            ModelKind::Shear => Err(Error::Config(
                "the shear map has no domain; use the shear-offset family".into(),
            )),
        }
    }
}

/// How the family parameter deforms the system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FamilyKind {
    /// Ellipses of eccentricity `eps` (unit perimeter).
    EllipseEccentricity,
    /// A fixed base ellipse whose radius of curvature is modulated by
    /// `1 + eps cos(harmonic * theta)`.
    FourierPerturbation { base_eccentricity: f64, harmonic: u32 },
    /// The integrable shear map with offset `eps`.
    ShearOffset,
}

/// Declarative description of a scan: the family, the model it feeds, the
/// rotation number to look for, and the parameter grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub family: FamilyKind,
    pub model: ModelKind,
    pub rotation: RotationData,
    pub eps_lo: f64,
    pub eps_hi: f64,
    pub samples: usize,
}

/// A validated family with its precomputed base data.
#[derive(Debug, Clone)]
pub struct Family {
    spec: FamilySpec,
    /// One-sided Fourier coefficients of the base curvature profile
    /// (perturbation families only).
    base: Option<Vec<Complex64>>,
}

impl Family {
    pub fn new(spec: FamilySpec) -> Result<Self> {
        if !(spec.eps_lo.is_finite() && spec.eps_hi.is_finite()) {
            return Err(Error::Config("family parameter range must be finite".into()));
        }
        if spec.eps_hi < spec.eps_lo {
            return Err(Error::Config(format!(
                "family parameter range [{}, {}] is reversed",
                spec.eps_lo, spec.eps_hi
            )));
        }
        if spec.samples == 0 {
            return Err(Error::Config("family needs at least one sample".into()));
        }
        if spec.samples > 1 && spec.eps_hi == spec.eps_lo {
            return Err(Error::Config(
                "degenerate parameter range cannot carry several samples".into(),
            ));
        }
        let shear_family = matches!(spec.family, FamilyKind::ShearOffset);
        let shear_model = spec.model == ModelKind::Shear;
        if shear_family != shear_model {
            return Err(Error::Config(
                "the shear-offset family and the shear model imply each other".into(),
            ));
        }
        let base = match spec.family {
            FamilyKind::EllipseEccentricity => {
                if spec.eps_lo < 0.0 || spec.eps_hi >= 1.0 {
                    return Err(Error::Config(format!(
                        "eccentricity range [{}, {}] leaves [0, 1)",
                        spec.eps_lo, spec.eps_hi
                    )));
                }
                None
            }
            FamilyKind::FourierPerturbation { base_eccentricity, harmonic } => {
                if harmonic == 0 {
                    return Err(Error::Config("perturbation harmonic must be positive".into()));
                }
                if harmonic == 1 {
                    return Err(Error::Config(
                        "harmonic 1 violates the closure constraint".into(),
                    ));
                }
                let domain =
                    DomainSpec::ellipse_with_eccentricity(base_eccentricity).build()?;
                Some(project_curvature(&domain, tol::FOURIER_CUTOFF))
            }
            FamilyKind::ShearOffset => None,
        };
        Ok(Family { spec, base })
    }

    pub fn spec(&self) -> &FamilySpec {
        &self.spec
    }

    /// The uniform parameter grid.
    pub fn epsilons(&self) -> Vec<f64> {
        let (lo, hi, n) = (self.spec.eps_lo, self.spec.eps_hi, self.spec.samples);
        if n == 1 {
            return vec![lo];
        }
        (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
    }

    /// Build the member at parameter `eps`.
    pub fn member(&self, eps: f64) -> Result<Box<dyn TwistMap>> {
        match &self.spec.family {
            FamilyKind::EllipseEccentricity => {
                let domain = DomainSpec::ellipse_with_eccentricity(eps).build()?;
                self.spec.model.build(domain)
            }
            FamilyKind::FourierPerturbation { harmonic, .. } => {
                let base = self.base.as_ref().expect("perturbation family carries a base");
                let spec = perturbed_spec(base, *harmonic as i32, eps);
                self.spec.model.build(spec.build()?)
            }
            FamilyKind::ShearOffset => Ok(Box::new(ShearMap::new(eps))),
        }
    }
}

/// One-sided trapezoid projection of the normalized radius of curvature
/// onto `e^{i k theta}`, `k = 0 ..= cutoff`.  The integrand is analytic
/// and periodic, so the trapezoid rule converges spectrally.
fn project_curvature(domain: &Domain, cutoff: usize) -> Vec<Complex64> {
    let n = tol::PROJECTION_POINTS;
    let mut coefficients = vec![Complex64::new(0.0, 0.0); cutoff + 1];
    for j in 0..n {
        let theta = std::f64::consts::TAU * j as f64 / n as f64;
        let rho = domain.rho(theta);
        for (k, c) in coefficients.iter_mut().enumerate() {
            *c += rho * Complex64::new(0.0, -(k as f64) * theta).exp();
        }
    }
    for c in &mut coefficients {
        *c /= n as f64;
    }
    coefficients
}

/// The coefficient of index `k` (any sign) of a profile stored one-sided.
fn sided(base: &[Complex64], k: i32) -> Complex64 {
    let idx = k.unsigned_abs() as usize;
    match (idx < base.len(), k >= 0) {
        (false, _) => Complex64::new(0.0, 0.0),
        (true, true) => base[idx],
        (true, false) => base[idx].conj(),
    }
}

/// Domain spec of the base profile modulated by `1 + eps cos(h theta)`:
/// in coefficient space `c'_k = c_k + (eps / 2)(c_{k-h} + c_{k+h})`.
fn perturbed_spec(base: &[Complex64], harmonic: i32, eps: f64) -> DomainSpec {
    let cutoff = base.len() - 1 + harmonic as usize;
    let coefficients = (0..=cutoff as i32)
        .map(|k| {
            let c = sided(base, k)
                + 0.5 * eps * (sided(base, k - harmonic) + sided(base, k + harmonic));
            (k, c.re, c.im)
        })
        .collect();
    DomainSpec::FourierRho { coefficients, strip: None, cutoff: Some(cutoff) }
}

/// What happened at a single parameter value.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum MemberStatus {
    /// The candidate graph passed the `Delta2` acceptance test.
    Accepted,
    /// A candidate was built but its momentum defect is macroscopic.
    Rejected,
    /// Some fiber carries no positional root at all.
    NoRoot,
    /// The member could not be evaluated.
    Failed { reason: String },
}

impl MemberStatus {
    pub fn label(&self) -> &'static str {
        match self {
            MemberStatus::Accepted => "accepted",
            MemberStatus::Rejected => "rejected",
            MemberStatus::NoRoot => "no-root",
            MemberStatus::Failed { .. } => "failed",
        }
    }
}

/// Scan data for one parameter value.
#[derive(Debug, Clone, Serialize)]
pub struct ScanRecord {
    pub eps: f64,
    #[serde(flatten)]
    pub status: MemberStatus,
    /// Whether the rotation number sits inside the member's estimated
    /// twist interval (margin [`tol::SCAN_TI_MARGIN`]).
    pub in_twist_interval: bool,
    pub sup_delta2: Option<f64>,
    pub max_delta1: Option<f64>,
    pub closure_defect: Option<f64>,
    pub branches_at_seed: usize,
}

/// Summary of the acceptance pattern over the parameter grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Classification {
    /// Every member carries the graph.
    WholeInterval,
    /// No member does.
    Empty,
    /// Acceptance is confined to a few isolated parameters.
    IsolatedPoints { eps: Vec<f64> },
    /// The pattern fits neither picture at this resolution.
    Inconclusive { runs: usize, accepted: usize },
}

/// Options for [`scan_family`].
#[derive(Debug, Clone, Copy)]
pub struct ScanOptions {
    /// Base grid of the full-resolution candidate builds.
    pub grid: usize,
    /// Acceptance threshold on `sup |Delta2|`.
    pub accept_tol: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions { grid: 256, accept_tol: tol::ACCEPT_TOL }
    }
}

/// A completed scan.
#[derive(Debug, Clone, Serialize)]
pub struct ScanResult {
    pub spec: FamilySpec,
    /// FNV-1a fingerprint of the spec and options, for pairing output
    /// files with the scan that produced them.
    pub fingerprint: String,
    pub grid: usize,
    pub accept_tol: f64,
    pub records: Vec<ScanRecord>,
    pub classification: Classification,
    /// The standing caveat attached to every classification.
    pub caveat: &'static str,
}

/// A finite grid cannot tell an isolated parameter from a very short
/// interval; scan output is evidence, not proof.
pub const SCAN_CAVEAT: &str = "numerical evidence only: a finite parameter grid cannot \
     distinguish isolated points from very short intervals";

/// 64-bit FNV-1a hash.
fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

fn fingerprint(spec: &FamilySpec, options: &ScanOptions) -> String {
    let canonical = format!(
        "{}|grid={}|accept_tol={:e}",
        serde_json::to_string(spec).expect("family spec serializes"),
        options.grid,
        options.accept_tol,
    );
    format!("{:016x}", fnv1a(canonical.as_bytes()))
}

/// Serial continuation pass: follow the seed-fiber root along the family
/// so every member starts the full build on the same branch.  A member
/// whose root disappears resets the continuation.
fn continuation_seeds(family: &Family, eps: &[f64]) -> Vec<Option<f64>> {
    let rotation = family.spec.rotation;
    let mut seeds = Vec::with_capacity(eps.len());
    let mut previous: Option<f64> = None;
    for &e in eps {
        let found = family.member(e).ok().and_then(|map| {
            let strategy = match previous {
                Some(p) => EtaSeed::Near(p),
                None => EtaSeed::default(),
            };
            solve_eta(map.as_ref(), rotation, 0.0, strategy).ok().map(|sol| sol.p)
        });
        previous = found;
        seeds.push(found);
    }
    seeds
}

fn scan_member(
    family: &Family,
    eps: f64,
    seed: Option<f64>,
    options: &ScanOptions,
) -> ScanRecord {
    let map = match family.member(eps) {
        Ok(map) => map,
        Err(err) => {
            return ScanRecord {
                eps,
                status: MemberStatus::Failed { reason: err.to_string() },
                in_twist_interval: false,
                sup_delta2: None,
                max_delta1: None,
                closure_defect: None,
                branches_at_seed: 0,
            }
        }
    };
    let rho = family.spec.rotation.rho();
    let in_twist_interval = twist_interval_estimate(map.as_ref(), tol::SCAN_TI_MARGIN)
        .map(|estimate| estimate.contains(rho, 0.0))
        .unwrap_or(false);
    let graph_options = GraphOptions {
        grid: options.grid,
        accept_tol: options.accept_tol,
        resolution: tol::FIBER_SCAN,
        seed,
    };
    match build_candidate_graph(map.as_ref(), family.spec.rotation, graph_options) {
        Ok(graph) => ScanRecord {
            eps,
            status: if graph.accepted { MemberStatus::Accepted } else { MemberStatus::Rejected },
            in_twist_interval,
            sup_delta2: Some(graph.sup_delta2),
            max_delta1: Some(graph.max_delta1),
            closure_defect: Some(graph.closure_defect),
            branches_at_seed: graph.branches_at_seed,
        },
        Err(Error::NoRoot { .. }) | Err(Error::BranchLost { .. }) => ScanRecord {
            eps,
            status: MemberStatus::NoRoot,
            in_twist_interval,
            sup_delta2: None,
            max_delta1: None,
            closure_defect: None,
            branches_at_seed: 0,
        },
        Err(err) => ScanRecord {
            eps,
            status: MemberStatus::Failed { reason: err.to_string() },
            in_twist_interval,
            sup_delta2: None,
            max_delta1: None,
            closure_defect: None,
            branches_at_seed: 0,
        },
    }
}

/// Classify the acceptance pattern: everywhere, nowhere, a few isolated
/// parameters (at most two contiguous runs, at most five acceptances in
/// total), or inconclusive.
pub fn classify(records: &[ScanRecord]) -> Classification {
    if records.is_empty() {
        return Classification::Empty;
    }
    let flags: Vec<bool> =
        records.iter().map(|r| r.status == MemberStatus::Accepted).collect();
    let accepted = flags.iter().filter(|&&f| f).count();
    if accepted == records.len() {
        return Classification::WholeInterval;
    }
    if accepted == 0 {
        return Classification::Empty;
    }
    let runs = flags
        .windows(2)
        .filter(|w| w[1] && !w[0])
        .count()
        + usize::from(flags[0]);
    if runs <= 2 && accepted <= 5 {
        let eps = records
            .iter()
            .filter(|r| r.status == MemberStatus::Accepted)
            .map(|r| r.eps)
            .collect();
        return Classification::IsolatedPoints { eps };
    }
    Classification::Inconclusive { runs, accepted }
}

/// Run the scan: one serial continuation pass to fix the branch, then
/// full-resolution candidate builds for every member in parallel.
pub fn scan_family(family: &Family, options: &ScanOptions) -> ScanResult {
    let eps = family.epsilons();
    let seeds = continuation_seeds(family, &eps);
    let records: Vec<ScanRecord> = eps
        .par_iter()
        .zip(seeds.par_iter())
        .map(|(&e, &seed)| scan_member(family, e, seed, options))
        .collect();
    let classification = classify(&records);
    ScanResult {
        spec: family.spec.clone(),
        fingerprint: fingerprint(&family.spec, options),
        grid: options.grid,
        accept_tol: options.accept_tol,
        records,
        classification,
        caveat: SCAN_CAVEAT,
    }
}
