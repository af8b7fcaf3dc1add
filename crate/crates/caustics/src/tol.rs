//! Numerical tolerances and grid defaults, named in one place.
//!
//! Every threshold that decides between "converged" and "failed" lives here
//! so tests and documentation can refer to a single source of truth.

/// Width target for bracketed scalar root refinement.
pub const ROOT_TOL: f64 = 1e-13;

/// Certification bound on |Delta1| at every node of a candidate graph.
pub const DELTA1_TOL: f64 = 1e-10;

/// Default acceptance threshold on sup |Delta2|.
pub const ACCEPT_TOL: f64 = 1e-8;

/// Step for central finite differences.
pub const FD_STEP: f64 = 1e-5;

/// Twist degeneracy threshold on |dQ/dp|.
pub const TWIST_DEGENERATE: f64 = 1e-12;

/// Sample count when scanning for tangency parameters over a full turn.
pub const CHORD_SCAN: usize = 128;

/// Sample count when bracketing a single guaranteed crossing (chord exit
/// points, image tangencies).
pub const EXIT_SCAN: usize = 8;

/// Sample count when scanning a fiber for displacement roots.
pub const FIBER_SCAN: usize = 64;

/// Default panel count for composite Gauss-Legendre quadrature.
pub const QUAD_PANELS: usize = 256;

/// Highest retained Fourier harmonic for radius-of-curvature data.
pub const FOURIER_CUTOFF: usize = 64;

/// Tolerance on the closure constraint |rho_hat(1)|.
pub const CLOSURE_TOL: f64 = 1e-12;

/// Required accuracy of arclength inversion.
pub const ARCLENGTH_TOL: f64 = 1e-10;

/// Conjugate-point indicator threshold.
pub const CONJUGATE_TOL: f64 = 1e-8;

/// Largest allowed spread of the fiber root across independent scans.
pub const CONSISTENCY_TOL: f64 = 1e-8;

/// Coprime-ish scan resolutions used when cross-checking the fiber root.
pub const CONSISTENCY_RESOLUTIONS: [usize; 5] = [53, 64, 71, 83, 97];

/// Base points sampled by the fiber-root consistency check.
pub const CONSISTENCY_QS: usize = 8;

/// Grid refinement of the brute-force minimality competitor search.
pub const MINIMALITY_GRID: usize = 40;

/// Slack allowed when comparing an orbit's action to brute-force competitors.
pub const MINIMALITY_SLACK: f64 = 1e-12;

/// Largest configuration fed to the brute-force minimality check.
pub const SEGMENT_LIMIT: usize = 5;

/// Residual bound used by the certification checks of the CLI.
pub const RESIDUAL_TOL: f64 = 1e-6;

/// Slack around a twist-interval estimate when testing membership.
pub const INTERVAL_SLACK: f64 = 2e-2;

/// Fiber margin for the per-member twist-interval estimate of a family scan.
pub const SCAN_TI_MARGIN: f64 = 1e-3;

/// Trapezoid sample count when projecting a curvature profile onto its
/// Fourier coefficients.
pub const PROJECTION_POINTS: usize = 1024;
