//! The two-defect construction for (m, n)-periodic invariant graphs.
//!
//! For rotation data `(m, n)` the positional defect of a phase point is
//!
//! ```text
//! Delta1(q, p) = pi_q F^n(q, p) - q - m,
//! ```
//!
//! and `eta(q)` denotes a root of `Delta1(q, .)` on the fiber over `q`.
//! The leftover momentum defect
//!
//! ```text
//! Delta2(q) = pi_p F^n(q, eta(q)) - eta(q)
//! ```
//!
//! vanishes identically exactly when the graph of `eta` is an invariant
//! circle of rotation number `m / n`.  [`build_candidate_graph`] marches
//! `eta` over a base grid and measures `sup |Delta2|`; the certification
//! helpers quantify invariance, twist-regularity (conjugate points),
//! uniqueness of the fiber root, and variational minimality.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{try_refine_root, try_scan_brackets};
use crate::tol;
use crate::twist::{Configuration, GeneratingFunction, PhasePoint, RotationData, TwistMap};

/// Image of `n` forward steps of the lift.
fn n_step(map: &dyn TwistMap, rotation: RotationData, q: f64, p: f64) -> Result<PhasePoint> {
    let mut z = PhasePoint::new(q, p);
    for _ in 0..rotation.n() {
        z = map.forward(z)?;
    }
    Ok(z)
}

/// Positional defect `Delta1(q, p)`.
pub fn delta1(map: &dyn TwistMap, rotation: RotationData, q: f64, p: f64) -> Result<f64> {
    Ok(n_step(map, rotation, q, p)?.q - q - rotation.m() as f64)
}

/// Both defects at once: `(Delta1, Delta2)` of a phase point.
pub fn defects(
    map: &dyn TwistMap,
    rotation: RotationData,
    q: f64,
    p: f64,
) -> Result<(f64, f64)> {
    let z = n_step(map, rotation, q, p)?;
    Ok((z.q - q - rotation.m() as f64, z.p - p))
}

/// Lifted base points `q_0 .. q_n` of the `n`-step segment from `(q, p)`.
pub fn base_points(
    map: &dyn TwistMap,
    rotation: RotationData,
    q: f64,
    p: f64,
) -> Result<Vec<f64>> {
    let mut points = Vec::with_capacity(rotation.n() as usize + 1);
    let mut z = PhasePoint::new(q, p);
    points.push(z.q);
    for _ in 0..rotation.n() {
        z = map.forward(z)?;
        points.push(z.q);
    }
    Ok(points)
}

/// How to locate the fiber root `eta(q)`.
#[derive(Debug, Clone, Copy)]
pub enum EtaSeed {
    /// Scan the whole admissible fiber window at the given resolution.
    FiberScan { resolution: usize },
    /// Refine near a predicted momentum (continuation along a graph),
    /// widening the search window until a root is bracketed and falling
    /// back to a full scan if none is.
    Near(f64),
}

impl Default for EtaSeed {
    fn default() -> Self {
        EtaSeed::FiberScan { resolution: tol::FIBER_SCAN }
    }
}

/// A located fiber root.
#[derive(Debug, Clone, Copy)]
pub struct EtaSolution {
    /// The root momentum `eta(q)`.
    pub p: f64,
    /// Residual `Delta1(q, p)` left by the refinement.
    pub delta1: f64,
    /// Number of distinct roots seen in the deciding search window.
    pub branches: usize,
    /// Whether the branch selection was a near-tie.
    pub ambiguous: bool,
}

/// The admissible root-search window on the fiber over `q`: bounded ends
/// are inset by a relative margin, unbounded ends are truncated at a
/// large multiple of the fiber scale.
fn scan_box(map: &dyn TwistMap, q: f64) -> (f64, f64) {
    let (lo, hi) = map.fiber_interval(q);
    let fs = map.fiber_scale();
    match (lo.is_finite(), hi.is_finite()) {
        (true, true) => {
            let inset = 1e-4 * (hi - lo);
            (lo + inset, hi - inset)
        }
        (true, false) => (lo + 1e-3 * fs, lo + 50.0 * fs),
        (false, true) => (hi - 50.0 * fs, hi - 1e-3 * fs),
        (false, false) => (-50.0 * fs, 50.0 * fs),
    }
}

/// All refined `Delta1` roots inside `[lo, hi]` at the given scan
/// resolution, in increasing momentum order.
fn roots_in_window(
    map: &dyn TwistMap,
    rotation: RotationData,
    q: f64,
    lo: f64,
    hi: f64,
    resolution: usize,
) -> Vec<(f64, f64)> {
    let mut f = |p: f64| delta1(map, rotation, q, p);
    let brackets = try_scan_brackets(&mut f, lo, hi, resolution);
    brackets
        .into_iter()
        .filter_map(|b| try_refine_root(&mut f, b, tol::ROOT_TOL).ok())
        .map(|r| (r.x, r.fx))
        .collect()
}

/// Among several roots, pick the one minimizing a key; flag a near-tie.
fn select_root(roots: &[(f64, f64)], keys: &[f64]) -> (usize, bool) {
    let mut best = 0;
    for j in 1..keys.len() {
        if keys[j] < keys[best] {
            best = j;
        }
    }
    let ambiguous = keys
        .iter()
        .enumerate()
        .any(|(j, &k)| j != best && (k - keys[best]).abs() <= 1e-12 * (1.0 + keys[best].abs()));
    let _ = roots;
    (best, ambiguous)
}

/// Selection keys for a set of roots: the `n`-step segment action where a
/// generating function exists (variational selection), the magnitude of
/// `Delta2` otherwise.
fn selection_keys(
    map: &dyn TwistMap,
    rotation: RotationData,
    q: f64,
    roots: &[(f64, f64)],
) -> Result<Vec<f64>> {
    match map.generating() {
        Some(gen) => roots
            .iter()
            .map(|&(p, _)| {
                let points = base_points(map, rotation, q, p)?;
                Configuration::finite(points)?.action(gen)
            })
            .collect(),
        None => roots
            .iter()
            .map(|&(p, _)| Ok(defects(map, rotation, q, p)?.1.abs()))
            .collect(),
    }
}

/// Find `eta(q)`: the fiber root of `Delta1(q, .)` designated by the
/// seeding strategy.
pub fn solve_eta(
    map: &dyn TwistMap,
    rotation: RotationData,
    q: f64,
    seed: EtaSeed,
) -> Result<EtaSolution> {
    let (box_lo, box_hi) = scan_box(map, q);
    match seed {
        EtaSeed::FiberScan { resolution } => {
            let roots = roots_in_window(map, rotation, q, box_lo, box_hi, resolution);
            if roots.is_empty() {
                return Err(Error::NoRoot { q });
            }
            let keys = selection_keys(map, rotation, q, &roots)?;
            let (best, ambiguous) = select_root(&roots, &keys);
            Ok(EtaSolution {
                p: roots[best].0,
                delta1: roots[best].1,
                branches: roots.len(),
                ambiguous,
            })
        }
        EtaSeed::Near(prev) => {
            // Expanding local windows around the prediction.
            let fs = map.fiber_scale();
            let mut width = 1e-3 * fs;
            for _ in 0..5 {
                let lo = (prev - width).max(box_lo);
                let hi = (prev + width).min(box_hi);
                if hi > lo {
                    let roots = roots_in_window(map, rotation, q, lo, hi, 8);
                    if !roots.is_empty() {
                        let keys: Vec<f64> =
                            roots.iter().map(|&(p, _)| (p - prev).abs()).collect();
                        let (best, ambiguous) = select_root(&roots, &keys);
                        return Ok(EtaSolution {
                            p: roots[best].0,
                            delta1: roots[best].1,
                            branches: roots.len(),
                            ambiguous,
                        });
                    }
                }
                width *= 4.0;
            }
            // Fall back to a full scan, still selecting by proximity.
            let roots =
                roots_in_window(map, rotation, q, box_lo, box_hi, tol::FIBER_SCAN);
            if roots.is_empty() {
                return Err(Error::NoRoot { q });
            }
            let keys: Vec<f64> = roots.iter().map(|&(p, _)| (p - prev).abs()).collect();
            let (best, ambiguous) = select_root(&roots, &keys);
            Ok(EtaSolution {
                p: roots[best].0,
                delta1: roots[best].1,
                branches: roots.len(),
                ambiguous,
            })
        }
    }
}

/// Options for [`build_candidate_graph`].
#[derive(Debug, Clone, Copy)]
pub struct GraphOptions {
    /// Number of base grid nodes.
    pub grid: usize,
    /// Acceptance threshold on `sup |Delta2|`.
    pub accept_tol: f64,
    /// Fiber scan resolution for the seed node.
    pub resolution: usize,
    /// Optional continuation seed for the `q = 0` fiber root (used when
    /// marching through a one-parameter family); `None` scans the fiber.
    pub seed: Option<f64>,
}

impl Default for GraphOptions {
    fn default() -> Self {
        GraphOptions {
            grid: 256,
            accept_tol: tol::ACCEPT_TOL,
            resolution: tol::FIBER_SCAN,
            seed: None,
        }
    }
}

/// A candidate (m, n)-periodic invariant graph over a uniform base grid,
/// with the measured defects and marching diagnostics.
#[derive(Debug, Clone, Serialize)]
pub struct PeriodicGraph {
    pub rotation: RotationData,
    /// Base nodes `q_j = j / grid` in `[0, 1)`.
    pub qs: Vec<f64>,
    /// The fiber root `eta(q_j)`.
    pub eta: Vec<f64>,
    /// Residual `Delta1(q_j, eta_j)` (root-refinement leftovers).
    pub delta1: Vec<f64>,
    /// Momentum defect `Delta2(q_j)`.
    pub delta2: Vec<f64>,
    pub sup_delta2: f64,
    pub max_delta1: f64,
    /// `|eta(1) - eta(0)|` from re-solving at the shifted seed.
    pub closure_defect: f64,
    /// Mismatch of the two marching directions where they meet.
    pub seam_defect: f64,
    /// Roots on the seed fiber.
    pub branches_at_seed: usize,
    /// Nodes where branch selection was a near-tie.
    pub ambiguous_nodes: usize,
    /// Whether the candidate passes the `Delta2` acceptance test.
    pub accepted: bool,
}

impl PeriodicGraph {
    /// Piecewise-linear, periodic interpolation of `eta`.
    pub fn eta_at(&self, q: f64) -> f64 {
        let n = self.qs.len();
        let frac = (q.rem_euclid(1.0)) * n as f64;
        let j = (frac.floor() as usize).min(n - 1);
        let t = frac - j as f64;
        let a = self.eta[j];
        let b = self.eta[(j + 1) % n];
        a + t * (b - a)
    }

    /// Largest slope of the piecewise-linear graph (cyclic).
    pub fn lipschitz_estimate(&self) -> f64 {
        let n = self.qs.len();
        let dq = 1.0 / n as f64;
        (0..n)
            .map(|j| ((self.eta[(j + 1) % n] - self.eta[j]) / dq).abs())
            .fold(0.0, f64::max)
    }
}

/// March the fiber root over the base grid from both ends and measure the
/// defects.
///
/// The seed fiber at `q = 0` is scanned in full.  One march continues to
/// the middle of the grid, the other starts from the periodic image `q =
/// 1` (recording the closure defect against the seed) and walks back; the
/// two meet at the seam, whose mismatch is recorded.  A node where the
/// continuation finds no root at all fails with [`Error::BranchLost`].
pub fn build_candidate_graph(
    map: &dyn TwistMap,
    rotation: RotationData,
    options: GraphOptions,
) -> Result<PeriodicGraph> {
    let n_grid = options.grid;
    if n_grid < 4 {
        return Err(Error::Contract(format!("graph grid {n_grid} is too coarse")));
    }
    let qs: Vec<f64> = (0..n_grid).map(|j| j as f64 / n_grid as f64).collect();
    let seed_strategy = match options.seed {
        Some(p) => EtaSeed::Near(p),
        None => EtaSeed::FiberScan { resolution: options.resolution },
    };
    let seed = solve_eta(map, rotation, 0.0, seed_strategy)?;
    let mut eta = vec![f64::NAN; n_grid];
    let mut ambiguous_nodes = usize::from(seed.ambiguous);
    eta[0] = seed.p;

    let mid = n_grid / 2;
    // Forward march to the seam.
    for j in 1..=mid {
        let sol = solve_eta(map, rotation, qs[j], EtaSeed::Near(eta[j - 1]))
            .map_err(|_| Error::BranchLost { index: j })?;
        ambiguous_nodes += usize::from(sol.ambiguous);
        eta[j] = sol.p;
    }
    let forward_seam = eta[mid];
    // Backward march from the periodic image of the seed.
    let wrap = solve_eta(map, rotation, 1.0, EtaSeed::Near(eta[0]))
        .map_err(|_| Error::BranchLost { index: n_grid })?;
    let closure_defect = (wrap.p - eta[0]).abs();
    let mut prev = wrap.p;
    for j in (mid..n_grid).rev() {
        let sol = solve_eta(map, rotation, qs[j], EtaSeed::Near(prev))
            .map_err(|_| Error::BranchLost { index: j })?;
        ambiguous_nodes += usize::from(sol.ambiguous);
        prev = sol.p;
        if j > mid {
            eta[j] = sol.p;
        }
    }
    let seam_defect = (prev - forward_seam).abs();

    let mut delta1_res = Vec::with_capacity(n_grid);
    let mut delta2_res = Vec::with_capacity(n_grid);
    for j in 0..n_grid {
        let (d1, d2) = defects(map, rotation, qs[j], eta[j])?;
        delta1_res.push(d1);
        delta2_res.push(d2);
    }
    let sup_delta2 = delta2_res.iter().fold(0.0f64, |m, d| m.max(d.abs()));
    let max_delta1 = delta1_res.iter().fold(0.0f64, |m, d| m.max(d.abs()));
    let accepted = sup_delta2 < options.accept_tol && max_delta1 < tol::DELTA1_TOL;

    Ok(PeriodicGraph {
        rotation,
        qs,
        eta,
        delta1: delta1_res,
        delta2: delta2_res,
        sup_delta2,
        max_delta1,
        closure_defect,
        seam_defect,
        branches_at_seed: seed.branches,
        ambiguous_nodes,
        accepted,
    })
}

/// Certification: one-step invariance of the interpolated graph,
/// `sup_j |pi_p F(q_j, eta_j) - eta(pi_q F(q_j, eta_j))|`.
pub fn invariance_residual(map: &dyn TwistMap, graph: &PeriodicGraph) -> Result<f64> {
    let mut worst = 0.0f64;
    for j in 0..graph.qs.len() {
        let image = map.forward(PhasePoint::new(graph.qs[j], graph.eta[j]))?;
        worst = worst.max((image.p - graph.eta_at(image.q)).abs());
    }
    Ok(worst)
}

/// Certification: smallest magnitude of the fiber derivative
/// `d(pi_q F^j)/dp` for `j = 1 .. n-1` along sampled graph orbits.  A
/// value near zero signals a conjugate point inside the period.
pub fn conjugate_point_check(
    map: &dyn TwistMap,
    graph: &PeriodicGraph,
    samples: usize,
) -> Result<f64> {
    let n = graph.rotation.n() as usize;
    if n < 2 {
        return Ok(f64::INFINITY);
    }
    let stride = (graph.qs.len() / samples.max(1)).max(1);
    let h = tol::FD_STEP * map.fiber_scale();
    let mut min_abs = f64::INFINITY;
    for idx in (0..graph.qs.len()).step_by(stride) {
        let (q, p) = (graph.qs[idx], graph.eta[idx]);
        let mut hi = PhasePoint::new(q, p + h);
        let mut lo = PhasePoint::new(q, p - h);
        for _ in 1..n {
            hi = map.forward(hi)?;
            lo = map.forward(lo)?;
            min_abs = min_abs.min(((hi.q - lo.q) / (2.0 * h)).abs());
        }
    }
    Ok(min_abs)
}

/// Certification: re-solve sampled fibers with independent full scans at
/// several resolutions and report the largest spread of the selected
/// root.  A graph whose fiber root is unique and robust yields machine-
/// level spread.
pub fn eta_consistency(
    map: &dyn TwistMap,
    rotation: RotationData,
    q_samples: usize,
    resolutions: &[usize],
) -> Result<f64> {
    let mut worst = 0.0f64;
    for i in 0..q_samples {
        let q = i as f64 / q_samples as f64;
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &r in resolutions {
            let sol = solve_eta(map, rotation, q, EtaSeed::FiberScan { resolution: r })?;
            lo = lo.min(sol.p);
            hi = hi.max(sol.p);
        }
        worst = worst.max(hi - lo);
    }
    Ok(worst)
}

/// Second partials of the generating function by central differences of
/// the closed-form first partials.
fn d11(gen: &dyn GeneratingFunction, a: f64, b: f64) -> Result<f64> {
    let h = tol::FD_STEP;
    Ok((gen.d1(a + h, b)? - gen.d1(a - h, b)?) / (2.0 * h))
}

fn d22(gen: &dyn GeneratingFunction, a: f64, b: f64) -> Result<f64> {
    let h = tol::FD_STEP;
    Ok((gen.d2(a, b + h)? - gen.d2(a, b - h)?) / (2.0 * h))
}

/// Gradient of the periodic action at the configuration `x` (the cyclic
/// stationarity residuals).
fn periodic_gradient(
    gen: &dyn GeneratingFunction,
    x: &[f64],
    rotation: RotationData,
) -> Result<Vec<f64>> {
    Configuration::periodic(x.to_vec(), rotation)?.stationarity_residual(gen)
}

/// Hessian of the periodic action (cyclic tridiagonal, dense storage).
fn periodic_hessian(
    gen: &dyn GeneratingFunction,
    x: &[f64],
    rotation: RotationData,
) -> Result<nalgebra::DMatrix<f64>> {
    let n = x.len();
    let m = rotation.m() as f64;
    let mut h = nalgebra::DMatrix::zeros(n, n);
    for k in 0..n {
        let (a, b, ia, ib) = if k + 1 < n {
            (x[k], x[k + 1], k, k + 1)
        } else {
            (x[k], x[0] + m, k, 0)
        };
        h[(ia, ia)] += d11(gen, a, b)?;
        h[(ib, ib)] += d22(gen, a, b)?;
        let mixed = gen.d12(a, b)?;
        h[(ia, ib)] += mixed;
        h[(ib, ia)] += mixed;
    }
    Ok(h)
}

fn monotone_in_domain(gen: &dyn GeneratingFunction, x: &[f64], m: f64) -> bool {
    let n = x.len();
    (0..n).all(|k| {
        let (a, b) = if k + 1 < n { (x[k], x[k + 1]) } else { (x[k], x[0] + m) };
        gen.in_domain(a, b)
    })
}

/// Find the action-minimizing (m, n)-periodic configuration near the
/// uniformly spaced start, by damped Newton iteration on the stationarity
/// system (with a Levenberg fallback for flat directions, such as the
/// rotational symmetry of a circle).
pub fn find_minimal_orbit(
    map: &dyn TwistMap,
    rotation: RotationData,
    start: f64,
) -> Result<Configuration> {
    let gen = map.generating().ok_or(Error::NoGeneratingFunction)?;
    let n = rotation.n() as usize;
    let m = rotation.m() as f64;
    let mut x: Vec<f64> = (0..n).map(|j| start + j as f64 * m / n as f64).collect();
    if !monotone_in_domain(gen, &x, m) {
        return Err(Error::Contract(
            "uniform start configuration leaves the generating domain".into(),
        ));
    }
    let grad_norm = |g: &[f64]| g.iter().fold(0.0f64, |s, v| s.max(v.abs()));
    for _ in 0..60 {
        let grad = periodic_gradient(gen, &x, rotation)?;
        let g0 = grad_norm(&grad);
        if g0 < 1e-13 {
            return Configuration::periodic(x, rotation);
        }
        let hess = periodic_hessian(gen, &x, rotation)?;
        let scale = hess.diagonal().amax().max(1.0);
        let rhs = nalgebra::DVector::from_iterator(n, grad.iter().map(|g| -g));
        let mut improved = false;
        'damping: for mu in [0.0, 1e-10, 1e-7, 1e-4, 1e-1] {
            let mut damped = hess.clone();
            for d in 0..n {
                damped[(d, d)] += mu * scale;
            }
            let Some(step) = damped.lu().solve(&rhs) else { continue };
            let mut alpha = 1.0;
            for _ in 0..12 {
                let trial: Vec<f64> =
                    x.iter().zip(step.iter()).map(|(xi, si)| xi + alpha * si).collect();
                if monotone_in_domain(gen, &trial, m) {
                    let trial_grad = periodic_gradient(gen, &trial, rotation)?;
                    if grad_norm(&trial_grad) < g0 {
                        x = trial;
                        improved = true;
                        break 'damping;
                    }
                }
                alpha *= 0.5;
            }
        }
        if !improved {
            return Err(Error::NotConverged(format!(
                "periodic orbit search stalled at gradient norm {g0:.3e}"
            )));
        }
    }
    let grad = periodic_gradient(gen, &x, rotation)?;
    if grad_norm(&grad) < 1e-10 {
        Configuration::periodic(x, rotation)
    } else {
        Err(Error::NotConverged(format!(
            "periodic orbit search left gradient norm {:.3e}",
            grad_norm(&grad)
        )))
    }
}

/// Brute-force minimum of the segment action between fixed endpoints over
/// a monotone grid of interior points.  Grid combinations that leave the
/// generating domain are skipped.
pub fn brute_force_segment_minimum(
    gen: &dyn GeneratingFunction,
    a: f64,
    b: f64,
    interior: usize,
    grid: usize,
) -> Result<f64> {
    if interior + 2 > tol::SEGMENT_LIMIT {
        return Err(Error::SegmentTooLong { len: interior + 2, limit: tol::SEGMENT_LIMIT });
    }
    if a.is_nan() || b.is_nan() || b <= a || grid < interior {
        return Err(Error::Contract(format!("degenerate segment window [{a:.6}, {b:.6}]")));
    }
    let nodes: Vec<f64> =
        (1..=grid).map(|i| a + (b - a) * i as f64 / (grid + 1) as f64).collect();
    let mut best = f64::INFINITY;
    // Depth-first over strictly increasing interior index tuples.
    let mut stack: Vec<(usize, Vec<f64>, f64)> = vec![(0, vec![a], 0.0)];
    while let Some((next_index, points, partial)) = stack.pop() {
        let depth = points.len() - 1;
        if depth == interior {
            if let Ok(last) = gen.value(*points.last().unwrap(), b) {
                best = best.min(partial + last);
            }
            continue;
        }
        let remaining = interior - depth;
        let last = grid.saturating_sub(remaining);
        for (i, &node) in nodes.iter().enumerate().take(last + 1).skip(next_index) {
            let prev = *points.last().unwrap();
            if let Ok(v) = gen.value(prev, node) {
                let mut extended = points.clone();
                extended.push(node);
                stack.push((i + 1, extended, partial + v));
            }
        }
    }
    if best.is_finite() {
        Ok(best)
    } else {
        Err(Error::Contract("no admissible interior configuration on the grid".into()))
    }
}

/// Certification: worst margin by which sliding 3-step windows of the
/// periodic orbit beat a brute-force grid of competitors with the same
/// endpoints.  Nonnegative margins (up to slack) certify minimality.
pub fn minimality_margin(
    map: &dyn TwistMap,
    orbit: &Configuration,
    grid: usize,
) -> Result<f64> {
    let gen = map.generating().ok_or(Error::NoGeneratingFunction)?;
    let rotation = orbit
        .rotation()
        .ok_or_else(|| Error::Contract("minimality check needs a periodic orbit".into()))?;
    let x = orbit.points();
    let n = x.len();
    let m = rotation.m() as f64;
    let lifted = |idx: usize| x[idx % n] + (idx / n) as f64 * m;
    let mut worst = f64::INFINITY;
    for j in 0..n {
        let window: Vec<f64> = (j..=j + 3).map(lifted).collect();
        let orbit_action: f64 = window
            .windows(2)
            .map(|w| gen.value(w[0], w[1]))
            .collect::<Result<Vec<_>>>()?
            .iter()
            .sum();
        let grid_min = brute_force_segment_minimum(gen, window[0], window[3], 2, grid)?;
        worst = worst.min(grid_min - orbit_action);
    }
    Ok(worst)
}
