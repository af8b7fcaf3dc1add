//! Exact symplectic twist maps of the cylinder and their discrete
//! variational structure.
//!
//! A model implements [`TwistMap`]: a lift `F(q, p) = (Q, P)` of a cylinder
//! map with `F(q + 1, p) = F(q, p) + (1, 0)`, together with the open fiber
//! interval the momentum lives in.  Every map in this crate twists
//! positively: `dQ/dp > 0` wherever the map is defined.
//!
//! Maps that derive from a generating function `S(q, q1)` expose it through
//! [`GeneratingFunction`]; the exactness convention is
//!
//! ```text
//! p = -d1 S(q, Q),    P = d2 S(q, Q),
//! ```
//!
//! and positive twist is equivalent to `d12 S < 0`.  [`check_exactness`]
//! and [`check_twist_relation`] verify both identities on a grid, and
//! [`twist_interval_estimate`] measures the open interval of rotation
//! numbers the map realizes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{aitken_limit, central_diff, gcd, try_central_diff};
use crate::tol;

/// A point of the phase cylinder with the base coordinate lifted to the
/// real line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub q: f64,
    pub p: f64,
}

impl PhasePoint {
    pub fn new(q: f64, p: f64) -> Self {
        PhasePoint { q, p }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct RotationRaw {
    m: i64,
    n: u32,
}

/// Rotation data `(m, n)` in lowest terms: `n` map steps advance the base
/// point by `m` full turns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RotationRaw", into = "RotationRaw")]
pub struct RotationData {
    m: i64,
    n: u32,
}

impl RotationData {
    pub fn new(m: i64, n: u32) -> Result<Self> {
        if m < 1 {
            return Err(Error::BadRotation { m, n, reason: "m must be at least 1" });
        }
        if n == 0 {
            return Err(Error::BadRotation { m, n, reason: "n must be positive" });
        }
        if gcd(m as u64, n as u64) != 1 {
            return Err(Error::BadRotation { m, n, reason: "m and n must be coprime" });
        }
        Ok(RotationData { m, n })
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// The rotation number `m / n`.
    pub fn rho(&self) -> f64 {
        self.m as f64 / self.n as f64
    }
}

impl TryFrom<RotationRaw> for RotationData {
    type Error = Error;

    fn try_from(raw: RotationRaw) -> Result<Self> {
        RotationData::new(raw.m, raw.n)
    }
}

impl From<RotationData> for RotationRaw {
    fn from(r: RotationData) -> Self {
        RotationRaw { m: r.m, n: r.n }
    }
}

impl std::fmt::Display for RotationData {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.m, self.n)
    }
}

/// Discrete generating function of a twist map.
///
/// Defined on lifted pairs with `q1` strictly inside the admissible window
/// above `q`; outside it every method returns
/// [`Error::OutsideGeneratingDomain`].
pub trait GeneratingFunction {
    fn value(&self, q: f64, q1: f64) -> Result<f64>;

    /// Partial derivative in the first argument.
    fn d1(&self, q: f64, q1: f64) -> Result<f64>;

    /// Partial derivative in the second argument.
    fn d2(&self, q: f64, q1: f64) -> Result<f64>;

    /// Mixed second partial; negative wherever defined (positive twist).
    /// The default implementation differentiates [`Self::d1`] numerically.
    fn d12(&self, q: f64, q1: f64) -> Result<f64> {
        try_central_diff(|y| self.d1(q, y), q1, tol::FD_STEP)
    }

    /// Whether the lifted pair lies strictly inside the domain of
    /// definition.
    fn in_domain(&self, q: f64, q1: f64) -> bool;
}

/// A lift of an exact symplectic twist map of the cylinder.
pub trait TwistMap {
    /// Short human-readable model name, used in reports.
    fn name(&self) -> &'static str;

    /// One forward step of the lift.
    fn forward(&self, z: PhasePoint) -> Result<PhasePoint>;

    /// Open interval of admissible momenta over the base point `q`;
    /// unbounded ends are reported as infinities.
    fn fiber_interval(&self, q: f64) -> (f64, f64);

    /// Characteristic momentum magnitude, used to place probe points on
    /// fibers with an unbounded end and to scale margins.
    fn fiber_scale(&self) -> f64;

    /// The generating function, for models that have one in closed form.
    fn generating(&self) -> Option<&dyn GeneratingFunction> {
        None
    }
}

/// Iterate the lift, collecting `steps + 1` points starting at `start`.
pub fn iterate(map: &dyn TwistMap, start: PhasePoint, steps: usize) -> Result<Vec<PhasePoint>> {
    let mut orbit = Vec::with_capacity(steps + 1);
    orbit.push(start);
    let mut z = start;
    for _ in 0..steps {
        z = map.forward(z)?;
        orbit.push(z);
    }
    Ok(orbit)
}

/// A finite or periodically closed configuration of lifted base points,
/// the variational object whose stationary points are orbits.
#[derive(Debug, Clone)]
pub struct Configuration {
    points: Vec<f64>,
    rotation: Option<RotationData>,
}

impl Configuration {
    /// An open segment; its action sums over consecutive pairs only.
    pub fn finite(points: Vec<f64>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::Contract("a configuration needs at least two points".into()));
        }
        Ok(Configuration { points, rotation: None })
    }

    /// A periodic configuration: `points` lists one period `q_0 .. q_{n-1}`
    /// and the closing pair `(q_{n-1}, q_0 + m)` joins it up.
    pub fn periodic(points: Vec<f64>, rotation: RotationData) -> Result<Self> {
        if points.len() != rotation.n() as usize {
            return Err(Error::Contract(format!(
                "periodic configuration must list n = {} points, got {}",
                rotation.n(),
                points.len()
            )));
        }
        Ok(Configuration { points, rotation: Some(rotation) })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn rotation(&self) -> Option<RotationData> {
        self.rotation
    }

    /// Consecutive pairs, including the periodic closing pair if any.
    fn pairs(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let closing = self
            .rotation
            .map(|r| (self.points[self.points.len() - 1], self.points[0] + r.m() as f64));
        self.points.windows(2).map(|w| (w[0], w[1])).chain(closing)
    }

    /// Total action: the sum of `S` over all pairs.
    pub fn action(&self, gen: &dyn GeneratingFunction) -> Result<f64> {
        let mut total = 0.0;
        for (a, b) in self.pairs() {
            total += gen.value(a, b)?;
        }
        Ok(total)
    }

    /// Discrete Euler-Lagrange residuals `d2 S(q_{j-1}, q_j) + d1 S(q_j,
    /// q_{j+1})`: at the interior points for a finite configuration, at
    /// every point (cyclically, with the lift shift `m`) for a periodic
    /// one.
    pub fn stationarity_residual(&self, gen: &dyn GeneratingFunction) -> Result<Vec<f64>> {
        let q = &self.points;
        match self.rotation {
            None => (1..q.len() - 1)
                .map(|j| Ok(gen.d2(q[j - 1], q[j])? + gen.d1(q[j], q[j + 1])?))
                .collect(),
            Some(r) => {
                let n = q.len();
                let m = r.m() as f64;
                (0..n)
                    .map(|j| {
                        let prev = if j == 0 { q[n - 1] - m } else { q[j - 1] };
                        let next = if j == n - 1 { q[0] + m } else { q[j + 1] };
                        Ok(gen.d2(prev, q[j])? + gen.d1(q[j], next)?)
                    })
                    .collect()
            }
        }
    }
}

/// Deterministic probe momenta across the fiber over `q`, inset from the
/// ends (and windowed by the fiber scale where the fiber is unbounded).
pub fn fiber_probes(map: &dyn TwistMap, q: f64, count: usize) -> Vec<f64> {
    let (lo, hi) = map.fiber_interval(q);
    let scale = map.fiber_scale();
    let (start, width) = match (lo.is_finite(), hi.is_finite()) {
        (true, true) => (lo + 0.05 * (hi - lo), 0.9 * (hi - lo)),
        (true, false) => (lo + 0.05 * scale, 2.0 * scale),
        (false, true) => (hi - 2.05 * scale, 2.0 * scale),
        (false, false) => (-scale, 2.0 * scale),
    };
    (0..count).map(|i| start + width * i as f64 / (count - 1).max(1) as f64).collect()
}

/// Largest exactness residual `max(|p + d1 S(q, Q)|, |P - d2 S(q, Q)|)`
/// over an `n_q` x `n_p` grid of phase points.
pub fn check_exactness(map: &dyn TwistMap, n_q: usize, n_p: usize) -> Result<f64> {
    let gen = map.generating().ok_or(Error::NoGeneratingFunction)?;
    let mut worst = 0.0f64;
    for i in 0..n_q {
        let q = i as f64 / n_q as f64;
        for p in fiber_probes(map, q, n_p) {
            let image = map.forward(PhasePoint::new(q, p))?;
            let r1 = (p + gen.d1(q, image.q)?).abs();
            let r2 = (image.p - gen.d2(q, image.q)?).abs();
            worst = worst.max(r1).max(r2);
        }
    }
    Ok(worst)
}

/// Largest defect of the twist relation `d12 S(q, Q) = -(dQ/dp)^{-1}` over
/// an `n_q` x `n_p` grid; also enforces the positive-twist sign
/// convention on both sides.
pub fn check_twist_relation(map: &dyn TwistMap, n_q: usize, n_p: usize) -> Result<f64> {
    let gen = map.generating().ok_or(Error::NoGeneratingFunction)?;
    let mut worst = 0.0f64;
    for i in 0..n_q {
        let q = i as f64 / n_q as f64;
        for p in fiber_probes(map, q, n_p) {
            let dq_dp = central_diff(
                |t| map.forward(PhasePoint::new(q, t)).map_or(f64::NAN, |z| z.q),
                p,
                tol::FD_STEP,
            );
            if !(dq_dp.is_finite() && dq_dp.abs() > tol::TWIST_DEGENERATE) {
                return Err(Error::DegenerateTwist { q, p, value: dq_dp });
            }
            if dq_dp < 0.0 {
                return Err(Error::Contract(format!(
                    "negative twist dQ/dp = {dq_dp:.3e} at (q, p) = ({q:.6}, {p:.6})"
                )));
            }
            let image = map.forward(PhasePoint::new(q, p))?;
            let d12 = gen.d12(q, image.q)?;
            if d12 >= 0.0 {
                return Err(Error::Contract(format!(
                    "nonnegative d12 S = {d12:.3e} at (q, q1) = ({q:.6}, {:.6})",
                    image.q
                )));
            }
            worst = worst.max((d12 + 1.0 / dq_dp).abs());
        }
    }
    Ok(worst)
}

/// Raw one-sided bounds measured at one margin value.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TwistIntervalSample {
    pub margin: f64,
    pub lower: f64,
    pub upper: f64,
}

/// Extrapolated estimate of the twist interval: the open interval of
/// rotation numbers realized by the map.
#[derive(Debug, Clone, Serialize)]
pub struct TwistIntervalEstimate {
    pub lower: f64,
    pub upper: f64,
    /// Whether the one-sided extrapolations contracted; a `false` flag
    /// means the matching bound is the rawest sample, not a limit.
    pub lower_converged: bool,
    pub upper_converged: bool,
    /// The requested (middle) margin.
    pub margin: f64,
    /// Raw bounds at each margin of the extrapolation schedule.
    pub samples: Vec<TwistIntervalSample>,
}

impl TwistIntervalEstimate {
    /// Whether a rotation number sits inside the estimated interval, with
    /// `slack` widening on both sides.
    pub fn contains(&self, rho: f64, slack: f64) -> bool {
        rho > self.lower - slack && rho < self.upper + slack
    }
}

const INTERVAL_QS: usize = 16;

/// One-sided displacement bounds at a fixed margin: the supremum over the
/// base grid of the one-step displacement near the bottom of the fiber,
/// and the infimum near the top.
fn interval_sample(map: &dyn TwistMap, margin: f64) -> Result<TwistIntervalSample> {
    let mut lower = f64::NEG_INFINITY;
    let mut upper = f64::INFINITY;
    for i in 0..INTERVAL_QS {
        let q = i as f64 / INTERVAL_QS as f64;
        let (lo, hi) = map.fiber_interval(q);
        let scale = if lo.is_finite() && hi.is_finite() { hi - lo } else { map.fiber_scale() };
        let p_bottom = if lo.is_finite() { lo + margin * scale } else { -map.fiber_scale() / margin };
        let p_top = if hi.is_finite() { hi - margin * scale } else { map.fiber_scale() / margin };
        lower = lower.max(map.forward(PhasePoint::new(q, p_bottom))?.q - q);
        upper = upper.min(map.forward(PhasePoint::new(q, p_top))?.q - q);
    }
    Ok(TwistIntervalSample { margin, lower, upper })
}

/// Estimate the twist interval by sampling displacements at the margin
/// schedule `[10 margin, margin, margin / 10]` and extrapolating each side
/// to its limit.
pub fn twist_interval_estimate(
    map: &dyn TwistMap,
    margin: f64,
) -> Result<TwistIntervalEstimate> {
    if !(margin > 0.0 && margin < 0.1) {
        return Err(Error::Contract(format!("margin {margin:.3e} outside (0, 0.1)")));
    }
    let samples = vec![
        interval_sample(map, 10.0 * margin)?,
        interval_sample(map, margin)?,
        interval_sample(map, margin / 10.0)?,
    ];
    let (lower, lower_converged) =
        aitken_limit(samples[0].lower, samples[1].lower, samples[2].lower);
    let (upper, upper_converged) =
        aitken_limit(samples[0].upper, samples[1].upper, samples[2].upper);
    Ok(TwistIntervalEstimate { lower, upper, lower_converged, upper_converged, margin, samples })
}
