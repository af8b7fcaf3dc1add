//! Shared numerical kernels: bracketed root finding, composite
//! Gauss-Legendre quadrature, finite differences and sequence extrapolation.
//!
//! All routines are deterministic and allocation-light.  Root refinement is
//! plain bisection down to a width target followed by a few secant polish
//! steps; at the scales used in this crate that reaches machine-level
//! residuals while never leaving the bracket.

use crate::error::{Error, Result};

/// A sign-change interval together with the end values that certify it.
#[derive(Debug, Clone, Copy)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
}

/// A refined root and the residual left at it.
#[derive(Debug, Clone, Copy)]
pub struct Root {
    pub x: f64,
    pub fx: f64,
}

/// Scan `[lo, hi]` at `n + 1` uniform nodes and collect sign-change
/// brackets.  Nodes where `f` errors are treated as gaps: no bracket is
/// formed across them.
pub fn try_scan_brackets<F>(mut f: F, lo: f64, hi: f64, n: usize) -> Vec<Bracket>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut out = Vec::new();
    if n == 0 || hi.is_nan() || lo.is_nan() || hi <= lo {
        return out;
    }
    let h = (hi - lo) / n as f64;
    let mut prev: Option<(f64, f64)> = None;
    for j in 0..=n {
        let x = if j == n { hi } else { lo + j as f64 * h };
        match f(x) {
            Ok(v) if v.is_finite() => {
                if let Some((px, pv)) = prev {
                    if pv == 0.0 {
                        // An exact zero at the previous node is its own root;
                        // report it as a degenerate bracket.
                        out.push(Bracket { lo: px, hi: px, f_lo: pv, f_hi: pv });
                    } else if pv * v < 0.0 {
                        out.push(Bracket { lo: px, hi: x, f_lo: pv, f_hi: v });
                    }
                }
                prev = Some((x, v));
            }
            _ => prev = None,
        }
    }
    if let Some((px, pv)) = prev {
        if pv == 0.0 {
            out.push(Bracket { lo: px, hi: px, f_lo: pv, f_hi: pv });
        }
    }
    out
}

/// Infallible-closure version of [`try_scan_brackets`].
pub fn scan_brackets<F>(mut f: F, lo: f64, hi: f64, n: usize) -> Vec<Bracket>
where
    F: FnMut(f64) -> f64,
{
    try_scan_brackets(|x| Ok(f(x)), lo, hi, n)
}

/// Refine a sign-change bracket by bisection to width `xtol`, then polish
/// with up to three secant steps.  Returns the iterate with the smallest
/// residual seen.
pub fn try_refine_root<F>(mut f: F, bracket: Bracket, xtol: f64) -> Result<Root>
where
    F: FnMut(f64) -> Result<f64>,
{
    let Bracket { lo, hi, f_lo: flo, f_hi: fhi } = bracket;
    if flo == 0.0 {
        return Ok(Root { x: lo, fx: 0.0 });
    }
    if fhi == 0.0 {
        return Ok(Root { x: hi, fx: 0.0 });
    }
    if flo * fhi > 0.0 {
        return Err(Error::Bracketing(format!(
            "no sign change on [{lo:.6e}, {hi:.6e}]"
        )));
    }
    // Brent's method: inverse quadratic / secant steps with a bisection
    // safeguard, never leaving the bracket.
    let (mut a, mut fa, mut b, mut fb) = (lo, flo, hi, fhi);
    if fa.abs() < fb.abs() {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut fa, &mut fb);
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut bisected = true;
    let mut best = Root { x: b, fx: fb };
    for _ in 0..200 {
        if fb == 0.0 {
            return Ok(Root { x: b, fx: 0.0 });
        }
        let width = (b - a).abs();
        if width <= xtol * (1.0 + b.abs()) {
            break;
        }
        let mut s = if fa != fc && fb != fc {
            // Inverse quadratic interpolation through (a, b, c).
            a * fb * fc / ((fa - fb) * (fa - fc))
                + b * fa * fc / ((fb - fa) * (fb - fc))
                + c * fa * fb / ((fc - fa) * (fc - fb))
        } else {
            b - fb * (b - a) / (fb - fa)
        };
        let mid = 0.5 * (a + b);
        let (gate_lo, gate_hi) = if mid < b { (mid, b) } else { (b, mid) };
        let take_bisection = !s.is_finite()
            || s <= gate_lo
            || s >= gate_hi
            || (bisected && (s - b).abs() >= 0.5 * (b - c).abs())
            || (!bisected && (s - b).abs() >= 0.5 * (c - d).abs());
        if take_bisection {
            s = mid;
            bisected = true;
        } else {
            bisected = false;
        }
        let fs = f(s)?;
        if fs.abs() < best.fx.abs() {
            best = Root { x: s, fx: fs };
        }
        d = c;
        c = b;
        fc = fb;
        if fa * fs < 0.0 {
            b = s;
            fb = fs;
        } else {
            a = s;
            fa = fs;
        }
        if fa.abs() < fb.abs() {
            std::mem::swap(&mut a, &mut b);
            std::mem::swap(&mut fa, &mut fb);
        }
    }
    Ok(best)
}

/// Infallible-closure version of [`try_refine_root`].
pub fn refine_root<F>(mut f: F, bracket: Bracket, xtol: f64) -> Result<Root>
where
    F: FnMut(f64) -> f64,
{
    try_refine_root(|x| Ok(f(x)), bracket, xtol)
}

/// Solve `f(x) = 0` for an increasing `f` with `f(lo) ≤ 0 ≤ f(hi)`, using
/// Newton steps from `guess` that fall back to bisection whenever they leave
/// the current bracket.  The closure returns `(value, derivative)`.
pub fn newton_bisect<F>(mut f: F, mut lo: f64, mut hi: f64, guess: f64, ftol: f64) -> f64
where
    F: FnMut(f64) -> (f64, f64),
{
    let mut x = guess.clamp(lo, hi);
    for _ in 0..80 {
        let (v, d) = f(x);
        if v.abs() <= ftol {
            return x;
        }
        if v > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let step = if d != 0.0 { x - v / d } else { f64::NAN };
        x = if step.is_finite() && step > lo && step < hi {
            step
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo <= f64::EPSILON * (1.0 + x.abs()) {
            return x;
        }
    }
    x
}

// Abscissae (positive half) and weights of 10-point Gauss-Legendre
// quadrature on [-1, 1].
const GL10_X: [f64; 5] = [
    0.148_874_338_981_631_21,
    0.433_395_394_129_247_2,
    0.679_409_568_299_024_4,
    0.865_063_366_688_984_5,
    0.973_906_528_517_171_7,
];
const GL10_W: [f64; 5] = [
    0.295_524_224_714_752_87,
    0.269_266_719_309_996_36,
    0.219_086_362_515_982_04,
    0.149_451_349_150_580_6,
    0.066_671_344_308_688_14,
];

/// Composite 10-point Gauss-Legendre quadrature of `f` over `[a, b]` with
/// the given number of equal panels.
pub fn gauss_legendre<F>(mut f: F, a: f64, b: f64, panels: usize) -> f64
where
    F: FnMut(f64) -> f64,
{
    let panels = panels.max(1);
    let h = (b - a) / panels as f64;
    let half = 0.5 * h;
    let mut total = 0.0;
    for j in 0..panels {
        let c = a + (j as f64 + 0.5) * h;
        let mut acc = 0.0;
        for i in 0..5 {
            acc += GL10_W[i] * (f(c - half * GL10_X[i]) + f(c + half * GL10_X[i]));
        }
        total += acc * half;
    }
    total
}

/// Central first difference `(f(x+h) - f(x-h)) / 2h`.
pub fn try_central_diff<F>(mut f: F, x: f64, h: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    Ok((f(x + h)? - f(x - h)?) / (2.0 * h))
}

/// Infallible-closure version of [`try_central_diff`].
pub fn central_diff<F>(mut f: F, x: f64, h: f64) -> f64
where
    F: FnMut(f64) -> f64,
{
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// Mixed second partial via the four-point cross stencil.
pub fn try_mixed_partial<F>(mut f: F, x: f64, y: f64, h: f64) -> Result<f64>
where
    F: FnMut(f64, f64) -> Result<f64>,
{
    let v = f(x + h, y + h)? - f(x + h, y - h)? - f(x - h, y + h)? + f(x - h, y - h)?;
    Ok(v / (4.0 * h * h))
}

/// Aitken delta-squared extrapolation of a three-term sequence.
///
/// Returns the extrapolated limit and whether the increments were actually
/// shrinking (if not, the last raw value is returned and the flag is false).
pub fn aitken_limit(e1: f64, e2: f64, e3: f64) -> (f64, bool) {
    let d1 = e2 - e1;
    let d2 = e3 - e2;
    if d2 == 0.0 {
        return (e3, true);
    }
    if d2.abs() >= d1.abs() {
        return (e3, false);
    }
    let denom = d2 - d1;
    if denom == 0.0 {
        return (e3, false);
    }
    let limit = e3 - d2 * d2 / denom;
    if limit.is_finite() {
        (limit, true)
    } else {
        (e3, false)
    }
}

/// Greatest common divisor of two non-negative integers.
pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}
