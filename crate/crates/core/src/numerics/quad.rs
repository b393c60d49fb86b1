use thiserror::Error;

use super::{lit, Real};

/// Default absolute tolerance for the x-component integrals.
pub const QUAD_TOL: f64 = 1e-10;
const MAX_DEPTH: u32 = 48;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("adaptive Simpson did not converge on [{a}, {b}]")]
pub struct QuadError {
    pub a: f64,
    pub b: f64,
}

/// Adaptive Simpson quadrature with Richardson correction.
pub fn simpson<T: Real>(f: impl Fn(T) -> T, a: T, b: T, tol: T) -> Result<T, QuadError> {
    if a == b {
        return Ok(T::zero());
    }
    let (fa, fb) = (f(a), f(b));
    let m = (a + b) / lit(2.0);
    let fm = f(m);
    let whole = (b - a) / lit(6.0) * (fa + lit::<T>(4.0) * fm + fb);
    step(&f, [a, m, b], [fa, fm, fb], whole, tol, MAX_DEPTH).ok_or(QuadError {
        a: a.to_f64().unwrap_or(f64::NAN),
        b: b.to_f64().unwrap_or(f64::NAN),
    })
}

fn step<T: Real>(f: &impl Fn(T) -> T, x: [T; 3], y: [T; 3], whole: T, tol: T, depth: u32) -> Option<T> {
    let [a, m, b] = x;
    let [fa, fm, fb] = y;
    let (lm, rm) = ((a + m) / lit(2.0), (m + b) / lit(2.0));
    let (flm, frm) = (f(lm), f(rm));
    let four: T = lit(4.0);
    let left = (m - a) / lit(6.0) * (fa + four * flm + fm);
    let right = (b - m) / lit(6.0) * (fm + four * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= lit::<T>(15.0) * tol {
        return Some(left + right + delta / lit(15.0));
    }
    if depth == 0 {
        return None;
    }
    let half = tol / lit(2.0);
    Some(step(f, [a, lm, m], [fa, flm, fm], left, half, depth - 1)? + step(f, [m, rm, b], [fm, frm, fb], right, half, depth - 1)?)
}
