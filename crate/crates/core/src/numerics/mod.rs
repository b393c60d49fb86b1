//! Floating-point checks of action-angle models in coordinates `(θ, x, τ, ρ)`
//! with `ω = dθ∧dx + dτ∧dρ`.
//!
//! Everything is generic over [`Real`]; the checks in [`checks`] run in
//! binary128 ([`Quad`]) so that central differences at `h = 1e-5` are limited
//! by truncation error, not by roundoff.

pub mod checks;
pub mod contact;
pub mod flow;
pub mod psi;
pub mod quad;
pub mod surface;

use std::fmt;

use num_traits::{Float, FloatConst};
use thiserror::Error;

pub use checks::{run_check, CheckKind, NumCheck, NumParams, NumReport};
pub use contact::{legendrian_defect, level_set_value, sphere_defect, stereo_identity_defect, Denominator};
pub use flow::{cover_identity_defect, flow_eq_defect, symplecto_defect, winding, FlowFn, FlowModel};
pub use psi::Psi;
pub use quad::{simpson, QuadError, QUAD_TOL};
pub use surface::{lagrangian_defect, FnSurface, Grid, ImmersionModel, SharpSurface, Surface};

/// IEEE binary128 via libquadmath.
pub type Quad = f128::f128;

pub trait Real: Float + FloatConst + fmt::Debug + fmt::Display + Send + Sync + 'static {}

impl<T: Float + FloatConst + fmt::Debug + fmt::Display + Send + Sync + 'static> Real for T {}

pub(crate) fn lit<T: Real>(v: f64) -> T {
    T::from(v).expect("finite literal")
}

pub(crate) fn int<T: Real>(v: i64) -> T {
    T::from(v).expect("integer fits")
}

pub(crate) fn to_f64<T: Real>(v: T) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumError {
    #[error("outside the model domain: {0}")]
    Domain(String),
    #[error("invalid model: {0}")]
    Model(String),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
}

/// Representative of `a` in `[0, 2π)`.
pub fn wrap_angle<T: Real>(a: T) -> T {
    let tau = T::TAU();
    let r = a - (a / tau).floor() * tau;
    if r >= tau {
        r - tau
    } else {
        r
    }
}

/// `a - b` reduced to `[-π, π)`.
pub fn angle_diff<T: Real>(a: T, b: T) -> T {
    wrap_angle(a - b + T::PI()) - T::PI()
}

/// A point `(θ, x, τ, ρ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point4<T> {
    pub theta: T,
    pub x: T,
    pub tau: T,
    pub rho: T,
}

impl<T: Real> Point4<T> {
    pub fn new(theta: T, x: T, tau: T, rho: T) -> Self {
        Point4 { theta, x, tau, rho }
    }

    pub fn from_array([theta, x, tau, rho]: [T; 4]) -> Self {
        Point4 { theta, x, tau, rho }
    }

    pub fn to_array(self) -> [T; 4] {
        [self.theta, self.x, self.tau, self.rho]
    }

    /// Both angles moved into `[0, 2π)`.
    pub fn reduced(self) -> Self {
        Point4 {
            theta: wrap_angle(self.theta),
            tau: wrap_angle(self.tau),
            ..self
        }
    }

    /// Max-norm distance with angles compared mod 2π.
    pub fn distance(&self, other: &Self) -> T {
        angle_diff(self.theta, other.theta)
            .abs()
            .max((self.x - other.x).abs())
            .max(angle_diff(self.tau, other.tau).abs())
            .max((self.rho - other.rho).abs())
    }
}

/// `ω(u, v)` for the standard form.
pub fn omega<T: Real>(u: &[T; 4], v: &[T; 4]) -> T {
    u[0] * v[1] - u[1] * v[0] + u[2] * v[3] - u[3] * v[2]
}

/// Symmetric difference quotient of a vector-valued map.
pub(crate) fn central<T: Real, const N: usize>(plus: [T; N], minus: [T; N], h: T) -> [T; N] {
    let two_h = h + h;
    std::array::from_fn(|k| (plus[k] - minus[k]) / two_h)
}
