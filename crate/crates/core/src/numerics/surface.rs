use super::quad::{simpson, QUAD_TOL};
use super::{central, int, lit, omega, NumError, Point4, Psi, Real};

/// Sample grid in `(t, I)`: `t` uniform on `[0, 2π)`, `I` at cell centres of
/// `(0, ε′]` so that difference stencils stay inside the domain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid<T> {
    pub t_count: usize,
    pub i_count: usize,
    pub eps: T,
}

impl<T: Real> Default for Grid<T> {
    fn default() -> Self {
        Grid {
            t_count: 64,
            i_count: 32,
            eps: lit(0.2),
        }
    }
}

impl<T: Real> Grid<T> {
    pub fn new(t_count: usize, i_count: usize, eps: T) -> Result<Self, NumError> {
        if t_count == 0 || i_count == 0 || eps <= T::zero() {
            return Err(NumError::Model("grid needs positive sizes and ε′ > 0".into()));
        }
        Ok(Grid { t_count, i_count, eps })
    }

    pub fn t_values(&self) -> impl Iterator<Item = T> + '_ {
        (0..self.t_count).map(|j| T::TAU() * int::<T>(j as i64) / int(self.t_count as i64))
    }

    pub fn i_values(&self) -> impl Iterator<Item = T> + '_ {
        (0..self.i_count).map(|k| (int::<T>(k as i64) + lit(0.5)) * self.eps / int(self.i_count as i64))
    }

    pub fn points(&self) -> Vec<(T, T)> {
        let is: Vec<T> = self.i_values().collect();
        self.t_values().flat_map(|t| is.iter().map(move |&i| (t, i))).collect()
    }
}

/// A parametrised surface `(t, I) ↦ (θ, x, τ, ρ)` with angles not reduced.
pub trait Surface<T: Real> {
    fn lifted(&self, t: T, i: T) -> Result<[T; 4], NumError>;
}

/// Wraps a closure as a [`Surface`].
pub struct FnSurface<F>(pub F);

impl<T: Real, F: Fn(T, T) -> [T; 4]> Surface<T> for FnSurface<F> {
    fn lifted(&self, t: T, i: T) -> Result<[T; 4], NumError> {
        Ok((self.0)(t, i))
    }
}

fn check_domain<T: Real>(t: T, i: T, eps: T) -> Result<(), NumError> {
    if !(t >= T::zero() && t < T::TAU()) {
        return Err(NumError::Domain(format!("t = {t} not in [0, 2π)")));
    }
    if !(i >= T::zero() && i <= eps) {
        return Err(NumError::Domain(format!("I = {i} not in [0, {eps}]")));
    }
    Ok(())
}

/// The closed-form surface `(nt, −(q/n)I, qt, I)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SharpSurface<T> {
    pub n: i64,
    pub q: i64,
    pub eps: T,
}

impl<T: Real> SharpSurface<T> {
    pub fn new(n: i64, q: i64) -> Result<Self, NumError> {
        if n < 1 {
            return Err(NumError::Model(format!("n = {n} must be positive")));
        }
        Ok(SharpSurface { n, q, eps: lit(0.2) })
    }

    pub fn at(&self, t: T, i: T) -> Result<Point4<T>, NumError> {
        check_domain(t, i, self.eps)?;
        Ok(Point4::from_array(self.lifted(t, i)?).reduced())
    }
}

impl<T: Real> Surface<T> for SharpSurface<T> {
    fn lifted(&self, t: T, i: T) -> Result<[T; 4], NumError> {
        let (n, q) = (int::<T>(self.n), int::<T>(self.q));
        Ok([n * t, -(q / n) * i, q * t, i])
    }
}

/// Immersion `(nt, x(t, I), ψ(t, I), I)` with
/// `x = −(q/n)·I·ψ_t + ∫₀^I (q/n)·s·ψ_tI(t, s) ds`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ImmersionModel<T> {
    pub n: i64,
    pub q: i64,
    pub psi: Psi,
    pub eps: T,
    pub tol: T,
}

impl<T: Real> ImmersionModel<T> {
    pub fn new(n: i64, q: i64, psi: Psi) -> Result<Self, NumError> {
        Self::with_eps(n, q, psi, lit(0.2))
    }

    /// Validates `n ≥ 2`, `ε′ > 0` and the winding of `ψ` at sampled `I`.
    pub fn with_eps(n: i64, q: i64, psi: Psi, eps: T) -> Result<Self, NumError> {
        if n < 2 {
            return Err(NumError::Model(format!("n = {n} must be at least 2")));
        }
        if eps <= T::zero() {
            return Err(NumError::Model("ε′ must be positive".into()));
        }
        let model = ImmersionModel {
            n,
            q,
            psi,
            eps,
            tol: lit(QUAD_TOL),
        };
        let qt = int::<T>(q);
        for k in 0..=16 {
            let i = eps * int(k) / int(16);
            let w = psi.value(qt, T::TAU(), i) - psi.value(qt, T::zero(), i) - T::TAU() * qt;
            if w.abs() > lit(1e-12) {
                return Err(NumError::Model(format!("{psi} does not wind {q} times at I = {i}")));
            }
        }
        Ok(model)
    }

    pub fn x(&self, t: T, i: T) -> Result<T, NumError> {
        let (n, q) = (int::<T>(self.n), int::<T>(self.q));
        let k = q / n;
        let integral = simpson(|s| k * s * self.psi.dti(q, t, s), T::zero(), i, self.tol)?;
        Ok(-(k * i * self.psi.dt(q, t, i)) + integral)
    }

    pub fn at(&self, t: T, i: T) -> Result<Point4<T>, NumError> {
        check_domain(t, i, self.eps)?;
        Ok(Point4::from_array(self.lifted(t, i)?).reduced())
    }
}

impl<T: Real> Surface<T> for ImmersionModel<T> {
    fn lifted(&self, t: T, i: T) -> Result<[T; 4], NumError> {
        let q = int::<T>(self.q);
        Ok([int::<T>(self.n) * t, self.x(t, i)?, self.psi.value(q, t, i), i])
    }
}

/// `max |ω(∂_t, ∂_I)|` over the grid, partials by central differences.
pub fn lagrangian_defect<T: Real, S: Surface<T>>(s: &S, grid: &Grid<T>, h: T) -> Result<T, NumError> {
    let mut worst = T::zero();
    for (t, i) in grid.points() {
        let dt = central(s.lifted(t + h, i)?, s.lifted(t - h, i)?, h);
        let di = central(s.lifted(t, i + h)?, s.lifted(t, i - h)?, h);
        worst = worst.max(omega(&dt, &di).abs());
    }
    Ok(worst)
}
