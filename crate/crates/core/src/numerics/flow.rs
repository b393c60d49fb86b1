use super::quad::{simpson, QUAD_TOL};
use super::surface::{Grid, ImmersionModel, SharpSurface, Surface};
use super::{angle_diff, central, int, lit, omega, NumError, Point4, Psi, Real};

/// Generating functions `f(θ, ρ)` for the flows `φ_α`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FlowFn {
    Constant(f64),
    RhoSinTheta,
    Rho2CosTheta,
    /// `f(θ̃, ρ) = ψ(θ̃/n, ρ) − qθ̃/n` on the `n`-fold cover.
    Lifted { psi: Psi, n: i64, q: i64 },
}

impl FlowFn {
    pub fn name(&self) -> String {
        match self {
            FlowFn::Constant(c) => format!("f = {c}"),
            FlowFn::RhoSinTheta => "f = rho*sin(theta)".into(),
            FlowFn::Rho2CosTheta => "f = rho^2*cos(theta)".into(),
            FlowFn::Lifted { psi, n, q } => format!("f = lift of {psi} (n = {n}, q = {q})"),
        }
    }

    /// Period in `θ`: `2π`, or `2πn` for a lift.
    pub fn period<T: Real>(&self) -> T {
        match self {
            FlowFn::Lifted { n, .. } => T::TAU() * int(*n),
            _ => T::TAU(),
        }
    }

    pub fn f<T: Real>(&self, theta: T, rho: T) -> T {
        match *self {
            FlowFn::Constant(c) => lit(c),
            FlowFn::RhoSinTheta => rho * theta.sin(),
            FlowFn::Rho2CosTheta => rho * rho * theta.cos(),
            FlowFn::Lifted { psi, n, q } => {
                let (n, q) = (int::<T>(n), int::<T>(q));
                psi.value(q, theta / n, rho) - q * theta / n
            }
        }
    }

    /// `∂f/∂θ`
    pub fn f_theta<T: Real>(&self, theta: T, rho: T) -> T {
        match *self {
            FlowFn::Constant(_) => T::zero(),
            FlowFn::RhoSinTheta => rho * theta.cos(),
            FlowFn::Rho2CosTheta => -(rho * rho * theta.sin()),
            FlowFn::Lifted { psi, n, q } => {
                let (n, q) = (int::<T>(n), int::<T>(q));
                (psi.dt(q, theta / n, rho) - q) / n
            }
        }
    }

    /// `∂²f/∂ρ∂θ`
    pub fn f_rho_theta<T: Real>(&self, theta: T, rho: T) -> T {
        match *self {
            FlowFn::Constant(_) => T::zero(),
            FlowFn::RhoSinTheta => theta.cos(),
            FlowFn::Rho2CosTheta => -(lit::<T>(2.0) * rho * theta.sin()),
            FlowFn::Lifted { psi, n, q } => {
                let (n, q) = (int::<T>(n), int::<T>(q));
                psi.dti(q, theta / n, rho) / n
            }
        }
    }

    /// `φ_α(θ, x, τ, ρ) = (θ, x − (f_θ·ρ − ∫₀^ρ f_ρθ·r dr)·α, τ + f·α, ρ)`.
    pub fn phi<T: Real>(&self, alpha: T, p: [T; 4]) -> Result<[T; 4], NumError> {
        let [theta, x, tau, rho] = p;
        let integral = simpson(|r| self.f_rho_theta(theta, r) * r, T::zero(), rho, lit(QUAD_TOL))?;
        let shift = self.f_theta(theta, rho) * rho - integral;
        Ok([theta, x - shift * alpha, tau + self.f(theta, rho) * alpha, rho])
    }

    /// `H = ∫₀^ρ f(θ, r) dr`.
    pub fn ham<T: Real>(&self, p: [T; 4]) -> Result<T, NumError> {
        let [theta, _, _, rho] = p;
        Ok(simpson(|r| self.f(theta, r), T::zero(), rho, lit(QUAD_TOL))?)
    }

    /// `X_H = (H_x, −H_θ, H_ρ, −H_τ)` with the gradient by central differences.
    pub fn hamiltonian_field<T: Real>(&self, p: [T; 4], h: T) -> Result<[T; 4], NumError> {
        let mut grad = [T::zero(); 4];
        for (k, g) in grad.iter_mut().enumerate() {
            let (mut a, mut b) = (p, p);
            a[k] = a[k] + h;
            b[k] = b[k] - h;
            *g = (self.ham(a)? - self.ham(b)?) / (h + h);
        }
        Ok([grad[1], -grad[0], grad[3], -grad[2]])
    }

    /// Sample points over one period in `θ` and `ρ ∈ (0, ε′]`.
    pub fn points<T: Real>(&self, grid: &Grid<T>) -> Vec<[T; 4]> {
        let scale = self.period::<T>() / T::TAU();
        let (x, tau) = (lit(0.05), lit(0.3));
        let rhos: Vec<T> = grid.i_values().collect();
        grid.t_values()
            .flat_map(|t| rhos.iter().map(move |&r| [t * scale, x, tau, r]))
            .collect()
    }
}

/// `φ_α` for a fixed `α ∈ [0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FlowModel<T> {
    pub f: FlowFn,
    pub alpha: T,
}

impl<T: Real> FlowModel<T> {
    /// Checks `α ∈ [0, 1]` and periodicity of `f` at sampled `ρ`.
    pub fn new(f: FlowFn, alpha: T) -> Result<Self, NumError> {
        if !(alpha >= T::zero() && alpha <= T::one()) {
            return Err(NumError::Model(format!("α = {alpha} not in [0, 1]")));
        }
        let p = f.period::<T>();
        for k in 0..=8 {
            let rho = lit::<T>(0.025) * int(k);
            for theta in [T::zero(), lit(1.0), lit(2.5)] {
                if (f.f(theta + p, rho) - f.f(theta, rho)).abs() > lit(1e-12) {
                    return Err(NumError::Model(format!("{} is not periodic in θ", f.name())));
                }
            }
        }
        Ok(FlowModel { f, alpha })
    }

    pub fn phi(&self, p: [T; 4]) -> Result<[T; 4], NumError> {
        self.f.phi(self.alpha, p)
    }

    pub fn ham(&self, p: [T; 4]) -> Result<T, NumError> {
        self.f.ham(p)
    }
}

/// `max |Jᵀ Ω J − Ω|` with `J` by central differences.
pub fn symplecto_defect<T: Real>(
    map: impl Fn([T; 4]) -> Result<[T; 4], NumError>,
    points: &[[T; 4]],
    h: T,
) -> Result<T, NumError> {
    let mut worst = T::zero();
    for p in points {
        let mut cols = [[T::zero(); 4]; 4];
        for (k, col) in cols.iter_mut().enumerate() {
            let (mut a, mut b) = (*p, *p);
            a[k] = a[k] + h;
            b[k] = b[k] - h;
            *col = central(map(a)?, map(b)?, h);
        }
        for a in 0..4 {
            for b in a + 1..4 {
                let want = if (a, b) == (0, 1) || (a, b) == (2, 3) { T::one() } else { T::zero() };
                worst = worst.max((omega(&cols[a], &cols[b]) - want).abs());
            }
        }
    }
    Ok(worst)
}

/// `max |dφ_α/dα − X_H(φ_α)|` over the points and the given `α`.
pub fn flow_eq_defect<T: Real>(f: &FlowFn, alphas: &[T], points: &[[T; 4]], h: T) -> Result<T, NumError> {
    let mut worst = T::zero();
    for &alpha in alphas {
        for &p in points {
            let d = central(f.phi(alpha + h, p)?, f.phi(alpha - h, p)?, h);
            let x = f.hamiltonian_field(f.phi(alpha, p)?, h)?;
            for k in 0..4 {
                worst = worst.max((d[k] - x[k]).abs());
            }
        }
    }
    Ok(worst)
}

fn lifted_sharp<T: Real>(model: &ImmersionModel<T>, t: T, i: T) -> Result<[T; 4], NumError> {
    SharpSurface {
        n: model.n,
        q: model.q,
        eps: model.eps,
    }
    .lifted(t, i)
}

fn lift_flow<T: Real>(model: &ImmersionModel<T>) -> FlowFn {
    FlowFn::Lifted {
        psi: model.psi,
        n: model.n,
        q: model.q,
    }
}

/// Max distance between `p_n(φ₁(Σ̃(t, I)))` and the immersion at `(t, I)`,
/// where `Σ̃` is the closed-form surface on the `n`-fold cover and `p_n`
/// reduces angles mod 2π.
pub fn cover_identity_defect<T: Real>(model: &ImmersionModel<T>, grid: &Grid<T>) -> Result<T, NumError> {
    let f = lift_flow(model);
    let mut worst = T::zero();
    for (t, i) in grid.points() {
        let left = Point4::from_array(f.phi(T::one(), lifted_sharp(model, t, i)?)?);
        let right = Point4::from_array(model.lifted(t, i)?);
        worst = worst.max(left.reduced().distance(&right.reduced()));
    }
    Ok(worst)
}

/// Total winding, in units of 2π, of the reduced `τ` of `p_n∘φ_α∘Σ̃` as `t`
/// runs once around at fixed `I`.
pub fn winding<T: Real>(model: &ImmersionModel<T>, alpha: T, i: T, samples: usize) -> Result<T, NumError> {
    let f = lift_flow(model);
    let tau_at = |k: usize| -> Result<T, NumError> {
        let t = T::TAU() * int(k as i64) / int(samples as i64);
        Ok(Point4::from_array(f.phi(alpha, lifted_sharp(model, t, i)?)?).reduced().tau)
    };
    let mut total = T::zero();
    let mut prev = tau_at(0)?;
    for k in 1..=samples {
        let cur = tau_at(k)?;
        total = total + angle_diff(cur, prev);
        prev = cur;
    }
    Ok(total / T::TAU())
}
