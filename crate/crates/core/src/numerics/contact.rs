use super::{central, int, lit, NumError, Real};

fn check_a<T: Real>(a: T) -> Result<(), NumError> {
    if a > T::zero() {
        Ok(())
    } else {
        Err(NumError::Model(format!("a = {a} must be positive")))
    }
}

/// `α = −x dθ − ρ dτ` evaluated at `p` on `v`.
pub fn contact_form<T: Real>(p: &[T; 4], v: &[T; 4]) -> T {
    -(p[1] * v[0]) - p[3] * v[2]
}

/// `t ↦ (nt, −a/n, t, a)`.
pub fn legendrian_knot<T: Real>(n: i64, a: T, t: T) -> [T; 4] {
    let n = int::<T>(n);
    [n * t, -(a / n), t, a]
}

/// `max |α(K̇)|` along the knot, velocity by central differences.
pub fn legendrian_defect<T: Real>(n: i64, a: T, samples: usize, h: T) -> Result<T, NumError> {
    check_a(a)?;
    if n < 1 || samples == 0 {
        return Err(NumError::Model("need n ≥ 1 and at least one sample".into()));
    }
    let mut worst = T::zero();
    for k in 0..samples {
        let t = T::TAU() * int(k as i64) / int(samples as i64);
        let v = central(legendrian_knot(n, a, t + h), legendrian_knot(n, a, t - h), h);
        worst = worst.max(contact_form(&legendrian_knot(n, a, t), &v).abs());
    }
    Ok(worst)
}

/// `x² + 2ρ` along the knot, to compare with `a²`.
pub fn level_set_value<T: Real>(n: i64, a: T) -> T {
    let [_, x, _, rho] = legendrian_knot(n, a, T::zero());
    x * x + lit::<T>(2.0) * rho
}

/// Denominator of `ρ(r)` in the stereographic chart.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Denominator {
    /// `(r² + 1)²`
    Corrected,
    /// `(r + 1)²`
    Uncorrected,
}

/// `(x, ρ)` at radius `r`: `x = a(r²−1)/(r²+1)`, `ρ = 2a²r²/D`.
pub fn stereo_coords<T: Real>(a: T, r: T, d: Denominator) -> (T, T) {
    let r2 = r * r;
    let one = T::one();
    let x = a * (r2 - one) / (r2 + one);
    let den = match d {
        Denominator::Corrected => (r2 + one) * (r2 + one),
        Denominator::Uncorrected => (r + one) * (r + one),
    };
    (x, lit::<T>(2.0) * a * a * r2 / den)
}

fn radii<T: Real>(samples: usize) -> impl Iterator<Item = T> {
    let (lo, hi) = (lit::<T>(0.1).ln(), lit::<T>(10.0).ln());
    let last = int::<T>(samples.max(2) as i64 - 1);
    (0..samples.max(2)).map(move |k| (lo + (hi - lo) * int(k as i64) / last).exp())
}

/// Max deviation of `α/ρ` pulled back along `(r, ϖ, θ) ↦ (θ, x(r), −ϖ, ρ(r))`
/// from `dϖ + ((1 − r⁴)/(2ar²)) dθ`, for `r` log-spaced in `[0.1, 10]`.
pub fn stereo_identity_defect<T: Real>(a: T, d: Denominator, samples: usize, h: T) -> Result<T, NumError> {
    check_a(a)?;
    let chart = |u: [T; 3]| -> [T; 4] {
        let [r, w, theta] = u;
        let (x, rho) = stereo_coords(a, r, d);
        [theta, x, -w, rho]
    };
    let mut worst = T::zero();
    for r in radii::<T>(samples) {
        for (w, theta) in [(T::zero(), T::zero()), (lit(1.7), lit(4.1))] {
            let u = [r, w, theta];
            let p = chart(u);
            let r2 = r * r;
            let want = [T::zero(), T::one(), (T::one() - r2 * r2) / (lit::<T>(2.0) * a * r2)];
            for (j, w_j) in want.iter().enumerate() {
                let (mut up, mut dn) = (u, u);
                up[j] = up[j] + h;
                dn[j] = dn[j] - h;
                let v = central(chart(up), chart(dn), h);
                worst = worst.max((contact_form(&p, &v) / p[3] - *w_j).abs());
            }
        }
    }
    Ok(worst)
}

/// `max |x² + 2ρ − a²|` over the same radii.
pub fn sphere_defect<T: Real>(a: T, d: Denominator, samples: usize) -> Result<T, NumError> {
    check_a(a)?;
    Ok(radii::<T>(samples)
        .map(|r| {
            let (x, rho) = stereo_coords(a, r, d);
            (x * x + lit::<T>(2.0) * rho - a * a).abs()
        })
        .fold(T::zero(), T::max))
}
