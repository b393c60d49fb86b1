//! Named batteries of numeric checks, evaluated in binary128.

use std::fmt;
use std::str::FromStr;

use num_traits::Float;

use super::{lit, Quad};

use super::contact::{legendrian_defect, level_set_value, sphere_defect, stereo_identity_defect, Denominator};
use super::flow::{cover_identity_defect, flow_eq_defect, symplecto_defect, winding, FlowFn};
use super::surface::{lagrangian_defect, FnSurface, Grid, ImmersionModel, SharpSurface};
use super::{to_f64, NumError, Psi};

type R = Quad;

/// Defects below this are treated as roundoff when testing h-halving.
pub const ROUNDOFF_FLOOR: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CheckKind {
    Lagrangian,
    Flow,
    Cover,
    Legendrian,
    Stereo,
}

impl CheckKind {
    pub const ALL: [CheckKind; 5] = [
        CheckKind::Lagrangian,
        CheckKind::Flow,
        CheckKind::Cover,
        CheckKind::Legendrian,
        CheckKind::Stereo,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Lagrangian => "lagrangian",
            CheckKind::Flow => "flow",
            CheckKind::Cover => "cover",
            CheckKind::Legendrian => "legendrian",
            CheckKind::Stereo => "stereo",
        }
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        CheckKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown check `{s}`"))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NumParams {
    pub n: i64,
    pub q: i64,
    pub psi: Option<Psi>,
    pub grid: (usize, usize),
    pub h: f64,
    /// Radius parameter; defaults to 0.01 for the knot and 1.0 for the chart.
    pub a: Option<f64>,
}

impl Default for NumParams {
    fn default() -> Self {
        NumParams {
            n: 3,
            q: 1,
            psi: None,
            grid: (64, 32),
            h: 1e-5,
            a: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Bound {
    Below(f64),
    Near { target: f64, tol: f64 },
    /// Ratio `defect(h) / defect(h/2)` at least `min`, unless `defect(h/2)`
    /// is under [`ROUNDOFF_FLOOR`].
    Halving { min: f64 },
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Below(t) => write!(f, "< {t:e}"),
            Bound::Near { target, tol } => write!(f, "= {target} ± {tol:e}"),
            Bound::Halving { min } => write!(f, "ratio ≥ {min} or below {ROUNDOFF_FLOOR:e}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NumCheck {
    pub name: String,
    pub value: f64,
    pub bound: Bound,
    pub passed: bool,
}

impl NumCheck {
    fn below(name: String, value: R, tol: f64) -> Self {
        let value = to_f64(value);
        NumCheck {
            name,
            value,
            bound: Bound::Below(tol),
            passed: value < tol,
        }
    }

    fn near(name: String, value: R, target: f64, tol: f64) -> Self {
        let passed = (value - lit::<R>(target)).abs() <= lit::<R>(tol);
        NumCheck {
            name,
            value: to_f64(value),
            bound: Bound::Near { target, tol },
            passed,
        }
    }

    fn halving(name: String, at_h: R, at_half: R) -> Self {
        let (a, b) = (to_f64(at_h), to_f64(at_half));
        let ratio = if b == 0.0 { f64::INFINITY } else { a / b };
        NumCheck {
            name,
            value: ratio,
            bound: Bound::Halving { min: 3.0 },
            passed: b < ROUNDOFF_FLOOR || ratio >= 3.0,
        }
    }
}

impl fmt::Display for NumCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = if self.passed { "ok  " } else { "FAIL" };
        write!(f, "{mark} {}: {:e} ({})", self.name, self.value, self.bound)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NumReport {
    pub kind: CheckKind,
    pub checks: Vec<NumCheck>,
    pub notes: Vec<String>,
}

impl NumReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn with_halving(
    out: &mut Vec<NumCheck>,
    name: &str,
    tol: f64,
    h: R,
    defect: impl Fn(R) -> Result<R, NumError>,
) -> Result<(), NumError> {
    let at_h = defect(h)?;
    let at_half = defect(h / lit::<R>(2.0))?;
    out.push(NumCheck::below(name.to_string(), at_h, tol));
    out.push(NumCheck::halving(format!("{name} h-halving"), at_h, at_half));
    Ok(())
}

fn psis(p: &NumParams) -> Vec<Psi> {
    match p.psi {
        Some(psi) => vec![psi],
        None => vec![Psi::ISin, Psi::Sin03, Psi::I2Cos],
    }
}

/// Runs one battery; `Err` only for invalid parameters or quadrature failure.
pub fn run_check(kind: CheckKind, p: &NumParams) -> Result<NumReport, NumError> {
    let grid = Grid::<R>::new(p.grid.0, p.grid.1, lit::<R>(0.2))?;
    let h = lit::<R>(p.h);
    if !(p.h > 0.0) {
        return Err(NumError::Model("h must be positive".into()));
    }
    let (n, q) = (p.n, p.q);
    let mut checks = Vec::new();
    let mut notes = Vec::new();
    match kind {
        CheckKind::Lagrangian => {
            let sharp = SharpSurface::<R>::new(n, q)?;
            checks.push(NumCheck::below(
                format!("closed-form surface n={n} q={q}"),
                lagrangian_defect(&sharp, &grid, h)?,
                1e-9,
            ));
            for psi in psis(p) {
                let m = ImmersionModel::<R>::new(n, q, psi)?;
                let name = format!("integral surface psi={psi} n={n} q={q}");
                if q == 1 {
                    with_halving(&mut checks, &name, 1e-6, h, |h| lagrangian_defect(&m, &grid, h))?;
                } else {
                    let d = lagrangian_defect(&m, &grid, h)?;
                    notes.push(format!("{name}: defect {:e}; the integral formula is Lagrangian only for q = 1", to_f64(d)));
                }
            }
            if q != 1 {
                let i = lit::<R>(0.1);
                let general = ImmersionModel::<R>::new(n, q, Psi::Linear)?.x(lit::<R>(1.0), i)?;
                notes.push(format!(
                    "psi = q*t, I = 0.1: integral formula gives x = {:.12} = -(q²/n)I, closed form gives {:.12} = -(q/n)I",
                    to_f64(general),
                    -(q as f64) / (n as f64) * 0.1
                ));
            }
            let control = FnSurface(|t: R, i: R| [t, i, t, i]);
            checks.push(NumCheck::near(
                "control (t, I, t, I)".into(),
                lagrangian_defect(&control, &grid, h)?,
                2.0,
                1e-9,
            ));
        }
        CheckKind::Flow => {
            let mut fs = vec![FlowFn::Constant(0.7), FlowFn::RhoSinTheta, FlowFn::Rho2CosTheta];
            if let Some(psi) = p.psi {
                fs.push(FlowFn::Lifted { psi, n, q });
            }
            let alphas: Vec<R> = [0.0, 0.25, 0.5, 0.75, 1.0].iter().map(|&a| lit::<R>(a)).collect();
            for f in &fs {
                let pts = f.points(&grid);
                let name = f.name();
                with_halving(&mut checks, &format!("symplectic {name}"), 1e-6, h, |h| {
                    let a = symplecto_defect(|x| f.phi(lit::<R>(1.0), x), &pts, h)?;
                    let b = symplecto_defect(|x| f.phi(lit::<R>(0.5), x), &pts, h)?;
                    Ok(a.max(b))
                })?;
                with_halving(&mut checks, &format!("flow equation {name}"), 1e-6, h, |h| {
                    flow_eq_defect(f, &alphas, &pts, h)
                })?;
            }
            let pts = FlowFn::Constant(0.0).points(&grid);
            let scale = |x: [R; 4]| Ok([x[0], lit::<R>(2.0) * x[1], x[2], x[3]]);
            checks.push(NumCheck::near(
                "control (θ, 2x, τ, ρ)".into(),
                symplecto_defect(scale, &pts, h)?,
                1.0,
                1e-6,
            ));
        }
        CheckKind::Cover => {
            for psi in psis(p) {
                let m = ImmersionModel::<R>::new(n, q, psi)?;
                let d = cover_identity_defect(&m, &grid)?;
                let name = format!("cover identity psi={psi} n={n} q={q}");
                if q == 1 {
                    checks.push(NumCheck::below(name, d, 1e-6));
                } else {
                    notes.push(format!("{name}: defect {:e}; the identity is stated for q = 1", to_f64(d)));
                }
                for a in [0.0, 0.25, 0.5, 0.75, 1.0] {
                    let w = winding(&m, lit::<R>(a), grid.eps / lit::<R>(2.0), 256)?;
                    checks.push(NumCheck::near(format!("winding psi={psi} alpha={a}"), w, q as f64, 1e-9));
                }
            }
        }
        CheckKind::Legendrian => {
            let a = p.a.unwrap_or(0.01);
            let d = legendrian_defect(n, lit::<R>(a), p.grid.0.max(1), h)?;
            checks.push(NumCheck::below(format!("contact form on knot n={n} a={a}"), d, 1e-12));
            notes.push(format!(
                "knot level set: x² + 2ρ = {:.12}, while a² = {:.12}",
                to_f64(level_set_value(n, lit::<R>(a))),
                a * a
            ));
        }
        CheckKind::Stereo => {
            let a = lit::<R>(p.a.unwrap_or(1.0));
            let samples = p.grid.0.max(2) * 4;
            checks.push(NumCheck::below(
                "chart identity".into(),
                stereo_identity_defect(a, Denominator::Corrected, samples, h)?,
                1e-10,
            ));
            checks.push(NumCheck::below(
                "sphere constraint".into(),
                sphere_defect(a, Denominator::Corrected, samples)?,
                1e-12,
            ));
            notes.push(format!(
                "with denominator (r+1)² the sphere constraint is off by up to {:e} and the chart identity by {:e}",
                to_f64(sphere_defect(a, Denominator::Uncorrected, samples)?),
                to_f64(stereo_identity_defect(a, Denominator::Uncorrected, samples, h)?)
            ));
        }
    }
    Ok(NumReport { kind, checks, notes })
}
