//! Per-`n` consistency checks over the bundled fixtures.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;

use crate::fixtures::{diagram_gamma, load_map, run_fixture_script, to_stein, FixtureError, Fixtures, Space};
use crate::gamma::compare_gamma;
use crate::homology::{boundary_h1, verify_iso, GroupElement};
use crate::kirby::ScriptRun;
use crate::legendrian;
use crate::numerics::{run_check, CheckKind, NumParams};
use crate::link::{cf_value, chain_to_link, neg_cf_expand, ContinuedFraction, FramedLink, PlumbingChain};
use crate::spin::{characteristic_sublinks, name_spins};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub criterion: u8,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Report {
    pub checks: Vec<Check>,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn push(&mut self, criterion: u8, name: impl Into<String>, outcome: Result<String, String>) {
        let (passed, detail) = match outcome {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        self.checks.push(Check {
            criterion,
            name: name.into(),
            passed,
            detail,
        });
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
        self.warnings.extend(other.warnings);
    }
}

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fx_err(e: FixtureError) -> String {
    e.to_string()
}

/// `C_n` framings: `-(n+2)` followed by `n-2` entries `-2`.
pub fn cn_framings(n: i64) -> Vec<BigInt> {
    let mut f = vec![big(-(n + 2))];
    f.extend(std::iter::repeat(big(-2)).take((n - 2) as usize));
    f
}

/// Closed-form Γ coefficients on the preferred generator, by spin name.
pub fn expected_gamma(space: Space, n: i64) -> Vec<(&'static str, BigInt)> {
    let a = big((n * n - n) / 2);
    let b = big((2 * n * n - n) / 2);
    match (space, n.is_odd()) {
        (Space::Bn, true) => vec![("s", a)],
        (Space::Bn, false) => vec![("s1", b), ("s2", a)],
        (Space::Cn, true) => vec![("r", a)],
        (Space::Cn, false) => vec![("r1", a), ("r2", b)],
        (Space::Lens, true) => vec![("t", a)],
        (Space::Lens, false) => vec![("t1", a), ("t2", b)],
    }
}

fn check_cf(n: i64) -> Result<String, String> {
    let n2 = big(n * n);
    let first = neg_cf_expand(&n2, &big(n - 1)).map_err(|e| e.to_string())?;
    let want = ContinuedFraction::new(cn_framings(n));
    ensure(first == want, || format!("expansion of n²/(n-1) is {first}, expected {want}"))?;
    let v = cf_value(&first).map_err(|e| e.to_string())?;
    ensure(v == BigRational::new(-n2.clone(), big(n - 1)), || format!("value {v}"))?;

    let second = neg_cf_expand(&n2, &big(n * n - n + 1)).map_err(|e| e.to_string())?;
    let mut w = vec![big(-2); n as usize];
    w.push(big(-n));
    let want = ContinuedFraction::new(w);
    ensure(second == want, || format!("expansion of n²/(n²-n+1) is {second}, expected {want}"))?;
    let v = cf_value(&second).map_err(|e| e.to_string())?;
    ensure(v == BigRational::new(-n2, big(n * n - n + 1)), || format!("value {v}"))?;
    Ok(format!("{first}, {second}"))
}

fn check_h1(link: &FramedLink, n: i64) -> Result<String, String> {
    let h = boundary_h1(link);
    ensure(h.is_cyclic() && h.order() == Some(big(n * n)), || format!("H1 = {h}, expected Z/{}", n * n))?;
    Ok(h.to_string())
}

fn check_spins(fx: &Fixtures, space: Space, n: i64) -> Result<String, String> {
    let d = fx.space(space, n).map_err(fx_err)?;
    let all = characteristic_sublinks(&d.link).map_err(|e| e.to_string())?;
    let want = if n.is_odd() { 1 } else { 2 };
    ensure(all.len() == want, || format!("{} characteristic sublinks, expected {want}", all.len()))?;
    for s in &all {
        ensure(s.is_characteristic(&d.link), || format!("{} fails the congruence", s.display(&d.link)))?;
    }
    let named = name_spins(&d.link, &d.spins).map_err(|e| e.to_string())?;
    Ok(named
        .iter()
        .map(|ns| format!("{} = {}", ns.name, ns.spin.display(&d.link)))
        .collect::<Vec<_>>()
        .join(", "))
}

fn check_gamma(fx: &Fixtures, space: Space, n: i64) -> Result<String, String> {
    let r = diagram_gamma(&fx.space(space, n).map_err(fx_err)?).map_err(fx_err)?;
    let want = expected_gamma(space, n);
    ensure(r.values.len() == want.len(), || format!("{} values, expected {}", r.values.len(), want.len()))?;
    let order = big(n * n);
    let mut parts = Vec::new();
    for (name, coeff) in want {
        let v = r.get(name).ok_or_else(|| format!("no spin structure `{name}`"))?;
        let got = v.coeff.clone().ok_or("group is not cyclic on the preferred generator")?;
        ensure(got == coeff.mod_floor(&order), || format!("Γ({name}) = {got}, expected {coeff}"))?;
        parts.push(format!("{name}: {got}"));
    }
    Ok(parts.join(", "))
}

fn check_identification(fx: &Fixtures, name: &str, n: i64, report: &mut Report) -> Result<String, String> {
    let m = load_map(fx, name, n).map_err(fx_err)?;
    let verdict = verify_iso(&m.map);
    ensure(verdict.is_iso(), || format!("not an isomorphism: {verdict:?}"))?;
    let ga = diagram_gamma(&m.source).map_err(fx_err)?;
    let gb = diagram_gamma(&m.target).map_err(fx_err)?;
    let cmp = compare_gamma(&ga, &gb, &m.map, Some(&m.spec.pairs)).map_err(|e| e.to_string())?;
    ensure(cmp.ok(), || format!("spin matching failed: {:?} (expected {:?})", cmp.matching, m.spec.pairs))?;
    for d in [&m.source, &m.target] {
        lens_warnings(d, n, report);
    }
    let pairs = cmp.matching.pairs().unwrap_or_default();
    Ok(pairs.iter().map(|(a, b)| format!("{a}↔{b}")).collect::<Vec<_>>().join(", "))
}

/// Warns where an `alt` Γ value disagrees with the value in use.
pub fn lens_warnings(d: &crate::text::Diagram, n: i64, report: &mut Report) {
    let order = big(n * n);
    for g in &d.gammas {
        if let Some(p) = &g.alt {
            if p.mod_floor(&order) != g.coeff.mod_floor(&order) {
                let msg = format!(
                    "n = {n}: Γ({}) = {}·generator (mod {order}) is used; the alternative value {p} differs",
                    g.name,
                    g.coeff.mod_floor(&order),
                );
                if !report.warnings.contains(&msg) {
                    report.warnings.push(msg);
                }
            }
        }
    }
}

fn class_equal(run: &ScriptRun, current: usize, expected: &GroupElement) -> bool {
    let h = run.result.current_h1();
    h.equal(&h.generator(current), expected).unwrap_or(false)
}

fn combo(run: &ScriptRun, a: i64, b: i64) -> GroupElement {
    let mu1 = run.result.class("μ1").expect("μ1 is tracked");
    let mu2 = run.result.class("μ2").expect("μ2 is tracked");
    let mut e = mu1.scaled(&big(a));
    e.add_scaled(mu2, &big(b));
    e
}

fn check_fig13(fx: &Fixtures, n: i64) -> Result<String, String> {
    let run = run_fixture_script(fx, "fig13", n).map_err(fx_err)?;
    let link = run.result.link();
    let mut order = vec!["K2".to_string()];
    order.extend((1..=n - 2).map(|k| format!("C{k}")));
    let refs: Vec<&str> = order.iter().map(String::as_str).collect();
    let got = link.reordered(&refs).map_err(|e| e.to_string())?;
    let want = chain_to_link(&PlumbingChain::new(cn_framings(n)).expect("nonempty"));
    ensure(got.matrix() == want.matrix(), || format!("final diagram {got}, expected {}", want.matrix()))?;
    for (k, label) in order.iter().enumerate() {
        let idx = link.index_of(label).map_err(|e| e.to_string())?;
        let k = k as i64 + 1;
        ensure(class_equal(&run, idx, &combo(&run, k, 1)), || format!("λ{k} ≠ {k}μ1 + μ2"))?;
    }
    Ok(format!("{} steps, chain {:?}", run.steps.len(), got.framings()))
}

fn check_fig12(fx: &Fixtures, n: i64) -> Result<String, String> {
    let run = run_fixture_script(fx, "fig12", n).map_err(fx_err)?;
    let link = run.result.link();
    let mut order = vec!["K1".to_string()];
    order.extend((1..=n).rev().map(|k| format!("C{k}")));
    let refs: Vec<&str> = order.iter().map(String::as_str).collect();
    let got = link.reordered(&refs).map_err(|e| e.to_string())?;
    let mut f = vec![big(-n)];
    f.extend(std::iter::repeat(big(-2)).take(n as usize));
    let want = chain_to_link(&PlumbingChain::new(f).expect("nonempty")).mirrored();
    ensure(got.matrix() == want.matrix(), || format!("final diagram {got}, expected {}", want.matrix()))?;
    let k1 = link.index_of("K1").map_err(|e| e.to_string())?;
    ensure(class_equal(&run, k1, &combo(&run, 1, 0)), || "meridian of K1 ≠ μ1".into())?;
    for k in 1..=n {
        let idx = link.index_of(&format!("C{k}")).map_err(|e| e.to_string())?;
        ensure(class_equal(&run, idx, &combo(&run, k, k)), || format!("ν{k} ≠ {k}(μ1 + μ2)"))?;
    }
    Ok(format!("{} steps, chain {:?}", run.steps.len(), got.framings()))
}

fn check_handle_pair(fx: &Fixtures, n: i64) -> Result<String, String> {
    let a = boundary_h1(&fx.diagram("fig2", n).map_err(fx_err)?.link);
    let b = boundary_h1(&fx.diagram("fig5", n).map_err(fx_err)?.link);
    let want = vec![big(n * n)];
    ensure(a.invariant_factors() == want.as_slice(), || format!("fig2 side: {a}"))?;
    ensure(b.invariant_factors() == want.as_slice(), || format!("fig5 side: {b}"))?;
    Ok(format!("{a} ≅ {b}"))
}

fn check_legendrian(fx: &Fixtures, n: i64) -> Result<String, String> {
    let expect = |space: Space, label: &str, tb: i64, rot: i64| -> Result<(), String> {
        let d = fx.space(space, n).map_err(fx_err)?;
        let i = d.index_of(label).ok_or_else(|| format!("no component {label}"))?;
        let f = d.fronts[i].ok_or_else(|| format!("{label} has no front"))?;
        ensure(legendrian::tb(&f) == tb, || format!("tb({label}) = {}, expected {tb}", legendrian::tb(&f)))?;
        ensure(legendrian::rot(&f) == rot, || format!("rot({label}) = {}, expected {rot}", legendrian::rot(&f)))?;
        ensure(legendrian::rot_alt(&f) == rot, || format!("cusp counts for {label} disagree"))?;
        ensure(legendrian::parity_ok(&f), || format!("parity fails for {label}"))?;
        ensure(*d.link.framing(i) == big(legendrian::stein_framing(&f)), || format!("framing of {label}"))?;
        Ok(())
    };
    expect(Space::Bn, "K2", -n, 1)?;
    expect(Space::Cn, "W1", -n - 1, -n)?;
    for i in 2..n {
        expect(Space::Cn, &format!("W{i}"), -1, 0)?;
    }
    for space in [Space::Bn, Space::Cn] {
        to_stein(&fx.space(space, n).map_err(fx_err)?).map_err(fx_err)?;
    }
    Ok(format!("tb(K2) = {}, rot(W1) = {}", -n, -n))
}

/// Every exact check for one `n`.
pub fn verify_n(fx: &Fixtures, n: i64) -> Report {
    assert!(n >= 2, "n must be at least 2");
    let mut r = Report::default();
    r.push(1, format!("continued fractions n={n}"), check_cf(n));
    for space in Space::ALL {
        let h = fx.space(space, n).map_err(fx_err).and_then(|d| check_h1(&d.link, n));
        r.push(2, format!("H1 {space} n={n}"), h);
    }
    for space in Space::ALL {
        r.push(3, format!("spin {space} n={n}"), check_spins(fx, space, n));
    }
    for space in Space::ALL {
        r.push(4, format!("gamma {space} n={n}"), check_gamma(fx, space, n));
    }
    for name in ["mu_nu", "mu_lambda"] {
        let out = check_identification(fx, name, n, &mut r);
        r.push(5, format!("{name} n={n}"), out);
    }
    r.push(6, format!("fig13 n={n}"), check_fig13(fx, n));
    r.push(6, format!("fig12 n={n}"), check_fig12(fx, n));
    r.push(7, format!("fig2 fig5 n={n}"), check_handle_pair(fx, n));
    r.push(8, format!("legendrian n={n}"), check_legendrian(fx, n));
    r
}

fn push_numeric(r: &mut Report, kind: CheckKind, params: &NumParams) {
    let label = format!("{kind} n={}", params.n);
    match run_check(kind, params) {
        Ok(rep) => {
            for c in rep.checks {
                let detail = format!("{:e} ({})", c.value, c.bound);
                r.push(9, format!("{label}: {}", c.name), if c.passed { Ok(detail) } else { Err(detail) });
            }
            for note in rep.notes {
                if !r.warnings.contains(&note) {
                    r.warnings.push(note);
                }
            }
        }
        Err(e) => r.push(9, label, Err(e.to_string())),
    }
}

/// Numeric checks: the `n`-dependent batteries for each `n`, the rest once.
pub fn verify_numerics(ns: &[i64], params: &NumParams) -> Report {
    let mut r = Report::default();
    for &n in ns {
        let p = NumParams { n, q: 1, ..params.clone() };
        for kind in [CheckKind::Lagrangian, CheckKind::Cover, CheckKind::Legendrian] {
            push_numeric(&mut r, kind, &p);
        }
    }
    for kind in [CheckKind::Flow, CheckKind::Stereo] {
        push_numeric(&mut r, kind, params);
    }
    r
}
