//! Command-line front end for `rbu-core`.
//!
//! Every command produces an [`Output`]: a text rendering, a JSON record and
//! an exit status. `main` only parses arguments and prints.

use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::{json, Value};

use rbu_core::fixtures::{diagram_gamma, run_fixture_script, Fixtures, Space};
use rbu_core::homology::boundary_h1;
use rbu_core::numerics::{run_check, CheckKind, NumParams, Psi};
use rbu_core::spin::name_spins;
use rbu_core::text::{parse_diagram, Diagram};
use rbu_core::verify::{lens_warnings, verify_n, verify_numerics, Report};
use rbu_core::{cf_value, neg_cf_expand};

pub const SCHEMA: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "rbu", version, about = "Surgery-diagram invariants and coordinate checks for the rational blow-up")]
pub struct Cli {
    /// Emit one JSON record instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Directory whose fixture files override the bundled ones.
    #[arg(long, global = true, value_name = "DIR")]
    pub fixtures: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Γ of every spin structure, on the preferred generator.
    Gamma(DiagramArgs),
    /// First homology of the boundary.
    H1(DiagramArgs),
    /// Characteristic sublinks with their names.
    Spin(DiagramArgs),
    /// Negative continued fraction of -p/q.
    Cf {
        #[arg(long, allow_hyphen_values = true)]
        p: BigInt,
        #[arg(long, allow_hyphen_values = true)]
        q: BigInt,
    },
    /// Replays a move script, printing the group after every move.
    Kirby {
        /// Bundled script name (fig12, fig13) or a path to a `.kirby` file.
        #[arg(long)]
        script: String,
        #[arg(long)]
        n: i64,
    },
    /// One battery of numeric coordinate checks.
    Symcheck(SymArgs),
    /// Runs every exact check (and optionally the numeric ones) per n.
    Verify {
        /// Inclusive range `A..B` with A ≥ 2.
        #[arg(long, value_parser = parse_range)]
        n_range: RangeInclusive<i64>,
        /// Also run the numeric batteries at each n.
        #[arg(long)]
        numerics: bool,
        /// Grid used by `--numerics`.
        #[arg(long, num_args = 2, value_names = ["T", "I"], default_values_t = [64, 32])]
        grid: Vec<usize>,
    },
}

#[derive(Debug, Args)]
pub struct DiagramArgs {
    #[arg(long, required_unless_present = "file", conflicts_with = "file")]
    pub space: Option<Space>,
    /// Template parameter; required with `--space`.
    #[arg(long, default_value_t = 0)]
    pub n: i64,
    /// A diagram in the text format instead of a bundled space.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SymArgs {
    #[arg(long)]
    pub check: CheckKind,
    #[arg(long, default_value_t = 3)]
    pub n: i64,
    #[arg(long, default_value_t = 1)]
    pub q: i64,
    /// One of linear, isin, sin03, i2cos; default runs the standard three.
    #[arg(long)]
    pub psi: Option<Psi>,
    #[arg(long, num_args = 2, value_names = ["T", "I"], default_values_t = [64, 32])]
    pub grid: Vec<usize>,
    #[arg(long, default_value_t = 1e-5)]
    pub h: f64,
    /// Radius parameter for the legendrian and stereo checks.
    #[arg(long)]
    pub a: Option<f64>,
}

pub fn parse_range(s: &str) -> Result<RangeInclusive<i64>, String> {
    let (a, b) = s.split_once("..").ok_or("expected A..B")?;
    let a: i64 = a.trim().parse().map_err(|e| format!("bad start: {e}"))?;
    let b: i64 = b.trim().parse().map_err(|e| format!("bad end: {e}"))?;
    if a < 2 {
        return Err(format!("range must start at 2 or more, got {a}"));
    }
    if b < a {
        return Err(format!("empty range {a}..{b}"));
    }
    Ok(a..=b)
}

/// What a command prints and how it exits.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub text: String,
    pub json: Value,
    /// Sent to stderr in text mode; part of the record in JSON mode.
    pub warnings: Vec<String>,
    pub code: i32,
}

impl Output {
    fn ok(text: String, json: Value) -> Self {
        Output {
            text,
            json,
            warnings: Vec::new(),
            code: EXIT_OK,
        }
    }

    pub fn json_record(&self, command: &str) -> Value {
        let mut v = self.json.clone();
        if let Value::Object(m) = &mut v {
            m.insert("schema".into(), json!(SCHEMA));
            m.insert("command".into(), json!(command));
            m.insert("ok".into(), json!(self.code == EXIT_OK));
            m.insert("warnings".into(), json!(self.warnings));
        }
        v
    }
}

/// A failure that is not a check result: bad input or a computation error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub message: String,
    pub code: i32,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            message: message.into(),
            code: EXIT_USAGE,
        }
    }

    fn failed(message: impl ToString) -> Self {
        CliError {
            message: message.to_string(),
            code: EXIT_FAIL,
        }
    }
}

pub fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Gamma(_) => "gamma",
        Command::H1(_) => "h1",
        Command::Spin(_) => "spin",
        Command::Cf { .. } => "cf",
        Command::Kirby { .. } => "kirby",
        Command::Symcheck(_) => "symcheck",
        Command::Verify { .. } => "verify",
    }
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let fx = match &cli.fixtures {
        Some(dir) if !dir.is_dir() => return Err(CliError::usage(format!("{} is not a directory", dir.display()))),
        Some(dir) => Fixtures::with_dir(dir),
        None => Fixtures::embedded(),
    };
    match &cli.command {
        Command::Gamma(a) => cmd_gamma(&fx, a),
        Command::H1(a) => cmd_h1(&fx, a),
        Command::Spin(a) => cmd_spin(&fx, a),
        Command::Cf { p, q } => cmd_cf(p, q),
        Command::Kirby { script, n } => cmd_kirby(&fx, script, *n),
        Command::Symcheck(a) => cmd_symcheck(a),
        Command::Verify { n_range, numerics, grid } => {
            let grid = (grid[0], grid[1]);
            cmd_verify(&fx, n_range.clone(), numerics.then_some(grid))
        }
    }
}

fn load(fx: &Fixtures, a: &DiagramArgs) -> Result<(Diagram, Value), CliError> {
    match (&a.space, &a.file) {
        (Some(space), _) => {
            if a.n < 2 {
                return Err(CliError::usage("--space needs --n ≥ 2"));
            }
            let d = fx.space(*space, a.n).map_err(CliError::failed)?;
            Ok((d, json!({ "space": space.name(), "n": a.n })))
        }
        (None, Some(path)) => {
            let src = std::fs::read_to_string(path)
                .map_err(|e| CliError::usage(format!("reading {}: {e}", path.display())))?;
            let d = parse_diagram(&src).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
            Ok((d, json!({ "file": path.display().to_string() })))
        }
        (None, None) => Err(CliError::usage("give --space or --file")),
    }
}

fn merge(mut base: Value, extra: Value) -> Value {
    if let (Value::Object(b), Value::Object(e)) = (&mut base, extra) {
        b.extend(e);
    }
    base
}

pub fn cmd_gamma(fx: &Fixtures, a: &DiagramArgs) -> Result<Output, CliError> {
    let (d, head) = load(fx, a)?;
    let r = diagram_gamma(&d).map_err(CliError::failed)?;
    let generator = d.prefer.map(|p| d.symbol(p).to_string());
    let mut parts = vec![r.h1.to_string()];
    let mut values = Vec::new();
    for v in &r.values {
        let shown = match (&v.coeff, &generator) {
            (Some(c), Some(g)) => format!("{c}·{g}"),
            _ => format!("{:?}", v.canonical.coords().iter().map(ToString::to_string).collect::<Vec<_>>()),
        };
        parts.push(format!("spin {{{}}}: {shown}", v.sublink.join(", ")));
        values.push(json!({
            "name": v.name,
            "spin": v.sublink,
            "coeff": v.coeff.as_ref().map(ToString::to_string),
            "canonical": v.canonical.coords().iter().map(ToString::to_string).collect::<Vec<_>>(),
            "generator": generator,
        }));
    }
    let mut report = Report::default();
    if let Some(n) = a.space.map(|_| a.n) {
        lens_warnings(&d, n, &mut report);
    }
    let order = r.h1.order().map(|o| o.to_string());
    let mut out = Output::ok(parts.join("; "), merge(head, json!({ "order": order, "values": values })));
    out.warnings = report.warnings;
    Ok(out)
}

pub fn cmd_h1(fx: &Fixtures, a: &DiagramArgs) -> Result<Output, CliError> {
    let (d, head) = load(fx, a)?;
    let h = boundary_h1(&d.link);
    let factors: Vec<String> = h.invariant_factors().iter().map(ToString::to_string).collect();
    let json = merge(
        head,
        json!({
            "group": h.to_string(),
            "factors": factors,
            "order": h.order().map(|o| o.to_string()),
            "cyclic": h.is_cyclic(),
        }),
    );
    Ok(Output::ok(h.to_string(), json))
}

pub fn cmd_spin(fx: &Fixtures, a: &DiagramArgs) -> Result<Output, CliError> {
    let (d, head) = load(fx, a)?;
    let named = if d.spins.is_empty() {
        rbu_core::spin::auto_named(&d.link, "s")
    } else {
        name_spins(&d.link, &d.spins)
    }
    .map_err(CliError::failed)?;
    let lines: Vec<String> = named
        .iter()
        .map(|ns| format!("{} = {}", ns.name, ns.spin.display(&d.link)))
        .collect();
    let spins: Vec<Value> = named
        .iter()
        .map(|ns| json!({ "name": ns.name, "sublink": ns.spin.labels(&d.link) }))
        .collect();
    let json = merge(head, json!({ "count": named.len(), "spins": spins }));
    Ok(Output::ok(lines.join("\n"), json))
}

pub fn cmd_cf(p: &BigInt, q: &BigInt) -> Result<Output, CliError> {
    let cf = neg_cf_expand(p, q).map_err(|e| CliError::usage(e.to_string()))?;
    let v = cf_value(&cf).map_err(CliError::failed)?;
    let coeffs: Vec<String> = cf.coefficients().iter().map(ToString::to_string).collect();
    let json = json!({ "p": p.to_string(), "q": q.to_string(), "coefficients": coeffs, "value": v.to_string() });
    Ok(Output::ok(format!("{cf} = {v}"), json))
}

pub fn cmd_kirby(fx: &Fixtures, script: &str, n: i64) -> Result<Output, CliError> {
    if n < 2 {
        return Err(CliError::usage("--n must be at least 2"));
    }
    let (fx, name) = match std::path::Path::new(script) {
        p if p.extension().is_some_and(|e| e == "kirby") => {
            let dir = p.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(std::path::Path::new("."));
            let stem = p.file_stem().and_then(|s| s.to_str()).ok_or_else(|| CliError::usage("bad script path"))?;
            if !p.exists() {
                return Err(CliError::usage(format!("{} does not exist", p.display())));
            }
            (Fixtures::with_dir(dir), stem.to_string())
        }
        _ => (fx.clone(), script.to_string()),
    };
    let run = run_fixture_script(&fx, &name, n).map_err(CliError::failed)?;
    let mut lines = Vec::new();
    let mut steps = Vec::new();
    for (k, st) in run.steps.iter().enumerate() {
        let framings: Vec<String> = st.framings.iter().map(ToString::to_string).collect();
        lines.push(format!("{:>3}. {:<28} {}  [{}]", k + 1, st.mv, st.group, framings.join(", ")));
        steps.push(json!({ "move": st.mv, "group": st.group, "framings": framings }));
    }
    let link = run.result.link();
    lines.push(format!("final: {link}"));
    let classes: Vec<Value> = run
        .result
        .symbols()
        .iter()
        .zip(run.result.classes())
        .map(|(s, e)| json!({ "symbol": s, "class": e.coeffs().iter().map(ToString::to_string).collect::<Vec<_>>() }))
        .collect();
    let json = json!({
        "script": name,
        "n": n,
        "steps": steps,
        "labels": link.labels(),
        "framings": link.framings().iter().map(ToString::to_string).collect::<Vec<_>>(),
        "classes": classes,
    });
    Ok(Output::ok(lines.join("\n"), json))
}

pub fn cmd_symcheck(a: &SymArgs) -> Result<Output, CliError> {
    let params = NumParams {
        n: a.n,
        q: a.q,
        psi: a.psi,
        grid: (a.grid[0], a.grid[1]),
        h: a.h,
        a: a.a,
    };
    let rep = run_check(a.check, &params).map_err(|e| CliError::usage(e.to_string()))?;
    let lines: Vec<String> = rep.checks.iter().map(ToString::to_string).collect();
    let checks: Vec<Value> = rep
        .checks
        .iter()
        .map(|c| json!({ "name": c.name, "value": c.value, "bound": c.bound.to_string(), "passed": c.passed }))
        .collect();
    let json = json!({
        "check": a.check.name(),
        "n": a.n,
        "q": a.q,
        "psi": a.psi.map(|p| p.name()),
        "grid": a.grid,
        "h": a.h,
        "checks": checks,
    });
    Ok(Output {
        text: lines.join("\n"),
        json,
        warnings: rep.notes.clone(),
        code: if rep.passed() { EXIT_OK } else { EXIT_FAIL },
    })
}

pub fn cmd_verify(fx: &Fixtures, range: RangeInclusive<i64>, numerics: Option<(usize, usize)>) -> Result<Output, CliError> {
    if range.is_empty() || *range.start() < 2 {
        return Err(CliError::usage(format!("bad range {}..{}", range.start(), range.end())));
    }
    let mut report = Report::default();
    for n in range.clone() {
        report.extend(verify_n(fx, n));
    }
    if let Some(grid) = numerics {
        let ns: Vec<i64> = range.clone().collect();
        report.extend(verify_numerics(&ns, &NumParams { grid, ..NumParams::default() }));
    }
    let mut lines = Vec::new();
    for c in &report.checks {
        let mark = if c.passed { "ok  " } else { "FAIL" };
        lines.push(format!("{mark} [{}] {}: {}", c.criterion, c.name, c.detail));
    }
    lines.push(String::new());
    lines.push("criterion  passed  total".into());
    let mut summary = Vec::new();
    for k in 1..=9u8 {
        let of: Vec<_> = report.checks.iter().filter(|c| c.criterion == k).collect();
        if of.is_empty() {
            continue;
        }
        let passed = of.iter().filter(|c| c.passed).count();
        lines.push(format!("{k:>9}  {passed:>6}  {:>5}", of.len()));
        summary.push(json!({ "criterion": k, "passed": passed, "total": of.len() }));
    }
    let failed = report.checks.iter().filter(|c| !c.passed).count();
    lines.push(if failed == 0 {
        format!("all {} checks passed", report.checks.len())
    } else {
        format!("{failed} of {} checks failed", report.checks.len())
    });
    let checks: Vec<Value> = report
        .checks
        .iter()
        .map(|c| json!({ "criterion": c.criterion, "name": c.name, "passed": c.passed, "detail": c.detail }))
        .collect();
    let json = json!({
        "range": [range.start(), range.end()],
        "numerics": numerics.is_some(),
        "checks": checks,
        "summary": summary,
    });
    Ok(Output {
        text: lines.join("\n"),
        json,
        warnings: report.warnings,
        code: if failed == 0 { EXIT_OK } else { EXIT_FAIL },
    })
}
