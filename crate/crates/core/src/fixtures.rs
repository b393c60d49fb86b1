//! The bundled diagram library and helpers to turn fixtures into objects.
//!
//! Fixture files are templates in `n` (see [`crate::template`]). They are
//! embedded at build time; a directory can be given to override them file by
//! file.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_bigint::BigInt;
use thiserror::Error;

use crate::gamma::{gamma_all, gamma_from_values, GammaError, GammaResult, SteinSurgeryDiagram};
use crate::homology::{boundary_h1, GeneratorMap, GroupElement, HomologyError};
use crate::kirby::{run_script, KirbyError, MoveScript, ScriptRun, TrackedLink};
use crate::legendrian;
use crate::template::{expand, TemplateError};
use crate::text::{parse_diagram, parse_map, Diagram, MapSpec, ParseError};

const EMBEDDED: &[(&str, &str)] = &[
    ("bn.rbu", include_str!("../fixtures/bn.rbu")),
    ("cn.rbu", include_str!("../fixtures/cn.rbu")),
    ("lens.rbu", include_str!("../fixtures/lens.rbu")),
    ("fig2.rbu", include_str!("../fixtures/fig2.rbu")),
    ("fig5.rbu", include_str!("../fixtures/fig5.rbu")),
    ("fig12.kirby", include_str!("../fixtures/fig12.kirby")),
    ("fig13.kirby", include_str!("../fixtures/fig13.kirby")),
    ("mu_nu.map", include_str!("../fixtures/mu_nu.map")),
    ("mu_lambda.map", include_str!("../fixtures/mu_lambda.map")),
];

#[derive(Debug, Error)]
pub enum FixtureError {
    #[error("no fixture named `{0}`")]
    Missing(String),
    #[error("reading {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{file}: {source}")]
    Template {
        file: String,
        #[source]
        source: TemplateError,
    },
    #[error("{file}: {source}")]
    Parse {
        file: String,
        #[source]
        source: ParseError,
    },
    #[error("{file}: {message}")]
    Invalid { file: String, message: String },
    #[error(transparent)]
    Gamma(#[from] GammaError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error(transparent)]
    Kirby(#[from] KirbyError),
}

/// The three boundaries with Γ tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Space {
    Bn,
    Cn,
    Lens,
}

impl Space {
    pub const ALL: [Space; 3] = [Space::Bn, Space::Cn, Space::Lens];

    pub fn name(self) -> &'static str {
        match self {
            Space::Bn => "bn",
            Space::Cn => "cn",
            Space::Lens => "lens",
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Space {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "bn" => Ok(Space::Bn),
            "cn" => Ok(Space::Cn),
            "lens" => Ok(Space::Lens),
            other => Err(format!("unknown space `{other}` (expected bn, cn or lens)")),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Fixtures {
    dir: Option<PathBuf>,
}

impl Fixtures {
    pub fn embedded() -> Self {
        Fixtures { dir: None }
    }

    /// Files present in `dir` take precedence over the embedded ones.
    pub fn with_dir(dir: impl Into<PathBuf>) -> Self {
        Fixtures { dir: Some(dir.into()) }
    }

    pub fn names() -> impl Iterator<Item = &'static str> {
        EMBEDDED.iter().map(|(n, _)| *n)
    }

    pub fn source(&self, file: &str) -> Result<String, FixtureError> {
        if let Some(dir) = &self.dir {
            let path = Path::new(dir).join(file);
            if path.exists() {
                return std::fs::read_to_string(&path).map_err(|source| FixtureError::Io { path, source });
            }
        }
        EMBEDDED
            .iter()
            .find(|(n, _)| *n == file)
            .map(|(_, s)| s.to_string())
            .ok_or_else(|| FixtureError::Missing(file.to_string()))
    }

    pub fn expanded(&self, file: &str, n: i64) -> Result<String, FixtureError> {
        expand(&self.source(file)?, &[("n", n)]).map_err(|source| FixtureError::Template {
            file: file.to_string(),
            source,
        })
    }

    pub fn diagram(&self, name: &str, n: i64) -> Result<Diagram, FixtureError> {
        let file = format!("{name}.rbu");
        parse_diagram(&self.expanded(&file, n)?).map_err(|source| FixtureError::Parse { file, source })
    }

    pub fn script(&self, name: &str, n: i64) -> Result<MoveScript, FixtureError> {
        let file = format!("{name}.kirby");
        MoveScript::parse(&self.expanded(&file, n)?).map_err(|source| FixtureError::Parse { file, source })
    }

    pub fn map(&self, name: &str, n: i64) -> Result<MapSpec, FixtureError> {
        let file = format!("{name}.map");
        parse_map(&self.expanded(&file, n)?).map_err(|source| FixtureError::Parse { file, source })
    }

    pub fn space(&self, space: Space, n: i64) -> Result<Diagram, FixtureError> {
        self.diagram(space.name(), n)
    }
}

fn invalid(file: &str, message: impl Into<String>) -> FixtureError {
    FixtureError::Invalid {
        file: file.to_string(),
        message: message.into(),
    }
}

/// The surgered diagram: 1-handles join `L0`; rotation numbers come from
/// `rot` statements or, failing that, from the attached fronts.
pub fn to_stein(d: &Diagram) -> Result<SteinSurgeryDiagram, FixtureError> {
    let n = d.link.len();
    let mut rot = Vec::with_capacity(n);
    let mut l0 = Vec::with_capacity(n);
    for i in 0..n {
        let in_l0 = d.l0[i] || d.handles[i];
        l0.push(in_l0);
        let r = match (&d.rot[i], &d.fronts[i]) {
            (Some(r), _) => r.clone(),
            (None, Some(front)) => BigInt::from(legendrian::rot(front)),
            (None, None) if in_l0 => BigInt::from(0),
            (None, None) => {
                return Err(invalid(
                    d.link.label(i),
                    "no rotation number: give `rot` or `front`",
                ))
            }
        };
        rot.push(r);
    }
    Ok(SteinSurgeryDiagram::new(d.link.clone(), rot, l0, d.fronts.clone())?)
}

/// Γ table of a fixture: computed from the Stein diagram when one is given
/// by fronts or rotation numbers, otherwise read from its `gamma` lines.
pub fn diagram_gamma(d: &Diagram) -> Result<GammaResult, FixtureError> {
    let names = (!d.spins.is_empty()).then_some(d.spins.as_slice());
    if !d.gammas.is_empty() {
        let prefer = d.prefer.ok_or_else(|| invalid("diagram", "`gamma` lines need `prefer`"))?;
        let coeffs: Vec<(String, BigInt)> = d.gammas.iter().map(|g| (g.name.clone(), g.coeff.clone())).collect();
        return Ok(gamma_from_values(&d.link, &d.spins, prefer, &coeffs)?);
    }
    Ok(gamma_all(&to_stein(d)?, names, d.prefer)?)
}

pub fn space_gamma(fx: &Fixtures, space: Space, n: i64) -> Result<GammaResult, FixtureError> {
    diagram_gamma(&fx.space(space, n)?)
}

/// Builds the generator map described by `spec` between two diagrams.
pub fn build_map(spec: &MapSpec, source: &Diagram, target: &Diagram) -> Result<GeneratorMap, FixtureError> {
    let (hs, ht) = (boundary_h1(&source.link), boundary_h1(&target.link));
    let mut images = vec![None; source.link.len()];
    for (src, terms) in &spec.images {
        let i = source
            .index_of(src)
            .ok_or_else(|| invalid("map", format!("unknown source generator `{src}`")))?;
        let mut e = ht.zero();
        for (c, g) in terms {
            let j = target
                .index_of(g)
                .ok_or_else(|| invalid("map", format!("unknown target generator `{g}`")))?;
            e.add_scaled(&ht.generator(j), c);
        }
        if images[i].replace(e).is_some() {
            return Err(invalid("map", format!("image of `{src}` given twice")));
        }
    }
    let images = images
        .into_iter()
        .enumerate()
        .map(|(i, e)| e.ok_or_else(|| invalid("map", format!("no image for `{}`", source.link.label(i)))))
        .collect::<Result<Vec<GroupElement>, _>>()?;
    Ok(GeneratorMap::new(hs, ht, images)?)
}

/// A named map with its two endpoint diagrams.
pub struct LoadedMap {
    pub spec: MapSpec,
    pub source: Diagram,
    pub target: Diagram,
    pub map: GeneratorMap,
}

pub fn load_map(fx: &Fixtures, name: &str, n: i64) -> Result<LoadedMap, FixtureError> {
    let spec = fx.map(name, n)?;
    let file = format!("{name}.map");
    let src = spec.source.clone().ok_or_else(|| invalid(&file, "missing `source`"))?;
    let tgt = spec.target.clone().ok_or_else(|| invalid(&file, "missing `target`"))?;
    let source = fx.diagram(&src, n)?;
    let target = fx.diagram(&tgt, n)?;
    let map = build_map(&spec, &source, &target)?;
    Ok(LoadedMap {
        spec,
        source,
        target,
        map,
    })
}

pub fn tracked(d: &Diagram) -> TrackedLink {
    TrackedLink::new(d.link.clone(), d.handles.clone(), d.symbol_names())
}

/// Runs a bundled script from the diagram it names.
pub fn run_fixture_script(fx: &Fixtures, name: &str, n: i64) -> Result<ScriptRun, FixtureError> {
    let script = fx.script(name, n)?;
    let start = script
        .start
        .clone()
        .ok_or_else(|| invalid(&format!("{name}.kirby"), "missing `start`"))?;
    let d = fx.diagram(&start, n)?;
    Ok(run_script(&tracked(&d), &script)?)
}
