//! Kirby moves on linking data, carrying homology classes along.
//!
//! A [`TrackedLink`] remembers, for every meridian of the diagram it started
//! from, the class it represents written over the current meridians. After
//! each move the induced map from the starting group to the current one is
//! checked to be an isomorphism.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::homology::{boundary_h1, verify_iso, GeneratorMap, GroupElement, H1Presentation, Verdict};
use crate::link::FramedLink;
use crate::matrix::IntMatrix;
use crate::text::{statements, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("unknown component `{0}`")]
    UnknownLabel(String),
    #[error("component `{0}` already exists")]
    DuplicateLabel(String),
    #[error("cannot blow down `{label}` with framing {framing}; need ±1")]
    FramingNotUnit { label: String, framing: BigInt },
    #[error("cannot slide `{0}` over itself")]
    SelfSlide(String),
    #[error("`{0}` is not a 1-handle")]
    NotHandle(String),
    #[error("sign must be +1 or -1")]
    BadSign,
    #[error("tracked classes no longer give an isomorphism: {0:?}")]
    ClassCheck(Verdict),
    #[error("group order changed from {before} to {after}")]
    OrderChanged { before: String, after: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KirbyError {
    #[error("step {step} (`{mv}`): {source}")]
    Step {
        step: usize,
        mv: String,
        #[source]
        source: MoveError,
    },
    #[error(transparent)]
    Parse(#[from] ParseError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Move {
    /// New `sign`-framed unknot `label` linking each target `m` times.
    BlowUp { label: String, sign: i8, targets: Vec<(String, BigInt)> },
    BlowDown { label: String },
    /// Slide `moving` over `over`; `sign` picks the band orientation.
    Slide { moving: String, over: String, sign: i8 },
    Surger { label: String },
}

fn sign_str(s: i8) -> &'static str {
    if s > 0 {
        "+"
    } else {
        "-"
    }
}

impl std::fmt::Display for Move {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Move::BlowUp { label, sign, targets } => {
                write!(f, "blowup {label} {}", sign_str(*sign))?;
                for (t, m) in targets {
                    write!(f, " {t}:{m}")?;
                }
                Ok(())
            }
            Move::BlowDown { label } => write!(f, "blowdown {label}"),
            Move::Slide { moving, over, sign } => write!(f, "slide {moving} {over} {}", sign_str(*sign)),
            Move::Surger { label } => write!(f, "surger {label}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MoveScript {
    /// Name of the starting diagram, if the script declares one.
    pub start: Option<String>,
    pub moves: Vec<Move>,
}

fn parse_sign(st: &crate::text::Statement, i: usize) -> Result<i8, ParseError> {
    match st.arg(i) {
        "+" | "+1" => Ok(1),
        "-" | "-1" => Ok(-1),
        other => Err(st.error(i, format!("expected `+` or `-`, found `{other}`"))),
    }
}

impl MoveScript {
    pub fn new(moves: Vec<Move>) -> Self {
        MoveScript { start: None, moves }
    }

    /// `start NAME`, `blowup NEW ± T:m ...`, `blowdown L`, `slide I J ±`, `surger L`.
    pub fn parse(src: &str) -> Result<Self, ParseError> {
        let mut script = MoveScript::default();
        for st in statements(src) {
            let mv = match st.keyword() {
                "start" => {
                    st.arity(1, 1)?;
                    script.start = Some(st.arg(1).to_string());
                    continue;
                }
                "blowup" => {
                    st.arity(2, usize::MAX)?;
                    let sign = parse_sign(&st, 2)?;
                    let mut targets = Vec::new();
                    for t in 3..st.tokens.len() {
                        let (label, m) = st
                            .arg(t)
                            .split_once(':')
                            .ok_or_else(|| st.error(t, "expected `LABEL:MULTIPLICITY`"))?;
                        let m = m.parse().map_err(|_| st.error(t, format!("bad multiplicity `{m}`")))?;
                        targets.push((label.to_string(), m));
                    }
                    Move::BlowUp {
                        label: st.arg(1).to_string(),
                        sign,
                        targets,
                    }
                }
                "blowdown" => {
                    st.arity(1, 1)?;
                    Move::BlowDown {
                        label: st.arg(1).to_string(),
                    }
                }
                "slide" => {
                    st.arity(3, 3)?;
                    Move::Slide {
                        moving: st.arg(1).to_string(),
                        over: st.arg(2).to_string(),
                        sign: parse_sign(&st, 3)?,
                    }
                }
                "surger" => {
                    st.arity(1, 1)?;
                    Move::Surger {
                        label: st.arg(1).to_string(),
                    }
                }
                other => return Err(st.error(0, format!("unknown move `{other}`"))),
            };
            script.moves.push(mv);
        }
        Ok(script)
    }
}

/// A link together with the images of the starting meridians.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrackedLink {
    link: FramedLink,
    handles: Vec<bool>,
    l0: Vec<bool>,
    symbols: Vec<String>,
    classes: Vec<GroupElement>,
    origin: H1Presentation,
}

impl TrackedLink {
    /// Starts tracking; `symbols[i]` names the meridian of component `i`.
    pub fn new(link: FramedLink, handles: Vec<bool>, symbols: Vec<String>) -> Self {
        assert_eq!(handles.len(), link.len());
        assert_eq!(symbols.len(), link.len());
        let n = link.len();
        let origin = boundary_h1(&link);
        TrackedLink {
            classes: (0..n).map(|i| GroupElement::basis(n, i)).collect(),
            l0: vec![false; n],
            link,
            handles,
            symbols,
            origin,
        }
    }

    pub fn link(&self) -> &FramedLink {
        &self.link
    }

    pub fn handles(&self) -> &[bool] {
        &self.handles
    }

    pub fn l0(&self) -> &[bool] {
        &self.l0
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    /// Class of the starting meridian `symbol`, over the current meridians.
    pub fn class(&self, symbol: &str) -> Option<&GroupElement> {
        self.symbols.iter().position(|s| s == symbol).map(|i| &self.classes[i])
    }

    pub fn classes(&self) -> &[GroupElement] {
        &self.classes
    }

    pub fn origin(&self) -> &H1Presentation {
        &self.origin
    }

    pub fn current_h1(&self) -> H1Presentation {
        boundary_h1(&self.link)
    }

    /// The map from the starting group to the current one.
    pub fn class_map(&self) -> GeneratorMap {
        GeneratorMap::new(self.origin.clone(), self.current_h1(), self.classes.clone())
            .expect("classes are kept at the current size")
    }

    fn idx(&self, label: &str) -> Result<usize, MoveError> {
        self.link.index_of(label).map_err(|_| MoveError::UnknownLabel(label.to_string()))
    }

    pub fn apply(&self, mv: &Move) -> Result<TrackedLink, MoveError> {
        match mv {
            Move::BlowUp { label, sign, targets } => {
                let targets = targets
                    .iter()
                    .map(|(t, m)| Ok((self.idx(t)?, m.clone())))
                    .collect::<Result<Vec<_>, MoveError>>()?;
                self.blow_up(label, *sign, &targets)
            }
            Move::BlowDown { label } => self.blow_down(self.idx(label)?),
            Move::Slide { moving, over, sign } => self.slide(self.idx(moving)?, self.idx(over)?, *sign),
            Move::Surger { label } => self.surger_1handle(self.idx(label)?),
        }
    }

    pub fn blow_up(&self, label: &str, sign: i8, targets: &[(usize, BigInt)]) -> Result<TrackedLink, MoveError> {
        if sign.abs() != 1 {
            return Err(MoveError::BadSign);
        }
        if self.link.index_of(label).is_ok() {
            return Err(MoveError::DuplicateLabel(label.to_string()));
        }
        let n = self.link.len();
        let eps = BigInt::from(sign);
        let mut mult = vec![BigInt::zero(); n];
        for (i, m) in targets {
            mult[*i] += m;
        }
        let mut m = IntMatrix::zeros(n + 1, n + 1);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = self.link.lk(i, j) + &eps * &mult[i] * &mult[j];
            }
            m[(i, n)] = mult[i].clone();
            m[(n, i)] = mult[i].clone();
        }
        m[(n, n)] = eps;
        let mut labels = self.link.labels().to_vec();
        labels.push(label.to_string());
        let mut out = self.clone();
        out.link = FramedLink::new(labels, m).expect("blow-up keeps symmetry");
        out.handles.push(false);
        out.l0.push(false);
        out.classes = self.classes.iter().map(|c| c.padded(1)).collect();
        Ok(out)
    }

    pub fn blow_down(&self, c: usize) -> Result<TrackedLink, MoveError> {
        let eps = self.link.framing(c).clone();
        if eps.abs() != BigInt::one() {
            return Err(MoveError::FramingNotUnit {
                label: self.link.label(c).to_string(),
                framing: eps,
            });
        }
        let keep: Vec<usize> = (0..self.link.len()).filter(|&i| i != c).collect();
        let k = keep.len();
        let mut m = IntMatrix::zeros(k, k);
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                m[(a, b)] = self.link.lk(i, j) - &eps * self.link.lk(i, c) * self.link.lk(j, c);
            }
        }
        let labels = keep.iter().map(|&i| self.link.label(i).to_string()).collect();
        let classes = self
            .classes
            .iter()
            .map(|t| {
                let tc = &t.coeffs()[c];
                let coeffs = keep
                    .iter()
                    .map(|&i| &t.coeffs()[i] - &eps * tc * self.link.lk(i, c))
                    .collect();
                GroupElement::new(coeffs)
            })
            .collect();
        Ok(TrackedLink {
            link: FramedLink::new(labels, m).expect("blow-down keeps symmetry"),
            handles: keep.iter().map(|&i| self.handles[i]).collect(),
            l0: keep.iter().map(|&i| self.l0[i]).collect(),
            symbols: self.symbols.clone(),
            classes,
            origin: self.origin.clone(),
        })
    }

    pub fn slide(&self, i: usize, j: usize, sign: i8) -> Result<TrackedLink, MoveError> {
        if sign.abs() != 1 {
            return Err(MoveError::BadSign);
        }
        if i == j {
            return Err(MoveError::SelfSlide(self.link.label(i).to_string()));
        }
        let s = BigInt::from(sign);
        let mut m = self.link.matrix().clone();
        // row i += s row j, then column i += s column j
        m.add_row_multiple(i, j, &s);
        m.add_col_multiple(i, j, &s);
        let mut out = self.clone();
        out.link = FramedLink::new(self.link.labels().to_vec(), m).expect("congruence keeps symmetry");
        out.classes = self
            .classes
            .iter()
            .map(|t| {
                let mut c = t.coeffs().to_vec();
                let tj = c[j].clone();
                c[i] += &s * tj;
                GroupElement::new(c)
            })
            .collect();
        Ok(out)
    }

    pub fn surger_1handle(&self, c: usize) -> Result<TrackedLink, MoveError> {
        if !self.handles[c] {
            return Err(MoveError::NotHandle(self.link.label(c).to_string()));
        }
        let mut out = self.clone();
        out.handles[c] = false;
        out.l0[c] = true;
        Ok(out)
    }

    fn check(&self) -> Result<(), MoveError> {
        let map = self.class_map();
        let before = self.origin.to_string();
        let after = map.target.to_string();
        if before != after {
            return Err(MoveError::OrderChanged { before, after });
        }
        match verify_iso(&map) {
            Verdict::Iso => Ok(()),
            v => Err(MoveError::ClassCheck(v)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepRecord {
    pub mv: String,
    pub group: String,
    pub framings: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScriptRun {
    pub result: TrackedLink,
    pub steps: Vec<StepRecord>,
}

/// Applies every move in order, checking the class map after each one.
/// Steps are numbered from 1.
pub fn run_script(start: &TrackedLink, script: &MoveScript) -> Result<ScriptRun, KirbyError> {
    let mut cur = start.clone();
    let mut steps = Vec::with_capacity(script.moves.len());
    for (k, mv) in script.moves.iter().enumerate() {
        let wrap = |source| KirbyError::Step {
            step: k + 1,
            mv: mv.to_string(),
            source,
        };
        cur = cur.apply(mv).map_err(wrap)?;
        cur.check().map_err(wrap)?;
        steps.push(StepRecord {
            mv: mv.to_string(),
            group: cur.current_h1().to_string(),
            framings: cur.link.framings(),
        });
    }
    Ok(ScriptRun { result: cur, steps })
}

/// `a` is the mirror of `b`: every linking number and framing flips sign.
pub fn is_negated(a: &FramedLink, b: &FramedLink) -> bool {
    a.len() == b.len() && (0..a.len()).all(|i| (0..a.len()).all(|j| *a.lk(i, j) == -b.lk(i, j)))
}
