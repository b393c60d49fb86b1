//! The diagram text format.
//!
//! One statement per line (`;` also separates), `#` starts a comment, and
//! `−` (U+2212) is accepted as a minus sign.
//!
//! ```text
//! comp LABEL FRAMING            handle LABEL
//! lk LABEL LABEL INT            chain INT INT ...
//! rot LABEL INT                 l0 LABEL
//! front LABEL W L+ L- R+ R- H B
//! spin NAME LABEL...            prefer LABEL
//! symbol LABEL NAME             gamma NAME COEFF [alt COEFF]
//! ```
//!
//! `handle` declares a 1-handle, kept as a 0-framed component whose linking
//! numbers count signed passes. Repeated `spin` lines for one name add
//! members. `chain` appends components named `K<index>`
//! linked consecutively once. Labels must be declared before use.

use std::collections::HashMap;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::legendrian::FrontData;
use crate::link::FramedLink;
use crate::matrix::IntMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub text: String,
    pub col: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Statement {
    pub line: usize,
    pub tokens: Vec<Token>,
}

impl Statement {
    pub fn keyword(&self) -> &str {
        &self.tokens[0].text
    }

    pub fn error(&self, idx: usize, message: impl Into<String>) -> ParseError {
        let col = self
            .tokens
            .get(idx)
            .or(self.tokens.last())
            .map_or(1, |t| t.col);
        ParseError {
            line: self.line,
            col,
            message: message.into(),
        }
    }

    pub fn arity(&self, min: usize, max: usize) -> Result<(), ParseError> {
        let n = self.tokens.len() - 1;
        if n < min || n > max {
            let want = if min == max {
                format!("{min}")
            } else if max == usize::MAX {
                format!("at least {min}")
            } else {
                format!("{min} to {max}")
            };
            return Err(self.error(0, format!("`{}` takes {want} arguments, got {n}", self.keyword())));
        }
        Ok(())
    }

    pub fn arg(&self, i: usize) -> &str {
        &self.tokens[i].text
    }

    pub fn parse_arg<T: FromStr>(&self, i: usize, what: &str) -> Result<T, ParseError> {
        self.tokens[i]
            .text
            .parse()
            .map_err(|_| self.error(i, format!("expected {what}, found `{}`", self.tokens[i].text)))
    }
}

/// Splits text into statements, dropping comments and blank statements.
pub fn statements(src: &str) -> Vec<Statement> {
    let mut out = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let line = raw.replace('\u{2212}', "-");
        let code = line.split('#').next().unwrap_or("");
        let mut offset = 0;
        for part in code.split(';') {
            let mut tokens = Vec::new();
            let mut col = offset;
            for piece in part.split_inclusive(char::is_whitespace) {
                let text = piece.trim();
                if !text.is_empty() {
                    let lead = piece.len() - piece.trim_start().len();
                    tokens.push(Token {
                        text: text.to_string(),
                        col: code[..col + lead].chars().count() + 1,
                    });
                }
                col += piece.len();
            }
            offset += part.len() + 1;
            if !tokens.is_empty() {
                out.push(Statement { line: i + 1, tokens });
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaFixture {
    pub name: String,
    pub coeff: BigInt,
    pub alt: Option<BigInt>,
}

/// A parsed diagram with every optional annotation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram {
    pub link: FramedLink,
    pub rot: Vec<Option<BigInt>>,
    pub l0: Vec<bool>,
    pub handles: Vec<bool>,
    pub fronts: Vec<Option<FrontData>>,
    pub spins: Vec<(String, Vec<usize>)>,
    pub prefer: Option<usize>,
    pub symbols: Vec<Option<String>>,
    pub gammas: Vec<GammaFixture>,
}

impl Diagram {
    /// Symbol of component `i`, falling back to its label.
    pub fn symbol(&self, i: usize) -> &str {
        self.symbols[i].as_deref().unwrap_or(self.link.label(i))
    }

    pub fn symbol_names(&self) -> Vec<String> {
        (0..self.link.len()).map(|i| self.symbol(i).to_string()).collect()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.link.index_of(label).ok()
    }
}

#[derive(Default)]
struct Builder {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    framings: Vec<BigInt>,
    lk: HashMap<(usize, usize), (BigInt, usize)>,
    rot: Vec<Option<BigInt>>,
    l0: Vec<bool>,
    handles: Vec<bool>,
    fronts: Vec<Option<FrontData>>,
    spins: Vec<(String, Vec<usize>)>,
    prefer: Option<usize>,
    symbols: Vec<Option<String>>,
    gammas: Vec<GammaFixture>,
}

impl Builder {
    fn add(&mut self, st: &Statement, tok: usize, label: &str, framing: BigInt, handle: bool) -> Result<usize, ParseError> {
        if self.index.contains_key(label) {
            return Err(st.error(tok, format!("duplicate component label `{label}`")));
        }
        let i = self.labels.len();
        self.index.insert(label.to_string(), i);
        self.labels.push(label.to_string());
        self.framings.push(framing);
        self.rot.push(None);
        self.l0.push(false);
        self.handles.push(handle);
        self.fronts.push(None);
        self.symbols.push(None);
        Ok(i)
    }

    fn lookup(&self, st: &Statement, tok: usize) -> Result<usize, ParseError> {
        let label = st.arg(tok);
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| st.error(tok, format!("undeclared component `{label}`")))
    }

    fn set_lk(&mut self, st: &Statement, a: usize, b: usize, v: BigInt) -> Result<(), ParseError> {
        let key = (a.min(b), a.max(b));
        match self.lk.get(&key) {
            Some((old, line)) if *old != v => {
                let kind = if a > b { "asymmetric" } else { "conflicting" };
                Err(st.error(
                    3,
                    format!(
                        "{kind} linking data for `{}` and `{}`: {old} on line {line}, {v} here",
                        self.labels[a], self.labels[b]
                    ),
                ))
            }
            _ => {
                self.lk.insert(key, (v, st.line));
                Ok(())
            }
        }
    }

    fn statement(&mut self, st: &Statement) -> Result<(), ParseError> {
        match st.keyword() {
            "comp" => {
                st.arity(2, 2)?;
                let f = st.parse_arg(2, "an integer framing")?;
                self.add(st, 1, st.arg(1), f, false)?;
            }
            "handle" => {
                st.arity(1, 1)?;
                self.add(st, 1, st.arg(1), BigInt::zero(), true)?;
            }
            "chain" => {
                st.arity(1, usize::MAX)?;
                let mut prev: Option<usize> = None;
                for t in 1..st.tokens.len() {
                    let f = st.parse_arg(t, "an integer framing")?;
                    let label = format!("K{}", self.labels.len() + 1);
                    let i = self.add(st, t, &label, f, false)?;
                    if let Some(p) = prev {
                        self.set_lk(st, p, i, BigInt::from(1))?;
                    }
                    prev = Some(i);
                }
            }
            "lk" => {
                st.arity(3, 3)?;
                let a = self.lookup(st, 1)?;
                let b = self.lookup(st, 2)?;
                if a == b {
                    return Err(st.error(2, "self-linking is the framing; use `comp`"));
                }
                let v = st.parse_arg(3, "an integer linking number")?;
                self.set_lk(st, a, b, v)?;
            }
            "rot" => {
                st.arity(2, 2)?;
                let i = self.lookup(st, 1)?;
                if self.rot[i].is_some() {
                    return Err(st.error(1, "rotation number given twice"));
                }
                self.rot[i] = Some(st.parse_arg(2, "an integer rotation number")?);
            }
            "l0" => {
                st.arity(1, 1)?;
                let i = self.lookup(st, 1)?;
                self.l0[i] = true;
            }
            "front" => {
                st.arity(8, 8)?;
                let i = self.lookup(st, 1)?;
                let w: i64 = st.parse_arg(2, "an integer writhe")?;
                let mut c = [0u64; 5];
                for (k, slot) in c.iter_mut().enumerate() {
                    *slot = st.parse_arg(3 + k, "a non-negative count")?;
                }
                let b: i64 = st.parse_arg(8, "an integer wrap count")?;
                let front = FrontData::new(w, (c[0], c[1]), (c[2], c[3]), c[4], b)
                    .map_err(|e| st.error(3, e.to_string()))?;
                self.fronts[i] = Some(front);
            }
            "spin" => {
                st.arity(1, usize::MAX)?;
                let name = st.arg(1).to_string();
                let idx = (2..st.tokens.len())
                    .map(|t| self.lookup(st, t))
                    .collect::<Result<Vec<_>, _>>()?;
                let slot = match self.spins.iter().position(|(n, _)| *n == name) {
                    Some(k) => &mut self.spins[k].1,
                    None => {
                        self.spins.push((name, Vec::new()));
                        &mut self.spins.last_mut().expect("just pushed").1
                    }
                };
                slot.extend(idx);
                slot.sort_unstable();
                slot.dedup();
            }
            "prefer" => {
                st.arity(1, 1)?;
                self.prefer = Some(self.lookup(st, 1)?);
            }
            "symbol" => {
                st.arity(2, 2)?;
                let i = self.lookup(st, 1)?;
                self.symbols[i] = Some(st.arg(2).to_string());
            }
            "gamma" => {
                if st.tokens.len() != 3 && st.tokens.len() != 5 {
                    return Err(st.error(0, "expected `gamma NAME COEFF [alt COEFF]`"));
                }
                let alt = if st.tokens.len() == 5 {
                    if st.arg(3) != "alt" {
                        return Err(st.error(3, "expected `alt`"));
                    }
                    Some(st.parse_arg(4, "an integer")?)
                } else {
                    None
                };
                self.gammas.push(GammaFixture {
                    name: st.arg(1).to_string(),
                    coeff: st.parse_arg(2, "an integer")?,
                    alt,
                });
            }
            other => return Err(st.error(0, format!("unknown statement `{other}`"))),
        }
        Ok(())
    }

    fn finish(self) -> Diagram {
        let n = self.labels.len();
        let mut m = IntMatrix::zeros(n, n);
        for (i, f) in self.framings.into_iter().enumerate() {
            m[(i, i)] = f;
        }
        for ((a, b), (v, _)) in self.lk {
            m[(a, b)] = v.clone();
            m[(b, a)] = v;
        }
        let link = FramedLink::new(self.labels, m).expect("builder keeps the matrix symmetric");
        Diagram {
            link,
            rot: self.rot,
            l0: self.l0,
            handles: self.handles,
            fronts: self.fronts,
            spins: self.spins,
            prefer: self.prefer,
            symbols: self.symbols,
            gammas: self.gammas,
        }
    }
}

pub fn parse_diagram(src: &str) -> Result<Diagram, ParseError> {
    let mut b = Builder::default();
    for st in statements(src) {
        b.statement(&st)?;
    }
    Ok(b.finish())
}

/// Parses a link, rejecting statements that carry more than linking data.
pub fn parse_link(src: &str) -> Result<FramedLink, ParseError> {
    let mut b = Builder::default();
    for st in statements(src) {
        if !matches!(st.keyword(), "comp" | "lk" | "chain") {
            return Err(st.error(0, format!("`{}` is not part of a plain link", st.keyword())));
        }
        b.statement(&st)?;
    }
    Ok(b.finish().link)
}

/// `comp` lines in order, then `lk` lines for nonzero pairs.
pub fn serialize_link(link: &FramedLink) -> String {
    let mut out = String::new();
    for i in 0..link.len() {
        out.push_str(&format!("comp {} {}\n", link.label(i), link.framing(i)));
    }
    for i in 0..link.len() {
        for j in i + 1..link.len() {
            if !link.lk(i, j).is_zero() {
                out.push_str(&format!("lk {} {} {}\n", link.label(i), link.label(j), link.lk(i, j)));
            }
        }
    }
    out
}

/// Source/target names, generator images and expected spin pairs.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MapSpec {
    pub source: Option<String>,
    pub target: Option<String>,
    pub images: Vec<(String, Vec<(BigInt, String)>)>,
    pub pairs: Vec<(String, String)>,
}

/// `source NAME`, `target NAME`, `image SRC COEF:TGT ...`, `pair A B`.
pub fn parse_map(src: &str) -> Result<MapSpec, ParseError> {
    let mut spec = MapSpec::default();
    for st in statements(src) {
        match st.keyword() {
            "source" | "target" => {
                st.arity(1, 1)?;
                let slot = if st.keyword() == "source" { &mut spec.source } else { &mut spec.target };
                *slot = Some(st.arg(1).to_string());
            }
            "image" => {
                st.arity(1, usize::MAX)?;
                let mut terms = Vec::new();
                for t in 2..st.tokens.len() {
                    let (c, g) = st
                        .arg(t)
                        .split_once(':')
                        .ok_or_else(|| st.error(t, "expected `COEF:LABEL`"))?;
                    let c = c.parse().map_err(|_| st.error(t, format!("bad coefficient `{c}`")))?;
                    terms.push((c, g.to_string()));
                }
                spec.images.push((st.arg(1).to_string(), terms));
            }
            "pair" => {
                st.arity(2, 2)?;
                spec.pairs.push((st.arg(1).to_string(), st.arg(2).to_string()));
            }
            other => return Err(st.error(0, format!("unknown statement `{other}`"))),
        }
    }
    Ok(spec)
}
