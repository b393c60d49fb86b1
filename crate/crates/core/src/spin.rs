//! Spin structures on surgery boundaries as characteristic sublinks.
//!
//! A sublink `L'` is characteristic when `framing(K) ≡ lk(K, L') (mod 2)` for
//! every component `K`, with `lk(K, K)` read as the framing. Writing `x` for
//! the indicator vector of `L'`, this is the affine system
//! `(A mod 2) x = diag(A) mod 2` over GF(2).

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use thiserror::Error;

use crate::homology::{GeneratorMap, GroupElement, HomologyError};
use crate::link::FramedLink;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpinError {
    #[error("no characteristic sublink exists; the diagram is inconsistent")]
    Inconsistent,
    #[error("sublink has {found} entries, link has {expected} components")]
    SizeMismatch { expected: usize, found: usize },
    #[error("declared spin structure `{0}` is not characteristic")]
    NotCharacteristic(String),
    #[error("characteristic sublink {0} has no declared name")]
    Undeclared(String),
    #[error("declared spin structures `{0}` and `{1}` coincide")]
    DuplicateDeclaration(String, String),
    #[error(transparent)]
    Homology(#[from] HomologyError),
}

/// A characteristic sublink, as membership flags over the link's components.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpinStructure {
    members: Vec<bool>,
}

impl SpinStructure {
    pub fn new(members: Vec<bool>) -> Self {
        SpinStructure { members }
    }

    pub fn from_indices(len: usize, indices: &[usize]) -> Self {
        let mut members = vec![false; len];
        for &i in indices {
            members[i] = true;
        }
        SpinStructure { members }
    }

    pub fn members(&self) -> &[bool] {
        &self.members
    }

    pub fn indices(&self) -> Vec<usize> {
        (0..self.members.len()).filter(|&i| self.members[i]).collect()
    }

    pub fn labels<'a>(&self, link: &'a FramedLink) -> Vec<&'a str> {
        self.indices().into_iter().map(|i| link.label(i)).collect()
    }

    /// `{A, B}` in component order, `{}` when empty.
    pub fn display<'a>(&'a self, link: &'a FramedLink) -> impl fmt::Display + 'a {
        struct D<'a>(&'a SpinStructure, &'a FramedLink);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{{{}}}", self.0.labels(self.1).join(", "))
            }
        }
        D(self, link)
    }

    /// Checks the defining congruence directly, component by component.
    pub fn is_characteristic(&self, link: &FramedLink) -> bool {
        self.members.len() == link.len()
            && (0..link.len()).all(|k| {
                let lk = link.lk_with(k, &self.indices());
                (link.framing(k) - lk).is_even()
            })
    }

    pub fn xor(&self, other: &SpinStructure) -> SpinStructure {
        SpinStructure::new(self.members.iter().zip(&other.members).map(|(a, b)| a ^ b).collect())
    }
}

/// Row-reduced system over GF(2).
struct Gf2System {
    rows: Vec<Vec<bool>>,
    rhs: Vec<bool>,
    pivots: Vec<usize>,
    n: usize,
}

fn parity(v: &BigInt) -> bool {
    v.is_odd()
}

fn reduce_mod2(link: &FramedLink) -> Gf2System {
    let n = link.len();
    let mut rows: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| parity(link.lk(i, j))).collect()).collect();
    let mut rhs: Vec<bool> = (0..n).map(|i| parity(link.framing(i))).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..n).find(|&i| rows[i][c]) else { continue };
        rows.swap(r, p);
        rhs.swap(r, p);
        for i in 0..n {
            if i != r && rows[i][c] {
                let (src, src_rhs) = (rows[r].clone(), rhs[r]);
                for (a, b) in rows[i].iter_mut().zip(&src) {
                    *a ^= *b;
                }
                rhs[i] ^= src_rhs;
            }
        }
        pivots.push(c);
        r += 1;
    }
    Gf2System { rows, rhs, pivots, n }
}

/// Dimension of the mod-2 kernel of the linking matrix.
pub fn kernel_dimension(link: &FramedLink) -> usize {
    let sys = reduce_mod2(link);
    sys.n - sys.pivots.len()
}

/// All characteristic sublinks, ordered lexicographically by the values of
/// the free (non-pivot) variables, taken in component order.
pub fn characteristic_sublinks(link: &FramedLink) -> Result<Vec<SpinStructure>, SpinError> {
    let sys = reduce_mod2(link);
    let rank = sys.pivots.len();
    if sys.rhs[rank..].iter().any(|&b| b) {
        return Err(SpinError::Inconsistent);
    }
    let free: Vec<usize> = (0..sys.n).filter(|c| !sys.pivots.contains(c)).collect();
    assert!(free.len() < 32, "mod-2 kernel too large to enumerate");
    let mut out = Vec::with_capacity(1 << free.len());
    for mask in 0u32..(1u32 << free.len()) {
        let mut x = vec![false; sys.n];
        for (bit, &c) in free.iter().enumerate() {
            x[c] = mask >> (free.len() - 1 - bit) & 1 == 1;
        }
        for (r, &pc) in sys.pivots.iter().enumerate() {
            let mut v = sys.rhs[r];
            for &c in &free {
                v ^= sys.rows[r][c] & x[c];
            }
            x[pc] = v;
        }
        out.push(SpinStructure::new(x));
    }
    Ok(out)
}

/// A spin structure with the name it carries in a diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedSpin {
    pub name: String,
    pub spin: SpinStructure,
}

/// Checks that the declared sublinks are exactly the characteristic ones
/// and returns them in declaration order.
pub fn name_spins(link: &FramedLink, declared: &[(String, Vec<usize>)]) -> Result<Vec<NamedSpin>, SpinError> {
    let mut seen: Vec<(&str, SpinStructure)> = Vec::new();
    for (name, idx) in declared {
        if let Some(&i) = idx.iter().find(|&&i| i >= link.len()) {
            return Err(SpinError::SizeMismatch {
                expected: link.len(),
                found: i + 1,
            });
        }
        let s = SpinStructure::from_indices(link.len(), idx);
        if !s.is_characteristic(link) {
            return Err(SpinError::NotCharacteristic(name.clone()));
        }
        if let Some((other, _)) = seen.iter().find(|(_, t)| *t == s) {
            return Err(SpinError::DuplicateDeclaration(other.to_string(), name.clone()));
        }
        seen.push((name, s));
    }
    for spin in characteristic_sublinks(link)? {
        if !seen.iter().any(|(_, s)| *s == spin) {
            return Err(SpinError::Undeclared(spin.display(link).to_string()));
        }
    }
    Ok(seen
        .into_iter()
        .map(|(name, spin)| NamedSpin {
            name: name.to_string(),
            spin,
        })
        .collect())
}

/// Default names `s1, s2, ...` (or `s` alone) in solver order.
pub fn auto_named(link: &FramedLink, prefix: &str) -> Result<Vec<NamedSpin>, SpinError> {
    let spins = characteristic_sublinks(link)?;
    let single = spins.len() == 1;
    Ok(spins
        .into_iter()
        .enumerate()
        .map(|(i, spin)| NamedSpin {
            name: if single { prefix.to_string() } else { format!("{prefix}{}", i + 1) },
            spin,
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpinMatch {
    /// `(source name, target name)` for every source spin structure.
    Paired(Vec<(String, String)>),
    /// A source value has no counterpart.
    Unmatched { source: String },
    /// A source value matches several targets; not resolved.
    Ambiguous { source: String, candidates: Vec<String> },
    /// Two sources land on the same target, or the counts differ.
    NotBijective { detail: String },
}

impl SpinMatch {
    pub fn pairs(&self) -> Option<&[(String, String)]> {
        match self {
            SpinMatch::Paired(p) => Some(p),
            _ => None,
        }
    }
}

/// Pairs spin structures whose Γ values correspond under `iso`.
/// `src` values are over `iso.source`'s generators, `dst` over `iso.target`'s.
pub fn match_spins(
    src: &[(String, GroupElement)],
    dst: &[(String, GroupElement)],
    iso: &GeneratorMap,
) -> Result<SpinMatch, SpinError> {
    if src.len() != dst.len() {
        return Ok(SpinMatch::NotBijective {
            detail: format!("{} source and {} target spin structures", src.len(), dst.len()),
        });
    }
    let dst_reduced = dst
        .iter()
        .map(|(name, v)| Ok((name, iso.target.reduce(v)?)))
        .collect::<Result<Vec<_>, HomologyError>>()?;
    let mut used = HashSet::new();
    let mut pairs = Vec::new();
    for (name, v) in src {
        let image = iso.target.reduce(&iso.apply(v)?)?;
        let candidates: Vec<&String> = dst_reduced.iter().filter(|(_, c)| *c == image).map(|(n, _)| *n).collect();
        match candidates.as_slice() {
            [] => return Ok(SpinMatch::Unmatched { source: name.clone() }),
            [t] => {
                if !used.insert(t.as_str()) {
                    return Ok(SpinMatch::NotBijective {
                        detail: format!("`{t}` is matched twice"),
                    });
                }
                pairs.push((name.clone(), t.to_string()));
            }
            many => {
                return Ok(SpinMatch::Ambiguous {
                    source: name.clone(),
                    candidates: many.iter().map(|s| s.to_string()).collect(),
                })
            }
        }
    }
    Ok(SpinMatch::Paired(pairs))
}
