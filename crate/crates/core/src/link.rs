//! Framed links, linear plumbing chains and negative continued fractions.
//!
//! A [`FramedLink`] is stored as its linking matrix: the diagonal carries the
//! framings and the off-diagonal entries the pairwise linking numbers. No
//! planar information is kept, so everything downstream (homology, spin
//! structures, Kirby moves) works purely on this matrix.
//!
//! Continued fractions use the "negative" convention
//! `[a1, a2, ..., ak] = a1 - 1/(a2 - 1/(... - 1/ak))`. The expansion of a
//! positive fraction `p/q` returns coefficients evaluating to `-p/q`, which is
//! the surgery coefficient whose result is the lens space `L(p, q)`.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::matrix::IntMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinkError {
    #[error("linking matrix must be square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("{labels} labels for a {size}x{size} linking matrix")]
    LabelCount { labels: usize, size: usize },
    #[error("linking matrix is not symmetric at ({i}, {j})")]
    Asymmetric { i: usize, j: usize },
    #[error("duplicate component label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown component label `{0}`")]
    UnknownLabel(String),
    #[error("a plumbing chain needs at least one component")]
    EmptyChain,
    #[error("continued fraction is malformed: {0}")]
    MalformedFraction(String),
    #[error("expected 0 < q < p with gcd(p, q) = 1, got p = {p}, q = {q}")]
    InvalidFraction { p: BigInt, q: BigInt },
}

/// A framed link presented by labels and a symmetric linking matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FramedLink {
    labels: Vec<String>,
    matrix: IntMatrix,
}

impl FramedLink {
    pub fn new(labels: Vec<String>, matrix: IntMatrix) -> Result<Self, LinkError> {
        if !matrix.is_square() {
            return Err(LinkError::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        if labels.len() != matrix.rows() {
            return Err(LinkError::LabelCount {
                labels: labels.len(),
                size: matrix.rows(),
            });
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(LinkError::DuplicateLabel(l.clone()));
            }
        }
        for i in 0..matrix.rows() {
            for j in 0..i {
                if matrix[(i, j)] != matrix[(j, i)] {
                    return Err(LinkError::Asymmetric { i: j, j: i });
                }
            }
        }
        Ok(FramedLink { labels, matrix })
    }

    /// Convenience constructor from small integers.
    pub fn from_rows(labels: &[&str], rows: &[Vec<i64>]) -> Result<Self, LinkError> {
        Self::new(
            labels.iter().map(|s| s.to_string()).collect(),
            IntMatrix::from_rows(rows),
        )
    }

    pub fn empty() -> Self {
        FramedLink {
            labels: Vec::new(),
            matrix: IntMatrix::zeros(0, 0),
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Result<usize, LinkError> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| LinkError::UnknownLabel(label.to_string()))
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn framing(&self, i: usize) -> &BigInt {
        &self.matrix[(i, i)]
    }

    pub fn framings(&self) -> Vec<BigInt> {
        (0..self.len()).map(|i| self.framing(i).clone()).collect()
    }

    /// Linking number, with `lk(K, K)` equal to the framing of `K`.
    pub fn lk(&self, i: usize, j: usize) -> &BigInt {
        &self.matrix[(i, j)]
    }

    /// `lk(K_i, L)` for a sublink given as a multiset of component indices.
    pub fn lk_with(&self, i: usize, sublink: &[usize]) -> BigInt {
        sublink.iter().map(|&j| self.lk(i, j)).sum()
    }

    /// The link with components listed in `order` (a permutation of indices).
    pub fn permuted(&self, order: &[usize]) -> FramedLink {
        assert_eq!(order.len(), self.len(), "permutation length mismatch");
        let mut m = IntMatrix::zeros(self.len(), self.len());
        for (a, &i) in order.iter().enumerate() {
            for (b, &j) in order.iter().enumerate() {
                m[(a, b)] = self.matrix[(i, j)].clone();
            }
        }
        FramedLink {
            labels: order.iter().map(|&i| self.labels[i].clone()).collect(),
            matrix: m,
        }
    }

    /// Reorders components to follow `labels`, which must list every label once.
    pub fn reordered(&self, labels: &[&str]) -> Result<FramedLink, LinkError> {
        if labels.len() != self.len() {
            return Err(LinkError::LabelCount {
                labels: labels.len(),
                size: self.len(),
            });
        }
        let order = labels
            .iter()
            .map(|l| self.index_of(l))
            .collect::<Result<Vec<_>, _>>()?;
        let mut seen = HashSet::new();
        if let Some(dup) = order.iter().find(|i| !seen.insert(**i)) {
            return Err(LinkError::DuplicateLabel(self.labels[*dup].clone()));
        }
        Ok(self.permuted(&order))
    }

    pub fn relabeled(&self, labels: Vec<String>) -> Result<FramedLink, LinkError> {
        FramedLink::new(labels, self.matrix.clone())
    }

    /// Mirror image: every framing and linking number changes sign.
    pub fn mirrored(&self) -> FramedLink {
        let mut m = self.matrix.clone();
        for i in 0..m.rows() {
            m.negate_row(i);
        }
        FramedLink {
            labels: self.labels.clone(),
            matrix: m,
        }
    }
}

impl fmt::Display for FramedLink {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) {}", self.labels.join(", "), self.matrix)
    }
}

/// A linear plumbing: consecutive spheres meet once, so the linking matrix is
/// tridiagonal with ones beside the diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlumbingChain {
    framings: Vec<BigInt>,
}

impl PlumbingChain {
    pub fn new<T: Into<BigInt>>(framings: impl IntoIterator<Item = T>) -> Result<Self, LinkError> {
        let framings: Vec<BigInt> = framings.into_iter().map(Into::into).collect();
        if framings.is_empty() {
            return Err(LinkError::EmptyChain);
        }
        Ok(PlumbingChain { framings })
    }

    pub fn framings(&self) -> &[BigInt] {
        &self.framings
    }

    pub fn len(&self) -> usize {
        self.framings.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Default labels `K1, K2, ...` for chains built without explicit names.
pub fn chain_labels(len: usize) -> Vec<String> {
    (1..=len).map(|i| format!("K{i}")).collect()
}

pub fn chain_to_link(chain: &PlumbingChain) -> FramedLink {
    chain_to_link_labeled(chain, chain_labels(chain.len()))
        .expect("generated chain labels are unique")
}

pub fn chain_to_link_labeled(chain: &PlumbingChain, labels: Vec<String>) -> Result<FramedLink, LinkError> {
    let n = chain.len();
    let mut m = IntMatrix::zeros(n, n);
    for (i, f) in chain.framings.iter().enumerate() {
        m[(i, i)] = f.clone();
        if i + 1 < n {
            m[(i, i + 1)] = BigInt::one();
            m[(i + 1, i)] = BigInt::one();
        }
    }
    FramedLink::new(labels, m)
}

/// Coefficients of a negative continued fraction.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ContinuedFraction {
    coefficients: Vec<BigInt>,
}

impl ContinuedFraction {
    pub fn new<T: Into<BigInt>>(coefficients: impl IntoIterator<Item = T>) -> Self {
        ContinuedFraction {
            coefficients: coefficients.into_iter().map(Into::into).collect(),
        }
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// The chain whose framings are these coefficients.
    pub fn to_chain(&self) -> Result<PlumbingChain, LinkError> {
        PlumbingChain::new(self.coefficients.iter().cloned())
    }
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coefficients.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// Evaluates `a1 - 1/(a2 - 1/(... - 1/ak))` exactly.
pub fn cf_value(cf: &ContinuedFraction) -> Result<BigRational, LinkError> {
    let mut iter = cf.coefficients.iter().rev();
    let last = iter
        .next()
        .ok_or_else(|| LinkError::MalformedFraction("no coefficients".into()))?;
    let mut acc = BigRational::from_integer(last.clone());
    for a in iter {
        if acc.is_zero() {
            return Err(LinkError::MalformedFraction(format!(
                "division by zero below coefficient {a}"
            )));
        }
        acc = BigRational::from_integer(a.clone()) - acc.recip();
    }
    Ok(acc)
}

/// Negative continued fraction of `p/q`, returned with coefficients that
/// evaluate to `-p/q`; every coefficient is at most `-2` except that a
/// single-term expansion of an integer `p` gives `[-p]`.
pub fn neg_cf_expand(p: &BigInt, q: &BigInt) -> Result<ContinuedFraction, LinkError> {
    if !q.is_positive() || q >= p || !p.gcd(q).is_one() {
        return Err(LinkError::InvalidFraction {
            p: p.clone(),
            q: q.clone(),
        });
    }
    let (mut num, mut den) = (p.clone(), q.clone());
    let mut coefficients = Vec::new();
    loop {
        // b = ceil(num/den); num/den = b - 1/(den/(b*den - num))
        let b = num.div_ceil(&den);
        coefficients.push(-&b);
        let rem = &b * &den - &num;
        if rem.is_zero() {
            break;
        }
        num = std::mem::replace(&mut den, rem);
    }
    Ok(ContinuedFraction { coefficients })
}
