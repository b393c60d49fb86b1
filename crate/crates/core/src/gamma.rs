//! Gompf's Γ invariant from a standard-form Stein surgery diagram.
//!
//! After every 1-handle is traded for a 0-framed unknot (the set `L0`), the
//! class `PDΓ(ξ, 𝔰)` restricted to the boundary is `Σ c_i μ_i` with
//!
//! ```text
//! c_i = (rot(K_i) + lk(K_i, L0 + L(𝔰))) / 2
//! ```
//!
//! where `L0 + L(𝔰)` is a multiset sum: a component in both counts twice.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use thiserror::Error;

use crate::homology::{boundary_h1, Canonical, GeneratorMap, GroupElement, H1Presentation, HomologyError};
use crate::legendrian::{self, FrontData};
use crate::link::FramedLink;
use crate::spin::{auto_named, match_spins, name_spins, NamedSpin, SpinError, SpinMatch, SpinStructure};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GammaError {
    #[error("{what} has {found} entries, link has {expected} components")]
    SizeMismatch { what: &'static str, expected: usize, found: usize },
    #[error("component `{0}` is in L0 but has nonzero framing")]
    L0Framing(String),
    #[error("component `{0}` is in L0 but has nonzero rotation number")]
    L0Rotation(String),
    #[error("component `{label}`: framing {framing} differs from tb - 1 = {expected}")]
    FrontFraming { label: String, framing: BigInt, expected: i64 },
    #[error("component `{label}`: rotation number {rot} differs from the front's {expected}")]
    FrontRotation { label: String, rot: BigInt, expected: i64 },
    #[error("spin structure {0} is not characteristic")]
    NotCharacteristic(String),
    #[error("component `{label}`: rot + lk = {value} is odd")]
    Integrality { label: String, value: BigInt },
    #[error(transparent)]
    Spin(#[from] SpinError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SteinSurgeryDiagram {
    link: FramedLink,
    rot: Vec<BigInt>,
    l0: Vec<bool>,
    fronts: Vec<Option<FrontData>>,
}

impl SteinSurgeryDiagram {
    pub fn new(
        link: FramedLink,
        rot: Vec<BigInt>,
        l0: Vec<bool>,
        fronts: Vec<Option<FrontData>>,
    ) -> Result<Self, GammaError> {
        let n = link.len();
        for (what, found) in [("rot", rot.len()), ("L0", l0.len()), ("fronts", fronts.len())] {
            if found != n {
                return Err(GammaError::SizeMismatch { what, expected: n, found });
            }
        }
        for i in 0..n {
            let label = link.label(i).to_string();
            if l0[i] {
                if !link.framing(i).is_zero() {
                    return Err(GammaError::L0Framing(label));
                }
                if !rot[i].is_zero() {
                    return Err(GammaError::L0Rotation(label));
                }
                continue;
            }
            if let Some(front) = &fronts[i] {
                let expected = legendrian::stein_framing(front);
                if *link.framing(i) != BigInt::from(expected) {
                    return Err(GammaError::FrontFraming {
                        label,
                        framing: link.framing(i).clone(),
                        expected,
                    });
                }
                let expected = legendrian::rot(front);
                if rot[i] != BigInt::from(expected) {
                    return Err(GammaError::FrontRotation {
                        label,
                        rot: rot[i].clone(),
                        expected,
                    });
                }
            }
        }
        Ok(SteinSurgeryDiagram { link, rot, l0, fronts })
    }

    /// A diagram without 1-handles or front data.
    pub fn from_rot(link: FramedLink, rot: Vec<BigInt>) -> Result<Self, GammaError> {
        let n = link.len();
        Self::new(link, rot, vec![false; n], vec![None; n])
    }

    pub fn link(&self) -> &FramedLink {
        &self.link
    }

    pub fn rot(&self) -> &[BigInt] {
        &self.rot
    }

    pub fn l0(&self) -> &[bool] {
        &self.l0
    }

    pub fn fronts(&self) -> &[Option<FrontData>] {
        &self.fronts
    }

    /// The same diagram with components listed in `order`.
    pub fn permuted(&self, order: &[usize]) -> SteinSurgeryDiagram {
        SteinSurgeryDiagram {
            link: self.link.permuted(order),
            rot: order.iter().map(|&i| self.rot[i].clone()).collect(),
            l0: order.iter().map(|&i| self.l0[i]).collect(),
            fronts: order.iter().map(|&i| self.fronts[i]).collect(),
        }
    }
}

/// `Σ c_i μ_i` over the diagram's meridians, unreduced.
pub fn gamma(diagram: &SteinSurgeryDiagram, spin: &SpinStructure) -> Result<GroupElement, GammaError> {
    let link = &diagram.link;
    if spin.members().len() != link.len() {
        return Err(GammaError::SizeMismatch {
            what: "spin structure",
            expected: link.len(),
            found: spin.members().len(),
        });
    }
    if !spin.is_characteristic(link) {
        return Err(GammaError::NotCharacteristic(spin.display(link).to_string()));
    }
    let mut multiset: Vec<usize> = (0..link.len()).filter(|&i| diagram.l0[i]).collect();
    multiset.extend(spin.indices());
    let coeffs = (0..link.len())
        .map(|i| {
            let value = &diagram.rot[i] + link.lk_with(i, &multiset);
            if value.is_odd() {
                return Err(GammaError::Integrality {
                    label: link.label(i).to_string(),
                    value,
                });
            }
            Ok(value / 2)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(GroupElement::new(coeffs))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaValue {
    pub name: String,
    /// Member labels in component order.
    pub sublink: Vec<String>,
    pub element: GroupElement,
    pub canonical: Canonical,
    /// Coefficient in `[0, |H1|)` on the preferred generator, when cyclic.
    pub coeff: Option<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaResult {
    pub h1: H1Presentation,
    pub generator: Option<String>,
    pub values: Vec<GammaValue>,
}

impl GammaResult {
    pub fn named(&self) -> Vec<(String, GroupElement)> {
        self.values.iter().map(|v| (v.name.clone(), v.element.clone())).collect()
    }

    pub fn get(&self, name: &str) -> Option<&GammaValue> {
        self.values.iter().find(|v| v.name == name)
    }
}

fn value(
    h1: &H1Presentation,
    preferred: Option<usize>,
    name: String,
    sublink: Vec<String>,
    element: GroupElement,
) -> Result<GammaValue, GammaError> {
    let canonical = h1.reduce(&element)?;
    let coeff = match preferred {
        Some(p) => h1.cyclic_coefficient(&element, &h1.generator(p))?,
        None => None,
    };
    Ok(GammaValue {
        name,
        sublink,
        element,
        canonical,
        coeff,
    })
}

/// Γ for every characteristic sublink. `names` attaches declared names
/// (and their order); without them spins are called `s`, `s1`, `s2`, ...
pub fn gamma_all(
    diagram: &SteinSurgeryDiagram,
    names: Option<&[(String, Vec<usize>)]>,
    preferred: Option<usize>,
) -> Result<GammaResult, GammaError> {
    let link = &diagram.link;
    let spins: Vec<NamedSpin> = match names {
        Some(declared) => name_spins(link, declared)?,
        None => auto_named(link, "s")?,
    };
    let h1 = boundary_h1(link);
    let values = spins
        .into_iter()
        .map(|ns| {
            let element = gamma(diagram, &ns.spin)?;
            let sublink = ns.spin.labels(link).iter().map(|s| s.to_string()).collect();
            value(&h1, preferred, ns.name, sublink, element)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(GammaResult {
        generator: preferred.map(|p| link.label(p).to_string()),
        h1,
        values,
    })
}

/// A Γ table taken as given: `coeff · generator` per named spin structure.
pub fn gamma_from_values(
    link: &FramedLink,
    declared: &[(String, Vec<usize>)],
    preferred: usize,
    coeffs: &[(String, BigInt)],
) -> Result<GammaResult, GammaError> {
    let spins = name_spins(link, declared)?;
    let h1 = boundary_h1(link);
    let values = spins
        .into_iter()
        .map(|ns| {
            let c = coeffs
                .iter()
                .find(|(n, _)| *n == ns.name)
                .map(|(_, c)| c.clone())
                .unwrap_or_default();
            let element = h1.generator(preferred).scaled(&c);
            let sublink = ns.spin.labels(link).iter().map(|s| s.to_string()).collect();
            value(&h1, Some(preferred), ns.name, sublink, element)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(GammaResult {
        generator: Some(link.label(preferred).to_string()),
        h1,
        values,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaComparison {
    /// For each source spin, the target spins whose value corresponds.
    pub rows: Vec<(String, Vec<String>)>,
    pub matching: SpinMatch,
    /// `Some(false)` when a bijection exists but differs from the expected one.
    pub expected_ok: Option<bool>,
}

impl GammaComparison {
    pub fn ok(&self) -> bool {
        self.matching.pairs().is_some() && self.expected_ok != Some(false)
    }
}

/// Compares two Γ tables through `iso` (source of `a` to source of `b`).
pub fn compare_gamma(
    a: &GammaResult,
    b: &GammaResult,
    iso: &GeneratorMap,
    expected: Option<&[(String, String)]>,
) -> Result<GammaComparison, GammaError> {
    let mut rows = Vec::new();
    for v in &a.values {
        let image = iso.target.reduce(&iso.apply(&v.element)?)?;
        let hits = b
            .values
            .iter()
            .filter(|w| iso.target.reduce(&w.element).map(|c| c == image).unwrap_or(false))
            .map(|w| w.name.clone())
            .collect();
        rows.push((v.name.clone(), hits));
    }
    let matching = match_spins(&a.named(), &b.named(), iso)?;
    let expected_ok = match (expected, matching.pairs()) {
        (Some(exp), Some(got)) => {
            let mut e = exp.to_vec();
            let mut g = got.to_vec();
            e.sort();
            g.sort();
            Some(e == g)
        }
        _ => None,
    };
    Ok(GammaComparison {
        rows,
        matching,
        expected_ok,
    })
}
