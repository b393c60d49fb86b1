use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::snf::{smith_normal_form, Snf};
use super::HomologyError;
use crate::link::FramedLink;
use crate::matrix::IntMatrix;

/// Integer combination of a presentation's generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    coeffs: Vec<BigInt>,
}

impl GroupElement {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        GroupElement { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        GroupElement::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(len: usize) -> Self {
        GroupElement::new(vec![BigInt::zero(); len])
    }

    pub fn basis(len: usize, i: usize) -> Self {
        let mut e = GroupElement::zero(len);
        e.coeffs[i] = BigInt::one();
        e
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scaled(&self, k: &BigInt) -> GroupElement {
        GroupElement::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// `self + k * other`
    pub fn add_scaled(&mut self, other: &GroupElement, k: &BigInt) {
        assert_eq!(self.len(), other.len(), "element length mismatch");
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b * k;
        }
    }

    /// Appends a zero coefficient (a new generator with no contribution).
    pub fn padded(&self, extra: usize) -> GroupElement {
        let mut coeffs = self.coeffs.clone();
        coeffs.extend(std::iter::repeat(BigInt::zero()).take(extra));
        GroupElement::new(coeffs)
    }

    pub fn without(&self, i: usize) -> GroupElement {
        let mut coeffs = self.coeffs.clone();
        coeffs.remove(i);
        GroupElement::new(coeffs)
    }
}

impl Add for &GroupElement {
    type Output = GroupElement;
    fn add(self, rhs: &GroupElement) -> GroupElement {
        let mut out = self.clone();
        out.add_scaled(rhs, &BigInt::one());
        out
    }
}

impl Sub for &GroupElement {
    type Output = GroupElement;
    fn sub(self, rhs: &GroupElement) -> GroupElement {
        let mut out = self.clone();
        out.add_scaled(rhs, &-BigInt::one());
        out
    }
}

impl Neg for &GroupElement {
    type Output = GroupElement;
    fn neg(self) -> GroupElement {
        self.scaled(&-BigInt::one())
    }
}

/// Coordinates over the nontrivial invariant factors, each reduced into
/// `[0, d)` (free coordinates are left as integers).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Canonical {
    coords: Vec<BigInt>,
}

impl Canonical {
    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }
}

/// `Z^n / rowspace(relations)`, with generator labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct H1Presentation {
    labels: Vec<String>,
    relations: IntMatrix,
    snf: Snf,
    /// SNF columns whose factor is not 1.
    slots: Vec<usize>,
    /// Factor per slot; 0 marks a free summand.
    factors: Vec<BigInt>,
}

impl H1Presentation {
    pub fn new(labels: Vec<String>, relations: IntMatrix) -> Result<Self, HomologyError> {
        if labels.len() != relations.cols() {
            return Err(HomologyError::DimensionMismatch {
                expected: relations.cols(),
                found: labels.len(),
            });
        }
        let snf = smith_normal_form(&relations);
        let (slots, factors): (Vec<usize>, Vec<BigInt>) = snf
            .diagonal()
            .into_iter()
            .enumerate()
            .filter(|(_, d)| !d.is_one())
            .unzip();
        Ok(H1Presentation {
            labels,
            relations,
            snf,
            slots,
            factors,
        })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn num_generators(&self) -> usize {
        self.labels.len()
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    pub fn snf(&self) -> &Snf {
        &self.snf
    }

    /// Nontrivial invariant factors in divisibility order, 0 for `Z`.
    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.factors
    }

    pub fn is_finite(&self) -> bool {
        self.factors.iter().all(|d| !d.is_zero())
    }

    pub fn is_cyclic(&self) -> bool {
        self.factors.len() <= 1
    }

    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.factors.iter().product())
    }

    pub fn generator(&self, i: usize) -> GroupElement {
        GroupElement::basis(self.num_generators(), i)
    }

    pub fn generator_by_label(&self, label: &str) -> Option<GroupElement> {
        self.labels.iter().position(|l| l == label).map(|i| self.generator(i))
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement::zero(self.num_generators())
    }

    pub fn reduce(&self, e: &GroupElement) -> Result<Canonical, HomologyError> {
        if e.len() != self.num_generators() {
            return Err(HomologyError::DimensionMismatch {
                expected: self.num_generators(),
                found: e.len(),
            });
        }
        let c = self.snf.v.left_apply(e.coeffs());
        let coords = self
            .slots
            .iter()
            .zip(&self.factors)
            .map(|(&k, d)| if d.is_zero() { c[k].clone() } else { c[k].mod_floor(d) })
            .collect();
        Ok(Canonical { coords })
    }

    /// The element of the original generators with the given canonical coordinates.
    pub fn from_canonical(&self, coords: &[BigInt]) -> GroupElement {
        assert_eq!(coords.len(), self.slots.len(), "canonical length mismatch");
        let mut e = self.zero();
        for (&k, c) in self.slots.iter().zip(coords) {
            e.add_scaled(&GroupElement::new(self.snf.v_inv.row(k).to_vec()), c);
        }
        e
    }

    /// Canonical generator `k` written over the original generators.
    pub fn canonical_generator(&self, k: usize) -> GroupElement {
        GroupElement::new(self.snf.v_inv.row(self.slots[k]).to_vec())
    }

    pub fn num_canonical(&self) -> usize {
        self.slots.len()
    }

    pub fn equal(&self, a: &GroupElement, b: &GroupElement) -> Result<bool, HomologyError> {
        Ok(self.reduce(&(a - b))?.is_zero())
    }

    /// For a finite cyclic group of order `N` generated by `g`, the unique
    /// `c` in `[0, N)` with `e = c * g`. `None` if the group is not finite
    /// cyclic or `g` does not generate it.
    pub fn cyclic_coefficient(&self, e: &GroupElement, g: &GroupElement) -> Result<Option<BigInt>, HomologyError> {
        let ce = self.reduce(e)?;
        let cg = self.reduce(g)?;
        if !self.is_cyclic() || !self.is_finite() {
            return Ok(None);
        }
        let Some(order) = self.factors.first() else {
            return Ok(Some(BigInt::zero()));
        };
        let (gv, ev) = (&cg.coords[0], &ce.coords[0]);
        let ext = gv.extended_gcd(order);
        if !ext.gcd.is_one() {
            return Ok(None);
        }
        Ok(Some((ev * ext.x).mod_floor(order)))
    }
}

impl fmt::Display for H1Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "0");
        }
        for (i, d) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " ⊕ ")?;
            }
            if d.is_zero() {
                write!(f, "Z")?;
            } else {
                write!(f, "Z/{d}")?;
            }
        }
        Ok(())
    }
}

/// H1 of the boundary of the 4-manifold obtained by attaching 2-handles
/// along `link`: meridians as generators, one relation per component.
pub fn boundary_h1(link: &FramedLink) -> H1Presentation {
    H1Presentation::new(link.labels().to_vec(), link.matrix().clone())
        .expect("link labels match the matrix size")
}

pub fn reduce_element(p: &H1Presentation, e: &GroupElement) -> Result<Canonical, HomologyError> {
    p.reduce(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;
    use crate::link::{chain_to_link, PlumbingChain};

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn cn_chain_n3() {
        let h = boundary_h1(&chain_to_link(&PlumbingChain::new([-5, -2]).unwrap()));
        assert_eq!(h.invariant_factors(), &[big(9)]);
        assert_eq!(h.to_string(), "Z/9");
    }

    #[test]
    fn bn_surgered_n3() {
        let l = FramedLink::from_rows(&["K1", "K2"], &[vec![0, -3], vec![-3, -4]]).unwrap();
        let h = boundary_h1(&l);
        assert_eq!(h.order(), Some(big(9)));
        assert!(h.is_cyclic());
        // mu2 = -3 mu1 = 6 mu1
        let c = h.cyclic_coefficient(&h.generator(1), &h.generator(0)).unwrap();
        assert_eq!(c, Some(big(6)));
        assert!(h.equal(&h.generator(1), &h.generator(0).scaled(&big(6))).unwrap());
        assert!(h.reduce(&h.zero()).unwrap().is_zero());
    }

    #[test]
    fn lens_chain_n2() {
        let l = chain_to_link(&PlumbingChain::new([1, -1, -2, -2]).unwrap());
        let h = boundary_h1(&l);
        assert_eq!(h.invariant_factors(), &[big(4)]);
        // Independent elimination: nu0 = -nu1, nu2 = 2 nu1, nu3 = 3 nu1.
        let nu1 = h.generator(1);
        for (i, k) in [(0, -1), (2, 2), (3, 3)] {
            assert!(h.equal(&h.generator(i), &nu1.scaled(&big(k))).unwrap());
        }
    }

    #[test]
    fn lens_chain_n3_nu4() {
        let l = chain_to_link(&PlumbingChain::new([1, -1, -2, -2, -3]).unwrap());
        let h = boundary_h1(&l);
        assert_eq!(h.order(), Some(big(9)));
        let c = h.cyclic_coefficient(&h.generator(4), &h.generator(1)).unwrap();
        assert_eq!(c, Some(big(4)));
    }

    #[test]
    fn dimension_mismatch() {
        let l = FramedLink::from_rows(&["A"], &[vec![-4]]).unwrap();
        let h = boundary_h1(&l);
        assert!(matches!(
            h.reduce(&GroupElement::from_i64(&[1, 2])),
            Err(HomologyError::DimensionMismatch { expected: 1, found: 2 })
        ));
    }

    #[test]
    fn free_and_mixed_groups() {
        let l = FramedLink::from_rows(&["A", "B"], &[vec![0, 0], vec![0, 2]]).unwrap();
        let h = boundary_h1(&l);
        assert_eq!(h.to_string(), "Z/2 ⊕ Z");
        assert_eq!(h.order(), None);
        assert!(!h.is_cyclic());
        let e = GroupElement::from_i64(&[5, 3]);
        let c = h.reduce(&e).unwrap();
        assert!(h.equal(&h.from_canonical(c.coords()), &e).unwrap());
        let s3 = FramedLink::from_rows(&["A"], &[vec![1]]).unwrap();
        assert_eq!(boundary_h1(&s3).to_string(), "0");
    }

    #[test]
    fn canonical_generators_roundtrip() {
        let l = FramedLink::from_rows(&["A", "B", "C"], &[vec![2, 1, 0], vec![1, 4, 2], vec![0, 2, 6]]).unwrap();
        let h = boundary_h1(&l);
        assert_eq!(h.order(), Some(l.matrix().det().abs()));
        for k in 0..h.num_canonical() {
            let g = h.canonical_generator(k);
            let c = h.reduce(&g).unwrap();
            for (j, v) in c.coords().iter().enumerate() {
                assert_eq!(v, &if j == k { big(1) } else { big(0) });
            }
        }
    }
}
