use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::group::{Canonical, GroupElement, H1Presentation};
use super::snf::{smith_normal_form, Snf};
use super::HomologyError;
use crate::matrix::IntMatrix;

/// A homomorphism candidate given by the images of the source generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorMap {
    pub source: H1Presentation,
    pub target: H1Presentation,
    pub images: Vec<GroupElement>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BijectionFailure {
    /// A nonzero source element (over source generators) mapping to zero.
    NotInjective(GroupElement),
    /// A target element (over target generators) outside the image.
    NotSurjective(GroupElement),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Iso,
    NotWellDefined { relation: usize, residue: Canonical },
    NotBijective(BijectionFailure),
}

impl Verdict {
    pub fn is_iso(&self) -> bool {
        matches!(self, Verdict::Iso)
    }
}

/// The induced map on canonical coordinates, stacked over the target's
/// torsion relations.
struct Induced {
    /// Number of source canonical coordinates.
    s: usize,
    snf: Snf,
}

impl Induced {
    /// Solves `u * S = v`; returns `u` if `v` lies in the row lattice.
    fn solve(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let w = self.snf.v.left_apply(v);
        let diag = self.snf.diagonal();
        let mut u_prime = vec![BigInt::zero(); self.snf.u.rows()];
        for (k, wk) in w.iter().enumerate() {
            if k < self.snf.rank {
                let (q, r) = wk.div_mod_floor(&diag[k]);
                if !r.is_zero() {
                    return None;
                }
                u_prime[k] = q;
            } else if !wk.is_zero() {
                return None;
            }
        }
        Some(self.snf.u.left_apply(&u_prime))
    }
}

impl GeneratorMap {
    pub fn new(source: H1Presentation, target: H1Presentation, images: Vec<GroupElement>) -> Result<Self, HomologyError> {
        if images.len() != source.num_generators() {
            return Err(HomologyError::DimensionMismatch {
                expected: source.num_generators(),
                found: images.len(),
            });
        }
        for img in &images {
            if img.len() != target.num_generators() {
                return Err(HomologyError::DimensionMismatch {
                    expected: target.num_generators(),
                    found: img.len(),
                });
            }
        }
        Ok(GeneratorMap { source, target, images })
    }

    pub fn identity(p: &H1Presentation) -> Self {
        let images = (0..p.num_generators()).map(|i| p.generator(i)).collect();
        GeneratorMap {
            source: p.clone(),
            target: p.clone(),
            images,
        }
    }

    /// Image of a source element, over the target generators.
    pub fn apply(&self, e: &GroupElement) -> Result<GroupElement, HomologyError> {
        if e.len() != self.source.num_generators() {
            return Err(HomologyError::DimensionMismatch {
                expected: self.source.num_generators(),
                found: e.len(),
            });
        }
        let mut out = self.target.zero();
        for (c, img) in e.coeffs().iter().zip(&self.images) {
            out.add_scaled(img, c);
        }
        Ok(out)
    }

    fn induced(&self) -> Induced {
        let s = self.source.num_canonical();
        let t = self.target.num_canonical();
        let mut rows = Vec::with_capacity(s + t);
        for k in 0..s {
            let img = self
                .apply(&self.source.canonical_generator(k))
                .expect("canonical generator has source length");
            let c = self.target.reduce(&img).expect("image has target length");
            rows.push(c.coords().to_vec());
        }
        for (k, d) in self.target.invariant_factors().iter().enumerate() {
            if !d.is_zero() {
                let mut row = vec![BigInt::zero(); t];
                row[k] = d.clone();
                rows.push(row);
            }
        }
        let stacked = if rows.is_empty() {
            IntMatrix::zeros(0, t)
        } else {
            IntMatrix::from_rows(&rows)
        };
        Induced {
            s,
            snf: smith_normal_form(&stacked),
        }
    }

    /// Source element built from the leading `s` entries of a lattice solution.
    fn source_part(&self, u: &[BigInt], s: usize) -> GroupElement {
        let mut e = self.source.zero();
        for (k, x) in u.iter().take(s).enumerate() {
            e.add_scaled(&self.source.canonical_generator(k), x);
        }
        e
    }

    /// Inverse map, provided this map is an isomorphism.
    pub fn inverse(&self) -> Result<GeneratorMap, HomologyError> {
        if !verify_iso(self).is_iso() {
            return Err(HomologyError::NotIsomorphism);
        }
        let ind = self.induced();
        let mut images = Vec::with_capacity(self.target.num_generators());
        for j in 0..self.target.num_generators() {
            let c = self.target.reduce(&self.target.generator(j))?;
            let u = ind.solve(c.coords()).ok_or(HomologyError::NotIsomorphism)?;
            images.push(self.source_part(&u, ind.s));
        }
        Ok(GeneratorMap {
            source: self.target.clone(),
            target: self.source.clone(),
            images,
        })
    }

    /// `other ∘ self`
    pub fn then(&self, other: &GeneratorMap) -> Result<GeneratorMap, HomologyError> {
        if other.source.num_generators() != self.target.num_generators() {
            return Err(HomologyError::DimensionMismatch {
                expected: self.target.num_generators(),
                found: other.source.num_generators(),
            });
        }
        let images = self
            .images
            .iter()
            .map(|img| other.apply(img))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(GeneratorMap {
            source: self.source.clone(),
            target: other.target.clone(),
            images,
        })
    }
}

pub fn verify_iso(map: &GeneratorMap) -> Verdict {
    let rel = map.source.relations();
    for r in 0..rel.rows() {
        let img = map
            .apply(&GroupElement::new(rel.row(r).to_vec()))
            .expect("relation has source length");
        let residue = map.target.reduce(&img).expect("image has target length");
        if !residue.is_zero() {
            return Verdict::NotWellDefined { relation: r, residue };
        }
    }

    let ind = map.induced();
    let t = map.target.num_canonical();

    let full = ind.snf.rank == t && ind.snf.diagonal().iter().take(t).all(One::is_one);
    if !full {
        let missed = (0..t)
            .map(|j| {
                let mut v = vec![BigInt::zero(); t];
                v[j] = BigInt::one();
                v
            })
            .find(|v| ind.solve(v).is_none())
            .expect("a proper sublattice misses a unit vector");
        return Verdict::NotBijective(BijectionFailure::NotSurjective(map.target.from_canonical(&missed)));
    }

    let factors = map.source.invariant_factors();
    for k in ind.snf.rank..ind.snf.u.rows() {
        let row = ind.snf.u.row(k);
        let trivial = row.iter().take(ind.s).zip(factors).all(|(x, d)| {
            if d.is_zero() {
                x.is_zero()
            } else {
                x.is_multiple_of(d)
            }
        });
        if !trivial {
            return Verdict::NotBijective(BijectionFailure::NotInjective(map.source_part(row, ind.s)));
        }
    }
    Verdict::Iso
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::boundary_h1;
    use crate::link::{chain_to_link, FramedLink, PlumbingChain};

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn bn(n: i64) -> H1Presentation {
        boundary_h1(&FramedLink::from_rows(&["K1", "K2"], &[vec![0, -n], vec![-n, -n - 1]]).unwrap())
    }

    fn lens(n: i64) -> H1Presentation {
        let mut f = vec![1, -1];
        f.extend(std::iter::repeat(-2).take(n as usize - 1));
        f.push(-n);
        boundary_h1(&chain_to_link(&PlumbingChain::new(f).unwrap()))
    }

    fn mu_nu(n: i64) -> GeneratorMap {
        let (src, tgt) = (bn(n), lens(n));
        let last = tgt.generator(n as usize + 1);
        let images = vec![last.clone(), &tgt.generator(1) - &last];
        GeneratorMap::new(src, tgt, images).unwrap()
    }

    #[test]
    fn mu_nu_is_iso() {
        for n in 2..=8 {
            assert_eq!(verify_iso(&mu_nu(n)), Verdict::Iso, "n = {n}");
        }
    }

    #[test]
    fn identity_is_iso() {
        let p = boundary_h1(&chain_to_link(&PlumbingChain::new([-5, -2]).unwrap()));
        assert!(verify_iso(&GeneratorMap::identity(&p)).is_iso());
    }

    #[test]
    fn doubling_on_z4_is_not_bijective() {
        let p = boundary_h1(&FramedLink::from_rows(&["A"], &[vec![4]]).unwrap());
        let m = GeneratorMap::new(p.clone(), p.clone(), vec![p.generator(0).scaled(&big(2))]).unwrap();
        match verify_iso(&m) {
            Verdict::NotBijective(BijectionFailure::NotSurjective(e)) => {
                // the missed element is odd, so not a multiple of 2
                let c = p.reduce(&e).unwrap();
                assert!(c.coords()[0].is_odd());
            }
            other => panic!("unexpected verdict {other:?}"),
        }
    }

    #[test]
    fn ill_defined_map_is_reported() {
        let src = boundary_h1(&FramedLink::from_rows(&["A"], &[vec![3]]).unwrap());
        let tgt = boundary_h1(&FramedLink::from_rows(&["B"], &[vec![9]]).unwrap());
        let m = GeneratorMap::new(src, tgt.clone(), vec![tgt.generator(0)]).unwrap();
        assert!(matches!(verify_iso(&m), Verdict::NotWellDefined { relation: 0, .. }));
    }

    #[test]
    fn non_injective_into_bigger_group() {
        // Z/2 x Z/2 -> Z/4 cannot be injective; A -> 2B and C -> 2B.
        let src = boundary_h1(&FramedLink::from_rows(&["A", "C"], &[vec![2, 0], vec![0, 2]]).unwrap());
        let tgt = boundary_h1(&FramedLink::from_rows(&["B"], &[vec![4]]).unwrap());
        let two_b = tgt.generator(0).scaled(&big(2));
        let m = GeneratorMap::new(src.clone(), tgt, vec![two_b.clone(), two_b]).unwrap();
        // surjectivity fails first
        assert!(matches!(verify_iso(&m), Verdict::NotBijective(BijectionFailure::NotSurjective(_))));

        // Z/2 + Z/3 -> Z/3 via A -> 0, C -> B: onto but not injective.
        let src = boundary_h1(&FramedLink::from_rows(&["A", "C"], &[vec![2, 0], vec![0, 3]]).unwrap());
        let tgt = boundary_h1(&FramedLink::from_rows(&["B"], &[vec![3]]).unwrap());
        let m = GeneratorMap::new(src.clone(), tgt.clone(), vec![tgt.zero(), tgt.generator(0)]).unwrap();
        match verify_iso(&m) {
            Verdict::NotBijective(BijectionFailure::NotInjective(e)) => {
                assert!(!src.reduce(&e).unwrap().is_zero());
                assert!(tgt.reduce(&m.apply(&e).unwrap()).unwrap().is_zero());
            }
            other => panic!("unexpected verdict {other:?}"),
        }
    }

    #[test]
    fn inverse_composes_to_identity() {
        for n in 2..=6 {
            let m = mu_nu(n);
            let inv = m.inverse().unwrap();
            assert!(verify_iso(&inv).is_iso());
            let round = m.then(&inv).unwrap();
            for i in 0..m.source.num_generators() {
                let g = m.source.generator(i);
                assert!(m.source.equal(&round.apply(&g).unwrap(), &g).unwrap());
            }
        }
    }
}
