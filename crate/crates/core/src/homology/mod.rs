//! First homology of surgery boundaries.
//!
//! For a framed link `L` with linking matrix `A`, the boundary of the
//! 4-manifold obtained by attaching 2-handles along `L` has
//! `H1 = Z^n / rowspace(A)`, generated by the meridians with one relation per
//! component. Elements are compared through Smith normal form coordinates.

mod group;
mod iso;
mod snf;

use thiserror::Error;

pub use group::{boundary_h1, reduce_element, Canonical, GroupElement, H1Presentation};
pub use iso::{verify_iso, BijectionFailure, GeneratorMap, Verdict};
pub use snf::{smith_normal_form, Snf};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomologyError {
    #[error("expected {expected} coefficients, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("map is not an isomorphism")]
    NotIsomorphism,
}
