//! Exact invariants of surgery diagrams around the rational blow-up of a
//! linear plumbing, plus floating-point checks of the accompanying
//! action-angle coordinate models.

pub mod fixtures;
pub mod gamma;
pub mod homology;
pub mod kirby;
pub mod legendrian;
pub mod link;
pub mod numerics;
pub mod matrix;
pub mod spin;
pub mod template;
pub mod text;
pub mod verify;

pub use link::{chain_to_link, cf_value, neg_cf_expand, ContinuedFraction, FramedLink, LinkError, PlumbingChain};
pub use matrix::IntMatrix;
