//! Exact computation in finite affine geometry over `F_q`.
//!
//! The crate covers finite field arithmetic, canonical subspace and flat
//! enumeration, polynomials with Hasse derivatives and multiplicities,
//! min-entropy of linear projections, Furstenberg set verification and
//! extremal search, and point-flat incidence audits. Every comparison is
//! made in exact integer or rational arithmetic.

pub mod budget;
pub mod entropy;
pub mod error;
pub mod exact;
pub mod furstenberg;
pub mod geometry;
pub mod gf;
pub mod incidence;
pub mod polymethod;
pub mod selftest;

pub use budget::Budget;
pub use error::{Error, Result};
pub use gf::{Field, FieldElement};
pub use geometry::{Flat, Point, PointSet, Space, Subspace};
