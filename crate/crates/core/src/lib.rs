//! Finite quasiorders and their half-space structure.
//!
//! A quasiorder (preorder) is a reflexive, transitive relation. A
//! *half-space* is a quasiorder whose complement, together with the
//! diagonal, is again a quasiorder. This crate detects, decomposes and
//! builds half-spaces, computes half-space and order dimension exactly,
//! transforms half-space realizers into linear realizers, classifies
//! direct products, and ships brute-force enumeration oracles to check all
//! of it.

pub mod dimension;
pub mod error;
pub mod extension;
pub mod format;
pub mod halfspace;
pub mod oracle;
pub mod order;
pub mod product;
pub mod relation;

pub use error::{Error, Result, Violation};
pub use halfspace::{BoxDecomposition, BoxKind, HalfSpace, HalfSpaceBox, KernelPresentation};
pub use order::{Equivalence, LinearOrder, PartialOrder, Quasiorder, QuotientMap};
pub use relation::{GroundSet, Properties, Relation};
