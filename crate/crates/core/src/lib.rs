//! Exact rank analysis of bipartite matrices under partial transposition.
//!
//! For `M ∈ M_{m1,n1} ⊗ M_{m2,n2}` with Schmidt rank `Sr(M)` the partial
//! transpose satisfies `rank(M^Γ) ≤ Sr(M)·rank(M)`. This crate computes all
//! three quantities over ℚ, recognizes the families where the bound is
//! attained, builds local-equivalence witnesses to their normal forms, and
//! ships a property oracle that searches for counterexamples.

pub mod analysis;
pub mod bipartite;
pub mod canonical;
pub mod document;
pub mod error;
pub mod linalg;
pub mod oracle;

pub use bipartite::{BipartiteMatrix, BipartiteShape, LocalEquivWitness, SchmidtDecomposition, System};
pub use error::{Error, Result};
pub use linalg::*;

/// The scalar field: arbitrary-precision rationals.
pub type Rational = num_rational::BigRational;
