//! Exact arithmetic in graded nilpotent Lie groups, their lattices and
//! presentations, together with verified constructions of fillings of
//! identity words.
//!
//! The algebraic core is generic over [`Scalar`]; the concrete aliases below
//! fix exact rationals, which every filling and lattice computation uses.

pub mod algebra;
pub mod bch;
pub mod certificate;
pub mod error;
pub mod fillers;
pub mod group;
pub mod harness;
pub mod linalg;
pub mod presentations;
pub mod words;
pub mod scalar;

pub use algebra::{GradedLieAlgebra, LieVector};
pub use error::{Error, Result};
pub use scalar::{ExactScalar, Scalar};

/// Exact rational scalar.
pub type Q = num_rational::BigRational;
/// Graded Lie algebra over exact rationals.
pub type Algebra = GradedLieAlgebra<Q>;
/// Lie algebra vector over exact rationals.
pub type Vector = LieVector<Q>;
/// Graded Lie algebra over `f64`, for quick numerical exploration.
pub type AlgebraF64 = GradedLieAlgebra<f64>;
/// Group element over exact rationals.
pub type Element = group::GroupElement<Q>;
