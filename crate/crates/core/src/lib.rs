//! Exact Newton–Okounkov bodies at desk scale.
//!
//! The crate builds graded value semigroups of finite-dimensional spaces of
//! functions on small variety models (tori, affine spaces, parametrized
//! curves), turns them into convex bodies, and checks the counting formulas
//! and convex-geometric inequalities that tie those bodies to root counts.
//!
//! Everything algebraic is exact: coefficients are [`num_rational::BigRational`],
//! lattices are handled through Smith normal forms, and volumes and mixed
//! volumes are rationals. Floating point appears only in metric quantities
//! (diameters, inradii, boundary measures) and in asymptotic fits.

pub mod error;
pub mod exact;
pub mod inequalities;
pub mod lattice;
pub mod laurent;
pub mod okounkov;
pub mod polytope;
pub mod sagbi;
pub mod semigroup;
pub mod valuation;

pub use error::{Error, Result};
pub use exact::{IntegerMatrix, RationalMatrix};
pub use laurent::{ExponentVector, FunctionSubspace, LaurentPolynomial, RationalFunction, VarietyModel};
pub use polytope::Polytope;
pub use semigroup::GradedSemigroup;
pub use valuation::TermOrder;
