//! Exact computations on toric Landau-Ginzburg models.
//!
//! Starting from a Laurent polynomial `phi`, the crate computes the period
//! sequence `a_n = [phi^n]_0`, guesses the Picard-Fuchs operator annihilating
//! its generating series, reads off the symbol, singular points and
//! involution, checks the Minkowski edge criterion on the Newton polytope and
//! evaluates the Apéry limit `b_n / a_n`, recognising it as a rational
//! multiple of a basis constant such as `zeta(3)` or `pi^3/sqrt(3)`.

pub mod apery;
pub mod catalog;
pub mod hpreal;
pub mod laurent;
pub mod linalg;
pub mod periods;
pub mod pfops;
pub mod pipeline;
pub mod poly;
pub mod polytope;

/// Exact rational numbers. Always reduced with a positive denominator.
pub type Rational = num_rational::BigRational;

pub use apery::{AperyResult, SolutionPair};
pub use catalog::CatalogEntry;
pub use hpreal::{Basis, HpReal, RecognizedConstant};
pub use laurent::{ExponentVector, LaurentPolynomial};
pub use periods::PeriodSequence;
pub use pfops::{DifferentialOperator, InvolutionDatum, Recurrence, SingularSet};
pub use poly::UniPoly;
pub use polytope::{Edge, Facet, FacetFrame, LatticePolytope};
