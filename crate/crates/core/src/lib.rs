//! Exact algebra for finitely presented partial exponential fields.
//!
//! The lower layers (`poly`, `groebner`, `ideal`, `matrix`) are generic over
//! the scalar type; the aliases below fix the types used by the higher-level
//! checkers.

pub mod error;
pub mod scalar;
pub mod poly;
pub mod groebner;
pub mod ideal;
pub mod matrix;
pub mod enumerate;
pub mod verdict;
pub mod gamma;
pub mod variety;
pub mod mordell;
pub mod case2;

pub use error::{Error, Result};
pub use groebner::{set_default_budget, BaseOrder, Budget, GroebnerBasis, TermOrder};
pub use ideal::{Dimension, Ideal};
pub use matrix::{bezout, Matrix, Smith};
pub use poly::{parse_poly, LaurentPoly};
pub use scalar::{Field, IntScalar};
pub use verdict::Verdict;
pub use gamma::{Flag, GammaConfig, GammaWitness, SubspaceSpec};
pub use variety::{coset_normal_form, AVariety, CosetForm, FreeWitness};
pub use case2::{derive_beta_constraint, solve_permutation, support, translation_generator, FunctionalEquation};
pub use mordell::{find_cosets_bounded, verify_decomposition, ConfigUnits, Coset, CosetDecomposition, FiniteRankGroup, RadicalField, UnitGroupField};

pub type Rational = num_rational::BigRational;
pub type Poly = LaurentPoly<Rational>;
pub type QIdeal = Ideal<Rational>;
pub type ZMatrix = Matrix<i64>;
pub type QMatrix = Matrix<Rational>;
