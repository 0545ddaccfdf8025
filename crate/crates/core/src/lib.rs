//! Exact finite-level verification of the transfer congruence between the
//! abelian pseudomeasures of `Q` and of a cyclic degree-`p` totally real
//! field `L`, together with the computable ingredients it rests on:
//! partial zeta values at negative integers, the Delta operators, group-ring
//! approximations of the pseudomeasures, trace-ideal algebra over synthetic
//! Galois setups, and formal q-expansion congruences.
//!
//! All arithmetic is exact. The generic building blocks (`Poly`,
//! `Cyclotomic`, Bernoulli tables) are parameterized by an [`ExactScalar`];
//! the pipeline uses the big-rational instantiations aliased below.

pub mod arith;
pub mod dirichlet;
pub mod error;
pub mod group;
pub mod harness;
pub mod numberfield;
pub mod pseudomeasure;
pub mod qexp;
pub mod sigma;
pub mod zeta;

pub use arith::{Cyclotomic, CyclotomicField, ExactScalar, PValuation, Poly};
pub use error::{Error, Result};

/// Arbitrary-precision rational number, always reduced with positive
/// denominator.
pub type Rational = num_rational::BigRational;
/// Element of a cyclotomic field over the big rationals.
pub type CyclotomicNumber = Cyclotomic<Rational>;
/// Polynomial with big-rational coefficients.
pub type RationalPoly = Poly<Rational>;
/// Machine-width rational, handy for small exact computations.
pub type SmallRational = num_rational::Ratio<i128>;
