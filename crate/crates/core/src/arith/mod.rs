//! Exact arithmetic substrate: scalars, polynomials, Bernoulli polynomials,
//! cyclotomic fields and p-adic valuations.

pub mod bernoulli;
pub mod cyclotomic;
pub mod ntheory;
pub mod padic;
pub mod poly;
pub mod scalar;

pub use bernoulli::{bernoulli_numbers, bernoulli_poly, BernoulliTable};
pub use cyclotomic::{cyclo_reduce_rational, cyclotomic_polynomial, Cyclotomic, CyclotomicField};
pub use padic::{p_valuation, rational_to_residue, PValuation};
pub use poly::Poly;
pub use scalar::ExactScalar;
