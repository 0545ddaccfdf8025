use std::fmt::Debug;
use std::ops::Neg;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, Signed};

/// Exact field scalar used by the generic polynomial, Bernoulli and
/// cyclotomic code.
///
/// Only implemented for rational types: every verdict in this crate is a
/// congruence, and those have no meaning under rounding.
pub trait ExactScalar: Clone + PartialEq + Debug + Num + Neg<Output = Self> + FromPrimitive {
    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("integer fits the scalar type")
    }
}

impl<I> ExactScalar for Ratio<I>
where
    I: Clone + Integer + Signed + Debug,
    Ratio<I>: FromPrimitive,
{
}
