use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::Rational;

/// p-adic valuation of a rational; `Infinite` is the valuation of zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PValuation {
    Finite(i64),
    Infinite,
}

impl PValuation {
    pub fn is_infinite(&self) -> bool {
        matches!(self, PValuation::Infinite)
    }

    /// `true` when the valuation is at least `n`.
    pub fn at_least(&self, n: i64) -> bool {
        match self {
            PValuation::Infinite => true,
            PValuation::Finite(v) => *v >= n,
        }
    }
}

impl Ord for PValuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (PValuation::Infinite, PValuation::Infinite) => Ordering::Equal,
            (PValuation::Infinite, _) => Ordering::Greater,
            (_, PValuation::Infinite) => Ordering::Less,
            (PValuation::Finite(a), PValuation::Finite(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for PValuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for PValuation {
    type Output = PValuation;
    fn add(self, rhs: PValuation) -> PValuation {
        match (self, rhs) {
            (PValuation::Finite(a), PValuation::Finite(b)) => PValuation::Finite(a + b),
            _ => PValuation::Infinite,
        }
    }
}

impl fmt::Display for PValuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PValuation::Finite(v) => write!(f, "{v}"),
            PValuation::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for PValuation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            PValuation::Finite(v) => s.serialize_i64(*v),
            PValuation::Infinite => s.serialize_str("inf"),
        }
    }
}

fn int_valuation<I: Integer + Clone + FromPrimitive>(mut n: I, p: u64) -> i64 {
    let p = I::from_u64(p).expect("prime fits the integer type");
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// Exact p-adic valuation of a rational number.
pub fn p_valuation<I>(x: &Ratio<I>, p: u64) -> PValuation
where
    I: Integer + Clone + FromPrimitive,
{
    if x.numer().is_zero() {
        return PValuation::Infinite;
    }
    PValuation::Finite(int_valuation(x.numer().clone(), p) - int_valuation(x.denom().clone(), p))
}

/// Image of a p-integral rational in `Z / p^m`.
pub fn rational_to_residue(x: &Rational, p: u64, m: u32) -> Result<u64> {
    let modulus = BigInt::from(p).pow(m);
    if m == 0 {
        return Ok(0);
    }
    if x.denom().mod_floor(&BigInt::from(p)).is_zero() {
        return Err(Error::NotIntegral(x.to_string()));
    }
    let den = x.denom().mod_floor(&modulus);
    let inv = den
        .modinv(&modulus)
        .ok_or_else(|| Error::NotIntegral(x.to_string()))?;
    let r = (x.numer().mod_floor(&modulus) * inv).mod_floor(&modulus);
    Ok(r.to_u64().expect("residue below p^m fits u64"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn examples() {
        assert_eq!(p_valuation(&r(9, 2), 3), PValuation::Finite(2));
        assert_eq!(p_valuation(&r(0, 1), 3), PValuation::Infinite);
        // -52/7 = -(2^2 * 13) / 7
        assert_eq!(p_valuation(&r(-52, 7), 3), PValuation::Finite(0));
        assert_eq!(p_valuation(&r(5, 27), 3), PValuation::Finite(-3));
    }

    #[test]
    fn residues() {
        assert_eq!(rational_to_residue(&r(1, 2), 3, 2).unwrap(), 5);
        assert_eq!(rational_to_residue(&r(-1, 1), 3, 2).unwrap(), 8);
        assert!(rational_to_residue(&r(1, 3), 3, 2).is_err());
        assert_eq!(rational_to_residue(&r(7, 5), 3, 0).unwrap(), 0);
    }

    #[test]
    fn ordering() {
        assert!(PValuation::Infinite > PValuation::Finite(100));
        assert!(PValuation::Finite(-1) < PValuation::Finite(0));
        assert!(PValuation::Infinite.at_least(5));
    }

    proptest! {
        #[test]
        fn multiplicative(a in -500i64..500, b in 1i64..500, c in -500i64..500, d in 1i64..500,
                          p in prop::sample::select(vec![3u64, 5, 7, 11])) {
            let x = r(a, b);
            let y = r(c, d);
            prop_assert_eq!(p_valuation(&(x.clone() * y.clone()), p), p_valuation(&x, p) + p_valuation(&y, p));
        }
    }
}
