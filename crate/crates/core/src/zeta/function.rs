use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::level::{LevelData, Side};
use crate::arith::{p_valuation, PValuation};
use crate::error::{Error, Result};
use crate::Rational;

/// Rational-valued function on the classes of one side of a level.
///
/// Values are indexed like `level.classes(side).residues()`. The evenness
/// (invariance under the class of `-1`) and `p`-integrality flags are
/// computed at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocallyConstantFn {
    side: Side,
    modulus: u64,
    residues: Vec<u64>,
    values: Vec<Rational>,
    even: bool,
    p_integral: bool,
}

impl LocallyConstantFn {
    pub fn new(level: &LevelData, side: Side, values: Vec<Rational>) -> Result<Self> {
        let classes = level.classes(side);
        if values.len() != classes.len() {
            return Err(Error::FlagViolation(format!(
                "expected {} values, got {}",
                classes.len(),
                values.len()
            )));
        }
        let residues = classes.residues().to_vec();
        let m = level.modulus();
        let even = residues.iter().zip(&values).all(|(&x, v)| {
            let neg = classes.index_of(m - x).expect("-1 lies in every level group");
            values[neg] == *v
        });
        let p = level.p();
        let p_integral = values
            .iter()
            .all(|v| p_valuation(v, p) >= PValuation::Finite(0));
        Ok(LocallyConstantFn { side, modulus: m, residues, values, even, p_integral })
    }

    pub fn from_map(level: &LevelData, side: Side, map: &BTreeMap<u64, Rational>) -> Result<Self> {
        let classes = level.classes(side);
        for &x in map.keys() {
            if !classes.contains(x % level.modulus()) {
                return Err(Error::FlagViolation(format!("{x} is not a class of the {side}-side level")));
            }
        }
        let values = classes
            .residues()
            .iter()
            .map(|x| map.get(x).cloned().unwrap_or_else(Rational::zero))
            .collect();
        Self::new(level, side, values)
    }

    pub fn zero(level: &LevelData, side: Side) -> Self {
        Self::constant(level, side, Rational::zero())
    }

    pub fn constant(level: &LevelData, side: Side, c: Rational) -> Self {
        let n = level.classes(side).len();
        Self::new(level, side, vec![c; n]).expect("length matches")
    }

    /// Indicator `delta^(x)` of a single class.
    pub fn indicator(level: &LevelData, side: Side, x: u64) -> Result<Self> {
        let mut map = BTreeMap::new();
        map.insert(x % level.modulus(), Rational::one());
        Self::from_map(level, side, &map)
    }

    /// `delta^(x) + delta^(-x)`.
    pub fn even_indicator(level: &LevelData, side: Side, x: u64) -> Result<Self> {
        let m = level.modulus();
        let a = Self::indicator(level, side, x)?;
        let b = Self::indicator(level, side, m - x % m)?;
        Ok(a.add(&b))
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn residues(&self) -> &[u64] {
        &self.residues
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn is_even(&self) -> bool {
        self.even
    }

    pub fn is_p_integral(&self) -> bool {
        self.p_integral
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    pub fn value(&self, x: u64) -> Rational {
        match self.residues.binary_search(&(x % self.modulus)) {
            Ok(i) => self.values[i].clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &Rational)> {
        self.residues.iter().copied().zip(&self.values)
    }

    fn rebuild(&self, values: Vec<Rational>, p: u64) -> Self {
        let mut out = self.clone();
        out.values = values;
        let m = self.modulus;
        out.even = self.residues.iter().zip(&out.values).all(|(&x, v)| {
            let neg = self.residues.binary_search(&(m - x)).expect("-1 lies in every level group");
            out.values[neg] == *v
        });
        if p > 0 {
            out.p_integral = out.values.iter().all(|v| p_valuation(v, p) >= PValuation::Finite(0));
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.residues, other.residues, "functions on different levels");
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        let mut out = self.rebuild(values, 0);
        out.p_integral = self.p_integral && other.p_integral;
        out
    }

    pub fn scale(&self, c: &Rational, p: u64) -> Self {
        self.rebuild(self.values.iter().map(|v| v * c).collect(), p)
    }

    /// `x -> self(g x)`.
    pub fn shift(&self, level: &LevelData, g: u64) -> Self {
        let values = self.residues.iter().map(|&x| self.value(level.mul(g, x))).collect();
        self.rebuild(values, level.p())
    }

    /// Pointwise product with an arbitrary function of the class.
    pub fn map_values(&self, level: &LevelData, f: impl Fn(u64, &Rational) -> Rational) -> Self {
        let values = self.iter().map(|(x, v)| f(x, v)).collect();
        self.rebuild(values, level.p())
    }

    /// Precomposition of an L-side function with the transfer, giving a
    /// Q-side function.
    pub fn compose_transfer(&self, level: &LevelData) -> Result<Self> {
        if self.side != Side::L {
            return Err(Error::FlagViolation("transfer precomposition needs an L-side function".into()));
        }
        let values = level
            .g_level()
            .residues()
            .iter()
            .map(|&x| self.value(level.transfer(x)))
            .collect();
        Self::new(level, Side::Q, values)
    }
}

/// The functions `delta^(x) + delta^(-x)`, one per pair `{x, -x}` of
/// classes, ordered by the smaller representative.
pub fn even_orbit_basis(level: &LevelData, side: Side) -> Vec<LocallyConstantFn> {
    let m = level.modulus();
    level
        .classes(side)
        .residues()
        .iter()
        .copied()
        .filter(|&x| x < m - x)
        .map(|x| LocallyConstantFn::even_indicator(level, side, x).expect("classes are valid"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn flags_and_basis() {
        let level = LevelData::minimal(3, 7, 2).unwrap();
        let basis = even_orbit_basis(&level, Side::L);
        assert_eq!(basis.len(), 6);
        assert!(basis.iter().all(|e| e.is_even() && e.is_p_integral()));
        let d = LocallyConstantFn::indicator(&level, Side::Q, 2).unwrap();
        assert!(!d.is_even());
        let third = d.scale(&Rational::new(BigInt::from(1), BigInt::from(3)), 3);
        assert!(!third.is_p_integral());
        assert!(LocallyConstantFn::indicator(&level, Side::L, 2).is_err());
        // shift by g moves the indicator of x to g^{-1} x
        let shifted = d.shift(&level, 2);
        assert_eq!(shifted.value(1), Rational::one());
        let pulled = basis[0].compose_transfer(&level).unwrap();
        assert_eq!(pulled.side(), Side::Q);
        assert!(pulled.is_even());
    }
}
