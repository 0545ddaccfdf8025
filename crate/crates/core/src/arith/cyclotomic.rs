//! Exact arithmetic in `Q(zeta_n) = Q[x] / Phi_n(x)`.
//!
//! Elements are stored in the power basis `1, zeta, ..., zeta^{phi(n)-1}`
//! of a fixed primitive n-th root, so an element is rational exactly when
//! every coordinate past the first vanishes.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::poly::Poly;
use super::scalar::ExactScalar;
use crate::error::{Error, Result};

/// `Phi_n` computed by exact division of `x^n - 1` by `Phi_d` for the
/// proper divisors `d` of `n`.
pub fn cyclotomic_polynomial<T: ExactScalar>(n: u64) -> Poly<T> {
    assert!(n >= 1, "cyclotomic polynomial needs n >= 1");
    let mut memo = HashMap::new();
    cyclo_rec(n, &mut memo)
}

fn cyclo_rec<T: ExactScalar>(n: u64, memo: &mut HashMap<u64, Poly<T>>) -> Poly<T> {
    if let Some(p) = memo.get(&n) {
        return p.clone();
    }
    let mut num = Poly::monomial(T::one(), n as usize);
    num = &num - &Poly::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            let phi_d = cyclo_rec(d, memo);
            let (q, r) = num.div_rem(&phi_d);
            debug_assert!(r.is_zero());
            num = q;
        }
    }
    memo.insert(n, num.clone());
    num
}

/// The field `Q(zeta_n)` with its defining polynomial and a table of
/// reduced powers `zeta^e`, `0 <= e < n`.
pub struct CyclotomicField<T> {
    order: u64,
    modulus: Poly<T>,
    powers: Vec<Vec<T>>,
}

impl<T: ExactScalar> CyclotomicField<T> {
    pub fn new(order: u64) -> Arc<Self> {
        let modulus = cyclotomic_polynomial::<T>(order);
        let degree = modulus.degree().unwrap_or(0);
        let mut powers = Vec::with_capacity(order as usize);
        let mut cur = vec![T::zero(); degree];
        if degree > 0 {
            cur[0] = T::one();
        }
        for _ in 0..order {
            powers.push(cur.clone());
            cur = mul_by_x(&cur, &modulus);
        }
        Arc::new(CyclotomicField {
            order,
            modulus,
            powers,
        })
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// `phi(n)`, the length of every coordinate vector.
    pub fn degree(&self) -> usize {
        self.modulus.degree().unwrap_or(0)
    }

    pub fn modulus(&self) -> &Poly<T> {
        &self.modulus
    }

    fn reduce(&self, coeffs: Vec<T>) -> Vec<T> {
        let deg = self.degree();
        if coeffs.len() <= deg {
            let mut c = coeffs;
            c.resize(deg, T::zero());
            return c;
        }
        let (_, r) = Poly::new(coeffs).div_rem(&self.modulus);
        let mut c = r.into_coeffs();
        c.resize(deg, T::zero());
        c
    }
}

impl<T: fmt::Debug> fmt::Debug for CyclotomicField<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(zeta_{})", self.order)
    }
}

fn mul_by_x<T: ExactScalar>(v: &[T], modulus: &Poly<T>) -> Vec<T> {
    let deg = v.len();
    if deg == 0 {
        return Vec::new();
    }
    // modulus is monic of degree `deg`
    let top = v[deg - 1].clone();
    let mut out = vec![T::zero(); deg];
    for i in (1..deg).rev() {
        out[i] = v[i - 1].clone();
    }
    if !top.is_zero() {
        for (i, o) in out.iter_mut().enumerate() {
            *o = o.clone() - top.clone() * modulus.coeff(i);
        }
    }
    out
}

/// Element of `Q(zeta_n)`.
#[derive(Clone)]
pub struct Cyclotomic<T> {
    field: Arc<CyclotomicField<T>>,
    coords: Vec<T>,
}

impl<T: ExactScalar> Cyclotomic<T> {
    pub fn zero(field: &Arc<CyclotomicField<T>>) -> Self {
        Cyclotomic {
            field: field.clone(),
            coords: vec![T::zero(); field.degree()],
        }
    }

    pub fn one(field: &Arc<CyclotomicField<T>>) -> Self {
        Self::from_scalar(field, T::one())
    }

    /// Embedding of a rational.
    pub fn from_scalar(field: &Arc<CyclotomicField<T>>, c: T) -> Self {
        let mut z = Self::zero(field);
        z.coords[0] = c;
        z
    }

    /// `zeta_n^e`.
    pub fn root_power(field: &Arc<CyclotomicField<T>>, e: u64) -> Self {
        Cyclotomic {
            field: field.clone(),
            coords: field.powers[(e % field.order) as usize].clone(),
        }
    }

    /// `sum_e weights[e] * zeta^e` for a weight vector indexed by exponent
    /// modulo `n`.
    pub fn from_exponent_weights(field: &Arc<CyclotomicField<T>>, weights: &[T]) -> Self {
        assert_eq!(weights.len() as u64, field.order);
        let mut coords = vec![T::zero(); field.degree()];
        for (e, w) in weights.iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            for (c, pw) in coords.iter_mut().zip(&field.powers[e]) {
                if !pw.is_zero() {
                    *c = c.clone() + w.clone() * pw.clone();
                }
            }
        }
        Cyclotomic {
            field: field.clone(),
            coords,
        }
    }

    /// Build from an arbitrary polynomial in `zeta`, reducing modulo `Phi_n`.
    pub fn from_poly(field: &Arc<CyclotomicField<T>>, p: &Poly<T>) -> Self {
        Cyclotomic {
            field: field.clone(),
            coords: field.reduce(p.coeffs().to_vec()),
        }
    }

    pub fn field(&self) -> &Arc<CyclotomicField<T>> {
        &self.field
    }

    pub fn order(&self) -> u64 {
        self.field.order
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.coords.iter().skip(1).all(|c| c.is_zero())
    }

    /// The constant coordinate, if the element is rational.
    pub fn to_scalar(&self) -> Result<T> {
        if self.is_rational() {
            Ok(self.coords.first().cloned().unwrap_or_else(T::zero))
        } else {
            Err(Error::NotRational(format!("{self:?}")))
        }
    }

    pub fn scale(&self, c: &T) -> Self {
        Cyclotomic {
            field: self.field.clone(),
            coords: self.coords.iter().map(|a| a.clone() * c.clone()).collect(),
        }
    }

    fn check_same(&self, other: &Self) {
        assert_eq!(
            self.field.order, other.field.order,
            "cyclotomic operands live in different fields"
        );
    }
}

/// Returns the rational value of `x`, or `NotRational` when a coordinate of
/// index at least one is nonzero.
pub fn cyclo_reduce_rational<T: ExactScalar>(x: &Cyclotomic<T>) -> Result<T> {
    x.to_scalar()
}

impl<T: ExactScalar> PartialEq for Cyclotomic<T> {
    fn eq(&self, other: &Self) -> bool {
        self.field.order == other.field.order && self.coords == other.coords
    }
}

impl<T: ExactScalar> fmt::Debug for Cyclotomic<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclotomic(n={}, {:?})", self.field.order, self.coords)
    }
}

impl<T: ExactScalar> Add for &Cyclotomic<T> {
    type Output = Cyclotomic<T>;
    fn add(self, rhs: &Cyclotomic<T>) -> Cyclotomic<T> {
        self.check_same(rhs);
        Cyclotomic {
            field: self.field.clone(),
            coords: self
                .coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }
}

impl<T: ExactScalar> Sub for &Cyclotomic<T> {
    type Output = Cyclotomic<T>;
    fn sub(self, rhs: &Cyclotomic<T>) -> Cyclotomic<T> {
        self.check_same(rhs);
        Cyclotomic {
            field: self.field.clone(),
            coords: self
                .coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }
}

impl<T: ExactScalar> Mul for &Cyclotomic<T> {
    type Output = Cyclotomic<T>;
    fn mul(self, rhs: &Cyclotomic<T>) -> Cyclotomic<T> {
        self.check_same(rhs);
        let deg = self.field.degree();
        if deg == 0 {
            return self.clone();
        }
        let mut prod = vec![T::zero(); 2 * deg - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coords.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] = prod[i + j].clone() + a.clone() * b.clone();
                }
            }
        }
        Cyclotomic {
            field: self.field.clone(),
            coords: self.field.reduce(prod),
        }
    }
}

impl<T: ExactScalar> Neg for &Cyclotomic<T> {
    type Output = Cyclotomic<T>;
    fn neg(self) -> Cyclotomic<T> {
        Cyclotomic {
            field: self.field.clone(),
            coords: self.coords.iter().map(|c| -c.clone()).collect(),
        }
    }
}

impl<T: ExactScalar> Add for Cyclotomic<T> {
    type Output = Cyclotomic<T>;
    fn add(self, rhs: Cyclotomic<T>) -> Cyclotomic<T> {
        &self + &rhs
    }
}

impl<T: ExactScalar> Sub for Cyclotomic<T> {
    type Output = Cyclotomic<T>;
    fn sub(self, rhs: Cyclotomic<T>) -> Cyclotomic<T> {
        &self - &rhs
    }
}

impl<T: ExactScalar> Mul for Cyclotomic<T> {
    type Output = Cyclotomic<T>;
    fn mul(self, rhs: Cyclotomic<T>) -> Cyclotomic<T> {
        &self * &rhs
    }
}
