use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::ser::{Serialize, SerializeStruct, Serializer};

/// Element of `(Z/p^m)[A]` for a finite set of group labels `A`.
///
/// Coefficients are stored reduced, in the order of the sorted labels.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupRingElement {
    p: u64,
    exp: u32,
    modulus: u64,
    labels: Arc<Vec<u64>>,
    coeffs: Vec<u64>,
}

impl GroupRingElement {
    pub fn zero(p: u64, exp: u32, labels: Arc<Vec<u64>>) -> Self {
        debug_assert!(labels.windows(2).all(|w| w[0] < w[1]));
        let n = labels.len();
        GroupRingElement { p, exp, modulus: p.pow(exp), labels, coeffs: vec![0; n] }
    }

    pub fn from_coeffs(p: u64, exp: u32, labels: Arc<Vec<u64>>, coeffs: Vec<i64>) -> Self {
        assert_eq!(labels.len(), coeffs.len());
        let mut out = Self::zero(p, exp, labels);
        let m = out.modulus as i64;
        out.coeffs = coeffs.into_iter().map(|c| c.rem_euclid(m) as u64).collect();
        out
    }

    /// `c * [x]`.
    pub fn monomial(p: u64, exp: u32, labels: Arc<Vec<u64>>, x: u64, c: i64) -> Self {
        let mut out = Self::zero(p, exp, labels);
        out.add_at(x, c);
        out
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Coefficients live in `Z/p^exp`.
    pub fn exp(&self) -> u32 {
        self.exp
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn labels(&self) -> &Arc<Vec<u64>> {
        &self.labels
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn index_of(&self, x: u64) -> Option<usize> {
        self.labels.binary_search(&x).ok()
    }

    pub fn coeff(&self, x: u64) -> u64 {
        self.index_of(x).map_or(0, |i| self.coeffs[i])
    }

    pub fn set(&mut self, x: u64, c: u64) {
        let i = self.index_of(x).expect("label outside the group");
        self.coeffs[i] = c % self.modulus;
    }

    pub fn add_at(&mut self, x: u64, c: i64) {
        let i = self.index_of(x).expect("label outside the group");
        let m = self.modulus as i128;
        self.coeffs[i] = ((self.coeffs[i] as i128 + c as i128).rem_euclid(m)) as u64;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    fn check_compatible(&self, other: &Self) {
        assert_eq!(self.modulus, other.modulus, "different coefficient rings");
        assert_eq!(self.labels, other.labels, "different groups");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let mut out = self.clone();
        for (c, o) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *c = (*c + o) % self.modulus;
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let mut out = self.clone();
        for (c, o) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *c = (*c + self.modulus - o) % self.modulus;
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self::zero(self.p, self.exp, self.labels.clone()).sub(self)
    }

    pub fn scale(&self, c: i64) -> Self {
        let m = self.modulus as i128;
        let mut out = self.clone();
        for x in out.coeffs.iter_mut() {
            *x = ((*x as i128 * c as i128).rem_euclid(m)) as u64;
        }
        out
    }

    /// Reduction `Z/p^exp -> Z/p^new_exp`.
    pub fn reduce(&self, new_exp: u32) -> Self {
        assert!(new_exp <= self.exp);
        let mut out = Self::zero(self.p, new_exp, self.labels.clone());
        for (c, &x) in out.coeffs.iter_mut().zip(&self.coeffs) {
            *c = x % out.modulus;
        }
        out
    }

    /// Every coefficient is divisible by `p`.
    pub fn divisible_by_p(&self) -> bool {
        self.coeffs.iter().all(|&c| c % self.p == 0)
    }

    /// Sum of the coefficient values mapped through `f`, as a new element
    /// over `labels` (pushforward along `f`).
    pub fn pushforward(&self, labels: Arc<Vec<u64>>, f: impl Fn(u64) -> u64) -> Self {
        let mut out = Self::zero(self.p, self.exp, labels);
        for (&x, &c) in self.labels.iter().zip(&self.coeffs) {
            if c != 0 {
                out.add_at(f(x), c as i64);
            }
        }
        out
    }

    pub fn support(&self) -> BTreeMap<u64, u64> {
        self.labels
            .iter()
            .zip(&self.coeffs)
            .filter(|(_, &c)| c != 0)
            .map(|(&x, &c)| (x, c))
            .collect()
    }
}

impl fmt::Debug for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupRingElement(mod {}: {})", self.modulus, self)
    }
}

impl fmt::Display for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self.support().iter().map(|(x, c)| format!("{c}[{x}]")).collect();
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join(" + "))
        }
    }
}

impl Serialize for GroupRingElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("GroupRingElement", 3)?;
        st.serialize_field("modulus", &self.modulus)?;
        st.serialize_field("labels", &*self.labels)?;
        st.serialize_field("coeffs", &self.coeffs)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let labels = Arc::new(vec![1, 2, 4]);
        let a = GroupRingElement::from_coeffs(3, 2, labels.clone(), vec![1, -1, 9]);
        assert_eq!(a.coeffs(), &[1, 8, 0]);
        let b = GroupRingElement::monomial(3, 2, labels.clone(), 2, 1);
        assert!(a.add(&b).sub(&a).sub(&b).is_zero());
        assert_eq!(a.reduce(1).coeffs(), &[1, 2, 0]);
        assert!(a.scale(3).divisible_by_p());
        let pushed = a.pushforward(Arc::new(vec![1]), |_| 1);
        assert_eq!(pushed.coeffs(), &[0]);
        assert_eq!(format!("{b}"), "1[2]");
    }
}
