//! Dirichlet characters, conductors, generalized Bernoulli numbers and
//! S-truncated L-values at negative integers.
//!
//! Character values are kept as exponents of a root of unity and only
//! materialized as cyclotomic numbers while an L-value is assembled.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::ntheory::divisors;
use crate::arith::{BernoulliTable, CyclotomicField, ExactScalar};
use crate::error::{Error, Result};
use crate::group::UnitGroup;
use crate::{CyclotomicNumber, Rational};

/// Character of `(Z/f)^x`: the value on the i-th generator is
/// `zeta_{n_i}^{exps[i]}` where `n_i` is that generator's order.
#[derive(Clone, Debug)]
pub struct DirichletCharacter {
    group: Arc<UnitGroup>,
    exps: Vec<u64>,
}

impl PartialEq for DirichletCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.group.modulus() == other.group.modulus() && self.exps == other.exps
    }
}

impl Eq for DirichletCharacter {}

/// Conductor and primitive character inducing a given character.
#[derive(Clone, Debug, PartialEq)]
pub struct PrimitiveData {
    pub conductor: u64,
    pub primitive: DirichletCharacter,
}

impl DirichletCharacter {
    pub fn new(group: Arc<UnitGroup>, exps: Vec<u64>) -> Self {
        assert_eq!(exps.len(), group.structure().rank());
        let exps = exps
            .iter()
            .zip(group.structure().orders())
            .map(|(&e, &n)| e % n)
            .collect();
        DirichletCharacter { group, exps }
    }

    pub fn trivial(group: Arc<UnitGroup>) -> Self {
        let r = group.structure().rank();
        Self::new(group, vec![0; r])
    }

    pub fn group(&self) -> &Arc<UnitGroup> {
        &self.group
    }

    pub fn modulus(&self) -> u64 {
        self.group.modulus()
    }

    pub fn exps(&self) -> &[u64] {
        &self.exps
    }

    /// Order of the values' common root of unity, the exponent of `(Z/f)^x`.
    pub fn value_order(&self) -> u64 {
        self.group.exponent()
    }

    /// `chi(a) = zeta_N^e` with `N = value_order()`; `None` off the units.
    pub fn value_exponent(&self, a: u64) -> Option<u64> {
        let n = self.value_order();
        let logs = self.group.dlog(a)?;
        let e = logs
            .iter()
            .zip(&self.exps)
            .zip(self.group.structure().orders())
            .fold(0u64, |acc, ((&l, &x), &ord)| (acc + l * x % ord * (n / ord)) % n);
        Some(e)
    }

    pub fn is_trivial(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// Order of the character as an element of the dual group.
    pub fn order(&self) -> u64 {
        self.exps
            .iter()
            .zip(self.group.structure().orders())
            .fold(1, |acc, (&e, &n)| acc.lcm(&(n / e.gcd(&n))))
    }

    /// Sign `chi(-1)`.
    pub fn parity(&self) -> i32 {
        let f = self.modulus();
        match self.value_exponent((f - 1) % f.max(1)) {
            Some(0) => 1,
            Some(_) => -1,
            None => 1,
        }
    }

    pub fn is_even(&self) -> bool {
        self.parity() == 1
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.modulus(), other.modulus());
        Self::new(self.group.clone(), self.group.structure().add(&self.exps, &other.exps))
    }

    pub fn conj(&self) -> Self {
        Self::new(self.group.clone(), self.group.structure().neg(&self.exps))
    }

    /// `chi(a)` in `Q(zeta_N)`, zero for non-units.
    pub fn value(&self, field: &Arc<CyclotomicField<Rational>>, a: u64) -> CyclotomicNumber {
        match self.value_exponent(a) {
            Some(e) => CyclotomicNumber::root_power(field, e * (field.order() / self.value_order())),
            None => CyclotomicNumber::zero(field),
        }
    }
}

/// All characters of `(Z/f)^x` trivial on the subgroup generated by
/// `constraint` (all characters when `None`).
pub fn characters_of(f: u64, constraint: Option<&[u64]>) -> Vec<DirichletCharacter> {
    characters_of_group(&UnitGroup::new(f), constraint)
}

pub fn characters_of_group(
    group: &Arc<UnitGroup>,
    constraint: Option<&[u64]>,
) -> Vec<DirichletCharacter> {
    let dual = group.structure().clone();
    dual.elements()
        .map(|exps| DirichletCharacter::new(group.clone(), exps))
        .filter(|chi| {
            constraint.is_none_or(|xs| xs.iter().all(|&x| chi.value_exponent(x) == Some(0)))
        })
        .collect()
}

/// Smallest unit `a = b + t*d` modulo `f`.
fn lift_unit(b: u64, d: u64, f: u64) -> u64 {
    (0..f / d)
        .map(|t| (b + t * d) % f)
        .find(|a| a.gcd(&f) == 1)
        .expect("every unit mod d lifts to a unit mod f")
}

/// Conductor and primitive character of `chi`.
pub fn conductor_primitive(chi: &DirichletCharacter) -> PrimitiveData {
    let f = chi.modulus();
    for d in divisors(f) {
        let trivial_on_kernel = (0..f / d)
            .map(|t| (1 + t * d) % f)
            .filter(|a| a.gcd(&f) == 1)
            .all(|a| chi.value_exponent(a) == Some(0));
        if !trivial_on_kernel {
            continue;
        }
        let small = UnitGroup::new(d);
        let n = chi.value_order();
        let exps = small
            .generators()
            .iter()
            .zip(small.structure().orders())
            .map(|(&g, &ord)| {
                let e = chi.value_exponent(lift_unit(g, d, f)).expect("lift is a unit");
                // chi(lift)^ord = 1, so e * ord is a multiple of n
                e * ord / n
            })
            .collect();
        return PrimitiveData {
            conductor: d,
            primitive: DirichletCharacter::new(small, exps),
        };
    }
    unreachable!("the modulus itself is always a valid conductor")
}

/// Evaluates generalized Bernoulli numbers and truncated L-values for
/// characters of one modulus in a shared cyclotomic field, memoizing the
/// Hurwitz values `B_k(a/d)`.
pub struct LValueEngine {
    group: Arc<UnitGroup>,
    field: Arc<CyclotomicField<Rational>>,
    bernoulli: Mutex<BernoulliTable<Rational>>,
    hurwitz: Mutex<HashMap<(u64, usize), Arc<Vec<Rational>>>>,
    primitive: Mutex<HashMap<Vec<u64>, PrimitiveData>>,
}

impl LValueEngine {
    pub fn new(group: Arc<UnitGroup>) -> Self {
        let field = CyclotomicField::new(group.exponent().max(1));
        LValueEngine {
            group,
            field,
            bernoulli: Mutex::new(BernoulliTable::new(8)),
            hurwitz: Mutex::new(HashMap::new()),
            primitive: Mutex::new(HashMap::new()),
        }
    }

    pub fn group(&self) -> &Arc<UnitGroup> {
        &self.group
    }

    pub fn field(&self) -> &Arc<CyclotomicField<Rational>> {
        &self.field
    }

    pub fn bernoulli_poly_value(&self, k: usize, x: &Rational) -> Rational {
        let mut t = self.bernoulli.lock().unwrap();
        if t.max_k() < k {
            *t = BernoulliTable::new(k.max(2 * t.max_k()));
        }
        t.eval(k, x)
    }

    /// `B_k(a/d)` for `a = 1..=d`.
    fn hurwitz_values(&self, d: u64, k: usize) -> Arc<Vec<Rational>> {
        if let Some(v) = self.hurwitz.lock().unwrap().get(&(d, k)) {
            return v.clone();
        }
        let vals: Vec<Rational> = (1..=d)
            .map(|a| self.bernoulli_poly_value(k, &Rational::new(a.into(), d.into())))
            .collect();
        let vals = Arc::new(vals);
        self.hurwitz.lock().unwrap().insert((d, k), vals.clone());
        vals
    }

    pub fn primitive_of(&self, chi: &DirichletCharacter) -> PrimitiveData {
        let key = chi.exps().to_vec();
        if let Some(p) = self.primitive.lock().unwrap().get(&key) {
            return p.clone();
        }
        let p = conductor_primitive(chi);
        self.primitive.lock().unwrap().insert(key, p.clone());
        p
    }

    /// Exponent (in `zeta_N` of this engine's field) of a character defined
    /// on a divisor modulus.
    fn lifted_exponent(&self, chi: &DirichletCharacter, a: u64) -> Option<u64> {
        let e = chi.value_exponent(a)?;
        Some(e * (self.field.order() / chi.value_order()))
    }

    /// `B_{k,chi} = d^{k-1} sum_{a=1}^{d} chi(a) B_k(a/d)` for a character
    /// of modulus `d` dividing this engine's modulus.
    pub fn generalized_bernoulli(&self, chi: &DirichletCharacter, k: usize) -> CyclotomicNumber {
        let d = chi.modulus();
        let vals = self.hurwitz_values(d, k);
        let n = self.field.order() as usize;
        let mut weights = vec![Rational::zero(); n];
        for a in 1..=d {
            if let Some(e) = self.lifted_exponent(chi, a % d) {
                weights[e as usize] += vals[(a - 1) as usize].clone();
            }
        }
        let scale = Rational::from_int(d as i64).pow(k as i32 - 1);
        CyclotomicNumber::from_exponent_weights(&self.field, &weights).scale(&scale)
    }

    /// `L_S(1-k, chi)` through the primitive character with explicit Euler
    /// factors at the primes of `s_primes` not dividing the conductor.
    pub fn l_value_neg(
        &self,
        chi: &DirichletCharacter,
        k: u32,
        s_primes: &[u64],
    ) -> Result<CyclotomicNumber> {
        if k == 0 {
            return Err(Error::InvalidWeight);
        }
        assert_eq!(chi.modulus(), self.group.modulus());
        let prim = self.primitive_of(chi);
        let bern = self.generalized_bernoulli(&prim.primitive, k as usize);
        let mut val = bern.scale(&(-Rational::one() / Rational::from_int(k as i64)));
        for &q in s_primes {
            if prim.conductor.is_multiple_of(q) {
                continue;
            }
            let qk = Rational::from_int(q as i64).pow(k as i32 - 1);
            let chi_q = match self.lifted_exponent(&prim.primitive, q % prim.conductor) {
                Some(e) => CyclotomicNumber::root_power(&self.field, e),
                None => CyclotomicNumber::zero(&self.field),
            };
            let factor = &CyclotomicNumber::one(&self.field) - &chi_q.scale(&qk);
            val = &val * &factor;
        }
        Ok(val)
    }
}

/// `L_S(1-k, chi)` as an element of `Q(zeta_N)`, `N` the exponent of the
/// character's unit group.
pub fn l_value_neg(chi: &DirichletCharacter, k: u32, s_primes: &[u64]) -> Result<CyclotomicNumber> {
    LValueEngine::new(chi.group().clone()).l_value_neg(chi, k, s_primes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::cyclo_reduce_rational;
    use num_bigint::BigInt;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn character_counts() {
        assert_eq!(characters_of(7, Some(&[1, 6])).len(), 3);
        assert!(characters_of(7, Some(&[6])).iter().all(|c| c.is_even()));
        let triv = characters_of(1, None);
        assert_eq!(triv.len(), 1);
        assert!(triv[0].is_trivial());
        let all9: Vec<u64> = UnitGroup::new(9).units();
        assert_eq!(characters_of(9, Some(&all9)).len(), 1);
        assert_eq!(characters_of(63, None).len(), 36);
    }

    #[test]
    fn conductors() {
        let g63 = UnitGroup::new(63);
        assert_eq!(conductor_primitive(&DirichletCharacter::trivial(g63.clone())).conductor, 1);

        // cubic characters mod 63 lifted from mod 7: trivial on residues = 1 mod 7
        let kernel7: Vec<u64> = g63.units().into_iter().filter(|a| a % 7 == 1).collect();
        let cubic: Vec<_> = characters_of_group(&g63, Some(&kernel7))
            .into_iter()
            .filter(|c| c.order() == 3)
            .collect();
        assert_eq!(cubic.len(), 2);
        for c in &cubic {
            let pd = conductor_primitive(c);
            assert_eq!(pd.conductor, 7);
            // chi = chi* on units
            for a in g63.units() {
                let lhs = c.value_exponent(a).unwrap();
                let rhs = pd.primitive.value_exponent(a % 7).unwrap()
                    * (c.value_order() / pd.primitive.value_order());
                assert_eq!(lhs, rhs % c.value_order());
            }
        }

        let faithful: Vec<_> = characters_of(9, None).into_iter().filter(|c| c.order() == 6).collect();
        assert!(!faithful.is_empty());
        for c in faithful {
            assert_eq!(conductor_primitive(&c).conductor, 9);
        }
    }

    #[test]
    fn l_values() {
        let triv = DirichletCharacter::trivial(UnitGroup::new(1));
        assert_eq!(cyclo_reduce_rational(&l_value_neg(&triv, 2, &[]).unwrap()).unwrap(), r(-1, 12));
        assert_eq!(cyclo_reduce_rational(&l_value_neg(&triv, 2, &[2]).unwrap()).unwrap(), r(1, 12));
        assert_eq!(cyclo_reduce_rational(&l_value_neg(&triv, 1, &[]).unwrap()).unwrap(), r(-1, 2));
        assert!(matches!(l_value_neg(&triv, 0, &[]), Err(Error::InvalidWeight)));

        let quad5 = characters_of(5, None).into_iter().find(|c| c.order() == 2).unwrap();
        assert_eq!(cyclo_reduce_rational(&l_value_neg(&quad5, 2, &[]).unwrap()).unwrap(), r(-2, 5));

        for chi in characters_of(63, None).into_iter().filter(|c| !c.is_even()) {
            for k in [2u32, 4] {
                assert!(l_value_neg(&chi, k, &[3, 7]).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn orthogonality() {
        for f in 1..=200u64 {
            let chars = characters_of(f, None);
            let g = chars[0].group().clone();
            let n = g.exponent();
            let units = g.units();
            let phi = units.len() as i64;
            // sum_chi chi(a) chi(b)^-1 = phi * [a == b]; test against b = 1 and b = a
            // using exponent bookkeeping in Z/n
            let field = CyclotomicField::<Rational>::new(n);
            for &a in units.iter().take(12) {
                for &b in units.iter().take(6) {
                    let mut weights = vec![Rational::zero(); n as usize];
                    for chi in &chars {
                        let e = (chi.value_exponent(a).unwrap() + n - chi.value_exponent(b).unwrap()) % n;
                        weights[e as usize] += Rational::one();
                    }
                    let s = CyclotomicNumber::from_exponent_weights(&field, &weights);
                    let expected = if a == b { phi } else { 0 };
                    assert_eq!(s.to_scalar().unwrap(), Rational::from_int(expected), "f={f} a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn values_live_in_the_order_subfield() {
        for chi in characters_of(63, None) {
            let n = chi.value_order();
            let step = n / chi.order();
            for a in chi.group().units() {
                assert_eq!(chi.value_exponent(a).unwrap() % step, 0);
            }
            assert!(chi.parity() == 1 || chi.parity() == -1);
        }
    }

    #[test]
    fn l_value_is_stable_under_lifting_with_new_primes_in_s() {
        // chi mod 7 lifted to mod 21 and 63 with S = {3, 7}
        for chi7 in characters_of(7, None) {
            let base = l_value_neg(&chi7, 2, &[3, 7]).unwrap();
            for f in [21u64, 63] {
                let g = UnitGroup::new(f);
                let lifted = characters_of_group(&g, None)
                    .into_iter()
                    .find(|c| {
                        g.units().iter().all(|&a| {
                            c.value_exponent(a).unwrap() * chi7.value_order()
                                == chi7.value_exponent(a % 7).unwrap() * c.value_order()
                        })
                    })
                    .unwrap();
                let v = l_value_neg(&lifted, 2, &[3, 7]).unwrap();
                // all three unit groups have exponent 6, so the values share Q(zeta_6)
                assert_eq!(v, base);
            }
        }
    }
}
