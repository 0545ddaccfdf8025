use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::field::{AbelianFieldSpec, AlgebraicInt};
use crate::arith::ntheory::{factorize, mod_inv, mod_pow, primes_up_to};
use crate::error::{Error, Result};
use crate::zeta::LevelData;

/// Prime ideal of `o_L` above the rational prime `q`.
///
/// Identity and order are given by `(q, slot)`. For split primes, `root`
/// holds the images of the periods under the homomorphism `o_L -> F_q`
/// whose kernel is this prime; slot `j` is the image of slot 0 under
/// `sigma^j`.
#[derive(Clone, Debug, Serialize)]
pub struct PrimeIdeal {
    q: u64,
    residue_degree: u32,
    ramification: u32,
    slot: u32,
    root: Option<Vec<u64>>,
}

impl PrimeIdeal {
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn residue_degree(&self) -> u32 {
        self.residue_degree
    }

    pub fn ramification(&self) -> u32 {
        self.ramification
    }

    pub fn slot(&self) -> u32 {
        self.slot
    }

    pub fn root(&self) -> Option<&[u64]> {
        self.root.as_deref()
    }

    pub fn norm(&self) -> u64 {
        self.q.pow(self.residue_degree)
    }

    fn key(&self) -> (u64, u32) {
        (self.q, self.slot)
    }
}

impl PartialEq for PrimeIdeal {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for PrimeIdeal {}

impl Hash for PrimeIdeal {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key().hash(state);
    }
}

impl PartialOrd for PrimeIdeal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PrimeIdeal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl fmt::Display for PrimeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P({}:{})", self.q, self.slot)
    }
}

/// Decomposition of `q o_L`: `e * f * g = p`.
#[derive(Clone, Debug)]
pub struct SplitType {
    pub e: u32,
    pub f: u32,
    pub g: u32,
    pub primes: Vec<PrimeIdeal>,
}

pub fn split_type(spec: &AbelianFieldSpec, q: u64) -> Arc<SplitType> {
    if let Some(st) = spec.split_memo.lock().unwrap().get(&q) {
        return st.clone();
    }
    let st = Arc::new(compute_split_type(spec, q));
    spec.split_memo.lock().unwrap().insert(q, st.clone());
    st
}

fn compute_split_type(spec: &AbelianFieldSpec, q: u64) -> SplitType {
    let p = spec.degree() as u32;
    let prime = |f, e, slot, root| PrimeIdeal { q, residue_degree: f, ramification: e, slot, root };
    if q == spec.conductor() {
        return SplitType { e: p, f: 1, g: 1, primes: vec![prime(1, p, 0, None)] };
    }
    if !spec.is_p_th_power_residue(q) {
        return SplitType { e: 1, f: p, g: 1, primes: vec![prime(p, 1, 0, None)] };
    }
    let base = split_homomorphisms(spec, q)
        .into_iter()
        .min()
        .expect("a split prime has p residue homomorphisms");
    let pu = p as usize;
    let primes = (0..p)
        .map(|j| {
            let r: Vec<u64> = (0..pu).map(|i| base[(i + pu - j as usize) % pu]).collect();
            prime(1, 1, j, Some(r))
        })
        .collect();
    SplitType { e: 1, f: 1, g: p, primes }
}

/// All ring homomorphisms `o_L -> F_q`, as tuples of period images.
fn split_homomorphisms(spec: &AbelianFieldSpec, q: u64) -> Vec<Vec<u64>> {
    let pu = spec.degree() as usize;
    let mp: Vec<u64> = spec
        .min_poly()
        .iter()
        .map(|c| c.mod_floor(&BigInt::from(q)).to_u64().unwrap())
        .collect();
    let table = spec.mult_table();
    let mut homs = Vec::new();
    for r0 in 0..q {
        let val = mp.iter().rev().fold(0u64, |acc, &c| ((acc as u128 * r0 as u128 + c as u128) % q as u128) as u64);
        if val != 0 {
            continue;
        }
        // r0 r_i = sum_k table[0][i][k] r_k, together with sum_i r_i = -1
        let mut rows: Vec<Vec<u64>> = (0..pu)
            .map(|i| {
                let mut row: Vec<u64> = (0..pu)
                    .map(|k| table[0][i][k].rem_euclid(q as i64) as u64)
                    .collect();
                row[i] = (row[i] + q - r0) % q;
                row.push(0);
                row
            })
            .collect();
        let mut norm_row = vec![1u64; pu];
        norm_row.push(q - 1);
        rows.push(norm_row);
        if let Some(r) = solve_mod_prime(rows, pu, q) {
            if is_homomorphism(spec, &r, q) {
                homs.push(r);
            }
        }
    }
    homs.sort();
    homs.dedup();
    homs
}

fn is_homomorphism(spec: &AbelianFieldSpec, r: &[u64], q: u64) -> bool {
    let pu = r.len();
    let table = spec.mult_table();
    let total = r.iter().fold(0u64, |a, &x| (a + x) % q);
    if total != q - 1 {
        return false;
    }
    (0..pu).all(|i| {
        (0..pu).all(|j| {
            let lhs = r[i] as u128 * r[j] as u128 % q as u128;
            let rhs = (0..pu).fold(0i128, |acc, k| {
                (acc + table[i][j][k] as i128 * r[k] as i128).rem_euclid(q as i128)
            });
            lhs as i128 == rhs
        })
    })
}

/// Unique solution of a consistent linear system over `F_q` given as
/// augmented rows; `None` if inconsistent or underdetermined.
fn solve_mod_prime(mut rows: Vec<Vec<u64>>, n: usize, q: u64) -> Option<Vec<u64>> {
    let mut pivot_row = 0;
    let mut pivots = Vec::with_capacity(n);
    for col in 0..n {
        let Some(r) = (pivot_row..rows.len()).find(|&r| !rows[r][col].is_multiple_of(q)) else {
            return None;
        };
        rows.swap(pivot_row, r);
        let inv = mod_inv(rows[pivot_row][col], q)?;
        for x in rows[pivot_row].iter_mut() {
            *x = (*x as u128 * inv as u128 % q as u128) as u64;
        }
        for r in 0..rows.len() {
            if r == pivot_row || rows[r][col] == 0 {
                continue;
            }
            let factor = rows[r][col];
            for c in 0..=n {
                let sub = factor as u128 * rows[pivot_row][c] as u128 % q as u128;
                rows[r][c] = ((rows[r][c] as u128 + q as u128 - sub) % q as u128) as u64;
            }
        }
        pivots.push(pivot_row);
        pivot_row += 1;
    }
    if rows[pivot_row..].iter().any(|row| row[n] != 0) {
        return None;
    }
    Some(pivots.iter().map(|&r| rows[r][n]).collect())
}

/// Period images under the lift to `Z/q^E` of the homomorphism attached to
/// a split prime, obtained by lifting its idempotent with `e -> 3e^2 - 2e^3`.
fn lifted_homomorphism(spec: &AbelianFieldSpec, prime: &PrimeIdeal, exponent: u32) -> Arc<Vec<u64>> {
    let key = (prime.q, prime.slot, exponent);
    if let Some(v) = spec.lift_memo.lock().unwrap().get(&key) {
        return v.clone();
    }
    let q = prime.q;
    let pu = spec.degree() as usize;
    let st = split_type(spec, q);
    // idempotent mod q: phi_t(e) = [t == slot]
    let mut rows: Vec<Vec<u64>> = st
        .primes
        .iter()
        .map(|t| {
            let mut row = t.root.clone().expect("split primes carry roots");
            row.push(u64::from(t.slot == prime.slot));
            row
        })
        .collect();
    rows.truncate(pu);
    let mut e = solve_mod_prime(rows, pu, q).expect("residue homomorphisms are independent");
    let modulus = q.checked_pow(exponent).filter(|&m| m < 1 << 62).expect("lift modulus fits in 62 bits");
    let mut precision = 1u32;
    while precision < exponent {
        let e2 = spec.mul_mod(&e, &e, modulus);
        let e3 = spec.mul_mod(&e2, &e, modulus);
        e = e2
            .iter()
            .zip(&e3)
            .map(|(&a, &b)| ((3 * a as u128 + 2 * (modulus - b) as u128) % modulus as u128) as u64)
            .collect();
        precision *= 2;
    }
    let j = (0..pu).find(|&j| !e[j].is_multiple_of(q)).expect("nonzero idempotent");
    let inv = mod_inv(e[j], modulus).expect("unit coordinate");
    let images: Vec<u64> = (0..pu)
        .map(|i| {
            let mut basis = vec![0u64; pu];
            basis[i] = 1;
            let prod = spec.mul_mod(&e, &basis, modulus);
            (prod[j] as u128 * inv as u128 % modulus as u128) as u64
        })
        .collect();
    let images = Arc::new(images);
    spec.lift_memo.lock().unwrap().insert(key, images.clone());
    images
}

/// Integral ideal as a multiset of prime ideals, sorted by prime.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct IdealFactored {
    factors: Vec<(PrimeIdeal, u32)>,
}

impl IdealFactored {
    pub fn unit() -> Self {
        IdealFactored { factors: Vec::new() }
    }

    pub fn from_factors(mut factors: Vec<(PrimeIdeal, u32)>) -> Self {
        factors.retain(|(_, e)| *e > 0);
        factors.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(PrimeIdeal, u32)> = Vec::with_capacity(factors.len());
        for (pr, e) in factors {
            match merged.last_mut() {
                Some((last, le)) if *last == pr => *le += e,
                _ => merged.push((pr, e)),
            }
        }
        IdealFactored { factors: merged }
    }

    pub fn factors(&self) -> &[(PrimeIdeal, u32)] {
        &self.factors
    }

    pub fn is_unit(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn norm(&self) -> u64 {
        self.factors
            .iter()
            .map(|(pr, e)| pr.norm().pow(*e))
            .product()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut all = self.factors.clone();
        all.extend(other.factors.iter().cloned());
        Self::from_factors(all)
    }

    /// `b` divides `self` (equivalently `self` is contained in `b`).
    pub fn is_divisible_by(&self, b: &Self) -> bool {
        b.factors.iter().all(|(pr, e)| {
            self.factors
                .iter()
                .any(|(pr2, e2)| pr2 == pr && e2 >= e)
        })
    }

    /// Image under `sigma^r`: split slots rotate, other primes are fixed.
    pub fn sigma(&self, spec: &AbelianFieldSpec, r: u64) -> Self {
        let factors = self
            .factors
            .iter()
            .map(|(pr, e)| {
                if pr.root.is_some() {
                    let st = split_type(spec, pr.q);
                    let slot = (pr.slot as u64 + r) % st.g as u64;
                    (st.primes[slot as usize].clone(), *e)
                } else {
                    (pr.clone(), *e)
                }
            })
            .collect();
        Self::from_factors(factors)
    }

    /// All integral ideals dividing `self` whose primes avoid `excluded`,
    /// sorted.
    pub fn divisors_coprime_to(&self, excluded: &[u64]) -> Vec<IdealFactored> {
        let usable: Vec<&(PrimeIdeal, u32)> =
            self.factors.iter().filter(|(pr, _)| !excluded.contains(&pr.q)).collect();
        let mut out = vec![IdealFactored::unit()];
        for (pr, e) in usable {
            let mut next = Vec::with_capacity(out.len() * (*e as usize + 1));
            for d in &out {
                for k in 0..=*e {
                    let mut f = d.factors.clone();
                    if k > 0 {
                        f.push((pr.clone(), k));
                    }
                    next.push(IdealFactored { factors: f });
                }
            }
            out = next;
        }
        out.sort();
        out
    }

    /// Compact text form `q:slot^e,...` (or `1` for the unit ideal).
    pub fn encode(&self) -> String {
        if self.factors.is_empty() {
            return "1".into();
        }
        self.factors
            .iter()
            .map(|(pr, e)| format!("{}:{}^{}", pr.q, pr.slot, e))
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn decode(spec: &AbelianFieldSpec, text: &str) -> Option<Self> {
        if text == "1" {
            return Some(Self::unit());
        }
        let mut factors = Vec::new();
        for part in text.split(',') {
            let (qs, rest) = part.split_once(':')?;
            let (slot, e) = rest.split_once('^')?;
            let q: u64 = qs.parse().ok()?;
            if !crate::arith::ntheory::is_prime(q) {
                return None;
            }
            let st = split_type(spec, q);
            let pr = st.primes.get(slot.parse::<usize>().ok()?)?.clone();
            factors.push((pr, e.parse().ok()?));
        }
        Some(Self::from_factors(factors))
    }
}

impl fmt::Display for IdealFactored {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encode())
    }
}

/// All integral ideals of norm at most `bound` coprime to the primes in
/// `s_primes`, sorted by norm and then by factorization.
pub fn enumerate_ideals(spec: &AbelianFieldSpec, bound: u64, s_primes: &[u64]) -> Vec<IdealFactored> {
    let mut primes: Vec<PrimeIdeal> = Vec::new();
    for q in primes_up_to(bound) {
        if s_primes.contains(&q) {
            continue;
        }
        primes.extend(split_type(spec, q).primes.iter().filter(|pr| pr.norm() <= bound).cloned());
    }
    let mut out = Vec::new();
    let mut current = Vec::new();
    collect_ideals(&primes, 0, 1, bound, &mut current, &mut out);
    out.sort_by(|a, b| a.norm().cmp(&b.norm()).then_with(|| a.cmp(b)));
    out
}

fn collect_ideals(
    primes: &[PrimeIdeal],
    start: usize,
    norm: u64,
    bound: u64,
    current: &mut Vec<(PrimeIdeal, u32)>,
    out: &mut Vec<IdealFactored>,
) {
    out.push(IdealFactored { factors: current.clone() });
    for (i, pr) in primes.iter().enumerate().skip(start) {
        let pn = pr.norm();
        if norm.saturating_mul(pn) > bound {
            continue;
        }
        let mut e = 1;
        let mut n = norm * pn;
        while n <= bound {
            current.push((pr.clone(), e));
            collect_ideals(primes, i + 1, n, bound, current, out);
            current.pop();
            e += 1;
            n = match n.checked_mul(pn) {
                Some(v) => v,
                None => break,
            };
        }
    }
}

/// Artin symbol of `b` at the level: the class of `N(b)` in the H-level.
pub fn artin_symbol_level(b: &IdealFactored, level: &LevelData) -> Result<u64> {
    let f = level.modulus();
    if b.factors.iter().any(|(pr, _)| f.is_multiple_of(pr.q)) {
        return Err(Error::NotCoprime { modulus: f });
    }
    let cls = b
        .factors
        .iter()
        .fold(1u64, |acc, (pr, e)| acc * mod_pow(pr.norm() % f, *e as u64, f) % f);
    debug_assert!(level.h_level().contains(cls));
    Ok(cls)
}

/// Factorization of the principal ideal `(nu)`.
pub fn factor_principal(spec: &AbelianFieldSpec, nu: &AlgebraicInt) -> Result<IdealFactored> {
    if nu.is_zero() {
        return Err(Error::ZeroElement);
    }
    let norm = spec.norm(nu).abs();
    let norm = norm
        .to_u64()
        .ok_or_else(|| Error::InvalidField(format!("norm {norm} exceeds the supported range")))?;
    let mut factors = Vec::new();
    for (q, vq) in factorize(norm) {
        let st = split_type(spec, q);
        if st.g == 1 {
            let pr = st.primes[0].clone();
            let e = vq / pr.residue_degree;
            factors.push((pr, e));
            continue;
        }
        let exponent = vq + 1;
        for pr in &st.primes {
            let images = lifted_homomorphism(spec, pr, exponent);
            let modulus = q.pow(exponent) as i128;
            let value = nu
                .coords()
                .iter()
                .zip(images.iter())
                .fold(0i128, |acc, (&x, &r)| (acc + x as i128 * r as i128).rem_euclid(modulus));
            let mut v = 0;
            let mut w = value;
            while v < vq && !w.is_zero() && w % q as i128 == 0 {
                w /= q as i128;
                v += 1;
            }
            debug_assert!(!w.is_zero());
            if v > 0 {
                factors.push((pr.clone(), v));
            }
        }
    }
    let out = IdealFactored::from_factors(factors);
    debug_assert_eq!(out.norm(), norm);
    Ok(out)
}
