//! Finite abelian groups in cyclic-factor form and the unit groups
//! `(Z/f)^x` with discrete-log tables.

use std::sync::Arc;

use num_integer::Integer;

use crate::arith::ntheory::{factorize, mod_pow, primitive_root};

/// `Z/n_1 x ... x Z/n_r`, elements encoded as exponent tuples and indexed in
/// mixed radix (first factor varies slowest).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianGroup {
    orders: Vec<u64>,
}

impl AbelianGroup {
    pub fn new(orders: Vec<u64>) -> Self {
        assert!(orders.iter().all(|&n| n >= 1), "cyclic factor of order zero");
        AbelianGroup { orders }
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn order(&self) -> u64 {
        self.orders.iter().product()
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    /// Least common multiple of the factor orders.
    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1, |acc, &n| acc.lcm(&n))
    }

    pub fn encode(&self, exps: &[u64]) -> usize {
        assert_eq!(exps.len(), self.orders.len());
        exps.iter()
            .zip(&self.orders)
            .fold(0usize, |acc, (&e, &n)| acc * n as usize + (e % n) as usize)
    }

    pub fn decode(&self, mut idx: usize) -> Vec<u64> {
        let mut out = vec![0; self.orders.len()];
        for (slot, &n) in out.iter_mut().zip(&self.orders).rev() {
            *slot = (idx % n as usize) as u64;
            idx /= n as usize;
        }
        out
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(b)
            .zip(&self.orders)
            .map(|((&x, &y), &n)| (x + y) % n)
            .collect()
    }

    pub fn neg(&self, a: &[u64]) -> Vec<u64> {
        a.iter().zip(&self.orders).map(|(&x, &n)| (n - x % n) % n).collect()
    }

    pub fn scale(&self, a: &[u64], k: u64) -> Vec<u64> {
        a.iter()
            .zip(&self.orders)
            .map(|(&x, &n)| ((x as u128 * k as u128) % n as u128) as u64)
            .collect()
    }

    pub fn elements(&self) -> impl Iterator<Item = Vec<u64>> + '_ {
        (0..self.order() as usize).map(move |i| self.decode(i))
    }
}

/// The unit group `(Z/f)^x` with fixed CRT-lifted generators.
#[derive(Debug)]
pub struct UnitGroup {
    modulus: u64,
    generators: Vec<u64>,
    structure: AbelianGroup,
    /// residue -> mixed-radix index of its discrete log; `u32::MAX` for non-units
    dlog: Vec<u32>,
    /// mixed-radix index -> residue
    residues: Vec<u64>,
}

impl UnitGroup {
    pub fn new(modulus: u64) -> Arc<Self> {
        assert!(modulus >= 1);
        let mut gens = Vec::new();
        let mut orders = Vec::new();
        let factors = factorize(modulus);
        for &(q, e) in &factors {
            let qe = q.pow(e);
            let local: Vec<(u64, u64)> = if q == 2 {
                match e {
                    1 => vec![],
                    2 => vec![(3, 2)],
                    _ => vec![(qe - 1, 2), (5, qe / 4)],
                }
            } else {
                let g = primitive_root(qe).expect("odd prime powers have primitive roots");
                vec![(g, qe / q * (q - 1))]
            };
            for (g, ord) in local {
                gens.push(crt_lift(g, qe, modulus));
                orders.push(ord);
            }
        }
        let structure = AbelianGroup::new(orders);
        let n = structure.order() as usize;
        let mut dlog = vec![u32::MAX; modulus as usize];
        let mut residues = vec![0u64; n];
        for idx in 0..n {
            let exps = structure.decode(idx);
            let r = gens
                .iter()
                .zip(&exps)
                .fold(1 % modulus, |acc, (&g, &e)| mul_mod(acc, mod_pow(g, e, modulus), modulus));
            debug_assert_eq!(dlog[r as usize], u32::MAX);
            dlog[r as usize] = idx as u32;
            residues[idx] = r;
        }
        Arc::new(UnitGroup {
            modulus,
            generators: gens,
            structure,
            dlog,
            residues,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    pub fn structure(&self) -> &AbelianGroup {
        &self.structure
    }

    pub fn order(&self) -> u64 {
        self.structure.order()
    }

    pub fn exponent(&self) -> u64 {
        self.structure.exponent()
    }

    pub fn is_unit(&self, a: u64) -> bool {
        self.dlog[(a % self.modulus) as usize] != u32::MAX
    }

    /// Discrete log of a unit as an exponent tuple.
    pub fn dlog(&self, a: u64) -> Option<Vec<u64>> {
        let idx = self.dlog[(a % self.modulus) as usize];
        (idx != u32::MAX).then(|| self.structure.decode(idx as usize))
    }

    pub fn residue_of(&self, exps: &[u64]) -> u64 {
        self.residues[self.structure.encode(exps)]
    }

    /// Units in ascending residue order.
    pub fn units(&self) -> Vec<u64> {
        (0..self.modulus).filter(|&a| self.is_unit(a)).collect()
    }
}

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Residue mod `modulus` congruent to `g` mod `qe` and to 1 mod the
/// cofactor.
fn crt_lift(g: u64, qe: u64, modulus: u64) -> u64 {
    let rest = modulus / qe;
    (0..rest)
        .map(|t| g + t * qe)
        .find(|x| x % rest == 1 % rest)
        .expect("CRT lift exists for coprime moduli")
        % modulus
}

/// A subgroup of `(Z/f)^x` given by its sorted residues, with O(1) lookup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueGroup {
    modulus: u64,
    residues: Vec<u64>,
    index: Vec<u32>,
}

impl ResidueGroup {
    pub fn new(modulus: u64, mut residues: Vec<u64>) -> Self {
        residues.sort_unstable();
        residues.dedup();
        let mut index = vec![u32::MAX; modulus as usize];
        for (i, &r) in residues.iter().enumerate() {
            index[r as usize] = i as u32;
        }
        ResidueGroup {
            modulus,
            residues,
            index,
        }
    }

    pub fn full(modulus: u64) -> Self {
        let units = (0..modulus).filter(|&a| a.gcd(&modulus) == 1).collect();
        Self::new(modulus, units)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn len(&self) -> usize {
        self.residues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.residues.is_empty()
    }

    pub fn residues(&self) -> &[u64] {
        &self.residues
    }

    pub fn residue(&self, i: usize) -> u64 {
        self.residues[i]
    }

    pub fn index_of(&self, a: u64) -> Option<usize> {
        let i = self.index[(a % self.modulus) as usize];
        (i != u32::MAX).then_some(i as usize)
    }

    pub fn contains(&self, a: u64) -> bool {
        self.index_of(a).is_some()
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        mul_mod(a, b, self.modulus)
    }

    pub fn identity(&self) -> u64 {
        1 % self.modulus
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_group_structure() {
        let g = UnitGroup::new(63);
        assert_eq!(g.order(), 36);
        assert_eq!(g.structure().orders(), &[6, 6]);
        for a in g.units() {
            let e = g.dlog(a).unwrap();
            assert_eq!(g.residue_of(&e), a);
        }
        let g = UnitGroup::new(40);
        assert_eq!(g.order(), 16);
        assert_eq!(g.exponent(), 4);
        let g1 = UnitGroup::new(1);
        assert_eq!(g1.order(), 1);
        assert_eq!(g1.units(), vec![0]);
    }

    #[test]
    fn dlog_is_a_homomorphism() {
        for f in [8u64, 9, 45, 63, 189] {
            let g = UnitGroup::new(f);
            let s = g.structure();
            for a in g.units() {
                for b in g.units() {
                    let ab = mul_mod(a, b, f);
                    assert_eq!(g.dlog(ab).unwrap(), s.add(&g.dlog(a).unwrap(), &g.dlog(b).unwrap()));
                }
            }
        }
    }

    #[test]
    fn mixed_radix_round_trip() {
        let a = AbelianGroup::new(vec![2, 3, 4]);
        for i in 0..24 {
            assert_eq!(a.encode(&a.decode(i)), i);
        }
    }
}
