use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::ntheory::{is_prime, mod_pow, primitive_root};
use crate::error::{Error, Result};

/// The degree-`p` subfield of `Q(zeta_l)` for a prime `l = 1 mod p`.
///
/// The basis is the Gaussian periods `eta_i = sum_{a in C_i} zeta_l^a`,
/// where `C_i = g^i * (Z/l)^{x p}`; the generator of `Gal(L/Q)` induced by
/// `zeta -> zeta^g` sends `eta_i` to `eta_{i+1}`.
pub struct AbelianFieldSpec {
    p: u64,
    conductor: u64,
    generator: u64,
    /// coset index of each nonzero residue mod `l`
    coset: Vec<u32>,
    /// `eta_i * eta_j = sum_k table[i][j][k] eta_k`
    table: Vec<Vec<Vec<i64>>>,
    min_poly: Vec<BigInt>,
    pub(crate) split_memo: Mutex<HashMap<u64, Arc<crate::numberfield::SplitType>>>,
    /// lifted homomorphisms `o_L -> Z/q^E`, keyed by `(q, slot, E)`
    pub(crate) lift_memo: Mutex<HashMap<(u64, u32, u32), Arc<Vec<u64>>>>,
}

impl AbelianFieldSpec {
    pub fn new(p: u64, conductor: u64) -> Result<Arc<Self>> {
        if p < 3 || !is_prime(p) {
            return Err(Error::InvalidField(format!("degree {p} is not an odd prime")));
        }
        if !is_prime(conductor) || conductor % p != 1 {
            return Err(Error::InvalidField(format!(
                "conductor {conductor} must be a prime congruent to 1 mod {p}"
            )));
        }
        let l = conductor;
        let g = primitive_root(l).expect("primes have primitive roots");
        let mut coset = vec![u32::MAX; l as usize];
        let mut x = 1u64;
        for e in 0..l - 1 {
            coset[x as usize] = (e % p) as u32;
            x = x * g % l;
        }
        let members: Vec<Vec<u64>> = (0..p)
            .map(|i| (1..l).filter(|&a| coset[a as usize] == i as u32).collect())
            .collect();
        let pu = p as usize;
        let mut table = vec![vec![vec![0i64; pu]; pu]; pu];
        let mut counts = vec![0i64; pu];
        for i in 0..pu {
            for j in 0..pu {
                for &a in &members[i] {
                    for &b in &members[j] {
                        let s = (a + b) % l;
                        if s == 0 {
                            // 1 = -(eta_0 + ... + eta_{p-1})
                            for k in 0..pu {
                                table[i][j][k] -= 1;
                            }
                        } else {
                            counts[coset[s as usize] as usize] += 1;
                        }
                    }
                }
                // the count of each zeta^c is constant along cosets
                let size = ((l - 1) / p) as i64;
                for k in 0..pu {
                    debug_assert_eq!(counts[k] % size, 0);
                    table[i][j][k] += counts[k] / size;
                    counts[k] = 0;
                }
            }
        }
        let mut spec = AbelianFieldSpec {
            p,
            conductor: l,
            generator: g,
            coset,
            table,
            min_poly: Vec::new(),
            split_memo: Mutex::new(HashMap::new()),
            lift_memo: Mutex::new(HashMap::new()),
        };
        let mut eta0 = vec![0i64; pu];
        eta0[0] = 1;
        spec.min_poly = spec.char_poly(&AlgebraicInt::new(eta0));
        Ok(Arc::new(spec))
    }

    pub fn degree(&self) -> u64 {
        self.p
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    /// Primitive root mod the conductor inducing the chosen generator of `Sigma`.
    pub fn galois_generator(&self) -> u64 {
        self.generator
    }

    /// Index `i` with `a` in the coset `C_i`; `None` for `a = 0 mod l`.
    pub fn coset_of(&self, a: u64) -> Option<u32> {
        let c = self.coset[(a % self.conductor) as usize];
        (c != u32::MAX).then_some(c)
    }

    /// Residues mod `l` acting trivially on `L` (the `p`-th powers).
    pub fn kernel_residues(&self) -> Vec<u64> {
        (1..self.conductor).filter(|&a| self.coset[a as usize] == 0).collect()
    }

    pub fn mult_table(&self) -> &[Vec<Vec<i64>>] {
        &self.table
    }

    /// Coefficients (ascending) of the minimal polynomial of `eta_0`.
    pub fn min_poly(&self) -> &[BigInt] {
        &self.min_poly
    }

    pub fn one(&self) -> AlgebraicInt {
        AlgebraicInt::new(vec![-1; self.p as usize])
    }

    pub fn from_int(&self, n: i64) -> AlgebraicInt {
        AlgebraicInt::new(vec![-n; self.p as usize])
    }

    pub fn mul(&self, a: &AlgebraicInt, b: &AlgebraicInt) -> AlgebraicInt {
        let pu = self.p as usize;
        let mut out = vec![0i64; pu];
        for i in 0..pu {
            if a.coords[i] == 0 {
                continue;
            }
            for j in 0..pu {
                let c = a.coords[i] * b.coords[j];
                if c == 0 {
                    continue;
                }
                for (k, o) in out.iter_mut().enumerate() {
                    *o += c * self.table[i][j][k];
                }
            }
        }
        AlgebraicInt::new(out)
    }

    /// Products in `o_L / m` for a modulus `m < 2^63`.
    pub fn mul_mod(&self, a: &[u64], b: &[u64], m: u64) -> Vec<u64> {
        let pu = self.p as usize;
        let mm = m as i128;
        let mut out = vec![0i128; pu];
        for i in 0..pu {
            if a[i] == 0 {
                continue;
            }
            for j in 0..pu {
                let c = (a[i] as i128 * b[j] as i128) % mm;
                if c == 0 {
                    continue;
                }
                for (k, o) in out.iter_mut().enumerate() {
                    *o = (*o + c * self.table[i][j][k] as i128).rem_euclid(mm);
                }
            }
        }
        out.into_iter().map(|x| x as u64).collect()
    }

    /// Matrix of multiplication by `a` in the period basis: column `j`
    /// holds the coordinates of `a * eta_j`.
    pub fn mult_matrix(&self, a: &AlgebraicInt) -> Vec<Vec<BigInt>> {
        let pu = self.p as usize;
        let mut m = vec![vec![BigInt::zero(); pu]; pu];
        for j in 0..pu {
            let mut e = vec![0i64; pu];
            e[j] = 1;
            let col = self.mul(a, &AlgebraicInt::new(e));
            for k in 0..pu {
                m[k][j] = BigInt::from(col.coords[k]);
            }
        }
        m
    }

    pub fn trace(&self, a: &AlgebraicInt) -> i64 {
        -a.coords.iter().sum::<i64>()
    }

    pub fn norm(&self, a: &AlgebraicInt) -> BigInt {
        let cp = self.char_poly(a);
        let c0 = cp[0].clone();
        if self.p % 2 == 1 {
            -c0
        } else {
            c0
        }
    }

    /// Characteristic polynomial of `a` (ascending, monic) by
    /// Faddeev–LeVerrier with exact integer divisions.
    pub fn char_poly(&self, a: &AlgebraicInt) -> Vec<BigInt> {
        let n = self.p as usize;
        let am = self.mult_matrix(a);
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[n] = BigInt::one();
        let mut mk = vec![vec![BigInt::zero(); n]; n];
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{n-k+1} I
            let mut next = matmul(&am, &mk);
            for (i, row) in next.iter_mut().enumerate() {
                row[i] += &coeffs[n - k + 1];
            }
            let amk = matmul(&am, &next);
            let tr: BigInt = (0..n).map(|i| amk[i][i].clone()).sum();
            let (q, r) = (-tr).div_rem(&BigInt::from(k as i64));
            debug_assert!(r.is_zero());
            coeffs[n - k] = q;
            mk = next;
        }
        coeffs
    }

    /// Exact total positivity: `a` has only real conjugates, so all of them
    /// are positive iff the characteristic polynomial has strictly
    /// alternating signs (Descartes' rule is exact for real-rooted
    /// polynomials).
    pub fn is_totally_positive(&self, a: &AlgebraicInt) -> bool {
        let cp = self.char_poly(a);
        let n = self.p as usize;
        (0..n).all(|i| {
            let c = &cp[i];
            if (n - i).is_multiple_of(2) {
                c.is_positive()
            } else {
                c.is_negative()
            }
        })
    }

    /// `sigma^r(a)` for the chosen generator `sigma`.
    pub fn sigma(&self, a: &AlgebraicInt, r: u64) -> AlgebraicInt {
        let pu = self.p as usize;
        let shift = (r % self.p) as usize;
        let mut out = vec![0i64; pu];
        for (i, &x) in a.coords.iter().enumerate() {
            out[(i + shift) % pu] = x;
        }
        AlgebraicInt::new(out)
    }

    /// Real values of the periods `eta_0, ..., eta_{p-1}` under the
    /// embedding `zeta_l -> exp(2 pi i / l)`. Only used to bound search
    /// boxes, never to decide anything.
    pub fn period_approximations(&self) -> Vec<f64> {
        let l = self.conductor as f64;
        (0..self.p as u32)
            .map(|i| {
                (1..self.conductor)
                    .filter(|&a| self.coset[a as usize] == i)
                    .map(|a| (2.0 * std::f64::consts::PI * a as f64 / l).cos())
                    .sum()
            })
            .collect()
    }

    pub fn is_p_th_power_residue(&self, q: u64) -> bool {
        mod_pow(q % self.conductor, (self.conductor - 1) / self.p, self.conductor) == 1
    }
}

impl fmt::Debug for AbelianFieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AbelianFieldSpec(p={}, conductor={})", self.p, self.conductor)
    }
}

fn matmul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    let mut out = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                out[i][j] += &a[i][k] * &b[k][j];
            }
        }
    }
    out
}

/// Integer of `L` in period coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AlgebraicInt {
    coords: Vec<i64>,
}

impl AlgebraicInt {
    pub fn new(coords: Vec<i64>) -> Self {
        AlgebraicInt { coords }
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    /// Rational integer value when all coordinates agree (`n = -c`).
    pub fn as_rational_integer(&self) -> Option<i64> {
        let c = *self.coords.first()?;
        self.coords.iter().all(|&x| x == c).then_some(-c)
    }

    pub fn add(&self, other: &Self) -> Self {
        AlgebraicInt::new(self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Display for AlgebraicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}
