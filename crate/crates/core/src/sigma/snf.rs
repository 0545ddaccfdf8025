//! Smith normal form over `Z` and linear solving modulo prime powers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::ntheory::mod_inv;

/// `u * a * v = diag(d)` with `u`, `v` unimodular and `d_i | d_{i+1}`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: Vec<Vec<BigInt>>,
    pub d: Vec<BigInt>,
    pub v: Vec<Vec<BigInt>>,
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

fn row_axpy(m: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
    // row dst -= q * row src
    let (a, b) = if dst < src {
        let (lo, hi) = m.split_at_mut(src);
        (&mut lo[dst], &hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(dst);
        (&mut hi[0], &lo[src])
    };
    for (x, y) in a.iter_mut().zip(b.iter()) {
        *x -= q * y;
    }
}

fn col_axpy(m: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
    for row in m.iter_mut() {
        let t = q * &row[src];
        row[dst] -= t;
    }
}

fn swap_cols(m: &mut [Vec<BigInt>], i: usize, j: usize) {
    for row in m.iter_mut() {
        row.swap(i, j);
    }
}

pub fn smith_normal_form(a: &[Vec<i64>]) -> SmithForm {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<BigInt>> = a.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut u = identity(rows);
    let mut v = identity(cols);
    let mut d = Vec::new();
    for t in 0..rows.min(cols) {
        loop {
            let pivot = (t..rows)
                .flat_map(|i| (t..cols).map(move |j| (i, j)))
                .filter(|&(i, j)| !m[i][j].is_zero())
                .min_by(|&(i, j), &(k, l)| m[i][j].abs().cmp(&m[k][l].abs()));
            let Some((pi, pj)) = pivot else {
                break;
            };
            m.swap(t, pi);
            u.swap(t, pi);
            swap_cols(&mut m, t, pj);
            swap_cols(&mut v, t, pj);
            let mut clean = true;
            for i in t + 1..rows {
                if !m[i][t].is_zero() {
                    let q = m[i][t].div_floor(&m[t][t]);
                    row_axpy(&mut m, i, t, &q);
                    row_axpy(&mut u, i, t, &q);
                    clean &= m[i][t].is_zero();
                }
            }
            for j in t + 1..cols {
                if !m[t][j].is_zero() {
                    let q = m[t][j].div_floor(&m[t][t]);
                    col_axpy(&mut m, j, t, &q);
                    col_axpy(&mut v, j, t, &q);
                    clean &= m[t][j].is_zero();
                }
            }
            if !clean {
                continue;
            }
            // enforce divisibility of the remaining block by the pivot
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !m[i][j].is_multiple_of(&m[t][t])));
            match bad {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    row_axpy(&mut m, t, i, &minus_one);
                    row_axpy(&mut u, t, i, &minus_one);
                }
                None => break,
            }
        }
        if m[t][t].is_negative() {
            for x in m[t].iter_mut() {
                *x = -&*x;
            }
            for x in u[t].iter_mut() {
                *x = -&*x;
            }
        }
        d.push(m[t][t].clone());
    }
    SmithForm { u, d, v }
}

/// Solver for `a x = b (mod modulus)` built from a Smith form; solutions
/// are canonical: free coordinates are zero and each determined coordinate
/// is the least non-negative residue.
#[derive(Clone, Debug)]
pub struct ModularSolver {
    modulus: u64,
    rows: usize,
    cols: usize,
    u: Vec<Vec<u64>>,
    v: Vec<Vec<u64>>,
    /// `(gcd(d_i, modulus), (d_i/g)^{-1} mod modulus/g)`
    diag: Vec<(u64, u64)>,
}

impl ModularSolver {
    pub fn new(a: &[Vec<i64>], modulus: u64) -> Self {
        let snf = smith_normal_form(a);
        let rows = a.len();
        let cols = a.first().map_or(0, Vec::len);
        let md = BigInt::from(modulus);
        let red = |m: &Vec<Vec<BigInt>>| -> Vec<Vec<u64>> {
            m.iter()
                .map(|r| r.iter().map(|x| x.mod_floor(&md).to_u64().unwrap()).collect())
                .collect()
        };
        let diag = snf
            .d
            .iter()
            .map(|di| {
                let dm = di.mod_floor(&md).to_u64().unwrap();
                let g = dm.gcd(&modulus);
                let sub = modulus / g;
                let inv = if sub == 1 { 0 } else { mod_inv((dm / g) % sub, sub).expect("coprime after division") };
                (g, inv)
            })
            .collect();
        ModularSolver { modulus, rows, cols, u: red(&snf.u), v: red(&snf.v), diag }
    }

    pub fn solve(&self, b: &[u64]) -> Option<Vec<u64>> {
        let m = self.modulus as u128;
        let c: Vec<u64> = (0..self.rows)
            .map(|i| {
                (0..self.rows).fold(0u128, |acc, j| (acc + self.u[i][j] as u128 * b[j] as u128) % m) as u64
            })
            .collect();
        let mut y = vec![0u64; self.cols];
        for i in 0..self.rows {
            match self.diag.get(i) {
                Some(&(g, inv)) => {
                    if !c[i].is_multiple_of(g) {
                        return None;
                    }
                    let sub = self.modulus / g;
                    y[i] = if sub == 1 { 0 } else { ((c[i] / g) as u128 * inv as u128 % sub as u128) as u64 };
                }
                None => {
                    if c[i] != 0 {
                        return None;
                    }
                }
            }
        }
        Some(
            (0..self.cols)
                .map(|i| (0..self.cols).fold(0u128, |acc, j| (acc + self.v[i][j] as u128 * y[j] as u128) % m) as u64)
                .collect(),
        )
    }
}
