use crate::error::{Error, Result};
use crate::group::AbelianGroup;

/// Finite group given by its multiplication table on `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<u32>>,
    inverse: Vec<u32>,
    identity: u32,
}

impl FiniteGroup {
    /// Validates closure, identity, inverses and associativity.
    pub fn from_table(table: Vec<Vec<u32>>) -> Result<Self> {
        let n = table.len();
        let bad = |m: &str| Err(Error::InvalidGroup(m.to_string()));
        if n == 0 || table.iter().any(|row| row.len() != n || row.iter().any(|&x| x as usize >= n)) {
            return bad("table must be square with entries in range");
        }
        let Some(identity) = (0..n).find(|&e| (0..n).all(|x| table[e][x] as usize == x && table[x][e] as usize == x))
        else {
            return bad("no identity element");
        };
        let mut inverse = vec![0u32; n];
        for x in 0..n {
            match (0..n).find(|&y| table[x][y] as usize == identity && table[y][x] as usize == identity) {
                Some(y) => inverse[x] = y as u32,
                None => return bad("element without inverse"),
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b] as usize;
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c] as usize] {
                        return bad("multiplication is not associative");
                    }
                }
            }
        }
        Ok(FiniteGroup { table, inverse, identity: identity as u32 })
    }

    fn from_trusted_table(table: Vec<Vec<u32>>, identity: u32) -> Self {
        let n = table.len();
        let mut inverse = vec![0u32; n];
        for (x, row) in table.iter().enumerate() {
            inverse[x] = row.iter().position(|&y| y == identity).expect("group table") as u32;
        }
        FiniteGroup { table, inverse, identity }
    }

    pub fn cyclic(n: u64) -> Self {
        Self::abelian(&[n])
    }

    /// Direct product of cyclic groups, elements in mixed-radix encoding.
    pub fn abelian(orders: &[u64]) -> Self {
        let g = AbelianGroup::new(orders.to_vec());
        let elems: Vec<Vec<u64>> = g.elements().collect();
        let table = elems
            .iter()
            .map(|a| elems.iter().map(|b| g.encode(&g.add(a, b)) as u32).collect())
            .collect();
        Self::from_trusted_table(table, 0)
    }

    /// `H x| C_p` with `H = prod Z/orders[i]` and the generator acting on
    /// exponent vectors by `action` (`sigma(h)_r = sum_c action[r][c] h_c`).
    /// Element `h + |H| * i` is `(h, s^i)`; `H` is `0..|H|`.
    pub fn semidirect(orders: &[u64], action: &[Vec<i64>], p: u64) -> Result<Self> {
        let h = AbelianGroup::new(orders.to_vec());
        let n = h.order() as usize;
        let rank = orders.len();
        if action.len() != rank || action.iter().any(|row| row.len() != rank) {
            return Err(Error::InvalidGroup("action matrix must match the kernel rank".into()));
        }
        let apply = |v: &[u64]| -> Vec<u64> {
            (0..rank)
                .map(|r| {
                    let s: i128 = (0..rank).map(|c| action[r][c] as i128 * v[c] as i128).sum();
                    s.rem_euclid(orders[r] as i128) as u64
                })
                .collect()
        };
        let elems: Vec<Vec<u64>> = h.elements().collect();
        let sigma: Vec<usize> = elems.iter().map(|v| h.encode(&apply(v))).collect();
        // sigma must be an automorphism of order dividing p
        let mut seen = vec![false; n];
        for &x in &sigma {
            if std::mem::replace(&mut seen[x], true) {
                return Err(Error::InvalidGroup("action is not bijective".into()));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = h.encode(&h.add(&elems[a], &elems[b]));
                if sigma[ab] != h.encode(&h.add(&elems[sigma[a]], &elems[sigma[b]])) {
                    return Err(Error::InvalidGroup("action is not a homomorphism".into()));
                }
            }
        }
        let mut powers = vec![(0..n).collect::<Vec<usize>>()];
        for i in 1..=p as usize {
            let prev = &powers[i - 1];
            powers.push((0..n).map(|x| sigma[prev[x]]).collect());
        }
        if powers[p as usize].iter().enumerate().any(|(x, &y)| x != y) {
            return Err(Error::InvalidGroup("action does not have order dividing p".into()));
        }
        let pu = p as usize;
        let total = n * pu;
        let mut table = vec![vec![0u32; total]; total];
        for i in 0..pu {
            for h1 in 0..n {
                for j in 0..pu {
                    for h2 in 0..n {
                        let hh = h.encode(&h.add(&elems[h1], &elems[powers[i][h2]]));
                        table[h1 + n * i][h2 + n * j] = (hh + n * ((i + j) % pu)) as u32;
                    }
                }
            }
        }
        Ok(Self::from_trusted_table(table, 0))
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> u32 {
        self.identity
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize][b as usize]
    }

    pub fn inv(&self, a: u32) -> u32 {
        self.inverse[a as usize]
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        (0..e).fold(self.identity, |acc, _| self.mul(acc, a))
    }

    pub fn conj(&self, s: u32, x: u32) -> u32 {
        self.mul(self.mul(s, x), self.inv(s))
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.order() as u32
    }

    pub fn is_abelian_on(&self, subset: &[u32]) -> bool {
        subset
            .iter()
            .all(|&a| subset.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructions() {
        let c6 = FiniteGroup::cyclic(6);
        assert_eq!(c6.pow(1, 6), c6.identity());
        assert!(FiniteGroup::from_table(vec![vec![0, 1], vec![1, 1]]).is_err());
        let f21 = FiniteGroup::semidirect(&[7], &[vec![2]], 3).unwrap();
        assert_eq!(f21.order(), 21);
        assert!(FiniteGroup::from_table((0..21).map(|a| (0..21).map(|b| f21.mul(a, b)).collect()).collect()).is_ok());
        let all: Vec<u32> = f21.elements().collect();
        assert!(!f21.is_abelian_on(&all));
        // s h s^{-1} = 2h
        assert_eq!(f21.conj(7, 1), 2);
        assert!(FiniteGroup::semidirect(&[7], &[vec![3]], 3).is_err());
    }
}
