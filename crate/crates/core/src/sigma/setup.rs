use std::sync::Arc;

use super::group::FiniteGroup;
use crate::error::{Error, Result};
use crate::group::AbelianGroup;

/// One real place `v` of the base: the conjugation elements `c_w` of the
/// places above it and, optionally, `c_v` itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fiber {
    pub cw: Vec<u32>,
    pub cv: Option<u32>,
}

/// Finite group with a normal subgroup `H` of prime index `p`, a chosen
/// element `s` generating the quotient, and coefficient depth `m` for the
/// group ring `(Z/p^m)[H]`.
#[derive(Clone, Debug)]
pub struct GaloisSetup {
    group: FiniteGroup,
    p: u64,
    m: u32,
    h: Arc<Vec<u64>>,
    in_h: Vec<bool>,
    s: u32,
    reps: Vec<u32>,
    fibers: Vec<Fiber>,
}

impl GaloisSetup {
    pub fn new(group: FiniteGroup, h: &[u32], s: u32, p: u64, m: u32) -> Result<Self> {
        let n = group.order();
        let bad = |msg: &str| Err(Error::InvalidGroup(msg.to_string()));
        let mut in_h = vec![false; n];
        for &x in h {
            if x as usize >= n {
                return bad("subgroup element out of range");
            }
            in_h[x as usize] = true;
        }
        let hs: Vec<u32> = (0..n as u32).filter(|&x| in_h[x as usize]).collect();
        if !in_h[group.identity() as usize]
            || hs.iter().any(|&a| hs.iter().any(|&b| !in_h[group.mul(a, b) as usize]))
        {
            return bad("H is not a subgroup");
        }
        if hs.len() * p as usize != n {
            return bad("H does not have index p");
        }
        if group.elements().any(|g| hs.iter().any(|&x| !in_h[group.conj(g, x) as usize])) {
            return bad("H is not normal");
        }
        if in_h[s as usize] {
            return bad("s must not lie in H");
        }
        let reps: Vec<u32> = (0..p).map(|i| group.pow(s, i)).collect();
        Ok(GaloisSetup {
            group,
            p,
            m,
            h: Arc::new(hs.iter().map(|&x| x as u64).collect()),
            in_h,
            s,
            reps,
            fibers: Vec::new(),
        })
    }

    /// `prod Z/orders[i]` with `H` the elements whose coordinate at `factor`
    /// is divisible by `p`, and `s` the generator of that factor.
    pub fn abelian(orders: &[u64], factor: usize, p: u64, m: u32) -> Result<Self> {
        if factor >= orders.len() || !orders[factor].is_multiple_of(p) {
            return Err(Error::InvalidGroup(format!("factor {factor} has order not divisible by {p}")));
        }
        let structure = AbelianGroup::new(orders.to_vec());
        let group = FiniteGroup::abelian(orders);
        let h: Vec<u32> = (0..group.order())
            .filter(|&i| structure.decode(i)[factor].is_multiple_of(p))
            .map(|i| i as u32)
            .collect();
        let mut unit = vec![0; orders.len()];
        unit[factor] = 1;
        Self::new(group, &h, structure.encode(&unit) as u32, p, m)
    }

    pub fn with_fibers(mut self, fibers: Vec<Fiber>) -> Self {
        self.fibers = fibers;
        self
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Elements of `H`, sorted; labels of the group ring.
    pub fn h_labels(&self) -> &Arc<Vec<u64>> {
        &self.h
    }

    pub fn in_h(&self, x: u32) -> bool {
        self.in_h[x as usize]
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn reps(&self) -> &[u32] {
        &self.reps
    }

    pub fn fibers(&self) -> &[Fiber] {
        &self.fibers
    }

    pub fn h_is_abelian(&self) -> bool {
        let hs: Vec<u32> = self.h.iter().map(|&x| x as u32).collect();
        self.group.is_abelian_on(&hs)
    }

    /// The generator of `Sigma` on `H`: `h -> s h s^{-1}`.
    pub fn sigma(&self, h: u32) -> u32 {
        self.group.conj(self.s, h)
    }

    /// `sigma` as a permutation of the positions in `h_labels`.
    pub fn sigma_permutation(&self) -> Vec<usize> {
        self.h
            .iter()
            .map(|&x| self.h.binary_search(&(self.sigma(x as u32) as u64)).expect("H is normal"))
            .collect()
    }
}

/// Transfer `ver(g) = prod_i h_i` where `g x_i = x_{pi(i)} h_i` for the
/// representatives `x_i = s^i`.
pub fn transfer_cosets(setup: &GaloisSetup, g: u32) -> Result<u32> {
    transfer_with_reps(setup, setup.reps(), g)
}

/// Transfer computed with arbitrary coset representatives (one per coset).
pub fn transfer_with_reps(setup: &GaloisSetup, reps: &[u32], g: u32) -> Result<u32> {
    if !setup.h_is_abelian() {
        return Err(Error::NotAbelianKernel);
    }
    let grp = setup.group();
    let coset = |x: u32| {
        reps.iter()
            .position(|&r| setup.in_h(grp.mul(grp.inv(r), x)))
            .expect("representatives cover all cosets")
    };
    let mut acc = grp.identity();
    for &x in reps {
        let gx = grp.mul(g, x);
        let y = reps[coset(gx)];
        let h = grp.mul(grp.inv(y), gx);
        debug_assert!(setup.in_h(h));
        acc = grp.mul(acc, h);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f21() -> GaloisSetup {
        let g = FiniteGroup::semidirect(&[7], &[vec![2]], 3).unwrap();
        GaloisSetup::new(g, &(0..7).collect::<Vec<_>>(), 7, 3, 2).unwrap()
    }

    #[test]
    fn f21_transfer() {
        let st = f21();
        for h in 0..7u32 {
            // h + 2h + 4h = 7h = 0
            assert_eq!(transfer_cosets(&st, h).unwrap(), 0);
        }
        assert_eq!(transfer_cosets(&st, 0).unwrap(), 0);
        assert_eq!(st.sigma_permutation(), vec![0, 2, 4, 6, 1, 3, 5]);
    }

    #[test]
    fn rejects_non_normal_and_non_abelian() {
        let g = FiniteGroup::semidirect(&[7], &[vec![2]], 3).unwrap();
        // {e, s, s^2} has index 7, not 3
        assert!(GaloisSetup::new(g.clone(), &[0, 7, 14], 1, 3, 1).is_err());
        // S_3 x C_3 with H = S_3
        let s3 = FiniteGroup::semidirect(&[3], &[vec![2]], 2).unwrap();
        let table = (0..18u32)
            .map(|x| (0..18u32).map(|y| s3.mul(x % 6, y % 6) + 6 * ((x / 6 + y / 6) % 3)).collect())
            .collect();
        let prod = FiniteGroup::from_table(table).unwrap();
        let st = GaloisSetup::new(prod, &[0, 1, 2, 3, 4, 5], 6, 3, 1).unwrap();
        assert!(!st.h_is_abelian());
        assert!(matches!(transfer_cosets(&st, 1), Err(Error::NotAbelianKernel)));
    }
}
