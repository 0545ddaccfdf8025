use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::arith::ntheory::{is_prime, mod_pow, prime_divisors};
use crate::error::{Error, Result};
use crate::group::{mul_mod, ResidueGroup, UnitGroup};
use crate::numberfield::AbelianFieldSpec;

/// Which base field a class, function or group-ring element lives over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    /// classes in `(Z/f)^x`
    Q,
    /// classes in the index-`p` subgroup cut out by `L`
    L,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Q => "Q",
            Side::L => "L",
        })
    }
}

/// Finite level of modulus `f = f0 * p^a`.
///
/// The G-level is `(Z/f)^x`; the H-level is the kernel of
/// `(Z/f)^x -> Gal(L/Q)`, i.e. the residues whose reduction mod `f_L` is a
/// `p`-th power. Both sides have depth `a`: the norm character on either
/// level is reduction mod `p^a`.
#[derive(Clone)]
pub struct LevelData {
    p: u64,
    f0: u64,
    a: u32,
    modulus: u64,
    p_power: u64,
    s_primes: Vec<u64>,
    field: Arc<AbelianFieldSpec>,
    units: Arc<UnitGroup>,
    g_level: ResidueGroup,
    h_level: ResidueGroup,
}

impl LevelData {
    pub fn new(p: u64, f_l: u64, f0: u64, a: u32, s_primes: &[u64]) -> Result<Arc<Self>> {
        let invalid = |m: String| Err(Error::ConfigInvalid(m));
        if p < 3 || !is_prime(p) {
            return invalid(format!("p = {p} must be an odd prime"));
        }
        if a == 0 {
            return invalid("the p-exponent a must be at least 1".into());
        }
        if f0.is_multiple_of(p) {
            return invalid(format!("f0 = {f0} must be coprime to p = {p}"));
        }
        if !f0.is_multiple_of(f_l) {
            return invalid(format!("the conductor {f_l} of L must divide f0 = {f0}"));
        }
        let field = AbelianFieldSpec::new(p, f_l).map_err(|e| Error::ConfigInvalid(e.to_string()))?;
        let p_power = p.pow(a);
        let modulus = f0
            .checked_mul(p_power)
            .filter(|&m| m < 1 << 32)
            .ok_or_else(|| Error::ConfigInvalid("level modulus too large".into()))?;
        let mut s: Vec<u64> = s_primes.to_vec();
        s.sort_unstable();
        s.dedup();
        if !s.contains(&p) {
            return invalid(format!("p = {p} must lie in S"));
        }
        if !s.contains(&f_l) {
            return invalid(format!("the ramified prime {f_l} must lie in S"));
        }
        if s != prime_divisors(modulus) {
            return invalid(format!(
                "S = {s:?} must be exactly the primes dividing the modulus {modulus}"
            ));
        }
        let units = UnitGroup::new(modulus);
        let g_level = ResidueGroup::full(modulus);
        let h: Vec<u64> = g_level
            .residues()
            .iter()
            .copied()
            .filter(|&n| field.coset_of(n % f_l) == Some(0))
            .collect();
        let h_level = ResidueGroup::new(modulus, h);
        debug_assert_eq!(g_level.len(), h_level.len() * p as usize);
        Ok(Arc::new(LevelData {
            p,
            f0,
            a,
            modulus,
            p_power,
            s_primes: s,
            field,
            units,
            g_level,
            h_level,
        }))
    }

    /// Level with `f0 = f_L` and `S = {p, f_L}`.
    pub fn minimal(p: u64, f_l: u64, a: u32) -> Result<Arc<Self>> {
        Self::new(p, f_l, f_l, a, &[p, f_l])
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn f0(&self) -> u64 {
        self.f0
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    /// `p^a`, the modulus of the norm character and of the group rings.
    pub fn p_power(&self) -> u64 {
        self.p_power
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn s_primes(&self) -> &[u64] {
        &self.s_primes
    }

    pub fn field(&self) -> &Arc<AbelianFieldSpec> {
        &self.field
    }

    pub fn unit_group(&self) -> &Arc<UnitGroup> {
        &self.units
    }

    pub fn g_level(&self) -> &ResidueGroup {
        &self.g_level
    }

    pub fn h_level(&self) -> &ResidueGroup {
        &self.h_level
    }

    pub fn classes(&self, side: Side) -> &ResidueGroup {
        match side {
            Side::Q => &self.g_level,
            Side::L => &self.h_level,
        }
    }

    /// Depth `m(U)` of the G-level.
    pub fn depth_q(&self) -> u32 {
        self.a
    }

    /// Depth `m_L(V)` of the H-level.
    pub fn depth_l(&self) -> u32 {
        self.a
    }

    /// Transfer `G-level -> H-level`, the `p`-th power map.
    pub fn transfer(&self, x: u64) -> u64 {
        mod_pow(x % self.modulus, self.p, self.modulus)
    }

    pub fn mul(&self, x: u64, y: u64) -> u64 {
        mul_mod(x, y, self.modulus)
    }

    pub fn minus_one(&self) -> u64 {
        self.modulus - 1
    }
}

impl fmt::Debug for LevelData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "LevelData(p={}, f_L={}, f={}, a={}, S={:?})",
            self.p,
            self.field.conductor(),
            self.modulus,
            self.a,
            self.s_primes
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_levels() {
        let l63 = LevelData::minimal(3, 7, 2).unwrap();
        assert_eq!(l63.modulus(), 63);
        assert_eq!(l63.g_level().len(), 36);
        assert_eq!(l63.h_level().len(), 12);
        assert!(l63.h_level().contains(62));
        assert!(l63.h_level().contains(8));
        let l189 = LevelData::minimal(3, 7, 3).unwrap();
        assert_eq!(l189.h_level().len(), 36);
        for &x in l189.g_level().residues() {
            assert!(l189.h_level().contains(l189.transfer(x)));
        }
        assert_eq!(l63.depth_q() + 1, l63.depth_l() + 1);
    }

    #[test]
    fn rejects_invalid() {
        assert!(LevelData::new(3, 7, 7, 2, &[7]).is_err());
        assert!(LevelData::new(3, 7, 7, 2, &[3]).is_err());
        assert!(LevelData::new(3, 7, 7, 2, &[2, 3, 7]).is_err());
        assert!(LevelData::new(3, 7, 21, 2, &[3, 7]).is_err());
        assert!(LevelData::new(3, 7, 7, 0, &[3, 7]).is_err());
        assert!(LevelData::new(3, 7, 14, 2, &[2, 3, 7]).is_ok());
    }
}
