use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::function::LocallyConstantFn;
use super::level::{LevelData, Side};
use crate::arith::{cyclo_reduce_rational, p_valuation, PValuation};
use crate::dirichlet::{characters_of_group, DirichletCharacter, LValueEngine};
use crate::error::{Error, Result};
use crate::{CyclotomicNumber, ExactScalar, Rational};

/// How Q-side partial zeta values are assembled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ZetaRoute {
    /// `-f^{k-1} B_k(a/f) / k`
    Hurwitz,
    /// orthogonality over all characters mod `f`
    Characters,
}

/// Frobenius element given as the Artin symbol of a positive integer `n`
/// (for the Q side) or of the ideal `n o_L` twisted down to norm `n` (for
/// the L side, where `n` must be a norm class), so `N(g) = n` exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrobeniusChoice {
    pub side: Side,
    pub n: u64,
    pub class: u64,
}

impl FrobeniusChoice {
    pub fn new(level: &LevelData, side: Side, n: u64) -> Result<Self> {
        let f = level.modulus();
        if n == 0 || n.gcd(&f) != 1 {
            return Err(Error::NotCoprime { modulus: f });
        }
        let class = n % f;
        if !level.classes(side).contains(class) {
            return Err(Error::IncompatibleLevels(format!(
                "{n} does not define a class of the {side}-side level"
            )));
        }
        Ok(FrobeniusChoice { side, n, class })
    }

    /// `h_L = ver(g_K)`, with norm `n^p`.
    pub fn transfer(&self, level: &LevelData) -> Self {
        assert_eq!(self.side, Side::Q);
        let n = self.n.pow(level.p() as u32);
        FrobeniusChoice { side: Side::L, n, class: level.transfer(self.class) }
    }

    pub fn norm_power(&self, k: u32) -> Rational {
        Rational::from_integer(BigInt::from(self.n).pow(k))
    }
}

/// Norm character: reduction of the class mod `p^a`.
pub fn norm_character(level: &LevelData, side: Side, cls: u64) -> Result<u64> {
    let cls = cls % level.modulus();
    if !level.classes(side).contains(cls) {
        return Err(Error::IncompatibleLevels(format!("{cls} is not a class of the {side}-side level")));
    }
    Ok(cls % level.p_power())
}

type TableKey = (Side, ZetaRoute, u32);

/// Memoizing evaluator of partial zeta values at one level.
pub struct ZetaEngine {
    level: Arc<LevelData>,
    lvals: LValueEngine,
    characters: Vec<DirichletCharacter>,
    l_values: Mutex<HashMap<u32, Arc<Vec<CyclotomicNumber>>>>,
    tables: Mutex<HashMap<TableKey, Arc<Vec<Rational>>>>,
    scaling: bool,
}

impl ZetaEngine {
    pub fn new(level: Arc<LevelData>) -> Self {
        let group = level.unit_group().clone();
        let characters = characters_of_group(&group, None);
        ZetaEngine {
            lvals: LValueEngine::new(group),
            level,
            characters,
            l_values: Mutex::new(HashMap::new()),
            tables: Mutex::new(HashMap::new()),
            scaling: false,
        }
    }

    /// Multiply every `zeta_of`/`delta` value by `2^{-[K:Q]}`.
    pub fn with_scaling(mut self, scaling: bool) -> Self {
        self.scaling = scaling;
        self
    }

    pub fn level(&self) -> &Arc<LevelData> {
        &self.level
    }

    pub fn scaling(&self) -> bool {
        self.scaling
    }

    /// Partial zeta value of a class by the default route (Hurwitz on the
    /// Q side, induced characters on the L side).
    pub fn partial_zeta(&self, side: Side, cls: u64, k: u32) -> Result<Rational> {
        let route = match side {
            Side::Q => ZetaRoute::Hurwitz,
            Side::L => ZetaRoute::Characters,
        };
        self.partial_zeta_route(side, cls, k, route)
    }

    pub fn partial_zeta_route(&self, side: Side, cls: u64, k: u32, route: ZetaRoute) -> Result<Rational> {
        let classes = self.level.classes(side);
        let idx = classes.index_of(cls % self.level.modulus()).ok_or_else(|| {
            Error::IncompatibleLevels(format!("{cls} is not a class of the {side}-side level"))
        })?;
        Ok(self.table(side, k, route)?[idx].clone())
    }

    /// Partial zeta values of all classes of a side, indexed like
    /// `level.classes(side)`.
    pub fn table(&self, side: Side, k: u32, route: ZetaRoute) -> Result<Arc<Vec<Rational>>> {
        if k == 0 {
            return Err(Error::InvalidWeight);
        }
        let route = if side == Side::L { ZetaRoute::Characters } else { route };
        let key = (side, route, k);
        if let Some(t) = self.tables.lock().unwrap().get(&key) {
            return Ok(t.clone());
        }
        let t = Arc::new(match (side, route) {
            (Side::Q, ZetaRoute::Hurwitz) => self.q_hurwitz(k),
            (Side::Q, ZetaRoute::Characters) => self.q_characters(k)?,
            (Side::L, _) => self.l_characters(k)?,
        });
        self.tables.lock().unwrap().insert(key, t.clone());
        Ok(t)
    }

    fn q_hurwitz(&self, k: u32) -> Vec<Rational> {
        let f = self.level.modulus();
        let scale = -Rational::from_int(f as i64).pow(k as i32 - 1) / Rational::from_int(k as i64);
        self.level
            .g_level()
            .residues()
            .iter()
            .map(|&a| {
                let x = Rational::new(BigInt::from(a), BigInt::from(f));
                self.lvals.bernoulli_poly_value(k as usize, &x) * &scale
            })
            .collect()
    }

    fn character_l_values(&self, k: u32) -> Result<Arc<Vec<CyclotomicNumber>>> {
        if let Some(v) = self.l_values.lock().unwrap().get(&k) {
            return Ok(v.clone());
        }
        let s = self.level.s_primes();
        let vals: Result<Vec<_>> =
            self.characters.iter().map(|chi| self.lvals.l_value_neg(chi, k, s)).collect();
        let vals = Arc::new(vals?);
        self.l_values.lock().unwrap().insert(k, vals.clone());
        Ok(vals)
    }

    fn inverse_value(&self, chi: &DirichletCharacter, x: u64) -> CyclotomicNumber {
        let field = self.lvals.field();
        let n = field.order();
        let e = chi.value_exponent(x).expect("classes are units") * (n / chi.value_order());
        CyclotomicNumber::root_power(field, (n - e % n) % n)
    }

    /// `|A|^{-1} sum_j conj(chi_j)(x) * weight_j` for every class `x` of `classes`.
    fn orthogonality_sum(
        &self,
        classes: &[u64],
        terms: &[(&DirichletCharacter, CyclotomicNumber)],
        group_order: usize,
    ) -> Result<Vec<Rational>> {
        let inv_order = Rational::new(BigInt::one(), BigInt::from(group_order));
        classes
            .iter()
            .map(|&x| {
                let mut acc = CyclotomicNumber::zero(self.lvals.field());
                for (chi, w) in terms {
                    if !w.is_zero() {
                        acc = &acc + &(&self.inverse_value(chi, x) * w);
                    }
                }
                cyclo_reduce_rational(&acc).map(|r| r * &inv_order)
            })
            .collect()
    }

    fn q_characters(&self, k: u32) -> Result<Vec<Rational>> {
        let lv = self.character_l_values(k)?;
        let terms: Vec<_> = self.characters.iter().zip(lv.iter().cloned()).collect();
        let classes = self.level.g_level().residues();
        self.orthogonality_sum(classes, &terms, classes.len())
    }

    /// `zeta_L(1-k, y) = |H|^{-1} sum_chi chi(y)^{-1} prod_{psi|H = chi} L_S(1-k, psi)`.
    fn l_characters(&self, k: u32) -> Result<Vec<Rational>> {
        let lv = self.character_l_values(k)?;
        let h = self.level.h_level().residues();
        let mut groups: BTreeMap<Vec<u64>, (usize, CyclotomicNumber)> = BTreeMap::new();
        for (i, chi) in self.characters.iter().enumerate() {
            let n = chi.value_order();
            let restriction: Vec<u64> = h
                .iter()
                .map(|&y| chi.value_exponent(y).expect("unit") * (self.lvals.field().order() / n))
                .collect();
            groups
                .entry(restriction)
                .and_modify(|(_, prod)| *prod = &*prod * &lv[i])
                .or_insert_with(|| (i, lv[i].clone()));
        }
        debug_assert_eq!(groups.len(), h.len());
        let terms: Vec<_> = groups
            .values()
            .map(|(i, prod)| (&self.characters[*i], prod.clone()))
            .collect();
        self.orthogonality_sum(h, &terms, h.len())
    }

    fn scale_factor(&self, side: Side) -> Rational {
        let r = match side {
            Side::Q => 1,
            Side::L => self.level.p() as i32,
        };
        Rational::from_int(2).pow(-r)
    }

    /// `sum_x eps(x) zeta(1-k, x)` without the optional scaling.
    pub fn zeta_of_raw(&self, eps: &LocallyConstantFn, k: u32) -> Result<Rational> {
        let side = eps.side();
        let table = self.table(side, k, ZetaRoute::Hurwitz)?;
        let mut acc = Rational::zero();
        for (v, z) in eps.values().iter().zip(table.iter()) {
            if !v.is_zero() {
                acc += v * z;
            }
        }
        Ok(acc)
    }

    pub fn zeta_of(&self, eps: &LocallyConstantFn, k: u32) -> Result<Rational> {
        let z = self.zeta_of_raw(eps, k)?;
        Ok(if self.scaling { z * self.scale_factor(eps.side()) } else { z })
    }

    /// `Delta_g(1-k, eps) = zeta(1-k, eps) - N(g)^k zeta(1-k, eps_g)` with
    /// `eps_g(x) = eps(g x)`.
    pub fn delta(&self, g: &FrobeniusChoice, eps: &LocallyConstantFn, k: u32) -> Result<Rational> {
        if g.side != eps.side() {
            return Err(Error::IncompatibleLevels(format!(
                "Frobenius choice on the {} side, function on the {} side",
                g.side,
                eps.side()
            )));
        }
        let shifted = eps.shift(&self.level, g.class);
        Ok(self.zeta_of(eps, k)? - g.norm_power(k) * self.zeta_of(&shifted, k)?)
    }

    /// `Delta_g(1-k, delta^(x))` for every class `x`, indexed like the classes.
    pub fn delta_table(&self, g: &FrobeniusChoice, k: u32) -> Result<Vec<Rational>> {
        let side = g.side;
        let table = self.table(side, k, ZetaRoute::Hurwitz)?;
        let classes = self.level.classes(side);
        let nk = g.norm_power(k);
        let scale = if self.scaling { self.scale_factor(side) } else { Rational::one() };
        // eps_g = delta^(g^{-1} x)
        let ginv = classes
            .residues()
            .iter()
            .copied()
            .find(|&y| self.level.mul(y, g.class) == 1)
            .expect("classes form a group");
        Ok(classes
            .residues()
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let j = classes.index_of(self.level.mul(ginv, x)).expect("closed under products");
                (&table[i] - &nk * &table[j]) * &scale
            })
            .collect())
    }

    /// Valuation of `sum_k Delta_g(1-k, eps_k)` after checking that every
    /// `u -> sum_k eps_k(x) u^{k-1}` is `p`-integral on the norm residue
    /// class of `x`.
    pub fn dr_integrality(&self, g: &FrobeniusChoice, family: &[(u32, LocallyConstantFn)]) -> Result<PValuation> {
        let level = &self.level;
        let p = level.p();
        let classes = level.classes(g.side);
        let max_k = family.iter().map(|(k, _)| *k).max().unwrap_or(1);
        let pa = Rational::from_int(level.p_power() as i64);
        for &x in classes.residues() {
            let base = Rational::from_int((x % level.p_power()) as i64);
            // sample at u = n_x + p^a t, t = 0..=deg, then take forward differences
            let mut samples: Vec<Rational> = (0..max_k)
                .map(|t| {
                    let u = &base + &pa * Rational::from_int(t as i64);
                    family
                        .iter()
                        .map(|(k, eps)| eps.value(x) * u.pow(*k as i32 - 1))
                        .fold(Rational::zero(), |a, b| a + b)
                })
                .collect();
            for _ in 0..samples.len() {
                if p_valuation(&samples[0], p) < PValuation::Finite(0) {
                    return Err(Error::HypothesisViolated { class: x });
                }
                samples = samples.windows(2).map(|w| &w[1] - &w[0]).collect();
                if samples.is_empty() {
                    break;
                }
            }
        }
        let mut total = Rational::zero();
        for (k, eps) in family {
            if !eps.is_zero() {
                total += self.delta(g, eps, *k)?;
            }
        }
        Ok(p_valuation(&total, p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zeta::function::even_orbit_basis;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn sum(v: &[Rational]) -> Rational {
        v.iter().fold(Rational::zero(), |a, b| a + b)
    }

    #[test]
    fn q_side_examples() {
        let level = LevelData::new(3, 7, 7, 1, &[3, 7]).unwrap();
        let eng = ZetaEngine::new(level);
        // sum over classes mod 21: zeta(-1)(1-3)(1-7) = -1
        assert_eq!(sum(&eng.table(Side::Q, 2, ZetaRoute::Hurwitz).unwrap()), r(-1, 1));
        let eng63 = ZetaEngine::new(LevelData::minimal(3, 7, 2).unwrap());
        let t = eng63.table(Side::Q, 2, ZetaRoute::Hurwitz).unwrap();
        assert_eq!(sum(&t), r(-1, 1));
        assert_eq!(*t, *eng63.table(Side::Q, 2, ZetaRoute::Characters).unwrap());
    }

    #[test]
    fn l_side_sum() {
        let eng = ZetaEngine::new(LevelData::minimal(3, 7, 2).unwrap());
        let t = eng.table(Side::L, 2, ZetaRoute::Characters).unwrap();
        // zeta_L(-1) = -1/21, Euler factors (1-7) at the ramified prime and
        // (1-27) at the inert prime 3
        assert_eq!(sum(&t), r(-1, 21) * r(-6, 1) * r(-26, 1));
        assert_eq!(sum(&t), r(-52, 7));
    }

    #[test]
    fn delta_basics() {
        let level = LevelData::minimal(3, 7, 2).unwrap();
        let eng = ZetaEngine::new(level.clone());
        let one = FrobeniusChoice::new(&level, Side::Q, 1).unwrap();
        let d = LocallyConstantFn::indicator(&level, Side::Q, 1).unwrap();
        assert!(eng.delta(&one, &d, 2).unwrap().is_zero());
        let g = FrobeniusChoice::new(&level, Side::Q, 2).unwrap();
        let table = eng.delta_table(&g, 2).unwrap();
        for (i, &x) in level.g_level().residues().iter().enumerate() {
            let dx = LocallyConstantFn::indicator(&level, Side::Q, x).unwrap();
            assert_eq!(eng.delta(&g, &dx, 2).unwrap(), table[i]);
        }
        let h = g.transfer(&level);
        assert_eq!(h.n, 8);
        assert_eq!(h.class, 8);
        assert!(FrobeniusChoice::new(&level, Side::L, 2).is_err());
        assert!(FrobeniusChoice::new(&level, Side::Q, 3).is_err());
        assert_eq!(norm_character(&level, Side::Q, 2).unwrap(), 2);
        assert_eq!(norm_character(&level, Side::L, 8).unwrap(), 8);
        assert_eq!(norm_character(&level, Side::Q, 1).unwrap(), 1);
    }

    #[test]
    fn integrality_hypothesis() {
        let level = LevelData::minimal(3, 7, 2).unwrap();
        let eng = ZetaEngine::new(level.clone());
        let g = FrobeniusChoice::new(&level, Side::Q, 2).unwrap();
        assert_eq!(eng.dr_integrality(&g, &[]).unwrap(), PValuation::Infinite);
        let bad = LocallyConstantFn::indicator(&level, Side::Q, 4).unwrap().scale(&r(1, 3), 3);
        assert!(matches!(
            eng.dr_integrality(&g, &[(2, bad)]),
            Err(Error::HypothesisViolated { class: 4 })
        ));
        for eps in even_orbit_basis(&level, Side::Q) {
            assert!(eng.dr_integrality(&g, &[(2, eps)]).unwrap() >= PValuation::Finite(0));
        }
    }
}
