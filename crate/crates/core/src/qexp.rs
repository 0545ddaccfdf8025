//! Formal q-expansions: Eisenstein coefficient builders over `Q` and `L`,
//! restriction from `L` to `Q`, the operator `U_beta`, and the coefficient
//! congruence for the difference `E`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::ntheory::divisors;
use crate::arith::{p_valuation, PValuation};
use crate::dirichlet::{l_value_neg, DirichletCharacter};
use crate::error::{Error, Result};
use crate::group::UnitGroup;
use crate::numberfield::cache::EnumerationCache;
use crate::numberfield::{artin_symbol_level, factor_principal, AlgebraicInt, IdealFactored};
use crate::zeta::{LevelData, LocallyConstantFn, Side, ZetaEngine};
use crate::{ExactScalar, Rational};

/// `c(0) + sum_{mu=1}^{B} c(mu) q^mu`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QExpansionQ {
    pub weight: u32,
    pub bound: u64,
    #[serde(serialize_with = "ser_rational")]
    pub constant: Rational,
    #[serde(serialize_with = "ser_rationals")]
    pub coeffs: Vec<Rational>,
}

/// `c(0) + sum_{nu >> 0, tr nu <= B'} c(nu) q_L^nu`, keyed by period
/// coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QExpansionL {
    pub weight: u32,
    pub degree: u64,
    pub trace_bound: u64,
    pub constant: Rational,
    pub coeffs: BTreeMap<AlgebraicInt, Rational>,
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

fn ser_rationals<S: serde::Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|r| r.to_string()))
}

impl QExpansionQ {
    pub fn zero(weight: u32, bound: u64) -> Self {
        QExpansionQ { weight, bound, constant: Rational::zero(), coeffs: vec![Rational::zero(); bound as usize] }
    }

    /// `c(mu)` for `1 <= mu <= bound`.
    pub fn coeff(&self, mu: u64) -> &Rational {
        &self.coeffs[(mu - 1) as usize]
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.weight != other.weight || self.bound != other.bound {
            return Err(Error::InsufficientBound { have: other.bound, need: self.bound });
        }
        Ok(QExpansionQ {
            weight: self.weight,
            bound: self.bound,
            constant: &self.constant - &other.constant,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.coeffs.iter().all(Zero::is_zero)
    }
}

fn int_pow(n: u64, e: u32) -> Rational {
    Rational::from_integer(BigInt::from(n).pow(e))
}

fn check_weight(k: u32) -> Result<()> {
    if k < 2 || k % 2 == 1 {
        return Err(Error::InvalidWeight);
    }
    Ok(())
}

/// Divisor-sum coefficients `c(mu) = sum_{d | mu, d coprime to S} eps(d) d^{k-1}`.
fn divisor_sum_expansion(
    eps: impl Fn(u64) -> Rational,
    s_primes: &[u64],
    constant: Rational,
    k: u32,
    bound: u64,
) -> QExpansionQ {
    let coeffs = (1..=bound)
        .map(|mu| {
            divisors(mu)
                .into_iter()
                .filter(|d| s_primes.iter().all(|q| d % q != 0))
                .map(|d| eps(d) * int_pow(d, k - 1))
                .fold(Rational::zero(), |a, b| a + b)
        })
        .collect();
    QExpansionQ { weight: k, bound, constant, coeffs }
}

/// Classical level-one Eisenstein series `zeta(1-k)/2 + sum sigma_{k-1}(mu) q^mu`.
pub fn eisenstein_level_one(k: u32, bound: u64) -> Result<QExpansionQ> {
    check_weight(k)?;
    let trivial = DirichletCharacter::trivial(UnitGroup::new(1));
    let zeta = l_value_neg(&trivial, k, &[])?.to_scalar()?;
    Ok(divisor_sum_expansion(|_| Rational::one(), &[], zeta / Rational::from_int(2), k, bound))
}

pub fn eisenstein_q(engine: &ZetaEngine, eps: &LocallyConstantFn, k: u32, bound: u64) -> Result<QExpansionQ> {
    check_weight(k)?;
    if eps.side() != Side::Q {
        return Err(Error::FlagViolation("expected a Q-side function".into()));
    }
    if !eps.is_even() {
        return Err(Error::NotEven);
    }
    let level = engine.level();
    let f = level.modulus();
    let constant = engine.zeta_of_raw(eps, k)? / Rational::from_int(2);
    Ok(divisor_sum_expansion(|d| eps.value(d % f), level.s_primes(), constant, k, bound))
}

/// `eps_L(b) N(b)^{k-1}` for an ideal coprime to `S`.
fn ideal_term(level: &LevelData, eps_l: &LocallyConstantFn, b: &IdealFactored, k: u32) -> Result<Rational> {
    let sym = artin_symbol_level(b, level)?;
    Ok(eps_l.value(sym) * int_pow(b.norm(), k - 1))
}

pub fn eisenstein_l(
    engine: &ZetaEngine,
    eps_l: &LocallyConstantFn,
    k: u32,
    trace_bound: u64,
    cache: &EnumerationCache,
) -> Result<QExpansionL> {
    check_weight(k)?;
    if eps_l.side() != Side::L {
        return Err(Error::FlagViolation("expected an L-side function".into()));
    }
    if !eps_l.is_even() {
        return Err(Error::NotEven);
    }
    let level = engine.level();
    let field = level.field();
    let s = level.s_primes();
    let mut coeffs = BTreeMap::new();
    for t in 1..=trace_bound {
        for nu in cache.tot_pos(field, t as i64)? {
            let mut c = Rational::zero();
            for b in factor_principal(field, &nu)?.divisors_coprime_to(s) {
                c += ideal_term(level, eps_l, &b, k)?;
            }
            coeffs.insert(nu, c);
        }
    }
    let constant = engine.zeta_of_raw(eps_l, k)? / Rational::from_int(2).pow(field.degree() as i32);
    Ok(QExpansionL { weight: k, degree: field.degree(), trace_bound, constant, coeffs })
}

fn trace_of(nu: &AlgebraicInt) -> i64 {
    -nu.coords().iter().sum::<i64>()
}

/// `c_*(mu) = sum_{tr nu = mu} c(nu)`, weight multiplied by `[L:Q]`.
pub fn restrict(f: &QExpansionL, bound: u64) -> Result<QExpansionQ> {
    if f.trace_bound < bound {
        return Err(Error::InsufficientTraceBound { have: f.trace_bound, need: bound });
    }
    let mut out = QExpansionQ::zero(f.weight * f.degree as u32, bound);
    out.constant = f.constant.clone();
    for (nu, c) in &f.coeffs {
        let t = trace_of(nu) as u64;
        if (1..=bound).contains(&t) {
            out.coeffs[(t - 1) as usize] += c;
        }
    }
    Ok(out)
}

/// `c'(mu) = c(beta mu)` for `mu <= new_bound`.
pub fn hecke_u_to(f: &QExpansionQ, beta: u64, new_bound: u64) -> Result<QExpansionQ> {
    let need = beta * new_bound;
    if beta == 0 || need > f.bound {
        return Err(Error::InsufficientBound { have: f.bound, need });
    }
    Ok(QExpansionQ {
        weight: f.weight,
        bound: new_bound,
        constant: f.constant.clone(),
        coeffs: (1..=new_bound).map(|mu| f.coeff(beta * mu).clone()).collect(),
    })
}

pub fn hecke_u(f: &QExpansionQ, beta: u64) -> Result<QExpansionQ> {
    hecke_u_to(f, beta, f.bound / beta.max(1))
}

fn check_flags(eps_l: &LocallyConstantFn) -> Result<()> {
    if eps_l.side() != Side::L {
        return Err(Error::FlagViolation("expected an L-side function".into()));
    }
    if !eps_l.is_even() {
        return Err(Error::FlagViolation("function is not even".into()));
    }
    if !eps_l.is_p_integral() {
        return Err(Error::FlagViolation("function is not p-integral".into()));
    }
    Ok(())
}

/// `E = U_p(restrict(G_{k, eps_L})) - G_{pk, eps_L o ver}` up to `q^B`.
pub fn eisenstein_difference(
    engine: &ZetaEngine,
    eps_l: &LocallyConstantFn,
    k: u32,
    bound: u64,
    cache: &EnumerationCache,
) -> Result<QExpansionQ> {
    check_flags(eps_l)?;
    let level = engine.level();
    let p = level.p();
    let g_l = eisenstein_l(engine, eps_l, k, p * bound, cache)?;
    let restricted = restrict(&g_l, p * bound)?;
    let thinned = hecke_u_to(&restricted, p, bound)?;
    let pulled = eps_l.compose_transfer(level)?;
    let g_q = eisenstein_q(engine, &pulled, p as u32 * k, bound)?;
    thinned.sub(&g_q)
}

#[derive(Clone, Debug, Serialize)]
pub struct CoefficientRow {
    pub mu: u64,
    pub value: String,
    pub valuation: PValuation,
}

#[derive(Clone, Debug, Serialize)]
pub struct QExpCongruenceReport {
    pub k: u32,
    pub bound: u64,
    pub constant_term: String,
    /// constant term equals `2^{-p} zeta_L(1-k, eps_L) - 2^{-1} zeta(1-pk, eps_L o ver)`
    pub constant_term_matches: bool,
    pub coefficients: Vec<CoefficientRow>,
    /// `v_p(c(mu)) >= 1` for every `1 <= mu <= B`
    pub verdict: bool,
    /// `U_p o restrict` agrees with the direct sum over pairs `(b, nu)`
    pub routes_agree: bool,
    pub fixed_pairs: usize,
    pub moved_orbits: usize,
    /// fixed pairs are exactly `(a o_L, mu)` for `a | mu` coprime to `S`
    pub fixed_pairs_match: bool,
    /// every moved orbit sums to a multiple of `p`
    pub moved_orbits_divisible: bool,
    /// fixed contributions agree with the Q-side terms mod `p`
    pub fermat_reduction: bool,
}

/// The pair sum over `(b, nu)` with `tr nu = p mu`, found by filtering all
/// ideals of norm dividing `N(nu)` by containment, together with its
/// `Sigma`-orbit bookkeeping.
struct PairRoute {
    coeffs: Vec<Rational>,
    fixed_pairs: usize,
    moved_orbits: usize,
    fixed_pairs_match: bool,
    moved_orbits_divisible: bool,
    fermat_reduction: bool,
}

fn pair_route(
    engine: &ZetaEngine,
    eps_l: &LocallyConstantFn,
    k: u32,
    bound: u64,
    cache: &EnumerationCache,
) -> Result<PairRoute> {
    let level = engine.level();
    let field = level.field();
    let p = level.p();
    let s = level.s_primes();
    let f = level.modulus();
    let norm_bound = bound.pow(p as u32);
    let ideals = cache.ideals(field, norm_bound, s)?;
    let mut out = PairRoute {
        coeffs: Vec::new(),
        fixed_pairs: 0,
        moved_orbits: 0,
        fixed_pairs_match: true,
        moved_orbits_divisible: true,
        fermat_reduction: true,
    };
    for mu in 1..=bound {
        let mut total = Rational::zero();
        let mut orbit_sums: BTreeMap<(AlgebraicInt, IdealFactored), Rational> = BTreeMap::new();
        let mut fixed_here = Vec::new();
        for nu in cache.tot_pos(field, (p * mu) as i64)? {
            let norm: u64 = num_traits::ToPrimitive::to_u64(&field.norm(&nu)).expect("small norm");
            let principal = factor_principal(field, &nu)?;
            for b in ideals.iter().filter(|b| norm.is_multiple_of(b.norm()) && principal.is_divisible_by(b)) {
                let term = ideal_term(level, eps_l, b, k)?;
                total += &term;
                let fixed = field.sigma(&nu, 1) == nu && b.sigma(field, 1) == *b;
                if fixed {
                    fixed_here.push((nu.clone(), b.clone(), term));
                } else {
                    // orbit key: least (nu, b) in the orbit
                    let key = (0..p)
                        .map(|r| (field.sigma(&nu, r), b.sigma(field, r)))
                        .min()
                        .expect("nonempty orbit");
                    *orbit_sums.entry(key).or_insert_with(Rational::zero) += term;
                }
            }
        }
        // fixed pairs: nu = mu and b = a o_L with a | mu coprime to S
        let expected: Vec<u64> = divisors(mu).into_iter().filter(|d| s.iter().all(|q| d % q != 0)).collect();
        let mu_int = field.from_int(mu as i64);
        let mut fixed_norms: Vec<u64> = Vec::new();
        for (nu, b, term) in &fixed_here {
            if *nu != mu_int {
                out.fixed_pairs_match = false;
            }
            let a = (1..=mu).find(|&a| a.pow(p as u32) == b.norm()).unwrap_or(0);
            if a == 0 || IdealFactored::unit().mul(b) != factor_principal(field, &field.from_int(a as i64))? {
                out.fixed_pairs_match = false;
                continue;
            }
            fixed_norms.push(a);
            // eps_L(a o_L) a^{p(k-1)} = (eps_L o ver)(a) a^{pk-1} mod p
            let q_term = eps_l.value(level.transfer(a % f)) * int_pow(a, p as u32 * k - 1);
            if p_valuation(&(term - q_term), p) < PValuation::Finite(1) {
                out.fermat_reduction = false;
            }
        }
        fixed_norms.sort_unstable();
        if fixed_norms != expected {
            out.fixed_pairs_match = false;
        }
        out.fixed_pairs += fixed_here.len();
        out.moved_orbits += orbit_sums.len();
        if orbit_sums.values().any(|v| p_valuation(v, p) < PValuation::Finite(1)) {
            out.moved_orbits_divisible = false;
        }
        out.coeffs.push(total);
    }
    Ok(out)
}

pub fn verify_qexp_congruence(
    engine: &ZetaEngine,
    eps_l: &LocallyConstantFn,
    k: u32,
    bound: u64,
    cache: &EnumerationCache,
) -> Result<QExpCongruenceReport> {
    let level = engine.level();
    let p = level.p();
    let e = eisenstein_difference(engine, eps_l, k, bound, cache)?;
    let pulled = eps_l.compose_transfer(level)?;
    let expected_constant = engine.zeta_of_raw(eps_l, k)? / Rational::from_int(2).pow(p as i32)
        - engine.zeta_of_raw(&pulled, p as u32 * k)? / Rational::from_int(2);
    let pairs = pair_route(engine, eps_l, k, bound, cache)?;
    let g_q = eisenstein_q(engine, &pulled, p as u32 * k, bound)?;
    let routes_agree = (1..=bound).all(|mu| {
        pairs.coeffs[(mu - 1) as usize].clone() - g_q.coeff(mu) == *e.coeff(mu)
    });
    let coefficients: Vec<CoefficientRow> = (1..=bound)
        .map(|mu| {
            let c = e.coeff(mu);
            CoefficientRow { mu, value: c.to_string(), valuation: p_valuation(c, p) }
        })
        .collect();
    let verdict = coefficients.iter().all(|r| r.valuation >= PValuation::Finite(1));
    Ok(QExpCongruenceReport {
        k,
        bound,
        constant_term: e.constant.to_string(),
        constant_term_matches: e.constant == expected_constant,
        coefficients,
        verdict,
        routes_agree,
        fixed_pairs: pairs.fixed_pairs,
        moved_orbits: pairs.moved_orbits,
        fixed_pairs_match: pairs.fixed_pairs_match,
        moved_orbits_divisible: pairs.moved_orbits_divisible,
        fermat_reduction: pairs.fermat_reduction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn level_one_weight_four() {
        let e4 = eisenstein_level_one(4, 10).unwrap();
        assert_eq!(e4.constant, r(1, 240));
        assert_eq!(*e4.coeff(1), r(1, 1));
        assert_eq!(*e4.coeff(2), r(9, 1));
        assert!(eisenstein_level_one(3, 10).is_err());
    }

    #[test]
    fn hecke_and_restrict_basics() {
        let mut f = QExpansionQ::zero(4, 12);
        f.coeffs[5] = r(1, 1);
        f.constant = r(1, 7);
        let u = hecke_u(&f, 3).unwrap();
        assert_eq!(u.bound, 4);
        assert_eq!(*u.coeff(2), r(1, 1));
        assert_eq!(u.constant, r(1, 7));
        assert_eq!(hecke_u(&f, 1).unwrap(), f);
        assert!(matches!(hecke_u_to(&f, 3, 5), Err(Error::InsufficientBound { .. })));
        let zero_l = QExpansionL {
            weight: 2,
            degree: 3,
            trace_bound: 4,
            constant: Rational::zero(),
            coeffs: BTreeMap::new(),
        };
        assert!(restrict(&zero_l, 4).unwrap().is_zero());
        assert!(matches!(restrict(&zero_l, 5), Err(Error::InsufficientTraceBound { .. })));
    }

    #[test]
    fn eisenstein_l_small() {
        let level = LevelData::minimal(3, 7, 2).unwrap();
        let eng = ZetaEngine::new(level.clone());
        let one = LocallyConstantFn::constant(&level, Side::L, Rational::one());
        let cache = EnumerationCache::disabled();
        let g = eisenstein_l(&eng, &one, 2, 4, &cache).unwrap();
        let field = level.field();
        assert_eq!(g.coeffs[&field.one()], r(1, 1));
        for (nu, c) in &g.coeffs {
            assert_eq!(g.coeffs[&field.sigma(nu, 1)], *c);
        }
        let eta = AlgebraicInt::new(vec![1, 0, 0]);
        assert!(factor_principal(field, &eta).unwrap().is_unit());
        let not_even = LocallyConstantFn::indicator(&level, Side::L, 1).unwrap();
        assert!(matches!(eisenstein_l(&eng, &not_even, 2, 2, &cache), Err(Error::NotEven)));
    }
}
