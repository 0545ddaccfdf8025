//! Scenario configuration, orchestration of every check, and versioned JSON
//! reports.
//!
//! A scenario is a TOML document:
//!
//! ```toml
//! p = 3                 # odd prime, the degree of L
//! f_l = 7               # prime conductor of L, 1 mod p
//! s = [3, 7]            # exactly the primes dividing f0 * p^a
//! a = 2                 # p-exponent of the modulus
//! f0 = 7                # prime-to-p part of the modulus (default f_l)
//! k = [2, 4]            # weights
//! g = [2, 5]            # Frobenius choices, integers prime to the modulus
//! epsilon_basis = "even-orbits"   # or "table" with [[epsilon]] entries
//! qexp_bound = 12     # q-expansion bound B
//! qexp_nontrivial = 2 # nontrivial functions fed to the q-expansion check
//! ideal_count_bound = 300
//! checks = ["crosscheck", "transfer", "even-functions", "q-expansion", "sigma"]
//! scaling = false       # multiply zeta values by 2^{-1} (Q side) and 2^{-p} (L side)
//!
//! [[epsilon]]
//! name = "pair-1"
//! values = { 1 = "1", 62 = "1" }  # H-level class -> rational, others 0
//! ```
//!
//! The report payload depends only on the scenario and the code; timings and
//! cache counters live in a separate `runtime` section.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::arith::ntheory::{factorize, mod_pow};
use crate::arith::{cyclo_reduce_rational, PValuation};
use crate::dirichlet::{characters_of, l_value_neg, DirichletCharacter};
use crate::error::{Error, Result};
use crate::group::UnitGroup;
use crate::numberfield::cache::{write_atomic, CacheSnapshot, EnumerationCache};
use crate::numberfield::split_type;
use crate::pseudomeasure::{lambda_approx, pairing, verify_even_congruence, verify_transfer_congruence, GroupRingElement};
use crate::qexp::verify_qexp_congruence;
use crate::sigma::{
    parse_setup, transfer_cosets, transfer_with_reps, trace_membership, verify_c_identity, FiniteGroup,
    GaloisSetup, TraceIdeal,
};
use crate::zeta::{even_orbit_basis, FrobeniusChoice, LevelData, LocallyConstantFn, Side, ZetaEngine, ZetaRoute};
use crate::{CyclotomicNumber, ExactScalar, Rational};

pub const REPORT_SCHEMA: &str = "vercong-report/1";
pub const CACHE_DIR_ENV: &str = "PSEUDOMEASURE_CACHE_DIR";
pub const DEFAULT_SCENARIO: &str = include_str!("../scenarios/default.toml");

/// `C_2^3 x| C_3` with one real place whose three conjugations are permuted.
pub const SINGLE_FIBER_SETUP: &str = "\
p 3
m 2
kernel 2 2 2
action 0 0 1 / 1 0 0 / 0 1 0
fiber 1,0,0 0,1,0 0,0,1 via 1,0,0
";

/// `C_2^6 x| C_3` (order 192) with two real places, each fiber cycled
/// independently.
pub const TWO_FIBER_SETUP: &str = "\
p 3
m 2
kernel 2 2 2 2 2 2
action 0 0 1 0 0 0 / 1 0 0 0 0 0 / 0 1 0 0 0 0 / 0 0 0 0 0 1 / 0 0 0 1 0 0 / 0 0 0 0 1 0
fiber 1,0,0,0,0,0 0,1,0,0,0,0 0,0,1,0,0,0 via 1,0,0,0,0,0
fiber 0,0,0,1,0,0 0,0,0,0,1,0 0,0,0,0,0,1 via 0,0,0,1,0,0
";

/// Checks in dependency order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    #[serde(alias = "crosschecks")]
    Crosscheck,
    #[serde(alias = "theorem")]
    Transfer,
    #[serde(alias = "prop4")]
    EvenFunctions,
    #[serde(alias = "lemma9")]
    QExpansion,
    #[serde(alias = "sigma-suite")]
    Sigma,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EpsilonBasis {
    EvenOrbits,
    Table,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EpsilonEntry {
    pub name: String,
    pub values: BTreeMap<String, String>,
}

fn default_basis() -> EpsilonBasis {
    EpsilonBasis::EvenOrbits
}
fn default_qexp_bound() -> u64 {
    12
}
fn default_nontrivial() -> usize {
    2
}
fn default_ideal_bound() -> u64 {
    300
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub p: u64,
    pub f_l: u64,
    pub s: Vec<u64>,
    pub a: u32,
    #[serde(default)]
    pub f0: Option<u64>,
    pub k: Vec<u32>,
    pub g: Vec<u64>,
    #[serde(default = "default_basis")]
    pub epsilon_basis: EpsilonBasis,
    #[serde(default)]
    pub epsilon: Vec<EpsilonEntry>,
    #[serde(default = "default_qexp_bound")]
    pub qexp_bound: u64,
    #[serde(default = "default_nontrivial")]
    pub qexp_nontrivial: usize,
    #[serde(default = "default_ideal_bound")]
    pub ideal_count_bound: u64,
    pub checks: Vec<CheckKind>,
    #[serde(default)]
    pub scaling: bool,
}

fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::ConfigInvalid(msg.into()))
}

impl ScenarioConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::ConfigInvalid(e.message().to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn bundled() -> Self {
        Self::from_toml(DEFAULT_SCENARIO).expect("bundled scenario parses")
    }

    /// Requested checks, deduplicated and in dependency order.
    pub fn check_order(&self) -> Vec<CheckKind> {
        self.checks.iter().copied().collect::<BTreeSet<_>>().into_iter().collect()
    }

    /// Validates every invariant and builds the level.
    pub fn level(&self) -> Result<Arc<LevelData>> {
        let level = LevelData::new(self.p, self.f_l, self.f0.unwrap_or(self.f_l), self.a, &self.s)?;
        let checks = self.check_order();
        if checks.contains(&CheckKind::Transfer) && self.a < 2 {
            return invalid(format!("level too shallow: the transfer check needs a >= 2, got a = {}", self.a));
        }
        if self.k.is_empty() || self.k.contains(&0) {
            return invalid("k must be a nonempty list of positive weights");
        }
        let needs_even = checks.contains(&CheckKind::QExpansion);
        if needs_even && self.k.iter().any(|k| k % 2 == 1) {
            return invalid("the q-expansion check needs even weights");
        }
        if self.g.is_empty() {
            return invalid("g must list at least one Frobenius choice");
        }
        for &n in &self.g {
            if let Err(e) = FrobeniusChoice::new(&level, Side::Q, n) {
                return invalid(format!("g = {n}: {e}"));
            }
        }
        match self.epsilon_basis {
            EpsilonBasis::EvenOrbits if !self.epsilon.is_empty() => {
                return invalid("[[epsilon]] entries need epsilon_basis = \"table\"")
            }
            EpsilonBasis::Table if self.epsilon.is_empty() => {
                return invalid("epsilon_basis = \"table\" needs at least one [[epsilon]] entry")
            }
            _ => {}
        }
        if self.qexp_bound == 0 {
            return invalid("qexp_bound must be positive");
        }
        Ok(level)
    }

    /// The L-side test functions with their names.
    pub fn epsilons(&self, level: &LevelData) -> Result<Vec<(String, LocallyConstantFn)>> {
        match self.epsilon_basis {
            EpsilonBasis::EvenOrbits => {
                let m = level.modulus();
                Ok(even_orbit_basis(level, Side::L)
                    .into_iter()
                    .map(|e| {
                        let x = e.iter().find(|(_, v)| !v.is_zero()).map(|(x, _)| x).unwrap_or(0);
                        (format!("orbit {{{x}, {}}}", m - x), e)
                    })
                    .collect())
            }
            EpsilonBasis::Table => self
                .epsilon
                .iter()
                .map(|entry| {
                    let mut map = BTreeMap::new();
                    for (cls, val) in &entry.values {
                        let x: u64 = cls
                            .trim()
                            .parse()
                            .or_else(|_| invalid(format!("epsilon {}: bad class `{cls}`", entry.name)))?;
                        let v: Rational = val
                            .trim()
                            .parse()
                            .or_else(|_| invalid(format!("epsilon {}: bad value `{val}`", entry.name)))?;
                        map.insert(x % level.modulus(), v);
                    }
                    let f = LocallyConstantFn::from_map(level, Side::L, &map)
                        .or_else(|e| invalid(format!("epsilon {}: {e}", entry.name)))?;
                    Ok((entry.name.clone(), f))
                })
                .collect(),
        }
    }
}

/// Command-line value, then the environment variable.
pub fn resolve_cache_dir(cli: Option<PathBuf>) -> Option<PathBuf> {
    cli.or_else(|| std::env::var_os(CACHE_DIR_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub check: CheckKind,
    pub name: String,
    pub verdict: bool,
    pub detail: Value,
}

impl CheckOutcome {
    fn new(check: CheckKind, name: impl Into<String>, verdict: bool, detail: Value) -> Self {
        CheckOutcome { check, name: name.into(), verdict, detail }
    }

    fn failed(check: CheckKind, name: impl Into<String>, err: &Error) -> Self {
        Self::new(check, name, false, json!({ "error": err.to_string() }))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportPayload {
    pub config: ScenarioConfig,
    pub checks: Vec<CheckOutcome>,
    pub verdict: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Timing {
    pub check: CheckKind,
    pub millis: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Runtime {
    pub timings: Vec<Timing>,
    pub cache: CacheSnapshot,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub payload: ReportPayload,
    pub runtime: Runtime,
}

impl Report {
    pub fn verdict(&self) -> bool {
        self.payload.verdict
    }

    /// Deterministic part of the report.
    pub fn payload_json(&self) -> String {
        serde_json::to_string_pretty(&self.payload).expect("payload serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        write_atomic(path, (self.to_json() + "\n").as_bytes())
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.payload.checks.iter().filter(|c| !c.verdict)
    }
}

pub fn run_scenario(config: &ScenarioConfig, cache: &EnumerationCache) -> Result<Report> {
    let level = config.level()?;
    let engine = ZetaEngine::new(level.clone()).with_scaling(config.scaling);
    let mut checks = Vec::new();
    let mut timings = Vec::new();
    for kind in config.check_order() {
        let start = Instant::now();
        checks.extend(run_check(kind, config, &engine, cache)?);
        timings.push(Timing { check: kind, millis: start.elapsed().as_millis() as u64 });
    }
    let verdict = checks.iter().all(|c| c.verdict);
    Ok(Report {
        schema: REPORT_SCHEMA,
        payload: ReportPayload { config: config.clone(), checks, verdict },
        runtime: Runtime { timings, cache: cache.stats() },
    })
}

/// Runs one kind of check. Configuration errors propagate; mathematical
/// failures become false verdicts.
pub fn run_check(
    kind: CheckKind,
    config: &ScenarioConfig,
    engine: &ZetaEngine,
    cache: &EnumerationCache,
) -> Result<Vec<CheckOutcome>> {
    let level = engine.level();
    Ok(match kind {
        CheckKind::Crosscheck => crosscheck(config, engine, cache),
        CheckKind::Transfer => transfer_checks(config, engine),
        CheckKind::EvenFunctions => even_function_checks(config, engine, &config.epsilons(level)?),
        CheckKind::QExpansion => qexp_checks(config, engine, &config.epsilons(level)?, cache),
        CheckKind::Sigma => sigma_suite(),
    })
}

fn frobenius(level: &LevelData, n: u64) -> Result<FrobeniusChoice> {
    FrobeniusChoice::new(level, Side::Q, n)
}

fn outcome_of(kind: CheckKind, name: String, r: Result<(bool, Value)>) -> CheckOutcome {
    match r {
        Ok((verdict, detail)) => CheckOutcome::new(kind, name, verdict, detail),
        Err(e) => CheckOutcome::failed(kind, name, &e),
    }
}

fn transfer_checks(config: &ScenarioConfig, engine: &ZetaEngine) -> Vec<CheckOutcome> {
    let level = engine.level();
    let kind = CheckKind::Transfer;
    let mut out = Vec::new();
    for &n in &config.g {
        for &k in &config.k {
            let r = frobenius(level, n).and_then(|g| verify_transfer_congruence(engine, &g, k)).map(|rep| {
                let ok = rep.trace_ideal_verdict && rep.decomposition_agrees;
                (ok, serde_json::to_value(&rep).expect("serializes"))
            });
            out.push(outcome_of(kind, format!("congruence g={n} k={k}"), r));
        }
        let r = k_independence(engine, n, &config.k);
        out.push(outcome_of(kind, format!("k-independence g={n}"), r));
    }
    out
}

/// `lambda_g` computed at every weight agrees mod `p^a`, on both sides.
fn k_independence(engine: &ZetaEngine, n: u64, ks: &[u32]) -> Result<(bool, Value)> {
    let level = engine.level();
    let g = frobenius(level, n)?;
    let h = g.transfer(level);
    let mut ok = true;
    let mut detail = Vec::new();
    for choice in [&g, &h] {
        let lams: Vec<GroupRingElement> =
            ks.iter().map(|&k| lambda_approx(engine, choice, k).map(|l| l.element)).collect::<Result<_>>()?;
        let agree = lams.windows(2).all(|w| w[0] == w[1]);
        ok &= agree;
        detail.push(json!({ "side": choice.side, "n": choice.n, "agree": agree }));
    }
    Ok((ok, Value::Array(detail)))
}

fn even_function_checks(
    config: &ScenarioConfig,
    engine: &ZetaEngine,
    epsilons: &[(String, LocallyConstantFn)],
) -> Vec<CheckOutcome> {
    let level = engine.level();
    let mut out = Vec::new();
    for &n in &config.g {
        for &k in &config.k {
            let r = frobenius(level, n).and_then(|g| {
                let mut rows = Vec::new();
                let mut ok = true;
                for (name, eps) in epsilons {
                    let v = verify_even_congruence(engine, &g, eps, k)?;
                    ok &= v >= PValuation::Finite(1);
                    rows.push(json!({ "epsilon": name, "valuation": v }));
                }
                Ok((ok, Value::Array(rows)))
            });
            out.push(outcome_of(CheckKind::EvenFunctions, format!("congruence g={n} k={k}"), r));
        }
    }
    out
}

fn qexp_checks(
    config: &ScenarioConfig,
    engine: &ZetaEngine,
    epsilons: &[(String, LocallyConstantFn)],
    cache: &EnumerationCache,
) -> Vec<CheckOutcome> {
    let level = engine.level();
    let one = ("constant 1".to_string(), LocallyConstantFn::constant(level, Side::L, Rational::one()));
    let chosen = std::iter::once(&one).chain(epsilons.iter().take(config.qexp_nontrivial));
    let mut out = Vec::new();
    for (name, eps) in chosen {
        for &k in &config.k {
            let r = verify_qexp_congruence(engine, eps, k, config.qexp_bound, cache).map(|rep| {
                let ok = rep.verdict
                    && rep.routes_agree
                    && rep.constant_term_matches
                    && rep.fixed_pairs_match
                    && rep.moved_orbits_divisible
                    && rep.fermat_reduction;
                (ok, serde_json::to_value(&rep).expect("serializes"))
            });
            out.push(outcome_of(CheckKind::QExpansion, format!("coefficients {name} k={k}"), r));
        }
    }
    out
}

fn crosscheck(config: &ScenarioConfig, engine: &ZetaEngine, cache: &EnumerationCache) -> Vec<CheckOutcome> {
    let kind = CheckKind::Crosscheck;
    let level = engine.level();
    let mut out = Vec::new();
    for &k in &config.k {
        out.push(outcome_of(kind, format!("dual route k={k}"), dual_route(engine, k)));
        out.push(outcome_of(kind, format!("total Q k={k}"), total_q(engine, k)));
        out.push(outcome_of(kind, format!("total L k={k}"), total_l(engine, k)));
        for &n in &config.g {
            out.push(outcome_of(kind, format!("integrality g={n} k={k}"), integrality(engine, n, k)));
            out.push(outcome_of(kind, format!("pairing g={n} k={k}"), pairing_identity(engine, n, k)));
        }
    }
    out.push(outcome_of(
        kind,
        format!("ideal counts N<={}", config.ideal_count_bound),
        ideal_counts(level, config.ideal_count_bound, cache),
    ));
    out
}

fn dual_route(engine: &ZetaEngine, k: u32) -> Result<(bool, Value)> {
    let a = engine.table(Side::Q, k, ZetaRoute::Hurwitz)?;
    let b = engine.table(Side::Q, k, ZetaRoute::Characters)?;
    let mismatches: Vec<u64> = engine
        .level()
        .g_level()
        .residues()
        .iter()
        .zip(a.iter().zip(b.iter()))
        .filter(|(_, (x, y))| x != y)
        .map(|(&c, _)| c)
        .collect();
    Ok((mismatches.is_empty(), json!({ "classes": a.len(), "mismatches": mismatches })))
}

fn table_sum(t: &[Rational]) -> Rational {
    t.iter().fold(Rational::zero(), |a, b| a + b)
}

/// `sum_x zeta(1-k, x) = zeta_S(1-k)`.
fn total_q(engine: &ZetaEngine, k: u32) -> Result<(bool, Value)> {
    let level = engine.level();
    let sum = table_sum(&engine.table(Side::Q, k, ZetaRoute::Hurwitz)?);
    let trivial = DirichletCharacter::trivial(UnitGroup::new(1));
    let expected = cyclo_reduce_rational(&l_value_neg(&trivial, k, level.s_primes())?)?;
    Ok((sum == expected, json!({ "sum": sum.to_string(), "expected": expected.to_string() })))
}

/// `sum_y zeta_L(1-k, y) = prod_chi L_S(1-k, chi)` over the characters of
/// conductor dividing `f_L` that are trivial on the norms from `L`.
fn total_l(engine: &ZetaEngine, k: u32) -> Result<(bool, Value)> {
    let level = engine.level();
    let spec = level.field();
    let sum = table_sum(&engine.table(Side::L, k, ZetaRoute::Characters)?);
    let chars = characters_of(spec.conductor(), Some(&spec.kernel_residues()));
    let mut prod: Option<CyclotomicNumber> = None;
    for chi in &chars {
        let v = l_value_neg(chi, k, level.s_primes())?;
        prod = Some(match prod {
            None => v,
            Some(acc) => &acc * &v,
        });
    }
    let expected = cyclo_reduce_rational(&prod.expect("at least the trivial character"))?;
    Ok((
        sum == expected,
        json!({ "sum": sum.to_string(), "expected": expected.to_string(), "characters": chars.len() }),
    ))
}

/// Every single class and the weight-one twist family satisfy the
/// integrality conclusion.
fn integrality(engine: &ZetaEngine, n: u64, k: u32) -> Result<(bool, Value)> {
    let level = engine.level();
    let g = frobenius(level, n)?;
    let p = level.p();
    let pa = level.p_power();
    let inv_p = Rational::new(BigInt::one(), BigInt::from(p));
    let mut min_single = PValuation::Infinite;
    let mut min_twist = PValuation::Infinite;
    for &x in level.g_level().residues() {
        let delta = LocallyConstantFn::indicator(level, Side::Q, x)?;
        min_single = min_single.min(engine.dr_integrality(&g, &[(k, delta.clone())])?);
        // eps_1 = p^{-1} eta with eta = N^{k-1} mod p^a, eps_k = -p^{-1} delta^(x)
        let eta = Rational::from_int(mod_pow(x % pa, (k - 1) as u64, pa) as i64);
        let family = [(1, delta.scale(&(&inv_p * &eta), p)), (k, delta.scale(&-&inv_p, p))];
        if k > 1 {
            min_twist = min_twist.min(engine.dr_integrality(&g, &family)?);
        }
    }
    let ok = min_single >= PValuation::Finite(0) && min_twist >= PValuation::Finite(0);
    Ok((ok, json!({ "min_valuation_single": min_single, "min_valuation_twist": min_twist })))
}

/// `<eps N^k, lambda_g> = Delta_g(1-k, eps)` mod `p^a` for the even orbit
/// functions.
fn pairing_identity(engine: &ZetaEngine, n: u64, k: u32) -> Result<(bool, Value)> {
    let level = engine.level();
    let g = frobenius(level, n)?;
    let (p, a, pa) = (level.p(), level.a(), level.p_power());
    let lam = lambda_approx(engine, &g, k)?;
    let mut ok = true;
    let mut checked = 0;
    for eps in even_orbit_basis(level, Side::Q) {
        let twisted = eps.map_values(level, |x, v| v * Rational::from_int(mod_pow(x % pa, k as u64, pa) as i64));
        let lhs = pairing(&twisted, &lam.element)?;
        let rhs = crate::arith::rational_to_residue(&engine.delta(&g, &eps, k)?, p, a)?;
        ok &= lhs == rhs;
        checked += 1;
    }
    Ok((ok, json!({ "functions": checked })))
}

fn binomial(n: u64, r: u64) -> u64 {
    (1..=r).fold(1u64, |acc, i| acc * (n - r + i) / i)
}

/// Ideal counts by norm against the product of local factors: over a prime
/// `q` with residue degree `f` and `g` primes, the number of ideals of norm
/// `q^e` is `C(e/f + g - 1, g - 1)` when `f | e`.
fn ideal_counts(level: &LevelData, bound: u64, cache: &EnumerationCache) -> Result<(bool, Value)> {
    let spec = level.field();
    let ideals = cache.ideals(spec, bound, &[])?;
    let mut counted = vec![0u64; bound as usize + 1];
    for b in &ideals {
        counted[b.norm() as usize] += 1;
    }
    let mut mismatches = Vec::new();
    for n in 1..=bound {
        let expected: u64 = factorize(n)
            .into_iter()
            .map(|(q, e)| {
                let st = split_type(spec, q);
                let (f, g) = (st.f as u64, st.g as u64);
                if (e as u64).is_multiple_of(f) {
                    binomial(e as u64 / f + g - 1, g - 1)
                } else {
                    0
                }
            })
            .product();
        if expected != counted[n as usize] {
            mismatches.push(n);
        }
    }
    Ok((mismatches.is_empty(), json!({ "ideals": ideals.len(), "mismatches": mismatches })))
}

/// Invariant factor lists `n_1 | n_2 | ...` with product at most `max`.
pub fn abelian_group_types(max: u64) -> Vec<Vec<u64>> {
    fn extend(prefix: &mut Vec<u64>, prod: u64, max: u64, out: &mut Vec<Vec<u64>>) {
        out.push(prefix.clone());
        let last = prefix.last().copied().unwrap_or(1);
        let mut next = if prefix.is_empty() { 2 } else { last };
        while prod * next <= max {
            if next % last == 0 {
                prefix.push(next);
                extend(prefix, prod * next, max, out);
                prefix.pop();
            }
            next += 1;
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), 1, max, &mut out);
    out.retain(|t| !t.is_empty());
    out
}

/// Transfer to the index-`p` kernel equals `g^p` on every abelian group of
/// order at most `max` with a cyclic factor divisible by `p`.
pub fn abelian_transfer_suite(p: u64, max: u64) -> Result<(usize, Vec<String>)> {
    let mut tested = 0;
    let mut failures = Vec::new();
    for orders in abelian_group_types(max) {
        for factor in (0..orders.len()).filter(|&i| orders[i] % p == 0) {
            let setup = GaloisSetup::abelian(&orders, factor, p, 1)?;
            let grp = setup.group();
            tested += 1;
            if grp.elements().any(|x| transfer_cosets(&setup, x).ok() != Some(grp.pow(x, p))) {
                failures.push(format!("{orders:?} factor {factor}"));
            }
        }
    }
    Ok((tested, failures))
}

/// Transfer is a homomorphism into `H` and does not depend on the choice of
/// coset representatives.
pub fn transfer_consistency(setup: &GaloisSetup) -> Result<bool> {
    let grp = setup.group();
    let ver: Vec<u32> = grp.elements().map(|x| transfer_cosets(setup, x)).collect::<Result<_>>()?;
    let hom = grp.elements().all(|x| {
        setup.in_h(ver[x as usize])
            && grp.elements().all(|y| ver[grp.mul(x, y) as usize] == grp.mul(ver[x as usize], ver[y as usize]))
    });
    // shift each representative by a kernel element
    let h: Vec<u32> = setup.h_labels().iter().map(|&x| x as u32).collect();
    let mut independent = true;
    for i in 1..h.len().min(5) {
        let reps: Vec<u32> =
            setup.reps().iter().enumerate().map(|(j, &r)| grp.mul(r, h[i * (j + 1) % h.len()])).collect();
        for x in grp.elements() {
            independent &= transfer_with_reps(setup, &reps, x)? == ver[x as usize];
        }
    }
    Ok(hom && independent)
}

fn f21_setup() -> Result<GaloisSetup> {
    let g = FiniteGroup::semidirect(&[7], &[vec![2]], 3)?;
    GaloisSetup::new(g, &(0..7).collect::<Vec<_>>(), 7, 3, 2)
}

/// Membership in the trace ideal compared with the image of the trace map,
/// found by running through every element of the group ring.
pub fn exhaustive_membership(ideal: &TraceIdeal) -> Result<(usize, usize)> {
    let n = ideal.labels().len();
    let q = ideal.p().pow(ideal.m());
    let total = q.pow(n as u32);
    let mut image = BTreeSet::new();
    let mut coeffs = vec![0i64; n];
    for _ in 0..total {
        let alpha = GroupRingElement::from_coeffs(ideal.p(), ideal.m(), ideal.labels().clone(), coeffs.clone());
        image.insert(ideal.trace(&alpha).coeffs().to_vec());
        for c in coeffs.iter_mut() {
            *c += 1;
            if *c < q as i64 {
                break;
            }
            *c = 0;
        }
    }
    let mut agree = 0;
    let mut fixed = 0;
    for _ in 0..total {
        let elt = GroupRingElement::from_coeffs(ideal.p(), ideal.m(), ideal.labels().clone(), coeffs.clone());
        if ideal.is_fixed(&elt) {
            fixed += 1;
            let m = trace_membership(ideal, &elt)?;
            let certified = m.certificate.as_ref().is_none_or(|c| ideal.trace(c) == elt);
            if m.member == image.contains(elt.coeffs()) && certified {
                agree += 1;
            }
        }
        for c in coeffs.iter_mut() {
            *c += 1;
            if *c < q as i64 {
                break;
            }
            *c = 0;
        }
    }
    Ok((fixed, agree))
}

pub fn sigma_suite() -> Vec<CheckOutcome> {
    let kind = CheckKind::Sigma;
    let mut out = Vec::new();
    let r = abelian_transfer_suite(3, 100)
        .map(|(tested, failures)| (failures.is_empty(), json!({ "setups": tested, "failures": failures })));
    out.push(outcome_of(kind, "abelian transfer is the p-th power".into(), r));
    let r = f21_setup().and_then(|st| transfer_consistency(&st)).map(|ok| (ok, json!({ "order": 21 })));
    out.push(outcome_of(kind, "transfer on F_21".into(), r));
    let trivial = TraceIdeal::trivial(Arc::new(vec![0, 1]), 3, 2);
    let r = exhaustive_membership(&trivial)
        .map(|(fixed, agree)| (fixed == agree, json!({ "fixed": fixed, "agree": agree })));
    out.push(outcome_of(kind, "membership in (Z/9)[C_2], trivial action".into(), r));
    for (name, text) in [("single fiber", SINGLE_FIBER_SETUP), ("two fibers", TWO_FIBER_SETUP)] {
        let r = parse_setup(text).and_then(|st| {
            let rep = verify_c_identity(&st)?;
            let ideal = TraceIdeal::for_setup(&st);
            let certified = rep.certificate.as_ref().is_some_and(|c| ideal.trace(c) == rep.difference);
            let consistent = transfer_consistency(&st)?;
            let ok = rep.verdict && certified && rep.scalar_identity && consistent;
            Ok((ok, json!({ "order": st.group().order(), "report": rep, "certified": certified })))
        });
        out.push(outcome_of(kind, format!("conjugation identity, {name}"), r));
    }
    out
}

/// Populates the ideal and lattice caches used by the scenario.
pub fn cache_warm(config: &ScenarioConfig, cache: &EnumerationCache) -> Result<Vec<PathBuf>> {
    let level = config.level()?;
    if cache.dir().is_none() {
        return invalid(format!("no cache directory (pass --cache-dir or set {CACHE_DIR_ENV})"));
    }
    let spec = level.field();
    let p = level.p();
    let mut paths = BTreeSet::new();
    let b = config.qexp_bound;
    for (bound, s) in [(b.pow(p as u32), level.s_primes()), (config.ideal_count_bound, &[][..])] {
        cache.ideals(spec, bound, s)?;
        paths.extend(cache.ideals_path(spec, bound, s));
    }
    for t in 1..=(p * b) as i64 {
        cache.tot_pos(spec, t)?;
        paths.extend(cache.totpos_path(spec, t));
    }
    Ok(paths.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_config_validates() {
        let c = ScenarioConfig::bundled();
        assert_eq!(c.check_order().len(), 5);
        let level = c.level().unwrap();
        assert_eq!(level.modulus(), 63);
        assert_eq!(c.epsilons(&level).unwrap().len(), 6);
    }

    #[test]
    fn invalid_configs() {
        let base = ScenarioConfig::bundled();
        let mut c = base.clone();
        c.s = vec![7];
        assert!(matches!(c.level(), Err(Error::ConfigInvalid(_))));
        let mut c = base.clone();
        c.a = 1;
        let err = c.level().unwrap_err().to_string();
        assert!(err.contains("too shallow"), "{err}");
        let mut c = base.clone();
        c.g = vec![3];
        assert!(c.level().is_err());
        assert!(ScenarioConfig::from_toml("p = 3\nbogus = 1").is_err());
    }

    #[test]
    fn group_types() {
        let types = abelian_group_types(16);
        assert!(types.contains(&vec![2, 2, 2, 2]));
        assert!(types.contains(&vec![4, 4]));
        assert!(!types.contains(&vec![2, 3]));
        assert_eq!(types.iter().filter(|t| t.iter().product::<u64>() == 16).count(), 5);
    }

    #[test]
    fn table_epsilons() {
        let mut c = ScenarioConfig::bundled();
        c.epsilon_basis = EpsilonBasis::Table;
        c.epsilon = vec![EpsilonEntry {
            name: "pair".into(),
            values: [("1".to_string(), "1/2".to_string()), ("62".to_string(), "1/2".to_string())].into(),
        }];
        let level = c.level().unwrap();
        let eps = c.epsilons(&level).unwrap();
        assert!(eps[0].1.is_even());
        c.epsilon[0].values.insert("2".into(), "1".into());
        assert!(c.epsilons(&level).is_err());
    }
}
