use std::sync::Arc;

use serde::Serialize;

use super::setup::{transfer_cosets, GaloisSetup};
use super::snf::ModularSolver;
use crate::error::{Error, Result};
use crate::pseudomeasure::GroupRingElement;

/// Ideal of `Sigma`-traces in `(Z/p^m)[H]`, with `Sigma` acting on `H` by a
/// permutation of order dividing `p`.
#[derive(Clone, Debug)]
pub struct TraceIdeal {
    p: u64,
    m: u32,
    labels: Arc<Vec<u64>>,
    perm: Vec<usize>,
    solver: ModularSolver,
}

/// Membership verdict; when true, `tr(certificate)` equals the tested element.
#[derive(Clone, Debug, Serialize)]
pub struct Membership {
    pub member: bool,
    pub certificate: Option<GroupRingElement>,
}

impl TraceIdeal {
    /// `perm[i]` is the position of `sigma(labels[i])`.
    pub fn from_permutation(labels: Arc<Vec<u64>>, perm: Vec<usize>, p: u64, m: u32) -> Self {
        let n = labels.len();
        assert_eq!(perm.len(), n);
        // column j of the trace matrix is sum_i e_{sigma^i(j)}
        let mut matrix = vec![vec![0i64; n]; n];
        for j in 0..n {
            let mut x = j;
            for _ in 0..p {
                matrix[x][j] += 1;
                x = perm[x];
            }
            assert_eq!(x, j, "action must have order dividing p");
        }
        let solver = ModularSolver::new(&matrix, p.pow(m));
        TraceIdeal { p, m, labels, perm, solver }
    }

    pub fn trivial(labels: Arc<Vec<u64>>, p: u64, m: u32) -> Self {
        let perm = (0..labels.len()).collect();
        Self::from_permutation(labels, perm, p, m)
    }

    pub fn for_setup(setup: &GaloisSetup) -> Self {
        Self::from_permutation(setup.h_labels().clone(), setup.sigma_permutation(), setup.p(), setup.m())
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn labels(&self) -> &Arc<Vec<u64>> {
        &self.labels
    }

    pub fn zero(&self) -> GroupRingElement {
        GroupRingElement::zero(self.p, self.m, self.labels.clone())
    }

    /// `alpha^sigma`.
    pub fn act(&self, alpha: &GroupRingElement) -> GroupRingElement {
        let mut out = self.zero();
        for (i, &c) in alpha.coeffs().iter().enumerate() {
            out.add_at(self.labels[self.perm[i]], c as i64);
        }
        out
    }

    /// `sum_{sigma in Sigma} alpha^sigma`.
    pub fn trace(&self, alpha: &GroupRingElement) -> GroupRingElement {
        let mut out = self.zero();
        let mut cur = alpha.clone();
        for _ in 0..self.p {
            out = out.add(&cur);
            cur = self.act(&cur);
        }
        out
    }

    pub fn is_fixed(&self, elt: &GroupRingElement) -> bool {
        self.act(elt) == *elt
    }
}

pub fn trace_membership(ideal: &TraceIdeal, elt: &GroupRingElement) -> Result<Membership> {
    if !ideal.is_fixed(elt) {
        return Err(Error::NotFixed);
    }
    let certificate = ideal.solver.solve(elt.coeffs()).map(|x| {
        let coeffs = x.into_iter().map(|c| c as i64).collect();
        let alpha = GroupRingElement::from_coeffs(ideal.p, ideal.m, ideal.labels.clone(), coeffs);
        debug_assert_eq!(ideal.trace(&alpha), *elt);
        alpha
    });
    Ok(Membership { member: certificate.is_some(), certificate })
}

/// Product in `(Z/p^m)[H]`.
pub fn ring_mul(setup: &GaloisSetup, a: &GroupRingElement, b: &GroupRingElement) -> GroupRingElement {
    let grp = setup.group();
    let mut out = GroupRingElement::zero(a.p(), a.exp(), a.labels().clone());
    let m = a.modulus() as u128;
    for (&x, &cx) in a.labels().iter().zip(a.coeffs()) {
        if cx == 0 {
            continue;
        }
        for (&y, &cy) in b.labels().iter().zip(b.coeffs()) {
            if cy == 0 {
                continue;
            }
            let xy = grp.mul(x as u32, y as u32) as u64;
            out.add_at(xy, (cx as u128 * cy as u128 % m) as i64);
        }
    }
    out
}

/// Orbit bookkeeping of a difference `d = a - ver_*(b)`.
#[derive(Clone, Debug, Serialize)]
pub struct OrbitDecomposition {
    pub difference: GroupRingElement,
    /// `tr(alpha) = difference` when `in_trace_ideal`
    pub alpha: GroupRingElement,
    pub in_trace_ideal: bool,
    pub moved_orbits: usize,
    pub fixed_in_image: usize,
    pub fixed_outside_image: usize,
}

/// Splits `d(y) = a(y) - sum_{ver(x) = y} b(x)` into orbit traces: a moved
/// orbit contributes `tr(d(y0) [y0])` for its least element `y0`, a fixed
/// `y` contributes `tr((d(y)/p) [y])` and requires `p | d(y)`.
///
/// `a` is indexed like `setup.h_labels()`, `b` by the elements of the
/// whole group; both are residues mod `p^m`.
pub fn orbit_decompose(setup: &GaloisSetup, a: &[u64], b: &[u64]) -> Result<OrbitDecomposition> {
    let p = setup.p();
    let m = setup.m();
    let labels = setup.h_labels().clone();
    let perm = setup.sigma_permutation();
    let modulus = p.pow(m);
    if a.len() != labels.len() || b.len() != setup.group().order() {
        return Err(Error::EquivarianceViolated("coordinate lengths do not match the groups".into()));
    }
    if (0..labels.len()).any(|i| a[perm[i]] % modulus != a[i] % modulus) {
        return Err(Error::EquivarianceViolated("H-side coordinates are not Sigma-invariant".into()));
    }
    let a_elt = GroupRingElement::from_coeffs(p, m, labels.clone(), a.iter().map(|&x| x as i64).collect());
    let mut pushed = GroupRingElement::zero(p, m, labels.clone());
    let mut image = vec![false; labels.len()];
    for g in setup.group().elements() {
        let y = transfer_cosets(setup, g)? as u64;
        let i = pushed.index_of(y).expect("transfer lands in H");
        image[i] = true;
        pushed.add_at(y, (b[g as usize] % modulus) as i64);
    }
    let difference = a_elt.sub(&pushed);
    let mut alpha = GroupRingElement::zero(p, m, labels.clone());
    let mut in_t = true;
    let (mut moved, mut fixed_in, mut fixed_out) = (0, 0, 0);
    let mut seen = vec![false; labels.len()];
    for i in 0..labels.len() {
        if seen[i] {
            continue;
        }
        let mut orbit = vec![i];
        let mut j = perm[i];
        while j != i {
            orbit.push(j);
            j = perm[j];
        }
        for &k in &orbit {
            seen[k] = true;
        }
        let d = difference.coeffs()[i];
        if orbit.len() > 1 {
            moved += 1;
            if orbit.iter().any(|&k| difference.coeffs()[k] != d) {
                in_t = false;
            }
            alpha.set(labels[i], d);
        } else {
            if image[i] {
                fixed_in += 1;
            } else {
                fixed_out += 1;
            }
            if !d.is_multiple_of(p) {
                in_t = false;
            }
            alpha.set(labels[i], d / p);
        }
    }
    if in_t {
        let ideal = TraceIdeal::from_permutation(labels, perm, p, m);
        debug_assert_eq!(ideal.trace(&alpha), difference);
    }
    Ok(OrbitDecomposition {
        difference,
        alpha,
        in_trace_ideal: in_t,
        moved_orbits: moved,
        fixed_in_image: fixed_in,
        fixed_outside_image: fixed_out,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CIdentityReport {
    pub verdict: bool,
    /// `c_L - ver(c_K)` in `(Z/p^m)[H]`
    pub difference: GroupRingElement,
    pub certificate: Option<GroupRingElement>,
    /// `2^p = 2 mod p`, the scalar shadow of comparing `2^{[L:Q]}` with `2^{[K:Q]}`
    pub scalar_identity: bool,
}

/// Checks `prod_w (1 + c_w) = prod_v (1 + prod_{w|v} c_w)` modulo the trace
/// ideal.
pub fn verify_c_identity(setup: &GaloisSetup) -> Result<CIdentityReport> {
    let grp = setup.group();
    let p = setup.p();
    let m = setup.m();
    let labels = setup.h_labels().clone();
    let bad = |msg: String| Err(Error::BadConjugationData(msg));
    let mut all_cw = Vec::new();
    for (v, fiber) in setup.fibers().iter().enumerate() {
        for &c in &fiber.cw {
            if !setup.in_h(c) {
                return bad(format!("c_w = {c} of place {v} is not in H"));
            }
            if grp.mul(c, c) != grp.identity() {
                return bad(format!("c_w = {c} of place {v} is not an involution"));
            }
            if !fiber.cw.contains(&setup.sigma(c)) {
                return bad(format!("fiber of place {v} is not Sigma-stable"));
            }
            if all_cw.contains(&c) {
                return bad(format!("c_w = {c} appears twice"));
            }
            all_cw.push(c);
        }
        if let Some(cv) = fiber.cv {
            let expected = fiber.cw.iter().fold(grp.identity(), |acc, &c| grp.mul(acc, c));
            if transfer_cosets(setup, cv)? != expected {
                return bad(format!("ver(c_v) differs from the product of the c_w at place {v}"));
            }
        }
    }
    let one = GroupRingElement::monomial(p, m, labels.clone(), grp.identity() as u64, 1);
    let one_plus = |x: u32| one.add(&GroupRingElement::monomial(p, m, labels.clone(), x as u64, 1));
    let c_l = all_cw.iter().fold(one.clone(), |acc, &c| ring_mul(setup, &acc, &one_plus(c)));
    let ver_c_k = setup.fibers().iter().fold(one.clone(), |acc, fiber| {
        let prod = fiber.cw.iter().fold(grp.identity(), |x, &c| grp.mul(x, c));
        ring_mul(setup, &acc, &one_plus(prod))
    });
    let difference = c_l.sub(&ver_c_k);
    let ideal = TraceIdeal::for_setup(setup);
    let membership = trace_membership(&ideal, &difference)?;
    let two_p = crate::arith::ntheory::mod_pow(2, p, p);
    Ok(CIdentityReport {
        verdict: membership.member,
        difference,
        certificate: membership.certificate,
        scalar_identity: two_p == 2 % p,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sigma::group::FiniteGroup;
    use crate::sigma::setup::Fiber;

    #[test]
    fn trivial_action_membership() {
        let labels = Arc::new(vec![0, 1]);
        let t = TraceIdeal::trivial(labels.clone(), 3, 2);
        let three = GroupRingElement::from_coeffs(3, 2, labels.clone(), vec![3, 6]);
        let m = trace_membership(&t, &three).unwrap();
        assert!(m.member);
        assert_eq!(t.trace(&m.certificate.unwrap()), three);
        let one = GroupRingElement::from_coeffs(3, 2, labels, vec![1, 0]);
        assert!(!trace_membership(&t, &one).unwrap().member);
    }

    #[test]
    fn orbit_sum_in_c7() {
        let g = FiniteGroup::semidirect(&[7], &[vec![2]], 3).unwrap();
        let st = GaloisSetup::new(g, &(0..7).collect::<Vec<_>>(), 7, 3, 2).unwrap();
        let t = TraceIdeal::for_setup(&st);
        let labels = st.h_labels().clone();
        // [h] + [h^2] + [h^4] with h = 1 (additively 1, 2, 4)
        let elt = GroupRingElement::from_coeffs(3, 2, labels.clone(), vec![0, 1, 1, 0, 1, 0, 0]);
        let m = trace_membership(&t, &elt).unwrap();
        assert!(m.member);
        assert_eq!(t.trace(m.certificate.as_ref().unwrap()), elt);
        let not_fixed = GroupRingElement::monomial(3, 2, labels, 1, 1);
        assert!(matches!(trace_membership(&t, &not_fixed), Err(Error::NotFixed)));
    }

    #[test]
    fn c_identity_single_fiber() {
        let action = vec![vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]];
        let g = FiniteGroup::semidirect(&[2, 2, 2], &action, 3).unwrap();
        let st = GaloisSetup::new(g, &(0..8).collect::<Vec<_>>(), 8, 3, 2).unwrap();
        // e_1, e_2, e_3 in mixed radix (first factor slowest)
        let e = [4u32, 2, 1];
        let sigma_e1 = st.sigma(e[0]);
        assert!(e.contains(&sigma_e1));
        let st = st.with_fibers(vec![Fiber { cw: e.to_vec(), cv: Some(e[0]) }]);
        let report = verify_c_identity(&st).unwrap();
        assert!(report.verdict);
        assert!(report.scalar_identity);
        let empty = st.clone().with_fibers(vec![]);
        assert!(verify_c_identity(&empty).unwrap().difference.is_zero());
        let bad = st.with_fibers(vec![Fiber { cw: vec![4, 2], cv: None }]);
        assert!(matches!(verify_c_identity(&bad), Err(Error::BadConjugationData(_))));
    }
}
