//! Order bounds, equality classification, and structure checks for the
//! tensor squares of non-abelian p-groups.
//!
//! For |G| = p^n with |G'| = p^m the checked bounds are
//!   |G (x) G| <= p^(n(n-m))           (the classical bound)
//!   |G (x) G| <= p^((n-1)(n-m)+2)     (the refined bound)
//!   |J2(G)|   <= p^(n(n-m-1)+2)
//! with the refined bound at m = 1 attained exactly by groups H x E where
//! H is Q8 or the odd extra-special group of order p^3 and exponent p, and
//! E is elementary abelian. Bound comparisons happen on exponents, never on
//! possibly-overflowing values.

pub mod suite;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog;
use crate::group::{GroupTable, Subgroup};
use crate::tensor::{abelian_tensor, tensor_square, TensorError, TensorSquare};

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("group order is not a prime power")]
    NotPGroup,
    #[error("bounds are stated for non-abelian groups")]
    AbelianInput,
    #[error("derived subgroup does not have order p")]
    PreconditionM,
    #[error("tensor square does not attain the refined bound")]
    PreconditionEquality,
    #[error("K must be central of order p inside G' with |G'| >= p^2")]
    PreconditionK,
    #[error("tensor order is not a power of p")]
    NotPPower,
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Group(#[from] crate::group::GroupError),
}

/// Exact log_p, or an error if `v` is not a power of `p`.
fn log_p(p: u64, mut v: u64) -> Result<u32, VerifyError> {
    let mut e = 0u32;
    while v > 1 {
        if v % p != 0 {
            return Err(VerifyError::NotPPower);
        }
        v /= p;
        e += 1;
    }
    Ok(e)
}

fn pow_u128(p: u64, e: u32) -> u128 {
    (p as u128).pow(e)
}

/// Bound verdicts for one non-abelian p-group.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundReport {
    pub p: u64,
    pub n: u32,
    pub m: u32,
    pub tensor_order: u64,
    pub tensor_exp: u32,
    pub j2_order: u64,
    pub rocco_exp: u32,
    pub refined_exp: u32,
    pub pi3_exp: u32,
    pub rocco_holds: bool,
    pub refined_holds: bool,
    pub pi3_holds: bool,
    /// p^((n-1)(n-m)+2) <= p^(n(n-m)), equivalent to n - m >= 2.
    pub refined_le_rocco: bool,
}

impl BoundReport {
    pub fn rocco_bound(&self) -> u128 {
        pow_u128(self.p, self.rocco_exp)
    }
    pub fn refined_bound(&self) -> u128 {
        pow_u128(self.p, self.refined_exp)
    }
    pub fn pi3_bound(&self) -> u128 {
        pow_u128(self.p, self.pi3_exp)
    }
}

pub fn bounds(g: &GroupTable, t: &TensorSquare) -> Result<BoundReport, VerifyError> {
    let (p, n) = g.p_group_params().ok_or(VerifyError::NotPGroup)?;
    let derived = g.derived_subgroup();
    if derived.is_trivial() {
        return Err(VerifyError::AbelianInput);
    }
    let m = log_p(p, derived.len() as u64)?;
    let tensor_exp = log_p(p, t.order())?;
    let j2_order = t.j2.len() as u64;
    let j2_exp = log_p(p, j2_order)?;

    let rocco_exp = n * (n - m);
    let refined_exp = (n - 1) * (n - m) + 2;
    let pi3_exp = n * (n - m - 1) + 2;
    Ok(BoundReport {
        p,
        n,
        m,
        tensor_order: t.order(),
        tensor_exp,
        j2_order,
        rocco_exp,
        refined_exp,
        pi3_exp,
        rocco_holds: tensor_exp <= rocco_exp,
        refined_holds: tensor_exp <= refined_exp,
        pi3_holds: j2_exp <= pi3_exp,
        refined_le_rocco: n - m >= 2,
    })
}

/// Verdict of the equality classification at m = 1: the refined bound
/// p^((n-1)^2 + 2) is attained exactly when G is an internal direct product
/// H x E of the right extra-special H of order p^3 with an elementary
/// abelian E.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassificationVerdict {
    pub m_equals_one: bool,
    pub attains_equality: bool,
    pub recognized_hxe: bool,
    /// member lists of (H, E) when recognized
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<(Vec<usize>, Vec<usize>)>,
    pub consistent: bool,
}

pub fn classify_equality_m1(
    g: &GroupTable,
    t: &TensorSquare,
) -> Result<ClassificationVerdict, VerifyError> {
    let (p, n) = g.p_group_params().ok_or(VerifyError::NotPGroup)?;
    let derived = g.derived_subgroup();
    if derived.len() as u64 != p {
        return Err(VerifyError::PreconditionM);
    }
    let tensor_exp = log_p(p, t.order())?;
    let attains_equality = tensor_exp == (n - 1) * (n - 1) + 2;
    let (recognized_hxe, witness) = recognize_hxe(g, p, n, &derived)?;
    Ok(ClassificationVerdict {
        m_equals_one: true,
        attains_equality,
        recognized_hxe,
        witness,
        consistent: attains_equality == recognized_hxe,
    })
}

/// Structural search for G = H x E: E is a complement of G' inside an
/// elementary abelian center of order p^(n-2); H is generated by lifts of
/// generators of G/E and must be the right extra-special group of order
/// p^3 (Q8 at p = 2, exponent p otherwise).
#[allow(clippy::type_complexity)]
fn recognize_hxe(
    g: &GroupTable,
    p: u64,
    n: u32,
    derived: &Subgroup,
) -> Result<(bool, Option<(Vec<usize>, Vec<usize>)>), VerifyError> {
    if n < 3 {
        return Ok((false, None));
    }
    let z = g.center();
    // necessary shape: Z(G) = Z(H) x E elementary abelian of order p^(n-2)
    if z.len() as u64 != pow_u128(p, n - 2) as u64 {
        return Ok((false, None));
    }
    let z_table = g.subgroup_table(&z);
    if !(z.len() == 1 || z_table.is_elementary_abelian()) {
        return Ok((false, None));
    }
    if !derived.subset_of(&z) {
        return Ok((false, None));
    }

    // complement of G' in Z(G): greedily extend a basis avoiding <G', basis>
    let mut e_basis: Vec<usize> = Vec::new();
    let mut span = {
        let mut seed = derived.members.clone();
        seed.retain(|&x| x != 0);
        g.subgroup_generated(&seed, false)
    };
    for &cand in &z.members {
        if span.contains(cand) {
            continue;
        }
        e_basis.push(cand);
        let mut seed: Vec<usize> = derived.members.clone();
        seed.extend_from_slice(&e_basis);
        seed.retain(|&x| x != 0);
        span = g.subgroup_generated(&seed, false);
    }
    let e_sub = g.subgroup_generated(&e_basis, false);
    if e_sub.len() as u128 != pow_u128(p, n - 3) {
        return Ok((false, None));
    }

    // G/E must be the right group of order p^3
    let (q, proj) = g.quotient(&e_sub)?;
    if q.order() as u128 != pow_u128(p, 3) {
        return Ok((false, None));
    }
    let model = if p == 2 {
        catalog::quaternion8()
    } else {
        catalog::extra_special_exponent_p(p as usize)?
    };
    if !q.is_isomorphic(&model)? {
        return Ok((false, None));
    }

    // lift a generating pair of G/E over all representative choices
    let q_gens = q.greedy_generators();
    if q_gens.len() != 2 {
        return Ok((false, None));
    }
    let fiber = |qe: usize| -> Vec<usize> {
        (0..g.order()).filter(|&x| proj.image[x] == qe).collect()
    };
    for &u in &fiber(q_gens[0]) {
        for &v in &fiber(q_gens[1]) {
            let h_sub = g.subgroup_generated(&[u, v], false);
            if h_sub.len() as u128 != pow_u128(p, 3) {
                continue;
            }
            if h_sub.members.iter().any(|&x| x != 0 && e_sub.contains(x)) {
                continue;
            }
            // internal direct product checks
            debug_assert!(h_sub.len() * e_sub.len() == g.order());
            let h_table = g.subgroup_table(&h_sub);
            if !h_table.is_isomorphic(&model)? {
                continue;
            }
            if !h_sub.is_normal {
                continue;
            }
            return Ok((true, Some((h_sub.members.clone(), e_sub.members.clone()))));
        }
    }
    Ok((false, None))
}

/// Expected invariants of a tensor square that attains the refined bound:
/// C_p^((n-1)^2+2) for odd p, C4^(2) x C2^((n-1)^2-2) for p = 2.
pub fn check_structure_corollary(g: &GroupTable, t: &TensorSquare) -> Result<bool, VerifyError> {
    let (p, n) = g.p_group_params().ok_or(VerifyError::NotPGroup)?;
    let tensor_exp = log_p(p, t.order())?;
    let e = (n - 1) * (n - 1) + 2;
    if tensor_exp != e {
        return Err(VerifyError::PreconditionEquality);
    }
    let expected = if p == 2 {
        let mut f = vec![4u64, 4];
        f.extend(vec![2u64; (e - 4) as usize]);
        crate::group::AbelianInvariants::new(f)
    } else {
        crate::group::AbelianInvariants::homocyclic(p, e as usize)
    };
    Ok(t.group.is_abelian() && t.group.abelian_invariants()? == expected)
}

/// The two sufficient conditions for strict inequality at m = 1:
/// (i) G^ab is not elementary abelian, or (ii) G^ab is elementary abelian
/// but Z(G) is not. When either holds, |T| < p^((n-1)^2+2) must follow.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StrictnessReport {
    pub condition_i: bool,
    pub condition_ii: bool,
    pub strict_required: bool,
    /// observed strict inequality; only set when a condition applies
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strict_holds: Option<bool>,
}

pub fn check_strictness_conditions(
    g: &GroupTable,
    t: &TensorSquare,
) -> Result<StrictnessReport, VerifyError> {
    let (p, n) = g.p_group_params().ok_or(VerifyError::NotPGroup)?;
    let derived = g.derived_subgroup();
    if derived.len() as u64 != p {
        return Err(VerifyError::PreconditionM);
    }
    let (gab, _) = g.quotient(&derived)?;
    let gab_elementary = gab.is_elementary_abelian();
    let z_table = g.subgroup_table(&g.center());
    let z_elementary = z_table.is_elementary_abelian();

    let condition_i = !gab_elementary;
    let condition_ii = gab_elementary && !z_elementary;
    let strict_required = condition_i || condition_ii;
    let strict_holds = if strict_required {
        Some(log_p(p, t.order())? < (n - 1) * (n - 1) + 2)
    } else {
        None
    };
    Ok(StrictnessReport {
        condition_i,
        condition_ii,
        strict_required,
        strict_holds,
    })
}

/// The induction-step inequality for m >= 2: with K central of order p
/// inside G', |G (x) G| <= |C_p (x) G^ab| * |(G/K) (x) (G/K)|.
pub fn check_induction_step(
    g: &GroupTable,
    k: &Subgroup,
    t: &TensorSquare,
    max_cosets: usize,
) -> Result<bool, VerifyError> {
    let (p, _n) = g.p_group_params().ok_or(VerifyError::NotPGroup)?;
    let derived = g.derived_subgroup();
    let m = log_p(p, derived.len() as u64)?;
    if m < 2 || k.len() as u64 != p || !k.subset_of(&derived) {
        return Err(VerifyError::PreconditionK);
    }
    let center = g.center();
    if !k.subset_of(&center) {
        return Err(VerifyError::PreconditionK);
    }
    let (gab, _) = g.quotient(&derived)?;
    let cp = crate::group::AbelianInvariants::new(vec![p]);
    let lhs = t.order();
    let (gk, _) = g.quotient(k)?;
    let t_gk = tensor_square(&gk, max_cosets)?;
    let rhs = abelian_tensor(&cp, &gab.abelian_invariants()?).order() * t_gk.order();
    Ok(lhs <= rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::tensor::tensor_square;

    #[test]
    fn bound_exponent_arithmetic() {
        // refined <= classical iff n - m >= 2, equality of the two bound
        // values iff n - m = 2; checked over a grid of exponents.
        for n in 2u32..=12 {
            for m in 1..n {
                let refined = (n - 1) * (n - m) + 2;
                let rocco = n * (n - m);
                assert_eq!(refined <= rocco, n - m >= 2, "n={n} m={m}");
                assert_eq!(refined == rocco, n - m == 2, "n={n} m={m}");
            }
        }
    }

    #[test]
    fn bounds_for_q8_attain_equality() {
        let g = catalog::quaternion8();
        let t = tensor_square(&g, 100_000).unwrap();
        let b = bounds(&g, &t).unwrap();
        assert_eq!((b.p, b.n, b.m), (2, 3, 1));
        assert_eq!(b.rocco_bound(), 64);
        assert_eq!(b.refined_bound(), 64);
        assert_eq!(b.tensor_order, 64);
        assert!(b.rocco_holds && b.refined_holds && b.pi3_holds);
        assert_eq!(b.refined_le_rocco, true);
        assert_eq!(b.j2_order, 32);
        assert_eq!(b.pi3_bound(), 2u128.pow(3 * 1 + 2));
    }

    #[test]
    fn bounds_for_d8_are_strict() {
        let g = catalog::dihedral8();
        let t = tensor_square(&g, 100_000).unwrap();
        let b = bounds(&g, &t).unwrap();
        assert_eq!(b.tensor_order, 32);
        assert!(b.tensor_exp < b.refined_exp);
    }

    #[test]
    fn bounds_reject_abelian_and_nonp() {
        let c6 = catalog::cyclic(6).unwrap();
        let t = tensor_square(&c6, 10_000).unwrap();
        assert!(matches!(
            bounds(&c6, &t),
            Err(VerifyError::NotPGroup)
        ));
        let c4 = catalog::cyclic(4).unwrap();
        let t4 = tensor_square(&c4, 10_000).unwrap();
        assert!(matches!(bounds(&c4, &t4), Err(VerifyError::AbelianInput)));
    }

    #[test]
    fn classify_q8_equality_with_trivial_complement() {
        let g = catalog::quaternion8();
        let t = tensor_square(&g, 100_000).unwrap();
        let v = classify_equality_m1(&g, &t).unwrap();
        assert!(v.attains_equality);
        assert!(v.recognized_hxe);
        assert!(v.consistent);
        let (h, e) = v.witness.unwrap();
        assert_eq!(h.len(), 8);
        assert_eq!(e, vec![0]);
    }

    #[test]
    fn classify_d8_no_equality() {
        let g = catalog::dihedral8();
        let t = tensor_square(&g, 100_000).unwrap();
        let v = classify_equality_m1(&g, &t).unwrap();
        assert!(!v.attains_equality);
        assert!(!v.recognized_hxe);
        assert!(v.consistent);
    }

    #[test]
    fn classify_e2_3_no_equality() {
        let g = catalog::extra_special_exponent_p2(3).unwrap();
        let t = tensor_square(&g, 100_000).unwrap();
        let v = classify_equality_m1(&g, &t).unwrap();
        assert_eq!(t.order(), 81);
        assert!(!v.attains_equality);
        assert!(!v.recognized_hxe);
        assert!(v.consistent);
    }

    #[test]
    fn structure_corollary_on_q8() {
        let g = catalog::quaternion8();
        let t = tensor_square(&g, 100_000).unwrap();
        assert!(check_structure_corollary(&g, &t).unwrap());
    }

    #[test]
    fn structure_corollary_precondition() {
        let g = catalog::dihedral8();
        let t = tensor_square(&g, 100_000).unwrap();
        assert!(matches!(
            check_structure_corollary(&g, &t),
            Err(VerifyError::PreconditionEquality)
        ));
    }

    #[test]
    fn strictness_on_d8_requires_nothing() {
        let g = catalog::dihedral8();
        let t = tensor_square(&g, 100_000).unwrap();
        let r = check_strictness_conditions(&g, &t).unwrap();
        assert!(!r.condition_i && !r.condition_ii);
        assert!(r.strict_holds.is_none());
    }

    #[test]
    fn induction_step_rejects_m1() {
        let g = catalog::dihedral8()
            .direct_product(&catalog::cyclic(2).unwrap())
            .unwrap();
        let t = tensor_square(&g, 1_000_000).unwrap();
        let k = g.derived_subgroup();
        assert!(matches!(
            check_induction_step(&g, &k, &t, 1_000_000),
            Err(VerifyError::PreconditionK)
        ));
    }
}
