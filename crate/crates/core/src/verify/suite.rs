//! The batch verification suite over the built-in catalog.
//!
//! Every applicable check runs on every selected group; failures are data,
//! never panics, and anything refused by a size guard is reported as
//! skipped with its reason. Groups are evaluated concurrently and merged
//! in catalog order, so the output is deterministic.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{self, builtin_catalog};
use crate::group::GroupTable;
use crate::record::{self, ComputationRecord};
use crate::tensor::{
    abelian_tensor, central_extension_check, defining_relations_hold, kappa_matches_commutators,
    predicted_tensor_structure, schur_multiplier, tensor_square, ExtraSpecialKind, TensorError,
};
use crate::verify::{
    bounds, check_induction_step, check_strictness_conditions, check_structure_corollary,
    classify_equality_m1,
};
use crate::{DEFAULT_MAX_COSETS, ENGINE_VERSION};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Selector {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub primes: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_order: Option<u64>,
    pub abelian_only: bool,
    pub extended: bool,
}

impl Default for Selector {
    fn default() -> Self {
        Selector {
            primes: None,
            max_order: None,
            abelian_only: false,
            extended: false,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Guards {
    pub max_cosets: usize,
}

impl Default for Guards {
    fn default() -> Self {
        Guards {
            max_cosets: DEFAULT_MAX_COSETS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    /// "pass" | "fail" | "skipped"
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckResult {
    fn pass(name: &str, detail: impl Into<Option<String>>) -> CheckResult {
        CheckResult {
            name: name.into(),
            status: "pass".into(),
            detail: detail.into(),
        }
    }
    fn fail(name: &str, detail: String) -> CheckResult {
        CheckResult {
            name: name.into(),
            status: "fail".into(),
            detail: Some(detail),
        }
    }
    fn skipped(name: &str, reason: String) -> CheckResult {
        CheckResult {
            name: name.into(),
            status: "skipped".into(),
            detail: Some(reason),
        }
    }
    fn of(name: &str, ok: bool, detail: String) -> CheckResult {
        if ok {
            CheckResult::pass(name, Some(detail))
        } else {
            CheckResult::fail(name, detail)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupResult {
    pub record: ComputationRecord,
    pub checks: Vec<CheckResult>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Totals {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub engine_version: String,
    pub selector: Selector,
    pub groups: Vec<GroupResult>,
    pub totals: Totals,
}

impl SuiteResult {
    pub fn failures(&self) -> impl Iterator<Item = (&str, &CheckResult)> {
        self.groups.iter().flat_map(|g| {
            g.checks
                .iter()
                .filter(|c| c.status == "fail")
                .map(move |c| (g.record.group.spec.as_str(), c))
        })
    }
}

pub fn run_suite(selector: &Selector, guards: &Guards) -> SuiteResult {
    let entries: Vec<(String, GroupTable)> = builtin_catalog()
        .into_iter()
        .filter(|e| selector.extended || !e.extended)
        .filter_map(|e| {
            let g = catalog::parse_group_spec(e.spec).ok()?;
            Some((e.spec.to_string(), g))
        })
        .filter(|(_, g)| {
            let keep_prime = match (&selector.primes, g.p_group_params()) {
                (Some(ps), Some((p, _))) => ps.contains(&p),
                (Some(_), None) => false,
                (None, _) => true,
            };
            let keep_order = selector
                .max_order
                .is_none_or(|mo| g.order() as u64 <= mo);
            let keep_kind = !selector.abelian_only || g.is_abelian();
            keep_prime && keep_order && keep_kind
        })
        .collect();

    let groups: Vec<GroupResult> = entries
        .par_iter()
        .map(|(spec, g)| evaluate_group(spec, g, guards))
        .collect();

    let mut totals = Totals::default();
    for gr in &groups {
        for c in &gr.checks {
            match c.status.as_str() {
                "pass" => totals.pass += 1,
                "fail" => totals.fail += 1,
                _ => totals.skipped += 1,
            }
        }
    }
    SuiteResult {
        engine_version: ENGINE_VERSION.into(),
        selector: selector.clone(),
        groups,
        totals,
    }
}

fn evaluate_group(spec: &str, g: &GroupTable, guards: &Guards) -> GroupResult {
    let meta = record::group_meta(spec, g);
    let mut checks: Vec<CheckResult> = Vec::new();

    // Extra-special groups of width >= 2 have elementary abelian tensor
    // squares of order p^(4w^2); when that puts nu(G) past the guard, skip
    // without enumerating and report the unverified prediction.
    if let Some((p, _)) = g.p_group_params() {
        if g.is_extra_special() {
            let w = (meta.n.unwrap() - 1) / 2;
            if w >= 2 {
                let kind = extra_special_kind(g, p);
                let predicted = predicted_tensor_structure(p, w, kind)
                    .map(|inv| inv.order())
                    .unwrap_or(0);
                let needed = (g.order() as u64).pow(2).saturating_mul(predicted);
                if needed > guards.max_cosets as u64 {
                    checks.push(CheckResult::skipped(
                        "extra_special_prediction",
                        format!(
                            "prediction unverified (scale): predicted tensor order {predicted}, \
                             nu needs {needed} cosets > cap {}",
                            guards.max_cosets
                        ),
                    ));
                    return GroupResult {
                        record: record::skipped_record(meta, Some(needed)),
                        checks,
                    };
                }
            }
        }
    }

    let t = match tensor_square(g, guards.max_cosets) {
        Ok(t) => t,
        Err(TensorError::Capped {
            needed_at_least,
            cap,
        }) => {
            checks.push(CheckResult::skipped(
                "tensor_square",
                format!("enumeration needs at least {needed_at_least} cosets > cap {cap}"),
            ));
            return GroupResult {
                record: record::skipped_record(meta, Some(needed_at_least)),
                checks,
            };
        }
        Err(e) => {
            checks.push(CheckResult::fail("tensor_square", e.to_string()));
            return GroupResult {
                record: record::skipped_record(meta, None),
                checks,
            };
        }
    };

    checks.push(CheckResult::pass(
        "nu_gate",
        Some(format!(
            "|nu| = {} = |G|^2 |T| = {}^2 * {}",
            t.nu_order,
            g.order(),
            t.order()
        )),
    ));

    // Schur multiplier and the decomposition identity.
    let multiplier_order = match schur_multiplier(&t) {
        Ok(s) => {
            let d = g.derived_subgroup().len() as u64;
            checks.push(CheckResult::of(
                "decomposition_identity",
                t.order() == t.nabla.len() as u64 * s.multiplier_order * d,
                format!(
                    "{} = {} * {} * {}",
                    t.order(),
                    t.nabla.len(),
                    s.multiplier_order,
                    d
                ),
            ));
            s.multiplier_order
        }
        Err(e) => {
            checks.push(CheckResult::fail("decomposition_identity", e.to_string()));
            0
        }
    };

    // Defining relations and kappa, exhaustive for small orders.
    if g.order() <= 32 {
        checks.push(CheckResult::of(
            "defining_relations",
            defining_relations_hold(&t),
            format!("exhaustive over {}^3 triples", g.order()),
        ));
        checks.push(CheckResult::of(
            "kappa_commutator",
            kappa_matches_commutators(&t),
            "kappa(g (x) h) = [g, h] for all pairs".into(),
        ));
    } else {
        checks.push(CheckResult::skipped(
            "defining_relations",
            format!("order {} > 32", g.order()),
        ));
    }
    checks.push(CheckResult::of(
        "kappa_image",
        t.kappa_image_order() == g.derived_subgroup().len() as u64,
        format!(
            "|Im kappa| = {} vs |G'| = {}",
            t.kappa_image_order(),
            g.derived_subgroup().len()
        ),
    ));

    if g.is_abelian() {
        // tensor square must coincide with the bilinear abelian tensor
        let inv = g.abelian_invariants().expect("abelian");
        let expected = abelian_tensor(&inv, &inv);
        let got = t.invariants();
        checks.push(CheckResult::of(
            "abelian_coincidence",
            got.as_ref() == Some(&expected),
            format!(
                "computed {} vs bilinear {}",
                got.map(|i| i.to_string()).unwrap_or_else(|| "non-abelian".into()),
                expected
            ),
        ));
        for name in ["rocco_bound", "refined_bound", "pi3_bound"] {
            checks.push(CheckResult::skipped(name, "abelian input".into()));
        }
    } else {
        match bounds(g, &t) {
            Ok(b) => {
                checks.push(CheckResult::of(
                    "rocco_bound",
                    b.rocco_holds,
                    format!("|T| = {} <= p^{}", b.tensor_order, b.rocco_exp),
                ));
                checks.push(CheckResult::of(
                    "refined_bound",
                    b.refined_holds,
                    format!("|T| = {} <= p^{}", b.tensor_order, b.refined_exp),
                ));
                checks.push(CheckResult::of(
                    "pi3_bound",
                    b.pi3_holds,
                    format!("|J2| = {} <= p^{}", b.j2_order, b.pi3_exp),
                ));

                if b.m == 1 {
                    match classify_equality_m1(g, &t) {
                        Ok(v) => {
                            checks.push(CheckResult::of(
                                "classification_m1",
                                v.consistent,
                                format!(
                                    "attains_equality = {}, recognized H x E = {}",
                                    v.attains_equality, v.recognized_hxe
                                ),
                            ));
                            if v.attains_equality {
                                match check_structure_corollary(g, &t) {
                                    Ok(ok) => checks.push(CheckResult::of(
                                        "structure_corollary",
                                        ok,
                                        format!(
                                            "invariants {}",
                                            t.invariants()
                                                .map(|i| i.to_string())
                                                .unwrap_or_else(|| "non-abelian".into())
                                        ),
                                    )),
                                    Err(e) => checks.push(CheckResult::fail(
                                        "structure_corollary",
                                        e.to_string(),
                                    )),
                                }
                            }
                            match check_strictness_conditions(g, &t) {
                                Ok(r) if r.strict_required => checks.push(CheckResult::of(
                                    "strictness",
                                    r.strict_holds == Some(true),
                                    format!(
                                        "condition_i = {}, condition_ii = {}",
                                        r.condition_i, r.condition_ii
                                    ),
                                )),
                                Ok(_) => checks.push(CheckResult::skipped(
                                    "strictness",
                                    "neither condition applies".into(),
                                )),
                                Err(e) => {
                                    checks.push(CheckResult::fail("strictness", e.to_string()))
                                }
                            }
                        }
                        Err(e) => {
                            checks.push(CheckResult::fail("classification_m1", e.to_string()))
                        }
                    }
                } else {
                    // induction step: K central of order p inside G'
                    match induction_k(g) {
                        Some(k) => match check_induction_step(g, &k, &t, guards.max_cosets) {
                            Ok(ok) => checks.push(CheckResult::of(
                                "induction_step",
                                ok,
                                "|T| <= |C_p (x) G^ab| |T(G/K)|".into(),
                            )),
                            Err(crate::verify::VerifyError::Tensor(TensorError::Capped {
                                ..
                            })) => checks.push(CheckResult::skipped(
                                "induction_step",
                                "quotient tensor over cap".into(),
                            )),
                            Err(e) => {
                                checks.push(CheckResult::fail("induction_step", e.to_string()))
                            }
                        },
                        None => checks.push(CheckResult::skipped(
                            "induction_step",
                            "no central order-p subgroup inside G'".into(),
                        )),
                    }
                }

                // central extension against the full center
                let z = g.center();
                if z.len() > 1 {
                    match central_extension_check(g, &z, guards.max_cosets) {
                        Ok(rep) => {
                            checks.push(CheckResult::of(
                                "central_extension",
                                rep.im_l_central && rep.matches_quotient_tensor,
                                format!(
                                    "|Im l| = {}, quotient order {} vs {}",
                                    rep.im_l_order, rep.quotient_order, rep.quotient_tensor_order
                                ),
                            ));
                        }
                        Err(TensorError::Capped { .. }) => checks.push(CheckResult::skipped(
                            "central_extension",
                            "over cap".into(),
                        )),
                        Err(e) => {
                            checks.push(CheckResult::fail("central_extension", e.to_string()))
                        }
                    }
                }
            }
            Err(e) => checks.push(CheckResult::fail("bounds", e.to_string())),
        }
    }

    let rec = record::record_from_parts(meta, g, &t, multiplier_order);
    GroupResult {
        record: rec,
        checks,
    }
}

/// A central subgroup of order p inside G', when one exists: generated by
/// a power of the minimal central element of G' with the right order.
fn induction_k(g: &GroupTable) -> Option<crate::group::Subgroup> {
    let (p, _) = g.p_group_params()?;
    let derived = g.derived_subgroup();
    let center = g.center();
    let z = derived
        .members
        .iter()
        .copied()
        .find(|&x| x != 0 && center.contains(x))?;
    // reduce to order exactly p
    let mut elem = z;
    while g.elem_order(elem) as u64 > p {
        let mut power = elem;
        for _ in 1..p {
            power = g.mul(power, elem);
        }
        elem = power;
    }
    if g.elem_order(elem) as u64 != p {
        return None;
    }
    Some(g.subgroup_generated(&[elem], false))
}

fn extra_special_kind(g: &GroupTable, p: u64) -> ExtraSpecialKind {
    if p == 2 {
        // distinguishing dihedral from quaternion kind matters only for
        // m = 1 predictions; for the skip path either name reports the
        // same order. Count involutions to pick the honest label.
        let involutions = (1..g.order()).filter(|&x| g.elem_order(x) == 2).count();
        if involutions > g.center().len() - 1 {
            ExtraSpecialKind::Dihedral
        } else {
            ExtraSpecialKind::Quaternion
        }
    } else if g.exponent() == p {
        ExtraSpecialKind::ExponentP
    } else {
        ExtraSpecialKind::ExponentPSquared
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_selector_yields_empty_result() {
        let sel = Selector {
            max_order: Some(1),
            ..Default::default()
        };
        let r = run_suite(&sel, &Guards::default());
        assert!(r.groups.is_empty());
        assert_eq!(r.totals, Totals::default());
    }

    #[test]
    fn abelian_only_selector_skips_bounds() {
        let sel = Selector {
            abelian_only: true,
            max_order: Some(8),
            ..Default::default()
        };
        let r = run_suite(&sel, &Guards::default());
        assert!(!r.groups.is_empty());
        assert_eq!(r.totals.fail, 0);
        for g in &r.groups {
            let coincidence = g.checks.iter().find(|c| c.name == "abelian_coincidence");
            assert_eq!(coincidence.unwrap().status, "pass");
            let rocco = g.checks.iter().find(|c| c.name == "rocco_bound").unwrap();
            assert_eq!(rocco.status, "skipped");
            assert_eq!(rocco.detail.as_deref(), Some("abelian input"));
        }
    }

    #[test]
    fn small_2_group_suite_passes() {
        let sel = Selector {
            primes: Some(vec![2]),
            max_order: Some(16),
            ..Default::default()
        };
        let r = run_suite(&sel, &Guards::default());
        assert!(r.groups.len() >= 10);
        assert_eq!(
            r.totals.fail,
            0,
            "failures: {:?}",
            r.failures().collect::<Vec<_>>()
        );
    }
}
