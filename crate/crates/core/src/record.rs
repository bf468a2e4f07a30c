//! Serializable computation records with a stable field layout.

use serde::{Deserialize, Serialize};

use crate::group::GroupTable;
use crate::tensor::{schur_multiplier, tensor_square, TensorError, TensorSquare};
use crate::verify::{bounds, classify_equality_m1, VerifyError};
use crate::ENGINE_VERSION;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupMeta {
    pub spec: String,
    pub order: u64,
    pub p: Option<u64>,
    pub n: Option<u32>,
    pub m: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TensorInfo {
    pub order: u64,
    pub abelian: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub invariants: Option<Vec<u64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HoldsInfo {
    pub rocco: bool,
    pub paper: bool,
    pub pi3: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsInfo {
    pub rocco: u64,
    pub paper: u64,
    pub pi3: u64,
    pub holds: HoldsInfo,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationInfo {
    pub m_equals_one: bool,
    pub attains_equality: bool,
    pub recognized_hxe: bool,
    pub consistent: bool,
}

/// One group's computation record. `status` is `ok` for a completed
/// computation and `skipped_by_cap` when the enumeration guard refused it;
/// skipped records carry the predicted minimum enumeration size in
/// `predicted_nu_order`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComputationRecord {
    pub group: GroupMeta,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tensor: Option<TensorInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nabla_order: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j2_order: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub multiplier_order: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa_image_order: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bounds: Option<BoundsInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<ClassificationInfo>,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub predicted_nu_order: Option<u64>,
    pub engine_version: String,
}

pub fn group_meta(spec: &str, g: &GroupTable) -> GroupMeta {
    let params = g.p_group_params();
    let m = params.map(|(p, _)| {
        let derived = g.derived_subgroup().len() as u64;
        let mut e = 0u32;
        let mut v = derived;
        while v > 1 {
            v /= p;
            e += 1;
        }
        e
    });
    GroupMeta {
        spec: spec.to_string(),
        order: g.order() as u64,
        p: params.map(|(p, _)| p),
        n: params.map(|(_, n)| n),
        m,
    }
}

/// Run the full per-group computation and assemble a record.
pub fn compute_record(
    spec: &str,
    g: &GroupTable,
    max_cosets: usize,
) -> Result<ComputationRecord, TensorError> {
    let meta = group_meta(spec, g);
    let t = match tensor_square(g, max_cosets) {
        Ok(t) => t,
        Err(TensorError::Capped {
            needed_at_least, ..
        }) => {
            return Ok(skipped_record(meta, Some(needed_at_least)));
        }
        Err(e) => return Err(e),
    };
    let schur = schur_multiplier(&t)?;
    Ok(record_from_parts(meta, g, &t, schur.multiplier_order))
}

pub fn skipped_record(meta: GroupMeta, predicted_nu_order: Option<u64>) -> ComputationRecord {
    ComputationRecord {
        group: meta,
        tensor: None,
        nabla_order: None,
        j2_order: None,
        multiplier_order: None,
        kappa_image_order: None,
        bounds: None,
        classification: None,
        status: "skipped_by_cap".into(),
        predicted_nu_order,
        engine_version: ENGINE_VERSION.into(),
    }
}

pub fn record_from_parts(
    meta: GroupMeta,
    g: &GroupTable,
    t: &TensorSquare,
    multiplier_order: u64,
) -> ComputationRecord {
    let abelian = t.group.is_abelian();
    let tensor = TensorInfo {
        order: t.order(),
        abelian,
        invariants: if abelian {
            Some(t.invariants().expect("abelian table").factors)
        } else {
            None
        },
    };
    let bounds_info = match bounds(g, t) {
        Ok(b) => Some(BoundsInfo {
            rocco: u64::try_from(b.rocco_bound()).unwrap_or(u64::MAX),
            paper: u64::try_from(b.refined_bound()).unwrap_or(u64::MAX),
            pi3: u64::try_from(b.pi3_bound()).unwrap_or(u64::MAX),
            holds: HoldsInfo {
                rocco: b.rocco_holds,
                paper: b.refined_holds,
                pi3: b.pi3_holds,
            },
        }),
        Err(VerifyError::AbelianInput | VerifyError::NotPGroup) => None,
        Err(_) => None,
    };
    let classification = match classify_equality_m1(g, t) {
        Ok(v) => Some(ClassificationInfo {
            m_equals_one: v.m_equals_one,
            attains_equality: v.attains_equality,
            recognized_hxe: v.recognized_hxe,
            consistent: v.consistent,
        }),
        Err(_) => None,
    };
    ComputationRecord {
        group: meta,
        tensor: Some(tensor),
        nabla_order: Some(t.nabla.len() as u64),
        j2_order: Some(t.j2.len() as u64),
        multiplier_order: Some(multiplier_order),
        kappa_image_order: Some(t.kappa_image_order()),
        bounds: bounds_info,
        classification,
        status: "ok".into(),
        predicted_nu_order: None,
        engine_version: ENGINE_VERSION.into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn q8_record_shape() {
        let g = catalog::quaternion8();
        let rec = compute_record("Q8", &g, 100_000).unwrap();
        assert_eq!(rec.status, "ok");
        assert_eq!(rec.group.p, Some(2));
        assert_eq!(rec.group.n, Some(3));
        assert_eq!(rec.group.m, Some(1));
        let tensor = rec.tensor.unwrap();
        assert_eq!(tensor.order, 64);
        assert_eq!(tensor.invariants.unwrap(), vec![4, 4, 2, 2]);
        // 64 = |nabla| * |M| * |G'| with the quaternion multiplier trivial
        assert_eq!(rec.nabla_order, Some(32));
        assert_eq!(rec.j2_order, Some(32));
        assert_eq!(rec.multiplier_order, Some(1));
        let b = rec.bounds.unwrap();
        assert_eq!(b.rocco, 64);
        assert_eq!(b.paper, 64);
        assert!(b.holds.rocco && b.holds.paper && b.holds.pi3);
        assert!(rec.classification.unwrap().attains_equality);
    }

    #[test]
    fn record_round_trips_through_json() {
        let g = catalog::cyclic(4).unwrap();
        let rec = compute_record("C4", &g, 10_000).unwrap();
        let json = serde_json::to_string_pretty(&rec).unwrap();
        let back: ComputationRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(rec, back);
        assert_eq!(serde_json::to_string_pretty(&back).unwrap(), json);
    }

    #[test]
    fn capped_record_is_skipped() {
        let g = catalog::extra_special_exponent_p(5).unwrap();
        let rec = compute_record("E1_5", &g, 100).unwrap();
        assert_eq!(rec.status, "skipped_by_cap");
        assert!(rec.tensor.is_none());
        assert_eq!(rec.predicted_nu_order, Some(125 * 125 * 5));
    }
}
