//! The non-abelian tensor square via the double-group construction.
//!
//! For a group G with generators x_1..x_k, the group nu(G) is presented on
//! two copies {x_i} and {x_i^phi} of those generators: the base relators
//! hold in each copy, and for all generator triples (x, y, z) the
//! commutators [x, y^phi] are compatible with conjugation,
//!
//!   ^z [x, y^phi] = [^z x, (^z y)^phi] = ^(z^phi) [x, y^phi],
//!
//! written out as words (so ^z x is literally z x z^-1). Inside nu(G) the
//! normal closure T of all [x_i, x_j^phi] realizes the tensor square
//! G (x) G, with g (x) h appearing as the commutator [w_g, w_h^phi] of
//! fixed generator words for g and h.
//!
//! The construction is validated rather than trusted: the enumerated order
//! must satisfy |nu(G)| = |G|^2 |T|, the retraction kappa must map every
//! pair onto the matching commutator with image exactly the derived
//! subgroup, and the defining relations of the tensor square are checked
//! exhaustively for small groups by the test suite.

mod schur;

pub use schur::{
    abelian_tensor, central_extension_check, direct_product_order_check,
    predicted_tensor_structure, schur_multiplier, CentralExtensionReport, ExtraSpecialKind,
    ProductOrderCheck, SchurResult,
};

use thiserror::Error;

use crate::fp::{
    self, commutator_word, invert, presentation_from_table, regular_rep, subgroup_as_table,
    FpError, Letter, Presentation, Word,
};
use crate::group::{GroupError, GroupTable, Hom, Subgroup};
use crate::DEFAULT_TABLE_CAP;

#[derive(Debug, Error)]
pub enum TensorError {
    #[error("enumeration capped: nu(G) needs at least {needed_at_least} cosets, cap is {cap}")]
    Capped { needed_at_least: u64, cap: usize },
    #[error("tensor construction invalid: {0}")]
    ConstructionInvalid(String),
    #[error("subgroup is not central")]
    NotCentral,
    #[error("operand must be abelian")]
    RequiresAbelian,
    #[error("unsupported extra-special kind: {0}")]
    UnsupportedKind(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Fp(#[from] FpError),
}

/// The presentation of nu(G) on duplicated generators.
#[derive(Debug, Clone)]
pub struct NuPresentation {
    /// Elements of G chosen as generators (the first copy; the second copy
    /// uses the same elements under phi).
    pub gen_elements: Vec<usize>,
    pub presentation: Presentation,
    pub base_order: usize,
}

/// Build the nu(G) presentation: base relators on both copies plus the
/// generator-level compatibility relators.
pub fn nu_presentation(g: &GroupTable) -> Result<NuPresentation, TensorError> {
    let (base, gen_elements) = presentation_from_table(g)?;
    let k = base.num_generators();
    let mut names = base.generator_names.clone();
    names.extend(base.generator_names.iter().map(|n| format!("{n}_phi")));

    let shift = |w: &Word, by: usize| -> Word {
        w.iter()
            .map(|l| Letter {
                gen: l.gen + by as u16,
                inv: l.inv,
            })
            .collect()
    };

    let mut relators: Vec<Word> = base.relators.clone();
    relators.extend(base.relators.iter().map(|r| shift(r, k)));

    for z in 0..k {
        for x in 0..k {
            for y in 0..k {
                let xw = vec![Letter::new(x)];
                let ypw = vec![Letter::new(y + k)];
                let zw = vec![Letter::new(z)];
                let zpw = vec![Letter::new(z + k)];
                let lhs_base = commutator_word(&xw, &ypw);
                // [^z x, (^z y)^phi] with ^z x spelled out as z x z^-1
                let conj_x = fp::conjugate(&xw, &zw);
                let conj_yp = fp::conjugate(&ypw, &zpw);
                let rhs = commutator_word(&conj_x, &conj_yp);
                for conj_by in [&zw, &zpw] {
                    let mut rel = fp::conjugate(&lhs_base, conj_by);
                    rel.extend(invert(&rhs));
                    relators.push(fp::reduce(&rel));
                }
            }
        }
    }

    Ok(NuPresentation {
        gen_elements,
        presentation: Presentation::new(names, relators)?,
        base_order: g.order(),
    })
}

/// The computed tensor square of a group.
#[derive(Debug, Clone)]
pub struct TensorSquare {
    pub base: GroupTable,
    /// The tensor square T as a group in its own right.
    pub group: GroupTable,
    /// `pair[g * |G| + h]` is the element of T realizing g (x) h.
    pair: Vec<u32>,
    /// kappa: T -> G, t -> the commutator it maps to; image is G'.
    pub kappa: Hom,
    pub j2: Subgroup,
    pub nabla: Subgroup,
    /// |nu(G)| as enumerated, kept for reporting.
    pub nu_order: u64,
}

impl TensorSquare {
    pub fn order(&self) -> u64 {
        self.group.order() as u64
    }

    /// The element of T realizing `g (x) h`.
    pub fn pair(&self, g: usize, h: usize) -> usize {
        self.pair[g * self.base.order() + h] as usize
    }

    pub fn kappa_image_order(&self) -> u64 {
        self.kappa.image_size() as u64
    }

    /// Abelian invariants of T when T is abelian.
    pub fn invariants(&self) -> Option<crate::group::AbelianInvariants> {
        self.group.abelian_invariants().ok()
    }
}

/// Compute the tensor square of `g`, enumerating nu(G) over the trivial
/// subgroup with at most `max_cosets` live cosets.
pub fn tensor_square(g: &GroupTable, max_cosets: usize) -> Result<TensorSquare, TensorError> {
    if g.order() == 1 {
        return trivial_tensor(g);
    }
    let derived = g.derived_subgroup();
    // |nu(G)| = |G|^2 |T| and kappa maps T onto G', so |G|^2 |G'| is a
    // floor for the enumeration before it starts.
    let floor = (g.order() as u64) * (g.order() as u64) * derived.len() as u64;
    if floor > max_cosets as u64 {
        return Err(TensorError::Capped {
            needed_at_least: floor,
            cap: max_cosets,
        });
    }

    let nu = nu_presentation(g)?;
    let k = nu.gen_elements.len();
    let rep = match regular_rep(&nu.presentation, max_cosets) {
        Ok(rep) => rep,
        Err(FpError::Capped { .. }) => {
            return Err(TensorError::Capped {
                needed_at_least: floor,
                cap: max_cosets,
            })
        }
        Err(e) => return Err(e.into()),
    };

    // T = normal closure of the generator-pair commutators [x_i, x_j^phi].
    let mut seeds: Vec<Word> = Vec::with_capacity(k * k);
    for i in 0..k {
        for j in 0..k {
            seeds.push(commutator_word(
                &[Letter::new(i)],
                &[Letter::new(j + k)],
            ));
        }
    }
    let (t_table, embedding) = subgroup_as_table(&rep, &seeds, true, DEFAULT_TABLE_CAP)?;

    let nu_order = rep.group_order as u64;
    let expected = (g.order() as u64) * (g.order() as u64) * t_table.order() as u64;
    if nu_order != expected {
        return Err(TensorError::ConstructionInvalid(format!(
            "order gate failed: |nu| = {nu_order} but |G|^2 |T| = {expected}"
        )));
    }

    // Fixed generator words for every element of G.
    let words = fp::bfs_words(g, &nu.gen_elements);
    let phi = |w: &Word| -> Word {
        w.iter()
            .map(|l| Letter {
                gen: l.gen + k as u16,
                inv: l.inv,
            })
            .collect()
    };

    let n = g.order();
    let rank = {
        let mut rank = vec![u32::MAX; rep.group_order + 1];
        for (i, &m) in embedding.iter().enumerate() {
            rank[m as usize] = i as u32;
        }
        rank
    };
    let mut pair = vec![0u32; n * n];
    for a in 0..n {
        for b in 0..n {
            let w = commutator_word(&words[a], &phi(&words[b]));
            let coset = rep.table.trace(1, &w);
            let r = rank[coset as usize];
            if r == u32::MAX {
                return Err(TensorError::ConstructionInvalid(format!(
                    "pair ({a}, {b}) lands outside the extracted tensor subgroup"
                )));
            }
            pair[a * n + b] = r;
        }
    }

    // kappa: evaluate each element's ambient word in G, dropping phi marks.
    let mut kappa_img = vec![0usize; t_table.order()];
    for (i, &coset) in embedding.iter().enumerate() {
        let w = rep.element_word(coset);
        let mut acc = 0usize;
        for l in w {
            let base_gen = nu.gen_elements[(l.gen as usize) % k];
            let e = if l.inv { g.inv(base_gen) } else { base_gen };
            acc = g.mul(acc, e);
        }
        kappa_img[i] = acc;
    }
    let kappa = Hom { image: kappa_img };

    // kappa(g (x) h) = [g, h] and image(kappa) = G'.
    for a in 0..n {
        for b in 0..n {
            if kappa.image[pair[a * n + b] as usize] != g.commutator(a, b) {
                return Err(TensorError::ConstructionInvalid(format!(
                    "kappa disagrees with the commutator at ({a}, {b})"
                )));
            }
        }
    }
    let mut image_sorted: Vec<usize> = kappa.image.clone();
    image_sorted.sort_unstable();
    image_sorted.dedup();
    if image_sorted != derived.members {
        return Err(TensorError::ConstructionInvalid(
            "kappa image differs from the derived subgroup".into(),
        ));
    }

    let j2_members: Vec<usize> = (0..t_table.order())
        .filter(|&t| kappa.image[t] == 0)
        .collect();
    if j2_members.len() as u64 * derived.len() as u64 != t_table.order() as u64 {
        return Err(TensorError::ConstructionInvalid(
            "|J2| |G'| != |T|".into(),
        ));
    }
    let j2 = Subgroup {
        members: j2_members,
        is_normal: true, // kernel of a homomorphism
        parent_order: t_table.order(),
    };

    // nabla is generated by the diagonal pairs over all of G, not just the
    // generators: g (x) g for non-generators is not a product of generator
    // diagonals in general.
    let diag: Vec<usize> = (0..n).map(|a| pair[a * n + a] as usize).collect();
    let nabla = t_table.subgroup_generated(&diag, false);
    if !nabla.subset_of(&j2) {
        return Err(TensorError::ConstructionInvalid(
            "nabla is not contained in J2".into(),
        ));
    }

    Ok(TensorSquare {
        base: g.clone(),
        group: t_table,
        pair,
        kappa,
        j2,
        nabla,
        nu_order,
    })
}

fn trivial_tensor(g: &GroupTable) -> Result<TensorSquare, TensorError> {
    let t = GroupTable::from_table(vec![vec![0]])?;
    Ok(TensorSquare {
        base: g.clone(),
        group: t,
        pair: vec![0],
        kappa: Hom { image: vec![0] },
        j2: Subgroup {
            members: vec![0],
            is_normal: true,
            parent_order: 1,
        },
        nabla: Subgroup {
            members: vec![0],
            is_normal: true,
            parent_order: 1,
        },
        nu_order: 1,
    })
}

/// Exhaustively check the two defining relations of the tensor square via
/// the pair map:
///   (g g') (x) h = (^g g' (x) ^g h) (g (x) h)
///   g (x) (h h') = (g (x) h) (^h g (x) ^h h').
/// Quadratic-times-order work; meant for groups of order <= 32.
pub fn defining_relations_hold(t: &TensorSquare) -> bool {
    let g = &t.base;
    let n = g.order();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                // first slot: (a b) (x) c
                let lhs = t.pair(g.mul(a, b), c);
                let rhs = t
                    .group
                    .mul(t.pair(g.conj(a, b), g.conj(a, c)), t.pair(a, c));
                if lhs != rhs {
                    return false;
                }
                // second slot: a (x) (b c)
                let lhs = t.pair(a, g.mul(b, c));
                let rhs = t
                    .group
                    .mul(t.pair(a, b), t.pair(g.conj(b, a), g.conj(b, c)));
                if lhs != rhs {
                    return false;
                }
            }
        }
    }
    true
}

/// True when kappa(g (x) h) = [g, h] for every pair. Construction already
/// gates on this; exported for the verification suite.
pub fn kappa_matches_commutators(t: &TensorSquare) -> bool {
    let n = t.base.order();
    (0..n).all(|a| {
        (0..n).all(|b| t.kappa.image[t.pair(a, b)] == t.base.commutator(a, b))
    })
}

/// Predicted minimum number of cosets to enumerate nu(G), used for cap
/// reporting without starting the enumeration.
pub fn nu_floor(g: &GroupTable) -> u64 {
    let derived = g.derived_subgroup();
    (g.order() as u64).pow(2) * derived.len() as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn tensor_of_c3_is_c3() {
        let g = catalog::cyclic(3).unwrap();
        let t = tensor_square(&g, 10_000).unwrap();
        assert_eq!(t.order(), 3);
        assert!(t.group.is_abelian());
        assert_eq!(t.invariants().unwrap().factors, vec![3]);
        // abelian: J2 is everything, the derived subgroup is trivial
        assert_eq!(t.j2.len(), 3);
        assert_eq!(t.kappa_image_order(), 1);
    }

    #[test]
    fn tensor_of_trivial_group() {
        let g = GroupTable::from_table(vec![vec![0]]).unwrap();
        let t = tensor_square(&g, 100).unwrap();
        assert_eq!(t.order(), 1);
    }

    #[test]
    fn tensor_of_q8() {
        let g = catalog::quaternion8();
        let t = tensor_square(&g, 100_000).unwrap();
        assert_eq!(t.order(), 64);
        assert_eq!(t.nu_order, 64 * 64);
        assert_eq!(t.invariants().unwrap().factors, vec![4, 4, 2, 2]);
        assert!(defining_relations_hold(&t));
        assert!(kappa_matches_commutators(&t));
        assert_eq!(t.kappa_image_order(), 2);
        assert_eq!(t.j2.len(), 32);
    }

    #[test]
    fn tensor_of_d8() {
        let g = catalog::dihedral8();
        let t = tensor_square(&g, 100_000).unwrap();
        assert_eq!(t.order(), 32);
        assert_eq!(t.invariants().unwrap().factors, vec![4, 2, 2, 2]);
        assert!(defining_relations_hold(&t));
    }

    #[test]
    fn cap_floor_fires_before_enumeration() {
        let g = catalog::extra_special_exponent_p(5).unwrap();
        match tensor_square(&g, 100) {
            Err(TensorError::Capped {
                needed_at_least, ..
            }) => {
                assert_eq!(needed_at_least, 125 * 125 * 5);
            }
            other => panic!("expected cap, got {other:?}"),
        }
    }

    #[test]
    fn nu_presentation_of_c2_enumerates_to_8() {
        let g = catalog::cyclic(2).unwrap();
        let nu = nu_presentation(&g).unwrap();
        assert_eq!(nu.presentation.num_generators(), 2);
        let rep = regular_rep(&nu.presentation, 1000).unwrap();
        assert_eq!(rep.group_order, 8);
    }

    #[test]
    fn nu_presentation_of_q8_enumerates_to_4096() {
        let g = catalog::quaternion8();
        let nu = nu_presentation(&g).unwrap();
        assert_eq!(nu.presentation.num_generators(), 4);
        let rep = regular_rep(&nu.presentation, 100_000).unwrap();
        assert_eq!(rep.group_order, 8 * 8 * 64);
    }
}
