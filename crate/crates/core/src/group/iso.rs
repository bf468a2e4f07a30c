//! Isomorphism testing by backtracking over generator images.

use super::{GroupError, GroupTable};
use crate::ISO_ORDER_CAP;

impl GroupTable {
    /// Pick a small generating sequence greedily: repeatedly add the element
    /// that enlarges the generated subgroup the most. Ties prefer elements
    /// with a smaller centralizer, then the smaller index, which steers the
    /// choice away from central non-generators.
    pub fn greedy_generators(&self) -> Vec<usize> {
        let mut gens: Vec<usize> = Vec::new();
        let mut current = self.subgroup_generated(&[], false);
        while current.len() < self.order() {
            let mut best: Option<(usize, usize, usize)> = None; // (size, centralizer, elem)
            for e in 1..self.order() {
                if current.contains(e) {
                    continue;
                }
                let mut seed = gens.clone();
                seed.push(e);
                let size = self.subgroup_generated(&seed, false).len();
                let cz = self.centralizer_size(e);
                let better = match best {
                    None => true,
                    Some((bs, bc, be)) => {
                        (size, cz, e) != (bs, bc, be)
                            && (size > bs || (size == bs && (cz < bc || (cz == bc && e < be))))
                    }
                };
                if better {
                    best = Some((size, cz, e));
                }
            }
            let (_, _, e) = best.expect("proper subgroup has an element outside it");
            gens.push(e);
            current = self.subgroup_generated(&gens, false);
        }
        gens
    }

    /// Multiset of element orders, used as a cheap isomorphism invariant.
    fn order_census(&self) -> Vec<usize> {
        let mut census: Vec<usize> = (0..self.order()).map(|x| self.elem_order(x)).collect();
        census.sort_unstable();
        census
    }

    /// Backtracking isomorphism test for tables of order at most
    /// [`ISO_ORDER_CAP`]. Candidate images are tried in ascending index
    /// order, so the search is deterministic.
    pub fn is_isomorphic(&self, other: &GroupTable) -> Result<bool, GroupError> {
        if self.order() != other.order() {
            return Ok(false);
        }
        if self.order_census() != other.order_census() {
            return Ok(false);
        }
        let a_abelian = self.is_abelian();
        if a_abelian != other.is_abelian() {
            return Ok(false);
        }
        if a_abelian {
            // Canonical invariants decide abelian groups outright.
            return Ok(self.abelian_invariants().unwrap() == other.abelian_invariants().unwrap());
        }
        if self.order() > ISO_ORDER_CAP {
            return Err(GroupError::SizeLimit {
                requested: self.order(),
                cap: ISO_ORDER_CAP,
            });
        }
        if self.center().len() != other.center().len()
            || self.derived_subgroup().len() != other.derived_subgroup().len()
        {
            return Ok(false);
        }

        let gens = self.greedy_generators();
        let mut images = vec![0usize; gens.len()];
        Ok(self.extend_iso(other, &gens, &mut images, 0))
    }

    fn extend_iso(
        &self,
        other: &GroupTable,
        gens: &[usize],
        images: &mut [usize],
        depth: usize,
    ) -> bool {
        if depth == gens.len() {
            // The greedy generators generate everything, so a consistent
            // injective extension of the full assignment is an isomorphism.
            return self.closure_size(other, gens, images) == Some(self.order());
        }
        let want = self.elem_order(gens[depth]);
        for cand in 1..other.order() {
            if other.elem_order(cand) != want {
                continue;
            }
            images[depth] = cand;
            if self
                .closure_size(other, &gens[..=depth], &images[..=depth])
                .is_some()
                && self.extend_iso(other, gens, images, depth + 1)
            {
                return true;
            }
        }
        false
    }

    /// Close `gens -> images` over the generated subgroup. Returns the
    /// subgroup size if the map extends to an injective homomorphism on it,
    /// `None` on any conflict. Multiplicativity on (member, generator)
    /// pairs extends to the whole subgroup, so no further checking is
    /// needed.
    fn closure_size(&self, other: &GroupTable, gens: &[usize], images: &[usize]) -> Option<usize> {
        let n = self.order();
        let mut img = vec![usize::MAX; n];
        let mut used = vec![false; other.order()];
        img[0] = 0;
        used[0] = true;
        let mut members = vec![0usize];
        let mut i = 0;
        while i < members.len() {
            let x = members[i];
            for (&g, &h) in gens.iter().zip(images.iter()) {
                let xg = self.mul(x, g);
                let yh = other.mul(img[x], h);
                if img[xg] == usize::MAX {
                    if used[yh] {
                        return None; // not injective
                    }
                    img[xg] = yh;
                    used[yh] = true;
                    members.push(xg);
                } else if img[xg] != yh {
                    return None; // not a homomorphism
                }
            }
            i += 1;
        }
        Some(members.len())
    }
}

#[cfg(test)]
mod tests {
    use crate::catalog;

    #[test]
    fn distinguishes_c4_from_klein() {
        let c4 = catalog::cyclic(4).unwrap();
        let v4 = catalog::cyclic(2)
            .unwrap()
            .direct_product(&catalog::cyclic(2).unwrap())
            .unwrap();
        assert!(!c4.is_isomorphic(&v4).unwrap());
    }

    #[test]
    fn distinguishes_d8_from_q8() {
        // Q8 has a single involution, D8 has five.
        assert!(!catalog::dihedral8()
            .is_isomorphic(&catalog::quaternion8())
            .unwrap());
    }

    #[test]
    fn identifies_reindexed_q8() {
        let q8 = catalog::quaternion8();
        // Same group with elements permuted (conjugate the table by a
        // relabelling that keeps the identity fixed).
        let perm = [0usize, 3, 1, 2, 4, 7, 5, 6];
        let mut inv_perm = [0usize; 8];
        for (i, &p) in perm.iter().enumerate() {
            inv_perm[p] = i;
        }
        let raw: Vec<Vec<usize>> = (0..8)
            .map(|x| {
                (0..8)
                    .map(|y| inv_perm[q8.mul(perm[x], perm[y])])
                    .collect()
            })
            .collect();
        let relabelled = super::GroupTable::from_table(raw).unwrap();
        assert!(q8.is_isomorphic(&relabelled).unwrap());
    }

    #[test]
    fn greedy_generators_are_small() {
        assert_eq!(catalog::quaternion8().greedy_generators().len(), 2);
        assert_eq!(
            catalog::extra_special_exponent_p(3)
                .unwrap()
                .greedy_generators()
                .len(),
            2
        );
        let g = catalog::quaternion8()
            .direct_product(&catalog::cyclic(2).unwrap())
            .unwrap();
        assert_eq!(g.greedy_generators().len(), 3);
    }

    #[test]
    fn iso_respects_abelian_invariants() {
        let a = catalog::parse_group_spec("C4xC2").unwrap();
        let b = catalog::parse_group_spec("C2xC4").unwrap();
        assert!(a.is_isomorphic(&b).unwrap());
        let c = catalog::parse_group_spec("C2^3").unwrap();
        assert!(!a.is_isomorphic(&c).unwrap());
    }
}
