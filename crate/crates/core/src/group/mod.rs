//! Finite groups as explicit multiplication tables.
//!
//! Elements are indices `0..order` with the identity fixed at index 0.
//! Every construction path (raw tables, direct products, quotients,
//! subgroup tables) funnels through the same validation: Latin-square
//! rows and columns, identity behaviour, inverses, and associativity
//! (exhaustive up to order 256, sampled above that).

mod cayley;
mod invariants;
mod iso;

pub use invariants::AbelianInvariants;

use thiserror::Error;

use crate::DEFAULT_TABLE_CAP;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("not a group: {reason}")]
    NotAGroup { reason: String },
    #[error("subgroup is not normal in its parent")]
    NotNormal,
    #[error("group is not abelian: elements {x} and {y} do not commute")]
    NotAbelian { x: usize, y: usize },
    #[error("requested table of size {requested} exceeds the cap {cap}")]
    SizeLimit { requested: usize, cap: usize },
    #[error("cayley table format: {0}")]
    Format(String),
}

/// A finite group as an `order x order` multiplication table.
///
/// Index 0 is the identity. `mult[x * order + y]` is the product `x * y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTable {
    order: usize,
    mult: Vec<u16>,
    inverse: Vec<u16>,
    elem_order: Vec<u16>,
}

/// A subgroup of some parent [`GroupTable`], stored as a sorted member list.
///
/// The parent is not held by reference; operations that need it take it as
/// an explicit argument. `parent_order` guards against mixing parents up.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    pub members: Vec<usize>,
    pub is_normal: bool,
    pub parent_order: usize,
}

impl Subgroup {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn is_trivial(&self) -> bool {
        self.members == [0]
    }

    /// True if `self` and `other` are literally the same member set.
    pub fn same_members(&self, other: &Subgroup) -> bool {
        self.members == other.members
    }

    /// True if every member of `self` lies in `other`.
    pub fn subset_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&m| other.contains(m))
    }
}

/// A homomorphism between two tables, stored as per-element images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hom {
    pub image: Vec<usize>,
}

impl Hom {
    /// Check the defining property on every pair. Intended for tests and
    /// debug assertions; quadratic in the source order.
    pub fn is_valid(&self, source: &GroupTable, target: &GroupTable) -> bool {
        if self.image.len() != source.order() || self.image[0] != 0 {
            return false;
        }
        if self.image.iter().any(|&y| y >= target.order()) {
            return false;
        }
        for x in 0..source.order() {
            for y in 0..source.order() {
                if self.image[source.mul(x, y)] != target.mul(self.image[x], self.image[y]) {
                    return false;
                }
            }
        }
        true
    }

    pub fn image_size(&self) -> usize {
        let mut seen = vec![false; self.image.len()];
        let mut count = 0;
        for &y in &self.image {
            if !seen[y] {
                seen[y] = true;
                count += 1;
            }
        }
        count
    }
}

impl GroupTable {
    /// Validate a raw multiplication table and compute inverses and element
    /// orders. The identity must be index 0.
    pub fn from_table(raw: Vec<Vec<usize>>) -> Result<GroupTable, GroupError> {
        let order = raw.len();
        if order == 0 {
            return Err(GroupError::NotAGroup {
                reason: "empty table".into(),
            });
        }
        if order > DEFAULT_TABLE_CAP {
            return Err(GroupError::SizeLimit {
                requested: order,
                cap: DEFAULT_TABLE_CAP,
            });
        }
        let mut mult = Vec::with_capacity(order * order);
        for (x, row) in raw.iter().enumerate() {
            if row.len() != order {
                return Err(GroupError::NotAGroup {
                    reason: format!("row {x} has length {} in a table of order {order}", row.len()),
                });
            }
            for (y, &v) in row.iter().enumerate() {
                if v >= order {
                    return Err(GroupError::NotAGroup {
                        reason: format!("entry ({x},{y}) = {v} out of range"),
                    });
                }
                mult.push(v as u16);
            }
        }
        Self::validate_and_finish(order, mult)
    }

    /// Build a table of the given order from a multiplication closure.
    pub fn from_fn<F>(order: usize, cap: usize, f: F) -> Result<GroupTable, GroupError>
    where
        F: Fn(usize, usize) -> usize,
    {
        if order == 0 {
            return Err(GroupError::NotAGroup {
                reason: "empty table".into(),
            });
        }
        if order > cap {
            return Err(GroupError::SizeLimit {
                requested: order,
                cap,
            });
        }
        let mut mult = Vec::with_capacity(order * order);
        for x in 0..order {
            for y in 0..order {
                let v = f(x, y);
                assert!(v < order, "multiplication closure out of range");
                mult.push(v as u16);
            }
        }
        Self::validate_and_finish(order, mult)
    }

    fn validate_and_finish(order: usize, mult: Vec<u16>) -> Result<GroupTable, GroupError> {
        let at = |x: usize, y: usize| mult[x * order + y] as usize;

        // Identity row and column.
        for x in 0..order {
            if at(0, x) != x {
                return Err(GroupError::NotAGroup {
                    reason: format!("identity row broken: 0 * {x} = {}", at(0, x)),
                });
            }
            if at(x, 0) != x {
                return Err(GroupError::NotAGroup {
                    reason: format!("identity column broken: {x} * 0 = {}", at(x, 0)),
                });
            }
        }

        // Latin square.
        let mut seen = vec![usize::MAX; order];
        for x in 0..order {
            for y in 0..order {
                let v = at(x, y);
                if seen[v] == x {
                    return Err(GroupError::NotAGroup {
                        reason: format!("row {x} not a permutation: value {v} repeats"),
                    });
                }
                seen[v] = x;
            }
        }
        let mut seen = vec![usize::MAX; order];
        for y in 0..order {
            for x in 0..order {
                let v = at(x, y);
                if seen[v] == y {
                    return Err(GroupError::NotAGroup {
                        reason: format!("column {y} not a permutation: value {v} repeats"),
                    });
                }
                seen[v] = y;
            }
        }

        // Associativity: exhaustive for small tables, sampled above.
        if order <= 256 {
            for x in 0..order {
                for y in 0..order {
                    let xy = at(x, y);
                    for z in 0..order {
                        if at(xy, z) != at(x, at(y, z)) {
                            return Err(GroupError::NotAGroup {
                                reason: format!("associativity fails at ({x},{y},{z})"),
                            });
                        }
                    }
                }
            }
        } else {
            let mut state = 0x7465_6e73_6f72_7371u64;
            for _ in 0..20_000 {
                let x = (crate::splitmix64(&mut state) % order as u64) as usize;
                let y = (crate::splitmix64(&mut state) % order as u64) as usize;
                let z = (crate::splitmix64(&mut state) % order as u64) as usize;
                if at(at(x, y), z) != at(x, at(y, z)) {
                    return Err(GroupError::NotAGroup {
                        reason: format!("associativity fails at ({x},{y},{z})"),
                    });
                }
            }
        }

        // Inverses.
        let mut inverse = vec![0u16; order];
        for x in 0..order {
            match (0..order).find(|&y| at(x, y) == 0) {
                Some(y) => inverse[x] = y as u16,
                None => {
                    return Err(GroupError::NotAGroup {
                        reason: format!("element {x} has no inverse"),
                    })
                }
            }
        }

        // Element orders.
        let mut elem_order = vec![0u16; order];
        for x in 0..order {
            let mut cur = x;
            let mut k = 1usize;
            while cur != 0 {
                cur = at(cur, x);
                k += 1;
            }
            elem_order[x] = k.min(order.max(1)) as u16;
            if x == 0 {
                elem_order[0] = 1;
            }
        }

        Ok(GroupTable {
            order,
            mult,
            inverse,
            elem_order,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.mult[x * self.order + y] as usize
    }

    #[inline]
    pub fn inv(&self, x: usize) -> usize {
        self.inverse[x] as usize
    }

    pub fn elem_order(&self, x: usize) -> usize {
        self.elem_order[x] as usize
    }

    /// Conjugation `^g x = g x g^-1`.
    #[inline]
    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    /// Commutator `[g, h] = g h g^-1 h^-1`.
    #[inline]
    pub fn commutator(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(self.mul(g, h), self.inv(g)), self.inv(h))
    }

    pub fn is_abelian(&self) -> bool {
        self.first_noncommuting_pair().is_none()
    }

    pub(crate) fn first_noncommuting_pair(&self) -> Option<(usize, usize)> {
        for x in 1..self.order {
            for y in (x + 1)..self.order {
                if self.mul(x, y) != self.mul(y, x) {
                    return Some((x, y));
                }
            }
        }
        None
    }

    /// Direct product with elements `(x, y)` indexed as `x * |b| + y`.
    pub fn direct_product(&self, other: &GroupTable) -> Result<GroupTable, GroupError> {
        self.direct_product_capped(other, DEFAULT_TABLE_CAP)
    }

    pub fn direct_product_capped(
        &self,
        other: &GroupTable,
        cap: usize,
    ) -> Result<GroupTable, GroupError> {
        let n = self
            .order
            .checked_mul(other.order)
            .ok_or(GroupError::SizeLimit {
                requested: usize::MAX,
                cap,
            })?;
        if n > cap {
            return Err(GroupError::SizeLimit { requested: n, cap });
        }
        let m = other.order;
        GroupTable::from_fn(n, cap, |a, b| {
            let (ax, ay) = (a / m, a % m);
            let (bx, by) = (b / m, b % m);
            self.mul(ax, bx) * m + other.mul(ay, by)
        })
    }

    /// Closure of `seed` under multiplication and inverses, and under
    /// conjugation by the whole parent when `normal_closure` is set.
    pub fn subgroup_generated(&self, seed: &[usize], normal_closure: bool) -> Subgroup {
        let mut in_set = vec![false; self.order];
        in_set[0] = true;
        let mut members = vec![0usize];
        let mut gens: Vec<usize> = Vec::new();

        let add_gen = |g: usize, gens: &mut Vec<usize>, members: &mut Vec<usize>, in_set: &mut Vec<bool>| {
            gens.push(g);
            // Orbit of the current members under right multiplication by all
            // generators; inverses are reached because the group is finite.
            let mut i = 0;
            while i < members.len() {
                let m = members[i];
                for &s in gens.iter() {
                    let t = self.mul(m, s);
                    if !in_set[t] {
                        in_set[t] = true;
                        members.push(t);
                    }
                }
                i += 1;
            }
        };

        for &s in seed {
            if s != 0 && !in_set[s] {
                add_gen(s, &mut gens, &mut members, &mut in_set);
            }
        }

        if normal_closure {
            let mut gi = 0;
            while gi < gens.len() {
                let s = gens[gi];
                for g in 1..self.order {
                    let c = self.conj(g, s);
                    if !in_set[c] {
                        add_gen(c, &mut gens, &mut members, &mut in_set);
                    }
                }
                gi += 1;
            }
        }

        members.sort_unstable();
        let is_normal = if normal_closure {
            true
        } else {
            self.members_are_normal(&members, &in_set)
        };
        Subgroup {
            members,
            is_normal,
            parent_order: self.order,
        }
    }

    fn members_are_normal(&self, members: &[usize], in_set: &[bool]) -> bool {
        for &m in members {
            for g in 1..self.order {
                if !in_set[self.conj(g, m)] {
                    return false;
                }
            }
        }
        true
    }

    /// Smallest subgroup containing all commutators; always normal.
    pub fn derived_subgroup(&self) -> Subgroup {
        let mut seen = vec![false; self.order];
        let mut seeds = Vec::new();
        for x in 0..self.order {
            for y in (x + 1)..self.order {
                let c = self.commutator(x, y);
                if c != 0 && !seen[c] {
                    seen[c] = true;
                    seeds.push(c);
                }
            }
        }
        self.subgroup_generated(&seeds, true)
    }

    pub fn center(&self) -> Subgroup {
        let members: Vec<usize> = (0..self.order)
            .filter(|&x| (0..self.order).all(|y| self.mul(x, y) == self.mul(y, x)))
            .collect();
        Subgroup {
            members,
            is_normal: true,
            parent_order: self.order,
        }
    }

    pub(crate) fn centralizer_size(&self, x: usize) -> usize {
        (0..self.order)
            .filter(|&y| self.mul(x, y) == self.mul(y, x))
            .count()
    }

    /// Quotient by a normal subgroup, together with the canonical projection.
    ///
    /// Coset representatives are the minimal element of each coset, so the
    /// identity coset keeps index 0.
    pub fn quotient(&self, n: &Subgroup) -> Result<(GroupTable, Hom), GroupError> {
        assert_eq!(n.parent_order, self.order, "subgroup of a different parent");
        if !n.is_normal {
            return Err(GroupError::NotNormal);
        }
        let mut rep = vec![usize::MAX; self.order];
        let mut reps = Vec::new();
        for x in 0..self.order {
            if rep[x] != usize::MAX {
                continue;
            }
            // coset N*x; its representative is the minimal member
            let coset: Vec<usize> = n.members.iter().map(|&s| self.mul(s, x)).collect();
            let r = *coset.iter().min().expect("nonempty coset");
            for &c in &coset {
                rep[c] = r;
            }
            reps.push(r);
        }
        reps.sort_unstable();
        let idx_of = |r: usize| reps.binary_search(&r).expect("representative");
        let q = GroupTable::from_fn(reps.len(), self.order, |a, b| {
            idx_of(rep[self.mul(reps[a], reps[b])])
        })?;
        let image = (0..self.order).map(|x| idx_of(rep[x])).collect();
        Ok((q, Hom { image }))
    }

    /// The subgroup as a group in its own right, members relabelled
    /// `0..k` in ascending order of their parent index.
    pub fn subgroup_table(&self, sub: &Subgroup) -> GroupTable {
        assert_eq!(sub.parent_order, self.order, "subgroup of a different parent");
        let pos = |x: usize| sub.members.binary_search(&x).expect("closed subgroup");
        GroupTable::from_fn(sub.members.len(), self.order.max(1), |a, b| {
            pos(self.mul(sub.members[a], sub.members[b]))
        })
        .expect("a subgroup of a valid group is a valid group")
    }

    /// `(p, n)` with `order = p^n`, if the order is a prime power > 1.
    pub fn p_group_params(&self) -> Option<(u64, u32)> {
        let mut n = self.order as u64;
        if n < 2 {
            return None;
        }
        let mut p = 0u64;
        for cand in 2..=n {
            if n % cand == 0 {
                p = cand;
                break;
            }
        }
        let mut e = 0u32;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if n == 1 {
            Some((p, e))
        } else {
            None
        }
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn trivial_group_from_table() {
        let g = GroupTable::from_table(vec![vec![0]]).unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(g.elem_order(0), 1);
    }

    #[test]
    fn c2_from_table() {
        let g = GroupTable::from_table(vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.elem_order(0), 1);
        assert_eq!(g.elem_order(1), 2);
        assert_eq!(g.inv(1), 1);
    }

    #[test]
    fn degenerate_table_is_rejected() {
        let err = GroupTable::from_table(vec![vec![0, 1], vec![1, 1]]).unwrap_err();
        match err {
            GroupError::NotAGroup { reason } => assert!(reason.contains("not a permutation")),
            other => panic!("expected NotAGroup, got {other:?}"),
        }
    }

    #[test]
    fn broken_associativity_is_rejected() {
        // A Latin square with identity that is not a group (order 5 loop).
        let raw = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 3, 4, 0, 1],
            vec![3, 4, 1, 2, 0],
            vec![4, 2, 0, 1, 3],
        ];
        let err = GroupTable::from_table(raw).unwrap_err();
        match err {
            GroupError::NotAGroup { reason } => assert!(reason.contains("associativity")),
            other => panic!("expected NotAGroup, got {other:?}"),
        }
    }

    #[test]
    fn direct_product_c2_c2() {
        let c2 = catalog::cyclic(2).unwrap();
        let v4 = c2.direct_product(&c2).unwrap();
        assert_eq!(v4.order(), 4);
        for x in 1..4 {
            assert_eq!(v4.elem_order(x), 2);
        }
    }

    #[test]
    fn direct_product_q8_c2_center() {
        let q8 = catalog::quaternion8();
        let c2 = catalog::cyclic(2).unwrap();
        let g = q8.direct_product(&c2).unwrap();
        assert_eq!(g.order(), 16);
        // Independent scan: elements commuting with everything.
        let central: Vec<usize> = (0..16)
            .filter(|&x| (0..16).all(|y| g.mul(x, y) == g.mul(y, x)))
            .collect();
        assert_eq!(central.len(), 4);
        assert_eq!(g.center().members, central);
        let z = g.center();
        let zt = g.subgroup_table(&z);
        assert!(zt.is_elementary_abelian());
    }

    #[test]
    fn direct_product_size_limit() {
        let c = catalog::cyclic(100).unwrap();
        let err = c.direct_product(&c).unwrap_err();
        assert!(matches!(err, GroupError::SizeLimit { .. }));
    }

    #[test]
    fn derived_subgroup_of_abelian_is_trivial() {
        let g = catalog::cyclic(12).unwrap();
        let d = g.derived_subgroup();
        assert!(d.is_trivial());
        assert!(d.is_normal);
    }

    #[test]
    fn derived_subgroup_q8() {
        let q8 = catalog::quaternion8();
        let d = q8.derived_subgroup();
        assert_eq!(d.len(), 2);
        // Independent commutator closure.
        let mut comms = vec![false; 8];
        comms[0] = true;
        for x in 0..8 {
            for y in 0..8 {
                comms[q8.commutator(x, y)] = true;
            }
        }
        let listed: Vec<usize> = (0..8).filter(|&x| comms[x]).collect();
        assert_eq!(d.members, listed);
    }

    #[test]
    fn derived_subgroup_e1_3_equals_center() {
        let g = catalog::extra_special_exponent_p(3).unwrap();
        let d = g.derived_subgroup();
        let z = g.center();
        assert_eq!(d.len(), 3);
        assert!(d.same_members(&z));
    }

    #[test]
    fn derived_of_e1_3_times_c3() {
        let g = catalog::extra_special_exponent_p(3)
            .unwrap()
            .direct_product(&catalog::cyclic(3).unwrap())
            .unwrap();
        assert_eq!(g.order(), 81);
        // Brute-force commutator closure.
        let mut seen = vec![false; 81];
        seen[0] = true;
        let mut stack: Vec<usize> = (0..81)
            .flat_map(|x| (0..81).map(move |y| (x, y)))
            .map(|(x, y)| g.commutator(x, y))
            .collect();
        let mut members = vec![0usize];
        while let Some(c) = stack.pop() {
            if !seen[c] {
                seen[c] = true;
                members.push(c);
                for &m in members.clone().iter() {
                    stack.push(g.mul(m, c));
                    stack.push(g.mul(c, m));
                }
            }
        }
        assert_eq!(g.derived_subgroup().len(), 3);
        assert_eq!(members.len(), 3);
    }

    #[test]
    fn center_of_abelian_is_everything() {
        let g = catalog::cyclic(9).unwrap();
        assert_eq!(g.center().len(), 9);
    }

    #[test]
    fn center_of_d8() {
        let d8 = catalog::dihedral8();
        assert_eq!(d8.center().len(), 2);
    }

    #[test]
    fn quotient_by_trivial_subgroup() {
        let g = catalog::quaternion8();
        let triv = g.subgroup_generated(&[], false);
        let (q, hom) = g.quotient(&triv).unwrap();
        assert_eq!(q.order(), 8);
        assert!(hom.is_valid(&g, &q));
        assert!(g.is_isomorphic(&q).unwrap());
    }

    #[test]
    fn quotient_q8_by_derived() {
        let q8 = catalog::quaternion8();
        let d = q8.derived_subgroup();
        let (q, hom) = q8.quotient(&d).unwrap();
        assert_eq!(q.order(), 4);
        assert!(q.is_elementary_abelian());
        assert!(hom.is_valid(&q8, &q));
    }

    #[test]
    fn quotient_e1_by_center() {
        let g = catalog::extra_special_exponent_p(3).unwrap();
        let (q, _) = g.quotient(&g.center()).unwrap();
        assert_eq!(q.abelian_invariants().unwrap().factors, vec![3, 3]);
    }

    #[test]
    fn quotient_requires_normality() {
        let d8 = catalog::dihedral8();
        // A reflection generates a non-normal subgroup of order 2.
        let refl = (1..8).find(|&x| d8.elem_order(x) == 2 && d8.center().members != vec![0, x]);
        let s = d8.subgroup_generated(&[refl.unwrap()], false);
        if !s.is_normal {
            assert!(matches!(d8.quotient(&s), Err(GroupError::NotNormal)));
        }
    }

    #[test]
    fn subgroup_generated_empty_seed() {
        let g = catalog::dihedral8();
        let s = g.subgroup_generated(&[], false);
        assert!(s.is_trivial());
        assert!(s.is_normal);
    }

    #[test]
    fn subgroup_generated_in_q8() {
        let q8 = catalog::quaternion8();
        // i generates a cyclic subgroup of order 4.
        let i = (1..8).find(|&x| q8.elem_order(x) == 4).unwrap();
        let s = q8.subgroup_generated(&[i], false);
        assert_eq!(s.len(), 4);
    }

    #[test]
    fn normal_closure_of_rotation_in_d8() {
        let d8 = catalog::dihedral8();
        let r = (1..8).find(|&x| d8.elem_order(x) == 4).unwrap();
        let s = d8.subgroup_generated(&[r], true);
        assert_eq!(s.len(), 4);
        assert!(s.is_normal);
    }

    #[test]
    fn center_of_product_is_product_of_centers() {
        let pairs = [
            (catalog::dihedral8(), catalog::cyclic(4).unwrap()),
            (catalog::quaternion8(), catalog::dihedral8()),
            (
                catalog::extra_special_exponent_p(3).unwrap(),
                catalog::cyclic(2).unwrap(),
            ),
        ];
        for (a, b) in pairs {
            let p = a.direct_product(&b).unwrap();
            assert_eq!(p.center().len(), a.center().len() * b.center().len());
        }
    }

    #[test]
    fn p_group_params_detects_prime_powers() {
        assert_eq!(catalog::cyclic(16).unwrap().p_group_params(), Some((2, 4)));
        assert_eq!(catalog::cyclic(27).unwrap().p_group_params(), Some((3, 3)));
        assert_eq!(catalog::cyclic(12).unwrap().p_group_params(), None);
        assert_eq!(catalog::cyclic(1).unwrap().p_group_params(), None);
    }
}
