//! The regular representation of a finitely presented group and the
//! machinery to pull concrete multiplication tables out of it.
//!
//! Over the trivial subgroup the cosets are the group elements; the element
//! of coset c is the product of its Schreier word, and multiplication is
//! realized by tracing one element's word from the other's coset.

use super::{coset_enumerate, commutator_word, invert, CosetTable, FpError, Letter, Presentation, Word};
use crate::group::GroupTable;

/// A complete coset table over the trivial subgroup.
#[derive(Debug, Clone)]
pub struct RegularRep {
    pub table: CosetTable,
    pub group_order: usize,
}

impl RegularRep {
    /// `a * b` via the Schreier word of `b`.
    pub fn mult(&self, a: u32, b: u32) -> u32 {
        self.table.trace(a, &self.table.word_for(b))
    }

    pub fn mult_word(&self, a: u32, w: &[Letter]) -> u32 {
        self.table.trace(a, w)
    }

    pub fn inverse(&self, a: u32) -> u32 {
        let w = invert(&self.table.word_for(a));
        self.table.trace(1, &w)
    }

    pub fn element_word(&self, a: u32) -> Word {
        self.table.word_for(a)
    }
}

/// Enumerate the regular representation and spot-check that tracing
/// realizes an associative multiplication with coset 1 as identity.
pub fn regular_rep(pres: &Presentation, max_cosets: usize) -> Result<RegularRep, FpError> {
    let table = coset_enumerate(pres, &[], max_cosets)?;
    let rep = RegularRep {
        group_order: table.num_cosets,
        table,
    };
    let n = rep.group_order as u64;
    let mut state = 0x7265_6775_6c61_7221u64;
    for _ in 0..10_000 {
        let a = (crate::splitmix64(&mut state) % n) as u32 + 1;
        let b = (crate::splitmix64(&mut state) % n) as u32 + 1;
        let c = (crate::splitmix64(&mut state) % n) as u32 + 1;
        if rep.mult(rep.mult(a, b), c) != rep.mult(a, rep.mult(b, c)) {
            return Err(FpError::Internal(format!(
                "regular representation not associative at ({a},{b},{c})"
            )));
        }
        if rep.mult(1, a) != a || rep.mult(a, 1) != a {
            return Err(FpError::Internal(format!(
                "coset 1 does not act as the identity at {a}"
            )));
        }
    }
    Ok(rep)
}

/// Close `seed_words` (and, when `normal_closure` is set, their conjugates
/// under the ambient generators) to a subgroup, and return its
/// multiplication table plus the list of ambient coset indices, sorted
/// ascending. Coset 1 lands at element index 0.
pub fn subgroup_as_table(
    rep: &RegularRep,
    seed_words: &[Word],
    normal_closure: bool,
    cap: usize,
) -> Result<(GroupTable, Vec<u32>), FpError> {
    let num = rep.table.num_cosets;
    let mut member = vec![false; num + 1];
    member[1] = true;
    let mut members: Vec<u32> = vec![1];
    let mut gens: Vec<u32> = Vec::new();
    let mut gen_words: Vec<Word> = Vec::new();

    // Orbit of the current members under right multiplication by the
    // subgroup generators found so far.
    macro_rules! close_orbit {
        () => {{
            let mut i = 0;
            while i < members.len() {
                let m = members[i];
                for w in gen_words.iter() {
                    let t = rep.table.trace(m, w);
                    if !member[t as usize] {
                        if members.len() >= cap {
                            return Err(FpError::CapExceeded { cap });
                        }
                        member[t as usize] = true;
                        members.push(t);
                    }
                }
                i += 1;
            }
        }};
    }

    for w in seed_words {
        let c = rep.table.trace(1, w);
        if c != 1 && !gens.contains(&c) {
            gens.push(c);
            gen_words.push(rep.element_word(c));
        }
    }
    close_orbit!();

    if normal_closure {
        let k = rep.table.num_generators();
        let mut gi = 0;
        while gi < gens.len() {
            for g in 0..k {
                for inv in [false, true] {
                    let l = Letter {
                        gen: g as u16,
                        inv,
                    };
                    // conjugate g * s * g^-1 computed by tracing
                    let start = rep.table.apply(1, l);
                    let mid = rep.table.trace(start, &gen_words[gi]);
                    let t = rep.table.apply(mid, l.inverse());
                    if !member[t as usize] {
                        gens.push(t);
                        gen_words.push(rep.element_word(t));
                        close_orbit!();
                    }
                }
            }
            gi += 1;
        }
    }

    members.sort_unstable();
    if members.len() > cap {
        return Err(FpError::CapExceeded { cap });
    }
    let order = members.len();
    // rank array for O(1) coset -> subgroup index lookups
    let mut rank = vec![u32::MAX; num + 1];
    for (i, &m) in members.iter().enumerate() {
        rank[m as usize] = i as u32;
    }
    let words: Vec<Word> = members.iter().map(|&m| rep.element_word(m)).collect();
    let mut raw = vec![0u32; order * order];
    for (i, &mi) in members.iter().enumerate() {
        for (j, w) in words.iter().enumerate() {
            let t = rep.table.trace(mi, w);
            let r = rank[t as usize];
            if r == u32::MAX {
                return Err(FpError::Internal(
                    "subgroup closure is not multiplication-closed".into(),
                ));
            }
            raw[i * order + j] = r;
        }
    }
    let table = GroupTable::from_fn(order, cap.max(order), |a, b| raw[a * order + b] as usize)?;
    Ok((table, members))
}

/// The full group behind a regular representation as an explicit table.
pub fn table_from_regular(rep: &RegularRep, cap: usize) -> Result<GroupTable, FpError> {
    if rep.group_order > cap {
        return Err(FpError::SizeLimit {
            requested: rep.group_order,
            cap,
        });
    }
    let n = rep.group_order;
    let words: Vec<Word> = (1..=n as u32).map(|c| rep.element_word(c)).collect();
    GroupTable::from_fn(n, cap, |a, b| {
        rep.table.trace(a as u32 + 1, &words[b]) as usize - 1
    })
    .map_err(FpError::Group)
}

/// Present a concrete group on a small generating set: relators come from
/// the non-tree edges of the Cayley-graph spanning tree on those
/// generators. Enumerating the result over the trivial subgroup recovers
/// exactly `|g|` cosets.
pub fn presentation_from_table(g: &GroupTable) -> Result<(Presentation, Vec<usize>), FpError> {
    let n = g.order();
    let gens = g.greedy_generators();
    let k = gens.len();
    let names: Vec<String> = (0..k).map(gen_name).collect();

    if n == 1 {
        return Ok((Presentation::new(names, vec![])?, gens));
    }

    // One relator per Cayley-graph edge: word(e) * x_i * word(e * g_i)^-1.
    // Spanning-tree edges reduce to the empty word and fall away; the rest
    // is a Schreier-style presentation of the group.
    let words = bfs_words(g, &gens);
    let mut relators: Vec<Word> = Vec::new();
    for e in 0..n {
        for (gi, &gen) in gens.iter().enumerate() {
            let f = g.mul(e, gen);
            let mut rel = words[e].clone();
            rel.push(Letter::new(gi));
            rel.extend(invert(&words[f]));
            relators.push(rel);
        }
    }
    let pres = Presentation::new(names, relators)?.simplified();
    Ok((pres, gens))
}

/// BFS words over the given generator elements: `words[e]` multiplies out
/// to `e`, letters left to right. Deterministic: queue order, generators in
/// index order.
pub fn bfs_words(g: &GroupTable, gens: &[usize]) -> Vec<Word> {
    let n = g.order();
    let mut words: Vec<Option<Word>> = vec![None; n];
    words[0] = Some(vec![]);
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(e) = queue.pop_front() {
        for (gi, &gen) in gens.iter().enumerate() {
            for inv in [false, true] {
                let t = if inv {
                    g.mul(e, g.inv(gen))
                } else {
                    g.mul(e, gen)
                };
                if words[t].is_none() {
                    let mut w = words[e].clone().unwrap();
                    w.push(Letter {
                        gen: gi as u16,
                        inv,
                    });
                    words[t] = Some(w);
                    queue.push_back(t);
                }
            }
        }
    }
    words
        .into_iter()
        .map(|w| w.expect("generators generate the group"))
        .collect()
}

fn gen_name(i: usize) -> String {
    const ALPHABET: &[u8] = b"abcdefghijklmnopqrstuvwxyz";
    if i < ALPHABET.len() {
        (ALPHABET[i] as char).to_string()
    } else {
        format!("g{i}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::fp::parse_presentation;

    fn letter_word(gen: usize) -> Word {
        vec![Letter::new(gen)]
    }

    fn pair_commutator(a: &[Letter], b: &[Letter]) -> Word {
        commutator_word(a, b)
    }

    #[test]
    fn c6_round_trip() {
        let g = catalog::cyclic(6).unwrap();
        let (pres, gens) = presentation_from_table(&g).unwrap();
        assert_eq!(gens.len(), 1);
        let rep = regular_rep(&pres, 1000).unwrap();
        assert_eq!(rep.group_order, 6);
        let back = table_from_regular(&rep, 64).unwrap();
        assert!(back.is_isomorphic(&g).unwrap());
    }

    #[test]
    fn q8_round_trip() {
        let g = catalog::quaternion8();
        let (pres, gens) = presentation_from_table(&g).unwrap();
        assert_eq!(gens.len(), 2);
        let rep = regular_rep(&pres, 1000).unwrap();
        assert_eq!(rep.group_order, 8);
        let back = table_from_regular(&rep, 64).unwrap();
        assert!(back.is_isomorphic(&g).unwrap());
    }

    #[test]
    fn e1_3_round_trip_order() {
        let g = catalog::extra_special_exponent_p(3).unwrap();
        let (pres, _) = presentation_from_table(&g).unwrap();
        let rep = regular_rep(&pres, 10_000).unwrap();
        assert_eq!(rep.group_order, 27);
    }

    #[test]
    fn subgroup_extraction_from_s3() {
        let pres = parse_presentation("gens: a b ; rels: a^3, b^2, abab").unwrap();
        let rep = regular_rep(&pres, 1000).unwrap();
        assert_eq!(rep.group_order, 6);
        let seed = vec![letter_word(0)]; // the order-3 generator
        let (t, emb) = subgroup_as_table(&rep, &seed, false, 100).unwrap();
        assert_eq!(t.order(), 3);
        assert_eq!(emb.len(), 3);
        assert_eq!(emb[0], 1);
    }

    #[test]
    fn empty_seed_gives_trivial_group() {
        let pres = parse_presentation("gens: a ; rels: a^4").unwrap();
        let rep = regular_rep(&pres, 100).unwrap();
        let (t, emb) = subgroup_as_table(&rep, &[], false, 10).unwrap();
        assert_eq!(t.order(), 1);
        assert_eq!(emb, vec![1]);
    }

    #[test]
    fn nu_of_c2_has_order_8_and_tensor_c2() {
        // nu(C2) on generators x, x^phi, with the commutator [x, x^phi]
        // centralized by both: |nu| = |C2|^2 * |C2 (x) C2| = 8.
        let x = Letter::new(0);
        let y = Letter::new(1);
        let comm = pair_commutator(&[x], &[y]);
        let mut rels = vec![vec![x, x], vec![y, y]];
        for conj_by in [x, y] {
            let mut r = crate::fp::conjugate(&comm, &[conj_by]);
            r.extend(invert(&comm));
            rels.push(crate::fp::reduce(&r));
        }
        let pres = Presentation::new(vec!["x".into(), "y".into()], rels).unwrap();
        let rep = regular_rep(&pres, 1000).unwrap();
        assert_eq!(rep.group_order, 8);
        let (t, _) = subgroup_as_table(&rep, &[comm], true, 100).unwrap();
        assert_eq!(t.order(), 2);
    }

    #[test]
    fn round_trip_is_isomorphic_for_small_catalog() {
        for spec in ["C2", "C4", "C2^2", "D8", "Q8", "C4xC2", "C8", "E2_3"] {
            let g = catalog::parse_group_spec(spec).unwrap();
            let (pres, _) = presentation_from_table(&g).unwrap();
            let rep = regular_rep(&pres, 10_000).unwrap();
            assert_eq!(rep.group_order, g.order(), "{spec}");
            let back = table_from_regular(&rep, 4096).unwrap();
            assert!(back.is_isomorphic(&g).unwrap(), "{spec}");
        }
    }
}
