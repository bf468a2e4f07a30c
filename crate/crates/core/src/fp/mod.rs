//! Finitely presented groups and Todd-Coxeter coset enumeration.

mod coset;
mod regular;

pub use coset::{coset_enumerate, CosetTable, TableStatus};
pub use regular::{
    bfs_words, presentation_from_table, regular_rep, subgroup_as_table, table_from_regular,
    RegularRep,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum FpError {
    #[error("enumeration capped: {live} live cosets exceed the limit {cap}")]
    Capped { cap: usize, live: usize },
    #[error("free group suspected: no relators over the trivial subgroup cannot terminate")]
    FreeGroupSuspected,
    #[error("subgroup closure exceeded the cap {cap}")]
    CapExceeded { cap: usize },
    #[error("table size {requested} exceeds the cap {cap}")]
    SizeLimit { requested: usize, cap: usize },
    #[error("bad presentation: {0}")]
    BadPresentation(String),
    #[error("presentation format at byte {pos}: {msg}")]
    Format { pos: usize, msg: String },
    #[error("internal enumeration invariant violated: {0}")]
    Internal(String),
    #[error(transparent)]
    Group(#[from] crate::group::GroupError),
}

/// One letter of a word: a generator index, possibly inverted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    pub gen: u16,
    pub inv: bool,
}

impl Letter {
    pub fn new(gen: usize) -> Letter {
        Letter {
            gen: gen as u16,
            inv: false,
        }
    }

    pub fn inverse(self) -> Letter {
        Letter {
            gen: self.gen,
            inv: !self.inv,
        }
    }

    /// Column index in a coset table with two columns per generator.
    pub fn col(self) -> usize {
        self.gen as usize * 2 + usize::from(self.inv)
    }
}

pub type Word = Vec<Letter>;

/// Free reduction: cancel adjacent x x^-1 pairs.
pub fn reduce(word: &[Letter]) -> Word {
    let mut out: Word = Vec::with_capacity(word.len());
    for &l in word {
        if out.last().is_some_and(|&p| p == l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

pub fn invert(word: &[Letter]) -> Word {
    word.iter().rev().map(|l| l.inverse()).collect()
}

/// `by . w . by^-1`.
pub fn conjugate(word: &[Letter], by: &[Letter]) -> Word {
    let mut out = by.to_vec();
    out.extend_from_slice(word);
    out.extend(invert(by));
    reduce(&out)
}

/// `[a, b] = a b a^-1 b^-1`.
pub fn commutator_word(a: &[Letter], b: &[Letter]) -> Word {
    let mut out = a.to_vec();
    out.extend_from_slice(b);
    out.extend(invert(a));
    out.extend(invert(b));
    reduce(&out)
}

/// Trim conjugating prefixes: while the first letter inverts the last,
/// drop both. Keeps relators short without changing the normal closure.
pub fn cyclically_reduce(word: &[Letter]) -> Word {
    let mut w = reduce(word);
    while w.len() >= 2 && w[0] == w[w.len() - 1].inverse() {
        w = reduce(&w[1..w.len() - 1]);
    }
    w
}

/// Canonical form under rotation and inversion, for relator deduplication.
fn rotation_canonical(word: &[Letter]) -> Word {
    let key = |l: &Letter| (l.gen, l.inv);
    let mut best: Option<Word> = None;
    for candidate in [word.to_vec(), invert(word)] {
        for r in 0..candidate.len().max(1) {
            let mut rot = candidate[r..].to_vec();
            rot.extend_from_slice(&candidate[..r]);
            if best
                .as_ref()
                .is_none_or(|b| rot.iter().map(key).lt(b.iter().map(key)))
            {
                best = Some(rot);
            }
        }
    }
    best.unwrap_or_default()
}

/// A finitely presented group: generator names plus freely reduced relators.
#[derive(Debug, Clone)]
pub struct Presentation {
    pub generator_names: Vec<String>,
    pub relators: Vec<Word>,
}

impl Presentation {
    pub fn new(generator_names: Vec<String>, relators: Vec<Word>) -> Result<Presentation, FpError> {
        let k = generator_names.len();
        let mut reduced = Vec::with_capacity(relators.len());
        for r in relators {
            if let Some(l) = r.iter().find(|l| l.gen as usize >= k) {
                return Err(FpError::BadPresentation(format!(
                    "relator references generator {} but only {k} are declared",
                    l.gen
                )));
            }
            let r = reduce(&r);
            if !r.is_empty() {
                reduced.push(r);
            }
        }
        Ok(Presentation {
            generator_names,
            relators: reduced,
        })
    }

    pub fn num_generators(&self) -> usize {
        self.generator_names.len()
    }

    /// Cyclically reduce, deduplicate up to rotation/inversion, and sort
    /// relators by length then content. Enumeration behaviour becomes
    /// independent of the relator order given by the caller.
    pub fn simplified(&self) -> Presentation {
        let mut canon: Vec<(Word, Word)> = self
            .relators
            .iter()
            .map(|r| {
                let c = cyclically_reduce(r);
                (rotation_canonical(&c), c)
            })
            .filter(|(_, c)| !c.is_empty())
            .collect();
        canon.sort_by(|a, b| {
            (a.0.len(), a.0.iter().map(|l| (l.gen, l.inv)).collect::<Vec<_>>()).cmp(&(
                b.0.len(),
                b.0.iter().map(|l| (l.gen, l.inv)).collect::<Vec<_>>(),
            ))
        });
        canon.dedup_by(|a, b| a.0 == b.0);
        Presentation {
            generator_names: self.generator_names.clone(),
            relators: canon.into_iter().map(|(_, c)| c).collect(),
        }
    }

    pub fn word_to_string(&self, w: &[Letter]) -> String {
        if w.is_empty() {
            return "1".into();
        }
        let mut parts = Vec::new();
        for &l in w {
            let name = &self.generator_names[l.gen as usize];
            if l.inv {
                parts.push(format!("{name}^-1"));
            } else {
                parts.push(name.clone());
            }
        }
        parts.join("*")
    }
}

/// Parse the presentation text format:
/// `gens: a b ; rels: a^4, b^2=a^2, b*a*b^-1=a^-1`.
/// `=` relators are rewritten as left * right^-1; `*` between factors is
/// optional; `^` takes an integer power.
pub fn parse_presentation(text: &str) -> Result<Presentation, FpError> {
    let fail = |pos: usize, msg: &str| FpError::Format {
        pos,
        msg: msg.to_string(),
    };
    let gens_at = text
        .find("gens:")
        .ok_or_else(|| fail(0, "missing 'gens:' section"))?;
    let rels_at = text
        .find("rels:")
        .ok_or_else(|| fail(text.len(), "missing 'rels:' section"))?;
    let gens_part = &text[gens_at + 5..];
    let gens_end = gens_part
        .find(';')
        .ok_or_else(|| fail(gens_at, "missing ';' after generator list"))?;
    let names: Vec<String> = gens_part[..gens_end]
        .split_whitespace()
        .map(str::to_string)
        .collect();
    if names.is_empty() {
        return Err(fail(gens_at, "no generators declared"));
    }
    for (i, n) in names.iter().enumerate() {
        if !n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
            || !n.starts_with(|c: char| c.is_ascii_alphabetic())
        {
            return Err(fail(gens_at, &format!("bad generator name {n:?}")));
        }
        if names[..i].contains(n) {
            return Err(fail(gens_at, &format!("duplicate generator name {n:?}")));
        }
    }

    let rels_text = &text[rels_at + 5..];
    let base = rels_at + 5;
    let mut relators = Vec::new();
    for piece in rels_text.split(',') {
        let piece_offset = base + (piece.as_ptr() as usize - rels_text.as_ptr() as usize);
        let piece = piece.trim();
        if piece.is_empty() {
            continue;
        }
        let word = match piece.split_once('=') {
            Some((lhs, rhs)) => {
                let l = parse_word(lhs, &names, piece_offset)?;
                let r = parse_word(rhs, &names, piece_offset)?;
                let mut w = l;
                w.extend(invert(&r));
                w
            }
            None => parse_word(piece, &names, piece_offset)?,
        };
        relators.push(reduce(&word));
    }
    Presentation::new(names, relators)
}

fn parse_word(text: &str, names: &[String], offset: usize) -> Result<Word, FpError> {
    let bytes = text.as_bytes();
    let mut pos = 0usize;
    let mut word: Word = Vec::new();
    let fail = |pos: usize, msg: String| FpError::Format {
        pos: offset + pos,
        msg,
    };
    while pos < bytes.len() {
        let c = bytes[pos] as char;
        if c.is_whitespace() || c == '*' {
            pos += 1;
            continue;
        }
        // longest generator-name match at this position
        let rest = &text[pos..];
        let gen = names
            .iter()
            .enumerate()
            .filter(|(_, n)| rest.starts_with(n.as_str()))
            .max_by_key(|(_, n)| n.len());
        let Some((gi, name)) = gen else {
            return Err(fail(pos, format!("expected a generator name at {rest:?}")));
        };
        pos += name.len();
        let mut power: i64 = 1;
        if pos < bytes.len() && bytes[pos] as char == '^' {
            pos += 1;
            let start = pos;
            if pos < bytes.len() && bytes[pos] as char == '-' {
                pos += 1;
            }
            while pos < bytes.len() && (bytes[pos] as char).is_ascii_digit() {
                pos += 1;
            }
            power = text[start..pos]
                .parse()
                .map_err(|_| fail(start, "expected an integer power".into()))?;
        }
        let letter = if power < 0 {
            Letter::new(gi).inverse()
        } else {
            Letter::new(gi)
        };
        for _ in 0..power.unsigned_abs() {
            word.push(letter);
        }
    }
    Ok(reduce(&word))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(gen: usize) -> Letter {
        Letter::new(gen)
    }

    #[test]
    fn reduction_cancels_pairs() {
        let w = vec![l(0), l(1), l(1).inverse(), l(0).inverse(), l(2)];
        assert_eq!(reduce(&w), vec![l(2)]);
    }

    #[test]
    fn commutator_and_conjugate_shapes() {
        let a = vec![l(0)];
        let b = vec![l(1)];
        let c = commutator_word(&a, &b);
        assert_eq!(c, vec![l(0), l(1), l(0).inverse(), l(1).inverse()]);
        let conj = conjugate(&c, &[l(2)]);
        assert_eq!(conj.len(), 6);
    }

    #[test]
    fn cyclic_reduction_strips_conjugators() {
        // a b a^-1 cyclically reduces to b
        let w = vec![l(0), l(1), l(0).inverse()];
        assert_eq!(cyclically_reduce(&w), vec![l(1)]);
    }

    #[test]
    fn parse_standard_form() {
        let p = parse_presentation("gens: a b ; rels: a^4, b^2=a^2, b*a*b^-1=a^-1").unwrap();
        assert_eq!(p.num_generators(), 2);
        assert_eq!(p.relators.len(), 3);
        assert_eq!(p.relators[0], vec![l(0); 4]);
        // b^2 = a^2 becomes b b a^-1 a^-1
        assert_eq!(
            p.relators[1],
            vec![l(1), l(1), l(0).inverse(), l(0).inverse()]
        );
        assert_eq!(p.word_to_string(&p.relators[2]), "b*a*b^-1*a");
    }

    #[test]
    fn parse_juxtaposition_without_stars() {
        let p = parse_presentation("gens: a b ; rels: abab").unwrap();
        assert_eq!(p.relators[0], vec![l(0), l(1), l(0), l(1)]);
    }

    #[test]
    fn parse_rejects_unknown_names() {
        assert!(parse_presentation("gens: a ; rels: ab").is_err());
        assert!(parse_presentation("rels: a").is_err());
    }

    #[test]
    fn presentation_validates_indices() {
        let bad = Presentation::new(vec!["a".into()], vec![vec![l(1)]]);
        assert!(matches!(bad, Err(FpError::BadPresentation(_))));
    }

    #[test]
    fn simplification_dedups_rotations() {
        let p = Presentation::new(
            vec!["a".into(), "b".into()],
            vec![
                vec![l(0), l(1)],
                vec![l(1), l(0)],
                vec![l(1).inverse(), l(0).inverse()],
            ],
        )
        .unwrap();
        assert_eq!(p.simplified().relators.len(), 1);
    }
}
