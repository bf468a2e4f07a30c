//! Content-addressed result cache.
//!
//! The key hashes the canonicalized multiplication table: the table is
//! relabelled by a BFS from the identity over its (sorted) greedy
//! generating set, so identical abstract constructions share an entry even
//! when built in a different element order. Writes go through a temp file
//! and an atomic rename, so concurrent writers are safe.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::group::GroupTable;
use crate::record::ComputationRecord;
use crate::ENGINE_VERSION;

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Cache {
        Cache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Hex digest of the canonicalized table.
    pub fn key_for(g: &GroupTable) -> String {
        let canon = canonical_table_bytes(g);
        let mut hasher = Sha256::new();
        hasher.update(&canon);
        format!("{:x}", hasher.finalize())
    }

    fn path_for(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// A hit requires a parseable record with a matching engine version.
    pub fn lookup(&self, key: &str) -> Option<ComputationRecord> {
        let text = fs::read_to_string(self.path_for(key)).ok()?;
        let rec: ComputationRecord = serde_json::from_str(&text).ok()?;
        if rec.engine_version == ENGINE_VERSION {
            Some(rec)
        } else {
            None
        }
    }

    pub fn store(&self, key: &str, rec: &ComputationRecord) -> io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let tmp = self.dir.join(format!(".{key}.tmp.{}", std::process::id()));
        let body = serde_json::to_string_pretty(rec).expect("record serializes");
        fs::write(&tmp, body)?;
        fs::rename(&tmp, self.path_for(key))
    }
}

/// Relabel by BFS from the identity over the sorted greedy generating set
/// and emit the table row-major as little-endian u32, prefixed by the
/// order.
fn canonical_table_bytes(g: &GroupTable) -> Vec<u8> {
    let mut gens = g.greedy_generators();
    gens.sort_unstable();
    let n = g.order();
    let mut newidx = vec![usize::MAX; n];
    let mut order_of: Vec<usize> = Vec::with_capacity(n);
    newidx[0] = 0;
    order_of.push(0);
    let mut head = 0;
    while head < order_of.len() {
        let e = order_of[head];
        head += 1;
        for &gen in &gens {
            for t in [g.mul(e, gen), g.mul(e, g.inv(gen))] {
                if newidx[t] == usize::MAX {
                    newidx[t] = order_of.len();
                    order_of.push(t);
                }
            }
        }
    }
    debug_assert_eq!(order_of.len(), n);
    let mut bytes = Vec::with_capacity(4 + 4 * n * n);
    bytes.extend_from_slice(&(n as u32).to_le_bytes());
    for x in 0..n {
        for y in 0..n {
            let v = newidx[g.mul(order_of[x], order_of[y])] as u32;
            bytes.extend_from_slice(&v.to_le_bytes());
        }
    }
    bytes
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::record::compute_record;

    #[test]
    fn canonical_key_ignores_element_relabelling() {
        let q8 = catalog::quaternion8();
        let perm = [0usize, 2, 4, 6, 1, 3, 5, 7];
        let mut inv = [0usize; 8];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        let raw: Vec<Vec<usize>> = (0..8)
            .map(|x| (0..8).map(|y| inv[q8.mul(perm[x], perm[y])]).collect())
            .collect();
        let relabelled = GroupTable::from_table(raw).unwrap();
        assert_eq!(Cache::key_for(&q8), Cache::key_for(&relabelled));
        // but different groups differ
        assert_ne!(Cache::key_for(&q8), Cache::key_for(&catalog::dihedral8()));
    }

    #[test]
    fn store_then_lookup_round_trips_bit_identically() {
        let dir = std::env::temp_dir().join(format!("tensorsq-cache-test-{}", std::process::id()));
        let _ = fs::remove_dir_all(&dir);
        let cache = Cache::new(&dir);
        let g = catalog::quaternion8();
        let key = Cache::key_for(&g);
        assert!(cache.lookup(&key).is_none());
        let rec = compute_record("Q8", &g, 100_000).unwrap();
        cache.store(&key, &rec).unwrap();
        let hit = cache.lookup(&key).expect("cache hit");
        assert_eq!(hit, rec);
        assert_eq!(
            serde_json::to_vec_pretty(&hit).unwrap(),
            serde_json::to_vec_pretty(&rec).unwrap()
        );
        let _ = fs::remove_dir_all(&dir);
    }
}
