//! Cayley-table text format.
//!
//! Line 1 is the order N; the next N lines hold N space-separated 0-based
//! indices (row x lists x*y for y = 0..N-1). Blank lines and `#` comments
//! are ignored. The identity must be element 0.

use super::{GroupError, GroupTable};

impl GroupTable {
    pub fn from_cayley_text(text: &str) -> Result<GroupTable, GroupError> {
        let mut lines = text.lines().filter_map(|line| {
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                None
            } else {
                Some(body)
            }
        });
        let order: usize = lines
            .next()
            .ok_or_else(|| GroupError::Format("missing order line".into()))?
            .parse()
            .map_err(|e| GroupError::Format(format!("bad order line: {e}")))?;
        let mut raw = Vec::with_capacity(order);
        for i in 0..order {
            let line = lines
                .next()
                .ok_or_else(|| GroupError::Format(format!("missing row {i}")))?;
            let row: Result<Vec<usize>, _> = line.split_whitespace().map(str::parse).collect();
            let row = row.map_err(|e| GroupError::Format(format!("row {i}: {e}")))?;
            raw.push(row);
        }
        if lines.next().is_some() {
            return Err(GroupError::Format("trailing content after table".into()));
        }
        GroupTable::from_table(raw)
    }

    pub fn to_cayley_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("{}\n", self.order()));
        for x in 0..self.order() {
            let row: Vec<String> = (0..self.order()).map(|y| self.mul(x, y).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn round_trip_q8() {
        let q8 = catalog::quaternion8();
        let text = q8.to_cayley_text();
        let back = GroupTable::from_cayley_text(&text).unwrap();
        assert_eq!(q8, back);
    }

    #[test]
    fn comments_and_blanks_are_ignored() {
        let text = "# the cyclic group of order 2\n\n2\n0 1 # identity row\n1 0\n";
        let g = GroupTable::from_cayley_text(text).unwrap();
        assert_eq!(g.order(), 2);
    }

    #[test]
    fn nonzero_identity_is_rejected() {
        // C2 written with the identity at index 1.
        let text = "2\n1 0\n0 1\n";
        assert!(GroupTable::from_cayley_text(text).is_err());
    }

    #[test]
    fn truncated_table_is_rejected() {
        assert!(GroupTable::from_cayley_text("3\n0 1 2\n").is_err());
    }
}
