//! JSON and CSV forms of count tables.
//!
//! Counts are written as decimal strings so that values beyond 2^53 survive
//! JSON readers that parse numbers as doubles. Output is a pure function of
//! the counts: the engine that produced them is not recorded, so oracle, DP
//! and Fourier slices serialize to identical bytes.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::classes::ClassCountTable;
use super::table::{CountTable, DenseRow};
use crate::error::{Error, Result};

pub const SLICE_SCHEMA: &str = "fgcount.slice/1";
pub const CLASS_SCHEMA: &str = "fgcount.classes/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceJson {
    pub schema: String,
    pub rank: usize,
    pub length: usize,
    pub entries: Vec<(Vec<i64>, String)>,
}

impl SliceJson {
    pub fn from_row(row: &DenseRow, length: usize) -> Self {
        let mut entries = Vec::new();
        row.for_each_nonzero(|b, c| entries.push((b.to_vec(), c.to_string())));
        Self {
            schema: SLICE_SCHEMA.to_string(),
            rank: row.rank(),
            length,
            entries,
        }
    }

    /// Rebuilds the row in the box `[-length, length]^rank`.
    pub fn to_row(&self) -> Result<DenseRow> {
        if self.schema != SLICE_SCHEMA {
            return Err(Error::InvalidArgument(format!("unknown slice schema {:?}", self.schema)));
        }
        let mut row = DenseRow::zeros(self.rank, self.length);
        for (beta, count) in &self.entries {
            let c: u128 = count
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad count {count:?}")))?;
            row.set(beta, c)?;
        }
        Ok(row)
    }
}

/// Compact JSON of one slice, newline terminated.
pub fn slice_to_json(row: &DenseRow, length: usize) -> String {
    let mut s = serde_json::to_string(&SliceJson::from_row(row, length)).expect("slice serializes");
    s.push('\n');
    s
}

pub fn slice_from_json(text: &str) -> Result<DenseRow> {
    let slice: SliceJson =
        serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("slice JSON: {e}")))?;
    slice.to_row()
}

/// One JSON line per length.
pub fn table_to_json_lines(table: &CountTable) -> String {
    table
        .rows()
        .iter()
        .enumerate()
        .map(|(i, row)| slice_to_json(row, i + 1))
        .collect()
}

fn csv_header(rank: usize) -> String {
    let mut h = String::from("m");
    for j in 1..=rank {
        write!(h, ",b{j}").unwrap();
    }
    h.push_str(",count\n");
    h
}

fn csv_rows(out: &mut String, row: &DenseRow, length: usize) {
    row.for_each_nonzero(|b, c| {
        write!(out, "{length}").unwrap();
        for x in b {
            write!(out, ",{x}").unwrap();
        }
        writeln!(out, ",{c}").unwrap();
    });
}

/// Columns `m, b1..bk, count`, nonzero entries only.
pub fn table_to_csv(table: &CountTable) -> String {
    let mut out = csv_header(table.rank());
    for (i, row) in table.rows().iter().enumerate() {
        csv_rows(&mut out, row, i + 1);
    }
    out
}

pub fn slice_to_csv(row: &DenseRow, length: usize) -> String {
    let mut out = csv_header(row.rank());
    csv_rows(&mut out, row, length);
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassSliceJson {
    pub schema: String,
    pub rank: usize,
    pub length: usize,
    pub method: super::classes::ClassMethod,
    /// Classes of length exactly `length`.
    pub total: String,
    /// Classes of length at most `length`.
    pub cumulative: String,
    pub entries: Vec<(Vec<i64>, String)>,
}

pub fn class_slice_to_json(table: &ClassCountTable, length: usize) -> Result<String> {
    let row = table
        .row(length)
        .ok_or_else(|| Error::InvalidArgument(format!("no class row at length {length}")))?;
    let mut entries = Vec::new();
    row.for_each_nonzero(|b, c| entries.push((b.to_vec(), c.to_string())));
    let doc = ClassSliceJson {
        schema: CLASS_SCHEMA.to_string(),
        rank: table.rank(),
        length,
        method: table.method(),
        total: table.length_count(length)?.to_string(),
        cumulative: table.pi(length)?.to_string(),
        entries,
    };
    let mut s = serde_json::to_string(&doc).expect("class slice serializes");
    s.push('\n');
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::dp::dp_table;
    use crate::census::enumerate::{oracle_table, Guard};

    #[test]
    fn slice_json_shape() {
        let t = oracle_table(2, 1, Guard::new(3)).unwrap();
        let s = slice_to_json(t.row(1).unwrap(), 1);
        assert_eq!(
            s,
            "{\"schema\":\"fgcount.slice/1\",\"rank\":2,\"length\":1,\"entries\":[[[-1,0],\"1\"],[[0,-1],\"1\"],[[0,1],\"1\"],[[1,0],\"1\"]]}\n"
        );
        assert_eq!(&slice_from_json(&s).unwrap(), t.row(1).unwrap());
    }

    #[test]
    fn engines_serialize_identically() {
        let a = oracle_table(2, 6, Guard::new(8)).unwrap();
        let b = dp_table::<u128>(2, 6, None).unwrap();
        assert_eq!(table_to_json_lines(&a), table_to_json_lines(&b));
        assert_eq!(table_to_csv(&a), table_to_csv(&b));
    }

    #[test]
    fn large_counts_keep_all_digits() {
        let t = dp_table::<u128>(2, 60, Some(0)).unwrap();
        let row = t.row(60).unwrap();
        let back = slice_from_json(&slice_to_json(row, 60)).unwrap();
        assert_eq!(back.get(&[0, 0]), row.get(&[0, 0]));
        assert!(row.get(&[0, 0]) > 1u128 << 64);
    }

    #[test]
    fn csv_layout() {
        let t = oracle_table(2, 2, Guard::new(3)).unwrap();
        let csv = table_to_csv(&t);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("m,b1,b2,count"));
        assert_eq!(lines.next(), Some("1,-1,0,1"));
        assert_eq!(csv.lines().count(), 1 + 4 + 8);
        assert!(csv.contains("\n2,1,1,2\n"));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(slice_from_json("{}").is_err());
        assert!(slice_from_json(
            "{\"schema\":\"other\",\"rank\":2,\"length\":1,\"entries\":[]}"
        )
        .is_err());
        assert!(slice_from_json(
            "{\"schema\":\"fgcount.slice/1\",\"rank\":2,\"length\":1,\"entries\":[[[5,0],\"1\"]]}"
        )
        .is_err());
    }
}
