//! The (n, m) grid of exact expectations and its CSV/JSON renderings.

use rayon::prelude::*;
use serde::Serialize;

use crate::cascade::{mu_cell, CascadeOptions, CascadeTables};
use crate::rational::Rational;
use crate::DEFAULT_DIGITS;

/// Soft cap on the table size; larger requests work but get a runtime warning
/// from the CLI (the cascade cost grows steeply with n).
pub const TABLE_SOFT_MAX_N: usize = 25;

/// One grid cell.
#[derive(Clone, Debug)]
pub struct MuRow {
    pub n: usize,
    pub m: usize,
    pub value: Rational,
}

/// Exact expectations for every 1 <= m <= n <= n_max, ordered by (n, m).
#[derive(Debug)]
pub struct MuTable {
    pub rows: Vec<MuRow>,
    digits: usize,
}

#[derive(Serialize)]
struct JsonRow {
    n: usize,
    m: usize,
    mu_rational: String,
    mu_decimal: String,
}

impl MuTable {
    pub fn digits(&self) -> usize {
        self.digits
    }

    pub fn get(&self, m: usize, n: usize) -> Option<&Rational> {
        self.rows
            .iter()
            .find(|r| r.m == m && r.n == n)
            .map(|r| &r.value)
    }

    /// CSV with header `n,m,mu_rational,mu_decimal`, newline-terminated.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,m,mu_rational,mu_decimal\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{},{}\n",
                row.n,
                row.m,
                row.value,
                row.value.to_decimal(self.digits)
            ));
        }
        out
    }

    /// JSON array mirroring the CSV schema, newline-terminated.
    pub fn to_json(&self) -> String {
        let rows: Vec<JsonRow> = self
            .rows
            .iter()
            .map(|row| JsonRow {
                n: row.n,
                m: row.m,
                mu_rational: row.value.to_string(),
                mu_decimal: row.value.to_decimal(self.digits),
            })
            .collect();
        let mut s = serde_json::to_string(&rows).expect("table serialization cannot fail");
        s.push('\n');
        s
    }
}

/// Compute the full grid up to `n_max` with the default decimal digit count.
///
/// Cells are independent pure computations and are filled in parallel; the
/// result is sorted by (n, m) so output is deterministic.
pub fn mu_table(n_max: usize) -> MuTable {
    mu_table_with(n_max, DEFAULT_DIGITS, &CascadeOptions::default())
}

/// [`mu_table`] with explicit digit count and cascade options.
pub fn mu_table_with(n_max: usize, digits: usize, opts: &CascadeOptions) -> MuTable {
    assert!(n_max >= 1);
    let mut cells: Vec<(usize, usize)> = Vec::new();
    for n in 1..=n_max {
        for m in 1..=n {
            cells.push((n, m));
        }
    }
    let rows: Vec<MuRow> = if n_max == 1 {
        vec![MuRow { n: 1, m: 1, value: Rational::zero() }]
    } else {
        let tables = CascadeTables::new(n_max);
        let mut rows: Vec<MuRow> = cells
            .par_iter()
            .map(|&(n, m)| MuRow { n, m, value: mu_cell(m, n, &tables, opts) })
            .collect();
        rows.sort_by_key(|r| (r.n, r.m));
        rows
    };
    MuTable { rows, digits }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_grid() {
        let t = mu_table(2);
        assert_eq!(t.rows.len(), 3);
        assert_eq!(*t.get(1, 1).unwrap(), Rational::zero());
        assert_eq!(*t.get(1, 2).unwrap(), Rational::from_int(2));
        assert_eq!(*t.get(2, 2).unwrap(), Rational::from_int(2));
    }

    #[test]
    fn third_row_matches_smallest_formula() {
        let t = mu_table(3);
        assert_eq!(*t.get(1, 3).unwrap(), Rational::new(43, 9));
    }

    #[test]
    fn csv_layout() {
        let t = mu_table(2);
        let csv = t.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "n,m,mu_rational,mu_decimal");
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[1], "1,1,0,0.000000000000");
        assert_eq!(lines[2], "2,1,2,2.000000000000");
    }

    #[test]
    fn json_roundtrips() {
        let t = mu_table(3);
        let parsed: serde_json::Value = serde_json::from_str(&t.to_json()).unwrap();
        let arr = parsed.as_array().unwrap();
        assert_eq!(arr.len(), 6);
        assert_eq!(arr[0]["n"], 1);
        assert_eq!(arr[3]["mu_rational"], "43/9");
        assert_eq!(arr[3]["mu_decimal"], "4.777777777778");
    }

    #[test]
    fn deterministic_output() {
        let a = mu_table(4).to_csv();
        let b = mu_table(4).to_csv();
        assert_eq!(a, b);
    }
}
