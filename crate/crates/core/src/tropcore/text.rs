//! Plain-text matrix format.
//!
//! ```text
//! 2 3
//! 0 1/2 -3
//! 4 5 6/7
//! ```
//!
//! The first line holds `ROWS COLS`; each following line holds one row of
//! whitespace-separated rationals `p` or `p/q` with `q > 0`. Blank lines are
//! ignored. Several matrices may be concatenated in one file.

use std::str::FromStr;

use super::{TropMatrix, TropScalar};
use crate::error::{Result, TropError};

fn parse_err(line: usize, reason: impl Into<String>) -> TropError {
    TropError::Parse {
        line,
        reason: reason.into(),
    }
}

/// Parses every matrix in `text`, in order.
pub fn parse_matrices(text: &str) -> Result<Vec<TropMatrix>> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let mut out = Vec::new();
    while let Some((hline, header)) = lines.next() {
        let dims: Vec<&str> = header.split_whitespace().collect();
        let [r, c] = dims[..] else {
            return Err(parse_err(hline, "header must be `ROWS COLS`"));
        };
        let rows: usize = r
            .parse()
            .map_err(|_| parse_err(hline, format!("bad row count {r:?}")))?;
        let cols: usize = c
            .parse()
            .map_err(|_| parse_err(hline, format!("bad column count {c:?}")))?;
        if rows == 0 || cols == 0 {
            return Err(parse_err(hline, "dimensions must be positive"));
        }
        let mut entries = Vec::with_capacity(rows * cols);
        for k in 0..rows {
            let (lno, line) = lines
                .next()
                .ok_or_else(|| parse_err(hline, format!("expected {rows} rows, found {k}")))?;
            let before = entries.len();
            for tok in line.split_whitespace() {
                let v = TropScalar::from_str(tok).map_err(|e| parse_err(lno, e.to_string()))?;
                entries.push(v);
            }
            let got = entries.len() - before;
            if got != cols {
                return Err(parse_err(lno, format!("expected {cols} entries, found {got}")));
            }
        }
        out.push(TropMatrix::new(rows, cols, entries)?);
    }
    Ok(out)
}

/// Parses exactly one matrix.
pub fn parse_matrix(text: &str) -> Result<TropMatrix> {
    let mut all = parse_matrices(text)?;
    match all.len() {
        1 => Ok(all.pop().unwrap()),
        0 => Err(parse_err(1, "no matrix found")),
        k => Err(parse_err(1, format!("expected one matrix, found {k}"))),
    }
}

/// Renders a matrix in the text format (trailing newline included).
pub fn format_matrix(m: &TropMatrix) -> String {
    m.to_string()
}

impl FromStr for TropMatrix {
    type Err = TropError;

    fn from_str(s: &str) -> Result<Self> {
        parse_matrix(s)
    }
}
