use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::TropScalar;
use crate::error::{Result, TropError};

/// A dense rectangular matrix over the min-plus semiring.
///
/// Entries are stored row-major. All entries are finite.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TropMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<TropScalar>,
    // every entry fits in an i64; enables the machine-word product path
    all_int: bool,
}

/// Similarity parameters `s_1..s_n`; acting on `C` gives `C[i][j] + s_i - s_j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Potentials(pub Vec<TropScalar>);

impl Potentials {
    pub fn zeros(n: usize) -> Self {
        Potentials(vec![TropScalar::ZERO; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[TropScalar] {
        &self.0
    }
}

impl TropMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<TropScalar>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(TropError::Empty);
        }
        if entries.len() != rows * cols {
            return Err(TropError::EntryCount {
                rows,
                cols,
                got: entries.len(),
            });
        }
        Ok(Self::from_parts(rows, cols, entries))
    }

    fn from_parts(rows: usize, cols: usize, entries: Vec<TropScalar>) -> Self {
        let all_int = entries.iter().all(|e| e.as_i64().is_some());
        TropMatrix {
            rows,
            cols,
            entries,
            all_int,
        }
    }

    pub fn from_rows(rows: Vec<Vec<TropScalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(TropError::Parameter("ragged rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    /// Convenience constructor from integer rows. Panics on ragged or empty input.
    pub fn from_ints<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&v| TropScalar::from_int(v)).collect())
            .collect();
        Self::from_rows(rows).expect("well-formed integer matrix")
    }

    pub fn filled(rows: usize, cols: usize, value: TropScalar) -> Result<Self> {
        Self::new(rows, cols, vec![value; rows * cols])
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        Self::filled(rows, cols, TropScalar::ZERO)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Order of a square matrix.
    pub fn order(&self, op: &'static str) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(TropError::NotSquare {
                op,
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    /// Entry at zero-based `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> &TropScalar {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        &self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[TropScalar] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[TropScalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<TropScalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn diagonal(&self) -> Vec<TropScalar> {
        (0..self.rows.min(self.cols))
            .map(|i| self.get(i, i).clone())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut out = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                out.push(self.get(i, j).clone());
            }
        }
        Self::from_parts(self.cols, self.rows, out)
    }

    pub fn map(&self, f: impl FnMut(&TropScalar) -> TropScalar) -> Self {
        Self::from_parts(self.rows, self.cols, self.entries.iter().map(f).collect())
    }

    /// Builds a matrix entry by entry from zero-based indices.
    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> TropScalar,
    ) -> Result<Self> {
        let mut out = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                out.push(f(i, j));
            }
        }
        Self::new(rows, cols, out)
    }

    pub fn min_entry(&self) -> &TropScalar {
        self.entries.iter().min().expect("non-empty matrix")
    }

    /// Min-plus product: `(AB)[i][j] = min_t A[i][t] + B[t][j]`.
    pub fn mul(&self, rhs: &TropMatrix) -> Result<TropMatrix> {
        if self.cols != rhs.rows {
            return Err(TropError::Shape {
                op: "mat_mul",
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: rhs.rows,
                right_cols: rhs.cols,
            });
        }
        if self.all_int && rhs.all_int {
            if let Some(m) = self.mul_i64(rhs) {
                return Ok(m);
            }
        }
        Ok(self.mul_exact(rhs))
    }

    fn mul_i64(&self, rhs: &TropMatrix) -> Option<TropMatrix> {
        let a: Vec<i64> = self.entries.iter().map(|e| e.as_i64().unwrap()).collect();
        let b: Vec<i64> = rhs.entries.iter().map(|e| e.as_i64().unwrap()).collect();
        let (m, k, n) = (self.rows, self.cols, rhs.cols);
        let mut out = Vec::with_capacity(m * n);
        for i in 0..m {
            for j in 0..n {
                let mut best = a[i * k].checked_add(b[j])?;
                for t in 1..k {
                    let s = a[i * k + t].checked_add(b[t * n + j])?;
                    if s < best {
                        best = s;
                    }
                }
                out.push(TropScalar::from_int(best));
            }
        }
        Some(TropMatrix {
            rows: m,
            cols: n,
            entries: out,
            all_int: true,
        })
    }

    fn mul_exact(&self, rhs: &TropMatrix) -> TropMatrix {
        let (m, k, n) = (self.rows, self.cols, rhs.cols);
        let mut out = Vec::with_capacity(m * n);
        for i in 0..m {
            for j in 0..n {
                let mut best = self.get(i, 0) + rhs.get(0, j);
                for t in 1..k {
                    let s = self.get(i, t) + rhs.get(t, j);
                    if s < best {
                        best = s;
                    }
                }
                out.push(best);
            }
        }
        Self::from_parts(m, n, out)
    }

    /// `k`-fold min-plus power, `k >= 1`, by repeated squaring.
    pub fn pow(&self, k: u64) -> Result<TropMatrix> {
        self.order("mat_pow")?;
        if k == 0 {
            return Err(TropError::ZeroPower);
        }
        let mut base = self.clone();
        let mut acc: Option<TropMatrix> = None;
        let mut e = k;
        loop {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base)?,
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.mul(&base)?;
        }
        Ok(acc.expect("k >= 1"))
    }

    /// Entrywise minimum, the tropical sum of two matrices.
    pub fn hadamard_min(&self, rhs: &TropMatrix) -> Result<TropMatrix> {
        if self.shape() != rhs.shape() {
            return Err(TropError::Shape {
                op: "hadamard_min",
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: rhs.rows,
                right_cols: rhs.cols,
            });
        }
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a.min(b))
            .collect();
        Ok(Self::from_parts(self.rows, self.cols, entries))
    }

    /// Applies the similarity `C[i][j] + s_i - s_j`.
    pub fn similarity(&self, s: &Potentials) -> Result<TropMatrix> {
        let n = self.order("similarity")?;
        if s.len() != n {
            return Err(TropError::PotentialsLength {
                expected: n,
                got: s.len(),
            });
        }
        let s = s.as_slice();
        Self::from_fn(n, n, |i, j| &(self.get(i, j) + &s[i]) - &s[j])
    }
}

/// Free-function form of [`TropMatrix::mul`].
pub fn mat_mul(a: &TropMatrix, b: &TropMatrix) -> Result<TropMatrix> {
    a.mul(b)
}

/// Free-function form of [`TropMatrix::pow`].
pub fn mat_pow(a: &TropMatrix, k: u64) -> Result<TropMatrix> {
    a.pow(k)
}

pub fn hadamard_min(a: &TropMatrix, b: &TropMatrix) -> Result<TropMatrix> {
    a.hadamard_min(b)
}

pub fn similarity(c: &TropMatrix, s: &Potentials) -> Result<TropMatrix> {
    c.similarity(s)
}

impl fmt::Display for TropMatrix {
    /// The matrix text format: a `ROWS COLS` header followed by one line per row.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for TropMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(ToString::to_string).collect())
            .collect();
        write!(f, "TropMatrix{rows:?}")
    }
}

impl Serialize for TropMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<&[TropScalar]> = (0..self.rows).map(|i| self.row(i)).collect();
        let mut st = serializer.serialize_struct("TropMatrix", 3)?;
        st.serialize_field("rows", &self.rows)?;
        st.serialize_field("cols", &self.cols)?;
        st.serialize_field("entries", &rows)?;
        st.end()
    }
}
