use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{IntScalar, LinalgError};

/// Sparse integer matrix, stored column by column.
///
/// Each column is a list of `(row, value)` pairs sorted by row with no zero
/// values. Absent entries are zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseIntMatrix<T> {
    rows: usize,
    cols: usize,
    columns: Vec<Vec<(usize, T)>>,
}

impl<T: IntScalar> SparseIntMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            columns: vec![Vec::new(); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.columns[i].push((i, T::one()));
        }
        m
    }

    /// Builds a matrix from dense rows of machine integers.
    pub fn from_rows(rows: &[&[i64]]) -> Self {
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(rows.len(), ncols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), ncols, "ragged rows");
            for (j, &v) in r.iter().enumerate() {
                if v != 0 {
                    m.columns[j].push((i, T::from_i64_exact(v)));
                }
            }
        }
        m
    }

    /// Builds a matrix from raw columns. Duplicate rows are summed and zeros dropped.
    pub fn from_columns(rows: usize, columns: Vec<Vec<(usize, T)>>) -> Result<Self, LinalgError> {
        let cols = columns.len();
        let mut out = Vec::with_capacity(cols);
        for (j, mut col) in columns.into_iter().enumerate() {
            col.sort_by_key(|e| e.0);
            let mut merged: Vec<(usize, T)> = Vec::with_capacity(col.len());
            for (r, v) in col {
                if r >= rows {
                    return Err(LinalgError::OutOfBounds {
                        row: r,
                        col: j,
                        rows,
                        cols,
                    });
                }
                match merged.last_mut() {
                    Some((lr, lv)) if *lr == r => *lv = lv.clone() + v,
                    _ => merged.push((r, v)),
                }
            }
            merged.retain(|(_, v)| !v.is_zero());
            out.push(merged);
        }
        Ok(Self {
            rows,
            cols,
            columns: out,
        })
    }

    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, T)>,
    ) -> Result<Self, LinalgError> {
        let mut columns = vec![Vec::new(); cols];
        for (r, c, v) in triplets {
            if c >= cols {
                return Err(LinalgError::OutOfBounds {
                    row: r,
                    col: c,
                    rows,
                    cols,
                });
            }
            columns[c].push((r, v));
        }
        Self::from_columns(rows, columns)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn column(&self, j: usize) -> &[(usize, T)] {
        &self.columns[j]
    }

    pub fn get(&self, r: usize, c: usize) -> T {
        let col = &self.columns[c];
        match col.binary_search_by_key(&r, |e| e.0) {
            Ok(k) => col[k].1.clone(),
            Err(_) => T::zero(),
        }
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        let col = &mut self.columns[c];
        match col.binary_search_by_key(&r, |e| e.0) {
            Ok(k) if v.is_zero() => {
                col.remove(k);
            }
            Ok(k) => col[k].1 = v,
            Err(_) if v.is_zero() => {}
            Err(k) => col.insert(k, (r, v)),
        }
    }

    /// All nonzero entries as `(row, col, value)` in column-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &T)> + '_ {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(j, col)| col.iter().map(move |(i, v)| (*i, j, v)))
    }

    pub fn transpose(&self) -> Self {
        let mut columns = vec![Vec::new(); self.rows];
        for (i, j, v) in self.entries() {
            columns[i].push((j, v.clone()));
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            columns,
        }
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.cols, "vector length");
        let mut out = vec![T::zero(); self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            if x[j].is_zero() {
                continue;
            }
            for (i, v) in col {
                out[*i] = out[*i].clone() + v.clone() * x[j].clone();
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions");
        let columns = other
            .columns
            .iter()
            .map(|col| {
                let mut acc: Vec<(usize, T)> = Vec::new();
                for (k, b) in col {
                    for (i, a) in &self.columns[*k] {
                        acc.push((*i, a.clone() * b.clone()));
                    }
                }
                acc
            })
            .collect();
        Self::from_columns(self.rows, columns).expect("product rows in range")
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "row counts");
        let mut columns = self.columns.clone();
        columns.extend(other.columns.iter().cloned());
        Self {
            rows: self.rows,
            cols: self.cols + other.cols,
            columns,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    /// Textual triplet format: a `rows cols` header, then one `r c value` line per entry.
    pub fn to_triplet_text(&self) -> String {
        let mut s = format!("{} {}\n", self.rows, self.cols);
        for (i, j, v) in self.entries() {
            let _ = writeln!(s, "{i} {j} {v}");
        }
        s
    }

    pub fn from_triplet_text(text: &str) -> Result<Self, LinalgError>
    where
        T: std::str::FromStr,
    {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| LinalgError::Parse("missing header".into()))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| LinalgError::Parse(format!("bad header {header:?}"))))
            .collect::<Result<_, _>>()?;
        let [rows, cols] = dims[..] else {
            return Err(LinalgError::Parse(format!("bad header {header:?}")));
        };
        let mut triplets = Vec::new();
        for line in lines {
            let parts: Vec<&str> = line.split_whitespace().collect();
            let bad = || LinalgError::Parse(format!("bad entry line {line:?}"));
            if parts.len() != 3 {
                return Err(bad());
            }
            let r: usize = parts[0].parse().map_err(|_| bad())?;
            let c: usize = parts[1].parse().map_err(|_| bad())?;
            let v: T = parts[2].parse().map_err(|_| bad())?;
            if r >= rows {
                return Err(LinalgError::OutOfBounds { row: r, col: c, rows, cols });
            }
            triplets.push((r, c, v));
        }
        Self::from_triplets(rows, cols, triplets)
    }
}
