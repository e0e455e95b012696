//! Dense row-major numeric matrix.

use crate::error::{Error, Result};

/// An `n × m` matrix of finite reals with optional row and column labels.
///
/// Indices taken by the accessor methods are zero-based; the one-based
/// convention only applies to [`Bicluster`](crate::Bicluster) and serialized
/// artifacts.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    n: usize,
    m: usize,
    values: Vec<f64>,
    row_labels: Option<Vec<String>>,
    col_labels: Option<Vec<String>>,
}

impl DataMatrix {
    /// Builds a matrix from row-major values.
    pub fn new(n: usize, m: usize, values: Vec<f64>) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidMatrix(format!(
                "dimensions must be positive, got {n}x{m}"
            )));
        }
        if values.len() != n * m {
            return Err(Error::InvalidMatrix(format!(
                "expected {} values for a {n}x{m} matrix, got {}",
                n * m,
                values.len()
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidMatrix(format!(
                "non-finite value at row {}, column {}",
                pos / m + 1,
                pos % m + 1
            )));
        }
        Ok(DataMatrix {
            n,
            m,
            values,
            row_labels: None,
            col_labels: None,
        })
    }

    /// Builds a matrix from a slice of equally long rows.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, |r| r.as_ref().len());
        let mut values = Vec::with_capacity(n * m);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != m {
                return Err(Error::InvalidMatrix(format!(
                    "row {} has {} columns, expected {m}",
                    i + 1,
                    row.len()
                )));
            }
            values.extend_from_slice(row);
        }
        Self::new(n, m, values)
    }

    /// Builds a matrix from column vectors.
    pub fn from_columns<C: AsRef<[f64]>>(cols: &[C]) -> Result<Self> {
        let m = cols.len();
        let n = cols.first().map_or(0, |c| c.as_ref().len());
        if cols.iter().any(|c| c.as_ref().len() != n) {
            return Err(Error::InvalidMatrix("columns have unequal lengths".into()));
        }
        let mut values = vec![0.0; n * m];
        for (j, col) in cols.iter().enumerate() {
            for (i, &v) in col.as_ref().iter().enumerate() {
                values[i * m + j] = v;
            }
        }
        Self::new(n, m, values)
    }

    pub fn with_row_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::InvalidMatrix(format!(
                "{} row labels for {} rows",
                labels.len(),
                self.n
            )));
        }
        self.row_labels = Some(labels);
        Ok(self)
    }

    pub fn with_col_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.m {
            return Err(Error::InvalidMatrix(format!(
                "{} column labels for {} columns",
                labels.len(),
                self.m
            )));
        }
        self.col_labels = Some(labels);
        Ok(self)
    }

    #[inline]
    pub fn n_rows(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn n_cols(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.m + col]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.values[row * self.m..(row + 1) * self.m]
    }

    pub fn column(&self, col: usize) -> impl Iterator<Item = f64> + '_ {
        self.values.iter().skip(col).step_by(self.m).copied()
    }

    pub fn row_labels(&self) -> Option<&[String]> {
        self.row_labels.as_deref()
    }

    pub fn col_labels(&self) -> Option<&[String]> {
        self.col_labels.as_deref()
    }

    /// True when every cell is exactly 0 or 1.
    pub fn is_binary(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0 || v == 1.0)
    }

    /// `max - min` of column `col` over `rows` (zero-based). Returns 0 for an
    /// empty row set.
    #[inline]
    pub fn span(&self, rows: &[usize], col: usize) -> f64 {
        let (lo, hi) = self.min_max(rows, col);
        if rows.is_empty() {
            0.0
        } else {
            hi - lo
        }
    }

    /// Whether column `col` spans at most `eps` over `rows`; stops reading
    /// as soon as the answer is no.
    #[inline]
    pub fn within(&self, rows: &[usize], col: usize, eps: f64) -> bool {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &i in rows {
            let v = self.get(i, col);
            lo = lo.min(v);
            hi = hi.max(v);
            if hi - lo > eps {
                return false;
            }
        }
        true
    }

    /// Minimum and maximum of column `col` over `rows`.
    #[inline]
    pub fn min_max(&self, rows: &[usize], col: usize) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &i in rows {
            let v = self.get(i, col);
            lo = lo.min(v);
            hi = hi.max(v);
        }
        (lo, hi)
    }

    /// Returns the transposed matrix; labels swap sides.
    pub fn transpose(&self) -> DataMatrix {
        let mut values = Vec::with_capacity(self.values.len());
        for j in 0..self.m {
            values.extend(self.column(j));
        }
        DataMatrix {
            n: self.m,
            m: self.n,
            values,
            row_labels: self.col_labels.clone(),
            col_labels: self.row_labels.clone(),
        }
    }

    /// Applies `f(row, col, value)` to every cell, keeping labels.
    pub(crate) fn try_map<F>(&self, mut f: F) -> Result<DataMatrix>
    where
        F: FnMut(usize, usize, f64) -> Result<f64>,
    {
        let mut values = Vec::with_capacity(self.values.len());
        for (pos, &v) in self.values.iter().enumerate() {
            values.push(f(pos / self.m, pos % self.m, v)?);
        }
        let mut out = DataMatrix::new(self.n, self.m, values)?;
        out.row_labels = self.row_labels.clone();
        out.col_labels = self.col_labels.clone();
        Ok(out)
    }
}
