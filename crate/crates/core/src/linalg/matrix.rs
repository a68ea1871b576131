use std::fmt;

use crate::error::{Error, Result};

use super::field::{FieldSpec, Scalar};

/// Dense row-major matrix over a single exact field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl Matrix {
    pub fn new(field: FieldSpec, rows: usize, cols: usize, entries: Vec<Scalar>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                context: "matrix entries",
                expected: rows * cols,
                found: entries.len(),
            });
        }
        if let Some(bad) = entries.iter().find(|s| !field.contains(s)) {
            return Err(Error::BadScalar {
                path: "matrix".into(),
                reason: format!("{bad} is not an element of {field}"),
            });
        }
        Ok(Matrix {
            field,
            rows,
            cols,
            entries,
        })
    }

    /// Builds a matrix from row vectors of length `cols`.
    pub fn from_rows(field: FieldSpec, cols: usize, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    context: "matrix row",
                    expected: cols,
                    found: row.len(),
                });
            }
            entries.extend(row);
        }
        Matrix::new(field, n, cols, entries)
    }

    pub fn from_i64_rows(field: FieldSpec, cols: usize, rows: &[Vec<i64>]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&v| field.from_i64(v)).collect())
            .collect();
        Matrix::from_rows(field, cols, rows)
    }

    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            entries: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.entries[i * n + i] = field.one();
        }
        m
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn num_rows(&self) -> usize {
        self.rows
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: Scalar) {
        assert!(self.field.contains(&value));
        self.entries[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Scalar]> {
        (0..self.rows).map(move |r| self.row(r))
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        self.rows().map(<[Scalar]>::to_vec).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                entries.push(self.get(r, c).clone());
            }
        }
        Matrix {
            field: self.field,
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.field != other.field {
            return Err(Error::MixedField(
                self.field.to_string(),
                other.field.to_string(),
            ));
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                context: "matrix product",
                expected: self.cols,
                found: other.rows,
            });
        }
        let f = self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = f.zero();
                for k in 0..self.cols {
                    acc = f.mul_add(&acc, self.get(i, k), other.get(k, j));
                }
                out.entries[i * other.cols + j] = acc;
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                context: "matrix-vector product",
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok(self.rows().map(|r| self.field.dot(r, v)).collect())
    }

    /// Keeps the listed columns, in the listed order.
    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let mut entries = Vec::with_capacity(self.rows * cols.len());
        for r in 0..self.rows {
            for &c in cols {
                entries.push(self.get(r, c).clone());
            }
        }
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: cols.len(),
            entries,
        }
    }

    /// Reduced row echelon form with zero rows removed, and the rank.
    ///
    /// Pivots are the leftmost nonzero entry of the first available row, so
    /// the result is the unique RREF of the row space.
    pub fn rref(&self) -> (Matrix, usize) {
        let (rows, _) = rref_rows(self.field, self.cols, self.to_rows());
        let rank = rows.len();
        let m = Matrix {
            field: self.field,
            rows: rank,
            cols: self.cols,
            entries: rows.into_iter().flatten().collect(),
        };
        (m, rank)
    }

    pub fn rank(&self) -> usize {
        let mut reducer = RowReducer::new(self.field, self.cols);
        for r in self.rows() {
            reducer.insert(r);
        }
        reducer.rank()
    }

    /// Basis of `{v : self * v = 0}`, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let f = self.field;
        let (rows, pivots) = rref_rows(f, self.cols, self.to_rows());
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![f.zero(); self.cols];
            v[free] = f.one();
            for (row, &p) in rows.iter().zip(&pivots) {
                v[p] = f.neg(&row[free]);
            }
            basis.push(v);
        }
        basis
    }

    /// Determinant of a square matrix.
    pub fn det(&self) -> Result<Scalar> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch {
                context: "determinant",
                expected: self.rows,
                found: self.cols,
            });
        }
        let f = self.field;
        let n = self.rows;
        let mut a = self.to_rows();
        let mut det = f.one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
                return Ok(f.zero());
            };
            if p != col {
                a.swap(p, col);
                det = f.neg(&det);
            }
            let pivot = a[col][col].clone();
            det = f.mul(&det, &pivot);
            let inv = f.inv(&pivot).expect("nonzero pivot");
            for r in col + 1..n {
                if a[r][col].is_zero() {
                    continue;
                }
                let factor = f.neg(&f.mul(&a[r][col], &inv));
                for c in col..n {
                    let v = f.mul_add(&a[r][c], &factor, &a[col][c]);
                    a[r][c] = v;
                }
            }
        }
        Ok(det)
    }
}

/// Gauss-Jordan on owned rows. Returns the nonzero RREF rows and their
/// pivot columns.
pub(crate) fn rref_rows(
    f: FieldSpec,
    cols: usize,
    mut rows: Vec<Vec<Scalar>>,
) -> (Vec<Vec<Scalar>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..cols {
        if next == rows.len() {
            break;
        }
        let Some(p) = (next..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(p, next);
        let inv = f.inv(&rows[next][col]).expect("nonzero pivot");
        for v in rows[next].iter_mut().skip(col) {
            *v = f.mul(v, &inv);
        }
        let pivot_row = rows[next].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == next || row[col].is_zero() {
                continue;
            }
            let factor = f.neg(&row[col]);
            for c in col..cols {
                row[c] = f.mul_add(&row[c], &factor, &pivot_row[c]);
            }
        }
        pivots.push(col);
        next += 1;
    }
    rows.truncate(next);
    (rows, pivots)
}

/// Incremental echelon basis. Each stored row is normalized at its pivot
/// and vanishes at the pivots of all rows stored before it.
#[derive(Clone, Debug)]
pub struct RowReducer {
    field: FieldSpec,
    cols: usize,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl RowReducer {
    pub fn new(field: FieldSpec, cols: usize) -> Self {
        RowReducer {
            field,
            cols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the stored rows; returns the residual.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        debug_assert_eq!(v.len(), self.cols);
        let f = self.field;
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let factor = f.neg(&v[p]);
            for c in p..self.cols {
                if !row[c].is_zero() {
                    v[c] = f.mul_add(&v[c], &factor, &row[c]);
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(Scalar::is_zero)
    }

    /// Adds `v` to the span. Returns whether the rank grew.
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|s| !s.is_zero()) else {
            return false;
        };
        let inv = self.field.inv(&v[p]).expect("nonzero pivot");
        for s in v.iter_mut().skip(p) {
            *s = self.field.mul(s, &inv);
        }
        self.rows.push(v);
        self.pivots.push(p);
        true
    }

    pub fn insert_matrix(&mut self, m: &Matrix) {
        for r in m.rows() {
            if self.rank() == self.cols {
                break;
            }
            self.insert(r);
        }
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.rows().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = r.iter().map(|s| s.to_string()).collect();
            write!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}
