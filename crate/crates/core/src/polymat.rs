//! Dense matrices over `Z[t, t^-1]` and their exact determinants.

use std::fmt;
use std::ops::{Index, IndexMut};

use itertools::Itertools;
use thiserror::Error;

use crate::laurent::LaurentPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("block {block} of size {size} is out of range for {cols} columns")]
    BlockOutOfRange { block: usize, size: usize, cols: usize },
    #[error("minor order {k} out of range for a {rows}x{cols} matrix")]
    MinorOrder { k: usize, rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

#[derive(Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<LaurentPoly>,
}

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        PolyMatrix { rows, cols, entries: vec![LaurentPoly::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { LaurentPoly::one() } else { LaurentPoly::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> LaurentPoly) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        PolyMatrix { rows, cols, entries }
    }

    pub fn from_rows(rows: Vec<Vec<LaurentPoly>>) -> Result<Self, MatrixError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(MatrixError::Dimension("ragged rows".into()));
        }
        Ok(PolyMatrix { rows: r, cols: c, entries: rows.into_iter().flatten().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[LaurentPoly] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, MatrixError> {
        if self.cols != other.rows {
            return Err(MatrixError::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = LaurentPoly::zero();
            for k in 0..self.cols {
                if !self[(i, k)].is_zero() && !other[(k, j)].is_zero() {
                    acc += &(&self[(i, k)] * &other[(k, j)]);
                }
            }
            acc
        }))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, MatrixError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(MatrixError::Dimension("subtraction of differently shaped matrices".into()));
        }
        Ok(Self::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] - &other[(i, j)]))
    }

    /// Places `block` with its top-left corner at `(row, col)`.
    pub fn set_block(&mut self, row: usize, col: usize, block: &PolyMatrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(row + i, col + j)] = block[(i, j)].clone();
            }
        }
    }

    /// Removes columns `[block * size, block * size + size)`.
    pub fn delete_block_column(&self, block: usize, size: usize) -> Result<Self, MatrixError> {
        if size == 0 || !self.cols.is_multiple_of(size) || block >= self.cols / size {
            return Err(MatrixError::BlockOutOfRange { block, size, cols: self.cols });
        }
        let keep: Vec<usize> = (0..self.cols).filter(|c| c / size != block).collect();
        let rows: Vec<usize> = (0..self.rows).collect();
        Ok(self.submatrix(&rows, &keep))
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    ///
    /// Every intermediate entry is a minor of the input, so the divisions by
    /// the previous pivot are exact in `Z[t, t^-1]`; a nonzero remainder is a
    /// bug and panics. The 0x0 determinant is 1.
    pub fn determinant(&self) -> Result<LaurentPoly, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(LaurentPoly::one());
        }
        let mut m: Vec<Vec<LaurentPoly>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut negate = false;
        let mut prev = LaurentPoly::one();
        for k in 0..n {
            // smallest nonzero pivot keeps the intermediate degrees down
            let pivot = (k..n).filter(|&r| !m[r][k].is_zero()).min_by_key(|&r| (m[r][k].coeffs().len(), r));
            let Some(p) = pivot else {
                return Ok(LaurentPoly::zero());
            };
            if p != k {
                m.swap(p, k);
                negate = !negate;
            }
            if k + 1 == n {
                break;
            }
            let (upper, lower) = m.split_at_mut(k + 1);
            let pivot_row = &upper[k];
            let pk = &pivot_row[k];
            for row in lower.iter_mut() {
                let factor = std::mem::take(&mut row[k]);
                for j in k + 1..n {
                    let mut v = &row[j] * pk;
                    if !factor.is_zero() && !pivot_row[j].is_zero() {
                        v -= &(&factor * &pivot_row[j]);
                    }
                    row[j] =
                        if prev.is_one() { v } else { v.exact_divide(&prev).expect("Bareiss division must be exact") };
                }
            }
            prev = m[k][k].clone();
        }
        let det = m[n - 1][n - 1].clone();
        Ok(if negate { -det } else { det })
    }

    /// All `k x k` minors, ordered lexicographically by (row set, column set).
    pub fn all_maximal_minors(&self, k: usize) -> Result<Vec<LaurentPoly>, MatrixError> {
        if k > self.rows.min(self.cols) {
            return Err(MatrixError::MinorOrder { k, rows: self.rows, cols: self.cols });
        }
        let mut out = Vec::new();
        for rs in (0..self.rows).combinations(k) {
            for cs in (0..self.cols).combinations(k) {
                out.push(self.submatrix(&rs, &cs).determinant()?);
            }
        }
        Ok(out)
    }
}

impl Index<(usize, usize)> for PolyMatrix {
    type Output = LaurentPoly;
    fn index(&self, (i, j): (usize, usize)) -> &LaurentPoly {
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for PolyMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut LaurentPoly {
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "PolyMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}
