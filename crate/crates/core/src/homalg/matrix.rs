use std::fmt;

use crate::error::{Error, Result};

/// Dense integer matrix, row-major. Chain-level data stays small, so entries are `i64`
/// and every operation is overflow-checked.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

fn overflow() -> Error {
    Error::Unsupported("integer overflow in chain-level arithmetic".into())
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn scalar(n: usize, c: i64) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, c);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Rows given with an explicit column count, so that `0 × c` and `r × 0` shapes survive.
    pub fn from_rows_with_cols(rows: Vec<Vec<i64>>, cols: usize) -> Result<Self> {
        if rows.iter().any(|row| row.len() != cols) {
            return Err(Error::Shape(format!("rows must have {cols} entries")));
        }
        Ok(Matrix { rows: rows.len(), cols, data: rows.into_iter().flatten().collect() })
    }

    /// The matrix of the linear extension of a map of bases: column `x` has a 1 in row `f(x)`.
    pub fn from_function(target: usize, values: &[usize]) -> Self {
        let mut m = Matrix::zeros(target, values.len());
        for (x, &y) in values.iter().enumerate() {
            m.add_at(y, x, 1);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn add_at(&mut self, r: usize, c: usize, v: i64) {
        let e = &mut self.data[r * self.cols + c];
        *e = e.checked_add(v).expect("integer overflow in chain-level arithmetic");
    }

    pub fn row(&self, r: usize) -> &[i64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn nonzeros(&self) -> usize {
        self.data.iter().filter(|&&v| v != 0).count()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    /// `self · other`.
    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!("{}x{} times {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b != 0 {
                        let e = &mut out.data[i * other.cols + j];
                        *e = a.checked_mul(b).and_then(|p| e.checked_add(p)).ok_or_else(overflow)?;
                    }
                }
            }
        }
        Ok(out)
    }

    fn zip(&self, other: &Matrix, op: impl Fn(i64, i64) -> Option<i64>) -> Result<Matrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape(format!("{}x{} against {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| op(a, b).ok_or_else(overflow)).collect::<Result<_>>()?;
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.zip(other, i64::checked_add)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.zip(other, i64::checked_sub)
    }

    pub fn scale(&self, c: i64) -> Result<Matrix> {
        let data = self.data.iter().map(|&a| a.checked_mul(c).ok_or_else(overflow)).collect::<Result<_>>()?;
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn neg(&self) -> Matrix {
        self.scale(-1).expect("negation of small entries")
    }

    /// Copies `block` into `self` with its top-left corner at `(r, c)`.
    pub fn put(&mut self, r: usize, c: usize, block: &Matrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r + i, c + j, block.get(i, j));
            }
        }
    }

    /// Rows `r0..r1` and columns `c0..c1`.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Matrix {
        let mut out = Matrix::zeros(r1 - r0, c1 - c0);
        for i in r0..r1 {
            for j in c0..c1 {
                out.set(i - r0, j - c0, self.get(i, j));
            }
        }
        out
    }

    /// Block-diagonal sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.rows + other.rows, self.cols + other.cols);
        out.put(0, 0, self);
        out.put(self.rows, self.cols, other);
        out
    }

    /// Kronecker product `self ⊗ other`; row `(i, k)` is `i · other.rows + k`.
    pub fn kronecker(&self, other: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == 0 {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.set(i * other.rows + k, j * other.cols + l, a * other.get(k, l));
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn products_and_sums() {
        let a = Matrix::from_rows(vec![vec![1, 2], vec![3, 4]]).unwrap();
        let i = Matrix::identity(2);
        assert_eq!(a.mul(&i).unwrap(), a);
        assert_eq!(a.mul(&a).unwrap(), Matrix::from_rows(vec![vec![7, 10], vec![15, 22]]).unwrap());
        assert_eq!(a.sub(&a).unwrap(), Matrix::zeros(2, 2));
        assert!(a.mul(&Matrix::zeros(3, 1)).is_err());
        assert_eq!(a.kronecker(&i).rows(), 4);
        let big = Matrix::scalar(1, i64::MAX);
        assert!(big.mul(&Matrix::scalar(1, 2)).is_err());
    }

    #[test]
    fn empty_shapes() {
        let m = Matrix::zeros(0, 3);
        let n = Matrix::zeros(3, 2);
        assert_eq!(m.mul(&n).unwrap().cols(), 2);
        assert_eq!(Matrix::from_rows_with_cols(vec![], 4).unwrap().cols(), 4);
    }
}
