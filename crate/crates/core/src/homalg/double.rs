use super::complex::ChainComplex;
use super::matrix::Matrix;
use crate::error::{Error, Result};

/// A first-quadrant double complex with commuting differentials
/// `∂^h : (p, q) → (p−1, q)` and `∂^v : (p, q) → (p, q−1)`.
///
/// Columns are `0..=P`. `columns_exact_through` plays the role of
/// [`ChainComplex::exact_through`] for the column direction: `Some(N)` means the columns
/// `0..=N` are those of the modelled object and any further columns are missing.
#[derive(Clone, Debug, PartialEq)]
pub struct DoubleComplex {
    /// `ranks[p][q]`.
    ranks: Vec<Vec<usize>>,
    /// `horizontal[p][q] : (p, q) → (p−1, q)`, empty for `p = 0`.
    horizontal: Vec<Vec<Matrix>>,
    /// `vertical[p][q] : (p, q) → (p, q−1)`, empty for `q = 0`.
    vertical: Vec<Vec<Matrix>>,
    columns_exact_through: Option<usize>,
}

impl DoubleComplex {
    /// `columns[p]` supplies the vertical complex of column `p`; `horizontal[p − 1][q]` is
    /// the map `(p, q) → (p−1, q)` for `p ≥ 1`. Verifies all three identities.
    pub fn new(columns: &[ChainComplex], horizontal: Vec<Vec<Matrix>>, columns_exact_through: Option<usize>) -> Result<Self> {
        if columns.is_empty() {
            return Err(Error::Shape("a double complex needs column 0".into()));
        }
        if horizontal.len() + 1 != columns.len() {
            return Err(Error::Shape(format!("{} columns need {} horizontal maps", columns.len(), columns.len() - 1)));
        }
        if let Some((p, _)) = columns.iter().enumerate().find(|(_, c)| c.exact_through().is_some()) {
            return Err(Error::Unsupported(format!("column {p} is itself truncated")));
        }
        let ranks: Vec<Vec<usize>> = columns.iter().map(|c| c.ranks().to_vec()).collect();
        let rank = |p: usize, q: usize| ranks[p].get(q).copied().unwrap_or(0);
        let vertical: Vec<Vec<Matrix>> =
            columns.iter().map(|c| (0..=c.top()).map(|q| if q == 0 { Matrix::zeros(0, c.rank(0)) } else { c.boundary(q) }).collect()).collect();
        let mut h_all = vec![Vec::new()];
        for (i, row) in horizontal.into_iter().enumerate() {
            let p = i + 1;
            let qmax = ranks[p].len().max(ranks[p - 1].len());
            let mut padded = Vec::with_capacity(qmax);
            for q in 0..qmax {
                let m = row.get(q).cloned().unwrap_or_else(|| Matrix::zeros(rank(p - 1, q), rank(p, q)));
                if m.rows() != rank(p - 1, q) || m.cols() != rank(p, q) {
                    return Err(Error::Shape(format!("∂^h at ({p}, {q}) is {}x{}, expected {}x{}", m.rows(), m.cols(), rank(p - 1, q), rank(p, q))));
                }
                padded.push(m);
            }
            h_all.push(padded);
        }
        let d = DoubleComplex { ranks, horizontal: h_all, vertical, columns_exact_through };
        d.verify()?;
        Ok(d)
    }

    fn verify(&self) -> Result<()> {
        for p in 0..self.columns() {
            for q in 0..self.ranks[p].len() {
                if p >= 2 && !self.h(p - 1, q).mul(&self.h(p, q))?.is_zero() {
                    return Err(Error::BoundaryNonzero(format!("∂^h∂^h ≠ 0 at ({p}, {q})")));
                }
                if p >= 1 && q >= 1 && self.v(p - 1, q).mul(&self.h(p, q))? != self.h(p, q - 1).mul(&self.v(p, q))? {
                    return Err(Error::BoundaryNonzero(format!("∂^h∂^v ≠ ∂^v∂^h at ({p}, {q})")));
                }
            }
        }
        Ok(())
    }

    pub fn columns(&self) -> usize {
        self.ranks.len()
    }

    pub fn rank(&self, p: usize, q: usize) -> usize {
        self.ranks.get(p).and_then(|c| c.get(q)).copied().unwrap_or(0)
    }

    /// Highest nonzero-length row index over all columns.
    pub fn rows(&self) -> usize {
        self.ranks.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn columns_exact_through(&self) -> Option<usize> {
        self.columns_exact_through
    }

    /// `∂^h : (p, q) → (p−1, q)`.
    pub fn h(&self, p: usize, q: usize) -> Matrix {
        if p == 0 {
            return Matrix::zeros(0, self.rank(0, q));
        }
        self.horizontal[p].get(q).cloned().unwrap_or_else(|| Matrix::zeros(self.rank(p - 1, q), self.rank(p, q)))
    }

    /// `∂^v : (p, q) → (p, q−1)`.
    pub fn v(&self, p: usize, q: usize) -> Matrix {
        if q == 0 {
            return Matrix::zeros(0, self.rank(p, 0));
        }
        self.vertical.get(p).and_then(|c| c.get(q)).cloned().unwrap_or_else(|| Matrix::zeros(self.rank(p, q - 1), self.rank(p, q)))
    }

    /// Column `p` as a chain complex.
    pub fn column(&self, p: usize) -> ChainComplex {
        let ranks = self.ranks[p].clone();
        let bounds = (1..ranks.len()).map(|q| self.v(p, q)).collect();
        ChainComplex::new(ranks, bounds, None).expect("columns are complexes")
    }

    /// Offsets of the summands `(p, n − p)` inside `Tot_n`, by increasing `p`.
    pub fn total_offsets(&self, n: usize) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        let mut offset = 0;
        for p in 0..=n.min(self.columns() - 1) {
            let r = self.rank(p, n - p);
            out.push((p, offset, r));
            offset += r;
        }
        out
    }

    pub fn total_rank(&self, n: usize) -> usize {
        self.total_offsets(n).iter().map(|t| t.2).sum()
    }

    pub fn total_top(&self) -> usize {
        (0..self.columns()).map(|p| p + self.ranks[p].len().saturating_sub(1)).max().unwrap_or(0)
    }
}

/// `Tot_n = ⨁_{p+q=n} D_{p,q}` with `∂ = ∂^h + (−1)^p ∂^v`.
pub fn total_complex(d: &DoubleComplex) -> Result<ChainComplex> {
    let top = d.total_top();
    let ranks: Vec<usize> = (0..=top).map(|n| d.total_rank(n)).collect();
    let mut boundaries = Vec::with_capacity(top);
    for n in 1..=top {
        let mut m = Matrix::zeros(ranks[n - 1], ranks[n]);
        let target = d.total_offsets(n - 1);
        let offset_of = |p: usize| target.iter().find(|t| t.0 == p).map(|t| t.1);
        for (p, col, r) in d.total_offsets(n) {
            if r == 0 {
                continue;
            }
            let q = n - p;
            if p >= 1 {
                if let Some(row) = offset_of(p - 1) {
                    m.put(row, col, &d.h(p, q));
                }
            }
            if q >= 1 {
                if let Some(row) = offset_of(p) {
                    let v = d.v(p, q);
                    m.put(row, col, &if p % 2 == 1 { v.neg() } else { v });
                }
            }
        }
        boundaries.push(m);
    }
    ChainComplex::new(ranks, boundaries, d.columns_exact_through())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homalg::ring::RingSpec;

    #[test]
    fn one_column_is_the_column() {
        let c = ChainComplex::new(vec![1, 1], vec![Matrix::scalar(1, 2)], None).unwrap();
        let d = DoubleComplex::new(&[c.clone()], vec![], None).unwrap();
        assert_eq!(total_complex(&d).unwrap(), c);
    }

    #[test]
    fn square_of_identities_is_acyclic() {
        let col = ChainComplex::new(vec![1, 1], vec![Matrix::identity(1)], None).unwrap();
        let d = DoubleComplex::new(&[col.clone(), col], vec![vec![Matrix::identity(1), Matrix::identity(1)]], None).unwrap();
        let t = total_complex(&d).unwrap();
        assert_eq!(t.ranks(), &[1, 2, 1]);
        for k in 0..=2 {
            assert!(t.homology(k, RingSpec::Integers).unwrap().is_zero());
        }
    }

    #[test]
    fn anticommuting_input_is_rejected() {
        let col = ChainComplex::new(vec![1, 1], vec![Matrix::identity(1)], None).unwrap();
        let h = vec![vec![Matrix::identity(1), Matrix::scalar(1, -1)]];
        assert!(DoubleComplex::new(&[col.clone(), col], h, None).is_err());
    }

    #[test]
    fn exact_rows_give_column_zero_homology() {
        // Rows 0 ← Z ← Z (identity between columns 1 and 2) are exact away from column 0.
        let z = ChainComplex::concentrated(1);
        let d = DoubleComplex::new(&[z.clone(), z.clone(), z], vec![vec![Matrix::zeros(1, 1)], vec![Matrix::identity(1)]], None).unwrap();
        let t = total_complex(&d).unwrap();
        assert_eq!(t.homology(0, RingSpec::Integers).unwrap().rank, 1);
        assert!(t.homology(1, RingSpec::Integers).unwrap().is_zero());
        assert!(t.homology(2, RingSpec::Integers).unwrap().is_zero());
    }
}
