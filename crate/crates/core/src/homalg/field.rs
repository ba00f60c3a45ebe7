//! Linear algebra over the rationals and prime fields.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::matrix::Matrix;
use super::ring::RingSpec;
use crate::error::{Error, Result};

pub trait Field: Clone + fmt::Debug {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn characteristic(&self) -> u64;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Panics on zero.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        RingSpec::prime_field(p)?;
        Ok(PrimeField { p })
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn characteristic(&self) -> u64 {
        self.p
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.p as u128) as u64
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + self.p as u128 - *b as u128) % self.p as u128) as u64
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "inverse of zero");
        // Fermat: a^(p−2).
        let (mut base, mut exp, mut acc) = (*a, self.p - 2, 1u64);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            exp >>= 1;
        }
        acc
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn characteristic(&self) -> u64 {
        0
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        assert!(!a.is_zero(), "inverse of zero");
        a.recip()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
}

/// Row-major matrix over a field.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldMatrix<E> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<E>>,
}

impl<E: Clone + PartialEq + fmt::Debug> FieldMatrix<E> {
    pub fn zeros<F: Field<Elem = E>>(field: &F, rows: usize, cols: usize) -> Self {
        FieldMatrix { rows, cols, data: vec![vec![field.zero(); cols]; rows] }
    }

    pub fn from_integer<F: Field<Elem = E>>(field: &F, m: &Matrix) -> Self {
        let data = (0..m.rows()).map(|i| m.row(i).iter().map(|&v| field.from_i64(v)).collect()).collect();
        FieldMatrix { rows: m.rows(), cols: m.cols(), data }
    }

    /// Matrix whose columns are the given vectors in a space of dimension `dim`.
    pub fn from_columns<F: Field<Elem = E>>(field: &F, dim: usize, columns: &[Vec<E>]) -> Self {
        let mut m = FieldMatrix::zeros(field, dim, columns.len());
        for (j, c) in columns.iter().enumerate() {
            for i in 0..dim {
                m.data[i][j] = c[i].clone();
            }
        }
        m
    }

    pub fn mul<F: Field<Elem = E>>(&self, field: &F, other: &FieldMatrix<E>) -> FieldMatrix<E> {
        assert_eq!(self.cols, other.rows, "field matrix shapes");
        let mut out = FieldMatrix::zeros(field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if field.is_zero(&self.data[i][k]) {
                    continue;
                }
                for j in 0..other.cols {
                    if !field.is_zero(&other.data[k][j]) {
                        let p = field.mul(&self.data[i][k], &other.data[k][j]);
                        out.data[i][j] = field.add(&out.data[i][j], &p);
                    }
                }
            }
        }
        out
    }

    pub fn apply<F: Field<Elem = E>>(&self, field: &F, v: &[E]) -> Vec<E> {
        (0..self.rows)
            .map(|i| {
                let mut acc = field.zero();
                for (a, b) in self.data[i].iter().zip(v) {
                    if !field.is_zero(a) && !field.is_zero(b) {
                        acc = field.add(&acc, &field.mul(a, b));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn is_zero<F: Field<Elem = E>>(&self, field: &F) -> bool {
        self.data.iter().flatten().all(|e| field.is_zero(e))
    }

    pub fn column(&self, j: usize) -> Vec<E> {
        self.data.iter().map(|r| r[j].clone()).collect()
    }
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref<F: Field>(field: &F, m: &mut FieldMatrix<F::Elem>) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..m.cols {
        if row == m.rows {
            break;
        }
        let Some(p) = (row..m.rows).find(|&i| !field.is_zero(&m.data[i][col])) else { continue };
        m.data.swap(row, p);
        let inv = field.inv(&m.data[row][col]);
        for v in m.data[row].iter_mut() {
            *v = field.mul(v, &inv);
        }
        let pivot_row = m.data[row].clone();
        for i in 0..m.rows {
            if i != row && !field.is_zero(&m.data[i][col]) {
                let c = m.data[i][col].clone();
                for (v, pv) in m.data[i].iter_mut().zip(&pivot_row) {
                    if !field.is_zero(pv) {
                        *v = field.sub(v, &field.mul(&c, pv));
                    }
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rank<F: Field>(field: &F, m: &FieldMatrix<F::Elem>) -> usize {
    let mut a = m.clone();
    rref(field, &mut a).len()
}

/// A basis of the null space of `m`, as vectors of length `m.cols`.
pub fn kernel<F: Field>(field: &F, m: &FieldMatrix<F::Elem>) -> Vec<Vec<F::Elem>> {
    let mut a = m.clone();
    let pivots = rref(field, &mut a);
    let mut is_pivot = vec![false; m.cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..m.cols)
        .filter(|&j| !is_pivot[j])
        .map(|free| {
            let mut v = vec![field.zero(); m.cols];
            v[free] = field.one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = field.sub(&field.zero(), &a.data[r][free]);
            }
            v
        })
        .collect()
}

/// A linearly independent family in `F^dim` together with a left inverse, so that
/// coordinates of vectors in the span are a single matrix application.
#[derive(Clone, Debug)]
pub struct Basis<F: Field> {
    pub dim: usize,
    pub vectors: Vec<Vec<F::Elem>>,
    left_inverse: FieldMatrix<F::Elem>,
}

impl<F: Field> Basis<F> {
    /// Extracts a maximal independent subfamily (in order) of `vectors`.
    pub fn span(field: &F, dim: usize, vectors: &[Vec<F::Elem>]) -> Self {
        let mut chosen: Vec<Vec<F::Elem>> = Vec::new();
        let mut echelon: Vec<(usize, Vec<F::Elem>)> = Vec::new();
        for v in vectors {
            let r = reduce(field, &echelon, v.clone());
            if let Some(p) = r.iter().position(|e| !field.is_zero(e)) {
                let inv = field.inv(&r[p]);
                echelon.push((p, r.iter().map(|e| field.mul(e, &inv)).collect()));
                chosen.push(v.clone());
            }
        }
        Basis::independent(field, dim, chosen)
    }

    /// `vectors` must be independent.
    pub fn independent(field: &F, dim: usize, vectors: Vec<Vec<F::Elem>>) -> Self {
        let k = vectors.len();
        // Row-reduce [M | I]; the first k rows of the right block form a left inverse.
        let m = FieldMatrix::from_columns(field, dim, &vectors);
        let mut aug = FieldMatrix::zeros(field, dim, k + dim);
        for i in 0..dim {
            aug.data[i][..k].clone_from_slice(&m.data[i]);
            aug.data[i][k + i] = field.one();
        }
        let pivots = rref(field, &mut aug);
        assert!(pivots.len() >= k && pivots[..k].iter().enumerate().all(|(i, &p)| i == p), "basis vectors are dependent");
        let data = aug.data[..k].iter().map(|row| row[k..].to_vec()).collect();
        Basis { dim, vectors, left_inverse: FieldMatrix { rows: k, cols: dim, data } }
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Coordinates of `v`, or `None` when `v` is outside the span.
    pub fn coordinates(&self, field: &F, v: &[F::Elem]) -> Option<Vec<F::Elem>> {
        let c = self.left_inverse.apply(field, v);
        let back = FieldMatrix::from_columns(field, self.dim, &self.vectors).apply(field, &c);
        (back == v).then_some(c)
    }

    pub fn contains(&self, field: &F, v: &[F::Elem]) -> bool {
        self.coordinates(field, v).is_some()
    }
}

fn reduce<F: Field>(field: &F, echelon: &[(usize, Vec<F::Elem>)], mut v: Vec<F::Elem>) -> Vec<F::Elem> {
    for (p, row) in echelon {
        if !field.is_zero(&v[*p]) {
            let c = v[*p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !field.is_zero(r) {
                    *x = field.sub(x, &field.mul(&c, r));
                }
            }
        }
    }
    v
}

/// A subquotient `Z / B` with `B ⊆ Z`: a basis of `B` extended by representatives of a
/// basis of the quotient.
#[derive(Clone, Debug)]
pub struct Subquotient<F: Field> {
    pub sub_dim: usize,
    pub representatives: Vec<Vec<F::Elem>>,
    combined: Basis<F>,
}

impl<F: Field> Subquotient<F> {
    /// Fails if some generator of `denominator` lies outside the span of `numerator`.
    pub fn new(field: &F, dim: usize, numerator: &[Vec<F::Elem>], denominator: &[Vec<F::Elem>]) -> Result<Self> {
        let b = Basis::span(field, dim, denominator);
        let z = Basis::span(field, dim, numerator);
        if b.vectors.iter().any(|v| !z.contains(field, v)) {
            return Err(Error::Unsupported("subquotient denominator is not contained in the numerator".into()));
        }
        let mut all = b.vectors.clone();
        all.extend(z.vectors.iter().cloned());
        let combined = Basis::span(field, dim, &all);
        let sub_dim = b.len();
        let representatives = combined.vectors[sub_dim..].to_vec();
        Ok(Subquotient { sub_dim, representatives, combined })
    }

    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    /// Class of `v` (which must lie in the numerator) in the representative basis.
    pub fn class_of(&self, field: &F, v: &[F::Elem]) -> Option<Vec<F::Elem>> {
        self.combined.coordinates(field, v).map(|c| c[self.sub_dim..].to_vec())
    }
}

/// A field chosen at runtime from a ring specification.
pub fn field_kind(ring: RingSpec) -> Result<FieldKind> {
    match ring {
        RingSpec::Rationals => Ok(FieldKind::Rationals(Rationals)),
        RingSpec::PrimeField(p) => Ok(FieldKind::Prime(PrimeField::new(p)?)),
        other => Err(Error::Unsupported(format!("{other} is not a field"))),
    }
}

#[derive(Clone, Copy, Debug)]
pub enum FieldKind {
    Rationals(Rationals),
    Prime(PrimeField),
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic() {
        let f = PrimeField::new(7).unwrap();
        for a in 1..7 {
            assert_eq!(f.mul(&a, &f.inv(&a)), 1);
        }
        assert_eq!(f.from_i64(-1), 6);
        assert!(PrimeField::new(8).is_err());
    }

    #[test]
    fn kernel_and_rank() {
        let q = Rationals;
        let m = FieldMatrix::from_integer(&q, &Matrix::from_rows(vec![vec![1, 1, 0], vec![0, 1, 1]]).unwrap());
        assert_eq!(rank(&q, &m), 2);
        let k = kernel(&q, &m);
        assert_eq!(k.len(), 1);
        assert!(m.apply(&q, &k[0]).iter().all(|e| e.is_zero()));
        let f2 = PrimeField::new(2).unwrap();
        let two = FieldMatrix::from_integer(&f2, &Matrix::scalar(2, 2));
        assert_eq!(rank(&f2, &two), 0);
    }

    #[test]
    fn subquotient_classes() {
        let q = Rationals;
        let e = |v: &[i64]| v.iter().map(|&x| q.from_i64(x)).collect::<Vec<_>>();
        let sq = Subquotient::new(&q, 3, &[e(&[1, 0, 0]), e(&[0, 1, 0])], &[e(&[1, 1, 0])]).unwrap();
        assert_eq!(sq.dim(), 1);
        let a = sq.class_of(&q, &e(&[1, 0, 0])).unwrap();
        let b = sq.class_of(&q, &e(&[0, 1, 0])).unwrap();
        assert_eq!(a[0], q.sub(&q.zero(), &b[0]));
        assert!(sq.class_of(&q, &e(&[0, 0, 1])).is_none());
        assert!(Subquotient::new(&q, 3, &[e(&[1, 0, 0])], &[e(&[0, 0, 1])]).is_err());
    }
}
