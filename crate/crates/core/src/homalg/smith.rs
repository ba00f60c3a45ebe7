//! Smith normal form with certified transforms.
//!
//! The elimination runs in `i128` first and restarts in `BigInt` on overflow. Every
//! result is re-verified before it is returned: `U·M·V = D`, and the explicitly
//! tracked inverses satisfy `U·U⁻¹ = I` and `V·V⁻¹ = I`, so `U` and `V` are unimodular.

use std::cell::Cell;
use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::Matrix;
use crate::error::{Error, Result};

// Per thread, so that concurrent callers each see their own deterministic counts.
thread_local! {
    static VERIFIED: Cell<u64> = const { Cell::new(0) };
    static BIG_FALLBACKS: Cell<u64> = const { Cell::new(0) };
}

/// Number of Smith decompositions computed and re-verified on this thread.
pub fn verified_count() -> u64 {
    VERIFIED.with(Cell::get)
}

/// Number of decompositions on this thread that overflowed `i128` and were redone with big integers.
pub fn big_fallback_count() -> u64 {
    BIG_FALLBACKS.with(Cell::get)
}

trait Scalar: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn add(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    /// Truncating quotient; the remainder is smaller than `o` in absolute value.
    fn quot(&self, o: &Self) -> Self;
    fn divides(&self, o: &Self) -> bool;
    fn cmp_abs(&self, o: &Self) -> Ordering;
    fn to_big(&self) -> BigInt;
}

impl Scalar for i128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn from_i64(v: i64) -> Self {
        v as i128
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn quot(&self, o: &Self) -> Self {
        self / o
    }
    fn divides(&self, o: &Self) -> bool {
        o % self == 0
    }
    fn cmp_abs(&self, o: &Self) -> Ordering {
        self.unsigned_abs().cmp(&o.unsigned_abs())
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Scalar for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn quot(&self, o: &Self) -> Self {
        self / o
    }
    fn divides(&self, o: &Self) -> bool {
        o.is_multiple_of(self)
    }
    fn cmp_abs(&self, o: &Self) -> Ordering {
        self.magnitude().cmp(o.magnitude())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

type Dense<T> = Vec<Vec<T>>;

fn identity<T: Scalar>(n: usize) -> Dense<T> {
    (0..n).map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect()).collect()
}

/// `dst += c · src` on rows of one matrix.
fn row_axpy<T: Scalar>(m: &mut Dense<T>, dst: usize, src: usize, c: &T) -> Option<()> {
    for j in 0..m[src].len() {
        if !m[src][j].is_zero() {
            let v = m[dst][j].add(&c.mul(&m[src][j])?)?;
            m[dst][j] = v;
        }
    }
    Some(())
}

/// `dst += c · src` on columns.
fn col_axpy<T: Scalar>(m: &mut Dense<T>, dst: usize, src: usize, c: &T) -> Option<()> {
    for row in m.iter_mut() {
        if !row[src].is_zero() {
            let v = row[dst].add(&c.mul(&row[src])?)?;
            row[dst] = v;
        }
    }
    Some(())
}

fn neg<T: Scalar>(c: &T) -> Option<T> {
    T::zero().sub(c)
}

fn mul_dense<T: Scalar>(a: &Dense<T>, b: &Dense<T>, inner: usize, cols: usize) -> Option<Dense<T>> {
    let mut out = vec![vec![T::zero(); cols]; a.len()];
    for (i, row) in a.iter().enumerate() {
        for k in 0..inner {
            if row[k].is_zero() {
                continue;
            }
            for j in 0..cols {
                if !b[k][j].is_zero() {
                    out[i][j] = out[i][j].add(&row[k].mul(&b[k][j])?)?;
                }
            }
        }
    }
    Some(out)
}

struct Work<T> {
    a: Dense<T>,
    u: Dense<T>,
    u_inv: Dense<T>,
    v: Dense<T>,
    v_inv: Dense<T>,
}

impl<T: Scalar> Work<T> {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        self.u.swap(i, j);
        for row in self.u_inv.iter_mut() {
            row.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in self.a.iter_mut() {
            row.swap(i, j);
        }
        for row in self.v.iter_mut() {
            row.swap(i, j);
        }
        self.v_inv.swap(i, j);
    }

    /// `row_dst += c · row_src`.
    fn add_row(&mut self, dst: usize, src: usize, c: &T) -> Option<()> {
        row_axpy(&mut self.a, dst, src, c)?;
        row_axpy(&mut self.u, dst, src, c)?;
        col_axpy(&mut self.u_inv, src, dst, &neg(c)?)
    }

    /// `col_dst += c · col_src`.
    fn add_col(&mut self, dst: usize, src: usize, c: &T) -> Option<()> {
        col_axpy(&mut self.a, dst, src, c)?;
        col_axpy(&mut self.v, dst, src, c)?;
        row_axpy(&mut self.v_inv, src, dst, &neg(c)?)
    }

    fn negate_row(&mut self, i: usize) -> Option<()> {
        for x in self.a[i].iter_mut().chain(self.u[i].iter_mut()) {
            *x = neg(x)?;
        }
        for row in self.u_inv.iter_mut() {
            row[i] = neg(&row[i])?;
        }
        Some(())
    }
}

struct Decomposition<T> {
    u: Dense<T>,
    v: Dense<T>,
    diagonal: Vec<T>,
}

fn decompose<T: Scalar>(m: &Matrix) -> Option<Decomposition<T>> {
    let (rows, cols) = (m.rows(), m.cols());
    let a: Dense<T> = (0..rows).map(|i| m.row(i).iter().map(|&x| T::from_i64(x)).collect()).collect();
    let original = a.clone();
    let mut w = Work { a, u: identity(rows), u_inv: identity(rows), v: identity(cols), v_inv: identity(cols) };

    let steps = rows.min(cols);
    for t in 0..steps {
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !w.a[i][j].is_zero() && best.is_none_or(|(bi, bj)| w.a[i][j].cmp_abs(&w.a[bi][bj]) == Ordering::Less) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if !w.a[i][t].is_zero() {
                    let q = w.a[i][t].quot(&w.a[t][t]);
                    w.add_row(i, t, &neg(&q)?)?;
                    clean &= w.a[i][t].is_zero();
                }
            }
            for j in t + 1..cols {
                if !w.a[t][j].is_zero() {
                    let q = w.a[t][j].quot(&w.a[t][t]);
                    w.add_col(j, t, &neg(&q)?)?;
                    clean &= w.a[t][j].is_zero();
                }
            }
            if !clean {
                // A smaller remainder survived; make it the pivot and repeat.
                let mut best = (t, t);
                for i in t + 1..rows {
                    if !w.a[i][t].is_zero() && w.a[i][t].cmp_abs(&w.a[best.0][best.1]) == Ordering::Less {
                        best = (i, t);
                    }
                }
                for j in t + 1..cols {
                    if !w.a[t][j].is_zero() && w.a[t][j].cmp_abs(&w.a[best.0][best.1]) == Ordering::Less {
                        best = (t, j);
                    }
                }
                if best.0 != t {
                    w.swap_rows(t, best.0);
                }
                if best.1 != t {
                    w.swap_cols(t, best.1);
                }
                continue;
            }
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !w.a[t][t].divides(&w.a[i][j])));
            match offender {
                Some(i) => w.add_row(t, i, &T::one())?,
                None => break,
            }
        }
        if w.a[t][t].is_negative() {
            w.negate_row(t)?;
        }
    }

    let diagonal: Vec<T> = (0..steps).map(|i| w.a[i][i].clone()).collect();
    // Re-verification: U·M·V = D and both transforms have integer inverses.
    let um = mul_dense(&w.u, &original, rows, cols)?;
    let umv = mul_dense(&um, &w.v, cols, cols)?;
    let diagonal_ok =
        umv.iter().enumerate().all(|(i, row)| row.iter().enumerate().all(|(j, x)| if i == j { *x == diagonal[i] } else { x.is_zero() }));
    let divisibility_ok = diagonal.windows(2).all(|p| p[1].is_zero() || (!p[0].is_zero() && p[0].divides(&p[1])));
    let u_ok = mul_dense(&w.u, &w.u_inv, rows, rows)? == identity::<T>(rows);
    let v_ok = mul_dense(&w.v, &w.v_inv, cols, cols)? == identity::<T>(cols);
    assert!(
        diagonal_ok && divisibility_ok && u_ok && v_ok,
        "Smith normal form failed re-verification (diag {diagonal_ok}, divisibility {divisibility_ok}, U {u_ok}, V {v_ok})"
    );
    VERIFIED.with(|c| c.set(c.get() + 1));
    Some(Decomposition { u: w.u, v: w.v, diagonal })
}

fn with_fallback(m: &Matrix) -> Decomposition<BigInt> {
    if let Some(d) = decompose::<i128>(m) {
        let big = |x: Dense<i128>| x.into_iter().map(|r| r.into_iter().map(|v| v.to_big()).collect()).collect();
        return Decomposition { u: big(d.u), v: big(d.v), diagonal: d.diagonal.iter().map(Scalar::to_big).collect() };
    }
    BIG_FALLBACKS.with(|c| c.set(c.get() + 1));
    decompose::<BigInt>(m).expect("big-integer arithmetic does not overflow")
}

/// `U·M·V = D` with `U`, `V` unimodular and `D` diagonal, `d_1 | d_2 | …`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithNormalForm {
    pub rows: usize,
    pub cols: usize,
    pub u: Vec<Vec<BigInt>>,
    pub v: Vec<Vec<BigInt>>,
    /// The `min(rows, cols)` diagonal entries, zeros last.
    pub diagonal: Vec<BigInt>,
}

impl SmithNormalForm {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|d| !Zero::is_zero(*d)).count()
    }

    /// The nonzero diagonal entries.
    pub fn divisors(&self) -> Vec<BigInt> {
        self.diagonal.iter().filter(|d| !Zero::is_zero(*d)).cloned().collect()
    }

    /// `D` as a full matrix.
    pub fn d(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| if i == j { self.diagonal[i].clone() } else { <BigInt as Zero>::zero() }).collect()).collect()
    }
}

pub fn smith_normal_form(m: &Matrix) -> SmithNormalForm {
    let d = with_fallback(m);
    SmithNormalForm { rows: m.rows(), cols: m.cols(), u: d.u, v: d.v, diagonal: d.diagonal }
}

/// The nonzero invariant factors of `m` (verified decomposition, transforms discarded).
pub fn elementary_divisors(m: &Matrix) -> Vec<BigInt> {
    smith_normal_form(m).divisors()
}

/// Exact determinant by fraction-free elimination; used to cross-check unimodularity.
pub fn determinant(m: &[Vec<BigInt>]) -> Result<BigInt> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(Error::Shape("determinant of a non-square matrix".into()));
    }
    let mut a = m.to_vec();
    let mut sign = <BigInt as One>::one();
    let mut prev = <BigInt as One>::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !Zero::is_zero(&a[i][k])) else {
            return Ok(<BigInt as Zero>::zero());
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    Ok(sign * if n == 0 { <BigInt as One>::one() } else { a[n - 1][n - 1].clone() })
}

/// Invariant factors of `m` over `Z_(l)`, as `l`-adic valuations, by elimination inside
/// the local ring itself (pivots of minimal valuation, unit denominators). Independent
/// of the integer decomposition, so it serves as an oracle for divisor filtering.
pub fn local_valuations(m: &Matrix, l: u64) -> Vec<u32> {
    use num_rational::BigRational;
    let lb = BigInt::from(l);
    let valuation = |x: &BigRational| -> u32 {
        let mut n = x.numer().clone();
        let mut v = 0;
        while n.is_multiple_of(&lb) {
            n /= &lb;
            v += 1;
        }
        v
    };
    let mut a: Vec<Vec<BigRational>> =
        m.to_rows().into_iter().map(|r| r.into_iter().map(|x| BigRational::from_integer(BigInt::from(x))).collect()).collect();
    let (rows, cols) = (m.rows(), m.cols());
    let mut out = Vec::new();
    for t in 0..rows.min(cols) {
        let mut best: Option<(usize, usize, u32)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, x) in row.iter().enumerate().skip(t) {
                if !Zero::is_zero(x) {
                    let v = valuation(x);
                    if best.is_none_or(|b| v < b.2) {
                        best = Some((i, j, v));
                    }
                }
            }
        }
        let Some((pi, pj, v)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        let pivot = a[t][t].clone();
        for i in t + 1..rows {
            if !Zero::is_zero(&a[i][t]) {
                // The ratio has non-negative valuation, so this is a row operation over Z_(l).
                let c = &a[i][t] / &pivot;
                for j in t..cols {
                    let sub = &c * &a[t][j];
                    a[i][j] -= sub;
                }
            }
        }
        for j in t + 1..cols {
            if !Zero::is_zero(&a[t][j]) {
                let c = &a[t][j] / &pivot;
                for i in t..rows {
                    let sub = &c * &a[i][t];
                    a[i][j] -= sub;
                }
            }
        }
        out.push(v);
    }
    out.sort_unstable();
    out
}
