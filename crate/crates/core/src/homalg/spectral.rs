//! The spectral sequence of the column filtration `F_p Tot = ⨁_{p' ≤ p}`, over a field.
//!
//! Pages are computed from the filtered total complex: with
//! `Z^r_p = {x ∈ F_p : Dx ∈ F_{p−r}}`, the entry is
//! `E^r_p = Z^r_p / (Z^{r−1}_{p−1} + D Z^{r−1}_{p+r−1})` and `d^r` is induced by `D`.
//! Each page is then checked against the homology of the previous one.

use serde::Serialize;

use super::complex::ChainComplex;
use super::double::{total_complex, DoubleComplex};
use super::field::{field_kind, kernel, rank, Field, FieldKind, FieldMatrix, Subquotient};
use super::ring::RingSpec;
use crate::error::{Error, Result};

/// One differential `d^r : E^r_{p,q} → E^r_{p−r,q+r−1}`, in the representative bases.
#[derive(Clone, Debug, Serialize)]
pub struct PageDifferential {
    pub source: (usize, usize),
    pub target: (usize, usize),
    pub rank: usize,
    /// Row-major entries as strings (exact field elements).
    pub matrix: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectralSequencePage {
    pub r: usize,
    /// `[p, q, dim]` for every entry inside the first quadrant.
    pub entries: Vec<[usize; 3]>,
    pub differentials: Vec<PageDifferential>,
    /// `d^r ∘ d^r = 0` on this page.
    pub squares_to_zero: bool,
}

impl SpectralSequencePage {
    pub fn dim(&self, p: usize, q: usize) -> usize {
        self.entries.iter().find(|e| e[0] == p && e[1] == q).map_or(0, |e| e[2])
    }

    pub fn is_zero_differential(&self) -> bool {
        self.differentials.iter().all(|d| d.rank == 0)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceRow {
    pub degree: usize,
    pub e_infinity_total: usize,
    pub total_homology: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectralSequence {
    pub ring: RingSpec,
    pub pages: Vec<SpectralSequencePage>,
    /// The abutment page `E^∞ = E^{P+1}`.
    pub e_infinity: SpectralSequencePage,
    /// First page from which every differential vanishes.
    pub degenerates_at: usize,
    /// `dim E^{r+1} = dim H(E^r, d^r)` entrywise, for every computed page.
    pub pages_consistent: bool,
    pub squares_to_zero: bool,
    /// Degrees inside the validity window.
    pub convergence: Vec<ConvergenceRow>,
    pub converges: bool,
}

struct Filtered<F: Field> {
    field: F,
    d: DoubleComplex,
    /// `boundary[n]`: matrix of `D : Tot_n → Tot_{n−1}` over the field.
    boundary: Vec<FieldMatrix<F::Elem>>,
    offsets: Vec<Vec<(usize, usize, usize)>>,
}

impl<F: Field> Filtered<F> {
    fn dim(&self, n: usize) -> usize {
        self.offsets.get(n).map_or(0, |o| o.iter().map(|t| t.2).sum())
    }

    /// Coordinates of `Tot_n` lying in columns `≤ p` (all of them when `p` is large).
    fn filtration_coords(&self, n: usize, p: isize) -> Vec<usize> {
        let Some(offs) = self.offsets.get(n) else { return vec![] };
        offs.iter().filter(|t| (t.0 as isize) <= p).flat_map(|t| t.1..t.1 + t.2).collect()
    }

    /// `D x` for `x ∈ Tot_n`.
    fn apply(&self, n: usize, x: &[F::Elem]) -> Vec<F::Elem> {
        if n == 0 {
            return vec![];
        }
        self.boundary[n].apply(&self.field, x)
    }

    /// `Z^r_p` in total degree `n`, as vectors of `Tot_n`.
    fn cycles(&self, n: usize, p: isize, r: isize) -> Vec<Vec<F::Elem>> {
        let dim = self.dim(n);
        let src = self.filtration_coords(n, p);
        if src.is_empty() {
            return vec![];
        }
        let f = &self.field;
        // Rows of D landing in columns > p − r must vanish.
        let bad_rows: Vec<usize> = if n == 0 {
            vec![]
        } else {
            let keep = self.filtration_coords(n - 1, p - r);
            (0..self.dim(n - 1)).filter(|i| !keep.contains(i)).collect()
        };
        let mut a = FieldMatrix::zeros(f, bad_rows.len(), src.len());
        for (i, &row) in bad_rows.iter().enumerate() {
            for (j, &col) in src.iter().enumerate() {
                a.data[i][j] = self.boundary[n].data[row][col].clone();
            }
        }
        kernel(f, &a)
            .into_iter()
            .map(|k| {
                let mut v = vec![f.zero(); dim];
                for (j, &col) in src.iter().enumerate() {
                    v[col] = k[j].clone();
                }
                v
            })
            .collect()
    }

    /// `E^r_{p, n−p}` as a subquotient of `Tot_n`.
    fn entry(&self, n: usize, p: usize, r: usize) -> Result<Subquotient<F>> {
        let (pi, ri) = (p as isize, r as isize);
        let numerator = self.cycles(n, pi, ri);
        let mut denominator = self.cycles(n, pi - 1, ri - 1);
        if n + 1 < self.boundary.len() {
            for y in self.cycles(n + 1, pi + ri - 1, ri - 1) {
                denominator.push(self.apply(n + 1, &y));
            }
        }
        Subquotient::new(&self.field, self.dim(n), &numerator, &denominator)
    }
}

fn run<F: Field>(field: F, ring: RingSpec, d: &DoubleComplex, r_max: usize) -> Result<SpectralSequence>
where
    F::Elem: ToString,
{
    let tot = total_complex(d)?;
    let top = tot.top();
    let boundary: Vec<FieldMatrix<F::Elem>> = (0..=top)
        .map(|n| if n == 0 { FieldMatrix::zeros(&field, 0, tot.rank(0)) } else { FieldMatrix::from_integer(&field, &tot.boundary(n)) })
        .collect();
    let offsets = (0..=top).map(|n| d.total_offsets(n)).collect();
    let filt = Filtered { field: field.clone(), d: d.clone(), boundary, offsets };
    let cols = d.columns();
    let r_stable = cols; // d^r vanishes once r exceeds the last column index

    let mut pages: Vec<SpectralSequencePage> = Vec::new();
    for r in 0..=r_stable {
        // grid[n][p] = E^r_{p, n−p}
        let mut grid: Vec<Vec<Option<Subquotient<F>>>> = Vec::with_capacity(top + 1);
        for n in 0..=top {
            let mut row = Vec::with_capacity(cols);
            for p in 0..cols {
                row.push(if p <= n && filt.d.rank(p, n - p) > 0 { Some(filt.entry(n, p, r)?) } else { None });
            }
            grid.push(row);
        }
        let mut entries = Vec::new();
        let mut differentials = Vec::new();
        let mut maps: Vec<((usize, usize), (usize, usize), FieldMatrix<F::Elem>)> = Vec::new();
        for n in 0..=top {
            for p in 0..cols.min(n + 1) {
                let Some(src) = &grid[n][p] else { continue };
                entries.push([p, n - p, src.dim()]);
                if src.dim() == 0 || n == 0 || p < r {
                    continue;
                }
                let Some(tgt) = grid[n - 1].get(p - r).and_then(Option::as_ref) else { continue };
                if tgt.dim() == 0 {
                    continue;
                }
                let mut m = FieldMatrix::zeros(&field, tgt.dim(), src.dim());
                for (j, x) in src.representatives.iter().enumerate() {
                    let dx = filt.apply(n, x);
                    let c = tgt.class_of(&field, &dx).ok_or_else(|| Error::Unsupported(format!("d^{r} leaves E^{r}_{},{}", p - r, n + r - p - 1)))?;
                    for i in 0..tgt.dim() {
                        m.data[i][j] = c[i].clone();
                    }
                }
                let q = n - p;
                maps.push(((p, q), (p - r, q + r - 1), m));
            }
        }
        let mut squares = true;
        for (s, t, m) in &maps {
            if let Some((_, _, m2)) = maps.iter().find(|(s2, _, _)| s2 == t) {
                squares &= m2.mul(&field, m).is_zero(&field);
            }
            differentials.push(PageDifferential {
                source: *s,
                target: *t,
                rank: rank(&field, m),
                matrix: m.data.iter().map(|row| row.iter().map(|e| e.to_string()).collect()).collect(),
            });
        }
        pages.push(SpectralSequencePage { r, entries, differentials, squares_to_zero: squares });
    }

    // E^{r+1} = H(E^r, d^r) entrywise.
    let mut consistent = true;
    for r in 0..r_stable {
        let (page, next) = (&pages[r], &pages[r + 1]);
        for e in &page.entries {
            let (p, q) = (e[0], e[1]);
            let out = page.differentials.iter().find(|d| d.source == (p, q)).map_or(0, |d| d.rank);
            let inc = page.differentials.iter().find(|d| d.target == (p, q)).map_or(0, |d| d.rank);
            consistent &= next.dim(p, q) + out + inc == e[2];
        }
    }
    let degenerates_at = (1..=r_stable).find(|&r| pages[r..].iter().all(|pg| pg.is_zero_differential())).unwrap_or(r_stable);
    let e_infinity = pages[r_stable].clone();
    let squares_to_zero = pages.iter().all(|pg| pg.squares_to_zero);

    let mut convergence = Vec::new();
    for n in 0..=top {
        if !tot.certifies(n) {
            break;
        }
        let total = tot.homology(n, ring)?.rank;
        let e_inf: usize = e_infinity.entries.iter().filter(|e| e[0] + e[1] == n).map(|e| e[2]).sum();
        convergence.push(ConvergenceRow { degree: n, e_infinity_total: e_inf, total_homology: total });
    }
    let converges = convergence.iter().all(|c| c.e_infinity_total == c.total_homology);
    pages.truncate(r_max.max(1).min(r_stable) + 1);
    Ok(SpectralSequence { ring, pages, e_infinity, degenerates_at, pages_consistent: consistent, squares_to_zero, convergence, converges })
}

/// Pages `E^0, …, E^{r_max}` (all pages up to degeneration are checked regardless), the
/// abutment and the convergence comparison with `H_*(Tot)` computed through Smith forms.
pub fn spectral_sequence(d: &DoubleComplex, ring: RingSpec, r_max: usize) -> Result<SpectralSequence> {
    match field_kind(ring)? {
        FieldKind::Rationals(q) => run(q, ring, d, r_max),
        FieldKind::Prime(f) => run(f, ring, d, r_max),
    }
}

/// Dimensions of `H_*(ChainComplex)` over a field, by Smith forms.
pub fn field_dimensions(c: &ChainComplex, ring: RingSpec, upto: usize) -> Result<Vec<usize>> {
    (0..=upto).map(|k| c.homology(k, ring).map(|h| h.rank)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homalg::matrix::Matrix;

    #[test]
    fn single_row_degenerates_at_two() {
        // Row 0: Z ← Z ← Z with maps 0 and identity.
        let z = ChainComplex::concentrated(1);
        let d = DoubleComplex::new(&[z.clone(), z.clone(), z], vec![vec![Matrix::zeros(1, 1)], vec![Matrix::identity(1)]], None).unwrap();
        let ss = spectral_sequence(&d, RingSpec::Rationals, 5).unwrap();
        assert_eq!(ss.pages[1].dim(1, 0), 1);
        assert_eq!(ss.pages[2].dim(0, 0), 1);
        assert_eq!(ss.pages[2].dim(1, 0), 0);
        assert_eq!(ss.pages[2].dim(2, 0), 0);
        assert!(ss.degenerates_at <= 2);
        assert!(ss.converges && ss.pages_consistent && ss.squares_to_zero);
    }

    #[test]
    fn exact_columns_vanish_on_page_one() {
        let col = ChainComplex::new(vec![1, 1], vec![Matrix::identity(1)], None).unwrap();
        let d = DoubleComplex::new(&[col.clone(), col], vec![vec![Matrix::identity(1), Matrix::identity(1)]], None).unwrap();
        let ss = spectral_sequence(&d, RingSpec::PrimeField(2), 3).unwrap();
        assert!(ss.pages[1].entries.iter().all(|e| e[2] == 0));
        assert!(ss.converges);
    }

    #[test]
    fn integers_are_refused() {
        let d = DoubleComplex::new(&[ChainComplex::concentrated(1)], vec![], None).unwrap();
        assert!(matches!(spectral_sequence(&d, RingSpec::Integers, 2), Err(Error::Unsupported(_))));
    }

    #[test]
    fn higher_differential() {
        // A staircase where d^1 vanishes but d^2 does not:
        // (2,0) → (1,0) zero horizontally, but (2,0) → (1,1) via a zig-zag.
        // Column 1: Z -id-> Z in rows 1, 0; column 2 and column 0 single Z in row 0 and row 1.
        let c0 = ChainComplex::new(vec![0, 1], vec![Matrix::zeros(0, 1)], None).unwrap();
        let c1 = ChainComplex::new(vec![1, 1], vec![Matrix::identity(1)], None).unwrap();
        let c2 = ChainComplex::concentrated(1);
        // h: (1,1) → (0,1) identity; h: (2,0) → (1,0) identity.
        let h = vec![vec![Matrix::zeros(0, 1), Matrix::identity(1)], vec![Matrix::identity(1)]];
        let d = DoubleComplex::new(&[c0, c1, c2], h, None).unwrap();
        let ss = spectral_sequence(&d, RingSpec::Rationals, 4).unwrap();
        assert!(ss.pages_consistent && ss.squares_to_zero && ss.converges);
        assert_eq!(ss.pages[1].entries.iter().map(|e| e[2]).sum::<usize>(), 2);
        assert_eq!(ss.pages[2].dim(2, 0), 1);
        assert_eq!(ss.pages[2].dim(0, 1), 1);
        assert_eq!(ss.pages[2].differentials.iter().map(|d| d.rank).sum::<usize>(), 1);
        assert_eq!(ss.e_infinity.entries.iter().map(|e| e[2]).sum::<usize>(), 0);
    }
}
