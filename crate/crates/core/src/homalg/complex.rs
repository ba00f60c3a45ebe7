use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::matrix::Matrix;
use super::ring::RingSpec;
use super::smith::elementary_divisors;
use crate::error::{Error, Result};

/// A bounded complex of free modules `C_0 ← C_1 ← ⋯ ← C_M`, with `∂_k` stored as an
/// `r_{k−1} × r_k` matrix acting on column vectors.
///
/// `exact_through` records how far the groups and differentials agree with the complex
/// being modelled: `Some(n)` certifies degrees `≤ n` and therefore homology in degrees
/// `< n`; `None` means the complex is complete (zero above `M`).
#[derive(Clone, Debug)]
pub struct ChainComplex {
    ranks: Vec<usize>,
    boundaries: Vec<Matrix>,
    exact_through: Option<usize>,
    divisors: Vec<OnceLock<Vec<BigInt>>>,
}

impl PartialEq for ChainComplex {
    fn eq(&self, other: &Self) -> bool {
        self.ranks == other.ranks && self.boundaries == other.boundaries && self.exact_through == other.exact_through
    }
}

impl ChainComplex {
    /// `boundaries[k − 1] = ∂_k`. Fails unless shapes match and `∂∂ = 0`.
    pub fn new(ranks: Vec<usize>, boundaries: Vec<Matrix>, exact_through: Option<usize>) -> Result<Self> {
        if ranks.is_empty() {
            return Err(Error::Shape("a complex needs at least degree 0".into()));
        }
        if boundaries.len() + 1 != ranks.len() {
            return Err(Error::Shape(format!("{} ranks need {} boundaries, got {}", ranks.len(), ranks.len() - 1, boundaries.len())));
        }
        for (i, d) in boundaries.iter().enumerate() {
            let k = i + 1;
            if d.rows() != ranks[k - 1] || d.cols() != ranks[k] {
                return Err(Error::Shape(format!("∂_{k} is {}x{}, expected {}x{}", d.rows(), d.cols(), ranks[k - 1], ranks[k])));
            }
        }
        for k in 2..ranks.len() {
            if !boundaries[k - 2].mul(&boundaries[k - 1])?.is_zero() {
                return Err(Error::BoundaryNonzero(format!("∂_{} ∘ ∂_{k} ≠ 0", k - 1)));
            }
        }
        let divisors = (0..boundaries.len()).map(|_| OnceLock::new()).collect();
        Ok(ChainComplex { ranks, boundaries, exact_through, divisors })
    }

    /// A single module in degree 0.
    pub fn concentrated(rank: usize) -> Self {
        ChainComplex::new(vec![rank], vec![], None).expect("no boundaries")
    }

    pub fn zero() -> Self {
        ChainComplex::concentrated(0)
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// Highest stored degree `M`.
    pub fn top(&self) -> usize {
        self.ranks.len() - 1
    }

    pub fn rank(&self, k: usize) -> usize {
        self.ranks.get(k).copied().unwrap_or(0)
    }

    pub fn exact_through(&self) -> Option<usize> {
        self.exact_through
    }

    /// The same complex with a (possibly tighter) validity bound.
    pub fn with_exact_through(mut self, bound: Option<usize>) -> Self {
        self.exact_through = match (self.exact_through, bound) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self
    }

    /// Whether `H_k` is certified.
    pub fn certifies(&self, k: usize) -> bool {
        self.exact_through.is_none_or(|n| k < n)
    }

    /// Highest certified homological degree, `None` when nothing is certified.
    /// Complete complexes report `None` as well; check [`ChainComplex::exact_through`] first.
    pub fn window(&self) -> Option<usize> {
        self.exact_through.and_then(|n| n.checked_sub(1))
    }

    /// `∂_k : C_k → C_{k−1}`; zero (with the right shape) outside the stored range.
    pub fn boundary(&self, k: usize) -> Matrix {
        if k >= 1 && k <= self.boundaries.len() {
            self.boundaries[k - 1].clone()
        } else {
            Matrix::zeros(if k == 0 { 0 } else { self.rank(k - 1) }, self.rank(k))
        }
    }

    pub fn boundary_ref(&self, k: usize) -> Option<&Matrix> {
        (k >= 1 && k <= self.boundaries.len()).then(|| &self.boundaries[k - 1])
    }

    /// Nonzero invariant factors of `∂_k` (cached).
    fn divisors_of(&self, k: usize) -> &[BigInt] {
        if k == 0 || k > self.boundaries.len() {
            return &[];
        }
        self.divisors[k - 1].get_or_init(|| elementary_divisors(&self.boundaries[k - 1]))
    }

    /// `H_k` over `ring`. Degrees outside the validity window are refused.
    pub fn homology(&self, k: usize, ring: RingSpec) -> Result<HomologyPresentation> {
        if !self.certifies(k) {
            return Err(Error::OutsideWindow { degree: k, window: self.window() });
        }
        let surviving = |divs: &[BigInt]| -> Vec<BigInt> { divs.iter().filter_map(|d| ring.localize_divisor(d)).collect() };
        let incoming = surviving(self.divisors_of(k));
        let outgoing = surviving(self.divisors_of(k + 1));
        let rank = self.rank(k) - incoming.len() - outgoing.len();
        let torsion = outgoing.into_iter().filter(|d| !d.is_one()).collect();
        Ok(HomologyPresentation { degree: k, rank, torsion })
    }

    /// `H_0, …, H_upto`.
    pub fn homology_upto(&self, upto: usize, ring: RingSpec) -> Result<Vec<HomologyPresentation>> {
        (0..=upto).map(|k| self.homology(k, ring)).collect()
    }

    /// Direct sum of complexes, degreewise.
    pub fn direct_sum(&self, other: &ChainComplex) -> ChainComplex {
        let top = self.top().max(other.top());
        let ranks = (0..=top).map(|k| self.rank(k) + other.rank(k)).collect();
        let boundaries = (1..=top).map(|k| self.boundary(k).direct_sum(&other.boundary(k))).collect();
        let bound = min_bound(self.exact_through, other.exact_through);
        ChainComplex::new(ranks, boundaries, bound).expect("sum of complexes")
    }
}

fn min_bound(a: Option<usize>, b: Option<usize>) -> Option<usize> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, y) => x.or(y),
    }
}

/// `Z^rank ⊕ ⨁ Z/d_i` (or the corresponding module over the chosen ring).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyPresentation {
    pub degree: usize,
    pub rank: usize,
    /// Invariant factors `> 1`, each dividing the next.
    pub torsion: Vec<BigInt>,
}

impl HomologyPresentation {
    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    /// Same module up to the degree label.
    pub fn isomorphic(&self, other: &HomologyPresentation) -> bool {
        self.rank == other.rank && self.torsion == other.torsion
    }

    /// Torsion divisors as decimal strings.
    pub fn torsion_strings(&self) -> Vec<String> {
        self.torsion.iter().map(ToString::to_string).collect()
    }
}

impl fmt::Display for HomologyPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// A big integer as a JSON number when it fits in 64 bits, else as a decimal string.
pub(crate) struct ExactInt<'a>(pub &'a BigInt);

impl Serialize for ExactInt<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match (self.0.to_u64(), self.0.to_i64()) {
            (Some(v), _) => s.serialize_u64(v),
            (None, Some(v)) => s.serialize_i64(v),
            _ => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl Serialize for HomologyPresentation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("HomologyPresentation", 2)?;
        st.serialize_field("rank", &self.rank)?;
        let torsion: Vec<ExactInt> = self.torsion.iter().map(ExactInt).collect();
        st.serialize_field("torsion", &torsion)?;
        st.end()
    }
}

/// A degreewise map `f_k : C_k → D_k` commuting with the differentials.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainMap {
    pub source: ChainComplex,
    pub target: ChainComplex,
    /// `components[k]` is `rank D_k × rank C_k`, for `k ≤ max(top C, top D)`.
    pub components: Vec<Matrix>,
}

impl ChainMap {
    /// Checks shapes and `∂f = f∂` in every stored degree.
    pub fn new(source: ChainComplex, target: ChainComplex, mut components: Vec<Matrix>) -> Result<Self> {
        let top = source.top().max(target.top());
        while components.len() <= top {
            let k = components.len();
            components.push(Matrix::zeros(target.rank(k), source.rank(k)));
        }
        for (k, f) in components.iter().enumerate() {
            if f.rows() != target.rank(k) || f.cols() != source.rank(k) {
                return Err(Error::Shape(format!("f_{k} is {}x{}, expected {}x{}", f.rows(), f.cols(), target.rank(k), source.rank(k))));
            }
        }
        for k in 1..components.len() {
            let lhs = target.boundary(k).mul(&components[k])?;
            let rhs = components[k - 1].mul(&source.boundary(k))?;
            if lhs != rhs {
                return Err(Error::NotChainMap(format!("∂f ≠ f∂ in degree {k}")));
            }
        }
        Ok(ChainMap { source, target, components })
    }

    pub fn identity(c: &ChainComplex) -> Self {
        let components = (0..=c.top()).map(|k| Matrix::identity(c.rank(k))).collect();
        ChainMap::new(c.clone(), c.clone(), components).expect("identity is a chain map")
    }

    pub fn zero(source: &ChainComplex, target: &ChainComplex) -> Self {
        ChainMap::new(source.clone(), target.clone(), vec![]).expect("zero is a chain map")
    }

    pub fn component(&self, k: usize) -> Matrix {
        self.components.get(k).cloned().unwrap_or_else(|| Matrix::zeros(self.target.rank(k), self.source.rank(k)))
    }

    /// `self ∘ other`.
    pub fn after(&self, other: &ChainMap) -> Result<ChainMap> {
        if other.target.ranks() != self.source.ranks() {
            return Err(Error::Shape("chain maps are not composable".into()));
        }
        let top = other.source.top().max(self.target.top());
        let components = (0..=top).map(|k| self.component(k).mul(&other.component(k))).collect::<Result<_>>()?;
        ChainMap::new(other.source.clone(), self.target.clone(), components)
    }

    pub fn sub(&self, other: &ChainMap) -> Result<ChainMap> {
        let top = self.components.len().max(other.components.len());
        let components = (0..top).map(|k| self.component(k).sub(&other.component(k))).collect::<Result<_>>()?;
        ChainMap::new(self.source.clone(), self.target.clone(), components)
    }

    pub fn scale(&self, c: i64) -> Result<ChainMap> {
        let components = self.components.iter().map(|m| m.scale(c)).collect::<Result<_>>()?;
        ChainMap::new(self.source.clone(), self.target.clone(), components)
    }
}

/// `cone_n = C_{n−1} ⊕ D_n` with `∂(c, d) = (−∂c, f c + ∂d)`.
pub fn mapping_cone(f: &ChainMap) -> ChainComplex {
    let (c, d) = (&f.source, &f.target);
    let top = (c.top() + 1).max(d.top());
    let rank = |n: usize| (if n == 0 { 0 } else { c.rank(n - 1) }) + d.rank(n);
    let ranks: Vec<usize> = (0..=top).map(rank).collect();
    let boundaries = (1..=top)
        .map(|n| {
            let mut m = Matrix::zeros(ranks[n - 1], ranks[n]);
            let c_prev = if n >= 2 { c.rank(n - 2) } else { 0 };
            let c_here = c.rank(n - 1);
            if n >= 2 {
                m.put(0, 0, &c.boundary(n - 1).neg());
            }
            m.put(c_prev, 0, &f.component(n - 1));
            m.put(c_prev, c_here, &d.boundary(n));
            m
        })
        .collect();
    let bound = min_bound(c.exact_through.map(|n| n + 1), d.exact_through);
    ChainComplex::new(ranks, boundaries, bound).expect("the cone of a chain map is a complex")
}

/// One row of a quasi-isomorphism table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyRow {
    pub degree: usize,
    pub source: HomologyPresentation,
    pub target: HomologyPresentation,
    pub cone: HomologyPresentation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Verdict {
    QuasiIso,
    Failure { degree: usize, source: HomologyPresentation, target: HomologyPresentation, cone: HomologyPresentation },
}

impl Verdict {
    pub fn is_quasi_iso(&self) -> bool {
        matches!(self, Verdict::QuasiIso)
    }

    pub fn failure_degree(&self) -> Option<usize> {
        match self {
            Verdict::QuasiIso => None,
            Verdict::Failure { degree, .. } => Some(*degree),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuasiIsoReport {
    pub ring: RingSpec,
    pub upto: usize,
    pub table: Vec<HomologyRow>,
    pub verdict: Verdict,
}

/// Whether `f_*` is an isomorphism on `H_k` for every `k ≤ upto`.
///
/// Walking upwards: if `f_*` is already an isomorphism below `k`, then `H_k(cone) = 0`
/// exactly when `f_*` is onto in degree `k`, and an onto map between isomorphic
/// finitely generated modules is an isomorphism.
pub fn is_quasi_iso(f: &ChainMap, upto: usize, ring: RingSpec) -> Result<QuasiIsoReport> {
    for c in [&f.source, &f.target] {
        if !c.certifies(upto) {
            return Err(Error::OutsideWindow { degree: upto, window: c.window() });
        }
    }
    let cone = mapping_cone(f);
    let mut table = Vec::with_capacity(upto + 1);
    let mut verdict = Verdict::QuasiIso;
    for k in 0..=upto {
        let row = HomologyRow { degree: k, source: f.source.homology(k, ring)?, target: f.target.homology(k, ring)?, cone: cone.homology(k, ring)? };
        if verdict.is_quasi_iso() && (!row.cone.is_zero() || !row.source.isomorphic(&row.target)) {
            verdict = Verdict::Failure { degree: k, source: row.source.clone(), target: row.target.clone(), cone: row.cone.clone() };
        }
        table.push(row);
    }
    Ok(QuasiIsoReport { ring, upto, table, verdict })
}

/// Degree `+1` maps `h_k : C_k → D_{k+1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainHomotopy {
    pub components: Vec<Matrix>,
}

impl ChainHomotopy {
    pub fn zero(source: &ChainComplex, target: &ChainComplex) -> Self {
        let components = (0..=source.top()).map(|k| Matrix::zeros(target.rank(k + 1), source.rank(k))).collect();
        ChainHomotopy { components }
    }

    pub fn component(&self, k: usize, source: &ChainComplex, target: &ChainComplex) -> Matrix {
        self.components.get(k).cloned().unwrap_or_else(|| Matrix::zeros(target.rank(k + 1), source.rank(k)))
    }
}

/// First degree where `∂h + h∂ = g − f` fails, or a shape error. Every degree of the
/// source is checked for complete complexes; otherwise only degrees inside the window.
pub fn chain_homotopy_defect(h: &ChainHomotopy, f: &ChainMap, g: &ChainMap) -> Option<usize> {
    let (c, d) = (&f.source, &f.target);
    if g.source.ranks() != c.ranks() || g.target.ranks() != d.ranks() {
        return Some(0);
    }
    for (k, hk) in h.components.iter().enumerate() {
        if hk.rows() != d.rank(k + 1) || hk.cols() != c.rank(k) {
            return Some(k);
        }
    }
    // The identity in degree k involves D_{k+1}, so a target exact through n certifies k < n.
    let top = match min_bound(c.exact_through(), d.exact_through()) {
        None => Some(c.top()),
        Some(n) => n.checked_sub(1).map(|t| t.min(c.top())),
    };
    for k in 0..=top? {
        let dh = d.boundary(k + 1).mul(&h.component(k, c, d)).ok()?;
        let hd = if k == 0 { Matrix::zeros(d.rank(0), c.rank(0)) } else { h.component(k - 1, c, d).mul(&c.boundary(k)).ok()? };
        let lhs = dh.add(&hd).ok()?;
        let rhs = g.component(k).sub(&f.component(k)).ok()?;
        if lhs != rhs {
            return Some(k);
        }
    }
    None
}

pub fn verify_chain_homotopy(h: &ChainHomotopy, f: &ChainMap, g: &ChainMap) -> bool {
    chain_homotopy_defect(h, f, g).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn times_two() -> ChainComplex {
        // 0 → Z -(×2)-> Z → 0 in degrees 1, 0
        ChainComplex::new(vec![1, 1], vec![Matrix::scalar(1, 2)], None).unwrap()
    }

    #[test]
    fn multiplication_by_two() {
        let c = times_two();
        let h0 = c.homology(0, RingSpec::Integers).unwrap();
        assert_eq!(h0.rank, 0);
        assert_eq!(h0.torsion, vec![BigInt::from(2)]);
        assert!(c.homology(1, RingSpec::Integers).unwrap().is_zero());
        assert!(c.homology(0, RingSpec::Localized(3)).unwrap().is_zero());
        assert_eq!(c.homology(0, RingSpec::PrimeField(2)).unwrap().rank, 1);
        assert_eq!(c.homology(1, RingSpec::PrimeField(2)).unwrap().rank, 1);
        assert!(c.homology(5, RingSpec::Integers).unwrap().is_zero());
    }

    #[test]
    fn nonzero_square_is_rejected() {
        let d1 = Matrix::from_rows(vec![vec![1]]).unwrap();
        let d2 = Matrix::from_rows(vec![vec![1]]).unwrap();
        assert!(matches!(ChainComplex::new(vec![1, 1, 1], vec![d1, d2], None), Err(Error::BoundaryNonzero(_))));
    }

    #[test]
    fn window_is_enforced() {
        let c = ChainComplex::new(vec![2, 2], vec![Matrix::zeros(2, 2)], Some(1));
        let c = c.unwrap();
        assert!(c.homology(0, RingSpec::Integers).is_ok());
        assert!(matches!(c.homology(1, RingSpec::Integers), Err(Error::OutsideWindow { degree: 1, window: Some(0) })));
    }

    #[test]
    fn cone_of_identity_is_acyclic() {
        let c = times_two();
        let cone = mapping_cone(&ChainMap::identity(&c));
        for k in 0..=cone.top() {
            assert!(cone.homology(k, RingSpec::Integers).unwrap().is_zero());
        }
        assert!(is_quasi_iso(&ChainMap::identity(&c), 3, RingSpec::Integers).unwrap().verdict.is_quasi_iso());
    }

    #[test]
    fn cone_of_zero_map() {
        let c = times_two();
        let d = ChainComplex::concentrated(1);
        let cone = mapping_cone(&ChainMap::zero(&c, &d));
        // H(C)[1] ⊕ H(D): Z/2 in degree 1, Z in degree 0.
        assert_eq!(cone.homology(0, RingSpec::Integers).unwrap().to_string(), "Z");
        assert_eq!(cone.homology(1, RingSpec::Integers).unwrap().to_string(), "Z/2");
        assert!(cone.homology(2, RingSpec::Integers).unwrap().is_zero());
    }

    #[test]
    fn cone_of_doubling() {
        let z = ChainComplex::concentrated(1);
        let f = ChainMap::new(z.clone(), z, vec![Matrix::scalar(1, 2)]).unwrap();
        let cone = mapping_cone(&f);
        assert_eq!(cone.homology(0, RingSpec::Integers).unwrap().torsion, vec![BigInt::from(2)]);
        let r = is_quasi_iso(&f, 0, RingSpec::Integers).unwrap();
        assert_eq!(r.verdict.failure_degree(), Some(0));
        assert!(is_quasi_iso(&f, 0, RingSpec::Localized(3)).unwrap().verdict.is_quasi_iso());
    }

    #[test]
    fn non_chain_map_is_rejected() {
        let c = times_two();
        let bad = vec![Matrix::identity(1), Matrix::zeros(1, 1)];
        assert!(matches!(ChainMap::new(c.clone(), c, bad), Err(Error::NotChainMap(_))));
    }

    #[test]
    fn homotopies() {
        let c = times_two();
        let id = ChainMap::identity(&c);
        assert!(verify_chain_homotopy(&ChainHomotopy::zero(&c, &c), &id, &id));
        // The complex Z -1-> Z is contractible: h_0 = 1 gives ∂h + h∂ = id − 0.
        let e = ChainComplex::new(vec![1, 1], vec![Matrix::identity(1)], None).unwrap();
        let h = ChainHomotopy { components: vec![Matrix::identity(1), Matrix::zeros(0, 1)] };
        assert!(verify_chain_homotopy(&h, &ChainMap::zero(&e, &e), &ChainMap::identity(&e)));
        let bad = ChainHomotopy { components: vec![Matrix::scalar(1, 2), Matrix::zeros(0, 1)] };
        assert!(!verify_chain_homotopy(&bad, &ChainMap::zero(&e, &e), &ChainMap::identity(&e)));
    }

    #[test]
    fn serialization() {
        let h = HomologyPresentation { degree: 1, rank: 1, torsion: vec![BigInt::from(2)] };
        assert_eq!(serde_json::to_string(&h).unwrap(), r#"{"rank":1,"torsion":[2]}"#);
        let e = HomologyPresentation { degree: 0, rank: 0, torsion: vec![] };
        assert_eq!(serde_json::to_string(&e).unwrap(), r#"{"rank":0,"torsion":[]}"#);
        let huge = HomologyPresentation { degree: 0, rank: 0, torsion: vec![BigInt::from(u64::MAX) * 3] };
        assert!(serde_json::to_string(&huge).unwrap().contains("\"55340232221128654845\""));
    }
}
