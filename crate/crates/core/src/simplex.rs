//! Combinatorics of the simplex category Δ.
//!
//! Objects are the ordered sets `[n] = {0, …, n}`; arrows are non-decreasing
//! maps. A [`MonotoneMap`] stores its full value table, and generator words
//! (cofaces and codegeneracies) are recovered on demand from the epi-mono
//! factorization.
//!
//! Everything here is ordered canonically: maps compare first by source size
//! and then lexicographically by value tuple. Coskeleton encodings depend on
//! this order, so it must never change.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// The ordered set `[n] = {0, …, n}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SimplexObject {
    pub n: usize,
}

impl SimplexObject {
    pub fn new(n: usize) -> Self {
        SimplexObject { n }
    }

    /// Number of elements of `[n]`.
    pub fn len(&self) -> usize {
        self.n + 1
    }
}

/// A non-decreasing map `[i] → [j]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonotoneMap {
    values: Vec<usize>,
    target: usize,
}

impl Ord for MonotoneMap {
    fn cmp(&self, other: &Self) -> Ordering {
        self.values.len().cmp(&other.values.len()).then_with(|| self.values.cmp(&other.values)).then_with(|| self.target.cmp(&other.target))
    }
}

impl PartialOrd for MonotoneMap {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MonotoneMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]→[{}](", self.source(), self.target)?;
        for (k, v) in self.values.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

impl MonotoneMap {
    /// Builds `[values.len() - 1] → [target]`, checking monotonicity and range.
    pub fn new(values: Vec<usize>, target: usize) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidMonotone("a map out of [i] needs i+1 ≥ 1 values".into()));
        }
        if values.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidMonotone(format!("values {values:?} are not non-decreasing")));
        }
        if let Some(v) = values.iter().find(|&&v| v > target) {
            return Err(Error::InvalidMonotone(format!("value {v} exceeds target [{target}]")));
        }
        Ok(MonotoneMap { values, target })
    }

    pub(crate) fn from_parts_unchecked(values: Vec<usize>, target: usize) -> Self {
        debug_assert!(MonotoneMap::new(values.clone(), target).is_ok());
        MonotoneMap { values, target }
    }

    pub fn identity(n: usize) -> Self {
        MonotoneMap { values: (0..=n).collect(), target: n }
    }

    /// The coface `δ^i : [n-1] → [n]` that skips `i`. Requires `n ≥ 1`, `i ≤ n`.
    pub fn coface(n: usize, i: usize) -> Self {
        assert!(n >= 1 && i <= n, "coface δ^{i} into [{n}] is undefined");
        let values = (0..n).map(|x| if x < i { x } else { x + 1 }).collect();
        MonotoneMap { values, target: n }
    }

    /// The codegeneracy `σ^i : [n+1] → [n]` that hits `i` twice. Requires `i ≤ n`.
    pub fn codegeneracy(n: usize, i: usize) -> Self {
        assert!(i <= n, "codegeneracy σ^{i} onto [{n}] is undefined");
        let values = (0..=n + 1).map(|x| if x <= i { x } else { x - 1 }).collect();
        MonotoneMap { values, target: n }
    }

    /// Constant map `[i] → [m]` with value `v`.
    pub fn constant(i: usize, m: usize, v: usize) -> Self {
        assert!(v <= m);
        MonotoneMap { values: vec![v; i + 1], target: m }
    }

    pub fn source(&self) -> usize {
        self.values.len() - 1
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn apply(&self, x: usize) -> usize {
        self.values[x]
    }

    pub fn is_identity(&self) -> bool {
        self.source() == self.target && self.is_injective()
    }

    pub fn is_injective(&self) -> bool {
        self.values.windows(2).all(|w| w[0] < w[1])
    }

    pub fn is_surjective(&self) -> bool {
        self.values[0] == 0 && *self.values.last().unwrap() == self.target && self.values.windows(2).all(|w| w[1] - w[0] <= 1)
    }

    pub fn is_constant(&self) -> bool {
        self.values.iter().all(|&v| v == self.values[0])
    }

    /// `self ∘ f`.
    pub fn after(&self, f: &MonotoneMap) -> Result<MonotoneMap> {
        compose_monotone(self, f)
    }

    /// Indices of `[target]` missed by an injective map, ascending.
    pub fn missing_values(&self) -> Vec<usize> {
        (0..=self.target).filter(|v| !self.values.contains(v)).collect()
    }

    /// Positions `t` with `values[t] == values[t + 1]`, ascending.
    pub fn repeated_positions(&self) -> Vec<usize> {
        (0..self.source()).filter(|&t| self.values[t] == self.values[t + 1]).collect()
    }
}

/// Composite `g ∘ f`.
pub fn compose_monotone(g: &MonotoneMap, f: &MonotoneMap) -> Result<MonotoneMap> {
    if f.target != g.source() {
        return Err(Error::Composition(format!("cannot compose {g} after {f}: [{}] ≠ [{}]", f.target, g.source())));
    }
    let values = f.values.iter().map(|&x| g.values[x]).collect();
    Ok(MonotoneMap { values, target: g.target })
}

/// Unique factorization `α = δ ∘ σ` with `σ` surjective and `δ` injective.
pub fn epi_mono_factorization(alpha: &MonotoneMap) -> (MonotoneMap, MonotoneMap) {
    let mut image: Vec<usize> = alpha.values.clone();
    image.dedup();
    let k = image.len() - 1;
    let sigma_values = alpha.values.iter().map(|v| image.binary_search(v).expect("value lies in image")).collect();
    let sigma = MonotoneMap { values: sigma_values, target: k };
    let delta = MonotoneMap { values: image, target: alpha.target };
    (sigma, delta)
}

/// All monotone maps `[i] → [m]` in canonical order.
///
/// There are `binomial(i + m + 1, i + 1)` of them.
pub fn enumerate_monotone(i: usize, m: usize) -> Vec<MonotoneMap> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(i + 1);
    fn fill(pos: usize, lo: usize, i: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<MonotoneMap>) {
        if pos > i {
            out.push(MonotoneMap { values: cur.clone(), target: m });
            return;
        }
        for v in lo..=m {
            cur.push(v);
            fill(pos + 1, v, i, m, cur, out);
            cur.pop();
        }
    }
    fill(0, 0, i, m, &mut current, &mut out);
    out
}

/// Strictly increasing maps `[i] → [m]` in canonical order.
pub fn enumerate_injective(i: usize, m: usize) -> Vec<MonotoneMap> {
    enumerate_monotone(i, m).into_iter().filter(MonotoneMap::is_injective).collect()
}

/// Surjective monotone maps `[i] → [k]` in canonical order.
pub fn enumerate_surjective(i: usize, k: usize) -> Vec<MonotoneMap> {
    if k > i {
        return Vec::new();
    }
    enumerate_monotone(i, k).into_iter().filter(MonotoneMap::is_surjective).collect()
}

/// The `j + 2` maps `[j] → [1]`, from the constant map to 0 to the constant map to 1.
pub fn interval_maps(j: usize) -> Vec<MonotoneMap> {
    (0..=j + 1)
        .rev()
        .map(|zeros| {
            let values = (0..=j).map(|x| usize::from(x >= zeros)).collect();
            MonotoneMap { values, target: 1 }
        })
        .collect()
}

/// An arrow `α : φ → φ′` of an index category, i.e. `φ′ ∘ α = φ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexMorphism {
    /// Position of `φ` in [`IndexCategory::objects`].
    pub source: usize,
    /// Position of `φ′`.
    pub target: usize,
    pub alpha: MonotoneMap,
}

/// The comma category of maps `φ : [i] → [m]` with `i ≤ n`.
///
/// [`build_index_category`] keeps only injective `φ` (the category `D_m`);
/// [`build_full_index_category`] keeps all of them (`D′_m`).
#[derive(Clone, Debug)]
pub struct IndexCategory {
    pub n: usize,
    pub m: usize,
    pub objects: Vec<MonotoneMap>,
    pub morphisms: Vec<IndexMorphism>,
    lookup: HashMap<MonotoneMap, usize>,
}

impl IndexCategory {
    fn from_objects(n: usize, m: usize, objects: Vec<MonotoneMap>) -> Self {
        let lookup: HashMap<MonotoneMap, usize> = objects.iter().cloned().enumerate().map(|(k, phi)| (phi, k)).collect();
        let mut morphisms = Vec::new();
        for (s, phi) in objects.iter().enumerate() {
            for (t, phi2) in objects.iter().enumerate() {
                for alpha in enumerate_monotone(phi.source(), phi2.source()) {
                    let composite = compose_monotone(phi2, &alpha).expect("composable by construction");
                    if &composite == phi {
                        morphisms.push(IndexMorphism { source: s, target: t, alpha });
                    }
                }
            }
        }
        IndexCategory { n, m, objects, morphisms, lookup }
    }

    pub fn object_index(&self, phi: &MonotoneMap) -> Option<usize> {
        self.lookup.get(phi).copied()
    }

    pub fn non_identity_morphisms(&self) -> impl Iterator<Item = &IndexMorphism> {
        self.morphisms.iter().filter(|a| !(a.source == a.target && a.alpha.is_identity()))
    }
}

/// The category `D_m`: injective `φ : [i] → [m]`, `i ≤ n`, and all arrows between them.
pub fn build_index_category(n: usize, m: usize) -> IndexCategory {
    let objects = (0..=n.min(m)).flat_map(|i| enumerate_injective(i, m)).collect();
    IndexCategory::from_objects(n, m, objects)
}

/// The category `D′_m`: every monotone `φ : [i] → [m]`, `i ≤ n`.
pub fn build_full_index_category(n: usize, m: usize) -> IndexCategory {
    let objects = (0..=n).flat_map(|i| enumerate_monotone(i, m)).collect();
    IndexCategory::from_objects(n, m, objects)
}

pub(crate) fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, r| acc * (n - r) / (r + 1))
}
