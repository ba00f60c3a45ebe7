use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fincat::{FinMorphism, FinObject, GroupContext};
use crate::simplex::{enumerate_monotone, epi_mono_factorization, MonotoneMap};

#[derive(Debug)]
struct Inner {
    levels: Vec<FinObject>,
    // faces[n][i] : X_n → X_{n-1}; faces[0] is empty.
    faces: Vec<Vec<Vec<usize>>>,
    // degeneracies[n][i] : X_n → X_{n+1}, for n < N.
    degeneracies: Vec<Vec<Vec<usize>>>,
}

/// A simplicial object restricted to levels `0..=N`, stored by its face and
/// degeneracy tables. Cloning is cheap.
#[derive(Clone, Debug)]
pub struct TruncatedSimplicialObject {
    inner: Arc<Inner>,
}

/// Outcome of checking the simplicial identities.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimplicialCheck {
    pub valid: bool,
    pub failure: Option<String>,
}

impl SimplicialCheck {
    pub(crate) fn ok() -> Self {
        SimplicialCheck { valid: true, failure: None }
    }

    pub(crate) fn fail(msg: String) -> Self {
        SimplicialCheck { valid: false, failure: Some(msg) }
    }
}

fn compose(outer: &[usize], inner: &[usize]) -> Vec<usize> {
    inner.iter().map(|&x| outer[x]).collect()
}

impl TruncatedSimplicialObject {
    /// Checks table shapes and ranges; the simplicial identities are checked by
    /// [`TruncatedSimplicialObject::validate`].
    pub fn new(levels: Vec<FinObject>, faces: Vec<Vec<Vec<usize>>>, degeneracies: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        let n_top = levels.len().checked_sub(1).ok_or_else(|| Error::InvalidSimplicial("no levels".into()))?;
        let faces = if faces.len() == n_top { std::iter::once(Vec::new()).chain(faces).collect() } else { faces };
        if faces.len() != n_top + 1 || degeneracies.len() != n_top {
            return Err(Error::InvalidSimplicial(format!("expected faces for levels 1..={n_top} and degeneracies for levels 0..{n_top}")));
        }
        for x in &levels {
            if !x.same_context(&levels[0]) {
                return Err(Error::GroupMismatch("levels live over different groups".into()));
            }
        }
        for n in 1..=n_top {
            if faces[n].len() != n + 1 {
                return Err(Error::InvalidSimplicial(format!("level {n} needs {} face maps", n + 1)));
            }
            for (i, d) in faces[n].iter().enumerate() {
                FinMorphism::new(levels[n].clone(), levels[n - 1].clone(), d.clone())
                    .map_err(|e| Error::InvalidSimplicial(format!("face d_{i} on level {n}: {e}")))?;
            }
        }
        for n in 0..n_top {
            if degeneracies[n].len() != n + 1 {
                return Err(Error::InvalidSimplicial(format!("level {n} needs {} degeneracies", n + 1)));
            }
            for (i, s) in degeneracies[n].iter().enumerate() {
                FinMorphism::new(levels[n].clone(), levels[n + 1].clone(), s.clone())
                    .map_err(|e| Error::InvalidSimplicial(format!("degeneracy s_{i} on level {n}: {e}")))?;
            }
        }
        Ok(TruncatedSimplicialObject { inner: Arc::new(Inner { levels, faces, degeneracies }) })
    }

    pub(crate) fn from_tables_unchecked(levels: Vec<FinObject>, faces: Vec<Vec<Vec<usize>>>, degeneracies: Vec<Vec<Vec<usize>>>) -> Self {
        TruncatedSimplicialObject { inner: Arc::new(Inner { levels, faces, degeneracies }) }
    }

    /// The constant object on `x`: every structure map is the identity.
    pub fn constant(x: &FinObject, truncation: usize) -> Self {
        let id: Vec<usize> = (0..x.size()).collect();
        let levels = vec![x.clone(); truncation + 1];
        let faces = (0..=truncation).map(|n| if n == 0 { Vec::new() } else { vec![id.clone(); n + 1] }).collect();
        let degeneracies = (0..truncation).map(|n| vec![id.clone(); n + 1]).collect();
        TruncatedSimplicialObject::from_tables_unchecked(levels, faces, degeneracies)
    }

    pub fn truncation(&self) -> usize {
        self.inner.levels.len() - 1
    }

    pub fn context(&self) -> GroupContext {
        self.inner.levels[0].context()
    }

    pub fn level(&self, n: usize) -> &FinObject {
        &self.inner.levels[n]
    }

    pub fn levels(&self) -> &[FinObject] {
        &self.inner.levels
    }

    pub fn level_sizes(&self) -> Vec<usize> {
        self.inner.levels.iter().map(FinObject::size).collect()
    }

    pub fn face(&self, n: usize, i: usize) -> &[usize] {
        &self.inner.faces[n][i]
    }

    pub fn degeneracy(&self, n: usize, i: usize) -> &[usize] {
        &self.inner.degeneracies[n][i]
    }

    pub(crate) fn face_tables(&self) -> &[Vec<Vec<usize>>] {
        &self.inner.faces
    }

    pub(crate) fn degeneracy_tables(&self) -> &[Vec<Vec<usize>>] {
        &self.inner.degeneracies
    }

    pub fn face_morphism(&self, n: usize, i: usize) -> FinMorphism {
        FinMorphism::new_unchecked(self.level(n).clone(), self.level(n - 1).clone(), self.face(n, i).to_vec())
    }

    pub fn degeneracy_morphism(&self, n: usize, i: usize) -> FinMorphism {
        FinMorphism::new_unchecked(self.level(n).clone(), self.level(n + 1).clone(), self.degeneracy(n, i).to_vec())
    }

    /// Restriction to levels `0..=n`.
    pub fn restrict(&self, n: usize) -> Self {
        assert!(n <= self.truncation());
        TruncatedSimplicialObject::from_tables_unchecked(
            self.inner.levels[..=n].to_vec(),
            self.inner.faces[..=n].to_vec(),
            self.inner.degeneracies[..n].to_vec(),
        )
    }

    /// The map `α* : X_j → X_i` for `α : [i] → [j]`.
    ///
    /// With `α = δ ∘ σ`, `α* = σ* ∘ δ*`, where `δ*` is a composite of faces and
    /// `σ*` a composite of degeneracies.
    pub fn structure_map(&self, alpha: &MonotoneMap) -> Result<Vec<usize>> {
        let (i, j) = (alpha.source(), alpha.target());
        let top = self.truncation();
        if i > top || j > top {
            return Err(Error::OutOfTruncation(format!("{alpha} with truncation {top}")));
        }
        let (sigma, delta) = epi_mono_factorization(alpha);
        let after_faces = self.pull_injective(&delta);
        let pull_sigma = self.pull_surjective(&sigma);
        Ok(compose(&pull_sigma, &after_faces))
    }

    pub fn structure_morphism(&self, alpha: &MonotoneMap) -> Result<FinMorphism> {
        let values = self.structure_map(alpha)?;
        Ok(FinMorphism::new_unchecked(self.level(alpha.target()).clone(), self.level(alpha.source()).clone(), values))
    }

    fn pull_injective(&self, delta: &MonotoneMap) -> Vec<usize> {
        let mut map: Vec<usize> = (0..self.level(delta.target()).size()).collect();
        let mut values = delta.values().to_vec();
        let mut target = delta.target();
        while values.len() < target + 1 {
            let s = (0..=target).rev().find(|v| !values.contains(v)).expect("a value is missing");
            map = compose(self.face(target, s), &map);
            for v in values.iter_mut() {
                if *v > s {
                    *v -= 1;
                }
            }
            target -= 1;
        }
        map
    }

    fn pull_surjective(&self, sigma: &MonotoneMap) -> Vec<usize> {
        let positions = sigma.repeated_positions();
        let Some(&t) = positions.first() else {
            return (0..self.level(sigma.target()).size()).collect();
        };
        let reduced: Vec<usize> = (0..sigma.source()).map(|x| if x <= t { sigma.apply(x) } else { sigma.apply(x + 1) }).collect();
        let reduced = MonotoneMap::from_parts_unchecked(reduced, sigma.target());
        let inner = self.pull_surjective(&reduced);
        compose(self.degeneracy(sigma.source() - 1, t), &inner)
    }

    /// Checks all simplicial identities within the truncation.
    pub fn validate(&self) -> SimplicialCheck {
        let top = self.truncation();
        let d = |n: usize, i: usize| self.face(n, i);
        let s = |n: usize, i: usize| self.degeneracy(n, i);
        let differ = |a: &[usize], b: &[usize]| a.iter().zip(b).position(|(x, y)| x != y);
        for n in 2..=top {
            for j in 1..=n {
                for i in 0..j {
                    let left = compose(d(n - 1, i), d(n, j));
                    let right = compose(d(n - 1, j - 1), d(n, i));
                    if let Some(x) = differ(&left, &right) {
                        return SimplicialCheck::fail(format!("d_{i} d_{j} = d_{} d_{i} fails on level {n} at point {x}", j - 1));
                    }
                }
            }
        }
        for n in 0..top {
            for j in 0..=n {
                let sj = s(n, j);
                for i in 0..=n + 1 {
                    let left = compose(d(n + 1, i), sj);
                    let (right, name) = if i < j {
                        (compose(s(n - 1, j - 1), d(n, i)), format!("d_{i} s_{j} = s_{} d_{i}", j - 1))
                    } else if i == j || i == j + 1 {
                        ((0..self.level(n).size()).collect(), format!("d_{i} s_{j} = id"))
                    } else {
                        (compose(s(n - 1, j), d(n, i - 1)), format!("d_{i} s_{j} = s_{j} d_{}", i - 1))
                    };
                    if let Some(x) = differ(&left, &right) {
                        return SimplicialCheck::fail(format!("{name} fails on level {n} at point {x}"));
                    }
                }
            }
        }
        for n in 0..top.saturating_sub(1) {
            for j in 0..=n {
                for i in 0..=j {
                    let left = compose(s(n + 1, i), s(n, j));
                    let right = compose(s(n + 1, j + 1), s(n, i));
                    if let Some(x) = differ(&left, &right) {
                        return SimplicialCheck::fail(format!("s_{i} s_{j} = s_{} s_{i} fails on level {n} at point {x}", j + 1));
                    }
                }
            }
        }
        SimplicialCheck::ok()
    }

    /// Points of level `n` in the image of some degeneracy.
    pub fn degenerate_points(&self, n: usize) -> Vec<bool> {
        let mut deg = vec![false; self.level(n).size()];
        if n > 0 {
            for s in &self.inner.degeneracies[n - 1] {
                for &y in s {
                    deg[y] = true;
                }
            }
        }
        deg
    }

    /// Same data with one face table replaced.
    pub fn with_face(&self, n: usize, i: usize, values: Vec<usize>) -> Result<Self> {
        let mut faces = self.inner.faces.clone();
        faces[n][i] = values;
        TruncatedSimplicialObject::new(self.inner.levels.clone(), faces, self.inner.degeneracies.clone())
    }
}

/// A truncated simplicial object with an augmentation `X_0 → base`.
#[derive(Clone, Debug)]
pub struct AugmentedSimplicialObject {
    body: TruncatedSimplicialObject,
    base: FinObject,
    augmentation: Arc<[usize]>,
}

impl AugmentedSimplicialObject {
    pub fn new(body: TruncatedSimplicialObject, base: FinObject, augmentation: Vec<usize>) -> Result<Self> {
        FinMorphism::new(body.level(0).clone(), base.clone(), augmentation.clone())
            .map_err(|e| Error::InvalidSimplicial(format!("augmentation: {e}")))?;
        Ok(AugmentedSimplicialObject { body, base, augmentation: augmentation.into() })
    }

    pub(crate) fn new_unchecked(body: TruncatedSimplicialObject, base: FinObject, augmentation: Vec<usize>) -> Self {
        AugmentedSimplicialObject { body, base, augmentation: augmentation.into() }
    }

    /// Augmentation to the terminal object.
    pub fn over_point(body: TruncatedSimplicialObject) -> Self {
        let base = FinObject::point(&body.context());
        let aug = vec![0; body.level(0).size()];
        AugmentedSimplicialObject::new_unchecked(body, base, aug)
    }

    /// The constant object on `base`, augmented by the identity.
    pub fn constant(base: &FinObject, truncation: usize) -> Self {
        let body = TruncatedSimplicialObject::constant(base, truncation);
        AugmentedSimplicialObject::new_unchecked(body, base.clone(), (0..base.size()).collect())
    }

    pub fn body(&self) -> &TruncatedSimplicialObject {
        &self.body
    }

    pub fn base(&self) -> &FinObject {
        &self.base
    }

    pub fn augmentation(&self) -> &[usize] {
        &self.augmentation
    }

    pub fn augmentation_morphism(&self) -> FinMorphism {
        FinMorphism::new_unchecked(self.body.level(0).clone(), self.base.clone(), self.augmentation.to_vec())
    }

    /// The map `X_n → base` through any vertex of `[n]`.
    pub fn level_augmentation(&self, n: usize) -> Vec<usize> {
        let vertex = MonotoneMap::constant(0, n, 0);
        let v = self.body.structure_map(&vertex).expect("vertex within truncation");
        v.into_iter().map(|x| self.augmentation[x]).collect()
    }

    pub fn truncation(&self) -> usize {
        self.body.truncation()
    }

    pub fn level(&self, n: usize) -> &FinObject {
        self.body.level(n)
    }

    pub fn restrict(&self, n: usize) -> Self {
        AugmentedSimplicialObject { body: self.body.restrict(n), base: self.base.clone(), augmentation: self.augmentation.clone() }
    }

    pub fn validate(&self) -> SimplicialCheck {
        let check = self.body.validate();
        if !check.valid {
            return check;
        }
        if self.truncation() >= 1 {
            let aug = &self.augmentation;
            let d0 = self.body.face(1, 0);
            let d1 = self.body.face(1, 1);
            if let Some(x) = (0..d0.len()).find(|&x| aug[d0[x]] != aug[d1[x]]) {
                return SimplicialCheck::fail(format!("augmentation: a d_0 ≠ a d_1 at point {x} of level 1"));
            }
        }
        SimplicialCheck::ok()
    }
}

/// A map of augmented objects over the same base, levelwise `f_n : X_n → Y_n`.
#[derive(Clone, Debug)]
pub struct SimplicialMorphism {
    pub source: AugmentedSimplicialObject,
    pub target: AugmentedSimplicialObject,
    pub components: Vec<Vec<usize>>,
}

impl SimplicialMorphism {
    pub fn identity(x: &AugmentedSimplicialObject) -> Self {
        let components = x.body.levels().iter().map(|l| (0..l.size()).collect()).collect();
        SimplicialMorphism { source: x.clone(), target: x.clone(), components }
    }

    pub fn component(&self, n: usize) -> FinMorphism {
        FinMorphism::new_unchecked(self.source.level(n).clone(), self.target.level(n).clone(), self.components[n].clone())
    }

    pub fn truncation(&self) -> usize {
        self.components.len() - 1
    }

    /// `self ∘ f`.
    pub fn after(&self, f: &SimplicialMorphism) -> Result<SimplicialMorphism> {
        if f.components.len() != self.components.len() {
            return Err(Error::Composition("simplicial morphisms with different truncations".into()));
        }
        let components = self.components.iter().zip(&f.components).map(|(a, b)| compose(a, b)).collect();
        Ok(SimplicialMorphism { source: f.source.clone(), target: self.target.clone(), components })
    }

    pub fn is_levelwise_bijection(&self) -> bool {
        (0..self.components.len()).all(|n| self.component(n).is_bijective())
    }

    /// First level at which the component is not a bijection.
    pub fn first_non_bijective_level(&self) -> Option<usize> {
        (0..self.components.len()).find(|&n| !self.component(n).is_bijective())
    }

    /// Checks ranges, equivariance, compatibility with faces, degeneracies and augmentations.
    pub fn validate(&self) -> SimplicialCheck {
        let (x, y) = (self.source.body(), self.target.body());
        let top = self.components.len() - 1;
        if top > x.truncation() || top > y.truncation() {
            return SimplicialCheck::fail("components beyond truncation".into());
        }
        for n in 0..=top {
            if let Err(e) = FinMorphism::new(x.level(n).clone(), y.level(n).clone(), self.components[n].clone()) {
                return SimplicialCheck::fail(format!("component {n}: {e}"));
            }
        }
        for n in 1..=top {
            for i in 0..=n {
                if compose(y.face(n, i), &self.components[n]) != compose(&self.components[n - 1], x.face(n, i)) {
                    return SimplicialCheck::fail(format!("does not commute with d_{i} on level {n}"));
                }
            }
        }
        for n in 0..top {
            for i in 0..=n {
                if compose(y.degeneracy(n, i), &self.components[n]) != compose(&self.components[n + 1], x.degeneracy(n, i)) {
                    return SimplicialCheck::fail(format!("does not commute with s_{i} on level {n}"));
                }
            }
        }
        if self.source.base() != self.target.base() {
            return SimplicialCheck::fail("source and target have different bases".into());
        }
        let (ax, ay) = (self.source.augmentation(), self.target.augmentation());
        if (0..ax.len()).any(|p| ay[self.components[0][p]] != ax[p]) {
            return SimplicialCheck::fail("does not commute with the augmentations".into());
        }
        SimplicialCheck::ok()
    }
}

/// Structure maps `α* : X_j → X_i` for every `α : [i] → [j]` with `i, j ≤ bound`.
pub(crate) struct StructureMaps {
    maps: HashMap<MonotoneMap, Vec<usize>>,
}

impl StructureMaps {
    pub(crate) fn new(x: &TruncatedSimplicialObject, bound: usize) -> Self {
        let mut maps = HashMap::new();
        for i in 0..=bound {
            for j in 0..=bound {
                for alpha in enumerate_monotone(i, j) {
                    let m = x.structure_map(&alpha).expect("within bound");
                    maps.insert(alpha, m);
                }
            }
        }
        StructureMaps { maps }
    }

    pub(crate) fn get(&self, alpha: &MonotoneMap) -> &[usize] {
        &self.maps[alpha]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplex::MonotoneMap;
    use crate::simplicial::nerve::cech_nerve;

    fn pair_nerve(n: usize) -> AugmentedSimplicialObject {
        cech_nerve(&FinMorphism::to_point(&FinObject::plain(2)), n)
    }

    #[test]
    fn constant_point_is_valid() {
        let c = TruncatedSimplicialObject::constant(&FinObject::plain(1), 4);
        assert!(c.validate().valid);
    }

    #[test]
    fn nerve_is_valid() {
        assert!(pair_nerve(3).validate().valid);
    }

    #[test]
    fn corrupted_face_is_reported() {
        let x = pair_nerve(2);
        let mut d = x.body().face(2, 1).to_vec();
        d.swap(1, 2);
        let bad = x.body().with_face(2, 1, d).unwrap();
        let check = bad.validate();
        assert!(!check.valid);
        assert!(check.failure.unwrap().contains("d_"));
    }

    #[test]
    fn structure_map_of_generators() {
        let x = pair_nerve(3);
        let b = x.body();
        assert_eq!(b.structure_map(&MonotoneMap::identity(2)).unwrap(), (0..8).collect::<Vec<_>>());
        for i in 0..=2 {
            assert_eq!(b.structure_map(&MonotoneMap::coface(2, i)).unwrap(), b.face(2, i));
            assert_eq!(b.structure_map(&MonotoneMap::codegeneracy(1, i.min(1))).unwrap(), b.degeneracy(1, i.min(1)));
        }
        assert!(b.structure_map(&MonotoneMap::identity(4)).is_err());
    }

    #[test]
    fn structure_maps_are_functorial() {
        let x = pair_nerve(4);
        let b = x.body();
        for i in 0..=4 {
            for j in 0..=4 {
                for k in 0..=4 {
                    for alpha in enumerate_monotone(i, j) {
                        for beta in enumerate_monotone(j, k) {
                            let ba = beta.after(&alpha).unwrap();
                            let left = b.structure_map(&ba).unwrap();
                            let right = compose(&b.structure_map(&alpha).unwrap(), &b.structure_map(&beta).unwrap());
                            assert_eq!(left, right, "α = {alpha}, β = {beta}");
                        }
                    }
                }
            }
        }
    }
}
