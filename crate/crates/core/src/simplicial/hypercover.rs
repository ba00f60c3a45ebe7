use serde::Serialize;

use crate::error::{Error, Result};
use crate::fincat::{is_cover, CoverMode, CoverReport, FinMorphism, FinObject};

use super::coskeleton::{coskeleton, Coskeleton};
use super::object::{AugmentedSimplicialObject, SimplicialMorphism};

/// The canonical map `X_{n+1} → (cosk_n(X/base))_{n+1}`.
pub fn matching_map(x: &AugmentedSimplicialObject, n: usize) -> Result<FinMorphism> {
    let m = n + 1;
    if m > x.truncation() {
        return Err(Error::OutOfTruncation(format!("level {m} of an object truncated at {}", x.truncation())));
    }
    let cosk = coskeleton(x, n, m)?;
    let enc = cosk.encoding(m).expect("level above n is encoded");
    let body = x.body();
    let pulls: Vec<Vec<usize>> = enc.index.objects.iter().map(|phi| body.structure_map(phi)).collect::<Result<_>>()?;
    let values = (0..body.level(m).size())
        .map(|p| {
            let t: Vec<usize> = pulls.iter().map(|pull| pull[p]).collect();
            enc.index_of(&t).expect("φ*-coordinates form a matching tuple")
        })
        .collect();
    Ok(FinMorphism::new_unchecked(body.level(m).clone(), cosk.object.level(m).clone(), values))
}

/// Cover status of one level: `-1` is `X_0 → base`, `n ≥ 0` is `X_{n+1} → (cosk_n)_{n+1}`.
#[derive(Clone, Debug, Serialize)]
pub struct LevelCover {
    pub level: isize,
    pub source_size: usize,
    pub target_size: usize,
    pub report: CoverReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct HypercoverReport {
    pub mode: CoverMode,
    pub truncation: usize,
    pub is_hypercover: bool,
    pub levels: Vec<LevelCover>,
}

impl HypercoverReport {
    pub fn first_failure(&self) -> Option<isize> {
        self.levels.iter().find(|l| !l.report.is_cover).map(|l| l.level)
    }
}

/// Checks `X_0 → base` and `X_{n+1} → (cosk_n(X/base))_{n+1}` for `0 ≤ n < N`.
pub fn is_hypercover(x: &AugmentedSimplicialObject, mode: CoverMode, n_max: usize) -> Result<HypercoverReport> {
    if n_max > x.truncation() {
        return Err(Error::OutOfTruncation(format!("hypercover check to {n_max} on an object truncated at {}", x.truncation())));
    }
    let mut levels = Vec::with_capacity(n_max + 1);
    let aug = x.augmentation_morphism();
    levels.push(LevelCover { level: -1, source_size: aug.source().size(), target_size: aug.target().size(), report: is_cover(&aug, mode) });
    for n in 0..n_max {
        let f = matching_map(x, n)?;
        levels.push(LevelCover { level: n as isize, source_size: f.source().size(), target_size: f.target().size(), report: is_cover(&f, mode) });
    }
    let is_hypercover = levels.iter().all(|l| l.report.is_cover);
    Ok(HypercoverReport { mode, truncation: n_max, is_hypercover, levels })
}

/// One stage `X^n = cosk_n(X/base)` of the tower with `v_n : X^n → X^{n−1}`.
#[derive(Clone, Debug)]
pub struct TowerStage {
    pub n: usize,
    pub coskeleton: Coskeleton,
    /// For `n = 0` the target is the constant object on the base.
    pub v: SimplicialMorphism,
}

#[derive(Clone, Debug)]
pub struct Tower {
    /// Stages for `n = N, N−1, …, 0`.
    pub stages: Vec<TowerStage>,
    /// The unit `u_N : X → X^N`.
    pub unit: SimplicialMorphism,
}

/// Point of level `m` of `cosk_n` mapped to level `m` of `cosk_{n−1}`.
fn restrict_point(x: &AugmentedSimplicialObject, hi: &Coskeleton, lo: &Coskeleton, m: usize, p: usize) -> usize {
    let lo_enc = lo.encoding(m).expect("m > n − 1 is encoded");
    let body = x.body();
    let tuple: Vec<usize> = match hi.encoding(m) {
        None => lo_enc.index.objects.iter().map(|phi| body.structure_map(phi).expect("in range")[p]).collect(),
        Some(hi_enc) => {
            lo_enc.index.objects.iter().map(|phi| hi_enc.tuples[p][hi_enc.index.object_index(phi).expect("lower objects are included")]).collect()
        }
    };
    lo_enc.index_of(&tuple).expect("restriction lands in the lower coskeleton")
}

/// The tower `X → X^N → ⋯ → X^0 → base` truncated at `X.N`.
pub fn tower(x: &AugmentedSimplicialObject, n_max: usize) -> Result<Tower> {
    let top = x.truncation();
    if n_max > top {
        return Err(Error::OutOfTruncation(format!("tower to {n_max} on an object truncated at {top}")));
    }
    let cosks: Vec<Coskeleton> = (0..=n_max).map(|n| coskeleton(x, n, top)).collect::<Result<_>>()?;
    let mut stages = Vec::with_capacity(n_max + 1);
    for n in (0..=n_max).rev() {
        let hi = &cosks[n];
        let v = if n == 0 {
            let base = AugmentedSimplicialObject::constant(x.base(), top);
            let components = (0..=top).map(|m| hi.object.level_augmentation(m)).collect();
            SimplicialMorphism { source: hi.object.clone(), target: base, components }
        } else {
            let lo = &cosks[n - 1];
            let components = (0..=top)
                .map(|m| {
                    if m < n {
                        (0..hi.object.level(m).size()).collect()
                    } else {
                        (0..hi.object.level(m).size()).map(|p| restrict_point(x, hi, lo, m, p)).collect()
                    }
                })
                .collect();
            SimplicialMorphism { source: hi.object.clone(), target: lo.object.clone(), components }
        };
        stages.push(TowerStage { n, coskeleton: hi.clone(), v });
    }
    let hi = &cosks[n_max];
    let components = (0..=top)
        .map(|m| match hi.encoding(m) {
            None => (0..x.level(m).size()).collect(),
            Some(enc) => {
                let pulls: Vec<Vec<usize>> = enc.index.objects.iter().map(|phi| x.body().structure_map(phi).expect("in range")).collect();
                (0..x.level(m).size()).map(|p| enc.index_of(&pulls.iter().map(|pull| pull[p]).collect::<Vec<_>>()).expect("unit lands")).collect()
            }
        })
        .collect();
    let unit = SimplicialMorphism { source: x.clone(), target: hi.object.clone(), components };
    Ok(Tower { stages, unit })
}

/// Replaces the top level `n` of a plain-set object by the subset `keep`,
/// restricting the faces out of it and requiring the degeneracies into it to land inside.
pub fn restrict_level(x: &AugmentedSimplicialObject, n: usize, keep: &[usize]) -> Result<AugmentedSimplicialObject> {
    let body = x.body();
    if n == 0 || n != body.truncation() {
        return Err(Error::InvalidInput(format!("only the top level can be restricted, not {n}")));
    }
    let new_index: Vec<Option<usize>> = {
        let mut v = vec![None; body.level(n).size()];
        for (k, &p) in keep.iter().enumerate() {
            v[p] = Some(k);
        }
        v
    };
    let mut levels = body.levels().to_vec();
    levels[n] = FinObject::plain(keep.len());
    let faces: Vec<Vec<Vec<usize>>> = (0..=body.truncation())
        .map(|m| {
            (0..if m == 0 { 0 } else { m + 1 })
                .map(|i| {
                    let d = body.face(m, i);
                    if m == n {
                        keep.iter().map(|&p| d[p]).collect()
                    } else {
                        d.to_vec()
                    }
                })
                .collect()
        })
        .collect();
    let mut degeneracies = Vec::with_capacity(body.truncation());
    for m in 0..body.truncation() {
        let mut row = Vec::with_capacity(m + 1);
        for i in 0..=m {
            let s = body.degeneracy(m, i);
            row.push(if m == n {
                keep.iter().map(|&p| s[p]).collect()
            } else if m + 1 == n {
                s.iter()
                    .map(|&q| new_index[q].ok_or_else(|| Error::InvalidInput("degeneracies must land in the kept subset".into())))
                    .collect::<Result<Vec<usize>>>()?
            } else {
                s.to_vec()
            });
        }
        degeneracies.push(row);
    }
    let new_body = super::object::TruncatedSimplicialObject::new(levels, faces, degeneracies)?;
    AugmentedSimplicialObject::new(new_body, x.base().clone(), x.augmentation().to_vec())
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::fincat::Group;
    use crate::simplicial::nerve::cech_nerve;
    use crate::simplicial::object::TruncatedSimplicialObject;

    #[test]
    fn nerve_of_surjection_is_a_cdh_hypercover() {
        let f = FinMorphism::new(FinObject::plain(3), FinObject::plain(2), vec![0, 1, 1]).unwrap();
        let x = cech_nerve(&f, 3);
        let r = is_hypercover(&x, CoverMode::Cdh, 3).unwrap();
        assert!(r.is_hypercover);
        for n in 0..3 {
            assert!(matching_map(&x, n).unwrap().is_bijective());
        }
    }

    #[test]
    fn free_orbit_nerve_is_ldh_not_cdh() {
        let g = Arc::new(Group::cyclic(2).unwrap());
        let x = cech_nerve(&FinMorphism::to_point(&FinObject::cosets(g, &[0]).unwrap()), 2);
        let cdh = is_hypercover(&x, CoverMode::Cdh, 2).unwrap();
        assert!(!cdh.is_hypercover);
        assert_eq!(cdh.first_failure(), Some(-1));
        assert!(is_hypercover(&x, CoverMode::ldh(3).unwrap(), 2).unwrap().is_hypercover);
    }

    #[test]
    fn shrunken_level_fails_at_one() {
        let x = cech_nerve(&FinMorphism::to_point(&FinObject::plain(2)), 2);
        // Keep the degenerate 2-simplices only.
        let degenerate = x.body().degenerate_points(2);
        let keep: Vec<usize> = (0..8).filter(|&p| degenerate[p]).collect();
        assert!(keep.len() < 8);
        let y = restrict_level(&x, 2, &keep).unwrap();
        assert!(y.validate().valid);
        let r = is_hypercover(&y, CoverMode::Cdh, 2).unwrap();
        assert_eq!(r.first_failure(), Some(1));
    }

    #[test]
    fn empty_cover_of_nonempty_base() {
        let x = AugmentedSimplicialObject::new(TruncatedSimplicialObject::constant(&FinObject::plain(0), 1), FinObject::plain(1), vec![]).unwrap();
        assert_eq!(is_hypercover(&x, CoverMode::Cdh, 1).unwrap().first_failure(), Some(-1));
    }

    #[test]
    fn tower_of_a_nerve() {
        let x = cech_nerve(&FinMorphism::to_point(&FinObject::plain(2)), 2);
        let t = tower(&x, 2).unwrap();
        assert_eq!(t.stages.iter().map(|s| s.n).collect::<Vec<_>>(), vec![2, 1, 0]);
        for s in &t.stages {
            assert!(s.v.validate().valid, "v_{}", s.n);
            if s.n > 0 {
                assert!(s.v.is_levelwise_bijection());
            }
        }
        assert!(t.unit.is_levelwise_bijection());
    }

    #[test]
    fn tower_of_a_constant_object() {
        let x = AugmentedSimplicialObject::constant(&FinObject::plain(3), 3);
        let t = tower(&x, 3).unwrap();
        assert!(t.stages.iter().all(|s| s.v.is_levelwise_bijection()));
    }

    #[test]
    fn one_level_refinement() {
        // X_0 = {a}, X_1 = {s_0 a, e}; its 1-coskeleton refines the nerve of a point in level 1.
        let levels = vec![FinObject::plain(1), FinObject::plain(2)];
        let faces = vec![vec![], vec![vec![0, 0], vec![0, 0]]];
        let degeneracies = vec![vec![vec![0]]];
        let body = TruncatedSimplicialObject::new(levels, faces, degeneracies).unwrap();
        let x1 = AugmentedSimplicialObject::over_point(body);
        let x = coskeleton(&x1, 1, 3).unwrap().object;
        assert!(x.validate().valid);
        let t = tower(&x, 1).unwrap();
        let v1 = &t.stages[0].v;
        assert_eq!(t.stages[0].n, 1);
        assert!(v1.validate().valid);
        assert!(v1.component(0).is_bijective());
        assert!(!v1.component(1).is_bijective());
        assert!(is_cover(&v1.component(1), CoverMode::Cdh).is_cover);
    }
}
