//! The bisimplicial object `Z_{p,q} = K_p ×_{L_p} ⋯ ×_{L_p} K_p` of a map `f : K → L`.
//!
//! Column `p` is the Čech nerve of `f_p`; row `q` is the levelwise
//! `(q+1)`-fold fiber power `[K/L]^{q+1}`, augmented over the common base.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fincat::{is_cover, CoverMode, CoverReport};

use super::nerve::{cech_nerve, fiber_power, FiberPower};
use super::object::{AugmentedSimplicialObject, SimplicialCheck, SimplicialMorphism, TruncatedSimplicialObject};

#[derive(Clone, Debug)]
pub struct Bisimplicial {
    pub map: SimplicialMorphism,
    pub p_max: usize,
    pub q_max: usize,
    /// `cells[p][q]` is the `(q+1)`-fold fiber power of `f_p`.
    pub cells: Vec<Vec<FiberPower>>,
    /// `rows[q]`, truncated at `p_max`.
    pub rows: Vec<AugmentedSimplicialObject>,
    /// `columns[p] = cech_nerve(f_p)`, truncated at `q_max`.
    pub columns: Vec<AugmentedSimplicialObject>,
}

fn coordinatewise(cells_from: &FiberPower, cells_to: &FiberPower, map: &[usize]) -> Vec<usize> {
    cells_from
        .tuples
        .iter()
        .map(|t| {
            let image: Vec<usize> = t.iter().map(|&k| map[k]).collect();
            cells_to.index_of(&image).expect("structure maps of K preserve fibers over L")
        })
        .collect()
}

impl Bisimplicial {
    /// The vertical face `d_i : Z_{•,q} → Z_{•,q−1}` (deleting coordinate `i`).
    pub fn vertical_face(&self, q: usize, i: usize) -> SimplicialMorphism {
        let components = (0..=self.p_max).map(|p| self.columns[p].body().face(q, i).to_vec()).collect();
        SimplicialMorphism { source: self.rows[q].clone(), target: self.rows[q - 1].clone(), components }
    }

    /// The vertical degeneracy `s_i : Z_{•,q} → Z_{•,q+1}` (repeating coordinate `i`).
    pub fn vertical_degeneracy(&self, q: usize, i: usize) -> SimplicialMorphism {
        let components = (0..=self.p_max).map(|p| self.columns[p].body().degeneracy(q, i).to_vec()).collect();
        SimplicialMorphism { source: self.rows[q].clone(), target: self.rows[q + 1].clone(), components }
    }

    /// The vertical augmentation `Z_{•,0} → L` induced by `f`.
    pub fn augmentation(&self) -> SimplicialMorphism {
        let components = (0..=self.p_max).map(|p| self.map.components[p].clone()).collect();
        SimplicialMorphism { source: self.rows[0].clone(), target: self.map.target.restrict(self.p_max), components }
    }

    /// Rows and columns are simplicial, and every vertical map commutes with every horizontal one.
    pub fn verify(&self) -> SimplicialCheck {
        for (q, row) in self.rows.iter().enumerate() {
            let c = row.validate();
            if !c.valid {
                return SimplicialCheck::fail(format!("row {q}: {}", c.failure.unwrap_or_default()));
            }
        }
        for (p, col) in self.columns.iter().enumerate() {
            let c = col.validate();
            if !c.valid {
                return SimplicialCheck::fail(format!("column {p}: {}", c.failure.unwrap_or_default()));
            }
        }
        for q in 0..=self.q_max {
            for i in 0..=q {
                if q > 0 {
                    let c = self.vertical_face(q, i).validate();
                    if !c.valid {
                        return SimplicialCheck::fail(format!("vertical d_{i} from row {q}: {}", c.failure.unwrap_or_default()));
                    }
                }
                if q < self.q_max {
                    let c = self.vertical_degeneracy(q, i).validate();
                    if !c.valid {
                        return SimplicialCheck::fail(format!("vertical s_{i} from row {q}: {}", c.failure.unwrap_or_default()));
                    }
                }
            }
        }
        let c = self.augmentation().validate();
        if !c.valid {
            return SimplicialCheck::fail(format!("augmentation: {}", c.failure.unwrap_or_default()));
        }
        SimplicialCheck::ok()
    }
}

pub fn bisimplicial_fiber_powers(f: &SimplicialMorphism, p_max: usize, q_max: usize) -> Result<Bisimplicial> {
    if p_max > f.truncation() {
        return Err(Error::OutOfTruncation(format!("P = {p_max} above truncation {}", f.truncation())));
    }
    let check = f.validate();
    if !check.valid {
        return Err(Error::InvalidInput(check.failure.unwrap_or_default()));
    }
    let k = f.source.body();
    let comps: Vec<_> = (0..=p_max).map(|p| f.component(p)).collect();
    let cells: Vec<Vec<FiberPower>> = comps.iter().map(|fp| (0..=q_max).map(|q| fiber_power(fp, q + 1)).collect()).collect();
    let columns: Vec<AugmentedSimplicialObject> = comps.iter().map(|fp| cech_nerve(fp, q_max)).collect();

    let mut rows = Vec::with_capacity(q_max + 1);
    for q in 0..=q_max {
        let levels = (0..=p_max).map(|p| cells[p][q].object.clone()).collect();
        let faces = (0..=p_max)
            .map(|p| {
                if p == 0 {
                    return Vec::new();
                }
                (0..=p).map(|i| coordinatewise(&cells[p][q], &cells[p - 1][q], k.face(p, i))).collect()
            })
            .collect();
        let degeneracies =
            (0..p_max).map(|p| (0..=p).map(|i| coordinatewise(&cells[p][q], &cells[p + 1][q], k.degeneracy(p, i))).collect()).collect();
        let body = TruncatedSimplicialObject::from_tables_unchecked(levels, faces, degeneracies);
        let aug = cells[0][q].tuples.iter().map(|t| f.source.augmentation()[t[0]]).collect();
        rows.push(AugmentedSimplicialObject::new_unchecked(body, f.source.base().clone(), aug));
    }
    Ok(Bisimplicial { map: f.clone(), p_max, q_max, cells, rows, columns })
}

/// Outcome of the levelwise cover check for a map that is an isomorphism below `n`.
#[derive(Clone, Debug, Serialize)]
pub struct LevelwiseCover {
    pub n: usize,
    pub hypotheses: bool,
    pub failed_hypothesis: Option<String>,
    pub levels: Vec<CoverReport>,
}

impl LevelwiseCover {
    pub fn all_covers(&self) -> bool {
        self.levels.iter().all(|r| r.is_cover)
    }
}

/// Checks the hypotheses (iso below `n`, cover at `n`, both sides `n`-coskeletal)
/// and reports whether every `K_m → L_m` is a cover.
pub fn levelwise_cover_check(f: &SimplicialMorphism, n: usize, mode: CoverMode) -> Result<LevelwiseCover> {
    use super::coskeleton::is_coskeletal;
    let top = f.truncation();
    if n > top {
        return Err(Error::OutOfTruncation(format!("n = {n} above truncation {top}")));
    }
    let levels: Vec<CoverReport> = (0..=top).map(|m| is_cover(&f.component(m), mode)).collect();
    let failed = if let Some(m) = (0..n).find(|&m| !f.component(m).is_bijective()) {
        Some(format!("not an isomorphism in level {m}"))
    } else if !levels[n].is_cover {
        Some(format!("not a cover in level {n}"))
    } else if !is_coskeletal(&f.source, n)? {
        Some(format!("source is not {n}-coskeletal"))
    } else if !is_coskeletal(&f.target, n)? {
        Some(format!("target is not {n}-coskeletal"))
    } else {
        None
    };
    Ok(LevelwiseCover { n, hypotheses: failed.is_none(), failed_hypothesis: failed, levels })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{finite_limit, Diagram, FinMorphism, FinObject};

    #[test]
    fn identity_grid_is_diagonal() {
        let k = cech_nerve(&FinMorphism::to_point(&FinObject::plain(2)), 2);
        let z = bisimplicial_fiber_powers(&SimplicialMorphism::identity(&k), 2, 2).unwrap();
        assert!(z.verify().valid);
        for p in 0..=2 {
            for q in 0..=2 {
                assert_eq!(z.cells[p][q].object.size(), k.level(p).size());
            }
        }
    }

    #[test]
    fn constant_pair_over_point() {
        let k = AugmentedSimplicialObject::over_point(TruncatedSimplicialObject::constant(&FinObject::plain(2), 2));
        let l = AugmentedSimplicialObject::constant(&FinObject::plain(1), 2);
        let f = SimplicialMorphism { source: k.clone(), target: l, components: vec![vec![0, 0]; 3] };
        let z = bisimplicial_fiber_powers(&f, 2, 3).unwrap();
        assert!(z.verify().valid);
        for p in 0..=2 {
            for q in 0..=3 {
                assert_eq!(z.cells[p][q].object.size(), 1 << (q + 1));
            }
        }
    }

    #[test]
    fn rows_match_limits() {
        let x = cech_nerve(&FinMorphism::new(FinObject::plain(3), FinObject::plain(2), vec![0, 0, 1]).unwrap(), 2);
        let base = AugmentedSimplicialObject::constant(x.base(), 2);
        let f = SimplicialMorphism { source: x.clone(), target: base, components: (0..=2).map(|m| x.level_augmentation(m)).collect() };
        let z = bisimplicial_fiber_powers(&f, 2, 2).unwrap();
        assert!(z.verify().valid);
        for p in 0..=2 {
            for q in 0..=2 {
                let mut d = Diagram::new(None);
                let target = d.add_object(f.target.level(p).clone());
                for _ in 0..=q {
                    let s = d.add_object(x.level(p).clone());
                    d.add_arrow(s, target, f.components[p].clone());
                }
                let lim = finite_limit(&d).unwrap();
                let tuples: Vec<Vec<usize>> = lim.tuples.iter().map(|t| t[1..].to_vec()).collect();
                assert_eq!(tuples, z.cells[p][q].tuples);
            }
        }
    }

    #[test]
    fn levelwise_cover_on_a_refinement() {
        let levels = vec![FinObject::plain(1), FinObject::plain(2)];
        let faces = vec![vec![], vec![vec![0, 0], vec![0, 0]]];
        let body = TruncatedSimplicialObject::new(levels, faces, vec![vec![vec![0]]]).unwrap();
        let x = super::super::coskeleton::coskeleton(&AugmentedSimplicialObject::over_point(body), 1, 3).unwrap().object;
        let t = super::super::hypercover::tower(&x, 1).unwrap();
        let r = levelwise_cover_check(&t.stages[0].v, 1, CoverMode::Cdh).unwrap();
        assert!(r.hypotheses, "{:?}", r.failed_hypothesis);
        assert!(r.all_covers());
    }
}
