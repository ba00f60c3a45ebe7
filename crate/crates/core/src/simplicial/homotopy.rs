//! Simplicial homotopies as families `h_τ : X_j → Y_j` indexed by `τ : [j] → [1]`.

use crate::error::{Error, Result};
use crate::simplex::{enumerate_monotone, interval_maps, MonotoneMap};

use super::coskeleton::coskeleton_unit;
use super::object::{AugmentedSimplicialObject, SimplicialCheck, SimplicialMorphism, StructureMaps};

/// Position of `τ` in [`interval_maps`]: the number of values equal to 1.
pub fn interval_index(tau: &MonotoneMap) -> usize {
    tau.values().iter().filter(|&&v| v == 1).count()
}

#[derive(Clone, Debug)]
pub struct SimplicialHomotopy {
    pub source: AugmentedSimplicialObject,
    pub target: AugmentedSimplicialObject,
    /// `data[j][k]` is `h_τ` for `τ = interval_maps(j)[k]`.
    pub data: Vec<Vec<Vec<usize>>>,
}

impl SimplicialHomotopy {
    /// All `h_τ` equal to `f`.
    pub fn constant(f: &SimplicialMorphism) -> Self {
        let data = f.components.iter().enumerate().map(|(j, c)| vec![c.clone(); j + 2]).collect();
        SimplicialHomotopy { source: f.source.clone(), target: f.target.clone(), data }
    }

    pub fn truncation(&self) -> usize {
        self.data.len() - 1
    }

    pub fn h(&self, tau: &MonotoneMap) -> &[usize] {
        &self.data[tau.source()][interval_index(tau)]
    }

    fn endpoint(&self, last: bool) -> SimplicialMorphism {
        let components = self.data.iter().map(|row| if last { row[row.len() - 1].clone() } else { row[0].clone() }).collect();
        SimplicialMorphism { source: self.source.clone(), target: self.target.clone(), components }
    }

    /// `h_{c_0}`.
    pub fn start(&self) -> SimplicialMorphism {
        self.endpoint(false)
    }

    /// `h_{c_1}`.
    pub fn end(&self) -> SimplicialMorphism {
        self.endpoint(true)
    }

    /// Exhaustive naturality check `α* h_τ = h_{τα} α*` within the truncation.
    pub fn validate(&self) -> SimplicialCheck {
        let top = self.truncation();
        if top > self.source.truncation() || top > self.target.truncation() {
            return SimplicialCheck::fail("homotopy beyond truncation".into());
        }
        let (x, y) = (self.source.body(), self.target.body());
        for (j, row) in self.data.iter().enumerate() {
            if row.len() != j + 2 {
                return SimplicialCheck::fail(format!("level {j} needs {} maps", j + 2));
            }
            for (k, h) in row.iter().enumerate() {
                if h.len() != x.level(j).size() || h.iter().any(|&v| v >= y.level(j).size()) {
                    return SimplicialCheck::fail(format!("h_{k} on level {j} has the wrong shape"));
                }
                let (xs, ys) = (x.level(j), y.level(j));
                for g in 0..xs.group_order() {
                    if (0..xs.size()).any(|p| h[xs.act(g, p)] != ys.act(g, h[p])) {
                        return SimplicialCheck::fail(format!("h_{k} on level {j} is not equivariant"));
                    }
                }
            }
        }
        let (ax, ay) = (self.source.augmentation(), self.target.augmentation());
        if self.source.base() != self.target.base() {
            return SimplicialCheck::fail("source and target have different bases".into());
        }
        for (k, h) in self.data[0].iter().enumerate() {
            if (0..ax.len()).any(|p| ay[h[p]] != ax[p]) {
                return SimplicialCheck::fail(format!("h_{k} on level 0 does not commute with the augmentations"));
            }
        }
        let (mx, my) = (StructureMaps::new(x, top), StructureMaps::new(y, top));
        for i in 0..=top {
            for j in 0..=top {
                for alpha in enumerate_monotone(i, j) {
                    let (ax, ay) = (mx.get(&alpha), my.get(&alpha));
                    for tau in interval_maps(j) {
                        let ta = tau.after(&alpha).expect("composable");
                        let (h, h2) = (self.h(&tau), self.h(&ta));
                        if (0..x.level(j).size()).any(|p| ay[h[p]] != h2[ax[p]]) {
                            return SimplicialCheck::fail(format!("naturality fails for α = {alpha}, τ = {tau}"));
                        }
                    }
                }
            }
        }
        SimplicialCheck::ok()
    }
}

/// The homotopy from `f` to `g` built from levels `≤ n`, for `n`-coskeletal source and target.
///
/// For `j ≤ n`, `h_τ` is `f_j` when `τ` is constant at 0 and `g_j` otherwise.
/// Above `n`, `h_τ(x)` is the point of the target whose `φ`-coordinate is
/// `h_{τφ}(φ* x)`.
pub fn homotopy_from_coskeletal(f: &SimplicialMorphism, g: &SimplicialMorphism, n: usize) -> Result<SimplicialHomotopy> {
    let (a, b) = (&f.source, &f.target);
    let top = f.truncation();
    if g.truncation() != top || a.body().level_sizes() != g.source.body().level_sizes() || b.body().level_sizes() != g.target.body().level_sizes() {
        return Err(Error::InvalidInput("f and g have different shapes".into()));
    }
    if n > top {
        return Err(Error::OutOfTruncation(format!("n = {n} above truncation {top}")));
    }
    for (name, m) in [("f", f), ("g", g)] {
        let check = m.validate();
        if !check.valid {
            return Err(Error::InvalidInput(format!("{name}: {}", check.failure.unwrap_or_default())));
        }
    }
    if let Some(level) = (0..n).find(|&k| f.components[k] != g.components[k]) {
        return Err(Error::Precondition { level, reason: "f and g differ below n".into() });
    }
    let (_, unit_a) = coskeleton_unit(a, n)?;
    if let Some(level) = unit_a.first_non_bijective_level() {
        return Err(Error::Precondition { level, reason: format!("source is not {n}-coskeletal") });
    }
    let (cosk_b, unit_b) = coskeleton_unit(b, n)?;
    if let Some(level) = unit_b.first_non_bijective_level() {
        return Err(Error::Precondition { level, reason: format!("target is not {n}-coskeletal") });
    }

    let mut data: Vec<Vec<Vec<usize>>> = Vec::with_capacity(top + 1);
    for j in 0..=top.min(n) {
        let mut row = vec![f.components[j].clone()];
        row.extend(std::iter::repeat_n(g.components[j].clone(), j + 1));
        data.push(row);
    }
    for p in n + 1..=top {
        let enc = cosk_b.encoding(p).expect("encoded");
        let pulls: Vec<Vec<usize>> = enc.index.objects.iter().map(|phi| a.body().structure_map(phi)).collect::<Result<_>>()?;
        let mut inverse = vec![usize::MAX; enc.tuples.len()];
        for (y, &c) in unit_b.components[p].iter().enumerate() {
            inverse[c] = y;
        }
        let row = interval_maps(p)
            .iter()
            .map(|tau| {
                (0..a.level(p).size())
                    .map(|x| {
                        let tuple: Vec<usize> = enc
                            .index
                            .objects
                            .iter()
                            .zip(&pulls)
                            .map(|(phi, pull)| {
                                let t2 = tau.after(phi).expect("composable");
                                data[phi.source()][interval_index(&t2)][pull[x]]
                            })
                            .collect();
                        inverse[enc.index_of(&tuple).expect("coordinatewise homotopy is a matching tuple")]
                    })
                    .collect()
            })
            .collect();
        data.push(row);
    }
    Ok(SimplicialHomotopy { source: a.clone(), target: b.clone(), data })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{FinMorphism, FinObject};
    use crate::simplicial::nerve::cech_nerve;
    use crate::simplicial::object::TruncatedSimplicialObject;

    fn nerve_and_section() -> (AugmentedSimplicialObject, SimplicialMorphism, SimplicialMorphism) {
        let a = cech_nerve(&FinMorphism::to_point(&FinObject::plain(2)), 3);
        let b = AugmentedSimplicialObject::constant(&FinObject::plain(1), 3);
        let f = SimplicialMorphism { source: a.clone(), target: b.clone(), components: (0..=3).map(|m| a.level_augmentation(m)).collect() };
        // The section picks the first point; on level m it is the constant tuple (0, …, 0).
        let g = SimplicialMorphism { source: b, target: a.clone(), components: (0..=3).map(|_| vec![0]).collect() };
        (a, f, g)
    }

    #[test]
    fn constant_homotopy_is_natural() {
        let (a, _, _) = nerve_and_section();
        let h = SimplicialHomotopy::constant(&SimplicialMorphism::identity(&a));
        assert!(h.validate().valid);
    }

    #[test]
    fn equal_maps_give_the_constant_homotopy() {
        let (a, _, _) = nerve_and_section();
        let id = SimplicialMorphism::identity(&a);
        let h = homotopy_from_coskeletal(&id, &id, 0).unwrap();
        assert!(h.validate().valid);
        for row in &h.data {
            assert!(row.iter().all(|c| *c == row[0]));
        }
    }

    #[test]
    fn section_composite_is_homotopic_to_identity() {
        let (a, f, g) = nerve_and_section();
        let gf = g.after(&f).unwrap();
        let id = SimplicialMorphism::identity(&a);
        let h = homotopy_from_coskeletal(&gf, &id, 0).unwrap();
        assert!(h.validate().valid);
        assert_eq!(h.start().components, gf.components);
        assert_eq!(h.end().components, id.components);
    }

    #[test]
    fn perturbed_homotopy_fails_naturality() {
        let (a, f, g) = nerve_and_section();
        let gf = g.after(&f).unwrap();
        let mut h = homotopy_from_coskeletal(&gf, &SimplicialMorphism::identity(&a), 0).unwrap();
        h.data[1][1][1] = (h.data[1][1][1] + 1) % 4;
        assert!(!h.validate().valid);
    }

    #[test]
    fn non_coskeletal_target_is_rejected() {
        let c = AugmentedSimplicialObject::over_point(TruncatedSimplicialObject::constant(&FinObject::plain(2), 2));
        let id = SimplicialMorphism::identity(&c);
        match homotopy_from_coskeletal(&id, &id, 0) {
            Err(Error::Precondition { level, .. }) => assert_eq!(level, 1),
            other => panic!("expected a precondition error, got {other:?}"),
        }
    }

    #[test]
    fn maps_differing_below_n_are_rejected() {
        let (a, f, g) = nerve_and_section();
        let gf = g.after(&f).unwrap();
        let id = SimplicialMorphism::identity(&a);
        assert!(matches!(homotopy_from_coskeletal(&gf, &id, 1), Err(Error::Precondition { level: 0, .. })));
    }
}
