use crate::error::{Error, Result};
use crate::fincat::{FinMorphism, FinObject};
use crate::homalg::{total_complex, verify_chain_homotopy, ChainComplex, ChainHomotopy, ChainMap, DoubleComplex, Matrix};
use crate::simplex::MonotoneMap;
use crate::simplicial::{cech_nerve, fiber_power, AugmentedSimplicialObject, SimplicialHomotopy, SimplicialMorphism};

use super::functor::HomologyFunctor;

/// `F` applied levelwise to an augmented simplicial object, truncated at `N`.
#[derive(Clone, Debug)]
pub struct Applied {
    pub truncation: usize,
    pub double: DoubleComplex,
    pub tot: ChainComplex,
    pub base: ChainComplex,
    /// `ε : Tot → F(base)`, induced by the augmentation on column 0.
    pub augmentation: ChainMap,
}

fn map_on_level(f: &dyn HomologyFunctor, source: &FinObject, target: &FinObject, values: &[usize]) -> Result<ChainMap> {
    f.on_map(&FinMorphism::new(source.clone(), target.clone(), values.to_vec())?)
}

/// Embeds degreewise blocks `(p, q) → (p', q)` into a map `Tot_n → Tot'_{n+shift}`.
fn total_map(source: &DoubleComplex, target: &DoubleComplex, shift: usize, block: impl Fn(usize, usize) -> Option<Matrix>) -> Vec<Matrix> {
    let src_top = source.total_top();
    (0..=src_top)
        .map(|n| {
            let mut m = Matrix::zeros(target.total_rank(n + shift), source.total_rank(n));
            let tgt_offsets = target.total_offsets(n + shift);
            for (p, col, r) in source.total_offsets(n) {
                if r == 0 {
                    continue;
                }
                if let Some(b) = block(p, n - p) {
                    if let Some(&(_, row, rr)) = tgt_offsets.iter().find(|t| t.0 == p + shift) {
                        debug_assert_eq!(rr, b.rows());
                        m.put(row, col, &b);
                    }
                }
            }
            m
        })
        .collect()
}

/// Columns `F(X_p)` for `p ≤ N`, horizontal maps `Σ (−1)^i F(d_i)`, the total complex
/// (exact through degree `N`) and the augmentation.
pub fn apply_functor(f: &dyn HomologyFunctor, x: &AugmentedSimplicialObject, n: usize) -> Result<Applied> {
    if n > x.truncation() {
        return Err(Error::OutOfTruncation(format!("N = {n} above truncation {}", x.truncation())));
    }
    let check = x.validate();
    if !check.valid {
        return Err(Error::InvalidSimplicial(check.failure.unwrap_or_default()));
    }
    let body = x.body();
    let columns: Vec<ChainComplex> = (0..=n).map(|p| f.on_object(body.level(p))).collect::<Result<_>>()?;
    let mut horizontal = Vec::with_capacity(n);
    for p in 1..=n {
        let mut sum: Option<ChainMap> = None;
        for i in 0..=p {
            let fi = map_on_level(f, body.level(p), body.level(p - 1), body.face(p, i))?;
            let fi = if i % 2 == 1 { fi.scale(-1)? } else { fi };
            sum = Some(match sum {
                None => fi,
                Some(s) => {
                    let comps = s.components.iter().zip(&fi.components).map(|(a, b)| a.add(b)).collect::<Result<_>>()?;
                    ChainMap::new(s.source, s.target, comps)?
                }
            });
        }
        horizontal.push(sum.expect("p ≥ 1 faces").components);
    }
    let double = DoubleComplex::new(&columns, horizontal, Some(n))?;
    let tot = total_complex(&double)?;
    let base = f.on_object(x.base())?;
    let aug = f.on_map(&x.augmentation_morphism())?;
    let comps = total_map(&double, &DoubleComplex::new(std::slice::from_ref(&base), vec![], None)?, 0, |p, q| (p == 0).then(|| aug.component(q)));
    let augmentation = ChainMap::new(tot.clone(), base.clone(), comps)?;
    Ok(Applied { truncation: n, double, tot, base, augmentation })
}

/// `F(g) : Tot F(X) → Tot F(Y)` for a simplicial map `g`, columnwise without signs.
pub fn functor_on_morphism(f: &dyn HomologyFunctor, g: &SimplicialMorphism, source: &Applied, target: &Applied) -> Result<ChainMap> {
    let n = source.truncation.min(target.truncation);
    let maps: Vec<ChainMap> = (0..=n).map(|p| map_on_level(f, g.source.level(p), g.target.level(p), &g.components[p])).collect::<Result<_>>()?;
    let comps = total_map(&source.double, &target.double, 0, |p, q| maps.get(p).map(|m| m.component(q)));
    ChainMap::new(source.tot.clone(), target.tot.clone(), comps)
}

/// `τ_i : [p+1] → [1]`, sending `0..=i` to 0 and the rest to 1.
fn prism_tau(p: usize, i: usize) -> MonotoneMap {
    MonotoneMap::new((0..=p + 1).map(|k| usize::from(k > i)).collect(), 1).expect("monotone")
}

/// A chain homotopy `F(f) ≃ F(g)` on total complexes, from a simplicial homotopy.
#[derive(Clone, Debug)]
pub struct ChainHomotopyCertificate {
    pub f: ChainMap,
    pub g: ChainMap,
    pub homotopy: ChainHomotopy,
    pub verified: bool,
}

/// The prism operator `k_p = Σ_{i ≤ p} (−1)^i F(h_{τ_i} ∘ s_i)`, which satisfies
/// `∂k + k∂ = F(g) − F(f)` for `h` running from `f` (at `τ ≡ 0`) to `g`.
pub fn simplicial_to_chain_homotopy(
    f: &dyn HomologyFunctor,
    h: &SimplicialHomotopy,
    source: &Applied,
    target: &Applied,
) -> Result<ChainHomotopyCertificate> {
    let check = h.validate();
    if !check.valid {
        return Err(Error::InvalidInput(format!("homotopy: {}", check.failure.unwrap_or_default())));
    }
    let (x, y) = (h.source.body(), h.target.body());
    let n = source.truncation.min(target.truncation).min(h.truncation());
    let mut prisms: Vec<ChainMap> = Vec::new();
    for p in 0..n {
        let mut acc: Option<Vec<Matrix>> = None;
        for i in 0..=p {
            let tau = prism_tau(p, i);
            let hv = h.h(&tau);
            let composite: Vec<usize> = x.degeneracy(p, i).iter().map(|&z| hv[z]).collect();
            let m = map_on_level(f, x.level(p), y.level(p + 1), &composite)?;
            let m = if i % 2 == 1 { m.scale(-1)? } else { m };
            acc = Some(match acc {
                None => m.components,
                Some(a) => a.iter().zip(&m.components).map(|(u, v)| u.add(v)).collect::<Result<_>>()?,
            });
        }
        let comps = acc.expect("p + 1 terms");
        prisms.push(ChainMap::new(f.on_object(x.level(p))?, f.on_object(y.level(p + 1))?, comps)?);
    }
    let comps = total_map(&source.double, &target.double, 1, |p, q| prisms.get(p).map(|m| m.component(q)));
    let homotopy = ChainHomotopy { components: comps };
    let fm = functor_on_morphism(f, &h.start(), source, target)?;
    let gm = functor_on_morphism(f, &h.end(), source, target)?;
    let verified = verify_chain_homotopy(&homotopy, &fm, &gm);
    Ok(ChainHomotopyCertificate { f: fm, g: gm, homotopy, verified })
}

/// The extra-degeneracy contraction of `Tot F(nerve(f))` towards `F(base)`.
#[derive(Clone, Debug)]
pub struct SectionContraction {
    pub applied: Applied,
    /// `σ = F(s)` into column 0.
    pub section: ChainMap,
    /// `σ ∘ ε`.
    pub composite: ChainMap,
    /// `F(s_{−1})` with `s_{−1}(x_0, …, x_p) = (s f x_0, x_0, …, x_p)`.
    pub homotopy: ChainHomotopy,
    /// `∂h + h∂ = id − σε` within the window, and `ε σ = id`.
    pub verified: bool,
}

pub fn section_contraction(func: &dyn HomologyFunctor, f: &FinMorphism, s: &FinMorphism, n: usize) -> Result<SectionContraction> {
    if s.source() != f.target() || s.target() != f.source() {
        return Err(Error::InvalidMorphism("s is not a map Y → X".into()));
    }
    if f.after(s)? != FinMorphism::identity(f.target()) {
        return Err(Error::InvalidMorphism("s is not a section of f".into()));
    }
    let nerve = cech_nerve(f, n + 1);
    let applied = apply_functor(func, &nerve, n)?;
    let powers: Vec<_> = (0..=n + 1).map(|p| fiber_power(f, p + 1)).collect();
    let mut extra: Vec<ChainMap> = Vec::with_capacity(n);
    for p in 0..n {
        let values: Vec<usize> = powers[p]
            .tuples
            .iter()
            .map(|t| {
                let mut u = Vec::with_capacity(t.len() + 1);
                u.push(s.apply(f.apply(t[0])));
                u.extend_from_slice(t);
                powers[p + 1].index_of(&u).expect("the extra degeneracy stays in the fiber power")
            })
            .collect();
        extra.push(map_on_level(func, nerve.level(p), nerve.level(p + 1), &values)?);
    }
    let homotopy = ChainHomotopy { components: total_map(&applied.double, &applied.double, 1, |p, q| extra.get(p).map(|m| m.component(q))) };
    let fs = func.on_map(s)?;
    let base_double = DoubleComplex::new(std::slice::from_ref(&applied.base), vec![], None)?;
    let section =
        ChainMap::new(applied.base.clone(), applied.tot.clone(), total_map(&base_double, &applied.double, 0, |_, q| Some(fs.component(q))))?;
    let composite = section.after(&applied.augmentation)?;
    let retraction_ok = applied.augmentation.after(&section)? == ChainMap::identity(&applied.base);
    let verified = retraction_ok && verify_chain_homotopy(&homotopy, &composite, &ChainMap::identity(&applied.tot));
    Ok(SectionContraction { applied, section, composite, homotopy, verified })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::descent::functor::{free_chains, orbit_chains, product_chains, simplicial_circle};
    use crate::homalg::{is_quasi_iso, RingSpec};
    use crate::simplicial::homotopy_from_coskeletal;

    fn pair_to_point() -> FinMorphism {
        FinMorphism::to_point(&FinObject::plain(2))
    }

    #[test]
    fn nerve_columns_double() {
        let x = cech_nerve(&pair_to_point(), 3);
        let a = apply_functor(&free_chains(RingSpec::Integers), &x, 3).unwrap();
        assert_eq!(a.tot.ranks(), &[2, 4, 8, 16]);
        let r = is_quasi_iso(&a.augmentation, 2, RingSpec::Integers).unwrap();
        assert!(r.verdict.is_quasi_iso());
        assert!(matches!(is_quasi_iso(&a.augmentation, 3, RingSpec::Integers), Err(Error::OutsideWindow { .. })));
    }

    #[test]
    fn constant_object_has_base_homology() {
        let x = AugmentedSimplicialObject::constant(&FinObject::plain(3), 3);
        let a = apply_functor(&free_chains(RingSpec::Integers), &x, 3).unwrap();
        let h = a.tot.homology_upto(2, RingSpec::Integers).unwrap();
        assert_eq!(h[0].rank, 3);
        assert!(h[1].is_zero() && h[2].is_zero());
    }

    #[test]
    fn contraction_of_a_split_surjection() {
        let f = pair_to_point();
        let s = FinMorphism::new(FinObject::plain(1), FinObject::plain(2), vec![0]).unwrap();
        assert!(section_contraction(&free_chains(RingSpec::Integers), &f, &s, 3).unwrap().verified);
        let circle = product_chains(&simplicial_circle(), RingSpec::Integers).unwrap();
        assert!(section_contraction(&circle, &f, &s, 3).unwrap().verified);
        let iso = FinMorphism::identity(&FinObject::plain(3));
        assert!(section_contraction(&free_chains(RingSpec::Integers), &iso, &iso, 2).unwrap().verified);
        let bad = FinMorphism::new(FinObject::plain(1), FinObject::plain(2), vec![0]).unwrap();
        assert!(section_contraction(&free_chains(RingSpec::Integers), &iso, &bad, 2).is_err());
    }

    #[test]
    fn contraction_with_a_fixed_point() {
        use crate::fincat::Group;
        use std::sync::Arc;
        let g = Arc::new(Group::cyclic(2).unwrap());
        let (free, _) = crate::random::coset_space(&g, &[0]);
        let point = FinObject::point(&Some(g.clone()));
        let x = free.coproduct(&point).unwrap();
        let f = FinMorphism::to_point(&x);
        let s = FinMorphism::new(point.clone(), x.clone(), vec![2]).unwrap();
        assert!(section_contraction(&orbit_chains(RingSpec::Integers), &f, &s, 3).unwrap().verified);
    }

    #[test]
    fn prism_of_a_coskeletal_homotopy() {
        let a = cech_nerve(&pair_to_point(), 3);
        let b = AugmentedSimplicialObject::constant(&FinObject::plain(1), 3);
        let eps = SimplicialMorphism { source: a.clone(), target: b.clone(), components: (0..=3).map(|m| a.level_augmentation(m)).collect() };
        let sec = SimplicialMorphism { source: b, target: a.clone(), components: vec![vec![0]; 4] };
        let gf = sec.after(&eps).unwrap();
        let id = SimplicialMorphism::identity(&a);
        let h = homotopy_from_coskeletal(&gf, &id, 0).unwrap();
        for func in [&free_chains(RingSpec::Integers) as &dyn HomologyFunctor, &product_chains(&simplicial_circle(), RingSpec::Integers).unwrap()] {
            let applied = apply_functor(func, &a, 3).unwrap();
            let cert = simplicial_to_chain_homotopy(func, &h, &applied, &applied).unwrap();
            assert!(cert.verified);
        }
        let constant = SimplicialHomotopy::constant(&id);
        let applied = apply_functor(&free_chains(RingSpec::Integers), &a, 3).unwrap();
        let cert = simplicial_to_chain_homotopy(&free_chains(RingSpec::Integers), &constant, &applied, &applied).unwrap();
        assert!(cert.verified);
    }
}
