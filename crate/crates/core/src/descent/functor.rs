//! Homology functors on finite (G-)sets.

use crate::error::{Error, Result};
use crate::fincat::{finite_free_degree, orbit_data, orbit_index, FinMorphism, FinObject};
use crate::homalg::{ChainComplex, ChainMap, Matrix, RingSpec};
use crate::simplicial::TruncatedSimplicialObject;

/// A covariant functor to bounded complexes of free abelian groups, optionally with
/// pull-backs along maps of constant fiber degree. Coefficients enter only through
/// [`HomologyFunctor::ring`], which is used when homology is taken.
pub trait HomologyFunctor {
    fn name(&self) -> String;

    fn ring(&self) -> RingSpec;

    fn on_object(&self, x: &FinObject) -> Result<ChainComplex>;

    /// `F(f) : F(X) → F(Y)`.
    fn on_map(&self, f: &FinMorphism) -> Result<ChainMap>;

    /// `p^* : F(Y) → F(X)` for `p : X → Y` of constant fiber degree; `None` when the
    /// functor has no transfers or `p` has no degree.
    fn transfer(&self, p: &FinMorphism) -> Option<Result<ChainMap>>;
}

/// The linear extension of `f` on free modules of points: column `x` has a 1 in row `f(x)`.
fn point_matrix(f: &FinMorphism) -> Matrix {
    Matrix::from_function(f.target().size(), f.values())
}

/// Free module on the points.
#[derive(Clone, Debug)]
pub struct FreeChains {
    pub ring: RingSpec,
}

pub fn free_chains(ring: RingSpec) -> FreeChains {
    FreeChains { ring }
}

impl HomologyFunctor for FreeChains {
    fn name(&self) -> String {
        "free_chains".into()
    }

    fn ring(&self) -> RingSpec {
        self.ring
    }

    fn on_object(&self, x: &FinObject) -> Result<ChainComplex> {
        Ok(ChainComplex::concentrated(x.size()))
    }

    fn on_map(&self, f: &FinMorphism) -> Result<ChainMap> {
        ChainMap::new(self.on_object(f.source())?, self.on_object(f.target())?, vec![point_matrix(f)])
    }

    fn transfer(&self, p: &FinMorphism) -> Option<Result<ChainMap>> {
        finite_free_degree(p)?;
        Some((|| ChainMap::new(self.on_object(p.target())?, self.on_object(p.source())?, vec![point_matrix(p).transpose()]))())
    }
}

/// Free module on the orbits.
#[derive(Clone, Debug)]
pub struct OrbitChains {
    pub ring: RingSpec,
}

pub fn orbit_chains(ring: RingSpec) -> OrbitChains {
    OrbitChains { ring }
}

impl OrbitChains {
    fn orbit_matrix(f: &FinMorphism) -> Matrix {
        let (src, tgt) = (orbit_data(f.source()), orbit_data(f.target()));
        let tgt_idx = orbit_index(f.target(), &tgt);
        let values: Vec<usize> = src.iter().map(|o| tgt_idx[f.apply(o.base_point())]).collect();
        Matrix::from_function(tgt.len(), &values)
    }
}

impl HomologyFunctor for OrbitChains {
    fn name(&self) -> String {
        "orbit_chains".into()
    }

    fn ring(&self) -> RingSpec {
        self.ring
    }

    fn on_object(&self, x: &FinObject) -> Result<ChainComplex> {
        Ok(ChainComplex::concentrated(orbit_data(x).len()))
    }

    fn on_map(&self, f: &FinMorphism) -> Result<ChainMap> {
        if !f.source().same_context(f.target()) {
            return Err(Error::GroupMismatch("orbit chains of a map between different group contexts".into()));
        }
        ChainMap::new(self.on_object(f.source())?, self.on_object(f.target())?, vec![OrbitChains::orbit_matrix(f)])
    }

    /// `p^*(O) = Σ_{O′ ⊆ p⁻¹(O)} #(O′ ∩ p⁻¹(y)) · O′` for any `y ∈ O`.
    fn transfer(&self, p: &FinMorphism) -> Option<Result<ChainMap>> {
        finite_free_degree(p)?;
        let (src, tgt) = (orbit_data(p.source()), orbit_data(p.target()));
        let src_idx = orbit_index(p.source(), &src);
        let fibers = p.fibers();
        let mut m = Matrix::zeros(src.len(), tgt.len());
        for (k, o) in tgt.iter().enumerate() {
            for &x in &fibers[o.base_point()] {
                m.add_at(src_idx[x], k, 1);
            }
        }
        Some((|| ChainMap::new(self.on_object(p.target())?, self.on_object(p.source())?, vec![m]))())
    }
}

/// Normalized chains of `K`: free on the nondegenerate simplices, `∂ = Σ (−1)^i d_i`
/// with degenerate faces dropped.
///
/// `K` is read as the simplicial set generated by its levels `≤ N`, which has no
/// nondegenerate simplices above `N`, so the complex is complete.
pub fn normalized_chains(k: &TruncatedSimplicialObject) -> Result<ChainComplex> {
    let check = k.validate();
    if !check.valid {
        return Err(Error::InvalidSimplicial(check.failure.unwrap_or_default()));
    }
    let top = k.truncation();
    let nondeg: Vec<Vec<usize>> = (0..=top)
        .map(|n| {
            let degenerate = k.degenerate_points(n);
            (0..k.level(n).size()).filter(|&x| !degenerate[x]).collect()
        })
        .collect();
    let position: Vec<Vec<Option<usize>>> = (0..=top)
        .map(|n| {
            let mut pos = vec![None; k.level(n).size()];
            for (i, &x) in nondeg[n].iter().enumerate() {
                pos[x] = Some(i);
            }
            pos
        })
        .collect();
    let ranks = nondeg.iter().map(Vec::len).collect();
    let boundaries = (1..=top)
        .map(|n| {
            let mut m = Matrix::zeros(nondeg[n - 1].len(), nondeg[n].len());
            for (j, &x) in nondeg[n].iter().enumerate() {
                for i in 0..=n {
                    if let Some(row) = position[n - 1][k.face(n, i)[x]] {
                        m.add_at(row, j, if i % 2 == 0 { 1 } else { -1 });
                    }
                }
            }
            m
        })
        .collect();
    ChainComplex::new(ranks, boundaries, None)
}

/// The simplicial circle `Δ¹/∂Δ¹`: one vertex, one nondegenerate edge.
pub fn simplicial_circle() -> TruncatedSimplicialObject {
    let levels = vec![FinObject::plain(1), FinObject::plain(2)];
    let faces = vec![vec![], vec![vec![0, 0], vec![0, 0]]];
    TruncatedSimplicialObject::new(levels, faces, vec![vec![vec![0]]]).expect("the circle is simplicial")
}

/// `F(X) = Z[X] ⊗ N(K)` with `∂ = id ⊗ ∂_K`; basis `(x, σ)` at position `x · n_q + σ`.
#[derive(Clone, Debug)]
pub struct ProductChains {
    pub ring: RingSpec,
    pub k: ChainComplex,
    label: String,
}

pub fn product_chains(k: &TruncatedSimplicialObject, ring: RingSpec) -> Result<ProductChains> {
    if k.context().is_some() {
        return Err(Error::InvalidInput("product_chains needs K over plain sets".into()));
    }
    let label = format!("product_chains[{}]", k.level_sizes().iter().map(ToString::to_string).collect::<Vec<_>>().join(","));
    Ok(ProductChains { ring, k: normalized_chains(k)?, label })
}

impl ProductChains {
    fn tensor(&self, m: &Matrix, q: usize) -> Matrix {
        m.kronecker(&Matrix::identity(self.k.rank(q)))
    }

    fn tensor_map(&self, source: &FinObject, target: &FinObject, m: &Matrix) -> Result<ChainMap> {
        let components = (0..=self.k.top()).map(|q| self.tensor(m, q)).collect();
        ChainMap::new(self.on_object(source)?, self.on_object(target)?, components)
    }
}

impl HomologyFunctor for ProductChains {
    fn name(&self) -> String {
        self.label.clone()
    }

    fn ring(&self) -> RingSpec {
        self.ring
    }

    fn on_object(&self, x: &FinObject) -> Result<ChainComplex> {
        let n = x.size();
        let ranks = self.k.ranks().iter().map(|r| n * r).collect();
        let boundaries = (1..=self.k.top()).map(|q| Matrix::identity(n).kronecker(&self.k.boundary(q))).collect();
        ChainComplex::new(ranks, boundaries, None)
    }

    fn on_map(&self, f: &FinMorphism) -> Result<ChainMap> {
        self.tensor_map(f.source(), f.target(), &point_matrix(f))
    }

    fn transfer(&self, p: &FinMorphism) -> Option<Result<ChainMap>> {
        finite_free_degree(p)?;
        Some(self.tensor_map(p.target(), p.source(), &point_matrix(p).transpose()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    use crate::fincat::Group;

    #[test]
    fn free_chains_examples() {
        let f = free_chains(RingSpec::Integers);
        assert_eq!(f.on_object(&FinObject::plain(2)).unwrap().ranks(), &[2]);
        let p = FinMorphism::to_point(&FinObject::plain(2));
        let pp = f.on_map(&p).unwrap().after(&f.transfer(&p).unwrap().unwrap()).unwrap();
        assert_eq!(pp.components[0], Matrix::scalar(1, 2));
    }

    #[test]
    fn orbit_chains_examples() {
        let g = Arc::new(Group::cyclic(2).unwrap());
        let (x, _) = crate::random::coset_space(&g, &[0]);
        let f = orbit_chains(RingSpec::Integers);
        assert_eq!(f.on_object(&x).unwrap().ranks(), &[1]);
        let p = FinMorphism::to_point(&x);
        let t = f.transfer(&p).unwrap().unwrap();
        assert_eq!(t.components[0], Matrix::scalar(1, 2));
        let non_constant = FinMorphism::new(FinObject::plain(3), FinObject::plain(2), vec![0, 0, 1]).unwrap();
        assert!(f.transfer(&non_constant).is_none());
    }

    #[test]
    fn circle_chains() {
        let c = normalized_chains(&simplicial_circle()).unwrap();
        assert_eq!(c.ranks(), &[1, 1]);
        let f = product_chains(&simplicial_circle(), RingSpec::Integers).unwrap();
        let fp = f.on_object(&FinObject::plain(1)).unwrap();
        assert_eq!(fp.homology(0, RingSpec::Integers).unwrap().rank, 1);
        assert_eq!(fp.homology(1, RingSpec::Integers).unwrap().rank, 1);
    }

    #[test]
    fn point_factor_reduces_to_free_chains() {
        let point = TruncatedSimplicialObject::constant(&FinObject::plain(1), 2);
        let f = product_chains(&point, RingSpec::Integers).unwrap();
        assert_eq!(f.on_object(&FinObject::plain(3)).unwrap().ranks(), &[3, 0, 0]);
    }
}
