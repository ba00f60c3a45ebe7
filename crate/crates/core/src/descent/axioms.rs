//! Checks of the functor axioms: the blow-up triangle and transfers.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fincat::{fiber_product, finite_free_degree, validate_blowup_square, BlowupSquare, FinMorphism};
use crate::homalg::{total_complex, ChainComplex, ChainMap, DoubleComplex, HomologyPresentation, Matrix, RingSpec};

use super::functor::HomologyFunctor;

#[derive(Clone, Debug, Serialize)]
pub struct BlowupTriangleReport {
    pub functor: String,
    /// `H_n` of `Tot(F(Z′) → F(X′) ⊕ F(Z) → F(X))`, all degrees.
    pub homology: Vec<HomologyPresentation>,
    pub exact: bool,
}

fn block_row(blocks: &[Matrix]) -> Matrix {
    let cols = blocks.iter().map(Matrix::cols).sum();
    let mut m = Matrix::zeros(blocks[0].rows(), cols);
    let mut c = 0;
    for b in blocks {
        m.put(0, c, b);
        c += b.cols();
    }
    m
}

fn block_column(blocks: &[Matrix]) -> Matrix {
    let rows = blocks.iter().map(Matrix::rows).sum();
    let mut m = Matrix::zeros(rows, blocks[0].cols());
    let mut r = 0;
    for b in blocks {
        m.put(r, 0, b);
        r += b.rows();
    }
    m
}

/// The sequence `z′ ↦ (F(top) z′, −F(left) z′)`, `(x′, z) ↦ F(right) x′ + F(bottom) z` as a
/// three-column double complex; the triangle is distinguished exactly when its total
/// complex is acyclic, which is checked over the integers.
pub fn verify_blowup_triangle(f: &dyn HomologyFunctor, sq: &BlowupSquare) -> Result<BlowupTriangleReport> {
    let check = validate_blowup_square(sq);
    if !check.valid {
        return Err(Error::InvalidBlowup(check.reason.unwrap_or_default()));
    }
    let [top, left, bottom, right] = [&sq.top, &sq.left, &sq.bottom, &sq.right].map(|m| f.on_map(m));
    let (top, left, bottom, right) = (top?, left?, bottom?, right?);
    let x = right.target.clone();
    let middle = right.source.direct_sum(&bottom.source);
    let z_prime = top.source.clone();
    let degrees = x.top().max(middle.top()).max(z_prime.top()) + 1;
    let a: Vec<Matrix> = (0..degrees).map(|q| block_row(&[right.component(q), bottom.component(q)])).collect();
    let b: Vec<Matrix> = (0..degrees).map(|q| block_column(&[top.component(q), left.component(q).neg()])).collect();
    let double = DoubleComplex::new(&[x, middle, z_prime], vec![a, b], None)?;
    let tot = total_complex(&double)?;
    let homology = tot.homology_upto(tot.top(), RingSpec::Integers)?;
    let exact = homology.iter().all(HomologyPresentation::is_zero);
    Ok(BlowupTriangleReport { functor: f.name(), homology, exact })
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TransferVerdict {
    /// No transfer for this functor or map.
    NotApplicable,
    Checked {
        degree: usize,
        /// `p_* ∘ p^* = d · id` on chains.
        push_pull: bool,
        /// `p^* ∘ F(g) = F(g′) ∘ p′^*` for the pullback of `p` along the test map.
        base_change: Option<bool>,
    },
}

impl TransferVerdict {
    pub fn passes(&self) -> bool {
        match self {
            TransferVerdict::NotApplicable => false,
            TransferVerdict::Checked { push_pull, base_change, .. } => *push_pull && base_change.unwrap_or(true),
        }
    }
}

/// `p : X → Y` with the optional test map `g : Y′ → Y` for base change.
pub fn verify_transfer(f: &dyn HomologyFunctor, p: &FinMorphism, test: Option<&FinMorphism>) -> Result<TransferVerdict> {
    let (Some(d), Some(pull)) = (finite_free_degree(p), f.transfer(p)) else {
        return Ok(TransferVerdict::NotApplicable);
    };
    let pull = pull?;
    let push = f.on_map(p)?;
    let push_pull = push.after(&pull)? == ChainMap::identity(&push.target).scale(d as i64)?;
    let base_change = match test {
        None => None,
        Some(g) => {
            if g.target() != p.target() {
                return Err(Error::InvalidMorphism("test map must land in the target of p".into()));
            }
            // X′ = X ×_Y Y′ with p′ = proj2 and g′ = proj1.
            let pb = fiber_product(p, g)?;
            let p_prime = &pb.proj2;
            let pull_prime = f.transfer(p_prime).ok_or_else(|| Error::InvalidMorphism("pulled-back map lost its degree".into()))??;
            let lhs = pull.after(&f.on_map(g)?)?;
            let rhs = f.on_map(&pb.proj1)?.after(&pull_prime)?;
            Some(lhs == rhs)
        }
    };
    Ok(TransferVerdict::Checked { degree: d, push_pull, base_change })
}

/// `F(id) = id` and `F(g ∘ f) = F(g) ∘ F(f)`.
pub fn verify_functoriality(func: &dyn HomologyFunctor, f: &FinMorphism, g: &FinMorphism) -> Result<bool> {
    let identity = |x| -> Result<bool> {
        let c: ChainComplex = func.on_object(x)?;
        Ok(func.on_map(&FinMorphism::identity(x))? == ChainMap::identity(&c))
    };
    let composite = func.on_map(&g.after(f)?)? == func.on_map(g)?.after(&func.on_map(f)?)?;
    Ok(identity(f.source())? && identity(g.source())? && composite)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::descent::functor::{free_chains, orbit_chains, product_chains, simplicial_circle};
    use crate::fincat::{FinObject, Group};
    use std::sync::Arc;

    fn example_square() -> BlowupSquare {
        // X = {0,1,2}, Z = {0} ↪ X, X′ = {a, b, c} → X with a, b over 0; Z′ = {a, b}.
        let x = FinObject::plain(3);
        let z = FinObject::plain(1);
        let xp = FinObject::plain(4);
        let zp = FinObject::plain(2);
        BlowupSquare {
            top: FinMorphism::new(zp.clone(), xp.clone(), vec![0, 1]).unwrap(),
            left: FinMorphism::to_point(&zp),
            bottom: FinMorphism::new(z, x.clone(), vec![0]).unwrap(),
            right: FinMorphism::new(xp, x, vec![0, 0, 1, 2]).unwrap(),
        }
    }

    #[test]
    fn example_square_is_exact() {
        let sq = example_square();
        assert!(validate_blowup_square(&sq).valid);
        assert!(verify_blowup_triangle(&free_chains(RingSpec::Integers), &sq).unwrap().exact);
        let circle = product_chains(&simplicial_circle(), RingSpec::Integers).unwrap();
        assert!(verify_blowup_triangle(&circle, &sq).unwrap().exact);
    }

    #[test]
    fn nil_thickening() {
        let x = FinObject::plain(2);
        let e = FinObject::plain(0);
        let sq = BlowupSquare {
            top: FinMorphism::new(e.clone(), e.clone(), vec![]).unwrap(),
            left: FinMorphism::new(e.clone(), x.clone(), vec![]).unwrap(),
            bottom: FinMorphism::identity(&x),
            right: FinMorphism::new(e, x, vec![]).unwrap(),
        };
        assert!(verify_blowup_triangle(&free_chains(RingSpec::Integers), &sq).unwrap().exact);
    }

    #[test]
    fn broken_square_is_rejected() {
        let mut sq = example_square();
        sq.right = FinMorphism::new(FinObject::plain(4), FinObject::plain(3), vec![0, 0, 1, 1]).unwrap();
        assert!(matches!(verify_blowup_triangle(&free_chains(RingSpec::Integers), &sq), Err(Error::InvalidBlowup(_))));
    }

    #[test]
    fn transfers() {
        let p = FinMorphism::to_point(&FinObject::plain(2));
        let t = verify_transfer(&free_chains(RingSpec::Integers), &p, None).unwrap();
        assert!(matches!(t, TransferVerdict::Checked { degree: 2, push_pull: true, .. }));
        let g = Arc::new(Group::cyclic(2).unwrap());
        let (gs, _) = crate::random::coset_space(&g, &[0]);
        let q = FinMorphism::to_point(&gs);
        let test = FinMorphism::to_point(&gs);
        let t = verify_transfer(&orbit_chains(RingSpec::Integers), &q, Some(&test)).unwrap();
        assert!(t.passes());
        let uneven = FinMorphism::new(FinObject::plain(3), FinObject::plain(2), vec![0, 0, 1]).unwrap();
        assert!(matches!(verify_transfer(&free_chains(RingSpec::Integers), &uneven, None).unwrap(), TransferVerdict::NotApplicable));
    }

    #[test]
    fn functoriality() {
        let f = FinMorphism::new(FinObject::plain(3), FinObject::plain(2), vec![0, 1, 1]).unwrap();
        let g = FinMorphism::to_point(&FinObject::plain(2));
        assert!(verify_functoriality(&free_chains(RingSpec::Integers), &f, &g).unwrap());
        let circle = product_chains(&simplicial_circle(), RingSpec::Integers).unwrap();
        assert!(verify_functoriality(&circle, &f, &g).unwrap());
    }
}
