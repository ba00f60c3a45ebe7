//! Relative coskeleta `cosk_n(X/base)`.
//!
//! For `m ≤ n` level `m` is `X_m`. For `m > n` it is the equalizer of
//!
//! ```text
//!   s, t : ∏_{φ ∈ ob D_m} X_φ  ⇉  ∏_{α ∈ mor D_m} X_α
//! ```
//!
//! with products fibered over the base; a point is a tuple `(x_φ)` indexed by
//! the injective `φ : [i] → [m]`, `i ≤ n`, in canonical order. The product is
//! never listed; candidates are joined along codimension-one faces and then
//! filtered by `s = t`.
//!
//! [`coskeleton_oracle`] computes the same level independently as a limit
//! over the full category `D′_m` with the generic limit routine.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::fincat::{finite_limit, Diagram, FinObject, Limit};
use crate::simplex::{build_full_index_category, build_index_category, epi_mono_factorization, IndexCategory, MonotoneMap};

use super::object::{AugmentedSimplicialObject, SimplicialMorphism, StructureMaps, TruncatedSimplicialObject};

/// Tuple encoding of a coskeleton level above `n`.
#[derive(Clone, Debug)]
pub struct LevelEncoding {
    pub index: IndexCategory,
    pub tuples: Vec<Vec<usize>>,
    lookup: HashMap<Vec<usize>, usize>,
}

impl LevelEncoding {
    fn new(index: IndexCategory, tuples: Vec<Vec<usize>>) -> Self {
        let lookup = tuples.iter().cloned().enumerate().map(|(k, t)| (t, k)).collect();
        LevelEncoding { index, tuples, lookup }
    }

    pub fn index_of(&self, tuple: &[usize]) -> Option<usize> {
        self.lookup.get(tuple).copied()
    }
}

/// `cosk_n(X/base)` through level `N_out`, with the encodings of levels above `n`.
#[derive(Clone, Debug)]
pub struct Coskeleton {
    pub n: usize,
    pub object: AugmentedSimplicialObject,
    /// `encodings[m]` is `Some` exactly for `m > n`.
    pub encodings: Vec<Option<LevelEncoding>>,
}

impl Coskeleton {
    pub fn encoding(&self, m: usize) -> Option<&LevelEncoding> {
        self.encodings.get(m).and_then(Option::as_ref)
    }
}

struct Coordinates<'a> {
    n: usize,
    maps: &'a StructureMaps,
}

impl Coordinates<'_> {
    /// `φ`-coordinate of a point `x` of level `m`, for injective `φ : [i] → [m]`, `i ≤ n`.
    fn coordinate(&self, encodings: &[Option<LevelEncoding>], m: usize, x: usize, phi: &MonotoneMap) -> usize {
        if m <= self.n {
            self.maps.get(phi)[x]
        } else {
            let enc = encodings[m].as_ref().expect("encoded level");
            enc.tuples[x][enc.index.object_index(phi).expect("φ is an object of D_m")]
        }
    }

    /// `α*(x)` for `α : [m′] → [m]`, expressed in the encoding of level `m′`.
    fn pull_back(&self, encodings: &[Option<LevelEncoding>], alpha: &MonotoneMap, x: usize) -> Option<usize> {
        let (m2, m) = (alpha.source(), alpha.target());
        let pull = |psi: &MonotoneMap| {
            let (sigma, phi) = epi_mono_factorization(&alpha.after(psi).expect("composable"));
            let c = self.coordinate(encodings, m, x, &phi);
            self.maps.get(&sigma)[c]
        };
        if m2 <= self.n {
            Some(pull(&MonotoneMap::identity(m2)))
        } else {
            let enc = encodings[m2].as_ref().expect("encoded level");
            let tuple: Vec<usize> = enc.index.objects.iter().map(pull).collect();
            enc.index_of(&tuple)
        }
    }
}

/// Fiber-over-base face index: level `i ≥ 1` points grouped by their face tuples.
fn face_index(x: &TruncatedSimplicialObject, i: usize) -> HashMap<Vec<usize>, Vec<usize>> {
    let mut index: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
    for p in 0..x.level(i).size() {
        let faces: Vec<usize> = (0..=i).map(|k| x.face(i, k)[p]).collect();
        index.entry(faces).or_default().push(p);
    }
    index
}

fn equalizer_level(
    index: IndexCategory,
    x: &AugmentedSimplicialObject,
    maps: &StructureMaps,
    face_indices: &[HashMap<Vec<usize>, Vec<usize>>],
    budget: Option<usize>,
) -> Result<LevelEncoding> {
    let objs = &index.objects;
    // For each object of dimension ≥ 1, the positions of its codimension-one faces.
    let faces: Vec<Vec<usize>> = objs
        .iter()
        .map(|phi| {
            let i = phi.source();
            if i == 0 {
                return Vec::new();
            }
            (0..=i).map(|k| index.object_index(&phi.after(&MonotoneMap::coface(i, k)).unwrap()).unwrap()).collect()
        })
        .collect();
    let aug = x.augmentation();
    let x0 = x.level(0).size();

    let mut candidates_out = Vec::new();
    let mut current: Vec<usize> = Vec::with_capacity(objs.len());
    fn join(
        pos: usize,
        objs: &[MonotoneMap],
        faces: &[Vec<usize>],
        face_indices: &[HashMap<Vec<usize>, Vec<usize>>],
        aug: &[usize],
        x0: usize,
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        budget: usize,
    ) -> bool {
        if pos == objs.len() {
            out.push(current.clone());
            return out.len() <= budget;
        }
        let i = objs[pos].source();
        if i == 0 {
            for v in 0..x0 {
                if pos > 0 && aug[v] != aug[current[0]] {
                    continue;
                }
                current.push(v);
                let ok = join(pos + 1, objs, faces, face_indices, aug, x0, current, out, budget);
                current.pop();
                if !ok {
                    return false;
                }
            }
        } else {
            let key: Vec<usize> = faces[pos].iter().map(|&f| current[f]).collect();
            if let Some(points) = face_indices[i].get(&key) {
                for &p in points {
                    current.push(p);
                    let ok = join(pos + 1, objs, faces, face_indices, aug, x0, current, out, budget);
                    current.pop();
                    if !ok {
                        return false;
                    }
                }
            }
        }
        true
    }
    let limit = budget.unwrap_or(usize::MAX);
    if !join(0, objs, &faces, face_indices, aug, x0, &mut current, &mut candidates_out, limit) {
        return Err(Error::Budget(format!("level {} of cosk_{} exceeds {limit} candidate points", index.m, index.n)));
    }

    // Equalizer condition: x_φ = α*(x_φ′) for every α : φ → φ′ of D_m.
    let tuples: Vec<Vec<usize>> =
        candidates_out.into_iter().filter(|t| index.morphisms.iter().all(|a| t[a.source] == maps.get(&a.alpha)[t[a.target]])).collect();
    Ok(LevelEncoding::new(index, tuples))
}

/// `cosk_n(X/base)` through level `n_out`.
pub fn coskeleton(x: &AugmentedSimplicialObject, n: usize, n_out: usize) -> Result<Coskeleton> {
    coskeleton_bounded(x, n, n_out, None)
}

/// As [`coskeleton`], failing with [`Error::Budget`] once a level would exceed `budget` points.
pub fn coskeleton_bounded(x: &AugmentedSimplicialObject, n: usize, n_out: usize, budget: Option<usize>) -> Result<Coskeleton> {
    if n > x.truncation() {
        return Err(Error::OutOfTruncation(format!("cosk_{n} of an object truncated at {}", x.truncation())));
    }
    if n_out < n {
        return Err(Error::InvalidInput(format!("output truncation {n_out} below n = {n}")));
    }
    let body = x.body();
    let maps = StructureMaps::new(body, n);
    let face_indices: Vec<HashMap<Vec<usize>, Vec<usize>>> = (0..=n).map(|i| if i == 0 { HashMap::new() } else { face_index(body, i) }).collect();
    let coords = Coordinates { n, maps: &maps };
    let context = body.context();

    let mut encodings: Vec<Option<LevelEncoding>> = vec![None; n_out + 1];
    let mut levels: Vec<FinObject> = (0..=n).map(|m| body.level(m).clone()).collect();
    for m in n + 1..=n_out {
        let enc = equalizer_level(build_index_category(n, m), x, &maps, &face_indices, budget)?;
        let objs_sizes: Vec<&FinObject> = enc.index.objects.iter().map(|phi| body.level(phi.source())).collect();
        let obj = FinObject::from_fn(&context, enc.tuples.len(), |g, k| {
            let moved: Vec<usize> = enc.tuples[k].iter().zip(&objs_sizes).map(|(&p, o)| o.act(g, p)).collect();
            enc.index_of(&moved).expect("coskeleton level is stable under the action")
        });
        levels.push(obj);
        encodings[m] = Some(enc);
    }

    let mut faces = vec![Vec::new()];
    for m in 1..=n_out {
        let row = (0..=m)
            .map(|i| {
                let alpha = MonotoneMap::coface(m, i);
                (0..levels[m].size())
                    .map(|p| if m <= n { body.face(m, i)[p] } else { coords.pull_back(&encodings, &alpha, p).expect("face lands in the coskeleton") })
                    .collect()
            })
            .collect();
        faces.push(row);
    }
    let degeneracies = (0..n_out)
        .map(|m| {
            (0..=m)
                .map(|i| {
                    let alpha = MonotoneMap::codegeneracy(m, i);
                    (0..levels[m].size())
                        .map(|p| {
                            if m < n {
                                body.degeneracy(m, i)[p]
                            } else {
                                coords.pull_back(&encodings, &alpha, p).expect("degeneracy lands in the coskeleton")
                            }
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let out_body = TruncatedSimplicialObject::from_tables_unchecked(levels, faces, degeneracies);
    let object = AugmentedSimplicialObject::new_unchecked(out_body, x.base().clone(), x.augmentation().to_vec());
    Ok(Coskeleton { n, object, encodings })
}

/// Level `m` of `cosk_n(X/base)` as a limit over `D′_m`, plus the base.
///
/// The limit diagram lists the base first and then `X_φ` for every monotone
/// `φ : [i] → [m]`, `i ≤ n`, in canonical order.
pub fn coskeleton_oracle(x: &AugmentedSimplicialObject, n: usize, m: usize) -> Result<(IndexCategory, Limit)> {
    if n > x.truncation() {
        return Err(Error::OutOfTruncation(format!("cosk_{n} of an object truncated at {}", x.truncation())));
    }
    if m <= n {
        return Err(Error::InvalidInput(format!("oracle level {m} must exceed n = {n}")));
    }
    let body = x.body();
    let full = build_full_index_category(n, m);
    let mut diagram = Diagram::new(body.context());
    let base = diagram.add_object(x.base().clone());
    let slots: Vec<usize> = full.objects.iter().map(|phi| diagram.add_object(body.level(phi.source()).clone())).collect();
    for (k, phi) in full.objects.iter().enumerate() {
        let to_base = x.level_augmentation(phi.source());
        diagram.add_arrow(slots[k], base, to_base);
    }
    for a in &full.morphisms {
        // α : φ → φ′ gives α* : X_φ′ → X_φ.
        diagram.add_arrow(slots[a.target], slots[a.source], body.structure_map(&a.alpha)?);
    }
    let limit = finite_limit(&diagram)?;
    Ok((full, limit))
}

/// Checks that the oracle limit and the equalizer level are canonically bijective.
///
/// Each oracle tuple is restricted to its injective coordinates; the result must
/// be a bijection onto the equalizer tuples.
pub fn oracle_agreement(cosk: &Coskeleton, full: &IndexCategory, limit: &Limit, m: usize) -> bool {
    let Some(enc) = cosk.encoding(m) else { return false };
    let positions: Vec<usize> = enc.index.objects.iter().map(|phi| 1 + full.object_index(phi).expect("D_m is a subcategory of D′_m")).collect();
    let mut hit = vec![false; enc.tuples.len()];
    for t in &limit.tuples {
        let restricted: Vec<usize> = positions.iter().map(|&p| t[p]).collect();
        match enc.index_of(&restricted) {
            Some(k) if !hit[k] => hit[k] = true,
            _ => return false,
        }
    }
    hit.into_iter().all(|h| h)
}

/// The unit `X → cosk_n(X/base)`, truncated at `X.N`.
pub fn coskeleton_unit(x: &AugmentedSimplicialObject, n: usize) -> Result<(Coskeleton, SimplicialMorphism)> {
    coskeleton_unit_bounded(x, n, None)
}

/// As [`coskeleton_unit`], with the budget of [`coskeleton_bounded`].
pub fn coskeleton_unit_bounded(x: &AugmentedSimplicialObject, n: usize, budget: Option<usize>) -> Result<(Coskeleton, SimplicialMorphism)> {
    let top = x.truncation();
    let cosk = coskeleton_bounded(x, n, top, budget)?;
    let body = x.body();
    let mut components = Vec::with_capacity(top + 1);
    for m in 0..=top {
        if m <= n {
            components.push((0..body.level(m).size()).collect());
            continue;
        }
        let enc = cosk.encoding(m).expect("encoded");
        let pulls: Vec<Vec<usize>> = enc.index.objects.iter().map(|phi| body.structure_map(phi)).collect::<Result<_>>()?;
        let comp = (0..body.level(m).size())
            .map(|p| {
                let tuple: Vec<usize> = pulls.iter().map(|pull| pull[p]).collect();
                enc.index_of(&tuple).expect("φ*-coordinates satisfy the equalizer condition")
            })
            .collect();
        components.push(comp);
    }
    let unit = SimplicialMorphism { source: x.clone(), target: cosk.object.clone(), components };
    Ok((cosk, unit))
}

/// Whether the unit `X → cosk_n(X/base)` is a bijection through `X.N`.
pub fn is_coskeletal(x: &AugmentedSimplicialObject, n: usize) -> Result<bool> {
    let (_, unit) = coskeleton_unit(x, n)?;
    Ok(unit.is_levelwise_bijection())
}

/// `cosk_n(f)` through level `n_out`, for `f` a morphism over a common base.
pub fn coskeleton_of_morphism(f: &SimplicialMorphism, n: usize, n_out: usize) -> Result<(Coskeleton, Coskeleton, SimplicialMorphism)> {
    coskeleton_of_morphism_bounded(f, n, n_out, None)
}

/// As [`coskeleton_of_morphism`], with the budget of [`coskeleton_bounded`] on both ends.
pub fn coskeleton_of_morphism_bounded(
    f: &SimplicialMorphism,
    n: usize,
    n_out: usize,
    budget: Option<usize>,
) -> Result<(Coskeleton, Coskeleton, SimplicialMorphism)> {
    let src = coskeleton_bounded(&f.source, n, n_out, budget)?;
    let tgt = coskeleton_bounded(&f.target, n, n_out, budget)?;
    let mut components = Vec::with_capacity(n_out + 1);
    for m in 0..=n_out {
        if m <= n {
            components.push(f.components[m].clone());
            continue;
        }
        let (es, et) = (src.encoding(m).unwrap(), tgt.encoding(m).unwrap());
        let comp = es
            .tuples
            .iter()
            .map(|t| {
                let image: Vec<usize> = t.iter().zip(&es.index.objects).map(|(&p, phi)| f.components[phi.source()][p]).collect();
                et.index_of(&image).ok_or_else(|| Error::InvalidInput("morphism does not respect the coskeleton construction".into()))
            })
            .collect::<Result<Vec<usize>>>()?;
        components.push(comp);
    }
    let mor = SimplicialMorphism { source: src.object.clone(), target: tgt.object.clone(), components };
    Ok((src, tgt, mor))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::FinMorphism;
    use crate::simplicial::nerve::cech_nerve;

    fn discrete(size: usize) -> AugmentedSimplicialObject {
        let body = TruncatedSimplicialObject::constant(&FinObject::plain(size), 0);
        AugmentedSimplicialObject::over_point(body)
    }

    #[test]
    fn zero_coskeleton_of_a_pair_is_a_power() {
        let c = coskeleton(&discrete(2), 0, 4).unwrap();
        assert_eq!(c.object.body().level_sizes(), vec![2, 4, 8, 16, 32]);
        assert!(c.object.validate().valid);
    }

    #[test]
    fn copy_clause() {
        let x = cech_nerve(&FinMorphism::to_point(&FinObject::plain(2)), 2);
        let c = coskeleton(&x, 2, 2).unwrap();
        assert_eq!(c.object.body().level_sizes(), x.body().level_sizes());
        for i in 0..=2 {
            assert_eq!(c.object.body().face(2, i), x.body().face(2, i));
        }
    }

    #[test]
    fn oracle_small_cases() {
        let x = discrete(3);
        let c = coskeleton(&x, 0, 2).unwrap();
        let (full, lim) = coskeleton_oracle(&x, 0, 2).unwrap();
        assert_eq!(lim.object.size(), 27);
        assert!(oracle_agreement(&c, &full, &lim, 2));

        let empty =
            AugmentedSimplicialObject::new(TruncatedSimplicialObject::constant(&FinObject::plain(0), 0), FinObject::plain(2), vec![]).unwrap();
        let (_, lim) = coskeleton_oracle(&empty, 0, 1).unwrap();
        assert_eq!(lim.object.size(), 0);
        assert_eq!(coskeleton(&empty, 0, 3).unwrap().object.body().level_sizes(), vec![0, 0, 0, 0]);
    }

    #[test]
    fn nerve_is_zero_coskeletal() {
        let x = cech_nerve(&FinMorphism::to_point(&FinObject::plain(3)), 3);
        let (_, unit) = coskeleton_unit(&x, 0).unwrap();
        assert!(unit.validate().valid);
        assert!(unit.is_levelwise_bijection());
    }

    #[test]
    fn unit_is_identity_below_n() {
        let x = cech_nerve(&FinMorphism::to_point(&FinObject::plain(2)), 3);
        let (_, unit) = coskeleton_unit(&x, 2).unwrap();
        for m in 0..=2 {
            assert_eq!(unit.components[m], (0..x.level(m).size()).collect::<Vec<_>>());
        }
    }

    #[test]
    fn non_coskeletal_object_is_detected() {
        // A constant object on two points is 0-coskeletal only if 2 = 2^{m+1}; it is not.
        let c = AugmentedSimplicialObject::over_point(TruncatedSimplicialObject::constant(&FinObject::plain(2), 2));
        let (_, unit) = coskeleton_unit(&c, 0).unwrap();
        assert!(unit.validate().valid);
        assert_eq!(unit.first_non_bijective_level(), Some(1));
    }
}
