//! Seeded generators for the randomized suites.
//!
//! Simplicial objects are grown skeleton by skeleton: level `n` consists of
//! the degenerate points `σ*(y)` for `σ : [n] ↠ [j]`, `j < n`, plus new
//! nondegenerate orbits whose boundaries are chosen in the matching object
//! `(cosk_{n−1}(X/base))_n`. A new orbit over a boundary `b` is a coset space
//! `G/H` with `H ⊆ Stab(b)`, which keeps the action well defined.

use std::collections::HashMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fincat::{is_cover, BlowupSquare, CoverMode, FinMorphism, FinObject, Group, GroupContext};
use crate::simplex::{binomial, enumerate_surjective, epi_mono_factorization, MonotoneMap};
use crate::simplicial::{coskeleton_bounded, matching_map, AugmentedSimplicialObject, TruncatedSimplicialObject};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// One of `Z/2`, `Z/3`, `Z/4`, `S_3`.
pub fn random_group(rng: &mut impl Rng) -> Arc<Group> {
    let g = match rng.gen_range(0..4) {
        0 => Group::cyclic(2),
        1 => Group::cyclic(3),
        2 => Group::cyclic(4),
        _ => Group::symmetric(3),
    };
    Arc::new(g.expect("small groups are valid"))
}

/// A random context: plain sets with probability one half.
pub fn random_context(rng: &mut impl Rng) -> GroupContext {
    if rng.gen_bool(0.5) {
        None
    } else {
        Some(random_group(rng))
    }
}

fn empty(ctx: &GroupContext) -> FinObject {
    FinObject::trivial(0, ctx)
}

/// A random subgroup of `g` of index prime to `l` when `l` is given.
pub fn random_subgroup_of(rng: &mut impl Rng, g: &Group, within: &[usize], prime_to: Option<u64>) -> Vec<usize> {
    let options: Vec<Vec<usize>> = g
        .small_subgroups()
        .into_iter()
        .filter(|h| h.iter().all(|x| within.contains(x)))
        .filter(|h| prime_to.is_none_or(|l| !((within.len() / h.len()) as u64).is_multiple_of(l)))
        .collect();
    options.choose(rng).cloned().unwrap_or_else(|| within.to_vec())
}

/// A G-set with between `min` and `max` points, built from random coset spaces.
pub fn random_gset(rng: &mut impl Rng, ctx: &GroupContext, min: usize, max: usize) -> FinObject {
    let target = rng.gen_range(min..=max);
    let Some(g) = ctx else { return FinObject::plain(target) };
    let subs = g.small_subgroups();
    let mut x = empty(ctx);
    let mut guard = 0;
    while x.size() < target && guard < 64 {
        guard += 1;
        let h = subs.choose(rng).expect("the trivial group is a subgroup");
        if x.size() + g.order() / h.len() <= max {
            x = x.coproduct(&FinObject::cosets(g.clone(), h).expect("valid subgroup")).expect("same context");
        }
    }
    x
}

/// A random equivariant map, or `None` if some orbit of `x` has nowhere to go.
pub fn random_map(rng: &mut impl Rng, x: &FinObject, y: &FinObject) -> Option<FinMorphism> {
    let mut values = vec![usize::MAX; x.size()];
    for p in 0..x.size() {
        if values[p] != usize::MAX {
            continue;
        }
        let stab = x.stabilizer(p);
        let targets: Vec<usize> = (0..y.size()).filter(|&q| stab.iter().all(|&g| y.act(g, q) == q)).collect();
        let &q = targets.choose(rng)?;
        for g in 0..x.group_order() {
            values[x.act(g, p)] = y.act(g, q);
        }
    }
    Some(FinMorphism::new(x.clone(), y.clone(), values).expect("constructed equivariantly"))
}

/// A coset space `G/H`, `H ⊆ Stab(q)`, mapped onto the orbit of `q`.
fn orbit_over(rng: &mut impl Rng, y: &FinObject, q: usize, prime_to: Option<u64>) -> (FinObject, Vec<usize>) {
    match y.context() {
        None => (FinObject::plain(1), vec![q]),
        Some(g) => {
            let h = random_subgroup_of(rng, &g, &y.stabilizer(q), prime_to);
            let (obj, reps) = coset_space(&g, &h);
            (obj, reps.iter().map(|&r| y.act(r, q)).collect())
        }
    }
}

/// A random surjective equivariant map onto `y`: every orbit of `y` receives a
/// coset space of a subgroup of its stabilizer, plus `extra` random orbits.
pub fn random_surjection(rng: &mut impl Rng, y: &FinObject, extra: usize, prime_to: Option<u64>) -> FinMorphism {
    let mut x = empty(&y.context());
    let mut values = Vec::new();
    let mut targets: Vec<usize> = crate::fincat::orbit_data(y).iter().map(|o| o.base_point()).collect();
    if y.size() > 0 {
        targets.extend((0..extra).map(|_| rng.gen_range(0..y.size())));
    }
    for q in targets {
        let (obj, vals) = orbit_over(rng, y, q, prime_to);
        values.extend(vals);
        x = x.coproduct(&obj).expect("same context");
    }
    FinMorphism::new(x, y.clone(), values).expect("constructed equivariantly")
}

/// `G/H` together with a representative of each coset, in the numbering of [`FinObject::cosets`].
pub fn coset_space(g: &Arc<Group>, h: &[usize]) -> (FinObject, Vec<usize>) {
    let obj = FinObject::cosets(g.clone(), h).expect("valid subgroup");
    let mut reps = vec![usize::MAX; obj.size()];
    for a in g.elements() {
        let c = obj.act(a, 0);
        if reps[c] == usize::MAX {
            reps[c] = a;
        }
    }
    (obj, reps)
}

/// A map with every fiber of size `d`, `1 ≤ d ≤ max_degree`: over each orbit
/// `G/K` of the target sits a union of `G/H_i`, `H_i ⊆ K`, with `Σ [K : H_i] = d`.
pub fn random_fiber_constant_map(rng: &mut impl Rng, ctx: &GroupContext, max_base: usize, max_degree: usize) -> FinMorphism {
    let y = random_gset(rng, ctx, 1, max_base);
    let d = rng.gen_range(1..=max_degree);
    let mut x = empty(ctx);
    let mut values = Vec::new();
    for o in crate::fincat::orbit_data(&y) {
        let q = o.base_point();
        let mut remaining = d;
        while remaining > 0 {
            let (obj, reps) = match ctx {
                None => (FinObject::plain(1), vec![0]),
                Some(g) => {
                    let fits: Vec<Vec<usize>> = g
                        .small_subgroups()
                        .into_iter()
                        .filter(|h| h.iter().all(|a| o.stabilizer.contains(a)) && o.stabilizer.len() / h.len() <= remaining)
                        .collect();
                    let h = fits.choose(rng).cloned().unwrap_or_else(|| o.stabilizer.clone());
                    coset_space(g, &h)
                }
            };
            let over_q = reps.iter().filter(|&&r| y.act(r, q) == q).count();
            remaining -= over_q;
            for &r in &reps {
                values.push(y.act(r, q));
            }
            x = x.coproduct(&obj).expect("same context");
        }
    }
    FinMorphism::new(x, y, values).expect("constructed equivariantly")
}

/// A valid abstract blow-up square: `Z ⊆ X` a union of orbits, `Z′ → Z` random,
/// and `X′ = (X ∖ Z) ⊔ Z′`.
pub fn random_blowup_square(rng: &mut impl Rng, ctx: &GroupContext, max_size: usize) -> BlowupSquare {
    let x = random_gset(rng, ctx, 0, max_size);
    let orbits = crate::fincat::orbit_data(&x);
    let in_z: Vec<bool> = orbits.iter().map(|_| rng.gen_bool(0.5)).collect();
    let mut z_points = Vec::new();
    let mut rest = Vec::new();
    for (o, &z) in orbits.iter().zip(&in_z) {
        if z {
            z_points.extend(&o.points)
        } else {
            rest.extend(&o.points)
        }
    }
    z_points.sort_unstable();
    rest.sort_unstable();
    let sub = |pts: &[usize]| FinObject::from_fn(ctx, pts.len(), |g, k| pts.binary_search(&x.act(g, pts[k])).expect("unions of orbits are stable"));
    let z = sub(&z_points);
    let complement = sub(&rest);
    let zp = loop {
        let e = random_gset(rng, ctx, 0, max_size);
        if z.size() == 0 && e.size() > 0 {
            continue;
        }
        if let Some(m) = random_map(rng, &e, &z) {
            break m;
        }
    };
    let xp = complement.coproduct(zp.source()).expect("same context");
    let c = complement.size();
    let bottom = FinMorphism::new(z.clone(), x.clone(), z_points.clone()).expect("inclusion");
    let mut right_values: Vec<usize> = rest.clone();
    right_values.extend(zp.values().iter().map(|&q| z_points[q]));
    let right = FinMorphism::new(xp.clone(), x, right_values).expect("equivariant");
    let top = FinMorphism::new(zp.source().clone(), xp, (c..c + zp.source().size()).collect()).expect("inclusion");
    BlowupSquare { top, left: zp, bottom, right }
}

/// Size limits for random simplicial objects.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SizeBound {
    /// Every level, degenerate points included, has at most this many points.
    Total(usize),
    /// At most this many random extra nondegenerate orbits per level; coverage witnesses are not counted.
    ExtraOrbits(usize),
}

struct NdLevel {
    /// `faces[y][k]` is the point `d_k y` of the previous level; for vertices, the base point below.
    faces: Vec<Vec<usize>>,
    /// `action[g][y]`.
    action: Vec<Vec<usize>>,
}

/// Grows a truncated augmented simplicial G-set one level at a time.
pub struct SkeletalBuilder {
    context: GroupContext,
    base: FinObject,
    nd: Vec<NdLevel>,
    points: Vec<Vec<(MonotoneMap, usize)>>,
    index: Vec<HashMap<(MonotoneMap, usize), usize>>,
    /// Matching object of the open level, with the face tuple of each point.
    matching: Option<(FinObject, Vec<Vec<usize>>)>,
    budget: Option<usize>,
}

impl SkeletalBuilder {
    pub fn new(base: FinObject) -> Self {
        SkeletalBuilder { context: base.context(), base, nd: Vec::new(), points: Vec::new(), index: Vec::new(), matching: None, budget: None }
    }

    /// Caps the number of points of each matching object; see [`coskeleton_bounded`].
    pub fn with_budget(mut self, budget: Option<usize>) -> Self {
        self.budget = budget;
        self
    }

    fn order(&self) -> usize {
        self.base.group_order()
    }

    /// Number of finished levels.
    pub fn levels(&self) -> usize {
        self.points.len()
    }

    pub fn object(&self) -> AugmentedSimplicialObject {
        assert!(!self.points.is_empty(), "no finished level");
        let top = self.points.len() - 1;
        let levels = (0..=top)
            .map(|n| {
                let pts = &self.points[n];
                FinObject::from_fn(&self.context, pts.len(), |g, p| {
                    let (sigma, y) = &pts[p];
                    let j = sigma.target();
                    self.index[n][&(sigma.clone(), self.nd[j].action[g][*y])]
                })
            })
            .collect();
        let faces = (0..=top).map(|n| if n == 0 { Vec::new() } else { (0..=n).map(|i| self.face_table(n, i)).collect() }).collect();
        let degeneracies = (0..top)
            .map(|n| {
                (0..=n)
                    .map(|i| {
                        let s = MonotoneMap::codegeneracy(n, i);
                        self.points[n].iter().map(|(sigma, y)| self.index[n + 1][&(sigma.after(&s).expect("composable"), *y)]).collect()
                    })
                    .collect()
            })
            .collect();
        let body = TruncatedSimplicialObject::from_tables_unchecked(levels, faces, degeneracies);
        let aug = self.points[0].iter().map(|(_, y)| self.nd[0].faces[*y][0]).collect();
        AugmentedSimplicialObject::new_unchecked(body, self.base.clone(), aug)
    }

    fn face_table(&self, n: usize, i: usize) -> Vec<usize> {
        let delta = MonotoneMap::coface(n, i);
        self.points[n]
            .iter()
            .map(|(sigma, y)| {
                let (s2, d2) = epi_mono_factorization(&sigma.after(&delta).expect("composable"));
                if d2.is_identity() {
                    self.index[n - 1][&(s2, *y)]
                } else {
                    let j = sigma.target();
                    let k = d2.missing_values()[0];
                    let (tau, z) = &self.points[j - 1][self.nd[j].faces[*y][k]];
                    self.index[n - 1][&(tau.after(&s2).expect("composable"), *z)]
                }
            })
            .collect()
    }

    /// Opens the next level and computes its matching object.
    pub fn begin_level(&mut self) -> Result<&FinObject> {
        let n = self.points.len();
        self.nd.push(NdLevel { faces: Vec::new(), action: vec![Vec::new(); self.order()] });
        let matching = if n == 0 {
            (self.base.clone(), (0..self.base.size()).map(|b| vec![b]).collect())
        } else {
            let c = coskeleton_bounded(&self.object(), n - 1, n, self.budget)?;
            let enc = c.encoding(n).expect("encoded level");
            let slots: Vec<usize> = (0..=n).map(|k| enc.index.object_index(&MonotoneMap::coface(n, k)).expect("coface")).collect();
            let faces = enc.tuples.iter().map(|t| slots.iter().map(|&s| t[s]).collect()).collect();
            (c.object.level(n).clone(), faces)
        };
        self.matching = Some(matching);
        Ok(&self.matching.as_ref().unwrap().0)
    }

    pub fn matching(&self) -> &FinObject {
        &self.matching.as_ref().expect("open level").0
    }

    /// Adds the orbit `G/H` of nondegenerate simplices with boundary `G/H → G·m`.
    pub fn add_orbit(&mut self, m: usize, subgroup: &[usize]) -> Result<usize> {
        let (mobj, mfaces) = self.matching.as_ref().ok_or_else(|| Error::InvalidInput("no open level".into()))?;
        if subgroup.iter().any(|&h| mobj.act(h, m) != m) {
            return Err(Error::InvalidInput("subgroup is not contained in the stabilizer of the boundary".into()));
        }
        let (reps, coset_action): (Vec<usize>, Vec<Vec<usize>>) = match &self.context {
            None => (vec![0], vec![vec![0]]),
            Some(g) => {
                let (obj, reps) = coset_space(g, subgroup);
                let action = (0..g.order()).map(|a| (0..obj.size()).map(|c| obj.act(a, c)).collect()).collect();
                (reps, action)
            }
        };
        let level = self.nd.last_mut().expect("open level");
        let offset = level.faces.len();
        for &r in &reps {
            level.faces.push(mfaces[mobj.act(r, m)].clone());
        }
        for (g, row) in coset_action.iter().enumerate() {
            level.action[g].extend(row.iter().map(|&c| offset + c));
        }
        Ok(reps.len())
    }

    /// Size of level `m ≥ n` if the open level `n` gains `extra` more simplices.
    pub fn projected_size(&self, m: usize, extra: usize) -> usize {
        self.nd.iter().enumerate().map(|(j, l)| binomial(m, j) * l.faces.len()).sum::<usize>() + binomial(m, self.nd.len() - 1) * extra
    }

    pub fn finish_level(&mut self) {
        let n = self.points.len();
        let mut pts = Vec::new();
        for j in 0..=n {
            for sigma in enumerate_surjective(n, j) {
                for y in 0..self.nd[j].faces.len() {
                    pts.push((sigma.clone(), y));
                }
            }
        }
        let idx = pts.iter().cloned().enumerate().map(|(k, p)| (p, k)).collect();
        self.points.push(pts);
        self.index.push(idx);
        self.matching = None;
    }

    /// The map from the open level (as built so far) to its matching object.
    pub fn current_matching_map(&mut self) -> Result<FinMorphism> {
        let n = self.points.len();
        let saved = self.matching.clone();
        self.finish_level();
        let x = self.object();
        let result = if n == 0 { Ok(x.augmentation_morphism()) } else { matching_map(&x, n - 1) };
        self.points.pop();
        self.index.pop();
        self.matching = saved;
        result
    }
}

impl Clone for NdLevel {
    fn clone(&self) -> Self {
        NdLevel { faces: self.faces.clone(), action: self.action.clone() }
    }
}

/// Parameters of [`random_simplicial`].
#[derive(Clone, Copy, Debug)]
pub struct SimplicialParams {
    pub truncation: usize,
    pub bound: SizeBound,
    /// Probability of trying one more random orbit at each step.
    pub extra_probability: f64,
    /// Cover mode whose witnesses are forced at every level, if any.
    pub hypercover: Option<CoverMode>,
    /// Matching-object budget; generation fails with [`Error::Budget`] beyond it.
    pub budget: Option<usize>,
}

/// A random augmented simplicial object over `base`.
pub fn random_simplicial(rng: &mut impl Rng, base: &FinObject, params: SimplicialParams) -> Result<AugmentedSimplicialObject> {
    let mut b = SkeletalBuilder::new(base.clone()).with_budget(params.budget);
    for n in 0..=params.truncation {
        b.begin_level()?;
        if let Some(mode) = params.hypercover {
            let f = b.current_matching_map()?;
            let report = is_cover(&f, mode);
            for e in report.entries.iter().filter(|e| e.witness.is_none()) {
                let h = witness_subgroup(rng, b.matching(), e.base_point, mode);
                b.add_orbit(e.base_point, &h)?;
            }
        }
        let mut extras = 0;
        while rng.gen_bool(params.extra_probability) {
            let msize = b.matching().size();
            if msize == 0 {
                break;
            }
            let m = rng.gen_range(0..msize);
            let stab = b.matching().stabilizer(m);
            let h = match &base.context() {
                None => vec![0],
                Some(g) => random_subgroup_of(rng, g, &stab, None),
            };
            let orbit = b.matching().group_order() / h.len();
            let fits = match params.bound {
                SizeBound::Total(k) => (n..=params.truncation).all(|l| b.projected_size(l, orbit) <= k),
                SizeBound::ExtraOrbits(k) => extras < k,
            };
            if !fits {
                break;
            }
            b.add_orbit(m, &h)?;
            extras += 1;
        }
        b.finish_level();
    }
    Ok(b.object())
}

fn witness_subgroup(rng: &mut impl Rng, m: &FinObject, point: usize, mode: CoverMode) -> Vec<usize> {
    let stab = m.stabilizer(point);
    match (mode, m.context()) {
        (CoverMode::Cdh, _) | (_, None) => stab,
        (CoverMode::Ldh(l), Some(g)) => random_subgroup_of(rng, &g, &stab, Some(l)),
    }
}

/// A random plain-set or G-set object with every level of at most `max_level` points.
pub fn random_truncated(rng: &mut impl Rng, ctx: &GroupContext, truncation: usize, max_level: usize) -> Result<AugmentedSimplicialObject> {
    let base = FinObject::point(ctx);
    let params = SimplicialParams { truncation, bound: SizeBound::Total(max_level), extra_probability: 0.7, hypercover: None, budget: None };
    loop {
        let x = random_simplicial(rng, &base, params)?;
        if x.level(0).size() > 0 {
            return Ok(x);
        }
    }
}

/// Matching-object budget for [`random_hypercover`].
pub const HYPERCOVER_BUDGET: usize = 1 << 14;

/// A random hypercover in the given mode: a random base with `1..=max_base` points, forced
/// witnesses at every level and at most `max_extra` random extra orbits per level.
/// Fails with [`Error::Budget`] when a matching object outgrows [`HYPERCOVER_BUDGET`].
pub fn random_hypercover(
    rng: &mut impl Rng,
    ctx: &GroupContext,
    mode: CoverMode,
    truncation: usize,
    max_base: usize,
    max_extra: usize,
) -> Result<AugmentedSimplicialObject> {
    let base = random_gset(rng, ctx, 1, max_base);
    let params = SimplicialParams {
        truncation,
        bound: SizeBound::ExtraOrbits(max_extra),
        extra_probability: 0.5,
        hypercover: Some(mode),
        budget: Some(HYPERCOVER_BUDGET),
    };
    random_simplicial(rng, &base, params)
}

/// A random group among those whose order is prime to `l`.
pub fn random_group_prime_to(rng: &mut impl Rng, l: u64) -> Arc<Group> {
    loop {
        let g = random_group(rng);
        if !(g.order() as u64).is_multiple_of(l) {
            return g;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{finite_free_degree, validate_blowup_square};
    use crate::simplicial::is_hypercover;

    #[test]
    fn random_squares_are_valid() {
        let mut r = rng(1);
        for _ in 0..50 {
            let ctx = random_context(&mut r);
            let sq = random_blowup_square(&mut r, &ctx, 5);
            let check = validate_blowup_square(&sq);
            assert!(check.valid, "{:?}", check.reason);
        }
    }

    #[test]
    fn random_fiber_constant_maps_have_a_degree() {
        let mut r = rng(2);
        for _ in 0..50 {
            let ctx = random_context(&mut r);
            let p = random_fiber_constant_map(&mut r, &ctx, 3, 3);
            assert!(finite_free_degree(&p).is_some());
        }
    }

    #[test]
    fn random_objects_are_simplicial_and_bounded() {
        let mut r = rng(3);
        for _ in 0..40 {
            let ctx = random_context(&mut r);
            let n = r.gen_range(0..=3);
            let x = random_truncated(&mut r, &ctx, n, 4).unwrap();
            let check = x.validate();
            assert!(check.valid, "{:?}", check.failure);
            assert!(x.body().level_sizes().iter().all(|&s| s <= 4));
        }
    }

    #[test]
    fn random_hypercovers_are_hypercovers() {
        let mut r = rng(4);
        for _ in 0..20 {
            let ctx = random_context(&mut r);
            let mode = if r.gen_bool(0.5) { CoverMode::Cdh } else { CoverMode::Ldh(5) };
            let x = random_hypercover(&mut r, &ctx, mode, 3, 3, 1).unwrap();
            assert!(x.validate().valid);
            assert!(is_hypercover(&x, mode, 3).unwrap().is_hypercover);
        }
    }

    #[test]
    fn builder_reproduces_a_loop() {
        let mut b = SkeletalBuilder::new(FinObject::plain(1));
        b.begin_level().unwrap();
        b.add_orbit(0, &[0]).unwrap();
        b.finish_level();
        assert_eq!(b.begin_level().unwrap().size(), 1);
        b.add_orbit(0, &[0]).unwrap();
        b.finish_level();
        let x = b.object();
        assert_eq!(x.body().level_sizes(), vec![1, 2]);
        assert!(x.validate().valid);
    }

    #[test]
    fn same_seed_same_object() {
        let make = || {
            let mut r = rng(9);
            let ctx = random_context(&mut r);
            random_truncated(&mut r, &ctx, 2, 4).unwrap().body().level_sizes()
        };
        assert_eq!(make(), make());
    }
}
