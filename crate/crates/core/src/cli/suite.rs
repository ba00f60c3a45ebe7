//! Seeded randomized property suites, one per acceptance criterion.
//!
//! Every instance draws from its own generator `rng(seed, criterion, index)`, so a
//! failure message names everything needed to replay it.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;

use crate::descent::{
    apply_functor, descent_check, descent_spectral_sequence, free_chains, orbit_chains, product_chains, section_contraction, simplicial_circle,
    simplicial_to_chain_homotopy, verify_blowup_triangle, verify_functoriality, verify_transfer, HomologyFunctor,
};
use crate::error::{Error, Result};
use crate::fincat::{CoverMode, FinMorphism, FinObject, Group, GroupContext};
use crate::homalg::{determinant, is_quasi_iso, local_valuations, smith_normal_form, verified_count, ChainComplex, Matrix, RingSpec};
use crate::random::{
    random_blowup_square, random_context, random_fiber_constant_map, random_group, random_group_prime_to, random_gset, random_hypercover, random_map,
    random_truncated,
};
use crate::simplicial::{
    bisimplicial_fiber_powers, cech_nerve, coskeleton_bounded, coskeleton_of_morphism_bounded, coskeleton_oracle, coskeleton_unit_bounded,
    fiber_power, homotopy_from_coskeletal, oracle_agreement, tower, AugmentedSimplicialObject, SimplicialMorphism,
};

/// Points allowed in one coskeleton level before an instance is set aside.
pub const COSKELETON_BUDGET: usize = 1 << 13;

#[derive(Clone, Debug, Serialize)]
pub struct CriterionOutcome {
    pub id: u8,
    pub name: String,
    pub instances: usize,
    /// Individual checks, usually several per instance.
    pub checks: usize,
    /// Instances set aside by a size budget, with the reason.
    pub skipped: usize,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
}

impl CriterionOutcome {
    pub fn new(id: u8, name: &str) -> Self {
        CriterionOutcome { id, name: name.into(), instances: 0, checks: 0, skipped: 0, failures: Vec::new(), notes: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.checks > 0
    }

    pub fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn error(&mut self, instance: String, e: Error) {
        self.checks += 1;
        self.failures.push(format!("{instance}: {e}"));
    }

    /// One line: `criterion 3 PASS (instances 120, checks 4100, skipped 2) name`.
    pub fn summary(&self) -> String {
        let mut s = format!(
            "criterion {} {} (instances {}, checks {}, skipped {}) {}",
            self.id,
            if self.passed() { "PASS" } else { "FAIL" },
            self.instances,
            self.checks,
            self.skipped,
            self.name
        );
        for n in &self.notes {
            s.push_str("; ");
            s.push_str(n);
        }
        s
    }
}

pub fn instance_rng(seed: u64, criterion: u8, index: usize) -> rand_chacha::ChaCha8Rng {
    crate::random::rng(seed ^ (u64::from(criterion) << 56) ^ (index as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn functors(ring: RingSpec) -> Vec<Box<dyn HomologyFunctor>> {
    vec![Box::new(free_chains(ring)), Box::new(product_chains(&simplicial_circle(), ring).expect("the circle is plain"))]
}

fn all_functors(ring: RingSpec) -> Vec<Box<dyn HomologyFunctor>> {
    let mut v = functors(ring);
    v.push(Box::new(orbit_chains(ring)));
    v
}

/// Equalizer levels against the limit over `D′_m`, for every `n ≤ N` and `n < m ≤ N + 1`.
pub fn coskeleton_oracle_suite(seed: u64, count: usize) -> CriterionOutcome {
    let mut out = CriterionOutcome::new(1, "coskeleton equalizer agrees with the limit oracle");
    for i in 0..count {
        let mut r = instance_rng(seed, 1, i);
        let ctx = random_context(&mut r);
        let trunc = r.gen_range(0..=3);
        let x = match random_truncated(&mut r, &ctx, trunc, 4) {
            Ok(x) => x,
            Err(e) => {
                out.error(format!("instance {i}"), e);
                continue;
            }
        };
        out.instances += 1;
        for n in 0..=trunc {
            let top = trunc + 1;
            let c = match coskeleton_bounded(&x, n, top, Some(COSKELETON_BUDGET)) {
                Ok(c) => c,
                Err(Error::Budget(_)) => {
                    out.skipped += 1;
                    continue;
                }
                Err(e) => {
                    out.error(format!("instance {i}, n = {n}"), e);
                    continue;
                }
            };
            out.check(c.object.validate().valid, || format!("instance {i}: cosk_{n} is not simplicial"));
            for m in n + 1..=top {
                match coskeleton_oracle(&x, n, m) {
                    Ok((full, lim)) => out.check(oracle_agreement(&c, &full, &lim, m), || format!("instance {i}: cosk_{n} level {m} disagrees")),
                    Err(e) => out.error(format!("instance {i}, n = {n}, m = {m}"), e),
                }
            }
        }
    }
    out
}

/// For `W = cosk_N X` through level 5 and `0 ≤ n ≤ m ≤ 3`: the units `cosk_n W → cosk_m cosk_n W`
/// and `cosk_n(W → cosk_m W)` are levelwise bijections.
pub fn composition_suite(seed: u64, count: usize) -> CriterionOutcome {
    const TOP: usize = 4;
    let mut out = CriterionOutcome::new(2, "cosk_m cosk_n = cosk_n = cosk_n cosk_m for n ≤ m");
    let mut pairs = 0usize;
    let mut rejected = 0usize;
    for i in 0..count {
        let mut r = instance_rng(seed, 2, i);
        let ctx = random_context(&mut r);
        let trunc = r.gen_range(0..=3);
        let Ok(x) = random_truncated(&mut r, &ctx, trunc, 4) else { continue };
        out.instances += 1;
        let w = match coskeleton_bounded(&x, trunc, TOP, Some(COSKELETON_BUDGET)) {
            Ok(w) => w.object,
            Err(Error::Budget(_)) => {
                out.skipped += 1;
                continue;
            }
            Err(e) => {
                out.error(format!("instance {i}"), e);
                continue;
            }
        };
        let budget = Some(COSKELETON_BUDGET);
        let lower: Vec<Result<AugmentedSimplicialObject>> = (0..=3).map(|n| coskeleton_bounded(&w, n, TOP, budget).map(|c| c.object)).collect();
        for m in 0..=3 {
            let unit_w = coskeleton_unit_bounded(&w, m, budget);
            for n in 0..=m {
                pairs += 1;
                let res = (|| -> Result<(bool, bool)> {
                    let a = reuse(&lower[n])?;
                    let (_, unit) = coskeleton_unit_bounded(a, m, budget)?;
                    let (_, u) = reuse(&unit_w)?;
                    let (_, _, cosk_u) = coskeleton_of_morphism_bounded(u, n, TOP, budget)?;
                    Ok((unit.is_levelwise_bijection(), cosk_u.is_levelwise_bijection()))
                })();
                match res {
                    Ok((left, right)) => {
                        out.check(left, || format!("instance {i}: cosk_{n} → cosk_{m} cosk_{n} is not bijective"));
                        out.check(right, || format!("instance {i}: cosk_{n} → cosk_{n} cosk_{m} is not bijective"));
                    }
                    Err(Error::Budget(_)) => rejected += 1,
                    Err(e) => out.error(format!("instance {i}, (n, m) = ({n}, {m})"), e),
                }
            }
        }
    }
    out.notes.push(format!("budget {COSKELETON_BUDGET} set aside {rejected} of {pairs} (n, m) pairs and {} objects", out.skipped));
    out
}

/// A cached result, with budget failures kept recognisable.
fn reuse<T>(r: &Result<T>) -> Result<&T> {
    r.as_ref().map_err(|e| match e {
        Error::Budget(m) => Error::Budget(m.clone()),
        other => Error::InvalidInput(other.to_string()),
    })
}

/// `Y ⊔ W → Y`, identity on `Y` and random on `W`, with the inclusion of `Y` as section.
pub fn random_split_surjection(r: &mut impl Rng, ctx: &GroupContext, max: usize) -> (FinMorphism, FinMorphism) {
    let y = random_gset(r, ctx, 1, max);
    let w = random_gset(r, ctx, 0, max);
    let g = random_map(r, &w, &y);
    let w = if g.is_some() { w } else { FinObject::trivial(0, ctx) };
    let x = y.coproduct(&w).expect("same context");
    let mut values: Vec<usize> = (0..y.size()).collect();
    if let Some(g) = g {
        values.extend_from_slice(g.values());
    }
    let f = FinMorphism::new(x.clone(), y.clone(), values).expect("equivariant");
    let s = FinMorphism::new(y.clone(), x, (0..y.size()).collect()).expect("inclusion");
    (f, s)
}

/// `s ∘ f` on levels of the nerve: `(x_0, …, x_m) ↦ (s f x_0, …, s f x_0)`.
fn section_composite(f: &FinMorphism, s: &FinMorphism, nerve: &AugmentedSimplicialObject) -> SimplicialMorphism {
    let components = (0..=nerve.truncation())
        .map(|m| {
            let fp = fiber_power(f, m + 1);
            fp.tuples.iter().map(|t| fp.index_of(&vec![s.apply(f.apply(t[0])); m + 1]).expect("constant tuples lie in the fiber power")).collect()
        })
        .collect();
    SimplicialMorphism { source: nerve.clone(), target: nerve.clone(), components }
}

fn prism_checks(
    out: &mut CriterionOutcome,
    label: &str,
    f: &SimplicialMorphism,
    g: &SimplicialMorphism,
    n: usize,
    funcs: &[Box<dyn HomologyFunctor>],
) {
    let h = match homotopy_from_coskeletal(f, g, n) {
        Ok(h) => h,
        Err(e) => return out.error(label.into(), e),
    };
    out.check(h.validate().valid, || format!("{label}: homotopy is not natural"));
    let top = h.truncation();
    for func in funcs {
        let res = (|| -> Result<bool> {
            let a = apply_functor(func.as_ref(), &h.source, top)?;
            let b = apply_functor(func.as_ref(), &h.target, top)?;
            Ok(simplicial_to_chain_homotopy(func.as_ref(), &h, &a, &b)?.verified)
        })();
        match res {
            Ok(ok) => out.check(ok, || format!("{label}: prism fails for {}", func.name())),
            Err(e) => out.error(format!("{label}, {}", func.name()), e),
        }
    }
}

/// Homotopies from coskeletal data and their prisms: nerves of split surjections against
/// the point, and every face/degeneracy pair of the fiber-power grid of a tower stage.
pub fn homotopy_suite(seed: u64, count: usize) -> CriterionOutcome {
    let mut out = CriterionOutcome::new(3, "simplicial homotopies from coskeletal data give chain homotopies");
    for i in 0..count {
        let mut r = instance_rng(seed, 3, i);
        let ctx = random_context(&mut r);
        out.instances += 1;
        let (f, s) = random_split_surjection(&mut r, &ctx, 4);
        let nerve = cech_nerve(&f, 3);
        if nerve.body().level_sizes().iter().any(|&k| k > MAX_LEVEL) {
            out.skipped += 1;
        } else {
            let composite = section_composite(&f, &s, &nerve);
            prism_checks(
                &mut out,
                &format!("instance {i} nerve"),
                &composite,
                &SimplicialMorphism::identity(&nerve),
                0,
                &all_functors(RingSpec::Integers),
            );
        }

        let trunc = r.gen_range(1..=2);
        let Ok(x) = random_truncated(&mut r, &ctx, trunc, 4) else { continue };
        let n = r.gen_range(1..=trunc);
        let Ok(t) = tower(&x, trunc) else {
            out.skipped += 1;
            continue;
        };
        let stage = t.stages.iter().find(|st| st.n == n).expect("stage n exists");
        let grid = match bisimplicial_fiber_powers(&stage.v, trunc, 2) {
            Ok(g) => g,
            Err(e) => {
                out.error(format!("instance {i} grid"), e);
                continue;
            }
        };
        if grid.rows.iter().any(|row| row.body().level_sizes().iter().any(|&k| k > MAX_LEVEL)) {
            out.skipped += 1;
            continue;
        }
        let funcs = functors(RingSpec::Integers);
        for q in 1..=2 {
            let faces: Vec<SimplicialMorphism> = (0..=q).map(|k| grid.vertical_face(q, k)).collect();
            for a in 0..=q {
                for b in a + 1..=q {
                    prism_checks(&mut out, &format!("instance {i} row {q} (d_{a}, d_{b})"), &faces[a], &faces[b], n, &funcs);
                }
                for j in 0..q {
                    let sd = grid.vertical_degeneracy(q - 1, j).after(&faces[a]).expect("composable");
                    prism_checks(
                        &mut out,
                        &format!("instance {i} row {q} (s_{j} d_{a}, id)"),
                        &sd,
                        &SimplicialMorphism::identity(&grid.rows[q]),
                        n,
                        &funcs,
                    );
                }
            }
        }
    }
    out
}

/// Extra-degeneracy contractions of nerves of split surjections, cross-checked by homology.
pub fn contraction_suite(seed: u64, count: usize) -> CriterionOutcome {
    let mut out = CriterionOutcome::new(4, "split surjections: contraction and quasi-isomorphism agree");
    for i in 0..count {
        let mut r = instance_rng(seed, 4, i);
        let ctx = random_context(&mut r);
        let (f, s) = random_split_surjection(&mut r, &ctx, 4);
        let n = r.gen_range(1..=3);
        out.instances += 1;
        for func in all_functors(RingSpec::Integers) {
            let res = (|| -> Result<(bool, bool)> {
                let c = section_contraction(func.as_ref(), &f, &s, n)?;
                let q = is_quasi_iso(&c.applied.augmentation, n - 1, RingSpec::Integers)?;
                Ok((c.verified, q.verdict.is_quasi_iso()))
            })();
            match res {
                Ok((contracted, qi)) => {
                    out.check(contracted, || format!("instance {i}: contraction fails for {}", func.name()));
                    out.check(qi, || format!("instance {i}: ε is not a quasi-isomorphism for {}", func.name()));
                }
                Err(e) => out.error(format!("instance {i}, {}", func.name()), e),
            }
        }
    }
    out
}

fn descent_runs(
    out: &mut CriterionOutcome,
    label: &str,
    x: &AugmentedSimplicialObject,
    mode: CoverMode,
    n: usize,
    funcs: &[Box<dyn HomologyFunctor>],
) {
    for func in funcs {
        match descent_check(func.as_ref(), x, mode, n) {
            Ok(rep) => {
                out.check(rep.theorem_applies, || format!("{label}: hypotheses not met for {}", func.name()));
                out.check(rep.verdict.is_quasi_iso(), || format!("{label}: {} fails at degree {:?}", func.name(), rep.verdict.failure_degree()));
            }
            Err(e) => out.error(format!("{label}, {}", func.name()), e),
        }
    }
}

/// Largest level the suites feed to a functor; bigger random instances are redrawn or skipped.
pub const MAX_LEVEL: usize = 160;

/// Draws hypercovers until every level fits under [`MAX_LEVEL`]; each oversized draw counts as skipped.
fn sized_hypercover(
    out: &mut CriterionOutcome,
    r: &mut impl Rng,
    ctx: &GroupContext,
    mode: CoverMode,
    n: usize,
) -> Result<Option<AugmentedSimplicialObject>> {
    for _ in 0..16 {
        match random_hypercover(r, ctx, mode, n, 3, 1) {
            Ok(x) if x.body().level_sizes().iter().all(|&k| k <= MAX_LEVEL) => return Ok(Some(x)),
            Ok(_) | Err(Error::Budget(_)) => out.skipped += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}

/// Random cdh-hypercovers over plain sets and G-sets with the integers.
pub fn cdh_descent_suite(seed: u64, count: usize) -> CriterionOutcome {
    let mut out = CriterionOutcome::new(5, "cdh-hypercovers descend with integer coefficients");
    let mut plain = 0;
    let goal = out.instances + count;
    for i in 0..4 * count {
        if out.instances >= goal {
            break;
        }
        let mut r = instance_rng(seed, 5, i);
        let ctx = if i % 2 == 0 { None } else { Some(random_group(&mut r)) };
        let n = r.gen_range(1..=4);
        let x = match sized_hypercover(&mut out, &mut r, &ctx, CoverMode::Cdh, n) {
            Ok(Some(x)) => x,
            Ok(None) => continue,
            Err(e) => {
                out.error(format!("instance {i}"), e);
                continue;
            }
        };
        out.instances += 1;
        plain += usize::from(ctx.is_none());
        descent_runs(&mut out, &format!("instance {i} (N = {n})"), &x, CoverMode::Cdh, n, &functors(RingSpec::Integers));
    }
    out.notes.push(format!("{plain} over plain sets, {} over G-sets", out.instances - plain));
    out
}

/// The bar complex of `Z/p` against the point.
pub fn group_nerve(order: usize, n: usize) -> AugmentedSimplicialObject {
    let g = std::sync::Arc::new(Group::cyclic(order).expect("cyclic groups are valid"));
    let (x, _) = crate::random::coset_space(&g, &[0]);
    cech_nerve(&FinMorphism::to_point(&x), n)
}

/// The fixed counterexamples, and random ldh(l)-hypercovers over groups of order prime to `l`.
pub fn ldh_descent_suite(seed: u64, count: usize) -> CriterionOutcome {
    let mut out = CriterionOutcome::new(6, "orbit chains: Z/2 and Z/3 counterexamples, ldh descent after localizing");
    for (order, l) in [(2usize, 3u64), (3, 2)] {
        let x = group_nerve(order, 4);
        out.instances += 1;
        let label = format!("Z/{order}");
        match descent_check(&orbit_chains(RingSpec::Integers), &x, CoverMode::Ldh(l), 4) {
            Ok(rep) => {
                let torsion = |k: usize| rep.table[k].source.torsion_strings();
                let p = order.to_string();
                out.check(rep.table[0].source.rank == 1 && torsion(0).is_empty(), || format!("{label}: H_0 ≠ Z"));
                out.check(rep.table[1].source.rank == 0 && torsion(1) == [p.clone()], || format!("{label}: H_1 = {}", rep.table[1].source));
                out.check(rep.table[2].source.is_zero(), || format!("{label}: H_2 = {}", rep.table[2].source));
                out.check(rep.table[3].source.rank == 0 && torsion(3) == [p.clone()], || format!("{label}: H_3 = {}", rep.table[3].source));
                out.check(rep.verdict.failure_degree() == Some(1), || format!("{label}: integer verdict {:?}", rep.verdict));
            }
            Err(e) => out.error(label.clone(), e),
        }
        match descent_check(&orbit_chains(RingSpec::Localized(l)), &x, CoverMode::Ldh(l), 4) {
            Ok(rep) => {
                out.check(rep.theorem_applies, || format!("{label}: ldh:{l} hypotheses not met"));
                out.check(rep.verdict.is_quasi_iso() && rep.window == 3, || format!("{label}: int-local:{l} verdict {:?}", rep.verdict));
            }
            Err(e) => out.error(label, e),
        }
    }
    let goal = out.instances + count;
    for i in 0..4 * count {
        if out.instances >= goal {
            break;
        }
        let mut r = instance_rng(seed, 6, i);
        let l = [2u64, 3][i % 2];
        let g = random_group_prime_to(&mut r, l);
        let n = r.gen_range(1..=3);
        let mode = CoverMode::Ldh(l);
        let x = match sized_hypercover(&mut out, &mut r, &Some(g), mode, n) {
            Ok(Some(x)) => x,
            Ok(None) => continue,
            Err(e) => {
                out.error(format!("instance {i}"), e);
                continue;
            }
        };
        out.instances += 1;
        descent_runs(&mut out, &format!("instance {i} (l = {l}, N = {n})"), &x, mode, n, &all_functors(RingSpec::Localized(l)));
    }
    out
}

/// Blow-up triangles on random squares, transfers with base change, and functoriality.
pub fn axiom_suite(seed: u64, count: usize) -> CriterionOutcome {
    let mut out = CriterionOutcome::new(7, "blow-up triangles and transfers");
    for i in 0..count {
        let mut r = instance_rng(seed, 7, i);
        let ctx = random_context(&mut r);
        out.instances += 1;
        let sq = random_blowup_square(&mut r, &ctx, 5);
        let p = random_fiber_constant_map(&mut r, &ctx, 3, 3);
        let test_source = random_gset(&mut r, &ctx, 1, 4);
        let test = random_map(&mut r, &test_source, p.target());
        let g2_target = random_gset(&mut r, &ctx, 1, 3);
        let g2 = random_map(&mut r, p.target(), &g2_target);
        for func in all_functors(RingSpec::Integers) {
            let name = func.name();
            match verify_blowup_triangle(func.as_ref(), &sq) {
                Ok(rep) => out.check(rep.exact, || format!("instance {i}: blow-up triangle fails for {name}")),
                Err(e) => out.error(format!("instance {i} square, {name}"), e),
            }
            match verify_transfer(func.as_ref(), &p, test.as_ref()) {
                Ok(v) => out.check(v.passes(), || format!("instance {i}: transfer fails for {name}: {v:?}")),
                Err(e) => out.error(format!("instance {i} transfer, {name}"), e),
            }
            if let Some(g2) = &g2 {
                match verify_functoriality(func.as_ref(), &p, g2) {
                    Ok(ok) => out.check(ok, || format!("instance {i}: {name} is not functorial")),
                    Err(e) => out.error(format!("instance {i} functoriality, {name}"), e),
                }
            }
        }
    }
    out
}

/// Spectral sequences of descent runs over `Q` and `F_2`.
pub fn spectral_suite(seed: u64, count: usize) -> CriterionOutcome {
    let mut out = CriterionOutcome::new(8, "descent spectral sequences over Q and F_2");
    let mut runs: Vec<(String, AugmentedSimplicialObject)> = vec![("Z/2 bar".into(), group_nerve(2, 4)), ("Z/3 bar".into(), group_nerve(3, 3))];
    for i in 0..count {
        let mut r = instance_rng(seed, 8, i);
        let ctx = random_context(&mut r);
        let n = r.gen_range(1..=3);
        let mode = if i % 3 == 2 { CoverMode::Ldh(2) } else { CoverMode::Cdh };
        match sized_hypercover(&mut out, &mut r, &ctx, mode, n) {
            Ok(Some(x)) => runs.push((format!("instance {i} ({mode}, N = {n})"), x)),
            Ok(None) => {}
            Err(e) => out.error(format!("instance {i}"), e),
        }
    }
    let mut descended = 0;
    for (label, x) in &runs {
        out.instances += 1;
        for field in [RingSpec::Rationals, RingSpec::PrimeField(2)] {
            for func in all_functors(field) {
                match descent_spectral_sequence(func.as_ref(), x, field, x.truncation() + 1) {
                    Ok(rep) => {
                        let ss = &rep.spectral_sequence;
                        out.check(ss.squares_to_zero, || format!("{label}: d∘d ≠ 0 over {field} for {}", func.name()));
                        out.check(ss.pages_consistent && rep.e1_matches_columns, || {
                            format!("{label}: inconsistent pages over {field} for {}", func.name())
                        });
                        out.check(ss.converges, || format!("{label}: E^∞ totals differ from H(Tot) over {field} for {}", func.name()));
                        if let Some(m) = rep.matches_base {
                            descended += 1;
                            out.check(m, || format!("{label}: E^∞ totals differ from H(base) over {field} for {}", func.name()));
                        }
                    }
                    Err(e) => out.error(format!("{label}, {field}, {}", func.name()), e),
                }
            }
        }
    }
    out.notes.push(format!("{descended} runs compared against the base"));
    out
}

/// Homology over `Z_(l)` against filtered integer divisors and an independent local elimination.
pub fn arithmetic_suite(seed: u64, count: usize) -> CriterionOutcome {
    let mut out = CriterionOutcome::new(9, "Smith forms verified; local homology matches filtered integer homology");
    let before = verified_count();
    let mut complexes: Vec<(String, ChainComplex)> = Vec::new();
    for i in 0..count {
        let mut r = instance_rng(seed, 9, i);
        // d_2 d_1 = 0 by construction: ∂_1 = A, ∂_2 = B C with A B = 0.
        let rows = r.gen_range(1..=5);
        let mid = r.gen_range(1..=6);
        let mut a = Matrix::zeros(rows, mid);
        let k = r.gen_range(0..=mid);
        for c in 0..k {
            for row in 0..rows {
                a.set(row, c, r.gen_range(-4..=4) * [1, 2, 3, 6][r.gen_range(0..4)]);
            }
        }
        let top = r.gen_range(1..=5);
        let mut b = Matrix::zeros(mid, top);
        for c in 0..top {
            for row in k..mid {
                b.set(row, c, r.gen_range(-3..=3) * [1, 2, 3, 4, 9][r.gen_range(0..5)]);
            }
        }
        match ChainComplex::new(vec![rows, mid, top], vec![a, b], None) {
            Ok(c) => complexes.push((format!("random complex {i}"), c)),
            Err(e) => out.error(format!("random complex {i}"), e),
        }
    }
    for (order, n) in [(2, 4), (3, 4), (4, 3)] {
        if let Ok(a) = apply_functor(&orbit_chains(RingSpec::Integers), &group_nerve(order, n), n) {
            complexes.push((format!("Z/{order} bar"), a.tot));
        }
    }
    for (label, c) in &complexes {
        out.instances += 1;
        for k in 1..=c.top() {
            smith_checks(&mut out, &format!("{label}: ∂_{k}"), &c.boundary(k));
        }
        // Complete complexes are certified in every degree.
        let upto = match c.exact_through() {
            None => c.top(),
            Some(_) => match c.window() {
                Some(w) => w,
                None => continue,
            },
        };
        for k in 0..=upto {
            let Ok(z) = c.homology(k, RingSpec::Integers) else { continue };
            for l in [2u64, 3, 5] {
                let local = match c.homology(k, RingSpec::Localized(l)) {
                    Ok(h) => h,
                    Err(e) => {
                        out.error(label.clone(), e);
                        continue;
                    }
                };
                let filtered: Vec<BigInt> = z.torsion.iter().map(|d| BigInt::from(l).pow(valuation(d, l))).filter(|d| !d.is_one()).collect();
                out.check(local.rank == z.rank && local.torsion == filtered, || format!("{label}: H_{k} over Z_({l}) is {local}, integer {z}"));
                // Independent check: l-adic valuations of the boundary divisors by local elimination.
                let vals_in = local_valuations(&c.boundary(k + 1), l);
                let expect: Vec<u32> = filtered.iter().map(|d| valuation(d, l)).collect();
                let mut got: Vec<u32> = vals_in.into_iter().filter(|&v| v > 0).collect();
                got.sort_unstable();
                let mut want = expect.clone();
                want.sort_unstable();
                out.check(got == want, || format!("{label}: local elimination of ∂_{} over Z_({l}) gives {got:?}, expected {want:?}", k + 1));
            }
        }
    }
    let verified = verified_count() - before;
    out.check(verified > 0, || "no Smith form was verified".into());
    out.notes.push(format!("{verified} Smith forms re-multiplied and checked unimodular"));
    out
}

/// Re-multiplies a Smith form outside the decomposition routine: `U·M·V = D`, `|det U| = |det V| = 1`.
fn smith_checks(out: &mut CriterionOutcome, label: &str, m: &Matrix) {
    let snf = smith_normal_form(m);
    let entries: Vec<Vec<BigInt>> = m.to_rows().into_iter().map(|row| row.into_iter().map(BigInt::from).collect()).collect();
    let product = big_mul(&big_mul(&snf.u, &entries, m.cols()), &snf.v, m.cols());
    out.check(product == snf.d(), || format!("{label}: U·M·V ≠ D"));
    let unit = |t: &[Vec<BigInt>]| determinant(t).is_ok_and(|d| d.magnitude().is_one());
    out.check(unit(&snf.u) && unit(&snf.v), || format!("{label}: transforms are not unimodular"));
    let divisors = snf.divisors();
    out.check(divisors.windows(2).all(|w| (&w[1] % &w[0]).is_zero()), || format!("{label}: divisors do not divide"));
}

/// `a · b` where `b` has `cols` columns.
fn big_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>], cols: usize) -> Vec<Vec<BigInt>> {
    a.iter().map(|row| (0..cols).map(|j| row.iter().zip(b).map(|(x, brow)| x * &brow[j]).sum()).collect()).collect()
}

fn valuation(d: &BigInt, l: u64) -> u32 {
    let l = BigInt::from(l);
    let mut v = 0;
    let mut rest = d.clone();
    while !rest.is_zero() && rest.is_multiple_of(&l) {
        rest /= &l;
        v += 1;
    }
    v
}

/// Default instance counts, sized to meet the acceptance thresholds.
pub const DEFAULT_COUNTS: [usize; 9] = [200, 200, 60, 100, 100, 40, 100, 30, 60];

/// Scenario round trips and byte-identical repeated runs of every command over a corpus
/// directory; invalid variants must exit with 2 and print nothing.
pub fn corpus_suite(dir: &std::path::Path, seed: u64) -> CriterionOutcome {
    use super::{run, scenario::Scenario, EXIT_INVALID};
    let mut out = CriterionOutcome::new(10, "scenario round trips and deterministic reports");
    let mut paths: Vec<std::path::PathBuf> = match std::fs::read_dir(dir) {
        Ok(entries) => entries.filter_map(|e| e.ok().map(|e| e.path())).filter(|p| p.extension().is_some_and(|x| x == "json")).collect(),
        Err(e) => {
            out.check(false, || format!("cannot read {}: {e}", dir.display()));
            return out;
        }
    };
    paths.sort();
    let twice = |out: &mut CriterionOutcome, args: Vec<String>| {
        let (a, b) = (run(args.clone()), run(args.clone()));
        out.check(a == b, || format!("{} differs between runs", args.join(" ")));
        out.check(a.code != EXIT_INVALID, || format!("{} rejected: {}", args.join(" "), a.stderr.trim()));
    };
    for path in &paths {
        out.instances += 1;
        let label = path.display().to_string();
        let Ok(text) = std::fs::read_to_string(path) else {
            out.check(false, || format!("{label}: unreadable"));
            continue;
        };
        let parsed = match Scenario::parse(&text) {
            Ok(s) => s,
            Err(e) => {
                out.check(false, || format!("{label}: {e}"));
                continue;
            }
        };
        let again = Scenario::parse(&parsed.to_json());
        out.check(again.as_ref().is_ok_and(|s| *s == parsed), || format!("{label}: parse ∘ serialize ∘ parse is not the identity"));
        out.check(parsed.to_json() == text, || format!("{label}: not in canonical form"));
        let input = |cmd: &str| vec!["hyperdescent".to_string(), cmd.to_string(), "--input".to_string(), label.clone()];
        for cmd in ["validate", "cosk", "hypercover", "tower", "descent", "homology"] {
            twice(&mut out, input(cmd));
        }
        for cmd in ["cosk", "descent", "homology"] {
            twice(&mut out, [input(cmd), vec!["--format".into(), "tsv".into()]].concat());
        }
        twice(&mut out, [input("ss"), vec!["--ring".into(), "q".into()]].concat());
        if let Some(m) = parsed.morphisms.keys().next() {
            twice(&mut out, [input("nerve"), vec!["--name".into(), m.clone()]].concat());
        }
        // A wrong format version is rejected before anything is printed.
        let broken = text.replacen("\"format\": 1", "\"format\": 2", 1);
        let tmp = std::env::temp_dir().join(format!("hyperdescent-broken-{}-{}", std::process::id(), out.instances));
        if std::fs::write(&tmp, broken).is_ok() {
            let o = run(["hyperdescent", "descent", "--input", &tmp.display().to_string()]);
            out.check(o.code == EXIT_INVALID && o.stdout.is_empty(), || format!("{label}: broken variant gave exit {}", o.code));
            let _ = std::fs::remove_file(&tmp);
        }
    }
    let suite_args: Vec<String> = ["hyperdescent", "suite", "--seed", &seed.to_string(), "--count", "2"].iter().map(|s| s.to_string()).collect();
    twice(&mut out, suite_args);
    out.notes.push(format!("{} corpus files", paths.len()));
    out
}

pub fn run_criterion(id: u8, seed: u64, count: usize) -> Option<CriterionOutcome> {
    Some(match id {
        1 => coskeleton_oracle_suite(seed, count),
        2 => composition_suite(seed, count),
        3 => homotopy_suite(seed, count),
        4 => contraction_suite(seed, count),
        5 => cdh_descent_suite(seed, count),
        6 => ldh_descent_suite(seed, count),
        7 => axiom_suite(seed, count),
        8 => spectral_suite(seed, count),
        9 => arithmetic_suite(seed, count),
        _ => return None,
    })
}
