//! The committed example scenarios, built from library constructions.
//!
//! `corpus/*.json` at the repository root is exactly what [`all`] serializes to; a test keeps
//! the two in sync.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::fincat::{CoverMode, FinMorphism, Group};
use crate::homalg::RingSpec;
use crate::random::{coset_space, random_blowup_square, random_hypercover};
use crate::simplicial::cech_nerve;

use super::scenario::{FunctorSpec, GroupSpec, MorphismSpec, ObjectSpec, Params, Scenario, SimplicialSpec, SquareSpec};
use super::suite::random_split_surjection;

/// Seed behind `random.json`.
pub const RANDOM_SEED: u64 = 2024;

/// `(file name, scenario)` for every corpus entry, in file-name order.
pub fn all() -> Vec<(&'static str, Scenario)> {
    vec![("random.json", random()), ("split-surjection.json", split_surjection()), ("z2.json", cyclic_bar(2, 3)), ("z3.json", cyclic_bar(3, 2))]
}

/// The regular `Z/p`-set over the point, its nerve through level 4 and orbit chains.
pub fn cyclic_bar(p: usize, l: u64) -> Scenario {
    let name = format!("z{p}");
    let g = Arc::new(Group::cyclic(p).expect("cyclic groups are valid"));
    let (x, _) = coset_space(&g, &[0]);
    let to_point = FinMorphism::to_point(&x);
    let mut s = Scenario::empty();
    s.description =
        Some(format!("Z/{p} acting freely on itself, over the point. Orbit chains fail to descend integrally and descend after inverting {p}."));
    s.groups.insert(name.clone(), GroupSpec::Cyclic(p));
    s.add_morphism("quotient", &to_point, "group", "point", Some(&name));
    s.simplicial.insert("nerve".into(), SimplicialSpec::from_object(&cech_nerve(&to_point, 4), Some(&name)));
    s.functor = Some(FunctorSpec { name: "orbit_chains".into(), ring: RingSpec::Integers, complex: None });
    s.params = Params { truncation: Some(4), mode: Some(CoverMode::Ldh(l)), ..Params::default() };
    s
}

/// `Y ⊔ W → Y` with its section, and the nerve of the projection.
pub fn split_surjection() -> Scenario {
    let mut r = ChaCha8Rng::seed_from_u64(RANDOM_SEED + 1);
    let (f, section) = random_split_surjection(&mut r, &None, 3);
    let mut s = Scenario::empty();
    s.description = Some("A split surjection of plain sets. Its nerve contracts onto the base.".into());
    s.add_morphism("projection", &f, "total", "base", None);
    s.morphisms.insert("section".into(), MorphismSpec { source: "base".into(), target: "total".into(), values: section.values().to_vec() });
    s.simplicial.insert("nerve".into(), SimplicialSpec::from_object(&cech_nerve(&f, 3), None));
    s.functor = Some(FunctorSpec { name: "free_chains".into(), ring: RingSpec::Integers, complex: None });
    s.params = Params { truncation: Some(3), mode: Some(CoverMode::Cdh), ..Params::default() };
    s
}

/// A seeded cdh-hypercover of plain sets and a blow-up square.
pub fn random() -> Scenario {
    let mut r = ChaCha8Rng::seed_from_u64(RANDOM_SEED);
    let x = loop {
        if let Ok(x) = random_hypercover(&mut r, &None, CoverMode::Cdh, 3, 2, 1) {
            let sizes = x.body().level_sizes();
            if sizes[0] >= 3 && sizes.iter().all(|&k| k <= 40) {
                break x;
            }
        }
    };
    let sq = random_blowup_square(&mut r, &None, 4);
    let mut s = Scenario::empty();
    s.description = Some(format!("A random cdh-hypercover of plain sets and a random blow-up square, seed {RANDOM_SEED}."));
    s.simplicial.insert("cover".into(), SimplicialSpec::from_object(&x, None));
    for (name, obj) in [("x", sq.right.target()), ("x_prime", sq.right.source()), ("z", sq.bottom.source()), ("z_prime", sq.top.source())] {
        s.objects.insert(name.into(), ObjectSpec::from_object(obj, None));
    }
    for (name, f, src, tgt) in [
        ("top", &sq.top, "z_prime", "x_prime"),
        ("left", &sq.left, "z_prime", "z"),
        ("bottom", &sq.bottom, "z", "x"),
        ("right", &sq.right, "x_prime", "x"),
    ] {
        s.morphisms.insert(name.into(), MorphismSpec { source: src.into(), target: tgt.into(), values: f.values().to_vec() });
    }
    s.squares.insert("blowup".into(), SquareSpec { top: "top".into(), left: "left".into(), bottom: "bottom".into(), right: "right".into() });
    s.functor = Some(FunctorSpec { name: "free_chains".into(), ring: RingSpec::Integers, complex: None });
    s.params = Params { truncation: Some(3), mode: Some(CoverMode::Cdh), seed: Some(RANDOM_SEED), ..Params::default() };
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::FinObject;

    #[test]
    fn every_entry_resolves() {
        for (name, s) in all() {
            s.resolve().unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(Scenario::parse(&s.to_json()).unwrap(), s, "{name}");
        }
    }

    #[test]
    fn quotient_lands_in_the_point() {
        let s = cyclic_bar(2, 3);
        let r = s.resolve().unwrap();
        assert_eq!(r.objects["point"], FinObject::point(&r.objects["group"].context()));
    }
}
