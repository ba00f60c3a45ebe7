use hyperdescent::descent::{
    descent_check, free_chains, orbit_chains, product_chains, simplicial_circle, tower_consistency, verify_blowup_triangle, verify_functoriality,
    verify_transfer, HomologyFunctor,
};
use hyperdescent::fincat::CoverMode;
use hyperdescent::homalg::RingSpec;
use hyperdescent::random::{
    random_blowup_square, random_context, random_fiber_constant_map, random_group_prime_to, random_gset, random_hypercover, random_map, rng,
};
use hyperdescent::simplicial::AugmentedSimplicialObject;
use proptest::prelude::*;
use rand::Rng;

fn functors(ring: RingSpec) -> Vec<Box<dyn HomologyFunctor>> {
    vec![Box::new(free_chains(ring)), Box::new(product_chains(&simplicial_circle(), ring).unwrap()), Box::new(orbit_chains(ring))]
}

fn small(x: &AugmentedSimplicialObject) -> bool {
    x.body().level_sizes().iter().all(|&k| k <= 60)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn cdh_hypercovers_descend(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ctx = random_context(&mut r);
        let n = r.gen_range(1..=3);
        let Ok(x) = random_hypercover(&mut r, &ctx, CoverMode::Cdh, n, 2, 1) else { return Ok(()) };
        prop_assume!(small(&x));
        for f in &functors(RingSpec::Integers)[..2] {
            let rep = descent_check(f.as_ref(), &x, CoverMode::Cdh, n).unwrap();
            prop_assert!(rep.theorem_applies);
            prop_assert!(rep.verdict.is_quasi_iso(), "{} fails at {:?}", f.name(), rep.verdict.failure_degree());
        }
    }

    #[test]
    fn ldh_hypercovers_descend_after_localizing(seed in any::<u64>(), l in prop::sample::select(vec![2u64, 3])) {
        let mut r = rng(seed);
        let g = random_group_prime_to(&mut r, l);
        let n = r.gen_range(1..=2);
        let mode = CoverMode::Ldh(l);
        let Ok(x) = random_hypercover(&mut r, &Some(g), mode, n, 2, 1) else { return Ok(()) };
        prop_assume!(small(&x));
        for f in functors(RingSpec::Localized(l)) {
            let rep = descent_check(f.as_ref(), &x, mode, n).unwrap();
            prop_assert!(rep.theorem_applies);
            prop_assert!(rep.verdict.is_quasi_iso(), "{} fails at {:?}", f.name(), rep.verdict.failure_degree());
        }
    }

    #[test]
    fn towers_reproduce_the_verdict(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ctx = random_context(&mut r);
        let mode = if r.gen_bool(0.5) { CoverMode::Cdh } else { CoverMode::Ldh(2) };
        let Ok(x) = random_hypercover(&mut r, &ctx, mode, 2, 2, 1) else { return Ok(()) };
        prop_assume!(small(&x));
        for f in functors(RingSpec::Integers) {
            let t = tower_consistency(f.as_ref(), &x, 2).unwrap();
            prop_assert!(t.composite_is_augmentation);
            prop_assert!(t.consistent);
        }
    }

    #[test]
    fn reports_are_reproducible(seed in any::<u64>()) {
        let draw = || {
            let mut r = rng(seed);
            let ctx = random_context(&mut r);
            random_hypercover(&mut r, &ctx, CoverMode::Ldh(3), 2, 2, 1)
        };
        let (Ok(x), Ok(y)) = (draw(), draw()) else { return Ok(()) };
        prop_assume!(small(&x));
        let f = orbit_chains(RingSpec::Integers);
        let a = serde_json::to_string(&descent_check(&f, &x, CoverMode::Ldh(3), 2).unwrap()).unwrap();
        let b = serde_json::to_string(&descent_check(&f, &y, CoverMode::Ldh(3), 2).unwrap()).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn axioms_hold(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ctx = random_context(&mut r);
        let sq = random_blowup_square(&mut r, &ctx, 4);
        let p = random_fiber_constant_map(&mut r, &ctx, 2, 3);
        let w = random_gset(&mut r, &ctx, 1, 3);
        let test = random_map(&mut r, &w, p.target());
        let g = random_map(&mut r, p.target(), &w);
        for f in functors(RingSpec::Integers) {
            prop_assert!(verify_blowup_triangle(f.as_ref(), &sq).unwrap().exact, "{}", f.name());
            let t = verify_transfer(f.as_ref(), &p, test.as_ref()).unwrap();
            prop_assert!(t.passes(), "{}: {:?}", f.name(), t);
            if let Some(g) = &g {
                prop_assert!(verify_functoriality(f.as_ref(), &p, g).unwrap());
            }
        }
    }
}
