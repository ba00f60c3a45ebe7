use hyperdescent::fincat::CoverMode;
use hyperdescent::random::{random_context, random_gset, random_hypercover, random_surjection, random_truncated, rng};
use hyperdescent::simplicial::{
    bisimplicial_fiber_powers, cech_nerve, coskeleton, coskeleton_bounded, coskeleton_oracle, coskeleton_unit, homotopy_from_coskeletal,
    is_coskeletal, levelwise_cover_check, oracle_agreement, tower,
};
use proptest::prelude::*;
use rand::Rng;

const BUDGET: usize = 1 << 12;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn equalizer_formula_matches_the_limit_oracle(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ctx = random_context(&mut r);
        let trunc = r.gen_range(0..=2);
        let x = random_truncated(&mut r, &ctx, trunc, 3).unwrap();
        let n = r.gen_range(0..=trunc);
        let Ok(c) = coskeleton_bounded(&x, n, n + 2, Some(BUDGET)) else { return Ok(()) };
        for m in n + 1..=n + 2 {
            let (full, lim) = coskeleton_oracle(&x, n, m).unwrap();
            prop_assert!(oracle_agreement(&c, &full, &lim, m), "n = {}, m = {}", n, m);
        }
    }

    #[test]
    fn coskeleta_compose(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ctx = random_context(&mut r);
        let trunc = r.gen_range(0..=2);
        let x = random_truncated(&mut r, &ctx, trunc, 3).unwrap();
        let Ok(w) = coskeleton_bounded(&x, trunc, 3, Some(BUDGET)) else { return Ok(()) };
        let w = w.object;
        for m in 0..=2 {
            for n in 0..=m {
                let Ok(a) = coskeleton_bounded(&w, n, 3, Some(BUDGET)) else { continue };
                if coskeleton_bounded(&a.object, m, 3, Some(BUDGET)).is_err() {
                    continue;
                }
                let (_, unit) = coskeleton_unit(&a.object, m).unwrap();
                prop_assert!(unit.is_levelwise_bijection(), "cosk_{} → cosk_{} cosk_{}", n, m, n);
                prop_assert!(is_coskeletal(&a.object, m).unwrap());
            }
        }
    }

    #[test]
    fn nerves_are_zero_coskeletal(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ctx = random_context(&mut r);
        let y = random_gset(&mut r, &ctx, 1, 3);
        let f = random_surjection(&mut r, &y, 1, None);
        let nerve = cech_nerve(&f, 3);
        let (_, unit) = coskeleton_unit(&nerve, 0).unwrap();
        prop_assert!(unit.is_levelwise_bijection());
    }

    /// Tower stages `cosk_n X → cosk_{n−1} X` of a hypercover: the levelwise cover
    /// statement, coskeletal fiber powers, and natural homotopies between row faces.
    #[test]
    fn tower_stages_of_hypercovers(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ctx = random_context(&mut r);
        let mode = if r.gen_bool(0.5) { CoverMode::Cdh } else { CoverMode::Ldh(2) };
        let Ok(x) = random_hypercover(&mut r, &ctx, mode, 2, 2, 1) else { return Ok(()) };
        if x.body().level_sizes().iter().any(|&k| k > 30) {
            return Ok(());
        }
        let t = tower(&x, 2).unwrap();
        for stage in t.stages.iter().filter(|s| s.n >= 1) {
            let n = stage.n;
            let check = levelwise_cover_check(&stage.v, n, mode).unwrap();
            prop_assert!(check.hypotheses, "{:?}", check.failed_hypothesis);
            prop_assert!(check.all_covers(), "stage {}", n);
            let grid = bisimplicial_fiber_powers(&stage.v, 2, 1).unwrap();
            prop_assert!(grid.verify().valid);
            for row in &grid.rows {
                prop_assert!(is_coskeletal(row, n).unwrap());
            }
            let h = homotopy_from_coskeletal(&grid.vertical_face(1, 0), &grid.vertical_face(1, 1), n).unwrap();
            prop_assert!(h.validate().valid);
        }
    }
}

#[test]
fn coskeleton_fixes_low_levels() {
    let mut r = rng(11);
    for _ in 0..20 {
        let ctx = random_context(&mut r);
        let x = random_truncated(&mut r, &ctx, 2, 3).unwrap();
        let c = coskeleton(&x, 2, 2).unwrap();
        assert_eq!(c.object.body().level_sizes(), x.body().level_sizes());
    }
}
