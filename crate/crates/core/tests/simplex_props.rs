use hyperdescent::simplex::{compose_monotone, enumerate_monotone, epi_mono_factorization, interval_maps, MonotoneMap};
use proptest::prelude::*;

fn monotone(source: usize, target: usize) -> impl Strategy<Value = MonotoneMap> {
    proptest::collection::vec(0..=target, source + 1).prop_map(move |mut v| {
        v.sort_unstable();
        MonotoneMap::new(v, target).unwrap()
    })
}

/// Three composable maps `[a] → [b] → [c] → [d]` with every size at most 5.
fn chain() -> impl Strategy<Value = (MonotoneMap, MonotoneMap, MonotoneMap)> {
    (0..=5usize, 0..=5usize, 0..=5usize, 0..=5usize).prop_flat_map(|(a, b, c, d)| (monotone(a, b), monotone(b, c), monotone(c, d)))
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, j| acc * (n - j) / (j + 1))
}

proptest! {
    #[test]
    fn composition_is_associative((f, g, h) in chain()) {
        let left = compose_monotone(&h, &compose_monotone(&g, &f).unwrap()).unwrap();
        let right = compose_monotone(&compose_monotone(&h, &g).unwrap(), &f).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn factorization_is_unique(f in (0..=5usize, 0..=5usize).prop_flat_map(|(i, m)| monotone(i, m))) {
        let (sigma, delta) = epi_mono_factorization(&f);
        prop_assert!(sigma.is_surjective() && delta.is_injective());
        let again = compose_monotone(&delta, &sigma).unwrap();
        prop_assert_eq!(&again, &f);
        prop_assert_eq!(epi_mono_factorization(&again), (sigma, delta));
    }

    #[test]
    fn interval_maps_are_closed_under_precomposition(
        (alpha, tau) in (0..=5usize, 0..=5usize).prop_flat_map(|(i, j)| (monotone(i, j), monotone(j, 1)))
    ) {
        let composite = compose_monotone(&tau, &alpha).unwrap();
        prop_assert!(interval_maps(alpha.source()).contains(&composite));
    }
}

#[test]
fn monotone_counts_are_binomial() {
    for i in 0..=6 {
        for m in 0..=6 {
            assert_eq!(enumerate_monotone(i, m).len() as u64, binomial((i + m + 1) as u64, (i + 1) as u64), "[{i}] → [{m}]");
        }
    }
}

#[test]
fn interval_maps_run_from_zero_to_one() {
    for j in 0..=8 {
        let maps = interval_maps(j);
        assert_eq!(maps.len(), j + 2);
        assert_eq!(maps[0], MonotoneMap::constant(j, 1, 0));
        assert_eq!(maps[j + 1], MonotoneMap::constant(j, 1, 1));
    }
}
