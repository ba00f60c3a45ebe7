use hyperdescent::homalg::{
    determinant, is_quasi_iso, smith_normal_form, spectral_sequence, total_complex, ChainComplex, ChainMap, DoubleComplex, Matrix, RingSpec,
};
use hyperdescent::Error;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_matrix(r: &mut impl Rng, rows: usize, cols: usize, bound: i64) -> Matrix {
    let entries = (0..rows).map(|_| (0..cols).map(|_| r.gen_range(-bound..=bound)).collect()).collect();
    Matrix::from_rows_with_cols(entries, cols).unwrap()
}

/// `C_2 → C_1 → C_0` with `∂_1 = X P` and `∂_2 = Q Y`, where `P Q = 0` by block shape.
fn random_complex(r: &mut impl Rng) -> ChainComplex {
    let (c0, c1, c2) = (r.gen_range(0..=4), r.gen_range(1..=5), r.gen_range(0..=4));
    let k = r.gen_range(0..=c1);
    let mut p = Matrix::zeros(k, c1);
    let mut q = Matrix::zeros(c1, c1 - k);
    for i in 0..k {
        p.set(i, i, 1);
    }
    for i in 0..c1 - k {
        q.set(k + i, i, 1);
    }
    let d1 = random_matrix(r, c0, k, 3).mul(&p).unwrap();
    let d2 = q.mul(&random_matrix(r, c1 - k, c2, 3)).unwrap();
    ChainComplex::new(vec![c0, c1, c2], vec![d1, d2], None).unwrap()
}

fn big_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let cols = b.first().map_or(0, Vec::len);
    a.iter().map(|row| (0..cols).map(|j| row.iter().zip(b).map(|(x, brow)| x * &brow[j]).sum()).collect()).collect()
}

fn l_part(d: &BigInt, l: u64) -> BigInt {
    let l = BigInt::from(l);
    let mut out = BigInt::one();
    let mut d = d.clone();
    while d.is_multiple_of(&l) {
        d /= &l;
        out *= &l;
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn nonzero_composites_are_rejected(seed in any::<u64>()) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let (a, b, c) = (r.gen_range(1..=3), r.gen_range(1..=3), r.gen_range(1..=3));
        let d1 = random_matrix(&mut r, a, b, 2);
        let d2 = random_matrix(&mut r, b, c, 2);
        let zero = d1.mul(&d2).unwrap().is_zero();
        match ChainComplex::new(vec![a, b, c], vec![d1, d2], None) {
            Ok(_) => prop_assert!(zero),
            Err(Error::BoundaryNonzero(_)) => prop_assert!(!zero),
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn smith_forms_remultiply(seed in any::<u64>()) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let (rows, cols) = (r.gen_range(0..=5), r.gen_range(0..=5));
        let m = random_matrix(&mut r, rows, cols, 20);
        let snf = smith_normal_form(&m);
        let entries: Vec<Vec<BigInt>> = m.to_rows().into_iter().map(|row| row.into_iter().map(BigInt::from).collect()).collect();
        let product = big_mul(&big_mul(&snf.u, &entries), &snf.v);
        prop_assert_eq!(product, snf.d());
        prop_assert!(determinant(&snf.u).unwrap().abs().is_one());
        prop_assert!(determinant(&snf.v).unwrap().abs().is_one());
        let divisors = snf.divisors();
        for w in divisors.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
    }

    #[test]
    fn local_homology_is_filtered_integer_homology(seed in any::<u64>(), l in prop::sample::select(vec![2u64, 3, 5])) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let c = random_complex(&mut r);
        for k in 0..=c.top() {
            let int = c.homology(k, RingSpec::Integers).unwrap();
            let local = c.homology(k, RingSpec::Localized(l)).unwrap();
            let expected: Vec<BigInt> = int.torsion.iter().map(|d| l_part(d, l)).filter(|d| !d.is_one()).collect();
            prop_assert_eq!(local.rank, int.rank);
            prop_assert_eq!(local.torsion, expected);
        }
    }

    /// `k · id` is a quasi-isomorphism exactly when `k` is a unit on every homology group.
    #[test]
    fn scalar_maps_against_the_closed_form(seed in any::<u64>(), k in -4i64..=4) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let c = random_complex(&mut r).with_exact_through(Some(3));
        let f = ChainMap::identity(&c).scale(k).unwrap();
        let report = is_quasi_iso(&f, 2, RingSpec::Integers).unwrap();
        let expected = (0..=2).all(|n| {
            let h = c.homology(n, RingSpec::Integers).unwrap();
            (h.rank == 0 || k.abs() == 1) && h.torsion.iter().all(|t| t.gcd(&BigInt::from(k)).is_one())
        });
        prop_assert_eq!(report.verdict.is_quasi_iso(), expected);
    }

    #[test]
    fn spectral_sequences_square_to_zero_and_converge(seed in any::<u64>(), k in -3i64..=3, p in prop::sample::select(vec![0u64, 2, 3])) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let c = random_complex(&mut r);
        let field = if p == 0 { RingSpec::Rationals } else { RingSpec::PrimeField(p) };
        let maps: Vec<Matrix> = (0..=c.top()).map(|q| Matrix::scalar(c.rank(q), k)).collect();
        let zeros: Vec<Matrix> = (0..=c.top()).map(|q| Matrix::zeros(c.rank(q), c.rank(q))).collect();
        let double = DoubleComplex::new(&[c.clone(), c.clone(), c], vec![maps, zeros], None).unwrap();
        total_complex(&double).unwrap();
        let ss = spectral_sequence(&double, field, 4).unwrap();
        prop_assert!(ss.squares_to_zero);
        prop_assert!(ss.pages_consistent);
        prop_assert!(ss.converges);
    }
}
