use flagres::ffgeom::{
    canonical_flag, enumerate_flags, is_almost_transverse, is_transverse, random_flag, rank_table,
    relative_position, Budget, Matrix, PrimeField,
};
use flagres::perm::{all_permutations, Permutation};
use proptest::prelude::*;

#[test]
fn flag_counts_are_sums_over_permutations() {
    for n in 1..=4 {
        for p in [2u32, 3] {
            let field = PrimeField::new(p).unwrap();
            let expected: u128 = all_permutations(n)
                .unwrap()
                .iter()
                .map(|s| (p as u128).pow(s.inversions() as u32))
                .sum();
            assert_eq!(enumerate_flags(n, field, Budget::default()).unwrap().len() as u128, expected);
        }
    }
}

fn transversality_agrees(p: &flagres::ffgeom::Flag, q: &flagres::ffgeom::Flag) {
    let n = p.n();
    let w0 = Permutation::longest(n).unwrap();
    let sigma = relative_position(p, q).unwrap();
    assert_eq!(is_transverse(p, q).unwrap(), sigma == w0);
    let t = is_almost_transverse(p, q).unwrap();
    let by_position = (1..n).find(|&t| w0.compose(&Permutation::simple(n, t).unwrap()).unwrap() == sigma);
    assert_eq!(t, by_position, "{sigma}");
}

#[test]
fn transversality_matches_relative_position_on_all_pairs_in_dimension_three() {
    let field = PrimeField::new(2).unwrap();
    let flags = enumerate_flags(3, field, Budget::default()).unwrap();
    for p in &flags {
        for q in &flags {
            transversality_agrees(p, q);
        }
    }
}

fn unit_lower_triangular(n: usize, p: u32, entries: &[u32]) -> Vec<u32> {
    let mut m = vec![0; n * n];
    let mut k = 0;
    for i in 0..n {
        m[i * n + i] = 1;
        for j in 0..i {
            m[i * n + j] = entries[k] % p;
            k += 1;
        }
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn position_laws(n in 2usize..=5, pi in 0usize..3, s1 in any::<u64>(), s2 in any::<u64>()) {
        let field = PrimeField::new([2, 3, 5][pi]).unwrap();
        let (p, q) = (random_flag(n, field, s1), random_flag(n, field, s2));
        let sigma = relative_position(&p, &q).unwrap();
        prop_assert_eq!(relative_position(&q, &p).unwrap(), sigma.inverse());
        prop_assert_eq!(rank_table(&p, &q).unwrap().to_rank_matrix(), sigma.rank_matrix());
    }

    #[test]
    fn transversality_in_dimension_four(s1 in any::<u64>(), s2 in any::<u64>()) {
        let field = PrimeField::new(2).unwrap();
        transversality_agrees(&random_flag(4, field, s1), &random_flag(4, field, s2));
    }

    #[test]
    fn canonical_form_is_idempotent_and_stabilizer_invariant(
        n in 1usize..=5,
        pi in 0usize..3,
        seed in any::<u64>(),
        entries in prop::collection::vec(any::<u32>(), 10),
    ) {
        let p = [2, 3, 7][pi];
        let field = PrimeField::new(p).unwrap();
        let f = random_flag(n, field, seed);
        prop_assert_eq!(&canonical_flag(f.basis()).unwrap(), &f);
        let l = Matrix::from_data(field, n, n, unit_lower_triangular(n, p, &entries)).unwrap();
        let moved = l.mul(f.basis()).unwrap();
        prop_assert_eq!(canonical_flag(&moved).unwrap(), f);
    }
}
