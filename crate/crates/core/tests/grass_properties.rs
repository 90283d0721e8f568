use flagres::family::demo_family;
use flagres::ffgeom::{random_flag, Budget, PrimeField};
use flagres::grass::{
    enumerate_grass_schubert, exponent_form, grass_exact_position, grass_schubert_member, is_admissible,
    partition_to_vanishing, resolve_grass_richardson, schubert_cell_sum, vanishing_to_partition, AdmissiblePartition,
    Variant, VanishingSequence,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn partitions(r: usize, max: usize) -> Vec<Vec<usize>> {
    if r == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 0..=max {
        for rest in partitions(r - 1, first) {
            let mut v = vec![first];
            v.extend(rest);
            out.push(v);
        }
    }
    out
}

#[test]
fn exponent_forms_expand_back() {
    for n in 1..=9 {
        for r in 1..=5.min(n) {
            for parts in partitions(r, n - r) {
                assert!(is_admissible(&parts, r, n));
                let l = AdmissiblePartition::new(parts.clone(), n).unwrap();
                let e = exponent_form(&l);
                assert_eq!(e.expand(r), parts);
                assert!(e.pairs.iter().all(|&(mu, _)| mu > 0));
                assert!(e.pairs.windows(2).all(|w| w[0].0 > w[1].0));
            }
        }
    }
}

#[test]
fn schubert_counts_do_not_depend_on_the_flag() {
    let field = PrimeField::new(2).unwrap();
    for parts in [vec![1, 0], vec![2, 1], vec![1, 1], vec![2, 0]] {
        let l = AdmissiblePartition::new(parts, 4).unwrap();
        for seed in 0..4 {
            let f = random_flag(4, field, seed);
            let pts = enumerate_grass_schubert(&f, &l, Budget::default()).unwrap();
            assert_eq!(pts.len() as u128, schubert_cell_sum(&l, 2));
        }
    }
}

#[test]
fn resolutions_of_the_example_configuration() {
    let l = AdmissiblePartition::parse("1,0", 4).unwrap();
    for q in [2u32, 3] {
        let field = PrimeField::new(q).unwrap();
        let fam = demo_family(4, field, 2).unwrap();
        for s in [0, 1] {
            let (f, g) = fam.flags(s);
            let mut richardson: Vec<_> = enumerate_grass_schubert(&f, &l, Budget::default())
                .unwrap()
                .into_iter()
                .filter(|v| grass_schubert_member(v, &g, &l).unwrap())
                .collect();
            richardson.sort();
            for variant in [Variant::Chain, Variant::Example] {
                let res = resolve_grass_richardson(&f, &l, &g, &l, variant, Budget::default()).unwrap();
                let mut image: Vec<_> = res.fibers.iter().map(|x| x.target.clone()).collect();
                image.sort();
                assert_eq!(image, richardson, "q={q} s={s} {variant:?}");
                let sum: usize = res.fibers.iter().map(|x| x.fiber_size).sum();
                assert_eq!(sum, res.total);
                for x in &res.fibers {
                    let exact = grass_exact_position(&x.target, &f, &l).unwrap()
                        && grass_exact_position(&x.target, &g, &l).unwrap();
                    if exact {
                        assert_eq!(x.fiber_size, 1);
                    }
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn vanishing_round_trips(r in 0usize..6, extra in 0usize..8, seed in any::<u64>()) {
        let d = r + extra;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = VanishingSequence::random(r, d, &mut rng).unwrap();
        let l = vanishing_to_partition(&a).unwrap();
        prop_assert_eq!(l.parts().len(), r + 1);
        prop_assert!(l.parts().iter().all(|&x| x <= d - r));
        prop_assert_eq!(partition_to_vanishing(l.parts(), r, d).unwrap(), a);
    }
}
