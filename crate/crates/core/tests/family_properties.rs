use flagres::family::{
    demo_family, enumerate_total_space, relpos_profile, singular_locus_map, Conditions, FamilyJson, PolynomialFamily,
};
use flagres::ffgeom::{Budget, PrimeField};
use flagres::grass::AdmissiblePartition;
use flagres::perm::all_permutations;
use proptest::prelude::*;

fn grass_conditions() -> Conditions {
    let l = AdmissiblePartition::parse("1,0", 4).unwrap();
    Conditions::Grass {
        lambda: l.clone(),
        lambda2: l,
    }
}

#[test]
fn example_total_space_counts() {
    for q in [2usize, 3] {
        let field = PrimeField::new(q as u32).unwrap();
        let fam = demo_family(4, field, 2).unwrap();
        let pts = enumerate_total_space(&fam, &grass_conditions(), Budget::default()).unwrap();
        let special = 2 * q * q + q + 1;
        assert_eq!(pts.iter().filter(|x| x.s == 0).count(), special);
        for s in 1..q as u32 {
            assert_eq!(pts.iter().filter(|x| x.s == s).count(), (q + 1) * (q + 1));
        }
        assert_eq!(pts.len(), special + (q - 1) * (q + 1) * (q + 1));
    }
}

#[test]
fn union_law_on_flag_type_total_spaces() {
    for p in [2u32, 3] {
        let field = PrimeField::new(p).unwrap();
        let fam = demo_family(3, field, 1).unwrap();
        let perms = all_permutations(3).unwrap();
        let mut nonempty = 0;
        for sigma in &perms {
            for tau in &perms {
                let cond = Conditions::Flag {
                    sigma: sigma.clone(),
                    tau: tau.clone(),
                };
                let rep = singular_locus_map(&fam, &cond, cond.expected_dims(3), Budget::default()).unwrap();
                assert!(rep.union_law_holds(), "p={p} {sigma} {tau}: {:?}", rep.violations);
                nonempty += usize::from(rep.points > 0);
            }
        }
        assert!(nonempty > 0);
    }
}

#[test]
fn union_law_on_the_example_total_space() {
    let field = PrimeField::new(2).unwrap();
    let fam = demo_family(4, field, 2).unwrap();
    let cond = grass_conditions();
    let rep = singular_locus_map(&fam, &cond, cond.expected_dims(4), Budget::default()).unwrap();
    assert!(rep.union_law_holds());
    assert_eq!(rep.singular_total.len(), 2);
}

#[test]
fn demo_profiles_for_small_primes() {
    for p in [2u32, 3, 5] {
        let field = PrimeField::new(p).unwrap();
        for (n, t) in [(3, 1), (3, 2), (4, 1), (4, 2), (4, 3)] {
            let prof = relpos_profile(&demo_family(n, field, t).unwrap()).unwrap();
            assert!(prof.matches_demo_pattern(t), "p={p} n={n} t={t}");
            assert!(prof.is_versal_pattern());
        }
    }
}

fn poly_add(a: &[i64], b: &[i64], scale: i64) -> Vec<i64> {
    let mut out = vec![0; a.len().max(b.len())];
    for (k, x) in a.iter().enumerate() {
        out[k] += x;
    }
    for (k, x) in b.iter().enumerate() {
        out[k] += scale * x;
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn profile_ignores_the_moving_representative(
        pi in 0usize..3,
        t in 1usize..4,
        entries in prop::collection::vec(0i64..7, 6),
    ) {
        let field = PrimeField::new([2, 3, 5][pi]).unwrap();
        let fam = demo_family(4, field, t).unwrap();
        let j = fam.to_json();
        // row i of Q becomes row i plus a combination of earlier rows
        let mut q_rows = j.q_rows.clone();
        let mut k = 0;
        for (i, row) in q_rows.iter_mut().enumerate() {
            for earlier in &j.q_rows[..i] {
                for (cell, add) in row.iter_mut().zip(earlier) {
                    *cell = poly_add(cell, add, entries[k]);
                }
                k += 1;
            }
        }
        let moved = PolynomialFamily::from_json(&FamilyJson { q_rows, ..j }).unwrap();
        prop_assert_eq!(relpos_profile(&moved).unwrap(), relpos_profile(&fam).unwrap());
    }
}
