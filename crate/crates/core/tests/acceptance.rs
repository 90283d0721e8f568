//! Acceptance suite: one PASS/FAIL line per criterion, with wall time
//! against its limit. Exits nonzero if any criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use flagres::bott::{consecutive_fiber_check, enumerate_chains, resolve_richardson};
use flagres::family::{demo_family, singular_locus_map, Conditions, FamilyPoint, TotalSpacePoint};
use flagres::ffgeom::{
    common_basis, enumerate_flags, opposite_flag, random_flag_with, rank_table, relative_position, standard_flag,
    Budget, Flag, Matrix, PrimeField,
};
use flagres::grass::{
    enumerate_grassmannian, exponent_form, partition_to_vanishing, resolve_grass_richardson, vanishing_to_partition,
    AdmissiblePartition, GrassPoint, Variant, VanishingSequence,
};
use flagres::interp::point_count_polynomial;
use flagres::perm::{all_permutations, bruhat_leq_oracle, bruhat_lower_set, Permutation};
use flagres::schubert::{
    enumerate_richardson, enumerate_schubert, enumerate_schubert_cell, richardson_counts, schubert_counts,
    smooth_locus_survey, tangent_dimension, ExpectedDims, SchubertDatum,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn field(p: u32) -> PrimeField {
    PrimeField::new(p).unwrap()
}

fn budget() -> Budget {
    Budget::default()
}

fn perm(s: &str) -> Permutation {
    s.parse().unwrap()
}

fn c1_bruhat_oracle() -> Outcome {
    let mut pairs = 0;
    for n in [4, 5] {
        let perms = all_permutations(n).unwrap();
        let bad: usize = perms
            .par_iter()
            .map(|s| {
                perms
                    .iter()
                    .filter(|t| s.bruhat_leq(t).unwrap() != bruhat_leq_oracle(s, t).unwrap())
                    .count()
            })
            .sum();
        ensure(bad == 0, || format!("{bad} disagreements in S_{n}"))?;
        pairs += perms.len() * perms.len();
    }
    ensure(pairs == 576 + 14_400, || format!("{pairs} pairs"))?;
    Ok(format!("{pairs} pairs agree"))
}

fn c2_flag_counts() -> Outcome {
    let flags = enumerate_flags(4, field(2), budget()).unwrap().len();
    let sum: usize = all_permutations(4).unwrap().iter().map(|s| 1 << s.inversions()).sum();
    let gr = enumerate_grassmannian(4, 2, field(2), budget()).unwrap().len();
    ensure(flags == 315 && sum == 315, || format!("|Fl| = {flags}, sum = {sum}"))?;
    ensure(gr == 35, || format!("|Gr(2,4)| = {gr}"))?;
    Ok(format!("|Fl(F_2^4)| = {flags} = sum 2^inv, |Gr(2,F_2^4)| = {gr}"))
}

fn c3_schubert_counts() -> Outcome {
    for q in [2u32, 3] {
        let base = standard_flag(4, field(q));
        for sigma in all_permutations(4).unwrap() {
            let d = SchubertDatum::new(base.clone(), sigma.clone()).unwrap();
            let cell = enumerate_schubert_cell(&d, budget()).unwrap().len() as u128;
            let variety = enumerate_schubert(&d, budget()).unwrap().len() as u128;
            let q = q as u128;
            let expected: u128 = bruhat_lower_set(&sigma).unwrap().iter().map(|t| q.pow(t.inversions() as u32)).sum();
            ensure(cell == q.pow(sigma.inversions() as u32), || format!("cell {sigma} q={q}: {cell}"))?;
            ensure(variety == expected, || format!("X_{sigma} q={q}: {variety} vs {expected}"))?;
        }
    }
    Ok("48 cell and 48 variety counts exact".into())
}

fn witnesses(p: &Flag, q: &Flag, sigma: &Permutation) -> bool {
    let n = p.n();
    let basis = common_basis(p, q).unwrap();
    if basis.len() != n || !Matrix::from_data(p.field(), n, n, basis.concat()).unwrap().is_invertible() {
        return false;
    }
    let strictly_in = |f: &Flag, i: usize, b: &[u32]| f.piece(i).row_space_contains(b) && !f.piece(i - 1).row_space_contains(b);
    basis
        .iter()
        .enumerate()
        .all(|(i, b)| strictly_in(p, i + 1, b) && strictly_in(q, sigma.apply(i + 1), b))
}

fn c4_relative_position_laws() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let samples = 1200;
    for k in 0..samples {
        let n = rng.gen_range(2..=5);
        let p = [2, 3, 5][rng.gen_range(0..3)];
        let (a, b) = (random_flag_with(n, field(p), &mut rng), random_flag_with(n, field(p), &mut rng));
        let sigma = relative_position(&a, &b).unwrap();
        ensure(relative_position(&b, &a).unwrap() == sigma.inverse(), || format!("inverse law, sample {k}"))?;
        ensure(rank_table(&a, &b).unwrap().to_rank_matrix() == sigma.rank_matrix(), || format!("rank law, sample {k}"))?;
        ensure(witnesses(&a, &b, &sigma), || format!("common basis, sample {k}"))?;
    }
    Ok(format!("{samples} seeded pairs satisfy all three laws"))
}

fn c5_chain_structure() -> Outcome {
    let base = standard_flag(4, field(2));
    let mut words = 0;
    for sigma in all_permutations(4).unwrap() {
        for w in sigma.all_reduced_words() {
            let chains = enumerate_chains(&base, &w, budget()).unwrap();
            ensure(chains.len() == 3usize.pow(w.len() as u32), || format!("{:?}: {}", w.letters(), chains.len()))?;
            ensure(consecutive_fiber_check(&chains), || format!("{:?}: fiber check", w.letters()))?;
            words += 1;
        }
    }
    Ok(format!("{words} reduced words give 3^l chains"))
}

fn c6_richardson_resolution() -> Outcome {
    let f = field(2);
    let (p, q) = (standard_flag(4, f), opposite_flag(4, f));
    let perms = all_permutations(4).unwrap();
    let pairs: Vec<(Permutation, Permutation)> =
        perms.iter().flat_map(|s| perms.iter().map(move |t| (s.clone(), t.clone()))).collect();
    let checked: Vec<Result<usize, String>> = pairs
        .par_iter()
        .map(|(s, t)| {
            let res = resolve_richardson(&p, &s.reduced_word(), &q, &t.reduced_word(), budget()).map_err(|e| e.to_string())?;
            let dp = SchubertDatum::new(p.clone(), s.clone()).unwrap();
            let dq = SchubertDatum::new(q.clone(), t.clone()).unwrap();
            let mut expected = enumerate_richardson(&dp, &dq, budget()).unwrap();
            expected.sort();
            let mut image: Vec<Flag> = res.fibers.iter().map(|x| x.target.clone()).collect();
            image.sort();
            ensure(image == expected, || format!("image of ({s},{t})"))?;
            for x in &res.fibers {
                let exact = relative_position(&p, &x.target).unwrap() == *s && relative_position(&q, &x.target).unwrap() == *t;
                ensure(exact == x.exact_position, || format!("exactness flag at ({s},{t})"))?;
                ensure(!exact || x.fiber_size == 1, || format!("fiber {} at ({s},{t})", x.fiber_size))?;
            }
            Ok(usize::from(!expected.is_empty()))
        })
        .collect();
    let mut nonempty = 0;
    for c in checked {
        nonempty += c?;
    }
    Ok(format!("576 pairs ({nonempty} nonempty): images match, exact fibers are singletons"))
}

fn c7_singularity_pattern() -> Outcome {
    let base3 = standard_flag(4, field(3));
    let singular_expected: BTreeSet<Permutation> = [perm("3412"), perm("4231")].into();
    let mut found = BTreeSet::new();
    for sigma in all_permutations(4).unwrap() {
        let d = SchubertDatum::new(base3.clone(), sigma.clone()).unwrap();
        let points = enumerate_schubert(&d, budget()).unwrap();
        let dims: Vec<(bool, usize)> = points
            .par_iter()
            .map(|v| {
                let cell = relative_position(&base3, v).unwrap() == sigma;
                (cell, tangent_dimension(v, std::slice::from_ref(&d)).unwrap().tangent_dim)
            })
            .collect();
        let inv = sigma.inversions();
        ensure(dims.iter().all(|&(cell, t)| !cell || t == inv), || format!("open cell of X_{sigma}"))?;
        ensure(dims.iter().all(|&(_, t)| t >= inv), || format!("tangent below dimension in X_{sigma}"))?;
        if dims.iter().any(|&(_, t)| t > inv) {
            found.insert(sigma);
        }
    }
    ensure(found == singular_expected, || format!("singular permutations {found:?}"))?;
    let base5 = standard_flag(4, field(5));
    let t = tangent_dimension(&base5, &[SchubertDatum::new(base5.clone(), perm("4231")).unwrap()])
        .unwrap()
        .tangent_dim;
    ensure(t == 6, || format!("tangent of X_4231 at the base flag over F_5 is {t}"))?;
    Ok("singular exactly for 3412, 4231; cells smooth; base tangent of X_4231 over F_5 = 6".into())
}

fn c8_smooth_locus_law() -> Outcome {
    let f = field(3);
    let reports = smooth_locus_survey(&standard_flag(4, f), &opposite_flag(4, f), ExpectedDims::from_inversions, budget())
        .map_err(|e| e.to_string())?;
    let mut singular_pairs = 0;
    for r in &reports {
        ensure(r.violations.is_empty(), || format!("({}, {}): {} violations", r.sigma, r.tau, r.violations.len()))?;
        singular_pairs += usize::from(!r.singular_richardson.is_empty());
    }
    let mut expected_pairs = 0;
    for s in all_permutations(4).unwrap() {
        for t in all_permutations(4).unwrap() {
            let w0 = Permutation::longest(4).unwrap();
            expected_pairs += usize::from(w0.compose(&t).unwrap().bruhat_leq(&s).unwrap());
        }
    }
    ensure(reports.len() == expected_pairs, || format!("{} nonempty pairs, expected {expected_pairs}", reports.len()))?;
    ensure(singular_pairs > 0, || "no singular Richardson points at all".into())?;
    Ok(format!("{} nonempty pairs, {singular_pairs} with singular points, union law holds everywhere", reports.len()))
}

fn c9_grassmannian_example() -> Outcome {
    let l = AdmissiblePartition::parse("1,0", 4).unwrap();
    let cond = Conditions::Grass { lambda: l.clone(), lambda2: l.clone() };
    for qq in [2u32, 3] {
        let q = qq as usize;
        let fam = demo_family(4, field(qq), 2).unwrap();
        let (f0, g0) = fam.flags(0);
        let (fl, gl) = (GrassPoint::from_matrix(&f0.piece(2)).unwrap(), GrassPoint::from_matrix(&g0.piece(2)).unwrap());
        let ex = resolve_grass_richardson(&f0, &l, &g0, &l, Variant::Example, budget()).unwrap();
        let ch = resolve_grass_richardson(&f0, &l, &g0, &l, Variant::Chain, budget()).unwrap();
        ensure(ex.image_size() == 2 * q * q + q + 1, || format!("q={q}: special fiber {}", ex.image_size()))?;
        for s in 1..qq {
            let (fs, gs) = fam.flags(s);
            let generic = resolve_grass_richardson(&fs, &l, &gs, &l, Variant::Chain, budget()).unwrap().image_size();
            ensure(generic == (q + 1) * (q + 1), || format!("q={q} s={s}: generic fiber {generic}"))?;
        }
        for line in [&fl, &gl] {
            ensure(ex.fiber_over(line) == (q + 1) * (q + 1), || format!("q={q}: example fiber {}", ex.fiber_over(line)))?;
            ensure(ch.fiber_over(line) == q + 1, || format!("q={q}: chain fiber {}", ch.fiber_over(line)))?;
        }
        let targets = |r: &flagres::grass::GrassResolution| r.fibers.iter().map(|x| x.target.clone()).collect::<Vec<_>>();
        ensure(targets(&ex) == targets(&ch), || format!("q={q}: images differ"))?;

        let rep = singular_locus_map(&fam, &cond, cond.expected_dims(4), budget()).unwrap();
        let singular: BTreeSet<TotalSpacePoint> = rep.singular_total.iter().map(|x| x.point.clone()).collect();
        let expected: BTreeSet<TotalSpacePoint> = [fl, gl]
            .into_iter()
            .map(|v| TotalSpacePoint { s: 0, v: FamilyPoint::Grass(v) })
            .collect();
        ensure(singular == expected, || format!("q={q}: singular set {singular:?}"))?;
        ensure(rep.singular_total.iter().all(|x| x.total >= 4), || format!("q={q}: singular tangent below 4"))?;
        let elsewhere: usize = rep.tangent_histogram.iter().filter(|(&t, _)| t != 3).map(|(_, &c)| c).sum();
        ensure(elsewhere == rep.singular_total.len(), || format!("q={q}: tangent histogram {:?}", rep.tangent_histogram))?;
    }
    Ok("q = 2, 3: fibers 2q^2+q+1 / (q+1)^2, resolution fibers (q+1)^2 and q+1, two singular points".into())
}

fn c10_conversions() -> Outcome {
    let a = VanishingSequence::new(vec![0, 2], 3).unwrap();
    let l = vanishing_to_partition(&a).unwrap();
    ensure(l.parts() == [1, 0], || format!("(0,2) -> {:?}", l.parts()))?;
    ensure(partition_to_vanishing(&[1, 0], 1, 3).unwrap() == a, || "(1,0) -> (0,2)".into())?;
    let e = exponent_form(&AdmissiblePartition::new(vec![4, 3, 3, 2, 1], 10).unwrap());
    ensure(e.pairs == [(4, 1), (3, 2), (2, 1), (1, 1)] && e.type_j == 4, || format!("{e:?}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for k in 0..200 {
        let r = rng.gen_range(0..6);
        let d = r + rng.gen_range(0..8);
        let a = VanishingSequence::random(r, d, &mut rng).unwrap();
        let back = partition_to_vanishing(vanishing_to_partition(&a).unwrap().parts(), r, d).unwrap();
        ensure(back == a, || format!("round trip {k}: {:?}", a.values()))?;
    }
    Ok("(0,2) <-> (1,0), (4^1,3^2,2^1,1^1) of type 4, 200 round trips".into())
}

fn c11_dimension_interpolation() -> Outcome {
    let n = 4;
    let big_n = 6;
    let perms = all_permutations(n).unwrap();
    let mut schubert: BTreeMap<Permutation, BTreeMap<u64, u128>> = BTreeMap::new();
    for q in [2u32, 3, 5, 7] {
        for (s, c) in schubert_counts(&standard_flag(n, field(q)), budget()).unwrap() {
            schubert.entry(s).or_default().insert(q as u64, c);
        }
    }
    for s in &perms {
        let poly = point_count_polynomial(&schubert[s], big_n).map_err(|e| format!("X_{s}: {e}"))?;
        ensure(poly.integral && poly.degree == s.inversions(), || format!("X_{s}: {poly}"))?;
    }
    let mut rich: BTreeMap<(Permutation, Permutation), BTreeMap<u64, u128>> = BTreeMap::new();
    for q in [2u32, 3, 5, 7, 11, 13] {
        let f = field(q);
        for (k, c) in richardson_counts(&standard_flag(n, f), &opposite_flag(n, f), budget()).unwrap() {
            rich.entry(k).or_default().insert(q as u64, c);
        }
    }
    let w0 = Permutation::longest(n).unwrap();
    let (mut dim_reading, mut codim_reading) = (0, 0);
    for ((s, t), counts) in &rich {
        ensure(counts.len() == 6, || format!("R({s},{t}) empty at some prime"))?;
        let poly = point_count_polynomial(counts, big_n).map_err(|e| format!("R({s},{t}): {e}"))?;
        let expected = s.inversions() + t.inversions() - big_n;
        ensure(poly.integral && poly.degree == expected, || format!("R({s},{t}): {poly}"))?;
        let literal = w0.compose(s).unwrap().inversions() + w0.compose(t).unwrap().inversions();
        dim_reading += usize::from(poly.degree == literal);
        codim_reading += usize::from(poly.degree == big_n - literal);
    }
    println!(
        "    dimension-vs-codimension: inv(w0 s) + inv(w0 t) equals dim R for {dim_reading} of {} pairs \
         and codim R for {codim_reading}; point counts support the codimension reading, dim R = inv s + inv t - 6",
        rich.len()
    );
    ensure(codim_reading == rich.len(), || "codimension reading fails somewhere".into())?;
    Ok(format!("24 Schubert and {} Richardson polynomials integral with the expected degrees", rich.len()))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("Bruhat oracle equivalence", c1_bruhat_oracle, Duration::from_secs(5)),
        ("flag counts", c2_flag_counts, Duration::from_secs(1)),
        ("Schubert counts", c3_schubert_counts, Duration::from_secs(30)),
        ("relative position laws", c4_relative_position_laws, Duration::from_secs(30)),
        ("Bott-Samelson structure", c5_chain_structure, Duration::from_secs(60)),
        ("Richardson resolution", c6_richardson_resolution, Duration::from_secs(600)),
        ("singularity pattern criterion", c7_singularity_pattern, Duration::from_secs(300)),
        ("smooth-locus union law", c8_smooth_locus_law, Duration::from_secs(900)),
        ("Grassmannian example", c9_grassmannian_example, Duration::from_secs(300)),
        ("conversions", c10_conversions, Duration::from_secs(1)),
        ("dimension interpolation", c11_dimension_interpolation, Duration::from_secs(1200)),
    ];
    let mut failed = 0;
    for (k, (name, run, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let (status, detail) = match outcome {
            Ok(d) if elapsed <= limit => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; over time limit")),
            Err(e) => ("FAIL", e),
        };
        failed += usize::from(status == "FAIL");
        println!(
            "{status} criterion {:>2} {name}: {detail} [{:.2}s / {}s]",
            k + 1,
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
