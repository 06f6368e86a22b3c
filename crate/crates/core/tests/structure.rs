use ppart_core::fixtures;
use ppart_core::poset::{enumerate_posets, random_poset};
use ppart_core::structure::{
    ci_test_counts, ci_test_ideals, classify, classify_seeded, forbidden_scan, nearly_principal,
    nearly_principal_by_fiber,
};
use ppart_core::{IdealSet, Poset};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn verdicts(p: &Poset) -> [bool; 4] {
    [
        classify(p).is_ci(),
        ci_test_ideals(p).passed,
        ci_test_counts(p).passed,
        forbidden_scan(p).is_none(),
    ]
}

#[test]
fn three_way_equivalence_random() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut ci = 0;
    for k in 0..500 {
        let n = 6 + k % 2;
        let density = rng.gen_range(0.1..0.6);
        let p = random_poset(n, density, &mut rng).unwrap();
        let v = verdicts(&p);
        assert!(v.iter().all(|&b| b == v[0]), "{v:?} on {p}");
        ci += usize::from(v[0]);
    }
    // both classes are represented
    assert!(ci > 0 && ci < 500, "{ci}");
}

#[test]
fn nearly_principal_agrees_with_fibers() {
    for n in 1..=5 {
        for p in enumerate_posets(n).unwrap() {
            for j in p.connected_ideals() {
                if p.maximal_in(j).len() == 1 {
                    continue;
                }
                assert_eq!(
                    nearly_principal(&p, j).unwrap(),
                    nearly_principal_by_fiber(&p, j).unwrap(),
                    "{j} in {p}"
                );
            }
        }
    }
}

#[test]
fn duplication_set_is_independent_of_choices() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut posets: Vec<Poset> = fixtures::all().into_iter().map(|(_, p)| p).collect();
    posets.extend((0..300).map(|k| random_poset(5 + k % 3, 0.35, &mut rng).unwrap()));
    for p in posets.iter().filter(|p| classify(p).is_ci()) {
        let mut reference = classify(p).duplication_set().unwrap().to_vec();
        reference.sort();
        for seed in 0..8 {
            let c = classify_seeded(p, seed);
            let mut d = c
                .duplication_set()
                .expect("seeded run classifies too")
                .to_vec();
            d.sort();
            assert_eq!(d, reference, "seed {seed} on {p}");
            assert_eq!(&c.recipe().unwrap().replay(p.n()).unwrap(), p);
        }
    }
}

#[test]
fn induced_subposets_of_ci_posets_are_ci() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut tested = 0;
    while tested < 200 {
        let p = random_poset(7, 0.3, &mut rng).unwrap();
        if !classify(&p).is_ci() {
            continue;
        }
        tested += 1;
        for _ in 0..10 {
            let mask: u64 = rng.gen_range(1..(1u64 << 7));
            let (sub, labels) = p.induced(IdealSet::from_bits(mask));
            assert!(classify(&sub).is_ci(), "{labels:?} in {p}");
        }
    }
}

#[test]
fn witnesses_verify() {
    for n in 1..=5 {
        for p in enumerate_posets(n).unwrap() {
            if let Some(w) = classify(&p).witness() {
                assert!(w.verify(&p), "{p}");
            }
        }
    }
    for p in [
        fixtures::forb1(),
        fixtures::forb2(),
        fixtures::forb3(),
        fixtures::ex33(),
    ] {
        assert!(!classify(&p).is_ci());
        assert!(forbidden_scan(&p).is_some());
    }
}
