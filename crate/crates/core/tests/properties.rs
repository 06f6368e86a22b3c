use num_bigint::BigUint;
use ppart_core::extensions::count_extensions;
use ppart_core::partitions::{connected_decomposition, enumerate_partitions, nu, Flavor};
use ppart_core::poset::{enumerate_posets, random_poset};
use ppart_core::series::{numerator_degree_bound, numerator_truncated, QPoly};
use ppart_core::{parse_poset, Grading, IdealSet, Poset, TruncSeries};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn poset_strategy(max_n: usize) -> impl Strategy<Value = Poset> {
    (1..=max_n, any::<u64>(), 0.0f64..0.7).prop_map(|(n, seed, density)| {
        random_poset(n, density, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap()
    })
}

fn series_strategy(unit: bool) -> impl Strategy<Value = TruncSeries> {
    let term = (0u32..3, prop::collection::vec(0u32..3, 3), -4i128..5);
    (prop::collection::vec(term, 0..8), prop::bool::ANY).prop_map(move |(terms, neg)| {
        let mut s = TruncSeries::zero(Grading::TX, 3, 6).unwrap();
        for (t, f, c) in terms {
            if f.iter().any(|&e| e > 0) {
                s.add_term(t, &f, c);
            }
        }
        if unit {
            s.add_term(0, &[0, 0, 0], if neg { -1 } else { 1 });
        }
        s
    })
}

fn brute_connected_ideals(p: &Poset) -> Vec<IdealSet> {
    let mut out: Vec<IdealSet> = (1u64..1 << p.n())
        .map(IdealSet::from_bits)
        .filter(|&s| {
            let closed = s
                .labels()
                .all(|j| p.elements().all(|i| !p.less(i, j) || s.contains(i)));
            // connectivity through comparabilities inside s
            let mut reached = IdealSet::singleton(s.min_label().unwrap());
            loop {
                let next = s
                    .labels()
                    .filter(|&x| reached.labels().any(|r| p.comparable(r, x)))
                    .fold(reached, |acc, x| acc.with(x));
                if next == reached {
                    break;
                }
                reached = next;
            }
            closed && reached == s
        })
        .collect();
    out.sort();
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for rest in permutations(n - 1) {
        for pos in 0..=rest.len() {
            let mut w = rest.clone();
            w.insert(pos, n);
            out.push(w);
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn series_multiplication_is_associative(
        a in series_strategy(false),
        b in series_strategy(false),
        c in series_strategy(false),
    ) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
    }

    #[test]
    fn series_inverse(a in series_strategy(true)) {
        let inv = a.inverse().unwrap();
        prop_assert_eq!(a.mul(&inv), a.unit_like());
    }

    #[test]
    fn connected_ideals_match_brute_force(p in poset_strategy(10)) {
        prop_assert_eq!(p.connected_ideals(), brute_connected_ideals(&p));
    }

    #[test]
    fn pairs_match_definition(p in poset_strategy(8)) {
        let conn = p.connected_ideals();
        let mut expected = Vec::new();
        for (k, &a) in conn.iter().enumerate() {
            for &b in &conn[k + 1..] {
                if a.intersects(b) && !a.is_subset(b) && !b.is_subset(a) {
                    expected.push((a, b));
                }
            }
        }
        expected.sort();
        let pairs = p.nontrivial_pairs();
        let got: Vec<(IdealSet, IdealSet)> = pairs.iter().map(|pp| (pp.j1, pp.j2)).collect();
        prop_assert_eq!(got, expected);
        for pp in pairs {
            prop_assert!(conn.contains(&pp.union));
            prop_assert!(pp.intersection_components.iter().all(|c| conn.contains(c)));
        }
    }

    #[test]
    fn natural_relabel_is_an_isomorphism(p in poset_strategy(9)) {
        let (q, perm) = p.natural_relabel();
        prop_assert!(q.is_naturally_labelled());
        for a in p.elements() {
            for b in p.elements() {
                prop_assert_eq!(p.less(a, b), q.less(perm[a - 1], perm[b - 1]));
            }
        }
        prop_assert!(q.first_occurrence(&p).is_some());
    }

    #[test]
    fn file_format_round_trips(p in poset_strategy(12)) {
        prop_assert_eq!(parse_poset(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn extension_count_matches_permutations(p in poset_strategy(7)) {
        let brute = permutations(p.n())
            .into_iter()
            .filter(|w| {
                (0..w.len()).all(|i| (i + 1..w.len()).all(|j| !p.less(w[j], w[i])))
            })
            .count();
        prop_assert_eq!(count_extensions(&p).unwrap(), BigUint::from(brute));
    }

    #[test]
    fn nu_is_at_least_the_maximum(p in poset_strategy(6)) {
        for f in enumerate_partitions(&p, Flavor::Weak, 6) {
            let max = f.iter().copied().max().unwrap_or(0);
            let d = connected_decomposition(&p, &f).unwrap();
            prop_assert_eq!(d.nu, nu(&p, &f));
            prop_assert!(d.nu >= max);
        }
    }

    #[test]
    fn numerator_degree_is_bounded(p in poset_strategy(4)) {
        let bound = numerator_degree_bound(&p);
        let g = numerator_truncated(&p, bound + 3).unwrap();
        prop_assert!(g.max_degree().unwrap_or(0) <= bound);
    }

    #[test]
    fn exact_division_inverts_multiplication(
        a in prop::collection::vec(-5i64..6, 0..6),
        b in prop::collection::vec(-5i64..6, 1..5),
    ) {
        let a = QPoly::from_i64s(&a);
        let mut b = QPoly::from_i64s(&b);
        if b.is_zero() {
            b = QPoly::one();
        }
        let lead = b.coeff(b.degree().unwrap());
        prop_assume!(lead == 1.into() || lead == (-1).into());
        prop_assert_eq!((&a * &b).div_exact(&b).unwrap(), a);
    }
}

#[test]
fn poset_counts_match_relation_brute_force() {
    for n in 1..=4usize {
        let off: Vec<(usize, usize)> = (1..=n)
            .flat_map(|a| (1..=n).filter(move |&b| b != a).map(move |b| (a, b)))
            .collect();
        let mut count = 0;
        for mask in 0u64..1 << off.len() {
            let rel = |a: usize, b: usize| {
                off.iter()
                    .position(|&x| x == (a, b))
                    .is_some_and(|k| mask >> k & 1 == 1)
            };
            let antisymmetric = off.iter().all(|&(a, b)| !(rel(a, b) && rel(b, a)));
            let transitive = off.iter().all(|&(a, b)| {
                !rel(a, b) || (1..=n).all(|c| c == a || c == b || !rel(b, c) || rel(a, c))
            });
            count += usize::from(antisymmetric && transitive);
        }
        assert_eq!(enumerate_posets(n).unwrap().count(), count, "n = {n}");
    }
}
