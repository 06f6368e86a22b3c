use num_bigint::BigUint;
use ppart_core::complexes::{forest_consistency, p_forests, DEFAULT_VERTEX_CAP};
use ppart_core::extensions::{count_extensions, linear_extensions, maj_polynomial};
use ppart_core::fixtures;
use ppart_core::partitions::{enumerate_partitions, Flavor};
use ppart_core::presentation::{semigroup_ideal, toric_generators};
use ppart_core::series::{
    hilbert_truncated, hook_formula, numerator_polynomial, q_int, q_int_pow, q_pochhammer,
};
use ppart_core::structure::{ci_test_counts, ci_test_ideals, classify, forbidden_scan};
use ppart_core::{Grading, IdealSet, QPoly};

fn set(labels: &[usize]) -> IdealSet {
    IdealSet::from_labels(labels.iter().copied())
}

#[test]
fn fig1_tables() {
    let p = fixtures::fig1();
    let mut sizes: Vec<usize> = p.connected_ideals().iter().map(|j| j.len()).collect();
    sizes.sort();
    assert_eq!(sizes, vec![1, 1, 1, 1, 2, 3, 4, 7, 7, 8]);
    let mut sums: Vec<usize> = p
        .nontrivial_pairs()
        .iter()
        .map(|pp| pp.j1.len() + pp.j2.len())
        .collect();
    sums.sort();
    assert_eq!(sums, vec![5, 14]);
    assert_eq!(count_extensions(&p).unwrap(), BigUint::from(300u32));
    let expected = &(&(&q_int_pow(2, 7) * &q_int(5)) * &q_int(5)) * &q_int(6);
    assert_eq!(maj_polynomial(&p, 1000).unwrap(), expected);
    assert_eq!(hook_formula(&p).unwrap(), expected);
    let rendered: Vec<String> = toric_generators(&p).iter().map(|g| g.render(8)).collect();
    assert_eq!(
        rendered,
        vec![
            "U15*U126 - U1256*U1",
            "U1234567*U1234568 - U12345678*U1256*U3*U4"
        ]
    );
    assert_eq!(classify(&p).duplication_set().unwrap(), &[(5, 6), (7, 8)]);
}

#[test]
fn example_ideal_table() {
    let p = fixtures::ex33();
    // (ideal, c_P) for every nonempty order ideal
    let table: Vec<(IdealSet, usize)> = p
        .ideals()
        .into_iter()
        .filter(|j| !j.is_empty())
        .map(|j| (j, p.component_count(j)))
        .collect();
    let expected = vec![
        (set(&[1]), 1),
        (set(&[2]), 1),
        (set(&[1, 2]), 2),
        (set(&[2, 4]), 1),
        (set(&[1, 2, 3]), 1),
        (set(&[1, 2, 4]), 2),
        (set(&[1, 2, 3, 4]), 1),
        (set(&[1, 2, 3, 5]), 1),
        (set(&[1, 2, 3, 4, 5]), 1),
    ];
    assert_eq!(table, expected);
    let des: Vec<(Vec<usize>, usize)> = linear_extensions(&p, 100)
        .unwrap()
        .into_iter()
        .map(|e| (e.w, e.des_p))
        .collect();
    assert_eq!(
        des,
        vec![
            (vec![1, 2, 3, 4, 5], 0),
            (vec![1, 2, 3, 5, 4], 1),
            (vec![1, 2, 4, 3, 5], 2),
            (vec![2, 1, 3, 4, 5], 1),
            (vec![2, 1, 3, 5, 4], 2),
            (vec![2, 1, 4, 3, 5], 3),
            (vec![2, 4, 1, 3, 5], 1),
        ]
    );
    let g = numerator_polynomial(&p, 12).unwrap();
    let mut terms: Vec<(u32, Vec<u32>, i128)> = g
        .terms()
        .into_iter()
        .map(|t| (t.t, t.exps, t.coeff))
        .collect();
    terms.sort();
    assert_eq!(
        terms,
        vec![
            (0, vec![0, 0, 0, 0, 0], 1),
            (2, vec![1, 2, 1, 1, 0], -1),
            (2, vec![1, 2, 1, 1, 1], -1),
            (2, vec![2, 2, 2, 1, 1], -1),
            (3, vec![2, 3, 2, 1, 1], 1),
            (3, vec![2, 3, 2, 2, 1], 1),
        ]
    );
    assert!(!classify(&p).is_ci());
    assert!(!ci_test_ideals(&p).passed);
    assert!(!ci_test_counts(&p).passed);
    assert!(forbidden_scan(&p).is_some());
}

#[test]
fn two_generator_standard_ideal() {
    let p3 = semigroup_ideal(&fixtures::p3());
    assert_eq!(p3.principal, Some(vec![0, 0, 1]));
    let p2 = fixtures::p2();
    let data = semigroup_ideal(&p2);
    assert_eq!(data.generators, vec![vec![0, 1, 0], vec![0, 1, 1]]);
    assert_eq!(data.principal, None);
    // The printed value q^2 + q^3 disagrees with the enumeration below and
    // with the Hilbert series printed alongside it; q + q^2 is correct.
    let series = hilbert_truncated(&p2, Flavor::Standard, Grading::Q, 10)
        .unwrap()
        .coefficient_vector();
    let poch = q_pochhammer(3);
    let mut product = vec![0i128; 11];
    for (k, c) in poch.coeffs().iter().enumerate() {
        let c: i128 = c.try_into().unwrap();
        for (d, s) in series.iter().enumerate() {
            if k + d <= 10 {
                product[k + d] += c * s;
            }
        }
    }
    let mut expected = vec![0i128; 11];
    expected[1] = 1;
    expected[2] = 1;
    assert_eq!(product, expected);
    assert_eq!(
        maj_polynomial(&p2, 10).unwrap(),
        QPoly::from_i64s(&[0, 1, 1])
    );
}

#[test]
fn bowtie_forests() {
    let p = fixtures::bowtie();
    assert_eq!(p_forests(&p, DEFAULT_VERTEX_CAP).unwrap().len(), 2);
    let report = forest_consistency(&p, DEFAULT_VERTEX_CAP).unwrap();
    assert_eq!(report.total, BigUint::from(4u32));
    let words: Vec<Vec<usize>> = linear_extensions(&p, 10)
        .unwrap()
        .into_iter()
        .map(|e| e.w)
        .collect();
    assert_eq!(
        words,
        vec![
            vec![1, 3, 2, 4],
            vec![1, 3, 4, 2],
            vec![3, 1, 2, 4],
            vec![3, 1, 4, 2]
        ]
    );
}

#[test]
fn small_listings() {
    let chain = ppart_core::Poset::chain(&[1, 2]).unwrap();
    assert_eq!(
        enumerate_partitions(&chain, Flavor::Weak, 2),
        vec![vec![0, 0], vec![1, 0], vec![1, 1], vec![2, 0]]
    );
    assert_eq!(
        enumerate_partitions(&fixtures::p2(), Flavor::Standard, 1),
        vec![vec![0, 1, 0]]
    );
}
