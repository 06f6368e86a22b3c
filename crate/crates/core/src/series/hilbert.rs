use serde::Serialize;

use crate::error::{Error, Result};
use crate::extensions::{for_each_extension, LinearExtension};
use crate::partitions::{for_each_partition, nu, satisfies, Flavor};
use crate::poset::{IdealSet, Poset};
use crate::structure::Classification;

use super::trunc::{Grading, Term, TruncSeries};

/// What bounds a multiset of connected ideals.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Measure {
    /// Number of parts, counted with multiplicity.
    Parts,
    /// Total weight `Σ multiplicity · |J|`.
    Weight,
}

/// Visits every multiset of pairwise trivially intersecting connected
/// ideals whose measure is at most `bound`, passing its weight vector and
/// part count.
pub fn for_each_trivial_multiset<F: FnMut(&[u32], u32)>(
    p: &Poset,
    conn: &[IdealSet],
    measure: Measure,
    bound: u32,
    mut visit: F,
) {
    let mut chosen: Vec<usize> = Vec::new();
    let mut f = vec![0u32; p.n()];
    multiset_rec(conn, measure, bound, 0, 0, &mut chosen, &mut f, &mut visit);
}

#[allow(clippy::too_many_arguments)]
fn multiset_rec<F: FnMut(&[u32], u32)>(
    conn: &[IdealSet],
    measure: Measure,
    budget: u32,
    start: usize,
    parts: u32,
    chosen: &mut Vec<usize>,
    f: &mut Vec<u32>,
    visit: &mut F,
) {
    visit(f, parts);
    for idx in start..conn.len() {
        let j = conn[idx];
        if !chosen.iter().all(|&c| conn[c].intersects_trivially(j)) {
            continue;
        }
        let cost = match measure {
            Measure::Parts => 1,
            Measure::Weight => j.len() as u32,
        };
        chosen.push(idx);
        let mut m = 1u32;
        while m * cost <= budget {
            for l in j.labels() {
                f[l - 1] += 1;
            }
            // further parts must come later so each multiset is seen once
            multiset_rec(
                conn,
                measure,
                budget - m * cost,
                idx + 1,
                parts + m,
                chosen,
                f,
                visit,
            );
            m += 1;
        }
        for l in j.labels() {
            f[l - 1] -= m - 1;
        }
        chosen.pop();
    }
}

/// `Σ t^{ν(f)} x^f` over P-partitions of the given flavor, truncated.
///
/// The `t` grading is truncated by `ν` and enumerates trivially
/// intersecting multisets directly; every other grading enumerates
/// P-partitions by `|f|`.
pub fn hilbert_truncated(
    p: &Poset,
    flavor: Flavor,
    grading: Grading,
    order: u32,
) -> Result<TruncSeries> {
    let mut out = TruncSeries::zero(grading, p.n(), order)?;
    if grading == Grading::T {
        let conn = p.connected_ideals();
        for_each_trivial_multiset(p, &conn, Measure::Parts, order, |f, parts| {
            if satisfies(p, f, flavor) {
                out.add_term(parts, f, 1);
            }
        });
    } else {
        for_each_partition(p, flavor, u64::from(order), |f| {
            let t = if grading.has_t() { nu(p, f) } else { 0 };
            out.add_term(t, f, 1);
        });
    }
    Ok(out)
}

/// The Hilbert series of `S / I^init`: one term per multiset of pairwise
/// trivially intersecting connected ideals.
pub fn initial_series(p: &Poset, grading: Grading, order: u32) -> Result<TruncSeries> {
    let mut out = TruncSeries::zero(grading, p.n(), order)?;
    let conn = p.connected_ideals();
    let measure = if grading == Grading::T {
        Measure::Parts
    } else {
        Measure::Weight
    };
    for_each_trivial_multiset(p, &conn, measure, order, |f, parts| {
        out.add_term(parts, f, 1)
    });
    Ok(out)
}

/// The sum over linear extensions of
/// `t^{des_P(w)} Π_{i∈Des(w)} x^{w|[1,i]} / Π_i (1 - t^{c_P(w|[1,i])} x^{w|[1,i]})`.
pub fn rational_sum_truncated(p: &Poset, grading: Grading, order: u32) -> Result<TruncSeries> {
    if !p.is_naturally_labelled() {
        return Err(Error::Label);
    }
    let mut total = TruncSeries::zero(grading, p.n(), order)?;
    let n = p.n();
    for_each_extension(p, |w| {
        let ext = LinearExtension::new(p, w.to_vec());
        let prefixes = ext.prefixes();
        let mut numer = vec![0u32; n];
        for &i in &ext.des_set {
            for l in prefixes[i - 1].labels() {
                numer[l - 1] += 1;
            }
        }
        let mut term = total.monomial_like(ext.des_p as u32, &numer, 1);
        for prefix in &prefixes {
            let c = p.component_count(*prefix) as u32;
            term = term.div_one_minus(c, &prefix.indicator(n));
        }
        total = total.add(&term);
        true
    });
    Ok(total)
}

/// `H · Π_{J ∈ J_conn}(1 - t x^J)` modulo degree above `order`, where `H`
/// is the `(t, x)` Hilbert series of weak P-partitions.
pub fn numerator_truncated(p: &Poset, order: u32) -> Result<TruncSeries> {
    let mut g = hilbert_truncated(p, Flavor::Weak, Grading::TX, order)?;
    for j in p.connected_ideals() {
        g = g.mul_binomial(1, &j.indicator(p.n()), -1);
    }
    Ok(g)
}

/// `Σ_{J ∈ J_conn} |J|`, an upper bound on the x-degree of every term of
/// `g(t, x)`: over the common denominator each face of the initial complex
/// contributes a product of at most all the factors.
pub fn numerator_degree_bound(p: &Poset) -> u32 {
    p.connected_ideals().iter().map(|j| j.len() as u32).sum()
}

/// The numerator polynomial `g(t, x)`.
///
/// At or above [`numerator_degree_bound`] the truncation is exact. Below it
/// the computation is repeated two degrees higher and must not gain terms,
/// which can miss terms beyond a gap in the degrees.
pub fn numerator_polynomial(p: &Poset, order: u32) -> Result<TruncSeries> {
    let g = numerator_truncated(p, order)?;
    if order >= numerator_degree_bound(p) {
        return Ok(g);
    }
    let higher = numerator_truncated(p, order + 2)?;
    if higher.max_degree().unwrap_or(0) > order {
        return Err(Error::Instability { order });
    }
    debug_assert_eq!(higher.truncate(order), g);
    Ok(g)
}

#[derive(Clone, Debug, Serialize)]
pub struct KoszulReport {
    pub series: TruncSeries,
    pub nonnegative: bool,
    pub first_negative: Option<Term>,
}

/// `1 / H(-t, x)` truncated, computed as `Π(1 + t x^J) / g(-t, x)`.
pub fn koszul_inverse(p: &Poset, order: u32) -> Result<KoszulReport> {
    let g = numerator_truncated(p, order)?;
    let mut series = g.negate_t().inverse()?;
    for j in p.connected_ideals() {
        series = series.mul_binomial(1, &j.indicator(p.n()), 1);
    }
    Ok(koszul_report(series))
}

/// The same inverse by direct inversion of the truncated Hilbert series.
pub fn koszul_inverse_direct(p: &Poset, order: u32) -> Result<KoszulReport> {
    let h = hilbert_truncated(p, Flavor::Weak, Grading::TX, order)?;
    Ok(koszul_report(h.negate_t().inverse()?))
}

fn koszul_report(series: TruncSeries) -> KoszulReport {
    let first_negative = series.terms().into_iter().find(|t| t.coeff < 0);
    KoszulReport {
        nonnegative: first_negative.is_none(),
        first_negative,
        series,
    }
}

/// `Π_{Π(P)} (1 - t² x^{J₁} x^{J₂}) / Π_{J_conn} (1 - t x^J)` for a forest
/// with duplications.
pub fn duplication_product(
    p: &Poset,
    classification: &Classification,
    grading: Grading,
    order: u32,
) -> Result<TruncSeries> {
    if !classification.is_ci() {
        return Err(Error::NotFwd);
    }
    let n = p.n();
    let conn = p.connected_ideals();
    let mut s = TruncSeries::one(grading, n, order)?;
    for pair in p.pairs_among(&conn) {
        let mut f = pair.j1.indicator(n);
        for l in pair.j2.labels() {
            f[l - 1] += 1;
        }
        s = s.mul_binomial(2, &f, -1);
    }
    for j in conn {
        s = s.div_one_minus(1, &j.indicator(n));
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::structure::classify;

    fn q_coeffs(s: &TruncSeries) -> Vec<i128> {
        s.coefficient_vector()
    }

    #[test]
    fn trivial_truncation() {
        let s = hilbert_truncated(&fixtures::ex33(), Flavor::Weak, Grading::Q, 0).unwrap();
        assert_eq!(q_coeffs(&s), vec![1]);
    }

    #[test]
    fn p2_weak_q_series() {
        // 1/((1-q)(1-q^2)^2(1-q^3)) · (1-q^4)
        let base = TruncSeries::one(Grading::Q, 3, 6).unwrap();
        let expected = base
            .mul_binomial(0, &[4, 0, 0], -1)
            .div_one_minus(0, &[1, 0, 0])
            .div_one_minus(0, &[2, 0, 0])
            .div_one_minus(0, &[2, 0, 0])
            .div_one_minus(0, &[3, 0, 0]);
        let s = hilbert_truncated(&fixtures::p2(), Flavor::Weak, Grading::Q, 6).unwrap();
        assert_eq!(s, expected);
    }

    #[test]
    fn chain_rational_sum() {
        let c = Poset::chain(&[1, 2]).unwrap();
        let s = rational_sum_truncated(&c, Grading::Q, 5).unwrap();
        assert_eq!(q_coeffs(&s), vec![1, 1, 2, 2, 3, 3]);
        assert!(matches!(
            rational_sum_truncated(&fixtures::p2(), Grading::Q, 3),
            Err(Error::Label)
        ));
    }

    #[test]
    fn ex33_rational_sum_matches_enumeration() {
        let p = fixtures::ex33();
        assert_eq!(
            rational_sum_truncated(&p, Grading::TX, 10).unwrap(),
            hilbert_truncated(&p, Flavor::Standard, Grading::TX, 10).unwrap()
        );
    }

    #[test]
    fn p1_rational_sum_q() {
        let p = fixtures::p1();
        assert_eq!(
            rational_sum_truncated(&p, Grading::Q, 4).unwrap(),
            hilbert_truncated(&p, Flavor::Weak, Grading::Q, 4).unwrap()
        );
    }

    #[test]
    fn ex33_numerator() {
        let p = fixtures::ex33();
        let g = numerator_polynomial(&p, 12).unwrap();
        let mut expected = TruncSeries::one(Grading::TX, 5, 12).unwrap();
        for f in [[1, 2, 1, 1, 0], [1, 2, 1, 1, 1], [2, 2, 2, 1, 1]] {
            expected.add_term(2, &f, -1);
        }
        for f in [[2, 3, 2, 1, 1], [2, 3, 2, 2, 1]] {
            expected.add_term(3, &f, 1);
        }
        assert_eq!(g, expected);
    }

    #[test]
    fn small_numerators() {
        let chain = Poset::chain(&[1, 2, 3]).unwrap();
        assert_eq!(
            numerator_polynomial(&chain, 8).unwrap(),
            TruncSeries::one(Grading::TX, 3, 8).unwrap()
        );
        let mut expected = TruncSeries::one(Grading::TX, 3, 8).unwrap();
        expected.add_term(2, &[2, 1, 1], -1);
        assert_eq!(numerator_polynomial(&fixtures::p1(), 8).unwrap(), expected);
    }

    #[test]
    fn numerator_instability_is_reported() {
        // at order 3 the degree-4 term of the P1 numerator has not appeared
        let err = numerator_polynomial(&fixtures::p1(), 3).unwrap_err();
        assert_eq!(err, Error::Instability { order: 3 });
    }

    #[test]
    fn degree_bound_covers_terms_past_a_gap() {
        // the numerator has terms in degrees up to 11, then one in degree 15
        let p = fixtures::forb3();
        let bound = numerator_degree_bound(&p);
        let g = numerator_polynomial(&p, bound).unwrap();
        assert_eq!(g.max_degree(), Some(15));
        let higher = numerator_truncated(&p, bound + 4).unwrap();
        assert_eq!(higher.max_degree(), Some(15));
        assert_eq!(higher.truncate(bound), g);
        assert!(numerator_polynomial(&p, 14).is_err());
    }

    #[test]
    fn koszul_examples() {
        let p1 = koszul_inverse(&fixtures::p1(), 6).unwrap();
        assert!(p1.nonnegative);
        assert_eq!(
            p1.series,
            koszul_inverse_direct(&fixtures::p1(), 6).unwrap().series
        );
        let ex = koszul_inverse(&fixtures::ex33(), 8).unwrap();
        assert!(ex.nonnegative);
        let anti = Poset::antichain(2).unwrap();
        let k = koszul_inverse(&anti, 4).unwrap();
        let expected = TruncSeries::one(Grading::TX, 2, 4)
            .unwrap()
            .mul_binomial(1, &[1, 0], 1)
            .mul_binomial(1, &[0, 1], 1);
        assert_eq!(k.series, expected);
    }

    #[test]
    fn duplication_products() {
        let fig = fixtures::fig1();
        let c = classify(&fig);
        assert_eq!(
            duplication_product(&fig, &c, Grading::Q, 10).unwrap(),
            hilbert_truncated(&fig, Flavor::Weak, Grading::Q, 10).unwrap()
        );
        let one = Poset::antichain(1).unwrap();
        let s = duplication_product(&one, &classify(&one), Grading::TX, 5).unwrap();
        assert_eq!(
            s,
            TruncSeries::one(Grading::TX, 1, 5)
                .unwrap()
                .div_one_minus(1, &[1])
        );
        let p1 = fixtures::p1();
        let expected = TruncSeries::one(Grading::TX, 3, 6)
            .unwrap()
            .mul_binomial(2, &[2, 1, 1], -1)
            .div_one_minus(1, &[1, 0, 0])
            .div_one_minus(1, &[1, 1, 0])
            .div_one_minus(1, &[1, 0, 1])
            .div_one_minus(1, &[1, 1, 1]);
        assert_eq!(
            duplication_product(&p1, &classify(&p1), Grading::TX, 6).unwrap(),
            expected
        );
        let ex = fixtures::ex33();
        assert!(matches!(
            duplication_product(&ex, &classify(&ex), Grading::TX, 4),
            Err(Error::NotFwd)
        ));
    }

    #[test]
    fn t_grading_matches_enumeration_by_value() {
        // every standard f with ν(f) ≤ 3 has max(f) ≤ 3, so |f| ≤ 3n
        let p = fixtures::p2();
        let direct = hilbert_truncated(&p, Flavor::Standard, Grading::T, 3).unwrap();
        let mut brute = TruncSeries::zero(Grading::T, 3, 3).unwrap();
        for_each_partition(&p, Flavor::Standard, 9, |f| {
            brute.add_term(nu(&p, f), f, 1);
        });
        assert_eq!(direct, brute);
    }

    #[test]
    fn initial_series_matches_weak_series() {
        for (_, p) in fixtures::all() {
            for g in [Grading::TX, Grading::T] {
                assert_eq!(
                    initial_series(&p, g, 6).unwrap(),
                    hilbert_truncated(&p, Flavor::Weak, g, 6).unwrap()
                );
            }
        }
    }
}
