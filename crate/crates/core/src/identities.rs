//! Cross-module identities checked on a single poset. Each check compares
//! two independent computations of the same quantity.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::complexes::{
    delta_complex, forest_consistency, is_p_forest, p_forests, DEFAULT_VERTEX_CAP,
};
use crate::error::{Error, Result};
use crate::extensions::{
    count_extensions, for_each_extension, linear_extensions, maj_polynomial, maj_polynomial_dp,
    DEFAULT_EXTENSION_CAP,
};
use crate::partitions::{
    connected_decomposition, delta_data, enumerate_partitions, fundamental_permutation,
    is_compatible, nested_decomposition, satisfies, Flavor,
};
use crate::poset::{IdealSet, Poset};
use crate::presentation::{generators, verify_vanishing, IdealKind};
use crate::series::{
    duplication_product, hilbert_truncated, hook_count, hook_formula_given, initial_series,
    koszul_inverse, koszul_inverse_direct, q_pochhammer, rational_sum_truncated, Grading, QPoly,
};
use crate::structure::{
    ci_test_counts, ci_test_ideals, classify, duplication_predictions, forbidden_scan,
    Classification,
};

/// Largest `|f|` used by the per-partition round trips.
pub const ROUND_TRIP_TOTAL: u32 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub outcome: Outcome,
    pub detail: String,
}

impl Check {
    fn from_bool(name: &'static str, ok: bool, detail: impl Into<String>) -> Check {
        Check {
            name,
            outcome: if ok { Outcome::Pass } else { Outcome::Fail },
            detail: if ok { String::new() } else { detail.into() },
        }
    }

    fn skipped(name: &'static str, why: &str) -> Check {
        Check {
            name,
            outcome: Outcome::Skipped,
            detail: why.to_string(),
        }
    }

    pub fn failed(&self) -> bool {
        self.outcome == Outcome::Fail
    }
}

/// Every check name, in the order `run_all` reports them.
pub const CHECKS: [&str; 16] = [
    "extension-counts",
    "maj-series",
    "rational-sum",
    "decompositions",
    "fundamental-permutation",
    "initial-series",
    "nu-bound",
    "ci-equivalence",
    "recipe-replay",
    "product-formula",
    "hook-formula",
    "koszul",
    "principality",
    "presentation",
    "hereditary",
    "forests",
];

/// Limits for the more expensive checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub order: u32,
    pub rational_sum_max_n: usize,
    pub forest_max_n: usize,
}

impl Default for Limits {
    fn default() -> Limits {
        Limits {
            order: 12,
            rational_sum_max_n: 5,
            forest_max_n: 6,
        }
    }
}

fn to_i128s(poly: &QPoly, upto: usize) -> Vec<i128> {
    (0..=upto)
        .map(|k| poly.coeff(k).to_i128().expect("coefficient fits in i128"))
        .collect()
}

fn q_series(p: &Poset, flavor: Flavor, order: u32) -> Result<Vec<i128>> {
    Ok(hilbert_truncated(p, flavor, Grading::Q, order)?.coefficient_vector())
}

fn times_poly(series: &[i128], poly: &QPoly) -> Vec<i128> {
    let mut out = vec![0i128; series.len()];
    for (k, c) in poly.coeffs().iter().enumerate() {
        let c = c.to_i128().expect("coefficient fits in i128");
        for (d, &s) in series.iter().enumerate() {
            if d + k < out.len() {
                out[d + k] += c * s;
            }
        }
    }
    out
}

/// Runs every check on `p`.
pub fn run_all(p: &Poset, limits: Limits) -> Result<Vec<Check>> {
    let classification = classify(p);
    let mut out = vec![
        extension_counts(p)?,
        maj_series(p, limits.order)?,
        rational_sum(p, limits)?,
        decompositions(p)?,
        fundamental(p)?,
        initial(p, limits.order)?,
        nu_bound(p, limits.order)?,
        ci_equivalence(p, &classification),
        recipe_replay(p, &classification)?,
        product_formula(p, &classification, limits.order)?,
        hook(p, &classification)?,
        koszul(p, limits.order)?,
        principality(p, limits.order)?,
        presentation(p),
        hereditary(p, &classification),
        forests(p, limits.forest_max_n)?,
    ];
    debug_assert!(out.iter().map(|c| c.name).eq(CHECKS));
    out.shrink_to_fit();
    Ok(out)
}

fn extension_counts(p: &Poset) -> Result<Check> {
    let name = "extension-counts";
    let exts = linear_extensions(p, DEFAULT_EXTENSION_CAP)?;
    let dp = count_extensions(p)?;
    let maj = maj_polynomial(p, DEFAULT_EXTENSION_CAP)?;
    let maj_dp = maj_polynomial_dp(p)?;
    let prefixes_ok = exts
        .iter()
        .all(|e| e.prefixes().iter().all(|&s| p.is_ideal(s)));
    let sorted = exts.windows(2).all(|w| w[0].w < w[1].w);
    let len = BigUint::from(exts.len());
    let ok =
        dp == len && maj.eval_one() == dp.clone().into() && maj == maj_dp && prefixes_ok && sorted;
    Ok(Check::from_bool(
        name,
        ok,
        format!(
            "enumeration {len}, ideal lattice {dp}, maj(1) {}",
            maj.eval_one()
        ),
    ))
}

fn maj_series(p: &Poset, order: u32) -> Result<Check> {
    let name = "maj-series";
    let series = q_series(p, Flavor::Standard, order)?;
    let lhs = times_poly(&series, &q_pochhammer(p.n()));
    let rhs = to_i128s(&maj_polynomial(p, DEFAULT_EXTENSION_CAP)?, order as usize);
    Ok(Check::from_bool(
        name,
        lhs == rhs,
        format!("{lhs:?} != {rhs:?}"),
    ))
}

fn rational_sum(p: &Poset, limits: Limits) -> Result<Check> {
    let name = "rational-sum";
    if !p.is_naturally_labelled() {
        return Ok(Check::skipped(name, "not naturally labelled"));
    }
    if p.n() > limits.rational_sum_max_n {
        return Ok(Check::skipped(name, "too many elements"));
    }
    let order = limits.order;
    let sum = rational_sum_truncated(p, Grading::TX, order)?;
    let direct = hilbert_truncated(p, Flavor::Standard, Grading::TX, order)?;
    Ok(Check::from_bool(
        name,
        sum == direct,
        "rational sum differs from enumeration",
    ))
}

fn decompositions(p: &Poset) -> Result<Check> {
    let name = "decompositions";
    let conn = p.connected_ideals();
    for f in enumerate_partitions(p, Flavor::Weak, u64::from(ROUND_TRIP_TOTAL)) {
        let nested = nested_decomposition(p, &f)?;
        let mut sum = vec![0u32; p.n()];
        for ideal in &nested {
            for l in ideal.labels() {
                sum[l - 1] += 1;
            }
        }
        let chain_ok = nested.windows(2).all(|w| w[1].is_subset(w[0]))
            && nested.iter().all(|&i| p.is_ideal(i) && !i.is_empty());
        let d = connected_decomposition(p, &f)?;
        let parts_ok = d.parts.iter().all(|(j, _)| conn.contains(j))
            && d.parts.iter().enumerate().all(|(k, (a, _))| {
                d.parts[k + 1..]
                    .iter()
                    .all(|(b, _)| a.intersects_trivially(*b))
            });
        let nu_ok = d.nu == d.parts.iter().map(|&(_, m)| m).sum::<u32>();
        if sum != f || !chain_ok || d.weight(p.n()) != f || !parts_ok || !nu_ok {
            return Ok(Check::from_bool(
                name,
                false,
                format!("round trip fails at {f:?}"),
            ));
        }
    }
    Ok(Check::from_bool(name, true, ""))
}

fn fundamental(p: &Poset) -> Result<Check> {
    let name = "fundamental-permutation";
    let mut exts: Vec<Vec<usize>> = Vec::new();
    for_each_extension(p, |w| {
        exts.push(w.to_vec());
        exts.len() <= 5_000
    });
    let exhaustive = exts.len() <= 5_000;
    for f in enumerate_partitions(p, Flavor::Standard, u64::from(ROUND_TRIP_TOTAL)) {
        let fun = fundamental_permutation(p, &f)?;
        let mut sum = vec![0u32; p.n()];
        for &(c, ideal) in &fun.telescoping {
            for l in ideal.labels() {
                sum[l - 1] += c;
            }
        }
        let unique = !exhaustive || exts.iter().filter(|w| is_compatible(p, &f, w)).count() == 1;
        if sum != f || !is_compatible(p, &f, &fun.w) || !unique {
            return Ok(Check::from_bool(name, false, format!("fails at {f:?}")));
        }
    }
    Ok(Check::from_bool(name, true, ""))
}

fn initial(p: &Poset, order: u32) -> Result<Check> {
    let name = "initial-series";
    let init = initial_series(p, Grading::X, order)?;
    let weak = hilbert_truncated(p, Flavor::Weak, Grading::X, order)?;
    let ones = init.terms().iter().all(|t| t.coeff == 1);
    Ok(Check::from_bool(
        name,
        ones && init == weak,
        "multiset count differs from weak partition count",
    ))
}

fn nu_bound(p: &Poset, order: u32) -> Result<Check> {
    let name = "nu-bound";
    let mut all_equal = true;
    let mut bound_ok = true;
    let limit = order.clamp(2, ROUND_TRIP_TOTAL);
    for f in enumerate_partitions(p, Flavor::Weak, u64::from(limit)) {
        let nu = connected_decomposition(p, &f)?.nu;
        let max = f.iter().copied().max().unwrap_or(0);
        bound_ok &= nu >= max;
        all_equal &= nu == max;
    }
    let ok = bound_ok && all_equal == p.minimum().is_some();
    Ok(Check::from_bool(
        name,
        ok,
        "ν(f) ≥ max(f) or its equality case fails",
    ))
}

fn ci_equivalence(p: &Poset, c: &Classification) -> Check {
    let verdicts = [
        c.is_ci(),
        ci_test_ideals(p).passed,
        ci_test_counts(p).passed,
        forbidden_scan(p).is_none(),
    ];
    let ok = verdicts.iter().all(|&v| v == verdicts[0]);
    Check::from_bool(
        "ci-equivalence",
        ok,
        format!("classify, ideals, counts, forbidden: {verdicts:?}"),
    )
}

fn recipe_replay(p: &Poset, c: &Classification) -> Result<Check> {
    let name = "recipe-replay";
    Ok(match c {
        Classification::Recipe { recipe: r, .. } => {
            let rebuilt = r.replay(p.n())?;
            let dups = r.duplication_set();
            let used: Vec<usize> = dups.iter().flat_map(|&(a, b)| [a, b]).collect();
            let disjoint = IdealSet::from_labels(used.iter().copied()).len() == used.len();
            let predicted = duplication_predictions(p, r).matches;
            Check::from_bool(
                name,
                rebuilt == *p && disjoint && predicted,
                "replay, disjointness or duplication prediction fails",
            )
        }
        Classification::Witness { witness: w } => {
            Check::from_bool(name, w.verify(p), "witness does not verify")
        }
    })
}

fn product_formula(p: &Poset, c: &Classification, order: u32) -> Result<Check> {
    let name = "product-formula";
    if !c.is_ci() {
        return Ok(Check::skipped(name, "not a complete intersection"));
    }
    let product = duplication_product(p, c, Grading::TX, order)?;
    let direct = hilbert_truncated(p, Flavor::Weak, Grading::TX, order)?;
    Ok(Check::from_bool(
        name,
        product == direct,
        "product differs from enumeration",
    ))
}

fn hook(p: &Poset, c: &Classification) -> Result<Check> {
    let name = "hook-formula";
    if !c.is_ci() {
        return Ok(Check::skipped(name, "not a complete intersection"));
    }
    let count_ok = hook_count(p)? == count_extensions(p)?;
    if !p.is_naturally_labelled() {
        return Ok(Check::from_bool(name, count_ok, "hook count differs"));
    }
    let q_ok = match hook_formula_given(p, c) {
        Ok(h) => h == maj_polynomial(p, DEFAULT_EXTENSION_CAP)?,
        Err(Error::Remainder { .. }) => false,
        Err(e) => return Err(e),
    };
    Ok(Check::from_bool(
        name,
        count_ok && q_ok,
        "hook formula differs from maj polynomial",
    ))
}

fn koszul(p: &Poset, order: u32) -> Result<Check> {
    let name = "koszul";
    let report = koszul_inverse(p, order)?;
    let agrees = p.n() > 4
        || koszul_inverse_direct(p, order.min(8))?.series == report.series.truncate(order.min(8));
    Ok(Check::from_bool(
        name,
        report.nonnegative && agrees,
        format!("first negative term {:?}", report.first_negative),
    ))
}

fn shifted(f: &[u32], d: &[u32]) -> Option<Vec<u32>> {
    f.iter().zip(d).map(|(&a, &b)| a.checked_sub(b)).collect()
}

fn principality(p: &Poset, order: u32) -> Result<Check> {
    let name = "principality";
    let data = delta_data(p);
    let limit = order.min(ROUND_TRIP_TOTAL);
    let standard = enumerate_partitions(p, Flavor::Standard, u64::from(limit));
    if data.satisfies_labelled_condition {
        let shift: u32 = data.delta.iter().sum();
        let mut expected: Vec<Vec<u32>> = if shift <= limit {
            enumerate_partitions(p, Flavor::Weak, u64::from(limit - shift))
                .into_iter()
                .map(|g| g.iter().zip(&data.delta).map(|(a, b)| a + b).collect())
                .collect()
        } else {
            Vec::new()
        };
        expected.sort();
        let mut got = standard.clone();
        got.sort();
        // q^{maj(P)} Π(1-q^i) Σ_{weak} q^{|g|} against the maj polynomial
        let weak = q_series(p, Flavor::Weak, order)?;
        let mut lhs = vec![0i128; weak.len()];
        let s = shift as usize;
        for (k, c) in times_poly(&weak, &q_pochhammer(p.n()))
            .into_iter()
            .enumerate()
        {
            if k + s < lhs.len() {
                lhs[k + s] = c;
            }
        }
        let rhs = to_i128s(&maj_polynomial(p, DEFAULT_EXTENSION_CAP)?, order as usize);
        Ok(Check::from_bool(
            name,
            got == expected && lhs == rhs,
            "standard partitions are not δ plus weak ones",
        ))
    } else {
        let f = data
            .counterexample(p)
            .expect("condition fails on some cover");
        let ok = satisfies(p, &f, Flavor::Standard)
            && shifted(&f, &data.delta).is_none_or(|g| !satisfies(p, &g, Flavor::Weak));
        Ok(Check::from_bool(
            name,
            ok,
            format!("counterexample {f:?} is invalid"),
        ))
    }
}

fn presentation(p: &Poset) -> Check {
    let pairs = p.nontrivial_pairs().len();
    let toric = generators(p, IdealKind::Toric);
    let graded = generators(p, IdealKind::Graded);
    let initial = generators(p, IdealKind::Initial);
    let counts = toric.len() == pairs && graded.len() == pairs && initial.len() == pairs;
    let quadratic = graded
        .iter()
        .all(|g| g.lhs.len() == 2 && (g.rhs.is_empty() || g.rhs.len() == 2));
    let balanced = verify_vanishing(p, &toric) && verify_vanishing(p, &graded);
    let ci = ci_test_counts(p).passed
        == (p.connected_ideals().len() as i64 - pairs as i64 == p.n() as i64);
    Check::from_bool(
        "presentation",
        counts && quadratic && balanced && ci,
        "generator counts, degrees or balance fail",
    )
}

fn hereditary(p: &Poset, c: &Classification) -> Check {
    let name = "hereditary";
    if !c.is_ci() {
        return Check::skipped(name, "not a complete intersection");
    }
    let ok = p.elements().all(|x| {
        let (sub, _) = p.induced(p.full().without(x));
        sub.n() == 0 || classify(&sub).is_ci()
    });
    Check::from_bool(
        name,
        ok,
        "an induced subposet is not a complete intersection",
    )
}

fn forests(p: &Poset, max_n: usize) -> Result<Check> {
    let name = "forests";
    if p.n() > max_n {
        return Ok(Check::skipped(name, "too many elements"));
    }
    let complex = match delta_complex(p, DEFAULT_VERTEX_CAP) {
        Ok(c) => c,
        Err(Error::Cap { .. }) => return Ok(Check::skipped(name, "too many connected ideals")),
        Err(e) => return Err(e),
    };
    let forests = p_forests(p, DEFAULT_VERTEX_CAP)?;
    let mut from_facets: Vec<Vec<IdealSet>> = complex
        .facets
        .iter()
        .map(|f| {
            let mut v = complex.facet_ideals(f);
            v.sort();
            v
        })
        .collect();
    from_facets.sort();
    let mut from_forests: Vec<Vec<IdealSet>> = forests.iter().map(|f| f.ideal_set()).collect();
    from_forests.sort();
    let bijection = from_facets == from_forests && forests.iter().all(|f| is_p_forest(p, f));
    let pairs: Vec<(IdealSet, IdealSet)> = p
        .nontrivial_pairs()
        .iter()
        .map(|pp| (pp.j1, pp.j2))
        .collect();
    let flag = complex.minimal_non_faces() == pairs;
    let cone = !p.is_connected()
        || complex
            .facets
            .iter()
            .all(|f| complex.facet_ideals(f).contains(&p.full()));
    let sum = forest_consistency(p, DEFAULT_VERTEX_CAP)?.passed;
    Ok(Check::from_bool(
        name,
        bijection && flag && cone && sum,
        format!("bijection {bijection}, flag {flag}, full ideal {cone}, count {sum}"),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn fixtures_pass() {
        for (name, p) in fixtures::all() {
            let checks = run_all(&p, Limits::default()).unwrap();
            for c in checks {
                assert!(!c.failed(), "{name}: {} failed: {}", c.name, c.detail);
            }
        }
    }
}
