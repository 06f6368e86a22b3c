//! P-partitions: flavor tests, the nested and connected decompositions, the
//! fundamental permutation, bounded enumeration and the δ function.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poset::{IdealSet, Poset};

/// Which inequalities a map must satisfy along `i <_P j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    /// `f(i) ≥ f(j)`.
    Weak,
    /// `f(i) ≥ f(j)`, strict when `i > j` as integers.
    Standard,
    /// `f(i) > f(j)`.
    Strict,
}

impl Flavor {
    pub const ALL: [Flavor; 3] = [Flavor::Weak, Flavor::Standard, Flavor::Strict];

    pub fn name(self) -> &'static str {
        match self {
            Flavor::Weak => "weak",
            Flavor::Standard => "standard",
            Flavor::Strict => "strict",
        }
    }

    /// Required gap `f(i) - f(j)` for `i <_P j`.
    pub fn gap(self, i: usize, j: usize) -> u32 {
        match self {
            Flavor::Weak => 0,
            Flavor::Standard => u32::from(i > j),
            Flavor::Strict => 1,
        }
    }
}

impl std::str::FromStr for Flavor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Flavor> {
        match s {
            "weak" => Ok(Flavor::Weak),
            "standard" => Ok(Flavor::Standard),
            "strict" => Ok(Flavor::Strict),
            other => Err(Error::Arg(format!("unknown flavor `{other}`"))),
        }
    }
}

/// A map `P → ℕ` with the most restrictive flavor it satisfies.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PPartition {
    pub values: Vec<u32>,
    pub flavor: Option<Flavor>,
}

impl PPartition {
    pub fn new(p: &Poset, values: Vec<u32>) -> Result<PPartition> {
        check_len(p, &values)?;
        let flavor = classify_map(p, &values);
        Ok(PPartition { values, flavor })
    }

    pub fn total(&self) -> u64 {
        self.values.iter().map(|&v| u64::from(v)).sum()
    }
}

fn check_len(p: &Poset, f: &[u32]) -> Result<()> {
    if f.len() != p.n() {
        return Err(Error::Arg(format!(
            "map has {} values for {} elements",
            f.len(),
            p.n()
        )));
    }
    Ok(())
}

/// Whether `f` satisfies the inequalities of `flavor`.
pub fn satisfies(p: &Poset, f: &[u32], flavor: Flavor) -> bool {
    p.elements().all(|j| {
        p.strictly_below(j)
            .labels()
            .all(|i| f[i - 1] >= f[j - 1].saturating_add(flavor.gap(i, j)))
    })
}

/// The most restrictive flavor `f` satisfies, or `None` if it is not even weak.
///
/// Panics if `f` does not have one value per element.
pub fn classify_map(p: &Poset, f: &[u32]) -> Option<Flavor> {
    assert_eq!(f.len(), p.n(), "one value per element");
    [Flavor::Strict, Flavor::Standard, Flavor::Weak]
        .into_iter()
        .find(|&fl| satisfies(p, f, fl))
}

fn require(p: &Poset, f: &[u32], flavor: Flavor) -> Result<()> {
    check_len(p, f)?;
    if satisfies(p, f, flavor) {
        Ok(())
    } else {
        Err(Error::Flavor {
            expected: flavor.name(),
        })
    }
}

/// `I_k = f^{-1}({k, k+1, ...})` for `k = 1..max(f)`.
pub fn nested_decomposition(p: &Poset, f: &[u32]) -> Result<Vec<IdealSet>> {
    require(p, f, Flavor::Weak)?;
    let top = f.iter().copied().max().unwrap_or(0);
    Ok((1..=top)
        .map(|k| IdealSet::from_labels(p.elements().filter(|&i| f[i - 1] >= k)))
        .collect())
}

/// The unique multiset of pairwise trivially intersecting connected ideals
/// summing to `f`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConnDecomposition {
    /// Distinct parts with multiplicities, in canonical order.
    pub parts: Vec<(IdealSet, u32)>,
    pub nu: u32,
}

impl ConnDecomposition {
    /// `Σ multiplicity · χ_J`.
    pub fn weight(&self, n: usize) -> Vec<u32> {
        let mut out = vec![0u32; n];
        for &(j, m) in &self.parts {
            for l in j.labels() {
                out[l - 1] += m;
            }
        }
        out
    }
}

pub fn connected_decomposition(p: &Poset, f: &[u32]) -> Result<ConnDecomposition> {
    let nested = nested_decomposition(p, f)?;
    let mut parts: Vec<(IdealSet, u32)> = Vec::new();
    for ideal in nested {
        for comp in p.hasse_components(ideal) {
            match parts.iter_mut().find(|(j, _)| *j == comp) {
                Some((_, m)) => *m += 1,
                None => parts.push((comp, 1)),
            }
        }
    }
    parts.sort();
    let nu = parts.iter().map(|&(_, m)| m).sum();
    Ok(ConnDecomposition { parts, nu })
}

/// `ν(f)` without materialising the decomposition.
pub fn nu(p: &Poset, f: &[u32]) -> u32 {
    let top = f.iter().copied().max().unwrap_or(0);
    (1..=top)
        .map(|k| {
            let ideal = IdealSet::from_labels(p.elements().filter(|&i| f[i - 1] >= k));
            p.component_count(ideal) as u32
        })
        .sum()
}

/// The linear extension attached to a standard P-partition, with the
/// telescoping expansion of `f` along its prefixes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fundamental {
    pub w: Vec<usize>,
    /// `(f(w(i)) - f(w(i+1)), w|[1,i])` for the nonzero differences.
    pub telescoping: Vec<(u32, IdealSet)>,
}

/// Whether `w` lies in `L(P)` and `f` is weakly decreasing along `w` with
/// strict drops at every descent.
pub fn is_compatible(p: &Poset, f: &[u32], w: &[usize]) -> bool {
    let mut prefix = IdealSet::EMPTY;
    for (pos, &x) in w.iter().enumerate() {
        if !p.strictly_below(x).is_subset(prefix) {
            return false;
        }
        prefix = prefix.with(x);
        if let Some(&y) = w.get(pos + 1) {
            let (fx, fy) = (f[x - 1], f[y - 1]);
            if fx < fy || (x > y && fx == fy) {
                return false;
            }
        }
    }
    prefix.len() == p.n()
}

pub fn fundamental_permutation(p: &Poset, f: &[u32]) -> Result<Fundamental> {
    require(p, f, Flavor::Standard)?;
    let mut w: Vec<usize> = p.elements().collect();
    w.sort_by(|&a, &b| f[b - 1].cmp(&f[a - 1]).then(a.cmp(&b)));
    assert!(
        is_compatible(p, f, &w),
        "sorted order {w:?} is not compatible with {f:?}"
    );
    let mut telescoping = Vec::new();
    let mut prefix = IdealSet::EMPTY;
    for (pos, &x) in w.iter().enumerate() {
        prefix = prefix.with(x);
        let next = w.get(pos + 1).map_or(0, |&y| f[y - 1]);
        let diff = f[x - 1] - next;
        if diff > 0 {
            telescoping.push((diff, prefix));
        }
    }
    Ok(Fundamental { w, telescoping })
}

/// Calls `visit` on every `f` of the given flavor with `|f| ≤ max_total`.
///
/// Values are assigned along a reversed linear extension, so each element
/// is chosen after everything above it; lower bounds are pushed down to the
/// unassigned elements and their total is kept within the budget. Visit
/// order is deterministic but not lexicographic.
pub fn for_each_partition<F: FnMut(&[u32])>(
    p: &Poset,
    flavor: Flavor,
    max_total: u64,
    mut visit: F,
) {
    let (_, order) = p.natural_relabel();
    // order[old - 1] = position; we want elements sorted by position, reversed
    let mut sequence: Vec<usize> = p.elements().collect();
    sequence.sort_by_key(|&x| std::cmp::Reverse(order[x - 1]));
    let lower = vec![0u32; p.n()];
    let mut values = vec![0u32; p.n()];
    assign(
        p,
        flavor,
        &sequence,
        0,
        max_total,
        0,
        lower,
        &mut values,
        &mut visit,
    );
}

#[allow(clippy::too_many_arguments)]
fn assign<F: FnMut(&[u32])>(
    p: &Poset,
    flavor: Flavor,
    sequence: &[usize],
    pos: usize,
    budget: u64,
    pending: u64,
    lower: Vec<u32>,
    values: &mut [u32],
    visit: &mut F,
) {
    let Some(&x) = sequence.get(pos) else {
        visit(values);
        return;
    };
    let lb = lower[x - 1];
    // `pending` includes lb; the rest of the pending bounds stay committed
    let others = pending - u64::from(lb);
    let below = p.strictly_below(x);
    let mut v = lb;
    loop {
        let mut next = lower.clone();
        let mut raised = 0u64;
        for k in below.labels() {
            let need = v + flavor.gap(k, x);
            if need > next[k - 1] {
                raised += u64::from(need - next[k - 1]);
                next[k - 1] = need;
            }
        }
        let spent = u64::from(v) + others + raised;
        if spent > budget {
            break;
        }
        values[x - 1] = v;
        assign(
            p,
            flavor,
            sequence,
            pos + 1,
            budget - u64::from(v),
            others + raised,
            next,
            values,
            visit,
        );
        v += 1;
    }
}

/// All `f` of the given flavor with `|f| ≤ max_total`, in lexicographic order.
pub fn enumerate_partitions(p: &Poset, flavor: Flavor, max_total: u64) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for_each_partition(p, flavor, max_total, |f| out.push(f.to_vec()));
    out.sort();
    out
}

/// The δ function and the labelled-δ-chain condition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaData {
    pub delta: Vec<u32>,
    pub satisfies_labelled_condition: bool,
    pub maj_p: Option<u32>,
    /// A cover `i ⋖ j` along which the recursion is a strict inequality.
    pub failing_cover: Option<(usize, usize)>,
}

impl DeltaData {
    /// The standard P-partition from the principality argument whose
    /// difference with δ is not weak; only when the condition fails.
    pub fn counterexample(&self, p: &Poset) -> Option<Vec<u32>> {
        let (i, j) = self.failing_cover?;
        let above_i = p.principal_filter(i);
        Some(
            p.elements()
                .map(|k| {
                    let d = self.delta[k - 1];
                    if above_i.contains(k) && k != j {
                        d
                    } else {
                        d + 1
                    }
                })
                .collect(),
        )
    }
}

/// Elements ordered so that every element follows everything above it.
fn top_down(p: &Poset) -> Vec<usize> {
    let mut seq: Vec<usize> = p.elements().collect();
    seq.sort_by_key(|&x| std::cmp::Reverse(p.principal_ideal(x).map_or(0, |s| s.len())));
    // principal ideal sizes strictly grow along `<`, so this is a valid order
    seq
}

pub fn delta_data(p: &Poset) -> DeltaData {
    let mut delta = vec![0u32; p.n()];
    for x in top_down(p) {
        delta[x - 1] = p
            .upper_covers(x)
            .labels()
            .map(|j| delta[j - 1] + u32::from(x > j))
            .max()
            .unwrap_or(0);
    }
    let failing_cover = p
        .cover_relations()
        .into_iter()
        .find(|&(i, j)| delta[i - 1] != delta[j - 1] + u32::from(i > j));
    let ok = failing_cover.is_none();
    DeltaData {
        maj_p: ok.then(|| delta.iter().sum()),
        delta,
        satisfies_labelled_condition: ok,
        failing_cover,
    }
}

/// Whether, for every `i`, all maximal chains of `P_{≥i}` have equal length.
pub fn stanley_delta_chain(p: &Poset) -> bool {
    let mut longest = vec![0u32; p.n()];
    let mut shortest = vec![0u32; p.n()];
    for x in top_down(p) {
        let ups = p.upper_covers(x);
        longest[x - 1] = ups.labels().map(|j| longest[j - 1] + 1).max().unwrap_or(0);
        shortest[x - 1] = ups.labels().map(|j| shortest[j - 1] + 1).min().unwrap_or(0);
    }
    longest == shortest
}
