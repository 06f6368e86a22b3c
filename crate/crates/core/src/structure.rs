//! Complete-intersection posets: the constructive classification as forests
//! with duplications, the nearly-principal ideal test, the count test and
//! the forbidden-subposet scan.

use std::cmp::Ordering;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fixtures;
use crate::poset::{IdealSet, Poset};

/// How a forest with duplications is assembled from singletons.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum Recipe {
    Single {
        element: usize,
    },
    Union {
        parts: Vec<Recipe>,
    },
    /// Hang `lower` below `target`, an element of `upper`.
    Hang {
        target: usize,
        upper: Box<Recipe>,
        lower: Box<Recipe>,
    },
    /// Duplicate the hanger `hanger` of `base`, the copy being `duplicate`.
    Duplicate {
        hanger: usize,
        duplicate: usize,
        base: Box<Recipe>,
    },
}

/// A poset fragment on a subset of the labels `1..=n`.
struct Built {
    elements: IdealSet,
    below: Vec<u64>,
}

impl Recipe {
    /// Every duplication pair, each as `(min, max)`, sorted.
    pub fn duplication_set(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        self.collect_duplications(&mut out);
        out.sort();
        out
    }

    fn collect_duplications(&self, out: &mut Vec<(usize, usize)>) {
        match self {
            Recipe::Single { .. } => {}
            Recipe::Union { parts } => parts.iter().for_each(|r| r.collect_duplications(out)),
            Recipe::Hang { upper, lower, .. } => {
                upper.collect_duplications(out);
                lower.collect_duplications(out);
            }
            Recipe::Duplicate {
                hanger,
                duplicate,
                base,
            } => {
                out.push(((*hanger).min(*duplicate), (*hanger).max(*duplicate)));
                base.collect_duplications(out);
            }
        }
    }

    /// Rebuilds the poset on `1..=n`. Fails if an operation is invalid,
    /// for instance duplicating an element that is not a hanger.
    pub fn replay(&self, n: usize) -> Result<Poset> {
        let built = self.build(n)?;
        if built.elements != IdealSet::full(n) {
            return Err(Error::Arg("recipe does not cover every element".into()));
        }
        let mut rels = Vec::new();
        for (i, &b) in built.below.iter().enumerate() {
            for j in IdealSet::from_bits(b).labels() {
                rels.push((j, i + 1));
            }
        }
        Poset::new(n, &rels)
    }

    fn build(&self, n: usize) -> Result<Built> {
        let invalid = |msg: String| Err(Error::Arg(msg));
        match self {
            Recipe::Single { element } => {
                if *element == 0 || *element > n {
                    return invalid(format!("element {element} outside 1..={n}"));
                }
                Ok(Built {
                    elements: IdealSet::singleton(*element),
                    below: vec![0; n],
                })
            }
            Recipe::Union { parts } => {
                let mut acc = Built {
                    elements: IdealSet::EMPTY,
                    below: vec![0; n],
                };
                for part in parts {
                    let b = part.build(n)?;
                    if b.elements.intersects(acc.elements) {
                        return invalid("union of overlapping pieces".into());
                    }
                    acc.elements = acc.elements.union(b.elements);
                    for (x, y) in acc.below.iter_mut().zip(&b.below) {
                        *x |= y;
                    }
                }
                Ok(acc)
            }
            Recipe::Hang {
                target,
                upper,
                lower,
            } => {
                let mut up = upper.build(n)?;
                let low = lower.build(n)?;
                if !up.elements.contains(*target) || up.elements.intersects(low.elements) {
                    return invalid(format!("cannot hang below {target}"));
                }
                let above_target: Vec<usize> = up
                    .elements
                    .labels()
                    .filter(|&b| b == *target || up.below[b - 1] & (1 << (target - 1)) != 0)
                    .collect();
                for (x, y) in up.below.iter_mut().zip(&low.below) {
                    *x |= y;
                }
                for b in above_target {
                    up.below[b - 1] |= low.elements.bits();
                }
                up.elements = up.elements.union(low.elements);
                Ok(up)
            }
            Recipe::Duplicate {
                hanger,
                duplicate,
                base,
            } => {
                let mut b = base.build(n)?;
                let a = *hanger;
                let d = *duplicate;
                if !b.elements.contains(a) || d == 0 || d > n || b.elements.contains(d) {
                    return invalid(format!("cannot duplicate {a} as {d}"));
                }
                if !is_hanger(&b, a) {
                    return invalid(format!("{a} is not a hanger"));
                }
                let abit = 1u64 << (a - 1);
                b.below[d - 1] = b.below[a - 1];
                for x in b.elements.labels() {
                    if b.below[x - 1] & abit != 0 {
                        b.below[x - 1] |= 1 << (d - 1);
                    }
                }
                b.elements = b.elements.with(d);
                Ok(b)
            }
        }
    }
}

/// `a` is a hanger when `P_{<a}` is nonempty and its elements lie below
/// exactly the elements above `a` outside `P_{≤a}`.
fn is_hanger(b: &Built, a: usize) -> bool {
    let low = IdealSet::from_bits(b.below[a - 1]);
    if low.is_empty() {
        return false;
    }
    let abit = 1u64 << (a - 1);
    b.elements.difference(low.with(a)).labels().all(|x| {
        let above_a = b.below[x - 1] & abit != 0;
        let sees = b.below[x - 1] & low.bits();
        if above_a {
            sees == low.bits()
        } else {
            sees == 0
        }
    })
}

/// The three minimal posets that are not complete intersections.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Forbidden {
    #[serde(rename = "FORB1")]
    Forb1,
    #[serde(rename = "FORB2")]
    Forb2,
    #[serde(rename = "FORB3")]
    Forb3,
}

impl Forbidden {
    pub const ALL: [Forbidden; 3] = [Forbidden::Forb1, Forbidden::Forb2, Forbidden::Forb3];

    pub fn poset(self) -> Poset {
        match self {
            Forbidden::Forb1 => fixtures::forb1(),
            Forbidden::Forb2 => fixtures::forb2(),
            Forbidden::Forb3 => fixtures::forb3(),
        }
    }
}

/// A certificate that a poset is not a complete intersection.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum Witness {
    /// A connected ideal that is neither principal nor nearly principal,
    /// with two distinct ways of writing it as the union of a pair in `Π(P)`.
    BadIdeal {
        ideal: IdealSet,
        decompositions: [(IdealSet, IdealSet); 2],
    },
    ForbiddenSubposet {
        which: Forbidden,
        /// `embedding[i - 1]` is the image of element `i` of the pattern.
        embedding: Vec<usize>,
    },
}

impl Witness {
    /// Checks the certificate against `p` from scratch.
    pub fn verify(&self, p: &Poset) -> bool {
        match self {
            Witness::BadIdeal {
                ideal,
                decompositions,
            } => {
                let valid_pair = |(a, b): (IdealSet, IdealSet)| {
                    p.is_ideal(a)
                        && p.is_ideal(b)
                        && p.is_connected_set(a)
                        && p.is_connected_set(b)
                        && !a.intersects_trivially(b)
                        && a.union(b) == *ideal
                };
                let norm = |(a, b): (IdealSet, IdealSet)| if a <= b { (a, b) } else { (b, a) };
                p.is_ideal(*ideal)
                    && p.is_connected_set(*ideal)
                    && decompositions.iter().all(|&d| valid_pair(d))
                    && norm(decompositions[0]) != norm(decompositions[1])
            }
            Witness::ForbiddenSubposet { which, embedding } => {
                let q = which.poset();
                embedding.len() == q.n()
                    && embedding.iter().all(|&x| x >= 1 && x <= p.n())
                    && IdealSet::from_labels(embedding.iter().copied()).len() == q.n()
                    && q.elements().all(|i| {
                        q.elements()
                            .all(|j| q.leq(i, j) == p.leq(embedding[i - 1], embedding[j - 1]))
                    })
            }
        }
    }
}

/// Result of [`classify`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Classification {
    Recipe {
        recipe: Recipe,
        duplication_set: Vec<(usize, usize)>,
    },
    Witness {
        witness: Witness,
    },
}

impl Classification {
    pub fn is_ci(&self) -> bool {
        matches!(self, Classification::Recipe { .. })
    }

    pub fn recipe(&self) -> Option<&Recipe> {
        match self {
            Classification::Recipe { recipe, .. } => Some(recipe),
            Classification::Witness { .. } => None,
        }
    }

    pub fn duplication_set(&self) -> Option<&[(usize, usize)]> {
        match self {
            Classification::Recipe {
                duplication_set, ..
            } => Some(duplication_set),
            Classification::Witness { .. } => None,
        }
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Classification::Witness { witness } => Some(witness),
            Classification::Recipe { .. } => None,
        }
    }
}

/// How the free choices in the decomposition are made.
enum Chooser {
    Smallest,
    Random(Box<ChaCha8Rng>),
}

impl Chooser {
    fn pick(&mut self, candidates: IdealSet) -> Option<usize> {
        match self {
            Chooser::Smallest => candidates.min_label(),
            Chooser::Random(rng) => {
                let v: Vec<usize> = candidates.labels().collect();
                v.choose(rng).copied()
            }
        }
    }
}

fn decompose(p: &Poset, s: IdealSet, chooser: &mut Chooser) -> Recipe {
    if s.len() == 1 {
        return Recipe::Single {
            element: s.min_label().expect("nonempty"),
        };
    }
    let comps = p.comparability_components(s);
    if comps.len() > 1 {
        return Recipe::Union {
            parts: comps
                .into_iter()
                .map(|c| decompose(p, c, chooser))
                .collect(),
        };
    }
    let below_in = |x: usize| p.strictly_below(x).intersection(s);
    let non_minimal = s.difference(p.minimal_in(s));
    let a = chooser
        .pick(non_minimal)
        .expect("a connected piece has a non-minimal element");
    let low_a = below_in(a);
    let partners = IdealSet::from_labels(
        s.labels()
            .filter(|&x| x != a && !p.comparable(a, x) && below_in(x).intersects(low_a)),
    );
    let Some(a2) = chooser.pick(partners) else {
        return Recipe::Hang {
            target: a,
            upper: Box::new(decompose(p, s.difference(low_a), chooser)),
            lower: Box::new(decompose(p, low_a, chooser)),
        };
    };
    let low_a2 = below_in(a2);
    let hat = s.difference(low_a.union(low_a2));
    let shared = low_a.intersection(low_a2);
    let only_a = low_a.difference(low_a2);
    let only_a2 = low_a2.difference(low_a);
    let mut r = Recipe::Hang {
        target: a,
        upper: Box::new(decompose(p, hat.without(a2), chooser)),
        lower: Box::new(decompose(p, shared, chooser)),
    };
    r = Recipe::Duplicate {
        hanger: a,
        duplicate: a2,
        base: Box::new(r),
    };
    for (target, piece) in [(a, only_a), (a2, only_a2)] {
        if !piece.is_empty() {
            r = Recipe::Hang {
                target,
                upper: Box::new(r),
                lower: Box::new(decompose(p, piece, chooser)),
            };
        }
    }
    r
}

fn classify_with(p: &Poset, mut chooser: Chooser) -> Classification {
    let recipe = decompose(p, p.full(), &mut chooser);
    if recipe.replay(p.n()).is_ok_and(|q| q == *p) {
        let duplication_set = recipe.duplication_set();
        return Classification::Recipe {
            recipe,
            duplication_set,
        };
    }
    if let Some(witness) = bad_ideal_witness(p) {
        return Classification::Witness { witness };
    }
    if let Some((which, embedding)) = forbidden_scan(p) {
        return Classification::Witness {
            witness: Witness::ForbiddenSubposet { which, embedding },
        };
    }
    panic!("decomposition of {p:?} failed without any obstruction");
}

/// Decomposes `p` as a forest with duplications, or certifies that it is
/// not one. Choices are made by smallest label.
pub fn classify(p: &Poset) -> Classification {
    classify_with(p, Chooser::Smallest)
}

/// [`classify`] with the hanger and partner choices drawn at random.
pub fn classify_seeded(p: &Poset, seed: u64) -> Classification {
    classify_with(
        p,
        Chooser::Random(Box::new(ChaCha8Rng::seed_from_u64(seed))),
    )
}

/// Pairs in `Π(P)` whose union is `j`, normalised with `j1 < j2`.
pub fn fiber(p: &Poset, j: IdealSet) -> Vec<(IdealSet, IdealSet)> {
    p.nontrivial_pairs()
        .into_iter()
        .filter(|pp| pp.union == j)
        .map(|pp| (pp.j1, pp.j2))
        .collect()
}

fn bad_ideal_witness(p: &Poset) -> Option<Witness> {
    let pairs = p.nontrivial_pairs();
    let conn = p.connected_ideals();
    conn.into_iter().find_map(|j| {
        let fib: Vec<(IdealSet, IdealSet)> = pairs
            .iter()
            .filter(|pp| pp.union == j)
            .map(|pp| (pp.j1, pp.j2))
            .collect();
        (fib.len() >= 2).then(|| Witness::BadIdeal {
            ideal: j,
            decompositions: [fib[0], fib[1]],
        })
    })
}

fn is_principal(p: &Poset, j: IdealSet) -> bool {
    p.maximal_in(j).len() == 1
}

/// The two-condition test for a connected nonprincipal ideal.
pub fn nearly_principal(p: &Poset, j: IdealSet) -> Result<bool> {
    if !p.is_ideal(j) || !p.is_connected_set(j) || is_principal(p, j) {
        return Err(Error::Arg(format!(
            "{j} is not a connected nonprincipal order ideal"
        )));
    }
    let maxes: Vec<usize> = p.maximal_in(j).labels().collect();
    if maxes.len() != 2 {
        return Ok(false);
    }
    let (j1, j2) = (maxes[0], maxes[1]);
    let common = p.strictly_below(j1).intersection(p.strictly_below(j2));
    Ok(common
        .labels()
        .all(|l| p.open_interval(l, j1) == p.open_interval(l, j2)))
}

/// The definitional test: exactly one pair of `Π(P)` has union `j`.
pub fn nearly_principal_by_fiber(p: &Poset, j: IdealSet) -> Result<bool> {
    if !p.is_ideal(j) || !p.is_connected_set(j) || is_principal(p, j) {
        return Err(Error::Arg(format!(
            "{j} is not a connected nonprincipal order ideal"
        )));
    }
    Ok(fiber(p, j).len() == 1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdealTest {
    pub passed: bool,
    /// First connected ideal failing the test, in canonical order.
    pub offending: Option<IdealSet>,
}

/// Whether every connected ideal is principal or nearly principal.
pub fn ci_test_ideals(p: &Poset) -> IdealTest {
    let offending = p
        .connected_ideals()
        .into_iter()
        .find(|&j| !is_principal(p, j) && !nearly_principal(p, j).expect("connected nonprincipal"));
    IdealTest {
        passed: offending.is_none(),
        offending,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountTest {
    pub n: usize,
    pub connected_ideals: usize,
    pub pairs: usize,
    /// `|J_conn| - |Π|`, which never exceeds `n`.
    pub difference: i64,
    /// Sign of `|J_conn| - |Π| - n`.
    #[serde(serialize_with = "ser_ordering")]
    pub side: Ordering,
    pub passed: bool,
}

fn ser_ordering<S: serde::Serializer>(o: &Ordering, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(match o {
        Ordering::Less => "less",
        Ordering::Equal => "equal",
        Ordering::Greater => "greater",
    })
}

/// Whether `|J_conn(P)| - |Π(P)| = n`.
pub fn ci_test_counts(p: &Poset) -> CountTest {
    let conn = p.connected_ideals();
    let pairs = p.pairs_among(&conn).len();
    let difference = conn.len() as i64 - pairs as i64;
    let side = difference.cmp(&(p.n() as i64));
    CountTest {
        n: p.n(),
        connected_ideals: conn.len(),
        pairs,
        difference,
        side,
        passed: side == Ordering::Equal,
    }
}

/// First induced copy of FORB1, FORB2 or FORB3, tried in that order.
pub fn forbidden_scan(p: &Poset) -> Option<(Forbidden, Vec<usize>)> {
    Forbidden::ALL
        .into_iter()
        .find_map(|f| p.first_occurrence(&f.poset()).map(|e| (f, e)))
}

/// Every distinct induced copy of each forbidden poset.
pub fn forbidden_occurrences(p: &Poset) -> Vec<(Forbidden, Vec<usize>)> {
    Forbidden::ALL
        .into_iter()
        .flat_map(|f| {
            p.distinct_occurrences(&f.poset())
                .into_iter()
                .map(move |e| (f, e))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DuplicationReport {
    pub predicted_connected_ideals: Vec<IdealSet>,
    pub predicted_pairs: Vec<(IdealSet, IdealSet)>,
    pub missing_ideals: Vec<IdealSet>,
    pub extra_ideals: Vec<IdealSet>,
    pub missing_pairs: Vec<(IdealSet, IdealSet)>,
    pub extra_pairs: Vec<(IdealSet, IdealSet)>,
    pub duplication_pairs_disjoint: bool,
    pub matches: bool,
}

/// Predicts `J_conn` and `Π` from the duplication set alone and compares
/// with direct enumeration.
pub fn duplication_predictions(p: &Poset, recipe: &Recipe) -> DuplicationReport {
    let dups = recipe.duplication_set();
    let principal = |x: usize| p.strictly_below(x).with(x);
    let mut predicted_connected_ideals: Vec<IdealSet> = p.elements().map(principal).collect();
    let mut predicted_pairs = Vec::new();
    for &(a, b) in &dups {
        predicted_connected_ideals.push(principal(a).union(principal(b)));
        let (x, y) = (principal(a), principal(b));
        predicted_pairs.push(if x <= y { (x, y) } else { (y, x) });
    }
    predicted_connected_ideals.sort();
    predicted_connected_ideals.dedup();
    predicted_pairs.sort();

    let actual_ideals = p.connected_ideals();
    let actual_pairs: Vec<(IdealSet, IdealSet)> = p
        .pairs_among(&actual_ideals)
        .into_iter()
        .map(|pp| (pp.j1, pp.j2))
        .collect();
    let diff = |a: &[IdealSet], b: &[IdealSet]| -> Vec<IdealSet> {
        a.iter().filter(|x| !b.contains(x)).copied().collect()
    };
    let diff_pairs = |a: &[(IdealSet, IdealSet)], b: &[(IdealSet, IdealSet)]| {
        a.iter()
            .filter(|x| !b.contains(x))
            .copied()
            .collect::<Vec<_>>()
    };
    let missing_ideals = diff(&actual_ideals, &predicted_connected_ideals);
    let extra_ideals = diff(&predicted_connected_ideals, &actual_ideals);
    let missing_pairs = diff_pairs(&actual_pairs, &predicted_pairs);
    let extra_pairs = diff_pairs(&predicted_pairs, &actual_pairs);
    let used: Vec<usize> = dups.iter().flat_map(|&(a, b)| [a, b]).collect();
    let duplication_pairs_disjoint =
        IdealSet::from_labels(used.iter().copied()).len() == used.len();
    let matches = missing_ideals.is_empty()
        && extra_ideals.is_empty()
        && missing_pairs.is_empty()
        && extra_pairs.is_empty()
        && predicted_connected_ideals.len() == p.n() + dups.len();
    DuplicationReport {
        predicted_connected_ideals,
        predicted_pairs,
        missing_ideals,
        extra_ideals,
        missing_pairs,
        extra_pairs,
        duplication_pairs_disjoint,
        matches,
    }
}
