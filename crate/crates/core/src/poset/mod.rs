//! Finite posets on `{1..n}` and their order-ideal machinery.
//!
//! A [`Poset`] keeps, for every element, the bitmask of elements strictly
//! below and strictly above it together with its lower and upper covers.
//! Everything else (order ideals, connected ideals, the nontrivially
//! intersecting pairs) is derived from those four tables.

mod ideal;
mod parse;

use std::collections::{HashSet, VecDeque};
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};

pub use ideal::{IdealSet, Labels};
pub use parse::parse_poset;

/// Largest supported element count; subsets are single machine words.
pub const MAX_ELEMENTS: usize = 64;

/// A partial order on `{1..n}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poset {
    n: usize,
    // index i describes label i + 1
    below: Vec<u64>,
    above: Vec<u64>,
    lower_covers: Vec<u64>,
    upper_covers: Vec<u64>,
}

/// A pair of connected order ideals that intersect nontrivially.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PiPair {
    pub j1: IdealSet,
    pub j2: IdealSet,
    pub union: IdealSet,
    pub intersection_components: Vec<IdealSet>,
}

impl PiPair {
    pub fn intersection(&self) -> IdealSet {
        self.j1.intersection(self.j2)
    }

    pub fn intersection_connected(&self) -> bool {
        self.intersection_components.len() == 1
    }
}

fn bit(label: usize) -> u64 {
    1u64 << (label - 1)
}

impl Poset {
    /// Builds the poset generated by `relations`, each `(a, b)` meaning `a < b`.
    ///
    /// Relations need not be covers; the transitive closure and reduction are
    /// computed here.
    pub fn new(n: usize, relations: &[(usize, usize)]) -> Result<Poset> {
        if n == 0 || n > MAX_ELEMENTS {
            return Err(Error::Range(format!(
                "element count {n} outside 1..={MAX_ELEMENTS}"
            )));
        }
        let mut below = vec![0u64; n];
        for &(a, b) in relations {
            for l in [a, b] {
                if l == 0 || l > n {
                    return Err(Error::Range(format!("label {l} outside 1..={n}")));
                }
            }
            if a == b {
                return Err(Error::Cycle(a));
            }
            below[b - 1] |= bit(a);
        }
        // Warshall over bitmasks.
        for k in 0..n {
            let kb = 1u64 << k;
            let below_k = below[k];
            for row in below.iter_mut() {
                if *row & kb != 0 {
                    *row |= below_k;
                }
            }
        }
        if let Some(i) = (0..n).find(|&i| below[i] & (1 << i) != 0) {
            return Err(Error::Cycle(i + 1));
        }
        Ok(Self::from_closed(n, below))
    }

    /// `below` must already be the strict, transitively closed down-sets.
    fn from_closed(n: usize, below: Vec<u64>) -> Poset {
        let mut above = vec![0u64; n];
        for (i, &b) in below.iter().enumerate() {
            for j in IdealSet::from_bits(b).labels() {
                above[j - 1] |= 1 << i;
            }
        }
        let mut lower_covers = vec![0u64; n];
        let mut upper_covers = vec![0u64; n];
        for i in 0..n {
            let mut indirect = 0u64;
            for k in IdealSet::from_bits(below[i]).labels() {
                indirect |= below[k - 1];
            }
            lower_covers[i] = below[i] & !indirect;
            for j in IdealSet::from_bits(lower_covers[i]).labels() {
                upper_covers[j - 1] |= 1 << i;
            }
        }
        Poset {
            n,
            below,
            above,
            lower_covers,
            upper_covers,
        }
    }

    pub fn antichain(n: usize) -> Result<Poset> {
        Poset::new(n, &[])
    }

    /// The chain `order[0] < order[1] < ...`.
    pub fn chain(order: &[usize]) -> Result<Poset> {
        let rels: Vec<(usize, usize)> = order.windows(2).map(|w| (w[0], w[1])).collect();
        Poset::new(order.len(), &rels)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn elements(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.n
    }

    /// Every element.
    pub fn full(&self) -> IdealSet {
        IdealSet::full(self.n)
    }

    pub fn less(&self, a: usize, b: usize) -> bool {
        self.below[b - 1] & bit(a) != 0
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        a == b || self.less(a, b)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.leq(a, b) || self.leq(b, a)
    }

    /// Whether `b` covers `a`.
    pub fn covers(&self, a: usize, b: usize) -> bool {
        self.lower_covers[b - 1] & bit(a) != 0
    }

    /// All cover relations `(a, b)` with `a ⋖ b`, sorted.
    pub fn cover_relations(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in self.elements() {
            for b in self.upper_covers(a).labels() {
                out.push((a, b));
            }
        }
        out
    }

    pub fn strictly_below(&self, p: usize) -> IdealSet {
        IdealSet::from_bits(self.below[p - 1])
    }

    pub fn strictly_above(&self, p: usize) -> IdealSet {
        IdealSet::from_bits(self.above[p - 1])
    }

    pub fn lower_covers(&self, p: usize) -> IdealSet {
        IdealSet::from_bits(self.lower_covers[p - 1])
    }

    pub fn upper_covers(&self, p: usize) -> IdealSet {
        IdealSet::from_bits(self.upper_covers[p - 1])
    }

    /// `P_{≤p}`.
    pub fn principal_ideal(&self, p: usize) -> Result<IdealSet> {
        if p == 0 || p > self.n {
            return Err(Error::Range(format!("element {p} outside 1..={}", self.n)));
        }
        Ok(self.strictly_below(p).with(p))
    }

    /// `P_{≥p}`.
    pub fn principal_filter(&self, p: usize) -> IdealSet {
        self.strictly_above(p).with(p)
    }

    /// Open interval `]l, u[`.
    pub fn open_interval(&self, l: usize, u: usize) -> IdealSet {
        self.strictly_above(l).intersection(self.strictly_below(u))
    }

    /// Smallest order ideal containing `s`.
    pub fn down_closure(&self, s: IdealSet) -> IdealSet {
        s.labels()
            .fold(s, |acc, p| acc.union(self.strictly_below(p)))
    }

    pub fn up_closure(&self, s: IdealSet) -> IdealSet {
        s.labels()
            .fold(s, |acc, p| acc.union(self.strictly_above(p)))
    }

    pub fn is_ideal(&self, s: IdealSet) -> bool {
        s.labels().all(|p| self.strictly_below(p).is_subset(s))
    }

    pub fn maximal_in(&self, s: IdealSet) -> IdealSet {
        IdealSet::from_labels(
            s.labels()
                .filter(|&p| !self.strictly_above(p).intersects(s)),
        )
    }

    pub fn minimal_in(&self, s: IdealSet) -> IdealSet {
        IdealSet::from_labels(
            s.labels()
                .filter(|&p| !self.strictly_below(p).intersects(s)),
        )
    }

    pub fn minimal_elements(&self) -> IdealSet {
        self.minimal_in(self.full())
    }

    pub fn maximal_elements(&self) -> IdealSet {
        self.maximal_in(self.full())
    }

    fn hasse_neighbours(&self, p: usize) -> u64 {
        self.lower_covers[p - 1] | self.upper_covers[p - 1]
    }

    /// Connected components of the cover graph restricted to `s`, in
    /// increasing order of their smallest element.
    pub fn hasse_components(&self, s: IdealSet) -> Vec<IdealSet> {
        let mut rest = s.bits();
        let mut out = Vec::new();
        while rest != 0 {
            let start = rest & rest.wrapping_neg();
            let mut comp = start;
            let mut frontier = start;
            while frontier != 0 {
                let mut next = 0u64;
                for p in IdealSet::from_bits(frontier).labels() {
                    next |= self.hasse_neighbours(p);
                }
                next &= s.bits() & !comp;
                comp |= next;
                frontier = next;
            }
            rest &= !comp;
            out.push(IdealSet::from_bits(comp));
        }
        out
    }

    /// Components of the comparability graph restricted to `s`, i.e. the
    /// connected components of the induced subposet on `s`. These agree
    /// with [`Poset::hasse_components`] whenever `s` is an order ideal.
    pub fn comparability_components(&self, s: IdealSet) -> Vec<IdealSet> {
        let mut rest = s.bits();
        let mut out = Vec::new();
        while rest != 0 {
            let start = rest & rest.wrapping_neg();
            let mut comp = start;
            let mut frontier = start;
            while frontier != 0 {
                let mut next = 0u64;
                for p in IdealSet::from_bits(frontier).labels() {
                    next |= self.below[p - 1] | self.above[p - 1];
                }
                next &= s.bits() & !comp;
                comp |= next;
                frontier = next;
            }
            rest &= !comp;
            out.push(IdealSet::from_bits(comp));
        }
        out
    }

    /// `c_P(s)`: number of Hasse components of `s`.
    pub fn component_count(&self, s: IdealSet) -> usize {
        self.hasse_components(s).len()
    }

    pub fn is_connected_set(&self, s: IdealSet) -> bool {
        !s.is_empty() && self.component_count(s) == 1
    }

    pub fn is_connected(&self) -> bool {
        self.is_connected_set(self.full())
    }

    /// All order ideals, including the empty one, in canonical order.
    ///
    /// Breadth-first over the ideal lattice from `∅`, adding one minimal
    /// element of the complement at a time.
    pub fn ideals(&self) -> Vec<IdealSet> {
        let mut seen: HashSet<u64> = HashSet::new();
        let mut layer = vec![0u64];
        seen.insert(0);
        let mut out = vec![IdealSet::EMPTY];
        while !layer.is_empty() {
            let mut next = Vec::new();
            for &ideal in &layer {
                for p in IdealSet::from_bits(!ideal & self.full().bits()).labels() {
                    if self.below[p - 1] & !ideal == 0 {
                        let bigger = ideal | bit(p);
                        if seen.insert(bigger) {
                            next.push(bigger);
                            out.push(IdealSet::from_bits(bigger));
                        }
                    }
                }
            }
            layer = next;
        }
        out.sort();
        out
    }

    /// `J_conn(P)`: nonempty connected order ideals, in canonical order.
    ///
    /// Every connected ideal is reached from a principal ideal by repeatedly
    /// adjoining a principal ideal that meets it.
    pub fn connected_ideals(&self) -> Vec<IdealSet> {
        let principals: Vec<u64> = self
            .elements()
            .map(|p| self.below[p - 1] | bit(p))
            .collect();
        let mut seen: HashSet<u64> = HashSet::new();
        let mut queue: VecDeque<u64> = VecDeque::new();
        for &j in &principals {
            if seen.insert(j) {
                queue.push_back(j);
            }
        }
        while let Some(j) = queue.pop_front() {
            for (i, &pj) in principals.iter().enumerate() {
                if j & (1 << i) == 0 && pj & j != 0 {
                    let bigger = j | pj;
                    if seen.insert(bigger) {
                        queue.push_back(bigger);
                    }
                }
            }
        }
        let mut out: Vec<IdealSet> = seen.into_iter().map(IdealSet::from_bits).collect();
        out.sort();
        out
    }

    /// `Π(P)`: unordered pairs of connected ideals that are neither disjoint
    /// nor nested. `j1 < j2` in canonical order; pairs sorted by `(j1, j2)`.
    pub fn nontrivial_pairs(&self) -> Vec<PiPair> {
        self.pairs_among(&self.connected_ideals())
    }

    /// [`Poset::nontrivial_pairs`] when the connected ideals are already at hand.
    pub fn pairs_among(&self, conn: &[IdealSet]) -> Vec<PiPair> {
        let mut out = Vec::new();
        for (i, &a) in conn.iter().enumerate() {
            for &b in &conn[i + 1..] {
                if !a.intersects_trivially(b) {
                    out.push(PiPair {
                        j1: a,
                        j2: b,
                        union: a.union(b),
                        intersection_components: self.hasse_components(a.intersection(b)),
                    });
                }
            }
        }
        out
    }

    /// `i <_P j` implies `i < j` as integers.
    pub fn is_naturally_labelled(&self) -> bool {
        self.cover_relations().iter().all(|&(a, b)| a < b)
    }

    /// `i <_P j` implies `i > j` as integers.
    pub fn is_strictly_labelled(&self) -> bool {
        self.cover_relations().iter().all(|&(a, b)| a > b)
    }

    pub fn is_antichain(&self) -> bool {
        self.below.iter().all(|&b| b == 0)
    }

    /// Unique minimal element, if there is one.
    pub fn minimum(&self) -> Option<usize> {
        let mins = self.minimal_elements();
        if mins.len() == 1 {
            mins.min_label()
        } else {
            None
        }
    }

    /// The isomorphic poset obtained by sending `p` to `perm[p - 1]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Poset> {
        if perm.len() != self.n {
            return Err(Error::Arg(format!(
                "permutation has length {} for {} elements",
                perm.len(),
                self.n
            )));
        }
        let mut check = vec![false; self.n];
        for &v in perm {
            if v == 0 || v > self.n || std::mem::replace(&mut check[v - 1], true) {
                return Err(Error::Arg("relabelling is not a permutation".into()));
            }
        }
        let rels: Vec<(usize, usize)> = self
            .cover_relations()
            .into_iter()
            .map(|(a, b)| (perm[a - 1], perm[b - 1]))
            .collect();
        Poset::new(self.n, &rels)
    }

    /// Relabels along the lexicographically first linear extension, so that
    /// its `i`-th element becomes `i`. Returns the new poset and the
    /// permutation `perm[old - 1] = new`.
    pub fn natural_relabel(&self) -> (Poset, Vec<usize>) {
        let mut placed = 0u64;
        let mut perm = vec![0usize; self.n];
        for pos in 1..=self.n {
            let next = self
                .elements()
                .find(|&p| placed & bit(p) == 0 && self.below[p - 1] & !placed == 0)
                .expect("a finite poset always has a minimal unplaced element");
            placed |= bit(next);
            perm[next - 1] = pos;
        }
        let relabelled = self
            .relabel(&perm)
            .expect("a linear extension yields a valid permutation");
        (relabelled, perm)
    }

    /// The subposet induced on `s`, relabelled `1..|s|` in increasing label
    /// order, together with the original labels.
    pub fn induced(&self, s: IdealSet) -> (Poset, Vec<usize>) {
        let labels: Vec<usize> = s.labels().collect();
        let mut below = vec![0u64; labels.len()];
        for (i, &p) in labels.iter().enumerate() {
            for (j, &q) in labels.iter().enumerate() {
                if self.less(q, p) {
                    below[i] |= 1 << j;
                }
            }
        }
        (Poset::from_closed(labels.len(), below), labels)
    }

    /// Every injection `q → self` that is an order embedding, as the vector
    /// of images indexed by `q`'s labels.
    pub fn induced_occurrences(&self, q: &Poset) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        if q.n <= self.n {
            let mut image = Vec::with_capacity(q.n);
            self.embed_rec(q, &mut image, 0, &mut |img| {
                out.push(img.to_vec());
                true
            });
        }
        out
    }

    /// First order embedding of `q`, if any.
    pub fn first_occurrence(&self, q: &Poset) -> Option<Vec<usize>> {
        let mut found = None;
        if q.n <= self.n {
            let mut image = Vec::with_capacity(q.n);
            self.embed_rec(q, &mut image, 0, &mut |img| {
                found = Some(img.to_vec());
                false
            });
        }
        found
    }

    /// Occurrences up to automorphisms of `q`: one embedding per image set.
    pub fn distinct_occurrences(&self, q: &Poset) -> Vec<Vec<usize>> {
        let mut seen = HashSet::new();
        self.induced_occurrences(q)
            .into_iter()
            .filter(|img| seen.insert(IdealSet::from_labels(img.iter().copied())))
            .collect()
    }

    // Returns false once the visitor asks to stop.
    fn embed_rec(
        &self,
        q: &Poset,
        image: &mut Vec<usize>,
        used: u64,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        let k = image.len();
        if k == q.n {
            return visit(image);
        }
        let qk = k + 1;
        for cand in self.elements() {
            if used & bit(cand) != 0 {
                continue;
            }
            let consistent = image.iter().enumerate().all(|(i, &img)| {
                let qi = i + 1;
                q.less(qi, qk) == self.less(img, cand) && q.less(qk, qi) == self.less(cand, img)
            });
            if consistent {
                image.push(cand);
                let go_on = self.embed_rec(q, image, used | bit(cand), visit);
                image.pop();
                if !go_on {
                    return false;
                }
            }
        }
        true
    }
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Poset(n={}, covers={:?})",
            self.n,
            self.cover_relations()
        )
    }
}

/// Writes the poset file format: `n <int>` then one cover per line.
impl fmt::Display for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n {}", self.n)?;
        for (a, b) in self.cover_relations() {
            writeln!(f, "{a} {b}")?;
        }
        Ok(())
    }
}

impl Serialize for Poset {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("Poset", 2)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("covers", &self.cover_relations())?;
        st.end()
    }
}

/// Every labelled poset on `{1..n}` exactly once, for `1 ≤ n ≤ 5`.
pub fn enumerate_posets(n: usize) -> Result<impl Iterator<Item = Poset>> {
    if n == 0 || n > 5 {
        return Err(Error::Range(format!(
            "exhaustive enumeration supports 1 ≤ n ≤ 5, got {n}"
        )));
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let total = 3u64.pow(pairs.len() as u32);
    Ok((0..total).filter_map(move |mut code| {
        let mut below = vec![0u64; n];
        for &(i, j) in &pairs {
            match code % 3 {
                1 => below[j] |= 1 << i,
                2 => below[i] |= 1 << j,
                _ => {}
            }
            code /= 3;
        }
        let transitive = (0..n).all(|i| {
            IdealSet::from_bits(below[i])
                .labels()
                .all(|k| below[k - 1] & !below[i] == 0)
        });
        transitive.then(|| Poset::from_closed(n, below))
    }))
}

/// A random labelled poset: a random linear order thinned by keeping each
/// relation with probability `density`, then closed transitively.
pub fn random_poset<R: Rng + ?Sized>(n: usize, density: f64, rng: &mut R) -> Result<Poset> {
    let mut order: Vec<usize> = (1..=n).collect();
    order.shuffle(rng);
    let mut rels = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                rels.push((order[i], order[j]));
            }
        }
    }
    Poset::new(n, &rels)
}
