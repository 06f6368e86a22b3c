//! The flag complex `Δ_P` on connected ideals and its facets, the P-forests.

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::extensions::count_extensions;
use crate::poset::{IdealSet, Poset};

/// Default cap on `|J_conn(P)|` for clique enumeration.
pub const DEFAULT_VERTEX_CAP: usize = 24;

const HARD_VERTEX_CAP: usize = 128;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimplicialComplex {
    pub vertices: Vec<IdealSet>,
    /// Facets as sorted vertex indices, sorted lexicographically.
    pub facets: Vec<Vec<usize>>,
}

impl SimplicialComplex {
    /// Whether every pair of the given vertices is an edge.
    pub fn is_face(&self, vertices: &[usize]) -> bool {
        vertices.iter().enumerate().all(|(k, &a)| {
            vertices[k + 1..]
                .iter()
                .all(|&b| self.vertices[a].intersects_trivially(self.vertices[b]))
        })
    }

    /// Whether the set lies inside some facet.
    pub fn in_some_facet(&self, vertices: &[usize]) -> bool {
        self.facets
            .iter()
            .any(|f| vertices.iter().all(|v| f.contains(v)))
    }

    /// Vertex pairs contained in no facet.
    pub fn minimal_non_faces(&self) -> Vec<(IdealSet, IdealSet)> {
        let m = self.vertices.len();
        let mut out = Vec::new();
        for a in 0..m {
            for b in a + 1..m {
                if !self.in_some_facet(&[a, b]) {
                    out.push((self.vertices[a], self.vertices[b]));
                }
            }
        }
        out
    }

    pub fn facet_ideals(&self, facet: &[usize]) -> Vec<IdealSet> {
        facet.iter().map(|&v| self.vertices[v]).collect()
    }
}

fn bron_kerbosch(r: u128, mut p: u128, mut x: u128, adj: &[u128], out: &mut Vec<u128>) {
    if p == 0 {
        if x == 0 {
            out.push(r);
        }
        return;
    }
    let pivot = bits(p | x)
        .max_by_key(|&u| ((p & adj[u]).count_ones(), std::cmp::Reverse(u)))
        .expect("p is nonempty");
    for v in bits(p & !adj[pivot]) {
        let vb = 1u128 << v;
        bron_kerbosch(r | vb, p & adj[v], x & adj[v], adj, out);
        p &= !vb;
        x |= vb;
    }
}

fn bits(mut m: u128) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(v)
        }
    })
}

/// Facets of `Δ_P`: maximal sets of pairwise trivially intersecting
/// connected ideals.
pub fn delta_complex(p: &Poset, vertex_cap: usize) -> Result<SimplicialComplex> {
    let vertices = p.connected_ideals();
    let cap = vertex_cap.min(HARD_VERTEX_CAP);
    if vertices.len() > cap {
        return Err(Error::Cap {
            what: "connected ideal set",
            size: vertices.len(),
            cap,
        });
    }
    let m = vertices.len();
    let adj: Vec<u128> = (0..m)
        .map(|a| {
            (0..m)
                .filter(|&b| b != a && vertices[a].intersects_trivially(vertices[b]))
                .fold(0u128, |acc, b| acc | (1u128 << b))
        })
        .collect();
    let all = if m == 128 {
        u128::MAX
    } else {
        (1u128 << m) - 1
    };
    let mut cliques = Vec::new();
    bron_kerbosch(0, all, 0, &adj, &mut cliques);
    let mut facets: Vec<Vec<usize>> = cliques.into_iter().map(|c| bits(c).collect()).collect();
    facets.sort();
    Ok(SimplicialComplex { vertices, facets })
}

/// A forest on the elements of `P` whose principal ideals are connected
/// ideals of `P`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PForest {
    /// `parent[i - 1]` is the element covering `i`, or 0 for a root.
    pub parent: Vec<usize>,
    /// `ideals[i - 1] = F_{≤i}`.
    pub ideals: Vec<IdealSet>,
}

impl PForest {
    /// The forest as a poset on `1..=n`.
    pub fn to_poset(&self) -> Poset {
        let rels: Vec<(usize, usize)> = self
            .parent
            .iter()
            .enumerate()
            .filter(|(_, &par)| par != 0)
            .map(|(i, &par)| (i + 1, par))
            .collect();
        Poset::new(self.parent.len(), &rels).expect("a parent array is acyclic")
    }

    /// Principal ideals as a sorted set.
    pub fn ideal_set(&self) -> Vec<IdealSet> {
        let mut v = self.ideals.clone();
        v.sort();
        v
    }

    fn from_ideals(ideals: Vec<IdealSet>) -> PForest {
        let parent = (1..=ideals.len())
            .map(|i| {
                let own = ideals[i - 1];
                // the parent's ideal is the smallest one strictly containing ours
                (1..=ideals.len())
                    .filter(|&k| k != i && own.is_subset(ideals[k - 1]) && own != ideals[k - 1])
                    .min_by_key(|&k| ideals[k - 1].len())
                    .unwrap_or(0)
            })
            .collect();
        PForest { parent, ideals }
    }
}

/// Checks both defining conditions, independently of how `f` was built.
pub fn is_p_forest(p: &Poset, f: &PForest) -> bool {
    let n = p.n();
    if f.parent.len() != n || f.ideals.len() != n {
        return false;
    }
    let q = match Poset::new(
        n,
        &f.parent
            .iter()
            .enumerate()
            .filter(|(_, &par)| par != 0)
            .map(|(i, &par)| (i + 1, par))
            .collect::<Vec<_>>(),
    ) {
        Ok(q) => q,
        Err(_) => return false,
    };
    let is_forest = q.elements().all(|i| q.upper_covers(i).len() <= 1);
    let principal_ok = q.elements().all(|i| {
        let fi = q.principal_filter(i);
        let down = q.strictly_below(i).with(i);
        let _ = fi;
        down == f.ideals[i - 1] && p.is_ideal(down) && p.is_connected_set(down)
    });
    let incomparable_ok = q.elements().all(|i| {
        q.elements().all(|j| {
            q.comparable(i, j) || !p.is_connected_set(f.ideals[i - 1].union(f.ideals[j - 1]))
        })
    });
    is_forest && principal_ok && incomparable_ok
}

/// All P-forests, found by assigning each element its principal ideal.
pub fn p_forests(p: &Poset, vertex_cap: usize) -> Result<Vec<PForest>> {
    let conn = p.connected_ideals();
    let cap = vertex_cap.min(HARD_VERTEX_CAP);
    if conn.len() > cap {
        return Err(Error::Cap {
            what: "connected ideal set",
            size: conn.len(),
            cap,
        });
    }
    // candidates for F_{≤i}: connected ideals in which i is maximal
    let candidates: Vec<Vec<IdealSet>> = p
        .elements()
        .map(|i| {
            conn.iter()
                .copied()
                .filter(|j| p.maximal_in(*j).contains(i))
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut chosen: Vec<IdealSet> = Vec::with_capacity(p.n());
    forest_rec(p, &candidates, &mut chosen, &mut out);
    out.sort_by(|a, b| a.parent.cmp(&b.parent));
    Ok(out)
}

fn forest_rec(
    p: &Poset,
    candidates: &[Vec<IdealSet>],
    chosen: &mut Vec<IdealSet>,
    out: &mut Vec<PForest>,
) {
    let i = chosen.len() + 1;
    if i > p.n() {
        let forest = PForest::from_ideals(chosen.clone());
        if is_p_forest(p, &forest) {
            out.push(forest);
        }
        return;
    }
    for &j in &candidates[i - 1] {
        let consistent = chosen.iter().enumerate().all(|(k0, &jk)| {
            let k = k0 + 1;
            let strictly = |a: IdealSet, b: IdealSet| a.is_subset(b) && a != b;
            jk != j
                && jk.intersects_trivially(j)
                && (j.contains(k) == strictly(jk, j))
                && (jk.contains(i) == strictly(j, jk))
        });
        if consistent {
            chosen.push(j);
            forest_rec(p, candidates, chosen, out);
            chosen.pop();
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ForestConsistency {
    #[serde(serialize_with = "big_list")]
    pub terms: Vec<BigUint>,
    #[serde(serialize_with = "big")]
    pub total: BigUint,
    #[serde(serialize_with = "big")]
    pub extensions: BigUint,
    pub passed: bool,
}

fn big<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn big_list<S: serde::Serializer>(v: &[BigUint], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

/// Compares `Σ_F |L(F)|` over P-forests with `|L(P)|`.
pub fn forest_consistency(p: &Poset, vertex_cap: usize) -> Result<ForestConsistency> {
    let forests = p_forests(p, vertex_cap)?;
    let terms = forests
        .iter()
        .map(|f| count_extensions(&f.to_poset()))
        .collect::<Result<Vec<_>>>()?;
    let total: BigUint = terms.iter().sum();
    let extensions = count_extensions(p)?;
    Ok(ForestConsistency {
        passed: total == extensions,
        terms,
        total,
        extensions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn set(labels: &[usize]) -> IdealSet {
        IdealSet::from_labels(labels.iter().copied())
    }

    #[test]
    fn chain_has_one_facet() {
        let c = Poset::chain(&[1, 2, 3]).unwrap();
        let d = delta_complex(&c, DEFAULT_VERTEX_CAP).unwrap();
        assert_eq!(d.facets, vec![vec![0, 1, 2]]);
        let forests = p_forests(&c, DEFAULT_VERTEX_CAP).unwrap();
        assert_eq!(forests.len(), 1);
        assert_eq!(forests[0].parent, vec![2, 3, 0]);
        assert!(forest_consistency(&c, DEFAULT_VERTEX_CAP).unwrap().passed);
    }

    #[test]
    fn p1_complex() {
        let d = delta_complex(&fixtures::p1(), DEFAULT_VERTEX_CAP).unwrap();
        assert_eq!(
            d.vertices,
            vec![set(&[1]), set(&[1, 2]), set(&[1, 3]), set(&[1, 2, 3])]
        );
        let facets: Vec<Vec<IdealSet>> = d.facets.iter().map(|f| d.facet_ideals(f)).collect();
        assert_eq!(
            facets,
            vec![
                vec![set(&[1]), set(&[1, 2]), set(&[1, 2, 3])],
                vec![set(&[1]), set(&[1, 3]), set(&[1, 2, 3])],
            ]
        );
        assert_eq!(
            p_forests(&fixtures::p1(), DEFAULT_VERTEX_CAP)
                .unwrap()
                .len(),
            2
        );
    }

    #[test]
    fn fig1_non_faces_are_the_pairs() {
        let p = fixtures::fig1();
        let d = delta_complex(&p, DEFAULT_VERTEX_CAP).unwrap();
        let pairs: Vec<(IdealSet, IdealSet)> = p
            .nontrivial_pairs()
            .iter()
            .map(|pp| (pp.j1, pp.j2))
            .collect();
        assert_eq!(d.minimal_non_faces(), pairs);
        let report = forest_consistency(&p, DEFAULT_VERTEX_CAP).unwrap();
        assert_eq!(report.extensions, BigUint::from(300u32));
        assert!(report.passed);
    }

    #[test]
    fn bowtie_forests() {
        let p = fixtures::bowtie();
        let forests = p_forests(&p, DEFAULT_VERTEX_CAP).unwrap();
        let parents: Vec<Vec<usize>> = forests.iter().map(|f| f.parent.clone()).collect();
        // 1,3 < 2 < 4 and 1,3 < 4 < 2
        assert_eq!(parents, vec![vec![2, 4, 2, 0], vec![4, 0, 4, 2]]);
        let report = forest_consistency(&p, DEFAULT_VERTEX_CAP).unwrap();
        assert_eq!(report.terms, vec![BigUint::from(2u32), BigUint::from(2u32)]);
        assert_eq!(report.extensions, BigUint::from(4u32));
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            delta_complex(&fixtures::fig1(), 5),
            Err(Error::Cap {
                size: 10,
                cap: 5,
                ..
            })
        ));
    }
}
