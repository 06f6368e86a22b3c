//! Linear extensions and their descent statistics.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poset::{IdealSet, Poset};
use crate::series::QPoly;

/// Default cap on the number of extensions materialised or enumerated.
pub const DEFAULT_EXTENSION_CAP: u64 = 10_000_000;

/// Default cap on ideal-lattice states held by the counting DP.
pub const DEFAULT_STATE_CAP: usize = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinearExtension {
    pub w: Vec<usize>,
    /// Positions `i` with `w(i) > w(i+1)`, 1-based.
    pub des_set: Vec<usize>,
    pub maj: usize,
    /// `Σ_{i ∈ Des(w)} c_P(w|[1,i])`.
    pub des_p: usize,
}

impl LinearExtension {
    pub fn new(p: &Poset, w: Vec<usize>) -> LinearExtension {
        let mut des_set = Vec::new();
        let mut des_p = 0;
        let mut prefix = IdealSet::EMPTY;
        for i in 0..w.len() {
            prefix = prefix.with(w[i]);
            if i + 1 < w.len() && w[i] > w[i + 1] {
                des_set.push(i + 1);
                des_p += p.component_count(prefix);
            }
        }
        let maj = des_set.iter().sum();
        LinearExtension {
            w,
            des_set,
            maj,
            des_p,
        }
    }

    /// `w|[1,i]` for `i = 1..n`.
    pub fn prefixes(&self) -> Vec<IdealSet> {
        let mut acc = IdealSet::EMPTY;
        self.w
            .iter()
            .map(|&x| {
                acc = acc.with(x);
                acc
            })
            .collect()
    }
}

/// Visits every linear extension in lexicographic order until `visit`
/// returns false.
pub fn for_each_extension<F: FnMut(&[usize]) -> bool>(p: &Poset, mut visit: F) {
    let mut w = Vec::with_capacity(p.n());
    extend_rec(p, IdealSet::EMPTY, &mut w, &mut visit);
}

fn extend_rec<F: FnMut(&[usize]) -> bool>(
    p: &Poset,
    placed: IdealSet,
    w: &mut Vec<usize>,
    visit: &mut F,
) -> bool {
    if w.len() == p.n() {
        return visit(w);
    }
    let rest = p.full().difference(placed);
    for x in rest.labels() {
        if p.strictly_below(x).is_subset(placed) {
            w.push(x);
            let go_on = extend_rec(p, placed.with(x), w, visit);
            w.pop();
            if !go_on {
                return false;
            }
        }
    }
    true
}

fn check_cap(p: &Poset, cap: u64) -> Result<BigUint> {
    let count = count_extensions(p)?;
    if count > BigUint::from(cap) {
        return Err(Error::Explosion {
            what: "linear extension count",
            cap,
        });
    }
    Ok(count)
}

/// All linear extensions in lexicographic order, with statistics.
pub fn linear_extensions(p: &Poset, cap: u64) -> Result<Vec<LinearExtension>> {
    check_cap(p, cap)?;
    let mut out = Vec::new();
    for_each_extension(p, |w| {
        out.push(LinearExtension::new(p, w.to_vec()));
        true
    });
    Ok(out)
}

/// `|L(P)|` as the number of maximal chains in the ideal lattice.
pub fn count_extensions(p: &Poset) -> Result<BigUint> {
    count_extensions_capped(p, DEFAULT_STATE_CAP)
}

pub fn count_extensions_capped(p: &Poset, state_cap: usize) -> Result<BigUint> {
    let full = p.full().bits();
    let mut layer: HashMap<u64, BigUint> = HashMap::from([(0u64, BigUint::one())]);
    for _ in 0..p.n() {
        let mut next: HashMap<u64, BigUint> = HashMap::with_capacity(layer.len());
        for (ideal, count) in &layer {
            for x in IdealSet::from_bits(full & !ideal).labels() {
                if p.strictly_below(x).bits() & !ideal == 0 {
                    let e = next.entry(ideal | (1u64 << (x - 1))).or_default();
                    *e += count;
                }
            }
        }
        if next.len() > state_cap {
            return Err(Error::Cap {
                what: "ideal lattice layer",
                size: next.len(),
                cap: state_cap,
            });
        }
        layer = next;
    }
    Ok(layer.remove(&full).unwrap_or_default())
}

/// `Σ_{w ∈ L(P)} q^{maj(w)}` by enumerating every extension.
///
/// The search is split by first element across threads; the result does
/// not depend on the split.
pub fn maj_polynomial(p: &Poset, cap: u64) -> Result<QPoly> {
    check_cap(p, cap)?;
    let firsts: Vec<usize> = p.minimal_elements().labels().collect();
    let max_maj = p.n() * p.n().saturating_sub(1) / 2;
    let partial: Vec<Vec<u64>> = firsts
        .par_iter()
        .map(|&first| {
            let mut hist = vec![0u64; max_maj + 1];
            let mut w = vec![first];
            extend_rec(
                p,
                IdealSet::singleton(first),
                &mut w,
                &mut |w: &[usize]| {
                    let maj: usize = (0..w.len() - 1)
                        .filter(|&i| w[i] > w[i + 1])
                        .map(|i| i + 1)
                        .sum();
                    hist[maj] += 1;
                    true
                },
            );
            hist
        })
        .collect();
    let mut total = vec![BigInt::zero(); max_maj + 1];
    for hist in partial {
        for (k, c) in hist.into_iter().enumerate() {
            total[k] += c;
        }
    }
    Ok(QPoly::from_coeffs(total))
}

/// The same polynomial by a DP over `(ideal, last element)` states.
pub fn maj_polynomial_dp(p: &Poset) -> Result<QPoly> {
    let full = p.full().bits();
    let mut layer: HashMap<(u64, usize), Vec<BigUint>> = HashMap::new();
    for x in p.minimal_elements().labels() {
        layer.insert((1u64 << (x - 1), x), vec![BigUint::one()]);
    }
    for size in 1..p.n() {
        let mut next: HashMap<(u64, usize), Vec<BigUint>> = HashMap::new();
        for ((ideal, last), poly) in &layer {
            for y in IdealSet::from_bits(full & !ideal).labels() {
                if p.strictly_below(y).bits() & !ideal != 0 {
                    continue;
                }
                let shift = if *last > y { size } else { 0 };
                let e = next.entry((ideal | (1u64 << (y - 1)), y)).or_default();
                if e.len() < poly.len() + shift {
                    e.resize(poly.len() + shift, BigUint::zero());
                }
                for (k, c) in poly.iter().enumerate() {
                    e[k + shift] += c;
                }
            }
        }
        if next.len() > DEFAULT_STATE_CAP {
            return Err(Error::Cap {
                what: "ideal lattice layer",
                size: next.len(),
                cap: DEFAULT_STATE_CAP,
            });
        }
        layer = next;
    }
    let mut total = QPoly::zero();
    for poly in layer.into_values() {
        total = &total + &QPoly::from_coeffs(poly.into_iter().map(BigInt::from).collect());
    }
    Ok(total)
}

/// `|L(P)|` as a machine integer, for callers that know it is small.
pub fn count_small(p: &Poset) -> Result<u64> {
    count_extensions(p)?.to_u64().ok_or(Error::Explosion {
        what: "linear extension count",
        cap: u64::MAX,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::series::{q_factorial, q_int, q_int_pow};

    fn brute_count(p: &Poset) -> usize {
        let mut c = 0;
        for_each_extension(p, |_| {
            c += 1;
            true
        });
        c
    }

    #[test]
    fn ex33_extensions_and_des_p() {
        let exts = linear_extensions(&fixtures::ex33(), DEFAULT_EXTENSION_CAP).unwrap();
        assert_eq!(exts.len(), 7);
        let mut des: Vec<usize> = exts.iter().map(|e| e.des_p).collect();
        des.sort();
        assert_eq!(des, vec![0, 1, 1, 1, 2, 2, 3]);
        for e in &exts {
            assert!(e.prefixes().iter().all(|&s| fixtures::ex33().is_ideal(s)));
        }
        let w: Vec<Vec<usize>> = exts.iter().map(|e| e.w.clone()).collect();
        let mut sorted = w.clone();
        sorted.sort();
        assert_eq!(w, sorted);
    }

    #[test]
    fn counts() {
        assert_eq!(
            count_extensions(&fixtures::fig1()).unwrap(),
            BigUint::from(300u32)
        );
        assert_eq!(
            count_extensions(&fixtures::ex33()).unwrap(),
            BigUint::from(7u32)
        );
        assert_eq!(
            count_extensions(&Poset::antichain(6).unwrap()).unwrap(),
            BigUint::from(720u32)
        );
        let chain = Poset::chain(&[1, 2, 3, 4]).unwrap();
        let exts = linear_extensions(&chain, 10).unwrap();
        assert_eq!(exts.len(), 1);
        assert_eq!(exts[0].w, vec![1, 2, 3, 4]);
        assert_eq!(brute_count(&fixtures::fig1()), 300);
    }

    #[test]
    fn caps_are_enforced() {
        let a = Poset::antichain(5).unwrap();
        assert!(matches!(
            linear_extensions(&a, 100),
            Err(Error::Explosion { cap: 100, .. })
        ));
        assert!(matches!(
            maj_polynomial(&a, 100),
            Err(Error::Explosion { .. })
        ));
        assert!(matches!(
            count_extensions_capped(&a, 3),
            Err(Error::Cap { .. })
        ));
    }

    #[test]
    fn maj_polynomials() {
        assert_eq!(
            maj_polynomial(&fixtures::p1(), 100).unwrap(),
            QPoly::from_i64s(&[1, 0, 1])
        );
        assert_eq!(
            maj_polynomial(&fixtures::p2(), 100).unwrap(),
            QPoly::from_i64s(&[0, 1, 1])
        );
        let expected = &(&(&q_int_pow(2, 7) * &q_int(5)) * &q_int(5)) * &q_int(6);
        let fig = maj_polynomial(&fixtures::fig1(), DEFAULT_EXTENSION_CAP).unwrap();
        assert_eq!(fig, expected);
        assert_eq!(maj_polynomial_dp(&fixtures::fig1()).unwrap(), expected);
        assert_eq!(
            maj_polynomial(&Poset::antichain(4).unwrap(), 100).unwrap(),
            q_factorial(4)
        );
    }

    #[test]
    fn dp_matches_enumeration_on_fixtures() {
        for (name, p) in fixtures::all() {
            assert_eq!(
                maj_polynomial(&p, DEFAULT_EXTENSION_CAP).unwrap(),
                maj_polynomial_dp(&p).unwrap(),
                "{name}"
            );
            assert_eq!(count_small(&p).unwrap() as usize, brute_count(&p), "{name}");
        }
    }
}
