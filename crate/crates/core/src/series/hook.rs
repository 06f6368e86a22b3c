use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::extensions::count_extensions;
use crate::partitions::delta_data;
use crate::poset::Poset;
use crate::structure::{classify, Classification};

use super::qpoly::{factorial, q_factorial, q_int, QPoly};

fn hook_sizes(p: &Poset) -> (Vec<usize>, Vec<usize>) {
    let conn = p.connected_ideals();
    let pair_sizes = p
        .pairs_among(&conn)
        .iter()
        .map(|pp| pp.j1.len() + pp.j2.len())
        .collect();
    (pair_sizes, conn.iter().map(|j| j.len()).collect())
}

fn q_hook(p: &Poset) -> Result<QPoly> {
    let (pairs, ideals) = hook_sizes(p);
    let mut num = q_factorial(p.n());
    for s in pairs {
        num = &num * &q_int(s);
    }
    for s in ideals {
        num = num.div_exact(&q_int(s))?;
    }
    Ok(num)
}

/// `[n]!_q · Π_{Π(P)} [|J₁|+|J₂|]_q / Π_{J_conn(P)} [|J|]_q` for a naturally
/// labelled forest with duplications.
pub fn hook_formula(p: &Poset) -> Result<QPoly> {
    hook_formula_given(p, &classify(p))
}

pub fn hook_formula_given(p: &Poset, classification: &Classification) -> Result<QPoly> {
    if !classification.is_ci() {
        return Err(Error::NotFwd);
    }
    if !p.is_naturally_labelled() {
        return Err(Error::Label);
    }
    q_hook(p)
}

/// `q^{maj(P)}` times the hook quotient, for a forest with duplications
/// satisfying the labelled-δ-chain condition under any labelling.
pub fn hook_formula_labelled(p: &Poset) -> Result<QPoly> {
    if !classify(p).is_ci() {
        return Err(Error::NotFwd);
    }
    let maj = delta_data(p).maj_p.ok_or(Error::Label)?;
    Ok(&QPoly::monomial(1, maj as usize) * &q_hook(p)?)
}

/// `n! · Π(|J₁|+|J₂|) / Π|J|`, valid for any labelling.
pub fn hook_count(p: &Poset) -> Result<BigUint> {
    if !classify(p).is_ci() {
        return Err(Error::NotFwd);
    }
    Ok(hook_count_unchecked(p))
}

fn hook_count_unchecked(p: &Poset) -> BigUint {
    let (pairs, ideals) = hook_sizes(p);
    let num = pairs
        .into_iter()
        .fold(factorial(p.n()), |acc, s| acc * BigUint::from(s));
    let den = ideals
        .into_iter()
        .fold(BigUint::one(), |acc, s| acc * BigUint::from(s));
    debug_assert!((&num % &den).is_zero());
    num / den
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CountRoute {
    HookFormula,
    IdealLattice,
}

/// `|L(P)|`, through the closed form when `P` is a forest with
/// duplications and the ideal-lattice count otherwise.
pub fn count_extensions_fast(p: &Poset) -> Result<(BigUint, CountRoute)> {
    if classify(p).is_ci() {
        Ok((hook_count_unchecked(p), CountRoute::HookFormula))
    } else {
        Ok((count_extensions(p)?, CountRoute::IdealLattice))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extensions::maj_polynomial;
    use crate::fixtures;
    use crate::series::q_int_pow;

    #[test]
    fn fig1_hook() {
        let expected = &(&(&q_int_pow(2, 7) * &q_int(5)) * &q_int(5)) * &q_int(6);
        let h = hook_formula(&fixtures::fig1()).unwrap();
        assert_eq!(h, expected);
        assert_eq!(h.eval_one(), 300.into());
        assert_eq!(
            hook_count(&fixtures::fig1()).unwrap(),
            BigUint::from(300u32)
        );
    }

    #[test]
    fn p1_and_p3() {
        assert_eq!(
            hook_formula(&fixtures::p1()).unwrap(),
            QPoly::from_i64s(&[1, 0, 1])
        );
        assert!(matches!(hook_formula(&fixtures::p3()), Err(Error::Label)));
        assert_eq!(hook_count(&fixtures::p3()).unwrap(), BigUint::from(2u32));
        let p3 = fixtures::p3();
        assert_eq!(
            hook_formula_labelled(&p3).unwrap(),
            maj_polynomial(&p3, 100).unwrap()
        );
    }

    #[test]
    fn non_fwd_is_rejected() {
        assert!(matches!(
            hook_formula(&fixtures::ex33()),
            Err(Error::NotFwd)
        ));
        assert!(matches!(hook_count(&fixtures::forb1()), Err(Error::NotFwd)));
        let (c, route) = count_extensions_fast(&fixtures::ex33()).unwrap();
        assert_eq!((c, route), (BigUint::from(7u32), CountRoute::IdealLattice));
        let (c, route) = count_extensions_fast(&fixtures::fig1()).unwrap();
        assert_eq!((c, route), (BigUint::from(300u32), CountRoute::HookFormula));
    }
}
