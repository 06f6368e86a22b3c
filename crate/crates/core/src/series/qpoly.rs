use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A polynomial in `q` with arbitrary-precision integer coefficients.
///
/// `coeffs[i]` is the coefficient of `q^i`; trailing zeros are trimmed, so
/// the zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QPoly {
    coeffs: Vec<BigInt>,
}

impl QPoly {
    pub fn zero() -> QPoly {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> QPoly {
        QPoly::constant(1)
    }

    pub fn constant<T: Into<BigInt>>(c: T) -> QPoly {
        QPoly::from_coeffs(vec![c.into()])
    }

    /// `c · q^k`.
    pub fn monomial<T: Into<BigInt>>(c: T, k: usize) -> QPoly {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c.into();
        QPoly::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> QPoly {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> QPoly {
        QPoly::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Value at `q = 1`.
    pub fn eval_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    pub fn add_term<T: Into<BigInt>>(&mut self, k: usize, c: T) {
        if self.coeffs.len() <= k {
            self.coeffs.resize(k + 1, BigInt::zero());
        }
        self.coeffs[k] += c.into();
        let trimmed = std::mem::take(&mut self.coeffs);
        *self = QPoly::from_coeffs(trimmed);
    }

    /// Coefficients reduced modulo `q^{k}`.
    pub fn truncate(&self, k: usize) -> QPoly {
        QPoly::from_coeffs(self.coeffs.iter().take(k).cloned().collect())
    }

    pub fn pow(&self, e: u32) -> QPoly {
        (0..e).fold(QPoly::one(), |acc, _| &acc * self)
    }

    /// Exact division; a nonzero remainder is an error.
    pub fn div_exact(&self, divisor: &QPoly) -> Result<QPoly> {
        let (quot, rem) = self.div_rem(divisor)?;
        if rem.is_zero() {
            Ok(quot)
        } else {
            Err(Error::Remainder {
                divisor: divisor.to_string(),
            })
        }
    }

    /// Long division over the integers. The divisor's leading coefficient
    /// must divide every intermediate leading coefficient.
    pub fn div_rem(&self, divisor: &QPoly) -> Result<(QPoly, QPoly)> {
        let Some(dd) = divisor.degree() else {
            return Err(Error::Arg("division by the zero polynomial".into()));
        };
        let lead = &divisor.coeffs[dd];
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); rem.len().saturating_sub(dd).max(1)];
        while rem.len() > dd && !rem.is_empty() {
            let top = rem.len() - 1;
            let c = &rem[top];
            if c.is_zero() {
                rem.pop();
                continue;
            }
            if !(c % lead).is_zero() {
                return Err(Error::Remainder {
                    divisor: divisor.to_string(),
                });
            }
            let factor = c / lead;
            let shift = top - dd;
            for (i, d) in divisor.coeffs.iter().enumerate() {
                rem[shift + i] -= &factor * d;
            }
            quot[shift] = factor;
            rem.pop();
        }
        Ok((QPoly::from_coeffs(quot), QPoly::from_coeffs(rem)))
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }
}

/// `[n]_q = 1 + q + ... + q^{n-1}`.
pub fn q_int(n: usize) -> QPoly {
    q_int_pow(n, 1)
}

/// `[n]_{q^k} = 1 + q^k + ... + q^{k(n-1)}`.
pub fn q_int_pow(n: usize, k: usize) -> QPoly {
    let mut coeffs = vec![BigInt::zero(); if n == 0 { 0 } else { k * (n - 1) + 1 }];
    for i in 0..n {
        coeffs[i * k] = BigInt::one();
    }
    QPoly::from_coeffs(coeffs)
}

/// `[n]!_q = [1]_q [2]_q ... [n]_q`.
pub fn q_factorial(n: usize) -> QPoly {
    (1..=n).fold(QPoly::one(), |acc, i| &acc * &q_int(i))
}

/// `Π_{i=1..n} (1 - q^i)`.
pub fn q_pochhammer(n: usize) -> QPoly {
    (1..=n).fold(QPoly::one(), |acc, i| {
        &acc * &(&QPoly::one() - &QPoly::monomial(1, i))
    })
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

impl Add for &QPoly {
    type Output = QPoly;

    fn add(self, rhs: &QPoly) -> QPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        QPoly::from_coeffs((0..len).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &QPoly {
    type Output = QPoly;

    fn sub(self, rhs: &QPoly) -> QPoly {
        self + &(-rhs)
    }
}

impl Neg for &QPoly {
    type Output = QPoly;

    fn neg(self) -> QPoly {
        QPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &QPoly {
    type Output = QPoly;

    fn mul(self, rhs: &QPoly) -> QPoly {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::from_coeffs(out)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for QPoly {
            type Output = QPoly;

            fn $method(self, rhs: QPoly) -> QPoly {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            match k {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if k == 1 {
                        f.write_str("q")?;
                    } else {
                        write!(f, "q^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QPoly({self})")
    }
}

/// Integers that fit in `i64` as JSON numbers, larger ones as decimal strings.
pub(crate) fn serialize_bigint<S: Serializer>(
    c: &BigInt,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match c.to_i64() {
        Some(v) => s.serialize_i64(v),
        None => s.serialize_str(&c.to_string()),
    }
}

impl Serialize for QPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        struct Big<'a>(&'a BigInt);
        impl Serialize for Big<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                serialize_bigint(self.0, s)
            }
        }
        let mut seq = s.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            seq.serialize_element(&Big(c))?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_integers_and_factorials() {
        assert_eq!(q_int(3), QPoly::from_i64s(&[1, 1, 1]));
        assert_eq!(q_int(0), QPoly::zero());
        assert_eq!(q_factorial(0), QPoly::one());
        assert_eq!(q_factorial(1), QPoly::one());
        assert_eq!(q_factorial(3), QPoly::from_i64s(&[1, 2, 2, 1]));
        assert_eq!(q_int_pow(2, 7), QPoly::from_i64s(&[1, 0, 0, 0, 0, 0, 0, 1]));
        assert_eq!(q_factorial(5).eval_one(), BigInt::from(120));
    }

    #[test]
    fn exact_division() {
        let num = q_factorial(4);
        let quot = num.div_exact(&q_int(2)).unwrap();
        assert_eq!(&quot * &q_int(2), num);
        assert!(matches!(
            q_int(3).div_exact(&q_int(2)),
            Err(Error::Remainder { .. })
        ));
        let (q, r) = QPoly::from_i64s(&[1, 0, 1]).div_rem(&q_int(2)).unwrap();
        assert_eq!(q, QPoly::from_i64s(&[-1, 1]));
        assert_eq!(r, QPoly::constant(2));
        assert!(q_int(2).div_rem(&QPoly::zero()).is_err());
        assert_eq!(QPoly::zero().div_exact(&q_int(2)).unwrap(), QPoly::zero());
    }

    #[test]
    fn display_and_json() {
        assert_eq!(
            QPoly::from_i64s(&[1, -2, 0, 3]).to_string(),
            "1 - 2*q + 3*q^3"
        );
        assert_eq!(QPoly::from_i64s(&[0, 1, 1]).to_string(), "q + q^2");
        assert_eq!(QPoly::from_i64s(&[0, -1]).to_string(), "-q");
        assert_eq!(
            serde_json::to_string(&QPoly::from_i64s(&[1, 0, 2])).unwrap(),
            "[1,0,2]"
        );
    }

    #[test]
    fn pochhammer_small() {
        assert_eq!(q_pochhammer(2), QPoly::from_i64s(&[1, -1, -1, 1]));
    }
}
