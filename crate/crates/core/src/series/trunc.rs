use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Maximum number of `x` variables in the multigraded gradings.
pub const MAX_X_VARS: usize = 15;

/// Maximum truncation order; exponents are stored one byte per variable.
pub const MAX_ORDER: u32 = 255;

/// Which specialisation of `t^{ν} x^f` a series records.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Grading {
    /// `x^f`, truncated by `|f|`.
    X,
    /// `t^ν x^f`, truncated by `|f|`.
    TX,
    /// `t^ν q^{|f|}`, truncated by `|f|`.
    TQ,
    /// `q^{|f|}`.
    Q,
    /// `t^ν`, truncated by `ν`.
    T,
}

impl Grading {
    pub const ALL: [Grading; 5] = [Grading::X, Grading::TX, Grading::TQ, Grading::Q, Grading::T];

    pub fn name(self) -> &'static str {
        match self {
            Grading::X => "x",
            Grading::TX => "tx",
            Grading::TQ => "tq",
            Grading::Q => "q",
            Grading::T => "t",
        }
    }

    pub fn has_t(self) -> bool {
        matches!(self, Grading::TX | Grading::TQ | Grading::T)
    }

    pub fn is_multigraded(self) -> bool {
        matches!(self, Grading::X | Grading::TX)
    }

    /// Number of non-`t` exponent slots used for `n` elements.
    fn slots(self, n: usize) -> usize {
        match self {
            Grading::X | Grading::TX => n,
            Grading::TQ | Grading::Q => 1,
            Grading::T => 0,
        }
    }
}

impl std::str::FromStr for Grading {
    type Err = Error;

    fn from_str(s: &str) -> Result<Grading> {
        Grading::ALL
            .into_iter()
            .find(|g| g.name() == s)
            .ok_or_else(|| Error::Arg(format!("unknown grading `{s}`")))
    }
}

/// Monomial keys pack the `t` exponent in byte 0 and variable `k` in byte
/// `k`, so multiplying monomials is adding keys.
type Key = u128;

fn byte(key: Key, k: usize) -> u32 {
    ((key >> (8 * k)) & 0xff) as u32
}

/// A power series in `t` and `x_1..x_n` (or `q`) modulo terms of degree
/// above `order`.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncSeries {
    grading: Grading,
    n: usize,
    order: u32,
    terms: BTreeMap<Key, i128>,
}

/// One term: `coeff · t^t · Π x_k^{exps[k]}` (a single `q` exponent for the
/// collapsed gradings).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Term {
    pub t: u32,
    pub exps: Vec<u32>,
    #[serde(serialize_with = "ser_i128")]
    pub coeff: i128,
}

fn ser_i128<S: Serializer>(c: &i128, s: S) -> std::result::Result<S::Ok, S::Error> {
    match i64::try_from(*c) {
        Ok(v) => s.serialize_i64(v),
        Err(_) => s.serialize_str(&c.to_string()),
    }
}

fn checked(v: Option<i128>) -> i128 {
    v.expect("series coefficient overflowed i128")
}

impl TruncSeries {
    /// The zero series for `n` elements.
    pub fn zero(grading: Grading, n: usize, order: u32) -> Result<TruncSeries> {
        if grading.is_multigraded() && n > MAX_X_VARS {
            return Err(Error::Range(format!(
                "multigraded series support at most {MAX_X_VARS} variables, got {n}"
            )));
        }
        if order > MAX_ORDER {
            return Err(Error::Range(format!(
                "truncation order {order} above {MAX_ORDER}"
            )));
        }
        Ok(TruncSeries {
            grading,
            n,
            order,
            terms: BTreeMap::new(),
        })
    }

    pub fn one(grading: Grading, n: usize, order: u32) -> Result<TruncSeries> {
        let mut s = TruncSeries::zero(grading, n, order)?;
        s.terms.insert(0, 1);
        Ok(s)
    }

    /// A series with the same shape and no terms.
    pub fn empty_like(&self) -> TruncSeries {
        TruncSeries {
            terms: BTreeMap::new(),
            ..*self
        }
    }

    pub fn unit_like(&self) -> TruncSeries {
        let mut s = self.empty_like();
        s.terms.insert(0, 1);
        s
    }

    pub fn grading(&self) -> Grading {
        self.grading
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degree of a key in the truncation variable.
    fn degree(&self, key: Key) -> u32 {
        match self.grading {
            Grading::T => byte(key, 0),
            Grading::TQ | Grading::Q => byte(key, 1),
            Grading::X | Grading::TX => (1..=self.n).map(|k| byte(key, k)).sum(),
        }
    }

    /// The key of `t^t x^f` specialised to this grading, if within the
    /// truncation.
    pub fn key_for(&self, t: u32, f: &[u32]) -> Option<Key> {
        debug_assert_eq!(f.len(), self.n);
        let total: u32 = f.iter().sum();
        let t = if self.grading.has_t() { t } else { 0 };
        let deg = match self.grading {
            Grading::T => t,
            _ => total,
        };
        if deg > self.order || t > MAX_ORDER {
            return None;
        }
        let mut key = Key::from(t);
        match self.grading {
            Grading::X | Grading::TX => {
                for (k, &e) in f.iter().enumerate() {
                    key |= Key::from(e) << (8 * (k + 1));
                }
            }
            Grading::TQ | Grading::Q => key |= Key::from(total) << 8,
            Grading::T => {}
        }
        Some(key)
    }

    /// Adds `coeff · t^t x^f` (specialised), dropping it if truncated.
    pub fn add_term(&mut self, t: u32, f: &[u32], coeff: i128) {
        if let Some(key) = self.key_for(t, f) {
            self.add_key(key, coeff);
        }
    }

    fn add_key(&mut self, key: Key, coeff: i128) {
        if coeff == 0 {
            return;
        }
        let e = self.terms.entry(key).or_insert(0);
        *e = checked(e.checked_add(coeff));
        if *e == 0 {
            self.terms.remove(&key);
        }
    }

    /// `coeff · t^t x^f` as a series of this shape.
    pub fn monomial_like(&self, t: u32, f: &[u32], coeff: i128) -> TruncSeries {
        let mut s = self.empty_like();
        s.add_term(t, f, coeff);
        s
    }

    fn assert_compatible(&self, other: &TruncSeries) {
        assert!(
            self.grading == other.grading && self.n == other.n && self.order == other.order,
            "series shapes differ"
        );
    }

    /// Product of two keys if it survives truncation.
    fn mul_key(&self, a: Key, b: Key) -> Option<Key> {
        if self.degree(a) + self.degree(b) > self.order || byte(a, 0) + byte(b, 0) > MAX_ORDER {
            return None;
        }
        Some(a + b)
    }

    pub fn add(&self, other: &TruncSeries) -> TruncSeries {
        self.assert_compatible(other);
        let mut out = self.clone();
        for (&k, &c) in &other.terms {
            out.add_key(k, c);
        }
        out
    }

    pub fn sub(&self, other: &TruncSeries) -> TruncSeries {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, c: i128) -> TruncSeries {
        let mut out = self.empty_like();
        for (&k, &v) in &self.terms {
            out.add_key(k, checked(v.checked_mul(c)));
        }
        out
    }

    pub fn mul(&self, other: &TruncSeries) -> TruncSeries {
        self.assert_compatible(other);
        let mut out = self.empty_like();
        for (&ka, &ca) in &self.terms {
            for (&kb, &cb) in &other.terms {
                if let Some(k) = self.mul_key(ka, kb) {
                    out.add_key(k, checked(ca.checked_mul(cb)));
                }
            }
        }
        out
    }

    /// `self · (1 + c · t^t x^f)`.
    pub fn mul_binomial(&self, t: u32, f: &[u32], c: i128) -> TruncSeries {
        let mut out = self.clone();
        if let Some(m) = self.key_for(t, f) {
            for (&k, &v) in &self.terms {
                if let Some(prod) = self.mul_key(k, m) {
                    out.add_key(prod, checked(v.checked_mul(c)));
                }
            }
        }
        out
    }

    /// `self / (1 - t^t x^f)`, expanded as a geometric series.
    ///
    /// Panics if the monomial has degree zero in the truncation variable.
    pub fn div_one_minus(&self, t: u32, f: &[u32]) -> TruncSeries {
        let Some(m) = self.key_for(t, f) else {
            return self.clone();
        };
        assert!(
            self.degree(m) > 0,
            "geometric series of a degree-zero monomial"
        );
        let mut out = self.clone();
        let mut power = self.clone();
        loop {
            let mut next = self.empty_like();
            for (&k, &v) in &power.terms {
                if let Some(prod) = self.mul_key(k, m) {
                    next.add_key(prod, v);
                }
            }
            if next.is_empty() {
                break;
            }
            out = out.add(&next);
            power = next;
        }
        out
    }

    /// The multiplicative inverse modulo the truncation.
    ///
    /// Keys are processed in increasing order; every proper divisor of a
    /// monomial has a smaller key, so each coefficient is final when reached.
    pub fn inverse(&self) -> Result<TruncSeries> {
        let a0 = self.terms.get(&0).copied().unwrap_or(0);
        if a0 != 1 && a0 != -1 {
            return Err(Error::Arg(format!(
                "series inverse needs constant term ±1, found {a0}"
            )));
        }
        let rest: Vec<(Key, i128)> = self
            .terms
            .iter()
            .filter(|(&k, _)| k != 0)
            .map(|(&k, &c)| (k, c))
            .collect();
        let mut out = self.empty_like();
        let mut pending: BTreeMap<Key, i128> = BTreeMap::from([(0, 1)]);
        while let Some((key, acc)) = pending.pop_first() {
            // b_k = acc / a0 and a0 = ±1
            let bk = acc * a0;
            if bk == 0 {
                continue;
            }
            out.terms.insert(key, bk);
            for &(ka, ca) in &rest {
                if let Some(prod) = self.mul_key(key, ka) {
                    let e = pending.entry(prod).or_insert(0);
                    *e = checked(e.checked_sub(checked(ca.checked_mul(bk))));
                }
            }
        }
        Ok(out)
    }

    /// Substitutes `t → -t`.
    pub fn negate_t(&self) -> TruncSeries {
        let mut out = self.empty_like();
        for (&k, &v) in &self.terms {
            out.terms
                .insert(k, if byte(k, 0) % 2 == 1 { -v } else { v });
        }
        out
    }

    /// Re-expresses the series in a coarser grading obtained by setting
    /// `x_i = q` and/or `t = 1`. Only specialisations that keep the same
    /// truncation variable are allowed.
    pub fn specialise(&self, target: Grading) -> Result<TruncSeries> {
        use Grading::*;
        let ok = matches!(
            (self.grading, target),
            (TX, TX | X | TQ | Q) | (X, X | Q) | (TQ, TQ | Q) | (Q, Q) | (T, T)
        );
        if !ok {
            return Err(Error::Arg(format!(
                "cannot specialise a {} series to {}",
                self.grading.name(),
                target.name()
            )));
        }
        let mut out = TruncSeries::zero(target, self.n, self.order)?;
        for term in self.terms() {
            let key = match self.grading {
                X | TX => out.key_for(term.t, &term.exps),
                _ => out.key_raw(term.t, &term.exps),
            };
            if let Some(k) = key {
                out.add_key(k, term.coeff);
            }
        }
        Ok(out)
    }

    fn key_raw(&self, t: u32, exps: &[u32]) -> Option<Key> {
        let t = if self.grading.has_t() { t } else { 0 };
        let mut key = Key::from(t);
        for (k, &e) in exps.iter().enumerate() {
            key |= Key::from(e) << (8 * (k + 1));
        }
        (self.degree(key) <= self.order).then_some(key)
    }

    /// Reduces to a lower truncation order.
    pub fn truncate(&self, order: u32) -> TruncSeries {
        let mut out = TruncSeries {
            order: order.min(self.order),
            ..self.empty_like()
        };
        for (&k, &v) in &self.terms {
            if out.degree(k) <= out.order {
                out.terms.insert(k, v);
            }
        }
        out
    }

    /// Largest degree present, in the truncation variable.
    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(|&k| self.degree(k)).max()
    }

    pub fn coeff(&self, t: u32, exps: &[u32]) -> i128 {
        let key = match self.grading {
            Grading::X | Grading::TX => self.key_for(t, exps),
            _ => self.key_raw(t, exps),
        };
        key.and_then(|k| self.terms.get(&k).copied()).unwrap_or(0)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.terms.values().all(|&c| c >= 0)
    }

    fn term_of(&self, key: Key, coeff: i128) -> Term {
        Term {
            t: byte(key, 0),
            exps: (1..=self.grading.slots(self.n))
                .map(|k| byte(key, k))
                .collect(),
            coeff,
        }
    }

    /// Terms sorted by degree, then `t`, then exponent vector.
    pub fn terms(&self) -> Vec<Term> {
        let mut out: Vec<(u32, Term)> = self
            .terms
            .iter()
            .map(|(&k, &c)| (self.degree(k), self.term_of(k, c)))
            .collect();
        out.sort_by(|(da, a), (db, b)| da.cmp(db).then(a.t.cmp(&b.t)).then(a.exps.cmp(&b.exps)));
        out.into_iter().map(|(_, t)| t).collect()
    }

    /// Coefficients of a one-variable series by degree, up to the order.
    pub fn coefficient_vector(&self) -> Vec<i128> {
        let mut out = vec![0i128; self.order as usize + 1];
        for (&k, &v) in &self.terms {
            out[self.degree(k) as usize] += v;
        }
        out
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, grading: Grading, term: &Term) -> fmt::Result {
    let mut factors: Vec<String> = Vec::new();
    let pow = |name: String, e: u32| if e == 1 { name } else { format!("{name}^{e}") };
    if term.t > 0 {
        factors.push(pow("t".into(), term.t));
    }
    match grading {
        Grading::X | Grading::TX => {
            for (k, &e) in term.exps.iter().enumerate() {
                if e > 0 {
                    factors.push(pow(format!("x{}", k + 1), e));
                }
            }
        }
        Grading::TQ | Grading::Q => {
            if term.exps[0] > 0 {
                factors.push(pow("q".into(), term.exps[0]));
            }
        }
        Grading::T => {}
    }
    let mag = term.coeff.unsigned_abs();
    if factors.is_empty() {
        write!(f, "{mag}")
    } else if mag == 1 {
        f.write_str(&factors.join("*"))
    } else {
        write!(f, "{mag}*{}", factors.join("*"))
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            f.write_str("0")?;
        }
        for (i, term) in terms.iter().enumerate() {
            match (i, term.coeff < 0) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            write_monomial(f, self.grading, term)?;
        }
        write!(f, " + O({})", self.order + 1)
    }
}

impl fmt::Debug for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "TruncSeries[{}; n={}] {self}",
            self.grading.name(),
            self.n
        )
    }
}

impl Serialize for TruncSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("TruncSeries", 4)?;
        st.serialize_field("grading", &self.grading)?;
        st.serialize_field("variables", &self.grading.slots(self.n))?;
        st.serialize_field("order", &self.order)?;
        st.serialize_field("terms", &self.terms())?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q_series(order: u32) -> TruncSeries {
        TruncSeries::one(Grading::Q, 2, order).unwrap()
    }

    #[test]
    fn geometric_expansion() {
        // 1/((1-q)(1-q^2))
        let s = q_series(5)
            .div_one_minus(0, &[1, 0])
            .div_one_minus(0, &[1, 1]);
        assert_eq!(s.coefficient_vector(), vec![1, 1, 2, 2, 3, 3]);
        assert_eq!(
            s.to_string(),
            "1 + q + 2*q^2 + 2*q^3 + 3*q^4 + 3*q^5 + O(6)"
        );
    }

    #[test]
    fn inverse_of_product() {
        let base = TruncSeries::one(Grading::TX, 2, 6).unwrap();
        let a = base
            .mul_binomial(1, &[1, 0], -1)
            .mul_binomial(1, &[0, 1], -1);
        let inv = a.inverse().unwrap();
        assert_eq!(
            inv,
            base.div_one_minus(1, &[1, 0]).div_one_minus(1, &[0, 1])
        );
        assert_eq!(a.mul(&inv), base);
        assert!(base.scale(2).inverse().is_err());
    }

    #[test]
    fn negate_t_and_specialise() {
        let base = TruncSeries::one(Grading::TX, 2, 4).unwrap();
        let s = base.div_one_minus(1, &[1, 0]);
        let neg = s.negate_t();
        assert_eq!(neg.coeff(1, &[1, 0]), -1);
        assert_eq!(neg.coeff(2, &[2, 0]), 1);
        let q = s.specialise(Grading::Q).unwrap();
        assert_eq!(q.coefficient_vector(), vec![1, 1, 1, 1, 1]);
        assert!(s.specialise(Grading::T).is_err());
        assert!(q.specialise(Grading::X).is_err());
    }

    #[test]
    fn shape_limits() {
        assert!(TruncSeries::zero(Grading::TX, 16, 4).is_err());
        assert!(TruncSeries::zero(Grading::Q, 40, 4).is_ok());
        assert!(TruncSeries::zero(Grading::Q, 4, 256).is_err());
    }

    #[test]
    fn t_grading_truncates_in_t() {
        let s = TruncSeries::one(Grading::T, 3, 3)
            .unwrap()
            .div_one_minus(2, &[1, 1, 0]);
        assert_eq!(s.coefficient_vector(), vec![1, 0, 1, 0]);
    }

    #[test]
    fn json_terms() {
        let s = q_series(2).div_one_minus(0, &[1, 0]);
        let v = serde_json::to_value(&s).unwrap();
        assert_eq!(v["terms"][2]["exps"], serde_json::json!([2]));
        assert_eq!(v["grading"], "q");
    }
}
