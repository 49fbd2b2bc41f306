//! Sparse polynomials in `u1` and `s = u1 + u2` with exact rational coefficients.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::scalar::{fmt_coeff, Scalar};

/// Exponent pair `u1^u1 * s^s`.
///
/// Ordered so that a `BTreeMap` iterates in canonical term order: total degree
/// descending, then `u1`-exponent descending.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Mono2 {
    pub u1: u32,
    pub s: u32,
}

impl Mono2 {
    pub const ONE: Mono2 = Mono2 { u1: 0, s: 0 };

    pub fn new(u1: u32, s: u32) -> Self {
        Mono2 { u1, s }
    }

    pub fn total(self) -> u32 {
        self.u1 + self.s
    }
}

impl Ord for Mono2 {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .total()
            .cmp(&self.total())
            .then_with(|| other.u1.cmp(&self.u1))
    }
}

impl PartialOrd for Mono2 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial in `(u1, s)`. Never stores zero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly2 {
    terms: BTreeMap<Mono2, Scalar>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Poly2::default()
    }

    pub fn one() -> Self {
        Poly2::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        Poly2::monomial(c, 0, 0)
    }

    pub fn monomial(c: Scalar, u1: u32, s: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Mono2::new(u1, s), c);
        }
        Poly2 { terms }
    }

    pub fn u1() -> Self {
        Poly2::monomial(Scalar::one(), 1, 0)
    }

    pub fn s() -> Self {
        Poly2::monomial(Scalar::one(), 0, 1)
    }

    /// `u2 = s - u1`.
    pub fn u2() -> Self {
        &Poly2::s() - &Poly2::u1()
    }

    /// `p*u1 + q*s`.
    pub fn linear(p: Scalar, q: Scalar) -> Self {
        let mut out = Poly2::monomial(p, 1, 0);
        out.add_term(Mono2::new(0, 1), q);
        out
    }

    pub fn from_terms<I: IntoIterator<Item = (Mono2, Scalar)>>(iter: I) -> Self {
        let mut out = Poly2::zero();
        for (m, c) in iter {
            out.add_term(m, c);
        }
        out
    }

    pub fn add_term(&mut self, m: Mono2, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&Mono2::ONE).is_some_and(|c| c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Mono2, &Scalar)> {
        self.terms.iter()
    }

    pub fn leading(&self) -> Option<(&Mono2, &Scalar)> {
        self.terms.iter().next()
    }

    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => self.terms.get(&Mono2::ONE).cloned(),
            _ => None,
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Poly2::zero();
        }
        Poly2 {
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, u1: u32, s: u32) -> Self {
        Poly2 {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (Mono2::new(m.u1 + u1, m.s + s), v.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Poly2::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                out = &out * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        out
    }

    /// Largest `k` with `s^k` dividing the polynomial. `None` for zero.
    pub fn s_valuation(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.s).min()
    }

    /// Largest `k` with `u1^k` dividing the polynomial. `None` for zero.
    pub fn u1_valuation(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.u1).min()
    }

    /// Divides by `u1^a s^b`; caller guarantees divisibility.
    pub fn div_monomial(&self, a: u32, b: u32) -> Self {
        Poly2 {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| {
                    debug_assert!(m.u1 >= a && m.s >= b);
                    (Mono2::new(m.u1 - a, m.s - b), v.clone())
                })
                .collect(),
        }
    }

    /// Restriction to `s = 0`: keeps the terms free of `s`.
    pub fn at_s_zero(&self) -> Self {
        Poly2 {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.s == 0)
                .map(|(m, v)| (*m, v.clone()))
                .collect(),
        }
    }

    /// Total degree if every term has the same total degree.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|m| m.total());
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// Substitution `u1 -> s - u1`, i.e. the exchange `u1 <-> u2`.
    pub fn swap_u1_u2(&self) -> Self {
        let u2 = Poly2::u2();
        let mut out = Poly2::zero();
        for (m, c) in &self.terms {
            let t = u2.pow(m.u1).mul_monomial(0, m.s).scale(c);
            out = &out + &t;
        }
        out
    }

    /// Exact division by `p*u1 + q*s`; `None` when the division leaves a remainder.
    pub fn div_linear(&self, p: &Scalar, q: &Scalar) -> Option<Self> {
        if self.is_zero() {
            return Some(Poly2::zero());
        }
        if p.is_zero() {
            if q.is_zero() {
                return None;
            }
            if self.s_valuation()? == 0 {
                return None;
            }
            return Some(self.div_monomial(0, 1).scale(&(Scalar::one() / q)));
        }
        // Long division in Q[s][u1]: the divisor has scalar leading coefficient p.
        let top = self.terms.keys().map(|m| m.u1).max()? as usize;
        let mut rows: Vec<BTreeMap<u32, Scalar>> = vec![BTreeMap::new(); top + 1];
        for (m, c) in &self.terms {
            rows[m.u1 as usize].insert(m.s, c.clone());
        }
        let mut quotient = Poly2::zero();
        let inv_p = Scalar::one() / p;
        for i in (1..=top).rev() {
            let row = std::mem::take(&mut rows[i]);
            for (sj, c) in row {
                let b = c * &inv_p;
                // subtract q*s*b*u1^(i-1) from row i-1
                let shift = -(q * &b);
                if !shift.is_zero() {
                    let slot = rows[i - 1].entry(sj + 1).or_insert_with(Scalar::zero);
                    *slot += shift;
                    if slot.is_zero() {
                        rows[i - 1].remove(&(sj + 1));
                    }
                }
                quotient.add_term(Mono2::new(i as u32 - 1, sj), b);
            }
        }
        rows[0].is_empty().then_some(quotient)
    }

    /// Evaluates at rational points, used by tests as an independent check.
    pub fn eval(&self, u1: &Scalar, s: &Scalar) -> Scalar {
        self.terms.iter().fold(Scalar::zero(), |acc, (m, c)| {
            acc + c * pow_scalar(u1, m.u1) * pow_scalar(s, m.s)
        })
    }
}

fn pow_scalar(x: &Scalar, e: u32) -> Scalar {
    num_traits::pow(x.clone(), e as usize)
}

impl Add for &Poly2 {
    type Output = Poly2;
    fn add(self, rhs: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl Sub for &Poly2 {
    type Output = Poly2;
    fn sub(self, rhs: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }
}

impl Mul for &Poly2 {
    type Output = Poly2;
    fn mul(self, rhs: &Poly2) -> Poly2 {
        let mut out = Poly2::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(Mono2::new(ma.u1 + mb.u1, ma.s + mb.s), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Poly2 {
    type Output = Poly2;
    fn neg(self) -> Poly2 {
        Poly2 {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

fn fmt_monomial(m: &Mono2) -> String {
    let mut parts = Vec::new();
    match m.u1 {
        0 => {}
        1 => parts.push("u1".to_string()),
        e => parts.push(format!("u1^{e}")),
    }
    match m.s {
        0 => {}
        1 => parts.push("s".to_string()),
        e => parts.push(format!("s^{e}")),
    }
    parts.join("*")
}

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            let mono = fmt_monomial(m);
            if mono.is_empty() {
                f.write_str(&fmt_coeff(&abs))?;
            } else if abs.is_one() {
                f.write_str(&mono)?;
            } else {
                write!(f, "{}*{}", fmt_coeff(&abs), mono)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::int;

    #[test]
    fn canonical_order_and_format() {
        let p = Poly2::from_terms([
            (Mono2::new(0, 0), int(3)),
            (Mono2::new(1, 1), int(-1)),
            (Mono2::new(2, 0), int(1)),
            (Mono2::new(0, 2), Scalar::new(1.into(), 2.into())),
        ]);
        assert_eq!(p.to_string(), "u1^2 - u1*s + 1/2*s^2 + 3");
    }

    #[test]
    fn u2_is_s_minus_u1() {
        assert_eq!(Poly2::u2().to_string(), "-u1 + s");
        let u1u2 = &Poly2::u1() * &Poly2::u2();
        assert_eq!(u1u2.homogeneous_degree(), Some(2));
    }

    #[test]
    fn linear_division() {
        // (u1 + 2s)(3u1 - s) / (u1 + 2s)
        let a = Poly2::linear(int(1), int(2));
        let b = Poly2::linear(int(3), int(-1));
        let prod = &a * &b;
        assert_eq!(prod.div_linear(&int(1), &int(2)), Some(b.clone()));
        assert_eq!(prod.div_linear(&int(0), &int(1)), None);
        assert_eq!(prod.div_linear(&int(1), &int(1)), None);
        let sb = &b * &Poly2::s();
        assert_eq!(sb.div_linear(&int(0), &int(1)), Some(b));
    }

    #[test]
    fn swap_is_involution() {
        let p = Poly2::from_terms([(Mono2::new(2, 1), int(5)), (Mono2::new(0, 3), int(-2))]);
        assert_eq!(p.swap_u1_u2().swap_u1_u2(), p);
    }
}
