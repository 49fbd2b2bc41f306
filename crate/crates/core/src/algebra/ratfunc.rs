//! Rational functions in `(u1, s)` and restricted values `c * u^k`.
//!
//! Denominators are kept as a product of primitive linear forms `p*u1 + q*s`
//! times a residual polynomial. Every denominator arising from the graph sums
//! is a product of linear forms, so the residual stays `1` in practice and sums
//! of many contributions use the least common multiple of the factored parts.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::{Mono2, Poly2};
use super::scalar::{fmt_coeff, Scalar};
use super::AlgebraError;

/// Primitive integer linear form `p*u1 + q*s`, first nonzero coefficient positive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinearForm {
    pub p: i64,
    pub q: i64,
}

impl LinearForm {
    pub const U1: LinearForm = LinearForm { p: 1, q: 0 };
    pub const S: LinearForm = LinearForm { p: 0, q: 1 };

    /// Splits `p*u1 + q*s` into `factor * L` with `L` primitive.
    pub fn normalize(p: &Scalar, q: &Scalar) -> Option<(Scalar, LinearForm)> {
        if p.is_zero() && q.is_zero() {
            return None;
        }
        let l = p.denom().lcm(q.denom());
        let pi = p.numer() * (&l / p.denom());
        let qi = q.numer() * (&l / q.denom());
        let mut g = pi.gcd(&qi);
        let lead_negative = if pi.is_zero() {
            qi.is_negative()
        } else {
            pi.is_negative()
        };
        if lead_negative {
            g = -g;
        }
        let form = LinearForm {
            p: (&pi / &g).to_i64()?,
            q: (&qi / &g).to_i64()?,
        };
        Some((Scalar::new(g, l), form))
    }

    pub fn to_poly(self) -> Poly2 {
        Poly2::linear(Scalar::from_integer(self.p.into()), Scalar::from_integer(self.q.into()))
    }

    fn p_scalar(self) -> Scalar {
        Scalar::from_integer(self.p.into())
    }

    fn q_scalar(self) -> Scalar {
        Scalar::from_integer(self.q.into())
    }
}

/// Element of `Q(u1, u2)` written in the variables `u1` and `s = u1 + u2`.
///
/// The value is `num / (prod L^e * rest)`. `rest` has leading coefficient one.
#[derive(Clone, Debug)]
pub struct RatFunc2 {
    num: Poly2,
    den: BTreeMap<LinearForm, u32>,
    rest: Poly2,
}

impl Default for RatFunc2 {
    fn default() -> Self {
        RatFunc2::zero()
    }
}

impl RatFunc2 {
    pub fn zero() -> Self {
        RatFunc2 {
            num: Poly2::zero(),
            den: BTreeMap::new(),
            rest: Poly2::one(),
        }
    }

    pub fn one() -> Self {
        RatFunc2::from_poly(Poly2::one())
    }

    pub fn from_poly(num: Poly2) -> Self {
        RatFunc2 {
            num,
            den: BTreeMap::new(),
            rest: Poly2::one(),
        }
    }

    pub fn scalar(c: Scalar) -> Self {
        RatFunc2::from_poly(Poly2::constant(c))
    }

    pub fn from_int(n: i64) -> Self {
        RatFunc2::scalar(Scalar::from_integer(n.into()))
    }

    pub fn u1() -> Self {
        RatFunc2::from_poly(Poly2::u1())
    }

    pub fn u2() -> Self {
        RatFunc2::from_poly(Poly2::u2())
    }

    pub fn s() -> Self {
        RatFunc2::from_poly(Poly2::s())
    }

    /// `c * u1^k` for any integer `k`.
    pub fn u1_power(c: Scalar, k: i64) -> Self {
        if c.is_zero() {
            return RatFunc2::zero();
        }
        if k >= 0 {
            RatFunc2::from_poly(Poly2::monomial(c, k as u32, 0))
        } else {
            let mut den = BTreeMap::new();
            den.insert(LinearForm::U1, (-k) as u32);
            RatFunc2 {
                num: Poly2::constant(c),
                den,
                rest: Poly2::one(),
            }
        }
    }

    /// Builds `num / den` for polynomial inputs.
    pub fn from_parts(num: Poly2, den: Poly2) -> Result<Self, AlgebraError> {
        RatFunc2::from_poly(num).checked_div(&RatFunc2::from_poly(den))
    }

    pub fn numerator(&self) -> &Poly2 {
        &self.num
    }

    /// Expanded denominator (before positive normalization).
    pub fn denominator(&self) -> Poly2 {
        let mut out = self.rest.clone();
        for (l, e) in &self.den {
            out = &out * &l.to_poly().pow(*e);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.denominator()
    }

    /// `s`-adic valuation of the numerator.
    pub fn s_val_num(&self) -> Option<u32> {
        self.num.s_valuation()
    }

    /// `s`-adic valuation of the denominator.
    pub fn s_val_den(&self) -> u32 {
        self.den.get(&LinearForm::S).copied().unwrap_or(0) + self.rest.s_valuation().unwrap_or(0)
    }

    /// Order of vanishing along `s = 0`.
    pub fn s_valuation(&self) -> Result<i64, AlgebraError> {
        let num = self.s_val_num().ok_or(AlgebraError::ZeroValuation)?;
        Ok(num as i64 - self.s_val_den() as i64)
    }

    /// `2 * (deg num - deg den)` when numerator and denominator are homogeneous.
    pub fn homogeneous_degree(&self) -> Result<i64, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::ZeroValuation);
        }
        let num = self.num.homogeneous_degree().ok_or(AlgebraError::Inhomogeneous)?;
        let rest = self.rest.homogeneous_degree().ok_or(AlgebraError::Inhomogeneous)?;
        let linear: u32 = self.den.values().sum();
        Ok(2 * (num as i64 - linear as i64 - rest as i64))
    }

    /// The value at `u1 + u2 = 0`, `u1 = u`.
    pub fn restrict_antidiagonal(&self) -> Result<MonoU, AlgebraError> {
        if self.is_zero() {
            return Ok(MonoU::zero());
        }
        let v = self.s_valuation()?;
        if v < 0 {
            return Err(AlgebraError::PoleOnAntidiagonal { valuation: v });
        }
        if v > 0 {
            return Ok(MonoU::zero());
        }
        let num_s = self.num.s_valuation().unwrap_or(0);
        let num0 = self.num.div_monomial(0, num_s).at_s_zero();
        let rest_s = self.rest.s_valuation().unwrap_or(0);
        let mut den0 = self.rest.div_monomial(0, rest_s).at_s_zero();
        for (l, e) in &self.den {
            if *l == LinearForm::S {
                continue;
            }
            den0 = &den0 * &Poly2::monomial(l.p_scalar(), 1, 0).pow(*e);
        }
        let (nm, nc) = single_term(&num0)?;
        let (dm, dc) = single_term(&den0)?;
        Ok(MonoU::new(nc / dc, nm.u1 as i64 - dm.u1 as i64))
    }

    /// Exchange `u1 <-> u2`, i.e. `u1 -> s - u1` with `s` fixed.
    pub fn swap_u1_u2(&self) -> Self {
        let mut num = self.num.swap_u1_u2();
        let mut den = BTreeMap::new();
        let mut scale = Scalar::one();
        for (l, e) in &self.den {
            let p = -l.p_scalar();
            let q = l.p_scalar() + l.q_scalar();
            let (factor, form) = LinearForm::normalize(&p, &q).expect("nonzero linear form");
            scale *= num_traits::pow(factor, *e as usize);
            *den.entry(form).or_insert(0) += *e;
        }
        num = num.scale(&(Scalar::one() / scale));
        RatFunc2 {
            num,
            den,
            rest: self.rest.swap_u1_u2(),
        }
        .normalized()
    }

    pub fn checked_inv(&self) -> Result<Self, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        let (c, factors, leftover) = factor_linear(&self.num);
        let mut num = self.rest.scale(&(Scalar::one() / c));
        for (l, e) in &self.den {
            num = &num * &l.to_poly().pow(*e);
        }
        Ok(RatFunc2 {
            num,
            den: factors,
            rest: leftover,
        }
        .normalized())
    }

    pub fn checked_div(&self, rhs: &RatFunc2) -> Result<Self, AlgebraError> {
        Ok(self * &rhs.checked_inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self, AlgebraError> {
        if e < 0 {
            return self.checked_inv()?.pow(-e);
        }
        let mut out = RatFunc2::one();
        for _ in 0..e {
            out = &out * self;
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return RatFunc2::zero();
        }
        RatFunc2 {
            num: self.num.scale(c),
            den: self.den.clone(),
            rest: self.rest.clone(),
        }
    }

    /// Exact equality by cross-multiplication of numerators and denominators.
    pub fn exact_eq(&self, other: &RatFunc2) -> bool {
        let lhs = &self.num * &other.denominator();
        let rhs = &other.num * &self.denominator();
        lhs == rhs
    }

    /// Numerical evaluation at a rational point (test oracle). `None` at a pole.
    pub fn eval(&self, u1: &Scalar, s: &Scalar) -> Option<Scalar> {
        let d = self.denominator().eval(u1, s);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(u1, s) / d)
    }

    /// `"(num)/(den)"` with the denominator scaled to leading coefficient one.
    pub fn canonical_string(&self) -> String {
        let den = self.denominator();
        let lc = den.leading().map(|(_, c)| c.clone()).unwrap_or_else(Scalar::one);
        let inv = Scalar::one() / lc;
        format!("({})/({})", self.num.scale(&inv), den.scale(&inv))
    }

    fn normalized(mut self) -> Self {
        if self.num.is_zero() {
            return RatFunc2::zero();
        }
        if let Some((_, lc)) = self.rest.leading() {
            if !lc.is_one() {
                let inv = Scalar::one() / lc.clone();
                self.rest = self.rest.scale(&inv);
                self.num = self.num.scale(&inv);
            }
        }
        let mut den = BTreeMap::new();
        for (l, e) in std::mem::take(&mut self.den) {
            let mut e = e;
            if l == LinearForm::S {
                let k = self.num.s_valuation().unwrap_or(0).min(e);
                self.num = self.num.div_monomial(0, k);
                e -= k;
            } else if l == LinearForm::U1 {
                let k = self.num.u1_valuation().unwrap_or(0).min(e);
                self.num = self.num.div_monomial(k, 0);
                e -= k;
            } else {
                while e > 0 {
                    match self.num.div_linear(&l.p_scalar(), &l.q_scalar()) {
                        Some(q) => {
                            self.num = q;
                            e -= 1;
                        }
                        None => break,
                    }
                }
            }
            if e > 0 {
                den.insert(l, e);
            }
        }
        self.den = den;
        self
    }
}

/// Splits a polynomial into `c * prod L^e * leftover`.
fn factor_linear(p: &Poly2) -> (Scalar, BTreeMap<LinearForm, u32>, Poly2) {
    let mut factors = BTreeMap::new();
    let a = p.u1_valuation().unwrap_or(0);
    let b = p.s_valuation().unwrap_or(0);
    if a > 0 {
        factors.insert(LinearForm::U1, a);
    }
    if b > 0 {
        factors.insert(LinearForm::S, b);
    }
    let q = p.div_monomial(a, b);
    if let Some(c) = q.as_constant() {
        return (c, factors, Poly2::one());
    }
    if q.homogeneous_degree() == Some(1) {
        let mut pc = Scalar::zero();
        let mut qc = Scalar::zero();
        for (m, c) in q.terms() {
            if m.u1 == 1 {
                pc = c.clone();
            } else {
                qc = c.clone();
            }
        }
        let (factor, form) = LinearForm::normalize(&pc, &qc).expect("nonzero linear part");
        *factors.entry(form).or_insert(0) += 1;
        return (factor, factors, Poly2::one());
    }
    let lc = q.leading().map(|(_, c)| c.clone()).expect("nonzero");
    let leftover = q.scale(&(Scalar::one() / &lc));
    (lc, factors, leftover)
}

fn single_term(p: &Poly2) -> Result<(Mono2, Scalar), AlgebraError> {
    let mut it = p.terms();
    match (it.next(), it.next()) {
        (Some((m, c)), None) => Ok((*m, c.clone())),
        (None, _) => Err(AlgebraError::PoleOnAntidiagonal { valuation: 0 }),
        _ => Err(AlgebraError::NotMonomial {
            residue: p.to_string(),
        }),
    }
}

impl Add for &RatFunc2 {
    type Output = RatFunc2;
    fn add(self, rhs: &RatFunc2) -> RatFunc2 {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let mut den = self.den.clone();
        for (l, e) in &rhs.den {
            let slot = den.entry(*l).or_insert(0);
            *slot = (*slot).max(*e);
        }
        let lift = |f: &RatFunc2| {
            let mut out = f.num.clone();
            for (l, e) in &den {
                let have = f.den.get(l).copied().unwrap_or(0);
                if *e > have {
                    out = &out * &l.to_poly().pow(e - have);
                }
            }
            out
        };
        let (num, rest) = if self.rest == rhs.rest {
            (&lift(self) + &lift(rhs), self.rest.clone())
        } else {
            (
                &(&lift(self) * &rhs.rest) + &(&lift(rhs) * &self.rest),
                &self.rest * &rhs.rest,
            )
        };
        RatFunc2 { num, den, rest }.normalized()
    }
}

impl Neg for &RatFunc2 {
    type Output = RatFunc2;
    fn neg(self) -> RatFunc2 {
        RatFunc2 {
            num: -&self.num,
            den: self.den.clone(),
            rest: self.rest.clone(),
        }
    }
}

impl Sub for &RatFunc2 {
    type Output = RatFunc2;
    fn sub(self, rhs: &RatFunc2) -> RatFunc2 {
        self + &(-rhs)
    }
}

impl Mul for &RatFunc2 {
    type Output = RatFunc2;
    fn mul(self, rhs: &RatFunc2) -> RatFunc2 {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc2::zero();
        }
        let mut den = self.den.clone();
        for (l, e) in &rhs.den {
            *den.entry(*l).or_insert(0) += *e;
        }
        RatFunc2 {
            num: &self.num * &rhs.num,
            den,
            rest: &self.rest * &rhs.rest,
        }
        .normalized()
    }
}

impl PartialEq for RatFunc2 {
    fn eq(&self, other: &Self) -> bool {
        (self - other).is_zero()
    }
}

impl fmt::Display for RatFunc2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_string())
    }
}

/// A restricted value `coeff * u^power`. Zero is stored as `0 * u^0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonoU {
    coeff: Scalar,
    power: i64,
}

impl MonoU {
    pub fn new(coeff: Scalar, power: i64) -> Self {
        if coeff.is_zero() {
            MonoU::zero()
        } else {
            MonoU { coeff, power }
        }
    }

    pub fn zero() -> Self {
        MonoU {
            coeff: Scalar::zero(),
            power: 0,
        }
    }

    pub fn one() -> Self {
        MonoU::new(Scalar::one(), 0)
    }

    pub fn coeff(&self) -> &Scalar {
        &self.coeff
    }

    pub fn power(&self) -> i64 {
        self.power
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    /// Sum of two monomials; fails when both are nonzero with different powers.
    pub fn checked_add(&self, rhs: &MonoU) -> Result<MonoU, AlgebraError> {
        if self.is_zero() {
            return Ok(rhs.clone());
        }
        if rhs.is_zero() {
            return Ok(self.clone());
        }
        if self.power != rhs.power {
            return Err(AlgebraError::NotMonomial {
                residue: format!("{self} + {rhs}"),
            });
        }
        Ok(MonoU::new(&self.coeff + &rhs.coeff, self.power))
    }

    pub fn scale(&self, c: &Scalar) -> MonoU {
        MonoU::new(&self.coeff * c, self.power)
    }

    /// Embeds `u` as `u1`.
    pub fn to_ratfunc(&self) -> RatFunc2 {
        RatFunc2::u1_power(self.coeff.clone(), self.power)
    }

    pub fn canonical_string(&self) -> String {
        if self.is_zero() {
            "0".to_string()
        } else {
            format!("{} * u^{}", fmt_coeff(&self.coeff), self.power)
        }
    }

    /// Parses the `canonical_string` form.
    pub fn parse(text: &str) -> Option<MonoU> {
        let text = text.trim();
        if text == "0" {
            return Some(MonoU::zero());
        }
        let (c, p) = text.split_once(" * u^")?;
        let coeff = match c.split_once('/') {
            Some((n, d)) => Scalar::new(n.parse::<BigInt>().ok()?, d.parse::<BigInt>().ok()?),
            None => Scalar::from_integer(c.parse::<BigInt>().ok()?),
        };
        Some(MonoU::new(coeff, p.parse().ok()?))
    }
}

impl Mul for &MonoU {
    type Output = MonoU;
    fn mul(self, rhs: &MonoU) -> MonoU {
        MonoU::new(&self.coeff * &rhs.coeff, self.power + rhs.power)
    }
}

impl Neg for &MonoU {
    type Output = MonoU;
    fn neg(self) -> MonoU {
        MonoU::new(-self.coeff.clone(), self.power)
    }
}

impl fmt::Display for MonoU {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_string())
    }
}
