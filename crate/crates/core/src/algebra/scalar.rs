use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

/// Exact coefficient field. `BigRational` keeps values in lowest terms with a
/// positive denominator.
pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Scalar {
    Scalar::new(BigInt::from(n), BigInt::from(d))
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn sign(odd: bool) -> Scalar {
    if odd {
        -Scalar::one()
    } else {
        Scalar::one()
    }
}

/// `(-1)^e`.
pub fn minus_one_pow(e: u32) -> Scalar {
    sign(e % 2 == 1)
}

/// `n/d` or `n` when the denominator is one.
pub fn fmt_coeff(c: &Scalar) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

pub fn is_negative(c: &Scalar) -> bool {
    c.is_negative()
}
