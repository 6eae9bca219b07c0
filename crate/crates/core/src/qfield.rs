//! Exact rational scalars and the q-shifted factorial.
//!
//! Every quantity in this crate lives in the field of rationals with
//! arbitrary-precision integer parts: no floats, no rounding, no
//! tolerance. `Rational` wraps a reduced big-integer fraction and
//! serializes as "p/q" (just "p" when the denominator is 1).
//!
//! The q-shifted factorial (q-Pochhammer symbol) is defined for every
//! integer subscript:
//!
//!   (a; q)_n = (1 - a)(1 - a q) ... (1 - a q^(n-1))            for n >= 0
//!   (a; q)_n = 1 / [(1 - a q^-1)(1 - a q^-2) ... (1 - a q^n)]  for n < 0
//!
//! with (a; q)_0 = 1 (empty product). The negative-subscript branch is
//! the unique extension satisfying the shift law
//!
//!   (a; q)_(m+n) = (a; q)_m * (a q^m; q)_n
//!
//! for all integers m, n. That branch divides, so it can hit a pole: if
//! some factor 1 - a q^-k vanishes the symbol has no finite value and
//! evaluation reports `PoleEncountered`. A base q = 0 is rejected for
//! negative subscripts (`InvalidBase`), since q^-k is undefined there.
//!
//! # Edge cases
//! * nonnegative subscripts never fail: zero factors simply make the
//!   product 0, which is a legitimate value (numerators vanish all the
//!   time in the matrix formulas);
//! * division is only available as `checked_div` / `recip`, never as a
//!   silent operator, so every division by zero is a detected error.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::Result;

// ---------------------------------------------------------------------------
// Rational
// ---------------------------------------------------------------------------

/// Exact rational number, always stored in lowest terms with a positive
/// denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    /// Builds num/den from machine integers. Errors on a zero denominator.
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::ZeroDenominator);
        }
        Ok(Rational(BigRational::new(BigInt::from(num), BigInt::from(den))))
    }

    /// Builds num/den from big integers. Errors on a zero denominator.
    pub fn from_big(num: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Rational(BigRational::new(num, den)))
    }

    /// The integer n as a rational.
    pub fn from_int(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// Numerator of the reduced fraction (sign lives here).
    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    /// Denominator of the reduced fraction; always positive.
    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    /// Multiplicative inverse; errors on zero.
    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(self.0.recip()))
    }

    /// Exact division; errors on a zero divisor.
    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(&self.0 / &rhs.0))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Parses "p" or "p/q" with an optional leading minus on p; rejects
    /// zero denominators, signs on q, whitespace, and anything else.
    fn from_str(s: &str) -> Result<Self> {
        fn digits_ok(part: &str) -> bool {
            !part.is_empty() && part.bytes().all(|b| b.is_ascii_digit())
        }
        let bad = || Error::Parse {
            detail: format!("malformed rational {s:?} (expected p or p/q)"),
        };
        let (num_str, den_str) = match s.split_once('/') {
            Some((n, d)) => (n, Some(d)),
            None => (s, None),
        };
        let unsigned = num_str.strip_prefix('-').unwrap_or(num_str);
        if !digits_ok(unsigned) {
            return Err(bad());
        }
        let num = BigInt::from_str(num_str).map_err(|_| bad())?;
        let den = match den_str {
            None => BigInt::one(),
            Some(d) if digits_ok(d) => BigInt::from_str(d).map_err(|_| bad())?,
            Some(_) => return Err(bad()),
        };
        Rational::from_big(num, den)
    }
}

macro_rules! rational_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0 $op rhs.0)
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0 $op &rhs.0)
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(&self.0 $op rhs.0)
            }
        }
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(&self.0 $op &rhs.0)
            }
        }
    };
}

rational_binop!(Add, add, +);
rational_binop!(Sub, sub, -);
rational_binop!(Mul, mul, *);

macro_rules! rational_assign {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&Rational> for Rational {
            fn $method(&mut self, rhs: &Rational) {
                self.0 $op &rhs.0;
            }
        }
        impl $trait<Rational> for Rational {
            fn $method(&mut self, rhs: Rational) {
                self.0 $op rhs.0;
            }
        }
    };
}

rational_assign!(AddAssign, add_assign, +=);
rational_assign!(SubAssign, sub_assign, -=);
rational_assign!(MulAssign, mul_assign, *=);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

// ---------------------------------------------------------------------------
// Powers and the q-shifted factorial
// ---------------------------------------------------------------------------

/// Exact q^e for any integer exponent. Errors with `InvalidBase` on
/// 0 to a negative power.
pub fn qpow(q: &Rational, e: i64) -> Result<Rational> {
    if e == 0 {
        return Ok(Rational::one());
    }
    if e < 0 && q.is_zero() {
        return Err(Error::InvalidBase {
            detail: format!("0^{e}"),
        });
    }
    let mag = u32::try_from(e.unsigned_abs()).map_err(|_| Error::DomainError {
        detail: format!("exponent {e} out of range"),
    })?;
    let num = q.numer().pow(mag);
    let den = q.denom().pow(mag);
    if e > 0 {
        Rational::from_big(num, den)
    } else {
        Rational::from_big(den, num)
    }
}

/// (a; q)_n for any integer subscript n.
///
/// Nonnegative subscripts always evaluate (a zero factor just makes the
/// value 0). A negative subscript takes reciprocals, so it errors with
/// `PoleEncountered` when some factor 1 - a q^-k vanishes, and with
/// `InvalidBase` when q = 0.
pub fn qpoch(a: &Rational, q: &Rational, n: i64) -> Result<Rational> {
    if n >= 0 {
        let mut acc = Rational::one();
        let mut shifted = a.clone();
        for _ in 0..n {
            acc *= Rational::one() - &shifted;
            shifted *= q;
        }
        return Ok(acc);
    }
    if q.is_zero() {
        return Err(Error::InvalidBase {
            detail: format!("q = 0 with negative subscript {n}"),
        });
    }
    let qinv = q.recip()?;
    let mut acc = Rational::one();
    let mut shifted = a.clone();
    for k in 1..=(-n) {
        shifted *= &qinv;
        let factor = Rational::one() - &shifted;
        if factor.is_zero() {
            return Err(Error::PoleEncountered {
                factor: format!("(1 - a*q^-k) = 0 for a={a}, q={q}, k={k} in (a; q)_{n}"),
            });
        }
        acc *= factor;
    }
    acc.recip()
}

/// m(m-1)/2, the exponent of q attached to the sign in the inverse
/// matrix entries. Only called with m >= 0 (on-support weight gaps).
pub fn choose2(m: i64) -> i64 {
    debug_assert!(m >= 0);
    m * (m - 1) / 2
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;

    fn r(num: i64, den: i64) -> Rational {
        Rational::new(num, den).unwrap()
    }

    #[test]
    fn display_and_parse_roundtrip() {
        for s in ["0", "1", "-1", "3/4", "-3/4", "12", "-11/6", "40000/14553"] {
            let v: Rational = s.parse().unwrap();
            assert_eq!(v.to_string(), s);
        }
    }

    #[test]
    fn parse_reduces_to_lowest_terms() {
        assert_eq!("4/6".parse::<Rational>().unwrap(), r(2, 3));
        assert_eq!("-4/6".parse::<Rational>().unwrap(), r(-2, 3));
        assert_eq!("7/1".parse::<Rational>().unwrap().to_string(), "7");
    }

    #[test]
    fn parse_rejects_malformed_input() {
        for s in ["", "/", "1/", "/2", "1/0", "1.5", "+3", "1/-2", "a", " 1", "1 /2", "--1"] {
            assert!(s.parse::<Rational>().is_err(), "accepted {s:?}");
        }
        assert_eq!("1/0".parse::<Rational>().unwrap_err(), Error::ZeroDenominator);
    }

    #[test]
    fn arithmetic_is_exact() {
        assert_eq!(r(1, 3) + r(1, 6), r(1, 2));
        assert_eq!(r(1, 3) - r(1, 2), r(-1, 6));
        assert_eq!(r(2, 3) * r(3, 4), r(1, 2));
        assert_eq!(r(1, 3).checked_div(&r(2, 1)).unwrap(), r(1, 6));
        assert_eq!(
            r(1, 3).checked_div(&Rational::zero()).unwrap_err(),
            Error::DivisionByZero
        );
        assert_eq!(Rational::zero().recip().unwrap_err(), Error::DivisionByZero);
    }

    #[test]
    fn qpow_examples() {
        let half = r(1, 2);
        assert_eq!(qpow(&half, 0).unwrap(), Rational::one());
        assert_eq!(qpow(&half, 3).unwrap(), r(1, 8));
        assert_eq!(qpow(&half, -2).unwrap(), r(4, 1));
        assert_eq!(qpow(&r(-2, 3), 2).unwrap(), r(4, 9));
        assert_eq!(qpow(&r(-2, 3), -1).unwrap(), r(-3, 2));
        assert!(matches!(
            qpow(&Rational::zero(), -1).unwrap_err(),
            Error::InvalidBase { .. }
        ));
        assert_eq!(qpow(&Rational::zero(), 0).unwrap(), Rational::one());
    }

    #[test]
    fn qpoch_zero_subscript_is_one() {
        assert_eq!(qpoch(&r(7, 11), &r(3, 5), 0).unwrap(), Rational::one());
    }

    #[test]
    fn qpoch_positive_subscript() {
        // (1/3; 1/2)_2 = (1 - 1/3)(1 - 1/6) = 5/9
        assert_eq!(qpoch(&r(1, 3), &r(1, 2), 2).unwrap(), r(5, 9));
        // zero factor in a nonnegative product is a value, not an error
        assert_eq!(qpoch(&Rational::one(), &r(1, 2), 3).unwrap(), Rational::zero());
    }

    #[test]
    fn qpoch_negative_subscript() {
        // (1/3; 1/2)_{-1} = 1/(1 - (1/3)*2) = 3
        assert_eq!(qpoch(&r(1, 3), &r(1, 2), -1).unwrap(), r(3, 1));
        // (1/2; 1/2)_{-1} hits the zero factor 1 - (1/2)*2
        assert!(matches!(
            qpoch(&r(1, 2), &r(1, 2), -1).unwrap_err(),
            Error::PoleEncountered { .. }
        ));
        assert!(matches!(
            qpoch(&r(1, 3), &Rational::zero(), -2).unwrap_err(),
            Error::InvalidBase { .. }
        ));
    }

    #[test]
    fn qpoch_shift_law_spot_checks() {
        // (a; q)_(m+n) = (a; q)_m * (a q^m; q)_n on a few mixed-sign pairs
        let a = r(2, 7);
        let q = r(-3, 5);
        for (m, n) in [(2i64, 3i64), (3, -2), (-2, 4), (-1, -2), (0, -3)] {
            let lhs = qpoch(&a, &q, m + n).unwrap();
            let shifted = &a * qpow(&q, m).unwrap();
            let rhs = qpoch(&a, &q, m).unwrap() * qpoch(&shifted, &q, n).unwrap();
            assert_eq!(lhs, rhs, "m={m} n={n}");
        }
    }

    #[test]
    fn choose2_values() {
        assert_eq!(choose2(0), 0);
        assert_eq!(choose2(1), 0);
        assert_eq!(choose2(2), 1);
        assert_eq!(choose2(5), 10);
    }
}
