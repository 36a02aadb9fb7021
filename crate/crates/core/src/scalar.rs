//! Gaussian rationals `a + b·i` with arbitrary-precision rational parts.
//!
//! This is the ground field for every symbolic computation in the crate. Both
//! parts are kept in lowest terms (positive denominator) by the underlying
//! rational type, so structural equality is value equality.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use malachite_base::num::arithmetic::traits::{Reciprocal, Sign};
use malachite_base::num::basic::traits::{One, Zero};
use malachite_base::num::conversion::traits::RoundingFrom;
use malachite_base::rounding_modes::RoundingMode;
use malachite_q::Rational;
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("invalid rational literal `{0}`")]
pub struct ParseScalarError(pub String);

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    re: Rational,
    im: Rational,
}

impl Scalar {
    pub const ZERO: Scalar = Scalar { re: Rational::ZERO, im: Rational::ZERO };
    pub const ONE: Scalar = Scalar { re: Rational::ONE, im: Rational::ZERO };

    pub fn new(re: Rational, im: Rational) -> Self {
        Scalar { re, im }
    }

    pub fn zero() -> Self {
        Self::ZERO
    }

    pub fn one() -> Self {
        Self::ONE
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Scalar { re: Rational::ZERO, im: Rational::ONE }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar { re: Rational::from(n), im: Rational::ZERO }
    }

    /// `num/den`; panics when `den == 0`.
    pub fn from_frac(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Scalar { re: Rational::from_signeds(num, den), im: Rational::ZERO }
    }

    pub fn gaussian(re: i64, im: i64) -> Self {
        Scalar { re: Rational::from(re), im: Rational::from(im) }
    }

    pub fn from_rational(re: Rational) -> Self {
        Scalar { re, im: Rational::ZERO }
    }

    pub fn re(&self) -> &Rational {
        &self.re
    }

    pub fn im(&self) -> &Rational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re == 0u32 && self.im == 0u32
    }

    pub fn is_one(&self) -> bool {
        self.re == 1u32 && self.im == 0u32
    }

    pub fn is_real(&self) -> bool {
        self.im == 0u32
    }

    pub fn conj(&self) -> Self {
        if self.is_real() {
            return self.clone();
        }
        Scalar { re: self.re.clone(), im: -&self.im }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.is_real() {
            return Some(Scalar { re: (&self.re).reciprocal(), im: Rational::ZERO });
        }
        let norm = &self.re * &self.re + &self.im * &self.im;
        Some(Scalar { re: &self.re / &norm, im: -(&self.im / &norm) })
    }

    pub fn checked_div(&self, other: &Scalar) -> Option<Self> {
        other.inv().map(|inv| self * &inv)
    }

    /// `self += a * b` without temporaries on the real fast path.
    pub fn add_mul(&mut self, a: &Scalar, b: &Scalar) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        if a.is_real() && b.is_real() {
            self.re += &a.re * &b.re;
            return;
        }
        let prod = a * b;
        *self += &prod;
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }

    /// Parses `int` or `int/uint` (optionally signed) into a real scalar.
    pub fn parse_rational(text: &str) -> Result<Rational, ParseScalarError> {
        let t = text.trim();
        let err = || ParseScalarError(text.to_string());
        if t.is_empty() {
            return Err(err());
        }
        let parsed = Rational::from_str(t).map_err(|_| err())?;
        Ok(parsed)
    }

    /// Magnitude-like quantity used for pivot preference in float code and reports.
    pub fn abs_f64(&self) -> f64 {
        self.to_complex().norm()
    }
}

pub(crate) fn rational_to_f64(r: &Rational) -> f64 {
    f64::rounding_from(r, RoundingMode::Nearest).0
}

fn fmt_rational(r: &Rational) -> String {
    format!("{r}")
}

impl fmt::Display for Scalar {
    /// Canonical text: `3`, `1/2`, `(-1/2)`, `(2i)`, `(1/2 + 1i)`, `(-1 - 3/4i)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let re_neg = self.re.sign() == std::cmp::Ordering::Less;
        if self.is_real() {
            if re_neg {
                return write!(f, "({})", fmt_rational(&self.re));
            }
            return write!(f, "{}", fmt_rational(&self.re));
        }
        if self.re == 0u32 {
            return write!(f, "({}i)", fmt_rational(&self.im));
        }
        let im_neg = self.im.sign() == std::cmp::Ordering::Less;
        let im_abs = if im_neg { -&self.im } else { self.im.clone() };
        write!(f, "({} {} {}i)", fmt_rational(&self.re), if im_neg { "-" } else { "+" }, fmt_rational(&im_abs))
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::from_rational(r)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        if self.is_real() && rhs.is_real() {
            return Scalar { re: &self.re + &rhs.re, im: Rational::ZERO };
        }
        Scalar { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        if self.is_real() && rhs.is_real() {
            return Scalar { re: &self.re - &rhs.re, im: Rational::ZERO };
        }
        Scalar { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.is_real() && rhs.is_real() {
            return Scalar { re: &self.re * &rhs.re, im: Rational::ZERO };
        }
        let re = &self.re * &rhs.re - &self.im * &rhs.im;
        let im = &self.re * &rhs.im + &self.im * &rhs.re;
        Scalar { re, im }
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    /// Panics on division by zero; use [`Scalar::checked_div`] otherwise.
    fn div(self, rhs: &Scalar) -> Scalar {
        self.checked_div(rhs).expect("division by zero scalar")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: -&self.re, im: -&self.im }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: -self.re, im: -self.im }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.re += &rhs.re;
        if !rhs.is_real() {
            self.im += &rhs.im;
        }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.re -= &rhs.re;
        if !rhs.is_real() {
            self.im -= &rhs.im;
        }
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        if self.is_real() && rhs.is_real() {
            self.re *= &rhs.re;
            return;
        }
        *self = &*self * rhs;
    }
}
