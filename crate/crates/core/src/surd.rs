//! Exact numbers of the form `±√(p/q)`.
//!
//! Every 3-j, 6-j and Clebsch-Gordan coefficient, and every matrix element of
//! a spherical tensor operator in the standard basis, is of this form. The
//! type is closed under multiplication but not under addition, so no `Add`
//! impl is provided.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Mul, Neg};

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Signed square root of a nonnegative rational: `sign · √radicand`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SqrtRational {
    sign: i8,
    radicand: BigRational,
}

impl SqrtRational {
    pub fn zero() -> Self {
        SqrtRational {
            sign: 0,
            radicand: BigRational::zero(),
        }
    }

    pub fn one() -> Self {
        SqrtRational {
            sign: 1,
            radicand: BigRational::one(),
        }
    }

    /// `sign · √radicand`. The sign is ignored when the radicand is zero.
    ///
    /// Panics if `radicand` is negative.
    pub fn new(sign: i8, radicand: BigRational) -> Self {
        assert!(!radicand.is_negative(), "negative radicand {radicand}");
        if radicand.is_zero() || sign == 0 {
            return Self::zero();
        }
        SqrtRational {
            sign: sign.signum(),
            radicand,
        }
    }

    /// `+√r` for a nonnegative rational `r`.
    pub fn sqrt(r: BigRational) -> Self {
        Self::new(1, r)
    }

    /// `+√(num/den)` from machine integers.
    pub fn sqrt_ratio(num: i64, den: i64) -> Self {
        Self::sqrt(BigRational::new(num.into(), den.into()))
    }

    /// The rational `r` itself, as `sign(r) · √(r²)`.
    pub fn from_rational(r: BigRational) -> Self {
        let sign = sign_of(&r);
        Self::new(sign, &r * &r)
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    /// Decodes `sign(s) · √|s|`, the representation used when accumulating
    /// products of surds as a single signed rational.
    pub fn from_signed_square(s: BigRational) -> Self {
        let sign = sign_of(&s);
        Self::new(sign, s.abs())
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn radicand(&self) -> &BigRational {
        &self.radicand
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// The square of the value, an exact rational.
    pub fn square(&self) -> BigRational {
        self.radicand.clone()
    }

    /// `sign · radicand`.
    pub fn signed_square(&self) -> BigRational {
        match self.sign {
            0 => BigRational::zero(),
            s if s > 0 => self.radicand.clone(),
            _ => -self.radicand.clone(),
        }
    }

    /// The value as a rational, when the radicand is a perfect square.
    pub fn to_rational(&self) -> Option<BigRational> {
        let n = exact_isqrt(self.radicand.numer())?;
        let d = exact_isqrt(self.radicand.denom())?;
        let r = BigRational::new(n, d);
        Some(if self.sign < 0 { -r } else { r })
    }

    pub fn to_f64(&self) -> f64 {
        if self.sign == 0 {
            return 0.0;
        }
        let mag = self.radicand.to_f64().unwrap_or(f64::NAN).sqrt();
        if self.sign > 0 {
            mag
        } else {
            -mag
        }
    }

    pub fn abs(&self) -> Self {
        Self::new(self.sign.abs(), self.radicand.clone())
    }
}

fn sign_of(r: &BigRational) -> i8 {
    match r.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

fn exact_isqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

impl Default for SqrtRational {
    fn default() -> Self {
        Self::zero()
    }
}

impl Mul for SqrtRational {
    type Output = SqrtRational;
    fn mul(self, rhs: SqrtRational) -> SqrtRational {
        &self * &rhs
    }
}

impl Mul<&SqrtRational> for &SqrtRational {
    type Output = SqrtRational;
    fn mul(self, rhs: &SqrtRational) -> SqrtRational {
        if self.is_zero() || rhs.is_zero() {
            return SqrtRational::zero();
        }
        SqrtRational {
            sign: self.sign * rhs.sign,
            radicand: &self.radicand * &rhs.radicand,
        }
    }
}

impl Mul<i64> for SqrtRational {
    type Output = SqrtRational;
    fn mul(self, rhs: i64) -> SqrtRational {
        self * SqrtRational::from_integer(rhs)
    }
}

impl Neg for SqrtRational {
    type Output = SqrtRational;
    fn neg(self) -> SqrtRational {
        SqrtRational {
            sign: -self.sign,
            radicand: self.radicand,
        }
    }
}

impl PartialOrd for SqrtRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Exact ordering of the real values.
impl Ord for SqrtRational {
    fn cmp(&self, other: &Self) -> Ordering {
        self.signed_square().cmp(&other.signed_square())
    }
}

/// Formats as `0`, `+√(1/30)`, `-√3`, and so on.
impl fmt::Display for SqrtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign == 0 {
            return write!(f, "0");
        }
        let s = if self.sign > 0 { '+' } else { '-' };
        if self.radicand.is_integer() {
            write!(f, "{s}√{}", self.radicand.numer())
        } else {
            write!(f, "{s}√({}/{})", self.radicand.numer(), self.radicand.denom())
        }
    }
}
