//! Exact complex-rational scalars and the combinatorial helpers used by the
//! chain constructions (double factorials with the negative-odd extension,
//! factorials, binomials).

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

/// `re + i im` with both parts exact rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalComplex {
    pub re: Rational,
    pub im: Rational,
}

impl RationalComplex {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn real(re: Rational) -> Self {
        Self { re, im: Rational::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::real(rat_int(n))
    }

    pub fn i() -> Self {
        Self { re: Rational::zero(), im: Rational::one() }
    }

    /// `i^n` for any integer `n`.
    pub fn i_pow(n: i64) -> Self {
        match n.rem_euclid(4) {
            0 => Self::one(),
            1 => Self::i(),
            2 => -Self::one(),
            _ => -Self::i(),
        }
    }

    /// `(-1)^n`.
    pub fn sign_pow(n: i64) -> Self {
        if n.rem_euclid(2) == 0 {
            Self::one()
        } else {
            -Self::one()
        }
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self { re: &self.re * r, im: &self.im * r }
    }

    pub fn inv(&self) -> Option<Self> {
        let n = self.norm_sqr();
        if n.is_zero() {
            return None;
        }
        let c = self.conj();
        Some(Self { re: c.re / &n, im: c.im / n })
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn to_complex64(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // numer/denom overflow f64 individually; fall back to a scaled quotient
        let n = r.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

impl Zero for RationalComplex {
    fn zero() -> Self {
        Self { re: Rational::zero(), im: Rational::zero() }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for RationalComplex {
    fn one() -> Self {
        Self::real(Rational::one())
    }
}

impl From<Rational> for RationalComplex {
    fn from(r: Rational) -> Self {
        Self::real(r)
    }
}

impl From<i64> for RationalComplex {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl fmt::Display for RationalComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) => {
                if self.im.is_negative() {
                    write!(f, "({} - {}i)", self.re, -self.im.clone())
                } else {
                    write!(f, "({} + {}i)", self.re, self.im)
                }
            }
        }
    }
}

impl Add<&RationalComplex> for &RationalComplex {
    type Output = RationalComplex;
    fn add(self, rhs: &RationalComplex) -> RationalComplex {
        RationalComplex { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl Add for RationalComplex {
    type Output = RationalComplex;
    fn add(self, rhs: RationalComplex) -> RationalComplex {
        &self + &rhs
    }
}

impl AddAssign<&RationalComplex> for RationalComplex {
    fn add_assign(&mut self, rhs: &RationalComplex) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl Sub<&RationalComplex> for &RationalComplex {
    type Output = RationalComplex;
    fn sub(self, rhs: &RationalComplex) -> RationalComplex {
        RationalComplex { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl Sub for RationalComplex {
    type Output = RationalComplex;
    fn sub(self, rhs: RationalComplex) -> RationalComplex {
        &self - &rhs
    }
}

impl SubAssign<&RationalComplex> for RationalComplex {
    fn sub_assign(&mut self, rhs: &RationalComplex) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl Mul<&RationalComplex> for &RationalComplex {
    type Output = RationalComplex;
    fn mul(self, rhs: &RationalComplex) -> RationalComplex {
        RationalComplex {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Mul for RationalComplex {
    type Output = RationalComplex;
    fn mul(self, rhs: RationalComplex) -> RationalComplex {
        &self * &rhs
    }
}

impl MulAssign<&RationalComplex> for RationalComplex {
    fn mul_assign(&mut self, rhs: &RationalComplex) {
        *self = &*self * rhs;
    }
}

impl Div<&RationalComplex> for &RationalComplex {
    type Output = RationalComplex;
    /// Panics on division by zero.
    fn div(self, rhs: &RationalComplex) -> RationalComplex {
        self * &rhs.inv().expect("division by zero RationalComplex")
    }
}

impl Neg for RationalComplex {
    type Output = RationalComplex;
    fn neg(self) -> RationalComplex {
        RationalComplex { re: -self.re, im: -self.im }
    }
}

impl Neg for &RationalComplex {
    type Output = RationalComplex;
    fn neg(self) -> RationalComplex {
        -self.clone()
    }
}

/// Double factorial extended to odd negative arguments:
/// `0!! = (-1)!! = 1` and `(-2j-1)!! = (-1)^j / (2j-1)!!`.
pub fn dfact(m: i64) -> Result<Rational> {
    if m >= -1 {
        let mut acc = BigInt::one();
        let mut k = m;
        while k > 1 {
            acc *= k;
            k -= 2;
        }
        return Ok(Rational::from_integer(acc));
    }
    if m % 2 == 0 {
        return Err(Error::NegativeEvenDoubleFactorial(m));
    }
    let j = (-m - 1) / 2;
    let denom = dfact(2 * j - 1)?;
    let sign = if j % 2 == 0 { Rational::one() } else { -Rational::one() };
    Ok(sign / denom)
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Binomial coefficient `C(n, k)`, zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * (n - j) / (j + 1);
    }
    acc
}
