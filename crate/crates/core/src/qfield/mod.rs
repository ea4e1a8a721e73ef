//! Exact arithmetic in real quadratic fields `Q(sqrt(d))`.
//!
//! A [`QuadraticNumber`] is `a + b*sqrt(d)` with rational `a`, `b` and
//! squarefree `d >= 2`; rationals carry `d = 1` and `b = 0`. Values from two
//! different fields can be combined only through [`Expr`], which falls back
//! to certified interval bounds.

mod interval;
mod multi;
mod parse;
mod squarefree;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use interval::{ci_compare, CertifiedInterval, Expr, MAX_BITS};
pub use parse::parse_expr;
pub use squarefree::{is_perfect_square, is_squarefree, isqrt, squarefree_decompose};

/// `a + b*sqrt(d)` in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticNumber {
    a: BigRational,
    b: BigRational,
    d: u64,
}

pub(crate) fn rat(n: i64, m: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(m))
}

pub(crate) fn floor_rat(x: &BigRational) -> BigInt {
    x.numer().div_floor(x.denom())
}

impl QuadraticNumber {
    /// Builds `a + b*sqrt(d)`, pulling square factors out of `d`.
    pub fn new(a: BigRational, b: BigRational, d: impl Into<BigInt>) -> Result<Self> {
        let d: BigInt = d.into();
        if !d.is_positive() {
            return Err(Error::InvalidRadicand(d.to_string()));
        }
        if b.is_zero() {
            return Ok(Self::from_rational(a));
        }
        let (s, f) = squarefree::squarefree_decompose_big(&d)?;
        let b = b * BigRational::from_integer(s);
        if f == 1 {
            Ok(Self::from_rational(a + b))
        } else {
            Ok(Self { a, b, d: f })
        }
    }

    pub fn from_rational(a: BigRational) -> Self {
        Self { a, b: BigRational::zero(), d: 1 }
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn from_ratio(n: i64, m: i64) -> Self {
        Self::from_rational(rat(n, m))
    }

    pub fn zero() -> Self {
        Self::from_integer(0)
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    /// `sqrt(n)` for a positive integer `n`.
    pub fn sqrt(n: u64) -> Result<Self> {
        Self::new(BigRational::zero(), BigRational::one(), n)
    }

    /// `delta_d`: `sqrt(d)` for `d = 2, 3 mod 4`, `(1 + sqrt(d))/2` for `d = 1 mod 4`.
    pub fn delta(d: u64) -> Result<Self> {
        if !is_squarefree(d) || d < 2 {
            return Err(Error::NotSquarefree(d));
        }
        if d % 4 == 1 {
            Self::new(rat(1, 2), rat(1, 2), d)
        } else {
            Self::sqrt(d)
        }
    }

    /// Golden ratio.
    pub fn phi() -> Self {
        Self::delta(5).expect("5 is squarefree")
    }

    /// Root of `p x^2 + q x + r = 0`; `larger` picks the bigger real root.
    pub fn quadratic_root(p: &BigInt, q: &BigInt, r: &BigInt, larger: bool) -> Result<Self> {
        if p.is_zero() {
            if q.is_zero() {
                return Err(Error::InvalidArgument("degenerate quadratic".into()));
            }
            return Ok(Self::from_rational(BigRational::new(-r, q.clone())));
        }
        let g = p.gcd(q).gcd(r);
        let (p, q, r) = (p / &g, q / &g, r / &g);
        let disc = &q * &q - BigInt::from(4) * &p * &r;
        if disc.is_negative() {
            return Err(Error::InvalidArgument("quadratic has no real root".into()));
        }
        let two_p = BigInt::from(2) * &p;
        let a = BigRational::new(-q, two_p.clone());
        let sign = if larger == p.is_positive() { 1 } else { -1 };
        let b = BigRational::new(BigInt::from(sign), two_p);
        if disc.is_zero() {
            return Ok(Self::from_rational(a));
        }
        Self::new(a, b, disc)
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn irrational_part(&self) -> &BigRational {
        &self.b
    }

    /// Squarefree radicand, `1` for rationals.
    pub fn radicand(&self) -> u64 {
        self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.is_rational() && self.a.is_integer()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.a)
    }

    pub fn conj(&self) -> Self {
        Self { a: self.a.clone(), b: -self.b.clone(), d: self.d }
    }

    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.b * &self.b * self.d_rat()
    }

    pub fn trace(&self) -> BigRational {
        &self.a + &self.a
    }

    /// Integral over `Z`: trace and norm are integers.
    pub fn is_quadratic_integer(&self) -> bool {
        self.norm().is_integer() && self.trace().is_integer()
    }

    fn d_rat(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(self.d))
    }

    fn field_with(&self, other: &Self) -> Result<u64> {
        match (self.d, other.d) {
            (1, d) | (d, 1) => Ok(d),
            (d, e) if d == e => Ok(d),
            (d, e) => Err(Error::MixedRadicand(d, e)),
        }
    }

    /// True when both values live in a common field.
    pub fn compatible(&self, other: &Self) -> bool {
        self.field_with(other).is_ok()
    }

    fn build(a: BigRational, b: BigRational, d: u64) -> Self {
        if b.is_zero() {
            Self::from_rational(a)
        } else {
            Self { a, b, d }
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let d = self.field_with(other)?;
        Ok(Self::build(&self.a + &other.a, &self.b + &other.b, d))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        let d = self.field_with(other)?;
        Ok(Self::build(&self.a - &other.a, &self.b - &other.b, d))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        let d = self.field_with(other)?;
        let dr = BigRational::from_integer(BigInt::from(d));
        let a = &self.a * &other.a + &self.b * &other.b * dr;
        let b = &self.a * &other.b + &self.b * &other.a;
        Ok(Self::build(a, b, d))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm();
        Ok(Self::build(&self.a / &n, -&self.b / &n, self.d))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.field_with(other)?;
        self.checked_mul(&other.inv()?)
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Self::build(&self.a * k, &self.b * k, self.d)
    }

    pub fn add_rational(&self, k: &BigRational) -> Self {
        Self { a: &self.a + k, b: self.b.clone(), d: self.d }
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// Sign as -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        let sa = sgn(&self.a);
        let sb = sgn(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // opposite signs: compare a^2 with b^2 d
        let lhs = &self.a * &self.a;
        let rhs = &self.b * &self.b * self.d_rat();
        if lhs > rhs {
            sa
        } else {
            sb
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    /// Exact comparison; fails across fields.
    pub fn cmp_exact(&self, other: &Self) -> Result<Ordering> {
        Ok(self.checked_sub(other)?.signum().cmp(&0))
    }

    /// Writes the value as `(p + q*sqrt(d)) / r` with integers and `r > 0`.
    pub fn to_integer_form(&self) -> (BigInt, BigInt, BigInt) {
        let r = self.a.denom().lcm(self.b.denom());
        let p = self.a.numer() * (&r / self.a.denom());
        let q = self.b.numer() * (&r / self.b.denom());
        (p, q, r)
    }

    pub fn floor(&self) -> BigInt {
        if self.is_rational() {
            return floor_rat(&self.a);
        }
        let (p, q, r) = self.to_integer_form();
        // q*sqrt(d) lies strictly between two consecutive integers
        let s = (&q * &q * BigInt::from(self.d)).sqrt();
        let m = if q.is_positive() { p + s } else { p - s - 1 };
        m.div_floor(&r)
    }

    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    /// Nearest multiple of `10^-digits`, halves rounded up, as a decimal string.
    pub fn to_decimal(&self, digits: u32) -> String {
        let scale = BigInt::from(10u32).pow(digits);
        let shifted = self.scale(&BigRational::from_integer(scale.clone()));
        let m = shifted.add_rational(&rat(1, 2)).floor();
        format_scaled(&m, digits)
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        if self.b.is_zero() {
            return a;
        }
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        a + b * (self.d as f64).sqrt()
    }
}

pub(crate) fn format_scaled(m: &BigInt, digits: u32) -> String {
    let neg = m.is_negative();
    let digits_str = m.abs().to_string();
    let d = digits as usize;
    let padded = if digits_str.len() <= d {
        format!("{}{}", "0".repeat(d + 1 - digits_str.len()), digits_str)
    } else {
        digits_str
    };
    let (int, frac) = padded.split_at(padded.len() - d);
    let body = if d == 0 { int.to_string() } else { format!("{int}.{frac}") };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

fn sgn(x: &BigRational) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

impl PartialOrd for QuadraticNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.cmp_exact(other).ok()
    }
}

impl From<i64> for QuadraticNumber {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl From<BigRational> for QuadraticNumber {
    fn from(x: BigRational) -> Self {
        Self::from_rational(x)
    }
}

impl From<BigInt> for QuadraticNumber {
    fn from(x: BigInt) -> Self {
        Self::from_integer(x)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr<&QuadraticNumber> for &QuadraticNumber {
            type Output = QuadraticNumber;
            /// Panics when the operands live in different fields.
            fn $m(self, rhs: &QuadraticNumber) -> QuadraticNumber {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<QuadraticNumber> for QuadraticNumber {
            type Output = QuadraticNumber;
            fn $m(self, rhs: QuadraticNumber) -> QuadraticNumber {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&QuadraticNumber> for QuadraticNumber {
            type Output = QuadraticNumber;
            fn $m(self, rhs: &QuadraticNumber) -> QuadraticNumber {
                (&self).$m(rhs)
            }
        }
        impl $tr<QuadraticNumber> for &QuadraticNumber {
            type Output = QuadraticNumber;
            fn $m(self, rhs: QuadraticNumber) -> QuadraticNumber {
                self.$m(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);
binop!(Div, div, checked_div);

impl Neg for &QuadraticNumber {
    type Output = QuadraticNumber;
    fn neg(self) -> QuadraticNumber {
        QuadraticNumber { a: -self.a.clone(), b: -self.b.clone(), d: self.d }
    }
}

impl Neg for QuadraticNumber {
    type Output = QuadraticNumber;
    fn neg(self) -> QuadraticNumber {
        -&self
    }
}

impl fmt::Display for QuadraticNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", self.a);
        }
        let (p, q, r) = self.to_integer_form();
        let surd = match () {
            _ if q.is_one() => format!("sqrt({})", self.d),
            _ if q == -BigInt::one() => format!("-sqrt({})", self.d),
            _ => format!("{}*sqrt({})", q, self.d),
        };
        let body = if p.is_zero() {
            surd
        } else if q.is_negative() {
            format!("{} - {}", p, surd.trim_start_matches('-'))
        } else {
            format!("{} + {}", p, surd)
        };
        if r.is_one() {
            write!(f, "{body}")
        } else {
            write!(f, "({body})/{r}")
        }
    }
}

impl FromStr for QuadraticNumber {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let e = parse_expr(s)?;
        e.exact().cloned().ok_or_else(|| {
            Error::Parse { pos: 0, msg: "expression mixes quadratic fields".into() }
        })
    }
}
