//! Expressions mixing several quadratic fields, bounded by dyadic intervals.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use super::multi::{self, Multi};
use super::{floor_rat, format_scaled, rat, QuadraticNumber};
use crate::error::{Error, Result};

/// First precision tried by [`ci_compare`].
pub const START_BITS: u32 = 64;
/// Refinement gives up beyond this precision unless the value is known to be
/// irrational.
pub const MAX_BITS: u32 = 4096;
/// Hard limit for values known to be irrational.
const HARD_BITS: u32 = 1 << 20;

/// Closed rational interval known to contain a value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertifiedInterval {
    pub lo: BigRational,
    pub hi: BigRational,
    pub precision_bits: u32,
}

fn pow2(bits: u32) -> BigInt {
    BigInt::one() << bits
}

fn round_down(x: &BigRational, bits: u32) -> BigRational {
    let s = pow2(bits);
    BigRational::new(floor_rat(&(x * BigRational::from_integer(s.clone()))), s)
}

fn round_up(x: &BigRational, bits: u32) -> BigRational {
    let s = pow2(bits);
    let scaled = x * BigRational::from_integer(s.clone());
    BigRational::new(-floor_rat(&-scaled), s)
}

impl CertifiedInterval {
    fn new(lo: BigRational, hi: BigRational, bits: u32) -> Self {
        Self { lo: round_down(&lo, bits), hi: round_up(&hi, bits), precision_bits: bits }
    }

    pub fn point(x: BigRational, bits: u32) -> Self {
        Self { lo: x.clone(), hi: x, precision_bits: bits }
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    /// Intersection of two enclosures of the same value.
    pub fn intersect(&self, other: &Self) -> Self {
        Self {
            lo: self.lo.clone().max(other.lo.clone()),
            hi: self.hi.clone().min(other.hi.clone()),
            precision_bits: self.precision_bits.max(other.precision_bits),
        }
    }

    /// Midpoint as a float.
    pub fn to_f64(&self) -> f64 {
        ((&self.lo + &self.hi) / BigRational::from_integer(2.into()))
            .to_f64()
            .unwrap_or(f64::NAN)
    }

    fn add(&self, o: &Self, bits: u32) -> Self {
        Self::new(&self.lo + &o.lo, &self.hi + &o.hi, bits)
    }

    fn neg(&self) -> Self {
        Self { lo: -self.hi.clone(), hi: -self.lo.clone(), precision_bits: self.precision_bits }
    }

    fn mul(&self, o: &Self, bits: u32) -> Self {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().expect("nonempty").clone();
        let hi = c.iter().max().expect("nonempty").clone();
        Self::new(lo, hi, bits)
    }

    fn recip(&self, bits: u32) -> Option<Self> {
        if self.contains_zero() {
            return None;
        }
        Some(Self::new(self.hi.recip(), self.lo.recip(), bits))
    }
}

/// Encloses `sqrt(d)` between consecutive multiples of `2^-bits`.
fn sqrt_bounds(d: u64, bits: u32) -> (BigRational, BigRational) {
    let scaled = BigInt::from(d) << (2 * bits);
    let s = num_integer::Roots::sqrt(&scaled);
    let den = pow2(bits);
    let exact = &s * &s == scaled;
    let hi = if exact { s.clone() } else { &s + 1 };
    (BigRational::new(s, den.clone()), BigRational::new(hi, den))
}

fn enclose_number(x: &QuadraticNumber, bits: u32) -> CertifiedInterval {
    if x.is_rational() {
        return CertifiedInterval::point(x.rational_part().clone(), bits);
    }
    let (slo, shi) = sqrt_bounds(x.radicand(), bits);
    let b = x.irrational_part();
    let (lo, hi) = if b.is_positive() { (b * slo, b * shi) } else { (b * shi, b * slo) };
    let a = x.rational_part();
    CertifiedInterval::new(a + lo, a + hi, bits)
}

/// Real number built from quadratic numbers, possibly across fields.
///
/// Constructors fold subterms that share a field, so an `Expr` whose value
/// is representable in a single field collapses to [`Expr::Num`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Num(QuadraticNumber),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
}

impl From<QuadraticNumber> for Expr {
    fn from(x: QuadraticNumber) -> Self {
        Expr::Num(x)
    }
}

impl From<&QuadraticNumber> for Expr {
    fn from(x: &QuadraticNumber) -> Self {
        Expr::Num(x.clone())
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Self {
        Expr::Num(n.into())
    }
}

impl Expr {
    /// The single-field value, when the expression folded to one.
    pub fn exact(&self) -> Option<&QuadraticNumber> {
        match self {
            Expr::Num(x) => Some(x),
            _ => None,
        }
    }

    pub fn into_exact(self) -> Option<QuadraticNumber> {
        match self {
            Expr::Num(x) => Some(x),
            _ => None,
        }
    }

    /// Quotient; errors only when the divisor is exactly zero.
    pub fn checked_div(self, rhs: Expr) -> Result<Expr> {
        if let Some(z) = rhs.exact() {
            if z.is_zero() {
                return Err(Error::DivisionByZero);
            }
        }
        Ok(match (&self, &rhs) {
            (Expr::Num(a), Expr::Num(b)) if a.compatible(b) => {
                Expr::Num(a.checked_div(b).expect("compatible, nonzero"))
            }
            _ => Expr::Div(Box::new(self), Box::new(rhs)),
        })
    }

    /// Interval at the given precision; `None` if a divisor cannot be
    /// separated from zero at this precision.
    pub fn enclose(&self, bits: u32) -> Option<CertifiedInterval> {
        Some(match self {
            Expr::Num(x) => enclose_number(x, bits),
            Expr::Add(a, b) => a.enclose(bits)?.add(&b.enclose(bits)?, bits),
            Expr::Sub(a, b) => a.enclose(bits)?.add(&b.enclose(bits)?.neg(), bits),
            Expr::Mul(a, b) => a.enclose(bits)?.mul(&b.enclose(bits)?, bits),
            Expr::Div(a, b) => a.enclose(bits)?.mul(&b.enclose(bits)?.recip(bits)?, bits),
            Expr::Neg(a) => a.enclose(bits)?.neg(),
        })
    }

    /// Initial enclosure, retried at higher precision if needed.
    pub fn certify(&self) -> Result<CertifiedInterval> {
        let mut bits = START_BITS;
        loop {
            if let Some(iv) = self.enclose(bits) {
                return Ok(iv);
            }
            bits *= 2;
            if bits > MAX_BITS {
                return Err(Error::RefinementCap);
            }
        }
    }

    /// Doubles the precision of `prev`; the result is nested inside it.
    pub fn refine(&self, prev: &CertifiedInterval) -> Result<CertifiedInterval> {
        let bits = prev.precision_bits.saturating_mul(2).min(MAX_BITS);
        if prev.precision_bits >= MAX_BITS {
            return Err(Error::RefinementCap);
        }
        let next = self.enclose(bits).ok_or(Error::RefinementCap)?;
        Ok(next.intersect(prev))
    }

    /// Refines until `f` accepts an enclosure. Past [`MAX_BITS`] the value is
    /// evaluated exactly in the field spanned by its radicands: a rational
    /// value goes to `on_rational`, an irrational one keeps refining.
    fn refine_until<T>(
        &self,
        f: impl Fn(&CertifiedInterval) -> Option<T>,
        on_rational: impl FnOnce(&BigRational) -> T,
    ) -> Result<T> {
        let mut bits = START_BITS;
        let mut limit = MAX_BITS;
        loop {
            while bits <= limit {
                if let Some(t) = self.enclose(bits).as_ref().and_then(&f) {
                    return Ok(t);
                }
                bits *= 2;
            }
            if limit == HARD_BITS {
                return Err(Error::RefinementCap);
            }
            let gens = multi::generators(self).ok_or(Error::RefinementCap)?;
            if let Some(r) = Multi::eval(&gens, self)?.as_rational() {
                return Ok(on_rational(r));
            }
            limit = HARD_BITS;
        }
    }

    /// Exact sign, refining intervals when the value is not single-field.
    pub fn signum(&self) -> Result<i32> {
        if let Some(x) = self.exact() {
            return Ok(x.signum());
        }
        self.refine_until(
            |iv| {
                if iv.lo.is_positive() {
                    Some(1)
                } else if iv.hi.is_negative() {
                    Some(-1)
                } else {
                    None
                }
            },
            |r| if r.is_positive() { 1 } else if r.is_negative() { -1 } else { 0 },
        )
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Expr::Num(x) => x.to_f64(),
            _ => self.certify().map(|iv| iv.to_f64()).unwrap_or(f64::NAN),
        }
    }

    /// Correctly rounded decimal string (halves up).
    pub fn to_decimal(&self, digits: u32) -> Result<String> {
        if let Some(x) = self.exact() {
            return Ok(x.to_decimal(digits));
        }
        let scale = BigRational::from_integer(BigInt::from(10u32).pow(digits));
        let half = rat(1, 2);
        let scaled = self.refine_until(
            |iv| {
                let lo = floor_rat(&(&iv.lo * &scale + &half));
                (lo == floor_rat(&(&iv.hi * &scale + &half))).then_some(lo)
            },
            |r| floor_rat(&(r * &scale + &half)),
        )?;
        Ok(format_scaled(&scaled, digits))
    }

    /// Floor, certified by interval refinement for mixed values.
    pub fn floor(&self) -> Result<BigInt> {
        if let Some(x) = self.exact() {
            return Ok(x.floor());
        }
        self.refine_until(
            |iv| {
                let lo = floor_rat(&iv.lo);
                (lo == floor_rat(&iv.hi)).then_some(lo)
            },
            floor_rat,
        )
    }

    pub fn max_of(a: Expr, b: Expr) -> Result<Expr> {
        Ok(if ci_compare(&a, &b)? == Ordering::Less { b } else { a })
    }
}

/// Compares two reals; equality is only reported for symbolic coincidence
/// in a common field.
pub fn ci_compare(x: &Expr, y: &Expr) -> Result<Ordering> {
    if let (Some(a), Some(b)) = (x.exact(), y.exact()) {
        if a.compatible(b) {
            return a.cmp_exact(b);
        }
    }
    let diff = x.clone() - y.clone();
    Ok(diff.signum()?.cmp(&0))
}

impl Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        match (&self, &rhs) {
            (Expr::Num(a), Expr::Num(b)) if a.compatible(b) => Expr::Num(a + b),
            (Expr::Num(a), _) if a.is_zero() => rhs,
            (_, Expr::Num(b)) if b.is_zero() => self,
            _ => Expr::Add(Box::new(self), Box::new(rhs)),
        }
    }
}

impl Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        match (&self, &rhs) {
            (Expr::Num(a), Expr::Num(b)) if a.compatible(b) => Expr::Num(a - b),
            (_, Expr::Num(b)) if b.is_zero() => self,
            _ if self == rhs => Expr::from(0),
            _ => Expr::Sub(Box::new(self), Box::new(rhs)),
        }
    }
}

impl Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        match (&self, &rhs) {
            (Expr::Num(a), Expr::Num(b)) if a.compatible(b) => Expr::Num(a * b),
            (Expr::Num(a), _) | (_, Expr::Num(a)) if a.is_zero() => Expr::from(0),
            (Expr::Num(a), _) if a == &QuadraticNumber::one() => rhs,
            (_, Expr::Num(b)) if b == &QuadraticNumber::one() => self,
            _ => Expr::Mul(Box::new(self), Box::new(rhs)),
        }
    }
}

impl Div for Expr {
    type Output = Expr;
    /// Panics on an exactly zero divisor; see [`Expr::checked_div`].
    fn div(self, rhs: Expr) -> Expr {
        self.checked_div(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        match self {
            Expr::Num(a) => Expr::Num(-a),
            Expr::Neg(a) => *a,
            other => Expr::Neg(Box::new(other)),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(x) => {
                let s = x.to_string();
                if s.contains(' ') || s.contains('/') || s.starts_with('-') {
                    write!(f, "({s})")
                } else {
                    write!(f, "{s}")
                }
            }
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Neg(a) => write!(f, "(-{a})"),
        }
    }
}
