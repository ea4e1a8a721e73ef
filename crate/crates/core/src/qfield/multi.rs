//! Exact evaluation of mixed expressions in the multiquadratic field spanned
//! by their radicands.

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::interval::Expr;
use super::QuadraticNumber;
use crate::error::{Error, Result};

/// Generators beyond this are not attempted.
const MAX_GENERATORS: usize = 8;

/// Element of `Q(sqrt c_1, ..., sqrt c_k)` with pairwise coprime squarefree
/// `c_i`, stored as coefficients of `sqrt(prod_{i in S} c_i)` indexed by the
/// bitmask `S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Multi<'a> {
    gens: &'a [u64],
    coeffs: Vec<BigRational>,
}

/// Splits squarefree radicands into pairwise coprime factors.
fn coprime_basis(mut xs: Vec<u64>) -> Vec<u64> {
    xs.retain(|&x| x > 1);
    'outer: loop {
        xs.sort_unstable();
        xs.dedup();
        for i in 0..xs.len() {
            for j in i + 1..xs.len() {
                let g = xs[i].gcd(&xs[j]);
                if g > 1 {
                    let (a, b) = (xs[i] / g, xs[j] / g);
                    xs.swap_remove(j);
                    xs.swap_remove(i);
                    xs.extend([g, a, b].into_iter().filter(|&x| x > 1));
                    continue 'outer;
                }
            }
        }
        return xs;
    }
}

fn collect_radicands(e: &Expr, out: &mut Vec<u64>) {
    match e {
        Expr::Num(x) => out.push(x.radicand()),
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
            collect_radicands(a, out);
            collect_radicands(b, out);
        }
        Expr::Neg(a) => collect_radicands(a, out),
    }
}

/// Generators of the field containing every leaf of `e`, or `None` when
/// there are too many.
pub(crate) fn generators(e: &Expr) -> Option<Vec<u64>> {
    let mut rs = Vec::new();
    collect_radicands(e, &mut rs);
    let gens = coprime_basis(rs);
    (gens.len() <= MAX_GENERATORS).then_some(gens)
}

impl<'a> Multi<'a> {
    fn zero(gens: &'a [u64]) -> Self {
        Self { gens, coeffs: vec![BigRational::zero(); 1 << gens.len()] }
    }

    fn rational(gens: &'a [u64], r: BigRational) -> Self {
        let mut m = Self::zero(gens);
        m.coeffs[0] = r;
        m
    }

    fn embed(gens: &'a [u64], x: &QuadraticNumber) -> Self {
        let mut m = Self::rational(gens, x.rational_part().clone());
        let d = x.radicand();
        if d > 1 {
            let mask = gens.iter().enumerate().filter(|(_, &g)| d % g == 0).fold(0, |m, (i, _)| m | (1 << i));
            m.coeffs[mask] = x.irrational_part().clone();
        }
        m
    }

    #[cfg(test)]
    pub(crate) fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub(crate) fn as_rational(&self) -> Option<&BigRational> {
        self.coeffs[1..].iter().all(Zero::is_zero).then(|| &self.coeffs[0])
    }

    fn add(&self, o: &Self, sign: i32) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&o.coeffs)
            .map(|(a, b)| if sign > 0 { a + b } else { a - b })
            .collect();
        Self { gens: self.gens, coeffs }
    }

    fn neg(&self) -> Self {
        Self { gens: self.gens, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero(self.gens);
        for (s, a) in self.coeffs.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (t, b) in o.coeffs.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                let common: u64 = (0..self.gens.len()).filter(|i| s & t & (1 << i) != 0).map(|i| self.gens[i]).product();
                out.coeffs[s ^ t] += a * b * BigRational::from_integer(common.into());
            }
        }
        out
    }

    /// Galois conjugate flipping the sign of `sqrt c_i`.
    fn conj(&self, i: usize) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(s, c)| if s & (1 << i) != 0 { -c } else { c.clone() })
            .collect();
        Self { gens: self.gens, coeffs }
    }

    fn inv(&self) -> Result<Self> {
        let mut x = self.clone();
        let mut num = Self::rational(self.gens, BigRational::one());
        for i in 0..self.gens.len() {
            let c = x.conj(i);
            x = x.mul(&c);
            num = num.mul(&c);
        }
        let r = x.as_rational().expect("norm down to the rationals");
        if r.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let r = r.recip();
        Ok(Self { gens: self.gens, coeffs: num.coeffs.iter().map(|c| c * &r).collect() })
    }

    pub(crate) fn eval(gens: &'a [u64], e: &Expr) -> Result<Self> {
        Ok(match e {
            Expr::Num(x) => Self::embed(gens, x),
            Expr::Add(a, b) => Self::eval(gens, a)?.add(&Self::eval(gens, b)?, 1),
            Expr::Sub(a, b) => Self::eval(gens, a)?.add(&Self::eval(gens, b)?, -1),
            Expr::Mul(a, b) => Self::eval(gens, a)?.mul(&Self::eval(gens, b)?),
            Expr::Div(a, b) => Self::eval(gens, a)?.mul(&Self::eval(gens, b)?.inv()?),
            Expr::Neg(a) => Self::eval(gens, a)?.neg(),
        })
    }
}
