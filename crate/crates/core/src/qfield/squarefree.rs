//! Squarefree decomposition of radicands.

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};

/// Writes `n = s^2 * f` with `f` squarefree and returns `(s, f)`.
///
/// Trial division runs up to the cube root of `n`; whatever cofactor is
/// left has at most two prime factors and is squarefree unless it is a
/// perfect square.
pub fn squarefree_decompose(n: u64) -> (u64, u64) {
    assert!(n > 0, "squarefree_decompose(0)");
    let mut m = n;
    let mut s = 1u64;
    let mut f = 1u64;
    let limit = m.cbrt() + 1;
    let mut p = 2u64;
    while p <= limit && p * p <= m {
        if m % p == 0 {
            let mut e = 0u32;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            s *= p.pow(e / 2);
            if e % 2 == 1 {
                f *= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        let r = m.sqrt();
        if r * r == m {
            s *= r;
        } else {
            f *= m;
        }
    }
    (s, f)
}

pub fn is_squarefree(n: u64) -> bool {
    n > 0 && squarefree_decompose(n).0 == 1
}

/// Big-integer front end; positive input only.
pub fn squarefree_decompose_big(n: &BigInt) -> Result<(BigInt, u64)> {
    if n.sign() != num_bigint::Sign::Plus {
        return Err(Error::InvalidRadicand(n.to_string()));
    }
    let small = n
        .to_u64()
        .ok_or_else(|| Error::RadicandTooLarge(n.to_string()))?;
    let (s, f) = squarefree_decompose(small);
    Ok((BigInt::from(s), f))
}

/// Floor of the square root; `None` for negative input.
pub fn isqrt(n: &BigInt) -> Option<BigInt> {
    if n.sign() == num_bigint::Sign::Minus {
        None
    } else {
        Some(n.sqrt())
    }
}

pub fn is_perfect_square(n: &BigInt) -> bool {
    match isqrt(n) {
        Some(r) => &(&r * &r) == n,
        None => false,
    }
}
