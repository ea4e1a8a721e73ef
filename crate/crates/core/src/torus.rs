//! Rank-1 lattices `{({kp/n}, k/n)}` on the unit torus.

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::boxwalk::{walk_to_termination, LatticeNormalForm, MaxEmptyBox, WalkMode};
use crate::contfrac::finite_value;
use crate::dispersion::fibonacci;
use crate::error::{Error, Result};
use crate::qfield::QuadraticNumber;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RankOneLattice {
    p: u64,
    n: u64,
}

impl RankOneLattice {
    pub fn new(p: u64, n: u64) -> Result<Self> {
        if n < 2 || p == 0 || p >= n {
            return Err(Error::InvalidLattice(format!("need 0 < p < n, got p = {p}, n = {n}")));
        }
        if p.gcd(&n) != 1 {
            return Err(Error::InvalidLattice(format!("gcd({p}, {n}) != 1")));
        }
        Ok(Self { p, n })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// The lattice `(n - p, n)`, the mirror image under `x -> 1 - x`.
    pub fn reflection(&self) -> Self {
        Self { p: self.n - self.p, n: self.n }
    }

    /// Shortest expansion `p/n = [0; a_1, ..., a_k]`.
    pub fn coefficients(&self) -> Vec<u64> {
        cf_of(self.p, self.n)
    }

    /// `(a_1, ..., a_k - 1, 1)`, the expansion ending in 1.
    pub fn normalized_coefficients(&self) -> Vec<u64> {
        let mut c = self.coefficients();
        *c.last_mut().expect("p < n") -= 1;
        c.push(1);
        c
    }

    /// Largest coefficient in the shortest expansion.
    pub fn max_coefficient(&self) -> u64 {
        max_cf(self.p, self.n)
    }

    /// Planar normal form `Delta = [c_1; c_2, ...]`, `Delta~ = -1/c_0`.
    pub fn normal_form(&self) -> Result<LatticeNormalForm> {
        let c = self.normalized_coefficients();
        let delta = QuadraticNumber::from_rational(finite_value(&c[1..]));
        let dt = QuadraticNumber::from_ratio(-1, c[0] as i64);
        LatticeNormalForm::new(delta, dt, WalkMode::Torus)
    }
}

fn cf_of(mut p: u64, mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    while p != 0 {
        out.push(n / p);
        (n, p) = (p, n % p);
    }
    out
}

fn max_cf(mut p: u64, mut n: u64) -> u64 {
    let mut m = 0;
    while p != 0 {
        m = m.max(n / p);
        (n, p) = (p, n % p);
    }
    m
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PeriodicWitness {
    /// Index of the walk box and its bounding points in the planar normal form.
    Box { index: i64, bounding: MaxEmptyBox },
    /// A strip of width `1/n` or height `1/n` closed up around the torus.
    Strip,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicDispersionResult {
    /// Area on the unit torus.
    pub value: BigRational,
    /// `value * n`.
    pub normalized: BigRational,
    pub witness: PeriodicWitness,
}

/// Written `p/n`.
impl fmt::Display for RankOneLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.n)
    }
}

impl FromStr for RankOneLattice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let (p, n) = t.split_once('/').ok_or(Error::Parse { pos: 0, msg: "expected p/n".into() })?;
        let num = |x: &str, pos: usize| {
            x.trim().parse::<u64>().map_err(|e| Error::Parse { pos, msg: e.to_string() })
        };
        Self::new(num(p, 0)?, num(n, p.len() + 1)?)
    }
}

/// Normalized volumes of all walk boxes, lowest first.
pub fn box_profile(lattice: &RankOneLattice) -> Result<Vec<(MaxEmptyBox, BigRational)>> {
    let nf = lattice.normal_form()?;
    walk_to_termination(&nf)?
        .into_iter()
        .map(|b| {
            let v = b.normalized_volume(&nf).into_exact().and_then(|x| x.as_rational().cloned());
            v.map(|v| (b, v)).ok_or_else(|| Error::Internal("torus box volume is irrational".into()))
        })
        .collect()
}

pub fn periodic_dispersion(lattice: &RankOneLattice) -> Result<PeriodicDispersionResult> {
    let two = BigRational::from_integer(2.into());
    let mut normalized = two.clone();
    let mut witness = PeriodicWitness::Strip;
    for (b, v) in box_profile(lattice)? {
        if v >= normalized && (v > normalized || witness == PeriodicWitness::Strip) {
            normalized = v;
            witness = PeriodicWitness::Box { index: b.n, bounding: b };
        }
    }
    let n = BigRational::from_integer(BigInt::from(lattice.n));
    Ok(PeriodicDispersionResult { value: &normalized / n, normalized, witness })
}

/// `(F_{m-2}, F_m)` with the normalized box volumes `F_{m-k} F_{k+3} / F_m`, `0 <= k <= m-3`.
pub fn fibonacci_lattice(m: u32) -> Result<(RankOneLattice, Vec<BigRational>)> {
    if m < 3 {
        return Err(Error::InvalidArgument(format!("Fibonacci lattice needs m >= 3, got {m}")));
    }
    let fm = fibonacci(m);
    let as_u64 = |x: &BigInt| x.to_u64().ok_or(Error::CoefficientOverflow);
    let lattice = RankOneLattice::new(as_u64(&fibonacci(m - 2))?, as_u64(&fm)?)?;
    let profile = (0..=m - 3)
        .map(|k| BigRational::new(fibonacci(m - k) * fibonacci(k + 3), fm.clone()))
        .collect();
    Ok((lattice, profile))
}

pub fn is_fibonacci(n: u64) -> bool {
    let (mut a, mut b) = (0u64, 1u64);
    while a < n {
        (a, b) = (b, a + b);
    }
    a == n
}

/// `A/4 + 3/2 + 1/(A+2)`.
pub fn zaremba_constant(a: u64) -> BigRational {
    BigRational::new(BigInt::from(a), 4.into())
        + BigRational::new(3.into(), 2.into())
        + BigRational::new(1.into(), BigInt::from(a + 2))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZarembaRow {
    pub n: u64,
    /// Smallest `p` reaching `m(n)`.
    pub p: u64,
    pub reflection: u64,
    /// `min_p` of the largest coefficient of `p/n`.
    pub m: u64,
    pub normalized: BigRational,
    /// `C(m(n))`.
    pub bound: BigRational,
    /// `m(n) > A`.
    pub flagged: bool,
}

pub fn zaremba_row(n: u64, a: u64) -> Result<ZarembaRow> {
    if n < 2 {
        return Err(Error::InvalidArgument("n must be at least 2".into()));
    }
    let (m, p) = (1..n)
        .filter(|p| p.gcd(&n) == 1)
        .map(|p| (max_cf(p, n), p))
        .min()
        .expect("p = 1 is coprime");
    let lattice = RankOneLattice::new(p, n)?;
    let r = periodic_dispersion(&lattice)?;
    Ok(ZarembaRow {
        n,
        p,
        reflection: n - p,
        m,
        normalized: r.normalized,
        bound: zaremba_constant(m),
        flagged: m > a,
    })
}

pub fn zaremba_scan(range: RangeInclusive<u64>, a: u64) -> Result<Vec<ZarembaRow>> {
    let lo = (*range.start()).max(2);
    (lo..=*range.end()).into_par_iter().map(|n| zaremba_row(n, a)).collect()
}

/// Minimum over `p` of the normalized periodic dispersion, with every `p` reaching it.
pub fn optimal_generators(n: u64) -> Result<(BigRational, Vec<u64>)> {
    let mut best: Option<BigRational> = None;
    let mut ps = Vec::new();
    for p in (1..n).filter(|p| p.gcd(&n) == 1) {
        let v = periodic_dispersion(&RankOneLattice::new(p, n)?)?.normalized;
        match &best {
            Some(b) if &v > b => {}
            Some(b) if &v == b => ps.push(p),
            _ => {
                best = Some(v);
                ps = vec![p];
            }
        }
    }
    best.map(|b| (b, ps)).ok_or_else(|| Error::InvalidArgument(format!("no generator for n = {n}")))
}
