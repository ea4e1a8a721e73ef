//! Continued fractions: expansions of numbers, two-sided coefficient
//! sequences and their convergents.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::qfield::{is_squarefree, QuadraticNumber};

/// Iteration cap for period detection.
const EXPANSION_CAP: usize = 200_000;

/// Eventually periodic run of positive coefficients `c_0, c_1, ...`.
/// An empty period means the run is finite.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct OneSided {
    pre: Vec<u64>,
    period: Vec<u64>,
}

fn primitive_period(p: &[u64]) -> Vec<u64> {
    let l = p.len();
    (1..=l)
        .find(|&k| l % k == 0 && (k..l).all(|i| p[i] == p[i - k]))
        .map(|k| p[..k].to_vec())
        .unwrap_or_default()
}

fn mobius_apply(m: &[[BigInt; 2]; 2], x: &QuadraticNumber) -> QuadraticNumber {
    let num = x * &QuadraticNumber::from_integer(m[0][0].clone())
        + QuadraticNumber::from_integer(m[0][1].clone());
    let den = x * &QuadraticNumber::from_integer(m[1][0].clone())
        + QuadraticNumber::from_integer(m[1][1].clone());
    num.checked_div(&den).expect("continued fraction denominators are positive")
}

/// Product of `[[c, 1], [1, 0]]` over the coefficients.
fn cf_matrix(cs: &[u64]) -> [[BigInt; 2]; 2] {
    let mut m = [[BigInt::one(), BigInt::zero()], [BigInt::zero(), BigInt::one()]];
    for &c in cs {
        let c = BigInt::from(c);
        let n00 = &m[0][0] * &c + &m[0][1];
        let n10 = &m[1][0] * &c + &m[1][1];
        m = [[n00, m[0][0].clone()], [n10, m[1][0].clone()]];
    }
    m
}

/// `[c_0; c_1, ..., c_{k-1}]` for a nonempty finite list.
pub fn finite_value(cs: &[u64]) -> BigRational {
    let m = cf_matrix(cs);
    BigRational::new(m[0][0].clone(), m[1][0].clone())
}

/// Fixed point `[overline{p}]`, the root above 1.
pub fn periodic_value(p: &[u64]) -> QuadraticNumber {
    let m = cf_matrix(p);
    let (h, h1, k, k1) = (&m[0][0], &m[0][1], &m[1][0], &m[1][1]);
    QuadraticNumber::quadratic_root(k, &(k1 - h), &-h1, true)
        .expect("periodic continued fraction has a real root")
}

impl OneSided {
    pub fn new(pre: Vec<u64>, period: Vec<u64>) -> Result<Self> {
        if pre.iter().chain(&period).any(|&c| c == 0) {
            return Err(Error::InvalidArgument("coefficients must be positive".into()));
        }
        let mut s = Self { pre, period: primitive_period(&period) };
        s.fold();
        Ok(s)
    }

    pub fn finite(cs: Vec<u64>) -> Result<Self> {
        Self::new(cs, Vec::new())
    }

    pub fn periodic(period: Vec<u64>) -> Result<Self> {
        Self::new(Vec::new(), period)
    }

    fn fold(&mut self) {
        while let (Some(a), Some(b)) = (self.pre.last(), self.period.last()) {
            if a != b {
                break;
            }
            self.pre.pop();
            self.period.rotate_right(1);
        }
    }

    pub fn preperiod(&self) -> &[u64] {
        &self.pre
    }

    pub fn period(&self) -> &[u64] {
        &self.period
    }

    pub fn is_finite(&self) -> bool {
        self.period.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.pre.is_empty() && self.period.is_empty()
    }

    /// Number of coefficients, `None` when infinite.
    pub fn finite_len(&self) -> Option<usize> {
        self.is_finite().then_some(self.pre.len())
    }

    pub fn get(&self, k: usize) -> Option<u64> {
        if k < self.pre.len() {
            Some(self.pre[k])
        } else if self.period.is_empty() {
            None
        } else {
            Some(self.period[(k - self.pre.len()) % self.period.len()])
        }
    }

    /// First `n` coefficients (fewer if finite).
    pub fn prefix(&self, n: usize) -> Vec<u64> {
        (0..n).map_while(|k| self.get(k)).collect()
    }

    pub fn push_front(&self, c: u64) -> Self {
        let mut pre = Vec::with_capacity(self.pre.len() + 1);
        pre.push(c);
        pre.extend_from_slice(&self.pre);
        let mut s = Self { pre, period: self.period.clone() };
        s.fold();
        s
    }

    pub fn pop_front(&self) -> Option<(u64, Self)> {
        if let Some((&c, rest)) = self.pre.split_first() {
            return Some((c, Self { pre: rest.to_vec(), period: self.period.clone() }));
        }
        let c = *self.period.first()?;
        let mut period = self.period.clone();
        period.rotate_left(1);
        Some((c, Self { pre: Vec::new(), period }))
    }

    /// `[c_0; c_1, ...]`; `None` when empty.
    pub fn value(&self) -> Option<QuadraticNumber> {
        if self.is_empty() {
            return None;
        }
        if self.is_finite() {
            return Some(QuadraticNumber::from_rational(finite_value(&self.pre)));
        }
        let tail = periodic_value(&self.period);
        Some(mobius_apply(&cf_matrix(&self.pre), &tail))
    }

    /// `[0; c_0, c_1, ...]`, which is `0` for the empty run.
    pub fn zero_value(&self) -> QuadraticNumber {
        match self.value() {
            None => QuadraticNumber::zero(),
            Some(v) => v.inv().expect("value is at least 1"),
        }
    }

    fn write_items(&self, f: &mut fmt::Formatter<'_>, reversed: bool) -> fmt::Result {
        let join = |v: &[u64]| v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
        if reversed {
            let mut per = self.period.clone();
            per.reverse();
            let mut pre = self.pre.clone();
            pre.reverse();
            let mut parts = Vec::new();
            if !per.is_empty() {
                parts.push(format!("({})", join(&per)));
            }
            if !pre.is_empty() {
                parts.push(join(&pre));
            }
            write!(f, "{}", parts.join(","))
        } else {
            let mut parts = Vec::new();
            if !self.pre.is_empty() {
                parts.push(join(&self.pre));
            }
            if !self.period.is_empty() {
                parts.push(format!("({})", join(&self.period)));
            }
            write!(f, "{}", parts.join(","))
        }
    }
}

/// Continued fraction `[a_0; a_1, a_2, ...]` of a real number. `a_0` may be
/// zero or negative, every later coefficient is positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Expansion {
    pub first: i64,
    pub tail: OneSided,
}

impl Expansion {
    pub fn get(&self, k: usize) -> Option<i64> {
        if k == 0 {
            Some(self.first)
        } else {
            self.tail.get(k - 1).map(|c| c as i64)
        }
    }

    pub fn is_finite(&self) -> bool {
        self.tail.is_finite()
    }

    /// All coefficients when finite.
    pub fn finite_coefficients(&self) -> Option<Vec<i64>> {
        let n = self.tail.finite_len()?;
        Some((0..=n).map(|k| self.get(k).expect("in range")).collect())
    }

    /// The period when `a_0` itself starts it.
    pub fn pure_period(&self) -> Option<Vec<u64>> {
        let last = *self.tail.period.last()?;
        if !self.tail.pre.is_empty() || self.first < 1 || self.first as u64 != last {
            return None;
        }
        let mut p = vec![last];
        p.extend_from_slice(&self.tail.period[..self.tail.period.len() - 1]);
        Some(p)
    }

    pub fn is_purely_periodic(&self) -> bool {
        self.pure_period().is_some()
    }

    pub fn value(&self) -> QuadraticNumber {
        let head = QuadraticNumber::from_integer(self.first);
        if self.tail.is_empty() {
            head
        } else {
            head + self.tail.zero_value()
        }
    }
}

impl fmt::Display for Expansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(p) = self.pure_period() {
            let items: Vec<_> = p.iter().map(|c| c.to_string()).collect();
            return write!(f, "[({})]", items.join(","));
        }
        write!(f, "[{}", self.first)?;
        if !self.tail.is_empty() {
            write!(f, ";")?;
            self.tail.write_items(f, false)?;
        }
        write!(f, "]")
    }
}

fn to_coeff(x: &BigInt) -> Result<u64> {
    x.to_u64().ok_or(Error::CoefficientOverflow)
}

/// Expands `x`. Rationals must be positive and come out ending in `1`;
/// quadratic irrationals come out with preperiod and period.
pub fn cf_expand(x: &QuadraticNumber) -> Result<Expansion> {
    if let Some(r) = x.as_rational() {
        if !r.is_positive() {
            return Err(Error::NonPositive(x.to_string()));
        }
        let (mut n, mut m) = (r.numer().clone(), r.denom().clone());
        let mut cs = Vec::new();
        while !m.is_zero() {
            let (q, rem) = n.div_mod_floor(&m);
            cs.push(q);
            n = m;
            m = rem;
        }
        let first = cs[0].to_i64().ok_or(Error::CoefficientOverflow)?;
        let mut tail: Vec<u64> = cs[1..].iter().map(to_coeff).collect::<Result<_>>()?;
        return Ok(match tail.last_mut() {
            None => Expansion { first: first - 1, tail: OneSided::finite(vec![1])? },
            Some(last) => {
                *last -= 1;
                tail.push(1);
                Expansion { first, tail: OneSided::finite(tail)? }
            }
        });
    }
    let mut seen: HashMap<QuadraticNumber, usize> = HashMap::new();
    let mut coeffs: Vec<BigInt> = Vec::new();
    let mut cur = x.clone();
    let start = loop {
        if let Some(&s) = seen.get(&cur) {
            break s;
        }
        if coeffs.len() > EXPANSION_CAP {
            return Err(Error::CapExceeded("period detection".into()));
        }
        let a = cur.floor();
        seen.insert(cur.clone(), coeffs.len());
        cur = cur.add_rational(&-BigRational::from_integer(a.clone())).inv()?;
        coeffs.push(a);
    };
    let first = coeffs[0].to_i64().ok_or(Error::CoefficientOverflow)?;
    let rest: Vec<u64> = coeffs[1..].iter().map(to_coeff).collect::<Result<_>>()?;
    let tail = if start == 0 {
        let mut period = rest;
        period.push(first as u64);
        OneSided::periodic(period)?
    } else {
        OneSided::new(rest[..start - 1].to_vec(), rest[start - 1..].to_vec())?
    };
    Ok(Expansion { first, tail })
}

/// Which sides of a [`CFSequence`] are infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SequenceKind {
    TwoSided,
    OneSidedRight,
    OneSidedLeft,
    Finite,
}

/// Two-sided coefficient sequence `..., a_{-2}, a_{-1} | a_0, a_1, ...`.
///
/// `right` stores `a_0, a_1, ...`; `left` stores `a_{-1}, a_{-2}, ...`
/// reading outward from the origin.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CFSequence {
    pub left: OneSided,
    pub right: OneSided,
    /// Total shift applied since construction.
    pub origin: i64,
}

impl CFSequence {
    pub fn new(left: OneSided, right: OneSided) -> Self {
        Self { left, right, origin: 0 }
    }

    /// Bi-infinite repetition of `period` with `a_0 = period[0]`.
    pub fn periodic(period: &[u64]) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::InvalidArgument("empty period".into()));
        }
        let mut rev = period.to_vec();
        rev.reverse();
        Ok(Self::new(OneSided::periodic(rev)?, OneSided::periodic(period.to_vec())?))
    }

    /// Sequence of the normal form with generators `(1,1)` and `(-delta, -delta_tilde)`:
    /// `delta = [a_0; a_1, ...]` and `-delta_tilde = [0; a_{-1}, a_{-2}, ...]`.
    pub fn from_lattice(delta: &QuadraticNumber, delta_tilde: &QuadraticNumber) -> Result<Self> {
        let right = if delta.is_integer() && delta.is_positive() {
            OneSided::finite(vec![to_coeff(&delta.floor())?])?
        } else {
            let e = cf_expand(delta)?;
            if e.first < 1 {
                return Err(Error::NotNormalForm(format!("delta = {delta} is below 1")));
            }
            e.tail.push_front(e.first as u64)
        };
        let t = -delta_tilde;
        let left = if t.is_zero() {
            OneSided::default()
        } else if t == QuadraticNumber::one() {
            OneSided::finite(vec![1])?
        } else {
            let l = cf_expand(&t)?;
            if l.first != 0 {
                return Err(Error::NotNormalForm(format!("-delta_tilde = {t} is outside [0, 1]")));
            }
            l.tail
        };
        Ok(Self::new(left, right))
    }

    pub fn kind(&self) -> SequenceKind {
        match (self.left.is_finite(), self.right.is_finite()) {
            (false, false) => SequenceKind::TwoSided,
            (true, false) => SequenceKind::OneSidedRight,
            (false, true) => SequenceKind::OneSidedLeft,
            (true, true) => SequenceKind::Finite,
        }
    }

    pub fn get(&self, i: i64) -> Option<u64> {
        if i >= 0 {
            self.right.get(i as usize)
        } else {
            self.left.get((-i - 1) as usize)
        }
    }

    pub fn coeff(&self, i: i64) -> Result<u64> {
        self.get(i).ok_or(Error::IndexOutOfRange(i))
    }

    /// Re-indexes so that the new `a_0` is the old `a_k`.
    pub fn shift(&self, k: i64) -> Result<Self> {
        let (mut left, mut right) = (self.left.clone(), self.right.clone());
        for _ in 0..k.max(0) {
            let (c, r) = right.pop_front().ok_or(Error::IndexOutOfRange(self.origin + k))?;
            right = r;
            left = left.push_front(c);
        }
        for _ in 0..(-k).max(0) {
            let (c, l) = left.pop_front().ok_or(Error::IndexOutOfRange(self.origin + k))?;
            left = l;
            right = right.push_front(c);
        }
        Ok(Self { left, right, origin: self.origin + k })
    }

    /// Mirror image: `b_i = a_{-i}`.
    pub fn reversed(&self) -> Result<Self> {
        let (a0, rest) = self.right.pop_front().ok_or(Error::IndexOutOfRange(0))?;
        Ok(Self { left: rest, right: self.left.push_front(a0), origin: -self.origin })
    }

    /// Shift by `k`, then optionally mirror.
    pub fn shift_reverse(&self, k: i64, reverse: bool) -> Result<Self> {
        let s = self.shift(k)?;
        if reverse {
            s.reversed()
        } else {
            Ok(s)
        }
    }

    /// `(Delta_0, Delta_tilde_0)` allowing finite sides.
    pub(crate) fn values_at_origin(&self) -> Result<(QuadraticNumber, QuadraticNumber)> {
        let delta = self.right.value().ok_or(Error::IndexOutOfRange(0))?;
        Ok((delta, -self.left.zero_value()))
    }

    /// Tail values `Delta_i = [a_i; a_{i+1}, ...]` and
    /// `-Delta_tilde_i = [0; a_{i-1}, a_{i-2}, ...]`.
    pub fn tail_values(&self, i: i64) -> Result<(QuadraticNumber, QuadraticNumber)> {
        if self.left.is_finite() || self.right.is_finite() {
            return Err(Error::NonPeriodicTail);
        }
        self.shift(i)?.values_at_origin()
    }

    /// Convergent pair at index `i`.
    pub fn convergent(&self, i: i64) -> Result<ConvergentPair> {
        let (lo, hi) = (i.min(0), i.max(0));
        let table = self.convergents(lo, hi)?;
        Ok(table.into_iter().find(|c| c.index == i).expect("index in table"))
    }

    /// Convergent pairs for indices `lo..=hi` (with `lo <= 0 <= hi` widened as needed).
    pub fn convergents(&self, lo: i64, hi: i64) -> Result<Vec<ConvergentPair>> {
        let hi = hi.max(0);
        let lo = lo.min(-1);
        let mut fwd = vec![
            ConvergentPair { index: -1, p: BigInt::zero(), q: BigInt::one() },
            ConvergentPair { index: 0, p: BigInt::one(), q: BigInt::zero() },
        ];
        for i in 0..hi {
            let a = BigInt::from(self.coeff(i)?);
            let (prev, cur) = (&fwd[fwd.len() - 2], &fwd[fwd.len() - 1]);
            let next = ConvergentPair {
                index: i + 1,
                p: &a * &cur.p + &prev.p,
                q: &a * &cur.q + &prev.q,
            };
            fwd.push(next);
        }
        let mut back: Vec<ConvergentPair> = Vec::new();
        let (mut nxt, mut cur) = (fwd[1].clone(), fwd[0].clone());
        let mut i = -1;
        while i > lo {
            let a = BigInt::from(self.coeff(i)?);
            let prev = ConvergentPair {
                index: i - 1,
                p: &nxt.p - &a * &cur.p,
                q: &nxt.q - &a * &cur.q,
            };
            back.push(prev.clone());
            nxt = cur;
            cur = prev;
            i -= 1;
        }
        back.reverse();
        back.extend(fwd);
        Ok(back)
    }
}

/// Convergent numerator and denominator, `p_{i+1} = a_i p_i + p_{i-1}` with
/// `p_{-1} = 0, p_0 = 1, q_{-1} = 1, q_0 = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvergentPair {
    pub index: i64,
    pub p: BigInt,
    pub q: BigInt,
}

impl ConvergentPair {
    /// `p - q x`.
    pub fn eval(&self, x: &QuadraticNumber) -> QuadraticNumber {
        QuadraticNumber::from_integer(self.p.clone())
            - x * &QuadraticNumber::from_integer(self.q.clone())
    }
}

/// Quadratic integer `floor(-conj(n delta_d)) + n delta_d`, whose expansion is
/// purely periodic and whose lattice is that of `Z[n delta_d]`.
pub fn purely_periodic_generator(d: u64, n: u64) -> Result<QuadraticNumber> {
    if d < 2 || !is_squarefree(d) {
        return Err(Error::NotSquarefree(d));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let delta = QuadraticNumber::delta(d)?.scale(&BigRational::from_integer(BigInt::from(n)));
    let shift = (-delta.conj()).floor();
    Ok(delta + QuadraticNumber::from_integer(shift))
}

// ---- text forms ----

fn parse_list(text: &str, offset: usize) -> Result<Vec<u64>> {
    let t = text.trim();
    if t.is_empty() {
        return Ok(Vec::new());
    }
    t.split(',')
        .map(|s| {
            s.trim().parse::<u64>().map_err(|_| Error::Parse {
                pos: offset,
                msg: format!("bad coefficient '{}'", s.trim()),
            })
        })
        .collect()
}

/// Splits `items` into the parenthesized group and the rest. `group_last`
/// selects where the group must sit.
fn split_group(text: &str, offset: usize, group_last: bool) -> Result<(Vec<u64>, Vec<u64>)> {
    let t = text.trim();
    let (open, close) = match (t.find('('), t.find(')')) {
        (None, None) => return Ok((parse_list(t, offset)?, Vec::new())),
        (Some(o), Some(c)) if o < c => (o, c),
        _ => return Err(Error::Parse { pos: offset, msg: "unbalanced parentheses".into() }),
    };
    let group = parse_list(&t[open + 1..close], offset + open + 1)?;
    if group_last {
        if !t[close + 1..].trim().is_empty() {
            return Err(Error::Parse { pos: offset + close + 1, msg: "period must come last".into() });
        }
        let rest = t[..open].trim().trim_end_matches(',');
        Ok((parse_list(rest, offset)?, group))
    } else {
        if !t[..open].trim().is_empty() {
            return Err(Error::Parse { pos: offset, msg: "period must come first".into() });
        }
        let rest = t[close + 1..].trim().trim_start_matches(',');
        Ok((parse_list(rest, offset + close + 1)?, group))
    }
}

impl FromStr for Expansion {
    type Err = Error;
    /// `[a0; a1, ..., (p1, ..., pl)]` or `[(p1, ..., pl)]`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let inner = t
            .strip_prefix('[')
            .and_then(|x| x.strip_suffix(']'))
            .ok_or(Error::Parse { pos: 0, msg: "expected [...]".into() })?;
        let inner_t = inner.trim();
        if inner_t.starts_with('(') && !inner_t.contains(';') {
            let (_, period) = split_group(inner_t, 1, true)?;
            let (&first, rest) = period
                .split_first()
                .ok_or(Error::Parse { pos: 1, msg: "empty period".into() })?;
            let mut p = rest.to_vec();
            p.push(first);
            return Ok(Expansion { first: first as i64, tail: OneSided::periodic(p)? });
        }
        let (head, tail) = match inner.split_once(';') {
            Some((h, tl)) => (h, tl),
            None => (inner, ""),
        };
        let first: i64 = head
            .trim()
            .parse()
            .map_err(|_| Error::Parse { pos: 1, msg: format!("bad leading term '{}'", head.trim()) })?;
        let (pre, period) = split_group(tail, head.len() + 2, true)?;
        Ok(Expansion { first, tail: OneSided::new(pre, period)? })
    }
}

impl FromStr for CFSequence {
    type Err = Error;
    /// `left|right`. The right side reads `a_0, a_1, ..., (period)`; the left
    /// side is written in natural order ending at `a_{-1}`: `(period), ..., a_{-1}`.
    /// A plain `[...]` expansion with `a_0 >= 1` is accepted as a right side.
    fn from_str(s: &str) -> Result<Self> {
        if s.trim_start().starts_with('[') {
            let e: Expansion = s.parse()?;
            if e.first < 1 {
                return Err(Error::Parse { pos: 0, msg: "a_0 must be positive".into() });
            }
            return Ok(Self::new(OneSided::default(), e.tail.push_front(e.first as u64)));
        }
        let (l, r) = s
            .split_once('|')
            .ok_or(Error::Parse { pos: 0, msg: "expected 'left|right'".into() })?;
        let (lpre, lper) = split_group(l, 0, false)?;
        let (rpre, rper) = split_group(r, l.len() + 1, true)?;
        let rev = |mut v: Vec<u64>| {
            v.reverse();
            v
        };
        Ok(Self::new(OneSided::new(rev(lpre), rev(lper))?, OneSided::new(rpre, rper)?))
    }
}

impl fmt::Display for CFSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.left.write_items(f, true)?;
        write!(f, "|")?;
        self.right.write_items(f, false)
    }
}
