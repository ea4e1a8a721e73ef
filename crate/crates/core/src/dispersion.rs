//! Dispersion of two-sided coefficient sequences and of the lattices of
//! quadratic orders.
//!
//! The dispersion of a sequence is `sup_i max_j f(a_i, j, Delta_i, Delta~_i)`
//! with `f = (1 - j + Delta)(1 + j - Delta~)/(Delta - Delta~)`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::boxwalk::{enumerate_boxes, volume_decomposition, LatticeNormalForm, WalkMode};
use crate::contfrac::{cf_expand, finite_value, purely_periodic_generator, CFSequence, Expansion};
use crate::error::{Error, Result};
use crate::qfield::{ci_compare, is_squarefree, rat, Expr, QuadraticNumber};

/// Indices examined per side before giving up.
pub const WINDOW_CAP: usize = 1 << 14;

/// Normalized volume of box `j` in coefficient block `i`.
pub fn box_value(a: u64, j: u64, delta_i: &QuadraticNumber, delta_tilde_i: &QuadraticNumber) -> Result<Expr> {
    if j >= a {
        return Err(Error::InvalidArgument(format!("box index j = {j} needs j < a = {a}")));
    }
    let one_j = QuadraticNumber::from_integer(1 - j as i64);
    let one_pj = QuadraticNumber::from_integer(1 + j as i64);
    let num = Expr::from(one_j + delta_i) * Expr::from(one_pj - delta_tilde_i);
    num.checked_div(Expr::from(delta_i) - Expr::from(delta_tilde_i))
}

/// Box value at index `i`, position `j` of a sequence.
pub fn witness_box_value(seq: &CFSequence, i: i64, j: u64) -> Result<Expr> {
    let (d, dt) = seq.tail_values(i)?;
    box_value(seq.coeff(i)?, j, &d, &dt)
}

/// Lower and upper bound on the largest box value of a block with coefficient `a`.
pub fn coefficient_bounds(a: u64) -> Result<(BigRational, BigRational)> {
    if a < 2 {
        return Err(Error::InvalidArgument(format!("coefficient bounds need a >= 2, got {a}")));
    }
    let r = BigRational::from_integer(BigInt::from(a % 2));
    let l = |x: u64| {
        let x = BigRational::from_integer(BigInt::from(x));
        &x / BigRational::from_integer(4.into()) + BigRational::one() + x.recip()
            - &r / (BigRational::from_integer(4.into()) * &x)
    };
    Ok((l(a), l(a + 2)))
}

/// Positions `j` that can maximize the box value in a block of `a` boxes.
fn candidates(a: u64) -> Vec<u64> {
    let mut v = vec![a / 2, a.div_ceil(2)];
    v.dedup();
    v.retain(|&j| j < a);
    v
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Right,
    Left,
}

/// Where the supremum is reached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// A box at coefficient index `i`, position `j`.
    Box { i: i64, j: u64 },
    /// Approached along the periodic tail on one side; `phase` counts from
    /// the start of that side's period.
    Limit { side: Side, phase: usize, j: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DispValue {
    Finite(Expr),
    /// A finite side leaves an empty strip of infinite area.
    Infinite,
}

impl DispValue {
    pub fn exact(&self) -> Option<&QuadraticNumber> {
        match self {
            DispValue::Finite(e) => e.exact(),
            DispValue::Infinite => None,
        }
    }

    pub fn expr(&self) -> Option<&Expr> {
        match self {
            DispValue::Finite(e) => Some(e),
            DispValue::Infinite => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DispersionResult {
    pub value: DispValue,
    pub attained: bool,
    pub witness: Option<Witness>,
}

struct SideSup {
    value: Expr,
    attained: bool,
    witness: Witness,
}

fn cmp(a: &Expr, b: &Expr) -> Result<Ordering> {
    ci_compare(a, b)
}

/// Certified supremum over indices `i >= 0`.
fn right_sup(seq: &CFSequence, side: Side) -> Result<SideSup> {
    let n0 = seq.right.preperiod().len();
    let per = seq.right.period().to_vec();
    let l = per.len();

    struct Phase {
        t_inf: QuadraticNumber,
        delta_inf: QuadraticNumber,
        limits: Vec<(u64, Expr)>,
    }
    let mut phases = Vec::with_capacity(l);
    let mut best_lim: Option<(Expr, usize, u64)> = None;
    for phi in 0..l {
        let mut rot = per.clone();
        rot.rotate_left(phi);
        let (d, dt) = CFSequence::periodic(&rot)?.values_at_origin()?;
        let mut limits = Vec::new();
        for j in candidates(per[phi]) {
            let v = box_value(per[phi], j, &d, &dt)?;
            if best_lim.as_ref().map_or(true, |(b, _, _)| cmp(&v, b).map_or(false, |o| o.is_gt())) {
                best_lim = Some((v.clone(), phi, j));
            }
            limits.push((j, v));
        }
        phases.push(Phase { t_inf: -dt, delta_inf: d, limits });
    }
    let (lim_val, lim_phi, lim_j) = best_lim.expect("nonempty period");

    let (d0, dt0) = seq.values_at_origin()?;
    let mut deltas = vec![d0];
    let mut ts = vec![-dt0];
    let coeff = |i: usize| seq.right.get(i).expect("infinite side");
    let ensure_t = |ts: &mut Vec<QuadraticNumber>, k: usize| {
        while ts.len() <= k {
            let i = ts.len() - 1;
            let next = (QuadraticNumber::from_integer(coeff(i)) + &ts[i]).inv().expect("positive");
            ts.push(next);
        }
    };

    let mut best_win: Option<(Expr, usize, u64)> = None;
    let mut evaluated = 0usize;
    let mut m = 2usize;
    loop {
        let hi = n0 + m * l;
        if hi > WINDOW_CAP {
            return Err(Error::CapExceeded(format!("dispersion window beyond {WINDOW_CAP} indices")));
        }
        ensure_t(&mut ts, hi + 2 * l);
        while evaluated < hi {
            let i = evaluated;
            let a = coeff(i);
            if deltas.len() <= i {
                let prev = &deltas[i - 1];
                let next = (prev - &QuadraticNumber::from_integer(coeff(i - 1))).inv()?;
                deltas.push(next);
            }
            let dt = -&ts[i];
            for j in candidates(a) {
                let v = box_value(a, j, &deltas[i], &dt)?;
                let better = match &best_win {
                    None => true,
                    Some((b, _, _)) => cmp(&v, b)?.is_gt(),
                };
                if better {
                    best_win = Some((v, i, j));
                }
            }
            evaluated += 1;
        }
        let (win_val, win_i, win_j) = best_win.clone().expect("window nonempty");
        let win_wins = cmp(&win_val, &lim_val)? != Ordering::Less;
        let cur = if win_wins { win_val.clone() } else { lim_val.clone() };

        let mut certified = true;
        'phases: for (phi, ph) in phases.iter().enumerate() {
            let a = per[phi];
            let upper = if a == 1 { rat(2, 1) } else { coefficient_bounds(a)?.1 };
            if cmp(&Expr::from(QuadraticNumber::from_rational(upper)), &cur)? != Ordering::Greater {
                continue;
            }
            let i1 = hi + phi;
            let depth = i1 - n0;
            // t_i for later indices of this phase share the first `depth` coefficients
            let mut prefix: Vec<u64> = (1..=depth).map(|k| per[(phi + l * depth - k) % l]).collect();
            let t_a = finite_value(&prefix).recip();
            *prefix.last_mut().expect("depth >= 1") += 1;
            let t_b = finite_value(&prefix).recip();
            let t_max = QuadraticNumber::from_rational(if t_a > t_b { t_a } else { t_b });
            for (j, lim) in &ph.limits {
                let bound = box_value(a, *j, &ph.delta_inf, &-&t_max)?;
                if cmp(&bound, &cur)? != Ordering::Greater {
                    continue;
                }
                let below = |t: &QuadraticNumber| -> Result<bool> {
                    Ok(cmp(&Expr::from(t), &Expr::from(&ph.t_inf))? != Ordering::Greater)
                };
                if cmp(lim, &cur)? != Ordering::Greater && below(&ts[i1])? && below(&ts[i1 + l])? {
                    continue;
                }
                certified = false;
                break 'phases;
            }
        }
        if certified {
            return Ok(if win_wins {
                SideSup { value: cur, attained: true, witness: Witness::Box { i: win_i as i64, j: win_j } }
            } else {
                SideSup {
                    value: cur,
                    attained: false,
                    witness: Witness::Limit { side, phase: lim_phi, j: lim_j },
                }
            });
        }
        m *= 2;
    }
}

/// Dispersion of a two-sided sequence, certified exactly.
pub fn disp_sequence(seq: &CFSequence) -> Result<DispersionResult> {
    if seq.left.is_finite() || seq.right.is_finite() {
        return Ok(DispersionResult { value: DispValue::Infinite, attained: true, witness: None });
    }
    let right = right_sup(seq, Side::Right)?;
    let rev = seq.reversed()?;
    let mut left = right_sup(&rev, Side::Left)?;
    if let Witness::Box { i, j } = left.witness {
        left.witness = if j == 0 {
            Witness::Box { i: 1 - i, j: 0 }
        } else {
            Witness::Box { i: -i, j: rev.coeff(i)? - j }
        };
    }
    let pick = match cmp(&right.value, &left.value)? {
        Ordering::Greater => right,
        Ordering::Less => left,
        Ordering::Equal if right.attained || !left.attained => right,
        Ordering::Equal => left,
    };
    Ok(DispersionResult {
        value: DispValue::Finite(pick.value),
        attained: pick.attained,
        witness: Some(pick.witness),
    })
}

/// `Z[n delta_d]` for squarefree `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SubringSpec {
    pub d: u64,
    pub n: u64,
}

impl SubringSpec {
    pub fn new(d: u64, n: u64) -> Result<Self> {
        if d < 2 || !is_squarefree(d) {
            return Err(Error::NotSquarefree(d));
        }
        if n == 0 {
            return Err(Error::InvalidArgument("n must be positive".into()));
        }
        Ok(Self { d, n })
    }

    /// Discriminant `n^2 d` or `4 n^2 d`.
    pub fn discriminant(&self) -> u64 {
        let base = self.n * self.n * self.d;
        if self.d % 4 == 1 {
            base
        } else {
            4 * base
        }
    }

    /// Covolume `sqrt(discriminant)`.
    pub fn det(&self) -> QuadraticNumber {
        let k = if self.d % 4 == 1 { self.n } else { 2 * self.n };
        QuadraticNumber::sqrt(self.d).expect("squarefree").scale(&BigRational::from_integer(k.into()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticDispersion {
    pub spec: SubringSpec,
    pub discriminant: u64,
    pub det: QuadraticNumber,
    /// Largest empty box volume.
    pub dispersion: QuadraticNumber,
    /// Dispersion divided by the determinant.
    pub normalized: QuadraticNumber,
    pub generator: QuadraticNumber,
    pub period: Vec<u64>,
    pub via_sequence: DispersionResult,
}

/// `(sqrt(D)/2 + 1)^2 - r/4` with `r = D mod 2`, over `sqrt(D)`.
fn normalized_closed_form(disc: u64) -> QuadraticNumber {
    let s = QuadraticNumber::sqrt(disc).expect("positive");
    let r = rat((disc % 2) as i64, 4);
    let v = (s.scale(&rat(1, 2)) + QuadraticNumber::one()).checked_mul(&(s.scale(&rat(1, 2)) + QuadraticNumber::one()))
        .expect("single field")
        .add_rational(&-r);
    v.checked_div(&s).expect("nonzero")
}

/// Closed-form dispersion of the lattice of `Z[n delta_d]`, checked against
/// the sequence computation.
pub fn disp_quadratic(spec: SubringSpec) -> Result<QuadraticDispersion> {
    let disc = spec.discriminant();
    let det = spec.det();
    let normalized = normalized_closed_form(disc);
    let dispersion = &normalized * &det;
    let generator = purely_periodic_generator(spec.d, spec.n)?;
    let seq = CFSequence::from_lattice(&generator, &generator.conj())?;
    let via_sequence = disp_sequence(&seq)?;
    if via_sequence.value.exact() != Some(&normalized) {
        return Err(Error::Internal(format!(
            "closed form {normalized} disagrees with sequence value for d = {}, n = {}",
            spec.d, spec.n
        )));
    }
    let period = cf_expand(&generator)?
        .pure_period()
        .ok_or_else(|| Error::NotPurelyPeriodic(generator.to_string()))?;
    Ok(QuadraticDispersion { spec, discriminant: disc, det, dispersion, normalized, generator, period, via_sequence })
}

/// Dispersion of a bi-infinite periodic sequence, which must be single-field.
pub fn disp_periodic(period: &[u64]) -> Result<QuadraticNumber> {
    let r = disp_sequence(&CFSequence::periodic(period)?)?;
    r.value
        .exact()
        .cloned()
        .ok_or_else(|| Error::Internal("periodic sequence gave a mixed value".into()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TightBounds {
    pub a: u64,
    /// Dispersion of the constant sequence `a`.
    pub lower: QuadraticNumber,
    /// Dispersion of the periodic sequence `(a, 1)`.
    pub upper: QuadraticNumber,
}

/// `1 + (D + 4 - r)/(4 sqrt(D))` with `r = D mod 2`.
fn one_plus_over_sqrt(numer: u64, disc: u64) -> QuadraticNumber {
    let s = QuadraticNumber::sqrt(disc).expect("positive");
    let q = QuadraticNumber::from_integer(numer as i64).checked_div(&s.scale(&rat(4, 1))).expect("nonzero");
    q + QuadraticNumber::one()
}

pub fn tight_bounds(a: u64) -> Result<TightBounds> {
    if a == 0 {
        return Err(Error::InvalidArgument("coefficient must be positive".into()));
    }
    let r = a % 2;
    let lower = one_plus_over_sqrt(a * a + 8 - r, a * a + 4);
    let d = a * a + 4 * a;
    let upper = one_plus_over_sqrt(d + 4 - r, d);
    let lower_seq = disp_periodic(&[a])?;
    let upper_seq = disp_periodic(&[a, 1])?;
    if lower != lower_seq || upper != upper_seq {
        return Err(Error::Internal(format!("tight bounds for a = {a} disagree with sequences")));
    }
    Ok(TightBounds { a, lower, upper })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table1Row {
    pub a: u64,
    pub l: BigRational,
    pub lower: QuadraticNumber,
    pub upper: QuadraticNumber,
    pub u: BigRational,
}

pub fn table1(coeffs: &[u64]) -> Result<Vec<Table1Row>> {
    coeffs
        .par_iter()
        .map(|&a| {
            let (l, u) = coefficient_bounds(a)?;
            let tb = tight_bounds(a)?;
            Ok(Table1Row { a, l, lower: tb.lower, upper: tb.upper, u })
        })
        .collect()
}

/// Coefficients shown in the reference table.
pub const TABLE1_COEFFS: [u64; 17] = [2, 3, 4, 5, 6, 7, 8, 9, 10, 25, 50, 75, 100, 150, 200, 500, 1000];

pub fn fibonacci(k: u32) -> BigInt {
    let (mut a, mut b) = (BigInt::zero(), BigInt::one());
    for _ in 0..k {
        let c = &a + &b;
        a = b;
        b = c;
    }
    a
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BestLattice {
    pub rank: u32,
    pub period: Vec<u64>,
    pub value: QuadraticNumber,
}

/// Period of the `rank`-th smallest dispersion among quadratic lattices.
pub fn best_period(rank: u32) -> Result<Vec<u64>> {
    match rank {
        0 => Err(Error::InvalidArgument("rank starts at 1".into())),
        1 => Ok(vec![1]),
        2 => Ok(vec![2]),
        k => {
            let n = (k - 2) as usize;
            let mut p = vec![2];
            p.extend(std::iter::repeat(1).take(2 * n));
            p.push(2);
            Ok(p)
        }
    }
}

pub fn best_lattice(rank: u32) -> Result<BestLattice> {
    let period = best_period(rank)?;
    let closed = if rank == 1 {
        QuadraticNumber::from_integer(1) + QuadraticNumber::sqrt(5)?.inv()?.scale(&rat(2, 1))
    } else {
        let n = rank - 2;
        let f_far = fibonacci(2 * n + 4);
        let f_near = fibonacci(2 * n + 3);
        let radicand = BigInt::from(9) * &f_near * &f_near - BigInt::from(4);
        let root = QuadraticNumber::new(BigRational::zero(), BigRational::one(), radicand)?;
        QuadraticNumber::from_integer(f_far * 2).checked_div(&root)? + QuadraticNumber::one()
    };
    let value = disp_periodic(&period)?;
    if value != closed {
        return Err(Error::Internal(format!("rank {rank}: {value} vs closed form {closed}")));
    }
    Ok(BestLattice { rank, period, value })
}

/// Supremum of the best-lattice values.
pub fn best_limit() -> QuadraticNumber {
    (QuadraticNumber::from_integer(4) + QuadraticNumber::sqrt(5).expect("5")).scale(&rat(1, 3))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormRow {
    pub i: usize,
    pub a: u64,
    /// `N(p_i - q_i Delta)`.
    pub norm: BigInt,
    /// Norm bounds, checked for `0 < i < l`.
    pub within_bounds: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientBoundReport {
    pub delta: QuadraticNumber,
    pub period: Vec<u64>,
    pub a0: u64,
    pub max_interior: Option<u64>,
    /// `floor((Delta - conj(Delta))/2)`.
    pub bound: BigInt,
    pub interior_ok: bool,
    /// Interior coefficients at most `a_0`.
    pub interior_le_a0: bool,
    /// Interior coefficients at most `ceil(a_0/2)`.
    pub interior_le_half_a0: bool,
    pub norms: Vec<NormRow>,
    /// `(-1)^i N(p_i - q_i Delta) = 1` exactly when the period length divides `i`.
    pub sign_property_ok: bool,
}

impl CoefficientBoundReport {
    pub fn pass(&self) -> bool {
        self.interior_ok && self.sign_property_ok && self.norms.iter().all(|r| r.within_bounds != Some(false))
    }
}

fn pure_period_of(delta: &QuadraticNumber) -> Result<(Expansion, Vec<u64>)> {
    if !delta.is_quadratic_integer() || delta.is_rational() {
        return Err(Error::NotQuadraticInteger(delta.to_string()));
    }
    let e = cf_expand(delta)?;
    let p = e.pure_period().ok_or_else(|| Error::NotPurelyPeriodic(delta.to_string()))?;
    Ok((e, p))
}

/// Checks the interior coefficient bound and the norm table of a purely
/// periodic quadratic integer over indices `0..=3l`.
pub fn coefficient_bound_check(delta: &QuadraticNumber) -> Result<CoefficientBoundReport> {
    let (_, period) = pure_period_of(delta)?;
    let l = period.len();
    let spread = delta - &delta.conj();
    let bound = spread.scale(&rat(1, 2)).floor();
    let max_interior = period[1..].iter().copied().max();
    let interior_ok = max_interior.map_or(true, |m| BigInt::from(m) <= bound);
    let seq = CFSequence::periodic(&period)?;
    let conv = seq.convergents(-1, 3 * l as i64)?;
    let mut norms = Vec::new();
    let mut sign_ok = true;
    for c in conv.iter().filter(|c| c.index >= 0) {
        let i = c.index as usize;
        let a = period[i % l];
        let norm = c.eval(delta).norm();
        let norm_int = norm.to_integer();
        let abs = QuadraticNumber::from_rational(num_traits::Signed::abs(&norm));
        let lower = spread.scale(&rat(1, a as i64 + 2));
        let upper = spread.scale(&rat(1, a as i64));
        let within = (i > 0 && i < l)
            .then(|| !(&abs - &lower).is_negative() && !(&upper - &abs).is_negative());
        let signed = if i % 2 == 0 { norm_int.clone() } else { -norm_int.clone() };
        if (signed == BigInt::one()) != (i % l == 0) {
            sign_ok = false;
        }
        norms.push(NormRow { i, a, norm: norm_int, within_bounds: within });
    }
    let interior_le_a0 = max_interior.map_or(true, |m| m <= period[0]);
    let interior_le_half_a0 = max_interior.map_or(true, |m| m <= period[0].div_ceil(2));
    Ok(CoefficientBoundReport {
        delta: delta.clone(),
        a0: period[0],
        period,
        max_interior,
        bound,
        interior_ok,
        interior_le_a0,
        interior_le_half_a0,
        norms,
        sign_property_ok: sign_ok,
    })
}

/// Purely periodic quadratic integers with `1 <= trace <= trace_max` and
/// `1 <= |norm| <= norm_max`: roots above 1 of `x^2 - t x - k`.
pub fn purely_periodic_integers(trace_max: u64, norm_max: u64) -> Vec<(u64, i64, QuadraticNumber)> {
    let mut out = Vec::new();
    for t in 1..=trace_max {
        for k in 1..=norm_max.min(t) {
            let disc = t * t + 4 * k;
            let r = (disc as f64).sqrt() as u64;
            if (r.saturating_sub(1)..=r + 1).any(|s| s * s == disc) {
                continue;
            }
            let x = QuadraticNumber::quadratic_root(
                &BigInt::one(),
                &-BigInt::from(t),
                &-BigInt::from(k),
                true,
            )
            .expect("real root");
            out.push((t, -(k as i64), x));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientStats {
    pub trace: u64,
    pub norm: i64,
    pub delta: QuadraticNumber,
    pub period: Vec<u64>,
    /// Distinct coefficients, largest first.
    pub distinct: Vec<u64>,
    /// `max_n n * w_n / a_0`.
    pub max_ratio: BigRational,
}

impl CoefficientStats {
    /// Whether `w_n <= a_0 / n` fails somewhere.
    pub fn is_counterexample(&self) -> bool {
        self.max_ratio > BigRational::one()
    }
}

pub fn coefficient_statistics_scan(trace_max: u64, norm_max: u64) -> Result<Vec<CoefficientStats>> {
    purely_periodic_integers(trace_max, norm_max)
        .into_par_iter()
        .map(|(trace, norm, delta)| {
            let (_, period) = pure_period_of(&delta)?;
            let mut distinct = period.clone();
            distinct.sort_unstable_by(|a, b| b.cmp(a));
            distinct.dedup();
            let a0 = BigInt::from(period[0]);
            let max_ratio = distinct
                .iter()
                .enumerate()
                .map(|(k, &w)| BigRational::new(BigInt::from((k as u64 + 1) * w), a0.clone()))
                .max()
                .expect("nonempty");
            Ok(CoefficientStats { trace, norm, delta, period, distinct, max_ratio })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormPoint {
    pub n: i64,
    /// `|N(alpha_n)| + |N(beta_n)|`, the volume of `B_n` less `Delta - conj(Delta)`.
    pub norm_part: BigInt,
    /// Whether `n` is a partial sum `A_i` of the coefficients.
    pub at_convergent: bool,
}

/// Norm parts of the boxes `B_0..=B_max_n` of the lattice of a purely periodic
/// quadratic integer.
pub fn norm_series(delta: &QuadraticNumber, max_n: i64) -> Result<(Vec<u64>, Vec<NormPoint>)> {
    let (_, period) = pure_period_of(delta)?;
    let lattice = LatticeNormalForm::new(delta.clone(), delta.conj(), WalkMode::Irrational)?;
    let mut partial = std::collections::HashSet::new();
    let mut acc = 0i64;
    for a in period.iter().cycle() {
        if acc > max_n {
            break;
        }
        partial.insert(acc);
        acc += *a as i64;
    }
    let points = enumerate_boxes(&lattice, 0, max_n)?
        .iter()
        .map(|b| {
            let parts = volume_decomposition(b, &lattice)?;
            let v = parts
                .norm_part
                .into_exact()
                .filter(|x| x.is_integer())
                .ok_or_else(|| Error::Internal(format!("norm part of box {} is not an integer", b.n)))?;
            Ok(NormPoint { n: b.n, norm_part: v.floor(), at_convergent: partial.contains(&b.n) })
        })
        .collect::<Result<_>>()?;
    Ok((period, points))
}
