//! Maximal empty boxes bounded below by the origin, walked up and down from
//! the starting box of a normal form.

use std::fmt::Write as _;

use crate::contfrac::CFSequence;
use crate::error::{Error, Result};
use crate::qfield::{Expr, QuadraticNumber};

/// Step cap for walks and reductions.
pub const WALK_CAP: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WalkMode {
    /// Both normal-form parameters irrational; the walk never stops.
    Irrational,
    /// Rational parameters; the walk stops when a box degenerates.
    Torus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Up,
    Down,
}

/// Lattice generated by `(1, 1)` and `(-delta, -delta_tilde)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeNormalForm {
    delta: QuadraticNumber,
    delta_tilde: QuadraticNumber,
    mode: WalkMode,
}

impl LatticeNormalForm {
    /// Irrational mode wants `delta > 1 > 0 > delta_tilde > -1`; torus mode
    /// relaxes this to `delta >= 1` and `-1 <= delta_tilde <= 0`.
    pub fn new(delta: QuadraticNumber, delta_tilde: QuadraticNumber, mode: WalkMode) -> Result<Self> {
        let one = QuadraticNumber::one();
        let ok = match mode {
            WalkMode::Irrational => {
                if delta.is_rational() || delta_tilde.is_rational() {
                    return Err(Error::NotIrrational);
                }
                delta.signum() > 0
                    && (&delta - &one).is_positive()
                    && delta_tilde.is_negative()
                    && (&delta_tilde + &one).is_positive()
            }
            WalkMode::Torus => {
                !(&delta - &one).is_negative()
                    && !delta_tilde.is_positive()
                    && !(&delta_tilde + &one).is_negative()
            }
        };
        if !ok {
            return Err(Error::NotNormalForm(format!(
                "delta = {delta}, delta_tilde = {delta_tilde}"
            )));
        }
        Ok(Self { delta, delta_tilde, mode })
    }

    pub fn delta(&self) -> &QuadraticNumber {
        &self.delta
    }

    pub fn delta_tilde(&self) -> &QuadraticNumber {
        &self.delta_tilde
    }

    pub fn mode(&self) -> WalkMode {
        self.mode
    }

    /// Determinant `delta - delta_tilde`.
    pub fn det(&self) -> Expr {
        Expr::from(&self.delta) - Expr::from(&self.delta_tilde)
    }

    /// Coefficient sequence of the normal form.
    pub fn sequence(&self) -> Result<CFSequence> {
        CFSequence::from_lattice(&self.delta, &self.delta_tilde)
    }

    /// Moves a torus normal form with `delta_tilde = 0` one coefficient along,
    /// applying `x -> 1/(x - floor(delta))` to both parameters.
    pub fn reindexed(&self) -> Result<Self> {
        let a = QuadraticNumber::from_integer(self.delta.floor());
        let d = (&self.delta - &a).inv()?;
        let dt = (&self.delta_tilde - &a).inv()?;
        Self::new(d, dt, self.mode)
    }
}

/// Box `(alpha, beta) x (0, alpha_tilde + beta_tilde)` with left point
/// `(alpha, alpha_tilde)` and right point `(beta, beta_tilde)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxEmptyBox {
    pub n: i64,
    pub alpha: QuadraticNumber,
    pub alpha_tilde: QuadraticNumber,
    pub beta: QuadraticNumber,
    pub beta_tilde: QuadraticNumber,
}

impl MaxEmptyBox {
    pub fn left(&self) -> (QuadraticNumber, QuadraticNumber) {
        (self.alpha.clone(), self.alpha_tilde.clone())
    }

    pub fn right(&self) -> (QuadraticNumber, QuadraticNumber) {
        (self.beta.clone(), self.beta_tilde.clone())
    }

    pub fn top(&self) -> (QuadraticNumber, QuadraticNumber) {
        (&self.alpha + &self.beta, &self.alpha_tilde + &self.beta_tilde)
    }

    pub fn width(&self) -> QuadraticNumber {
        &self.beta - &self.alpha
    }

    pub fn height(&self) -> QuadraticNumber {
        &self.alpha_tilde + &self.beta_tilde
    }

    pub fn volume(&self) -> Expr {
        Expr::from(self.width()) * Expr::from(self.height())
    }

    /// Volume divided by the lattice determinant.
    pub fn normalized_volume(&self, lattice: &LatticeNormalForm) -> Expr {
        self.volume() / lattice.det()
    }
}

pub fn starting_box(lattice: &LatticeNormalForm) -> Result<MaxEmptyBox> {
    if lattice.delta_tilde.is_zero() {
        return Err(Error::NotNormalForm("delta_tilde = 0; reindex first".into()));
    }
    Ok(MaxEmptyBox {
        n: 0,
        alpha: -lattice.delta(),
        alpha_tilde: -lattice.delta_tilde(),
        beta: QuadraticNumber::one(),
        beta_tilde: QuadraticNumber::one(),
    })
}

/// Next box above (`Up`) or below (`Down`).
pub fn step(b: &MaxEmptyBox, dir: Direction, mode: WalkMode) -> Result<MaxEmptyBox> {
    let stop = || match mode {
        WalkMode::Irrational => Error::NotIrrational,
        WalkMode::Torus => Error::TerminatedWalk(b.n),
    };
    let mut next = b.clone();
    match dir {
        Direction::Up => {
            let s = &b.alpha + &b.beta;
            let st = &b.alpha_tilde + &b.beta_tilde;
            match s.signum() {
                1 => {
                    next.beta = s;
                    next.beta_tilde = st;
                }
                -1 => {
                    next.alpha = s;
                    next.alpha_tilde = st;
                }
                _ => return Err(stop()),
            }
            next.n += 1;
        }
        Direction::Down => {
            let t = &b.alpha_tilde - &b.beta_tilde;
            match t.signum() {
                1 => {
                    next.alpha = &b.alpha - &b.beta;
                    next.alpha_tilde = t;
                }
                -1 => {
                    next.beta = &b.beta - &b.alpha;
                    next.beta_tilde = &b.beta_tilde - &b.alpha_tilde;
                }
                _ => return Err(stop()),
            }
            next.n -= 1;
        }
    }
    Ok(next)
}

/// Boxes `B_n` for `n_min <= n <= n_max`, ordered by `n`.
pub fn enumerate_boxes(lattice: &LatticeNormalForm, n_min: i64, n_max: i64) -> Result<Vec<MaxEmptyBox>> {
    if n_min > n_max {
        return Ok(Vec::new());
    }
    let b0 = starting_box(lattice)?;
    let mut below = Vec::new();
    let mut cur = b0.clone();
    while cur.n > n_min {
        cur = step(&cur, Direction::Down, lattice.mode)?;
        if cur.n <= n_max {
            below.push(cur.clone());
        }
    }
    below.reverse();
    let mut out = below;
    if n_min <= 0 && 0 <= n_max {
        out.push(b0.clone());
    }
    let mut cur = b0;
    while cur.n < n_max {
        cur = step(&cur, Direction::Up, lattice.mode)?;
        if cur.n >= n_min {
            out.push(cur.clone());
        }
    }
    #[cfg(debug_assertions)]
    if lattice.mode == WalkMode::Irrational {
        let closed = closed_form_boxes(lattice, n_min, n_max)?;
        assert_eq!(closed, out, "box walk disagrees with the convergent closed form");
    }
    Ok(out)
}

/// All boxes of a torus-mode walk, from the lowest to the highest.
pub fn walk_to_termination(lattice: &LatticeNormalForm) -> Result<Vec<MaxEmptyBox>> {
    if lattice.mode != WalkMode::Torus {
        return Err(Error::InvalidArgument("walk_to_termination needs torus mode".into()));
    }
    let b0 = starting_box(lattice)?;
    let mut out = Vec::new();
    for dir in [Direction::Down, Direction::Up] {
        let mut cur = b0.clone();
        for _ in 0..WALK_CAP {
            match step(&cur, dir, lattice.mode) {
                Ok(next) => {
                    out.push(next.clone());
                    cur = next;
                }
                Err(Error::TerminatedWalk(_)) => break,
                Err(e) => return Err(e),
            }
        }
    }
    out.push(b0);
    out.sort_by_key(|b| b.n);
    Ok(out)
}

/// Boxes from partial sums of the coefficient sequence and its convergents.
pub fn closed_form_boxes(lattice: &LatticeNormalForm, n_min: i64, n_max: i64) -> Result<Vec<MaxEmptyBox>> {
    let seq = lattice.sequence()?;
    let mut out = Vec::new();
    // locate the coefficient blocks covering [n_min, n_max]
    let mut i_hi = 0i64;
    let mut a_hi = 0i64;
    while a_hi <= n_max {
        a_hi += seq.coeff(i_hi)? as i64;
        i_hi += 1;
    }
    let mut i_lo = 0i64;
    let mut a_lo = 0i64;
    while a_lo > n_min {
        i_lo -= 1;
        a_lo -= seq.coeff(i_lo)? as i64;
    }
    let conv = seq.convergents(i_lo - 1, i_hi)?;
    let at = |i: i64| &conv[(i - conv[0].index) as usize];
    let (d, dt) = (lattice.delta(), lattice.delta_tilde());
    let mut start = a_lo;
    for i in i_lo..i_hi {
        let a = seq.coeff(i)? as i64;
        let (pi, pim) = (at(i), at(i - 1));
        for j in 0..a {
            let n = start + j;
            if n < n_min || n > n_max {
                continue;
            }
            let jq = QuadraticNumber::from_integer(j);
            let side = |x: &QuadraticNumber| (pi.eval(x), &jq * &pi.eval(x) + pim.eval(x));
            let (s, m) = side(d);
            let (st, mt) = side(dt);
            let b = if i.rem_euclid(2) == 1 {
                MaxEmptyBox { n, alpha: s, alpha_tilde: st, beta: m, beta_tilde: mt }
            } else {
                MaxEmptyBox { n, alpha: m, alpha_tilde: mt, beta: s, beta_tilde: st }
            };
            out.push(b);
        }
        start += a;
    }
    Ok(out)
}

/// `vol = |alpha alpha~| + |beta beta~| + (delta - delta~)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VolumeParts {
    pub norm_part: Expr,
    pub constant_part: Expr,
}

pub fn volume_decomposition(b: &MaxEmptyBox, lattice: &LatticeNormalForm) -> Result<VolumeParts> {
    let abs_prod = |x: &QuadraticNumber, y: &QuadraticNumber| -> Result<Expr> {
        let p = Expr::from(x) * Expr::from(y);
        Ok(if p.signum()? < 0 { -p } else { p })
    };
    Ok(VolumeParts {
        norm_part: abs_prod(&b.alpha, &b.alpha_tilde)? + abs_prod(&b.beta, &b.beta_tilde)?,
        constant_part: lattice.det(),
    })
}

/// Basis read off a box: columns are the right and left points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorBasis {
    /// `[[beta, alpha], [beta_tilde, alpha_tilde]]`.
    pub matrix: [[QuadraticNumber; 2]; 2],
    pub top: (QuadraticNumber, QuadraticNumber),
    pub det: Expr,
}

pub fn generator_from_box(
    left: &(QuadraticNumber, QuadraticNumber),
    right: &(QuadraticNumber, QuadraticNumber),
) -> Result<GeneratorBasis> {
    let (a, at) = left;
    let (b, bt) = right;
    let det = Expr::from(b) * Expr::from(at) - Expr::from(a) * Expr::from(bt);
    if det.exact().is_some_and(|x| x.is_zero()) {
        return Err(Error::SingularBasis);
    }
    if !(a.is_negative() && b.is_positive() && at.is_positive() && bt.is_positive()) {
        return Err(Error::InvalidBox("need alpha < 0 < beta and positive ordinates".into()));
    }
    Ok(GeneratorBasis {
        matrix: [[b.clone(), a.clone()], [bt.clone(), at.clone()]],
        top: (a + b, at + bt),
        det,
    })
}

/// Reduces a generator matrix (columns are generators) to a normal form by
/// row scaling and simultaneous continued-fraction steps on the two
/// parameters.
pub fn normal_form(m: &[[QuadraticNumber; 2]; 2], mode: WalkMode) -> Result<LatticeNormalForm> {
    let col = |j: usize| (m[0][j].clone(), m[1][j].clone());
    let det = Expr::from(&m[0][0]) * Expr::from(&m[1][1]) - Expr::from(&m[0][1]) * Expr::from(&m[1][0]);
    if det.exact().is_some_and(|x| x.is_zero()) {
        return Err(Error::SingularBasis);
    }
    let (c0, c1) = (col(0), col(1));
    let sum = (&c0.0 + &c1.0, &c0.1 + &c1.1);
    let nonzero = |c: &(QuadraticNumber, QuadraticNumber)| !c.0.is_zero() && !c.1.is_zero();
    if mode == WalkMode::Irrational
        && [&c0, &c1].iter().any(|c| c.0.is_zero() || c.1.is_zero())
    {
        return Err(Error::NotIrrational);
    }
    let (u, v) = if nonzero(&c0) {
        (c0, c1)
    } else if nonzero(&c1) {
        (c1, c0)
    } else {
        (sum, c1)
    };
    let mut x = -(&v.0 / &u.0);
    let mut y = -(&v.1 / &u.1);
    let one = QuadraticNumber::one();
    if mode == WalkMode::Irrational && (x.is_rational() || y.is_rational()) {
        return Err(Error::NotIrrational);
    }
    let done = |x: &QuadraticNumber, y: &QuadraticNumber| match mode {
        WalkMode::Irrational => (x - &one).is_positive() && y.is_negative() && (y + &one).is_positive(),
        WalkMode::Torus => !(x - &one).is_negative() && !y.is_positive() && !(y + &one).is_negative(),
    };
    for _ in 0..WALK_CAP {
        if done(&x, &y) {
            let nf = LatticeNormalForm::new(x, y, mode)?;
            if nf.delta_tilde.is_zero() {
                return Ok(nf);
            }
            let b0 = starting_box(&nf)?;
            // starting box must satisfy alpha + beta < 0 < beta~ - alpha~
            debug_assert!((&b0.alpha + &b0.beta).is_negative());
            debug_assert!((&b0.beta_tilde - &b0.alpha_tilde).is_positive());
            return Ok(nf);
        }
        let a = QuadraticNumber::from_integer(x.floor());
        let fx = &x - &a;
        let fy = &y - &a;
        if fx.is_zero() || fy.is_zero() {
            return Err(Error::NotNormalForm("reduction reached a rational endpoint".into()));
        }
        x = fx.inv()?;
        y = fy.inv()?;
    }
    Err(Error::CapExceeded("normal form reduction".into()))
}

/// CSV rows `n, alpha, alpha_tilde, beta, beta_tilde, vol, normalized_vol,
/// normalized_vol_decimal`.
pub fn boxes_csv(boxes: &[MaxEmptyBox], lattice: &LatticeNormalForm, digits: u32) -> Result<String> {
    let mut out = String::from("n,alpha,alpha_tilde,beta,beta_tilde,vol,normalized_vol,normalized_vol_decimal\n");
    for b in boxes {
        let nv = b.normalized_volume(lattice);
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            b.n,
            b.alpha,
            b.alpha_tilde,
            b.beta,
            b.beta_tilde,
            b.volume(),
            nv,
            nv.to_decimal(digits)?
        )
        .expect("string write");
    }
    Ok(out)
}
