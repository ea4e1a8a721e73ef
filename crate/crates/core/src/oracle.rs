//! Brute-force largest empty boxes for finite point sets, planar lattices
//! near the origin and rank-1 lattices on the torus.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::boxwalk::MaxEmptyBox;
use crate::error::{Error, Result};
use crate::qfield::{ci_compare, Expr, QuadraticNumber};
use crate::torus::RankOneLattice;

/// Point count accepted by [`brute_dispersion`].
pub const POINT_CAP: usize = 500;
/// Largest `n` accepted by [`brute_periodic_dispersion`].
pub const PERIODIC_CAP: u64 = 4096;

fn qcmp(a: &QuadraticNumber, b: &QuadraticNumber) -> Result<Ordering> {
    if a.compatible(b) {
        a.cmp_exact(b)
    } else {
        ci_compare(&a.into(), &b.into())
    }
}

/// Ordering of box areas; values that cannot be separated count as equal.
fn area_cmp(a: &Expr, b: &Expr) -> Result<Ordering> {
    match ci_compare(a, b) {
        Err(Error::RefinementCap) => Ok(Ordering::Equal),
        r => r,
    }
}

pub type Point = (QuadraticNumber, QuadraticNumber);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    points: Vec<Point>,
}

impl PointSet {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        for (i, p) in points.iter().enumerate() {
            if points[..i].contains(p) {
                return Err(Error::InvalidArgument(format!("duplicate point ({}, {})", p.0, p.1)));
            }
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// One `x,y` pair per line; a leading `x,y` header is skipped.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut pts = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') || (lineno == 0 && line.eq_ignore_ascii_case("x,y")) {
                continue;
            }
            let (x, y) = line
                .split_once(',')
                .ok_or_else(|| Error::InvalidArgument(format!("line {}: expected x,y", lineno + 1)))?;
            pts.push((x.trim().parse()?, y.trim().parse()?));
        }
        Self::new(pts)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("x,y\n");
        for (x, y) in &self.points {
            s.push_str(&format!("{x},{y}\n"));
        }
        s
    }

    /// `({k alpha}, k/n)` for `0 <= k < n`.
    pub fn kronecker(alpha: &QuadraticNumber, n: u64) -> Result<Self> {
        let pts = (0..n)
            .map(|k| {
                let x = alpha.scale(&BigRational::from_integer(k.into()));
                let x = &x - &QuadraticNumber::from_integer(x.floor());
                (x, QuadraticNumber::from_ratio(k as i64, n as i64))
            })
            .collect();
        Self::new(pts)
    }
}

/// Open axis-parallel box `(x0, x1) x (y0, y1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rect {
    pub x0: QuadraticNumber,
    pub x1: QuadraticNumber,
    pub y0: QuadraticNumber,
    pub y1: QuadraticNumber,
}

impl Rect {
    pub fn unit() -> Self {
        let (z, o) = (QuadraticNumber::zero(), QuadraticNumber::one());
        Self { x0: z.clone(), x1: o.clone(), y0: z, y1: o }
    }

    pub fn area(&self) -> Expr {
        Expr::from(&self.x1 - &self.x0) * Expr::from(&self.y1 - &self.y0)
    }

    fn strictly_contains(&self, p: &Point) -> Result<bool> {
        Ok(qcmp(&self.x0, &p.0)?.is_lt()
            && qcmp(&p.0, &self.x1)?.is_lt()
            && qcmp(&self.y0, &p.1)?.is_lt()
            && qcmp(&p.1, &self.y1)?.is_lt())
    }
}

/// Largest open box inside `region` containing no point of `set`.
pub fn brute_dispersion(set: &PointSet, region: &Rect) -> Result<(Expr, Rect)> {
    if set.len() > POINT_CAP {
        return Err(Error::CapExceeded(format!("{} points exceed the cap of {POINT_CAP}", set.len())));
    }
    if !qcmp(&region.x0, &region.x1)?.is_lt() || !qcmp(&region.y0, &region.y1)?.is_lt() {
        return Err(Error::InvalidArgument("empty region".into()));
    }
    let inside: Vec<&Point> = set
        .points
        .iter()
        .filter_map(|p| region.strictly_contains(p).map(|b| b.then_some(p)).transpose())
        .collect::<Result<_>>()?;
    let mut xs: Vec<QuadraticNumber> = vec![region.x0.clone(), region.x1.clone()];
    xs.extend(inside.iter().map(|p| p.0.clone()));
    sort_dedup(&mut xs)?;
    let mut by_y = inside.clone();
    let mut err = None;
    by_y.sort_by(|a, b| qcmp(&a.1, &b.1).unwrap_or_else(|e| {
        err = Some(e);
        Ordering::Equal
    }));
    if let Some(e) = err {
        return Err(e);
    }
    let mut best: Option<(Expr, Rect)> = None;
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            let mut floor = region.y0.clone();
            let mut consider = |top: &QuadraticNumber, floor: &QuadraticNumber| -> Result<()> {
                let r = Rect { x0: xs[i].clone(), x1: xs[j].clone(), y0: floor.clone(), y1: top.clone() };
                let a = r.area();
                if best.as_ref().map_or(Ok(true), |(b, _)| area_cmp(&a, b).map(|o| o.is_gt()))? {
                    best = Some((a, r));
                }
                Ok(())
            };
            for p in &by_y {
                if qcmp(&xs[i], &p.0)?.is_lt() && qcmp(&p.0, &xs[j])?.is_lt() {
                    if qcmp(&p.1, &floor)?.is_gt() {
                        consider(&p.1, &floor)?;
                    }
                    floor = p.1.clone();
                }
            }
            consider(&region.y1, &floor)?;
        }
    }
    Ok(best.expect("region contributes at least one box"))
}

fn sort_dedup(v: &mut Vec<QuadraticNumber>) -> Result<()> {
    let mut err = None;
    v.sort_by(|a, b| qcmp(a, b).unwrap_or_else(|e| {
        err = Some(e);
        Ordering::Equal
    }));
    v.dedup();
    err.map_or(Ok(()), Err)
}

/// Lattice point with floating estimates and absolute error bounds.
struct LatticePoint {
    pq: (i64, i64),
    x: QuadraticNumber,
    y: QuadraticNumber,
    fx: f64,
    fy: f64,
    err: f64,
}

impl LatticePoint {
    fn cmp_x(&self, other: &Self) -> Result<Ordering> {
        fast_cmp(&self.x, self.fx, &other.x, other.fx, self.err + other.err)
    }

    fn cmp_y(&self, other: &Self) -> Result<Ordering> {
        fast_cmp(&self.y, self.fy, &other.y, other.fy, self.err + other.err)
    }
}

fn fast_cmp(a: &QuadraticNumber, fa: f64, b: &QuadraticNumber, fb: f64, err: f64) -> Result<Ordering> {
    if (fa - fb).abs() > err {
        Ok(fa.partial_cmp(&fb).expect("finite"))
    } else {
        qcmp(a, b)
    }
}

/// Maximal empty boxes of the lattice `p(1,1) + q(-Delta, -Delta~)` whose
/// bottom edge passes through the origin, listed upward from the starting box
/// `(-Delta, 1) x (0, 1 - Delta~)`, which is numbered 0.
///
/// Every lattice point with `|x| < window`, `0 < y < height_cap` and
/// `|x| y < window (Delta - Delta~)` is enumerated; a box is reported only when
/// its closure lies in that region, so all points it could contain were seen.
pub fn brute_boxes_origin(
    delta: &QuadraticNumber,
    delta_tilde: &QuadraticNumber,
    window: u64,
    height_cap: &QuadraticNumber,
) -> Result<Vec<MaxEmptyBox>> {
    if window < 5 {
        return Err(Error::WindowTooSmall(format!("window {window} is below 5")));
    }
    let (d, dt, h) = (delta.to_f64(), delta_tilde.to_f64(), height_cap.to_f64());
    let det = d - dt;
    if !(det > 0.0) || !(h > 0.0) {
        return Err(Error::InvalidLattice("need delta > delta_tilde and a positive height".into()));
    }
    let xw = window as f64;
    let k = xw * det * (1.0 - 1e-9);
    let scale = d.abs().max(dt.abs()) + 1.0;
    let make = |p: i64, q: i64| -> LatticePoint {
        let (pp, qq) = (QuadraticNumber::from_integer(p), QuadraticNumber::from_integer(q));
        let (fp, fq) = (p as f64, q as f64);
        LatticePoint {
            pq: (p, q),
            x: &pp - &(delta * &qq),
            y: &pp - &(delta_tilde * &qq),
            fx: fp - fq * d,
            fy: fp - fq * dt,
            err: 1e-13 * (fp.abs() + fq.abs() * scale + 1.0),
        }
    };
    let mut seen = std::collections::HashSet::new();
    let mut pts: Vec<LatticePoint> = Vec::new();
    let (mut ya, mut yb) = (0.0f64, 1.0f64);
    while ya < h {
        let w = if ya > 0.0 { xw.min(xw * det / ya) } else { xw } + 1.0;
        let q_lo = ((ya - w - 1.0) / det).floor() as i64 - 1;
        let q_hi = ((yb + w + 1.0) / det).ceil() as i64 + 1;
        for q in q_lo..=q_hi {
            let fq = q as f64;
            let lo = (fq * d - w).max(fq * dt + ya - 1.0).floor() as i64 - 1;
            let hi = (fq * d + w).min(fq * dt + yb + 1.0).ceil() as i64 + 1;
            for p in lo..=hi {
                if (p, q) == (0, 0) || !seen.insert((p, q)) {
                    continue;
                }
                let (fp, fq) = (p as f64, q as f64);
                let e = 1e-13 * (fp.abs() + fq.abs() * scale + 1.0);
                let (fx, fy) = (fp - fq * d, fp - fq * dt);
                let ax = (fx.abs() - e).max(0.0);
                if ax >= xw || fy - e >= h || fy + e <= 0.0 || ax * (fy - e).max(0.0) >= xw * det {
                    continue;
                }
                let pt = make(p, q);
                if pt.y.is_positive() {
                    pts.push(pt);
                }
            }
        }
        (ya, yb) = (yb, yb * 2.0);
    }
    let mut err = None;
    pts.sort_by(|a, b| {
        a.cmp_y(b).unwrap_or_else(|e| {
            err = Some(e);
            Ordering::Equal
        })
    });
    if let Some(e) = err {
        return Err(e);
    }
    // the box's closure must lie in the enumerated region
    let inside = |l: &LatticePoint, r: &LatticePoint, t: &LatticePoint| {
        let half = (l.fx.abs() + l.err).max(r.fx + r.err);
        let top = t.fy + t.err;
        half <= xw && top <= h && half * top <= k
    };
    // sweep upward keeping the nearest points on each side of the y-axis
    let mut left: Option<usize> = None;
    let mut right: Option<usize> = None;
    let mut boxes = Vec::new();
    let mut anchored = false;
    for t in 0..pts.len() {
        if let (Some(l), Some(r)) = (left, right) {
            let (pl, pr, pt) = (&pts[l], &pts[r], &pts[t]);
            if pl.cmp_x(pt)?.is_lt() && pt.cmp_x(pr)?.is_lt() {
                if pl.pq == (0, 1) && pr.pq == (1, 0) {
                    anchored = true;
                }
                if anchored {
                    if !inside(pl, pr, pt) {
                        break;
                    }
                    boxes.push(MaxEmptyBox {
                        n: boxes.len() as i64,
                        alpha: pl.x.clone(),
                        alpha_tilde: pl.y.clone(),
                        beta: pr.x.clone(),
                        beta_tilde: pr.y.clone(),
                    });
                }
            }
        }
        let pt = &pts[t];
        if pt.x.is_negative() {
            if left.map_or(Ok(true), |l| pt.cmp_x(&pts[l]).map(|o| o.is_gt()))? {
                left = Some(t);
            }
        } else if pt.x.is_positive() && right.map_or(Ok(true), |r| pt.cmp_x(&pts[r]).map(|o| o.is_lt()))? {
            right = Some(t);
        }
    }
    if !anchored || boxes.is_empty() {
        return Err(Error::WindowTooSmall(format!(
            "starting box does not fit in window {window} below height {height_cap}"
        )));
    }
    Ok(boxes)
}

/// Grid position of the point in column `x` for the lattice scaled by `n`.
fn column_heights(l: &RankOneLattice) -> Vec<u64> {
    let n = l.n();
    let mut yof = vec![0; n as usize];
    for k in 0..n {
        yof[((k * l.p()) % n) as usize] = k;
    }
    yof
}

/// Largest empty box on the torus among boxes with grid-aligned sides,
/// as an area in the unit square.
pub fn brute_periodic_dispersion(l: &RankOneLattice) -> Result<BigRational> {
    let n = l.n();
    if n > PERIODIC_CAP {
        return Err(Error::CapExceeded(format!("n = {n} exceeds {PERIODIC_CAP}")));
    }
    // translate so that the point on the bottom edge is the origin
    let yof = column_heights(l);
    let mut best = 0u64;
    for u in 1..=n {
        // columns -u+1 ..= -1 lie in the box
        let mut h = (1..u).map(|x| yof[((n - x) % n) as usize]).min().unwrap_or(n);
        for w in u + 1..=n {
            let r = w - u - 1;
            if r >= 1 {
                h = h.min(yof[(r % n) as usize]);
            }
            best = best.max(w * h);
        }
    }
    Ok(BigRational::new(BigInt::from(best), BigInt::from(n * n)))
}

/// Every grid box checked against every point.
pub fn naive_periodic_dispersion(l: &RankOneLattice) -> Result<BigRational> {
    let n = l.n();
    if n > 40 {
        return Err(Error::CapExceeded(format!("naive oracle limited to n <= 40, got {n}")));
    }
    let pts: Vec<(u64, u64)> = (0..n).map(|k| ((k * l.p()) % n, k)).collect();
    let inside = |c: u64, a: u64, w: u64| {
        let off = (c + n - a) % n;
        off > 0 && off < w
    };
    let mut best = 0;
    for a in 0..n {
        for w in 1..=n {
            for b in 0..n {
                for h in 1..=n {
                    if w * h > best && !pts.iter().any(|&(x, y)| inside(x, a, w) && inside(y, b, h)) {
                        best = w * h;
                    }
                }
            }
        }
    }
    Ok(BigRational::new(BigInt::from(best), BigInt::from(n * n)))
}
