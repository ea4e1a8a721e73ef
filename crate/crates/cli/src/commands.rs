use std::path::PathBuf;

use clap::Args;
use thiserror::Error;

use latdisp_core::boxwalk::{enumerate_boxes, walk_to_termination, LatticeNormalForm, WalkMode};
use latdisp_core::contfrac::{cf_expand, CFSequence, Expansion};
use latdisp_core::dispersion::*;
use latdisp_core::oracle::{brute_dispersion, brute_periodic_dispersion, PointSet, Rect};
use latdisp_core::torus::*;
use latdisp_core::{Expr, QuadraticNumber};
use num_rational::BigRational;

use crate::output::{Cell, Table};
use crate::Command;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Domain(#[from] latdisp_core::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Args, Debug)]
pub struct OracleArgs {
    /// CSV file of points `x,y` with exact coordinates.
    #[arg(long, conflicts_with_all = ["kronecker", "lattice"])]
    points: Option<PathBuf>,
    /// Kronecker set `({k alpha}, k/count)` for this `alpha`.
    #[arg(long, requires = "count", conflicts_with = "lattice")]
    kronecker: Option<String>,
    #[arg(long)]
    count: Option<u64>,
    /// Rank-1 lattice `p/n` on the torus.
    #[arg(long)]
    lattice: Option<String>,
}

fn qn(text: &str) -> Result<QuadraticNumber> {
    Ok(text.parse()?)
}

fn list(v: &[u64]) -> Cell {
    Cell::List(v.to_vec())
}

fn witness_text(w: &Option<Witness>) -> String {
    match w {
        None => "none".into(),
        Some(Witness::Box { i, j }) => format!("box i={i} j={j}"),
        Some(Witness::Limit { side, phase, j }) => format!("limit {side:?} phase={phase} j={j}").to_lowercase(),
    }
}

pub fn run(cmd: &Command, digits: u32) -> Result<Table> {
    match cmd {
        Command::Cf { x, convergents } => cf(x, *convergents, digits),
        Command::DispSeq { seq } => {
            let s: CFSequence = seq.parse()?;
            let r = disp_sequence(&s)?;
            let value = match &r.value {
                DispValue::Finite(e) => Cell::expr(e, digits)?,
                DispValue::Infinite => Cell::Num { exact: "inf".into(), decimal: "inf".into() },
            };
            Ok(Table::single(
                &["sequence", "value", "attained", "witness"],
                vec![Cell::text(&s), value, Cell::Bool(r.attained), Cell::text(witness_text(&r.witness))],
            ))
        }
        Command::DispRing { d, n } => {
            let r = disp_quadratic(SubringSpec::new(*d, *n)?)?;
            Ok(Table::single(
                &["d", "n", "discriminant", "det", "dispersion", "normalized", "generator", "period"],
                vec![
                    Cell::int(d),
                    Cell::int(n),
                    Cell::int(r.discriminant),
                    Cell::qn(&r.det, digits),
                    Cell::qn(&r.dispersion, digits),
                    Cell::qn(&r.normalized, digits),
                    Cell::qn(&r.generator, digits),
                    list(&r.period),
                ],
            ))
        }
        Command::Bounds { a } => {
            let mut t = Table::new(&["a", "lower", "upper"]);
            for &x in a {
                let (l, u) = coefficient_bounds(x)?;
                t.push(vec![Cell::int(x), Cell::rat(&l, digits), Cell::rat(&u, digits)]);
            }
            Ok(t)
        }
        Command::TightBounds { a } => {
            let mut t = Table::new(&["a", "lower", "upper"]);
            for &x in a {
                let b = tight_bounds(x)?;
                t.push(vec![Cell::int(x), Cell::qn(&b.lower, digits), Cell::qn(&b.upper, digits)]);
            }
            Ok(t)
        }
        Command::Best { max_rank } => {
            let mut t = Table::new(&["rank", "period", "value"]);
            for k in 1..=*max_rank {
                let b = best_lattice(k)?;
                t.push(vec![Cell::int(k), list(&b.period), Cell::qn(&b.value, digits)]);
            }
            Ok(t)
        }
        Command::Table1 { a } => {
            let coeffs = a.clone().unwrap_or_else(|| TABLE1_COEFFS.to_vec());
            let mut t = Table::new(&["a", "L", "disp_a", "disp_a_1", "U"]);
            for r in table1(&coeffs)? {
                t.push(vec![
                    Cell::int(r.a),
                    Cell::rat(&r.l, digits),
                    Cell::qn(&r.lower, digits),
                    Cell::qn(&r.upper, digits),
                    Cell::rat(&r.u, digits),
                ]);
            }
            Ok(t)
        }
        Command::Fib { m } => {
            let (l, profile) = fibonacci_lattice(*m)?;
            let mut t = Table::new(&["p", "n", "k", "normalized_volume"]);
            for (k, v) in profile.iter().enumerate() {
                t.push(vec![Cell::int(l.p()), Cell::int(l.n()), Cell::int(k), Cell::rat(v, digits)]);
            }
            Ok(t)
        }
        Command::Rank1 { lattice, profile } => rank1(lattice, *profile, digits),
        Command::Zaremba { n_min, n_max, a } => {
            if n_min > n_max {
                return Err(CliError::Usage(format!("--n-min {n_min} exceeds --n-max {n_max}")));
            }
            let mut t = Table::new(&["n", "p", "reflection", "m", "normalized", "bound", "flagged"]);
            for r in zaremba_scan(*n_min..=*n_max, *a)? {
                t.push(vec![
                    Cell::int(r.n),
                    Cell::int(r.p),
                    Cell::int(r.reflection),
                    Cell::int(r.m),
                    Cell::rat(&r.normalized, digits),
                    Cell::rat(&r.bound, digits),
                    Cell::Bool(r.flagged),
                ]);
            }
            Ok(t)
        }
        Command::Oracle(args) => oracle(args, digits),
        Command::Boxes { delta, delta_tilde, n_min, n_max, torus } => {
            let d = qn(delta)?;
            let dt = match delta_tilde {
                Some(s) => qn(s)?,
                None => d.conj(),
            };
            let mode = if *torus { WalkMode::Torus } else { WalkMode::Irrational };
            let l = LatticeNormalForm::new(d, dt, mode)?;
            let boxes = if *torus { walk_to_termination(&l)? } else { enumerate_boxes(&l, *n_min, *n_max)? };
            let mut t = Table::new(&["n", "alpha", "alpha_tilde", "beta", "beta_tilde", "vol", "normalized_vol"]);
            for b in &boxes {
                t.push(vec![
                    Cell::int(b.n),
                    Cell::qn(&b.alpha, digits),
                    Cell::qn(&b.alpha_tilde, digits),
                    Cell::qn(&b.beta, digits),
                    Cell::qn(&b.beta_tilde, digits),
                    Cell::expr(&b.volume(), digits)?,
                    Cell::expr(&b.normalized_volume(&l), digits)?,
                ]);
            }
            Ok(t)
        }
        Command::NormFigure { delta, max_n } => {
            let (_, series) = norm_series(&qn(delta)?, *max_n)?;
            let mut t = Table::new(&["n", "norm_part", "at_convergent"]);
            for p in series {
                t.push(vec![Cell::int(p.n), Cell::int(p.norm_part), Cell::Bool(p.at_convergent)]);
            }
            Ok(t)
        }
        Command::CoeffScan { trace_max, norm_max } => {
            let mut t = Table::new(&["trace", "norm", "delta", "period", "distinct", "max_ratio", "counterexample"]);
            for r in coefficient_statistics_scan(*trace_max, *norm_max)? {
                t.push(vec![
                    Cell::int(r.trace),
                    Cell::int(r.norm),
                    Cell::qn(&r.delta, digits),
                    list(&r.period),
                    list(&r.distinct),
                    Cell::rat(&r.max_ratio, digits),
                    Cell::Bool(r.is_counterexample()),
                ]);
            }
            Ok(t)
        }
    }
}

fn cf(x: &str, convergents: Option<i64>, digits: u32) -> Result<Table> {
    let (value, expansion) = if x.trim_start().starts_with('[') {
        let e: Expansion = x.parse()?;
        (e.value(), e)
    } else {
        let v = qn(x)?;
        let e = cf_expand(&v)?;
        (v, e)
    };
    let Some(k) = convergents else {
        return Ok(Table::single(
            &["value", "expansion", "purely_periodic"],
            vec![Cell::qn(&value, digits), Cell::text(&expansion), Cell::Bool(expansion.is_purely_periodic())],
        ));
    };
    let first = u64::try_from(expansion.first)
        .ok()
        .filter(|&a| a >= 1)
        .ok_or_else(|| CliError::Usage("convergents need a_0 >= 1".into()))?;
    let seq = CFSequence::new(Default::default(), expansion.tail.push_front(first));
    let mut t = Table::new(&["i", "p", "q", "residue"]);
    // sequence index i holds p_{i-1}/q_{i-1} of the expansion
    for c in seq.convergents(0, k + 1)?.into_iter().filter(|c| c.index >= 0) {
        let r = c.eval(&value);
        t.push(vec![Cell::int(c.index - 1), Cell::int(&c.p), Cell::int(&c.q), Cell::qn(&r, digits)]);
    }
    Ok(t)
}

fn rank1(text: &str, profile: bool, digits: u32) -> Result<Table> {
    let l: RankOneLattice = text.parse()?;
    if profile {
        let mut t = Table::new(&["index", "alpha", "beta", "normalized_volume"]);
        for (b, v) in box_profile(&l)? {
            t.push(vec![Cell::int(b.n), Cell::qn(&b.alpha, digits), Cell::qn(&b.beta, digits), Cell::rat(&v, digits)]);
        }
        return Ok(t);
    }
    let r = periodic_dispersion(&l)?;
    let witness = match &r.witness {
        PeriodicWitness::Box { index, .. } => format!("box {index}"),
        PeriodicWitness::Strip => "strip".into(),
    };
    Ok(Table::single(
        &["p", "n", "coefficients", "max_coefficient", "value", "normalized", "witness"],
        vec![
            Cell::int(l.p()),
            Cell::int(l.n()),
            list(&l.coefficients()),
            Cell::int(l.max_coefficient()),
            Cell::rat(&r.value, digits),
            Cell::rat(&r.normalized, digits),
            Cell::text(witness),
        ],
    ))
}

fn oracle(args: &OracleArgs, digits: u32) -> Result<Table> {
    if let Some(text) = &args.lattice {
        let l: RankOneLattice = text.parse()?;
        let v = brute_periodic_dispersion(&l)?;
        let normalized = &v * BigRational::from_integer(l.n().into());
        return Ok(Table::single(
            &["lattice", "value", "normalized"],
            vec![Cell::text(l), Cell::rat(&v, digits), Cell::rat(&normalized, digits)],
        ));
    }
    let set = match (&args.points, &args.kronecker, args.count) {
        (Some(path), _, _) => {
            let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.clone(), source })?;
            PointSet::from_csv(&text)?
        }
        (None, Some(alpha), Some(n)) => PointSet::kronecker(&qn(alpha)?, n)?,
        _ => return Err(CliError::Usage("give --points FILE, --kronecker ALPHA --count N, or --lattice p/n".into())),
    };
    let (area, b) = brute_dispersion(&set, &Rect::unit())?;
    let n = QuadraticNumber::from_integer(set.len() as i64);
    let scaled = area.clone() * Expr::from(n);
    Ok(Table::single(
        &["points", "dispersion", "scaled", "box"],
        vec![
            Cell::int(set.len()),
            Cell::expr(&area, digits)?,
            Cell::expr(&scaled, digits)?,
            Cell::text(format!("({}, {}) x ({}, {})", b.x0, b.x1, b.y0, b.y1)),
        ],
    ))
}
