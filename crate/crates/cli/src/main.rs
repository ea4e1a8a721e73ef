//! `latdisp`: exact dispersion of planar lattices from the command line.

mod commands;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use output::Format;

#[derive(Parser, Debug)]
#[command(name = "latdisp", version, about = "Exact dispersion of planar lattices")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Pretty, global = true)]
    format: Format,
    /// Decimal places in rendered values.
    #[arg(long, default_value_t = 5, global = true)]
    digits: u32,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Continued fraction of a quadratic number, or the value of a literal `[a0;a1,...]`.
    Cf {
        x: String,
        /// Also list the convergents up to this index.
        #[arg(long)]
        convergents: Option<i64>,
    },
    /// Normalized dispersion of a two-sided sequence such as `(1,2)|(2,1,1,2)`.
    DispSeq { seq: String },
    /// Dispersion of the lattice of the subring `Z[n delta_d]`.
    DispRing {
        #[arg(long)]
        d: u64,
        #[arg(long, default_value_t = 1)]
        n: u64,
    },
    /// Bounds `L(a)` and `U(a)` on the largest box of a block with coefficient `a`.
    Bounds {
        #[arg(long, value_delimiter = ',', required = true)]
        a: Vec<u64>,
    },
    /// Dispersions of the periodic sequences `(a)` and `(a,1)`.
    TightBounds {
        #[arg(long, value_delimiter = ',', required = true)]
        a: Vec<u64>,
    },
    /// Best lattices in order of increasing dispersion.
    Best {
        #[arg(long, default_value_t = 8)]
        max_rank: u32,
    },
    /// Bounds table for the given coefficients.
    Table1 {
        #[arg(long, value_delimiter = ',')]
        a: Option<Vec<u64>>,
    },
    /// Box profile of the Fibonacci lattice `(F_{m-2}, F_m)`.
    Fib {
        #[arg(long)]
        m: u32,
    },
    /// Periodic dispersion of the rank-1 lattice `p/n`.
    Rank1 {
        lattice: String,
        /// List every walk box instead of the summary.
        #[arg(long)]
        profile: bool,
    },
    /// Smallest largest coefficient over generators, and the witness dispersion.
    Zaremba {
        #[arg(long, default_value_t = 2)]
        n_min: u64,
        #[arg(long)]
        n_max: u64,
        /// Coefficient bound to test.
        #[arg(long, default_value_t = 5)]
        a: u64,
    },
    /// Brute-force dispersion of a point set or rank-1 lattice.
    Oracle(commands::OracleArgs),
    /// Maximal empty boxes of a normal form.
    Boxes {
        #[arg(long)]
        delta: String,
        /// Defaults to the conjugate of `delta`.
        #[arg(long, allow_hyphen_values = true)]
        delta_tilde: Option<String>,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        n_min: i64,
        #[arg(long, default_value_t = 10)]
        n_max: i64,
        /// Rational parameters: walk until the boxes degenerate.
        #[arg(long)]
        torus: bool,
    },
    /// Norm parts `|N(alpha_n)| + |N(beta_n)|` of the boxes of a purely periodic quadratic integer.
    NormFigure {
        #[arg(long)]
        delta: String,
        #[arg(long, default_value_t = 50)]
        max_n: i64,
    },
    /// Coefficient statistics of purely periodic quadratic integers.
    CoeffScan {
        #[arg(long, default_value_t = 20)]
        trace_max: u64,
        #[arg(long, default_value_t = 20)]
        norm_max: u64,
    },
}

fn init_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("LATDISP_THREADS") else { return Ok(()) };
    let n: usize = v.trim().parse().map_err(|_| format!("LATDISP_THREADS must be a positive integer, got {v:?}"))?;
    if n == 0 {
        return Err("LATDISP_THREADS must be positive".into());
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = init_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let table = match commands::run(&cli.command, cli.global.digits) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    let mut sink: Box<dyn Write> = match &cli.global.out {
        Some(path) => match File::create(path) {
            Ok(f) => Box::new(BufWriter::new(f)),
            Err(e) => {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(1);
            }
        },
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    if let Err(e) = table.write(cli.global.format, &mut *sink).and_then(|_| sink.flush()) {
        if e.kind() != io::ErrorKind::BrokenPipe {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    ExitCode::SUCCESS
}
