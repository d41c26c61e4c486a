//! `qcorr` — classify finite-dimensional bipartite states on the
//! correlation hierarchy, generate named test families, evaluate
//! variational correlation measures, and extract separable decompositions.
//!
//! Exit codes: 0 success, 1 validation error (bad input or an unusable
//! request), 2 numerical failure.

mod cmd;
mod error;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use qcorr_core::Side;

use cmd::{parse_complex, CqParams, GenSpec, WhichMeasure};

#[derive(Parser)]
#[command(
    name = "qcorr",
    version,
    about = "Correlation-structure classifier for bipartite quantum states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full criterion battery on a state file
    Classify(ClassifyArgs),
    /// Generate a state file from a named family
    Gen(GenArgs),
    /// Evaluate one variational measure of a state file
    Measure(MeasureArgs),
    /// Extract an explicit separable decomposition from a certified state
    Decompose(DecomposeArgs),
    /// Classify every .json state in a directory into a CSV report
    Batch(BatchArgs),
}

#[derive(Args)]
struct ClassifyArgs {
    /// State JSON file
    file: PathBuf,
    /// Emit the report as JSON instead of text
    #[arg(long)]
    json: bool,
    /// Attach variational measure values to the report
    #[arg(long)]
    measures: bool,
    /// Structure tolerance (the partial-transpose check runs at a tenth)
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
}

#[derive(Args)]
struct GenArgs {
    #[command(subcommand)]
    family: Family,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    A,
    B,
}

impl From<SideArg> for Side {
    fn from(side: SideArg) -> Side {
        match side {
            SideArg::A => Side::UpToA,
            SideArg::B => Side::UpToB,
        }
    }
}

#[derive(Subcommand)]
enum Family {
    /// Product of two seeded random marginals
    #[command(name = "product")]
    Product {
        #[arg(long, default_value_t = 2)]
        da: usize,
        #[arg(long, default_value_t = 2)]
        db: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Classical-quantum state: orthonormal kets on A, random states on B
    #[command(name = "cq")]
    Cq {
        #[arg(long, default_value_t = 2)]
        da: usize,
        #[arg(long, default_value_t = 2)]
        db: usize,
        /// Number of classical terms (defaults to min(dim, 2))
        #[arg(long)]
        terms: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Quantum-classical state: mirror of cq
    #[command(name = "qc")]
    Qc {
        #[arg(long, default_value_t = 2)]
        da: usize,
        #[arg(long, default_value_t = 2)]
        db: usize,
        #[arg(long)]
        terms: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Two-qubit state with one coherence per diagonal pair
    #[command(name = "circulant")]
    Circulant {
        #[arg(long)]
        a11: f64,
        #[arg(long)]
        a22: f64,
        #[arg(long)]
        b11: f64,
        #[arg(long)]
        b22: f64,
        /// Outer coherence, as `re` or `re,im`
        #[arg(long, default_value = "0", value_parser = parse_complex)]
        a12: Complex64,
        /// Inner coherence, as `re` or `re,im`
        #[arg(long, default_value = "0", value_parser = parse_complex)]
        b12: Complex64,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Seeded 2⊗n block-contraction state (certified by construction)
    #[command(name = "example1")]
    Example1 {
        /// Dimension of the second factor
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// 3⊗2 diagonal-coherence state (classical-quantum by construction)
    #[command(name = "example3")]
    Example3 {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
        #[arg(long)]
        c: f64,
        #[arg(long)]
        d: f64,
        #[arg(long, default_value = "0", value_parser = parse_complex)]
        e: Complex64,
        #[arg(long, default_value = "0", value_parser = parse_complex)]
        f: Complex64,
        #[arg(long, default_value = "0", value_parser = parse_complex)]
        g: Complex64,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Pure state from Schmidt coefficients (renormalized, sorted)
    #[command(name = "pure-schmidt")]
    PureSchmidt {
        /// Comma-separated coefficients, e.g. 0.7071,0.7071
        #[arg(long = "l", value_delimiter = ',')]
        lambdas: Vec<f64>,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Seeded random density matrix of a given rank
    #[command(name = "random")]
    Random {
        #[arg(long, default_value_t = 2)]
        da: usize,
        #[arg(long, default_value_t = 2)]
        db: usize,
        /// Rank (defaults to full rank)
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Seeded random state satisfying the strong factorization conditions
    #[command(name = "ssppt-random")]
    SspptRandom {
        #[arg(long, default_value_t = 2)]
        da: usize,
        #[arg(long, default_value_t = 2)]
        db: usize,
        /// Factorization side the construction certifies
        #[arg(long, value_enum, default_value_t = SideArg::B)]
        side: SideArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct MeasureArgs {
    /// State JSON file
    file: PathBuf,
    #[command(flatten)]
    which: MeasureFlags,
    /// Optimizer seed
    #[arg(long)]
    seed: Option<u64>,
    /// Number of seeded optimizer restarts
    #[arg(long)]
    restarts: Option<usize>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct MeasureFlags {
    /// Measurement-induced nonlocality, measurements on A
    #[arg(long)]
    min_a: bool,
    /// Measurement-induced nonlocality, measurements on B
    #[arg(long)]
    min_b: bool,
    /// Geometric discord, measurements on A
    #[arg(long)]
    gmqd_a: bool,
    /// Geometric discord, measurements on B
    #[arg(long)]
    gmqd_b: bool,
    /// Entropic quantum discord, measurements on A
    #[arg(long)]
    discord_a: bool,
}

impl MeasureFlags {
    fn which(&self) -> WhichMeasure {
        if self.min_a {
            WhichMeasure::MinA
        } else if self.min_b {
            WhichMeasure::MinB
        } else if self.gmqd_a {
            WhichMeasure::GmqdA
        } else if self.gmqd_b {
            WhichMeasure::GmqdB
        } else {
            WhichMeasure::DiscordA
        }
    }
}

#[derive(Args)]
struct DecomposeArgs {
    /// State JSON file
    file: PathBuf,
    /// Factorization side to use (default: try b, then a)
    #[arg(long, value_enum)]
    side: Option<SideArg>,
    /// Output path for the ensemble JSON
    #[arg(short, long)]
    out: PathBuf,
}

#[derive(Args)]
struct BatchArgs {
    /// Directory of state JSON files
    dir: PathBuf,
    /// Output CSV path
    #[arg(long)]
    report: PathBuf,
}

fn family_spec(family: Family) -> (GenSpec, PathBuf) {
    match family {
        Family::Product { da, db, seed, out } => (GenSpec::Product { da, db, seed }, out),
        Family::Cq { da, db, terms, seed, out } => {
            (GenSpec::Cq(CqParams { da, db, terms, seed }), out)
        }
        Family::Qc { da, db, terms, seed, out } => {
            (GenSpec::Qc(CqParams { da, db, terms, seed }), out)
        }
        Family::Circulant { a11, a22, b11, b22, a12, b12, out } => {
            (GenSpec::Circulant { a11, a22, b11, b22, a12, b12 }, out)
        }
        Family::Example1 { n, seed, out } => (GenSpec::Example1 { n, seed }, out),
        Family::Example3 { a, b, c, d, e, f, g, out } => {
            (GenSpec::Example3 { a, b, c, d, e, f, g }, out)
        }
        Family::PureSchmidt { lambdas, out } => (GenSpec::PureSchmidt { lambdas }, out),
        Family::Random { da, db, rank, seed, out } => {
            (GenSpec::Random { da, db, rank, seed }, out)
        }
        Family::SspptRandom { da, db, side, seed, out } => (
            GenSpec::SspptRandom { da, db, side: side.into(), seed },
            out,
        ),
    }
}

fn run(cli: Cli) -> Result<(), error::CliError> {
    match cli.command {
        Command::Classify(args) => {
            cmd::run_classify(&args.file, args.json, args.measures, args.tol)
        }
        Command::Gen(args) => {
            let (spec, out) = family_spec(args.family);
            cmd::run_gen(&spec, &out)
        }
        Command::Measure(args) => {
            cmd::run_measure(&args.file, args.which.which(), args.seed, args.restarts)
        }
        Command::Decompose(args) => {
            cmd::run_decompose(&args.file, args.side.map(Side::from), &args.out)
        }
        Command::Batch(args) => cmd::run_batch(&args.dir, &args.report),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are successes; true usage errors
            // are validation failures.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
