use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

/// Exact computations for ovoids of the parabolic quadric Q(4,q).
///
/// Field elements are given by their canonical index: the base-p digits of
/// the index are the coordinates in the polynomial basis, lowest first.
#[derive(Debug, Parser)]
#[command(name = "q4ovoid", version, about)]
pub struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Finite field queries.
    #[command(subcommand)]
    Field(FieldCmd),
    /// Build and check candidate ovoids O_4(f).
    #[command(subcommand)]
    Ovoid(OvoidCmd),
    /// Rational points of the hypersurface S_f.
    #[command(subcommand)]
    Surface(SurfaceCmd),
    /// Point-count window and classification threshold.
    Bounds(BoundsArgs),
    /// Linearized permutation polynomials in characteristic 3.
    #[command(subcommand)]
    Pp(PpCmd),
}

#[derive(Debug, Subcommand)]
pub enum FieldCmd {
    /// Modulus and canonical elements of GF(q).
    Info {
        /// Field, e.g. `9`, `3^2` or `3^2/[1,0,1]`.
        #[arg(long)]
        q: String,
    },
}

#[derive(Debug, Args)]
pub struct PolySource {
    /// Known family (elliptic-odd, elliptic-even, kantor, penttila-williams,
    /// thas-payne, ree-tits-slice, tits).
    #[arg(long, conflicts_with = "f", required_unless_present = "f")]
    pub family: Option<String>,
    /// Polynomial in x and y, e.g. `2*x^3 + y`.
    #[arg(long)]
    pub f: Option<String>,
    #[arg(long)]
    pub q: String,
    /// Non-square parameter n (element index).
    #[arg(long)]
    pub n: Option<u64>,
    /// Trace-one parameter a (element index).
    #[arg(long)]
    pub a: Option<u64>,
    /// Kantor exponent e, sigma = p^e.
    #[arg(long)]
    pub sigma: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Oracle {
    Pairwise,
    Generators,
    Both,
}

#[derive(Debug, Subcommand)]
pub enum OvoidCmd {
    /// Decide whether O_4(f) is an ovoid.
    Verify {
        #[command(flatten)]
        source: PolySource,
        #[arg(long, value_enum, default_value_t = Oracle::Pairwise)]
        oracle: Oracle,
        /// Largest q for generator enumeration (at most 81).
        #[arg(long, default_value_t = 27)]
        generator_guard: u32,
    },
    /// Exhaustive search over polynomials of bounded degree.
    Search {
        #[arg(long)]
        q: String,
        #[arg(long, default_value_t = 1)]
        max_deg: u32,
        /// Drop the y monomial when q is odd.
        #[arg(long)]
        force_a01_zero: bool,
        /// Enumerate all maps GF(q)^2 -> GF(q) with f(0,0) = 0.
        #[arg(long)]
        full_function_space: bool,
        /// Largest number of candidates to enumerate.
        #[arg(long, default_value_t = 100_000_000)]
        budget: u128,
        /// Re-check results with the generator oracle (q <= 9).
        #[arg(long)]
        spot_check: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum SurfaceCmd {
    /// Count affine points of S_f on and off the plane X1=X3, X2=X4.
    Count {
        #[command(flatten)]
        source: PolySource,
    },
    /// Smallest affine point of S_f off the plane.
    Witness {
        #[command(flatten)]
        source: PolySource,
    },
    /// Restrict the form of S_f to a coordinate hyperplane X_i = v.
    Section {
        #[command(flatten)]
        source: PolySource,
        /// Coordinate 0..=4.
        #[arg(long)]
        coord: usize,
        /// Element index.
        #[arg(long, default_value_t = 0)]
        value: u64,
    },
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    /// Degree d of f; the hypersurface has degree d + 1.
    #[arg(long)]
    pub deg: u32,
    #[arg(long, default_value_t = 3)]
    pub r: u32,
    /// Field size for the window and validity.
    #[arg(long)]
    pub q: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PpFamily {
    Pw,
    Tp,
}

#[derive(Debug, Subcommand)]
pub enum PpCmd {
    /// Check a single linearized polynomial.
    Check {
        #[arg(long, conflicts_with = "poly", required_unless_present = "poly")]
        family: Option<PpFamily>,
        /// Linearized polynomial in x, e.g. `x^9 + x^3 - x`.
        #[arg(long)]
        poly: Option<String>,
        #[arg(long)]
        q: String,
        /// Non-square m for the tp family (element index).
        #[arg(long)]
        m: Option<u64>,
        #[arg(long)]
        l0: Option<u64>,
        #[arg(long)]
        m0: Option<u64>,
    },
    /// Check the family for every (l0, m0) != (0, 0).
    Sweep {
        #[arg(long)]
        family: PpFamily,
        #[arg(long)]
        q: String,
        /// Non-square m for tp (default: every non-square).
        #[arg(long)]
        m: Option<u64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(err) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {err}");
            return ExitCode::from(2);
        }
    }
    match commands::run(&cli.command) {
        Ok(outcome) => {
            commands::emit(&outcome.report, cli.format);
            ExitCode::from(if outcome.holds { 0 } else { 1 })
        }
        Err(err) => {
            if cli.format == Format::Json {
                println!("{}", serde_json::json!({ "error": err.to_string() }));
            }
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
