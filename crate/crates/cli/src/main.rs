mod commands;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kmarc::Error;
use serde::Serialize;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser, Debug)]
#[command(name = "kmarc", version, about = "Construct, verify and classify KM-arcs and F2-linear clubs")]
pub struct Cli {
    /// Field modulus as a hex bit pattern, e.g. 0x25 for x^5+x^2+1.
    #[arg(long, global = true)]
    pub modulus: Option<String>,
    /// Worker threads for data-parallel scans.
    #[arg(long, global = true, env = "KMARC_THREADS")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Describe a binary field.
    Field(FieldArgs),
    /// Build and verify an arc.
    Construct {
        #[command(subcommand)]
        family: Family,
        /// Write the arc JSON here instead of embedding it in the report.
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Inspect an arc JSON file (or a construct report). Use - for stdin.
    Analyze(AnalyzeArgs),
    /// Search for a collineation mapping one arc onto another.
    Equiv(EquivArgs),
    /// Exhaustive counts compared against closed forms.
    Census {
        #[command(subcommand)]
        kind: CensusKind,
    },
    /// Count and list solutions of Tr(k_i x) = c_i.
    TraceSys(TraceSysArgs),
}

#[derive(Args, Debug)]
pub struct FieldArgs {
    #[arg(long)]
    pub h: Option<u32>,
    /// Require a primitive modulus.
    #[arg(long)]
    pub primitive: bool,
    /// Require a modulus without the x^{h-1} and x^{h-2} terms.
    #[arg(long)]
    pub vdd: bool,
}

#[derive(Subcommand, Debug)]
pub enum Family {
    /// Five-part trace family of type q/4.
    New {
        #[arg(long)]
        h: Option<u32>,
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        beta: String,
        #[arg(long, default_value_t = 0)]
        a: u8,
        #[arg(long, default_value_t = 0)]
        b: u8,
    },
    /// Bit-condition family of type q/4.
    Vdd {
        #[arg(long)]
        h: Option<u32>,
        #[arg(long, default_value_t = 0)]
        c: u8,
    },
    /// Relative-trace family of type 2^i with o-polynomial x^{2^n}.
    Km {
        #[arg(long)]
        h: Option<u32>,
        #[arg(long)]
        i: u32,
        #[arg(long, default_value_t = 1)]
        n: u32,
    },
    /// Cone over a subplane arc.
    Gw {
        #[arg(long)]
        h: Option<u32>,
        /// Subplane degree; h must be a proper multiple.
        #[arg(long)]
        r: u32,
        #[arg(long, value_enum, default_value_t = ConeBase::In)]
        base: ConeBase,
        /// Type exponent of the recursive base.
        #[arg(long)]
        j: Option<u32>,
    },
    /// The type-q/2 arc {(x, Tr x, 1)} completed by directions.
    Triad {
        #[arg(long)]
        h: Option<u32>,
    },
    /// Translation hyperoval {(1, x, x^{2^n})} with its nucleus.
    Hyperoval {
        #[arg(long)]
        h: Option<u32>,
        #[arg(long, default_value_t = 1)]
        n: u32,
    },
    /// Translation arc lifted from a club on PG(1, q).
    Lift {
        #[arg(long, value_enum)]
        club: ClubKind,
        #[arg(long)]
        h: Option<u32>,
        /// Head weight for the km club.
        #[arg(long)]
        i: Option<u32>,
        #[arg(long, default_value_t = 1)]
        n: u32,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum ConeBase {
    In,
    Out,
    Recursive,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum ClubKind {
    Trace,
    Hminus2,
    Km,
    Scattered,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    pub input: PathBuf,
    /// Properties (I) and (II) on every t-secant.
    #[arg(long)]
    pub props: bool,
    /// Translation lines.
    #[arg(long)]
    pub translation: bool,
    /// Direction club on each translation line.
    #[arg(long)]
    pub club_check: bool,
}

#[derive(Args, Debug)]
pub struct EquivArgs {
    pub first: PathBuf,
    pub second: PathBuf,
    /// Allow field automorphisms.
    #[arg(long)]
    pub semilinear: bool,
}

#[derive(Subcommand, Debug)]
pub enum CensusKind {
    /// All (h-1)-clubs of rank h on PG(1, q0^h).
    Clubs {
        #[arg(long, default_value_t = 2)]
        q0: u64,
        #[arg(long)]
        h: u32,
    },
    /// Projective triads with q/2 points per line.
    Triads {
        #[arg(long)]
        q: u64,
    },
    /// Predicted against detected translation lines of the trace family.
    Transliff {
        #[arg(long)]
        q: u64,
    },
    /// Stabilizer and orbit of the trace club.
    Equiv {
        #[arg(long)]
        h: u32,
        /// Restrict to PGL instead of PGammaL.
        #[arg(long)]
        linear: bool,
    },
    /// i-clubs of a given rank with head (1, 0).
    FixedHead {
        #[arg(long)]
        h: u32,
        #[arg(long)]
        i: u32,
        #[arg(long)]
        rank: u32,
    },
}

#[derive(Args, Debug)]
pub struct TraceSysArgs {
    #[arg(long)]
    pub h: Option<u32>,
    /// Comma-separated hex coefficients.
    #[arg(long, value_delimiter = ',')]
    pub k: Vec<String>,
    /// Comma-separated right-hand side bits.
    #[arg(long, value_delimiter = ',')]
    pub c: Vec<u8>,
    /// Also list every solution.
    #[arg(long)]
    pub solutions: bool,
}

/// A finished run before timing is attached.
pub struct Outcome {
    pub field: Option<kmarc::gf2field::FieldSpec>,
    pub results: serde_json::Value,
    /// Set when a closed-form comparison or check failed.
    pub mismatch: Option<String>,
}

#[derive(Serialize)]
struct RunReport<'a> {
    command: &'a [String],
    field: Option<kmarc::gf2field::FieldSpec>,
    results: serde_json::Value,
    timing: Timing,
}

#[derive(Serialize)]
struct Timing {
    elapsed_ms: u128,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Verification(_) | Error::NotOPolynomial(_) | Error::NotTranslation(_) => 3,
        Error::TooLarge(_) => 4,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(2);
        }
    }
    let start = Instant::now();
    match commands::run(&cli) {
        Ok(out) => {
            let report = RunReport {
                command: &argv,
                field: out.field,
                results: out.results,
                timing: Timing { elapsed_ms: start.elapsed().as_millis() },
            };
            let text = serde_json::to_string_pretty(&report).expect("report serializes");
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            match out.mismatch {
                Some(why) => {
                    eprintln!("verification failure: {why}");
                    ExitCode::from(3)
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
