//! Command-line front door: evaluate formulas, run verification suites,
//! drive Monte-Carlo runs, emit block tables.

use clap::{Args, Parser, Subcommand};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

mod manifest;
mod run;

const EXIT_OK: u8 = 0;
const EXIT_ERROR: u8 = 1;
const EXIT_POLE_OR_ZERO: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_CONFIG: u8 = 65;

#[derive(Parser)]
#[command(
    name = "toda",
    about = "sl3 Toda CFT structure constants, hypergeometric blocks and GMC Monte-Carlo",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a single quantity and print a JSON record.
    Eval(EvalArgs),
    /// Run a named verification suite and print a machine-readable report.
    Verify(VerifyArgs),
    /// Run a Monte-Carlo estimation from a TOML/JSON config file.
    Mc(McArgs),
    /// Emit a CSV table of the hypergeometric blocks over a z grid.
    Blocks(BlocksArgs),
}

#[derive(Args)]
struct EvalArgs {
    /// one of: upsilon | l | dozz | fali | reflection
    kind: String,
    #[arg(long)]
    gamma: Option<f64>,
    /// cosmological constants (one value is duplicated)
    #[arg(long, value_delimiter = ',')]
    mu: Option<Vec<f64>>,
    /// argument of upsilon / l; accepts plain numbers or multiples of q like "0.5q"
    #[arg(long, allow_hyphen_values = true)]
    z: Option<String>,
    /// Toda weights as JSON: {"alpha0": {...}, "kappa": k, "alphainf": {...}}
    #[arg(long)]
    weights: Option<String>,
    /// Liouville weights a1,a2,a3 for dozz / single weight for reflection
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    a: Option<Vec<f64>>,
    /// Weyl element for reflection: id|s1|s2|s1s2|s2s1|s1s2s1
    #[arg(long)]
    element: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// one of: upsilon | reflection | shift | blocks | integral | dozz-limit | all
    suite: String,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    mu: f64,
    #[arg(long, default_value_t = 0)]
    trials: usize,
    #[arg(long, default_value_t = 0xc0ffee)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct McArgs {
    /// TOML or JSON run configuration
    #[arg(long)]
    config: PathBuf,
    /// output JSON-lines path (default: stdout only)
    #[arg(long)]
    out: Option<PathBuf>,
    /// compare against the exact formula: "fali" or "dozz"
    #[arg(long)]
    compare: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct BlocksArgs {
    /// block parameters A1,A2,A3
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    a: Vec<f64>,
    /// block parameters B1,B2
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    b: Vec<f64>,
    /// real z grid: start,stop,step
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    grid: Vec<f64>,
    /// optional ring |z| = r sampled at this many angles instead of the grid
    #[arg(long)]
    ring: Option<f64>,
    #[arg(long, default_value_t = 16)]
    ring_points: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    // TODA_CFT_THREADS caps the rayon pool before any parallel work starts
    if let Ok(v) = std::env::var("TODA_CFT_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
        }
    }
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let is_help = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = e.print();
            return if is_help { ExitCode::from(EXIT_OK) } else { ExitCode::from(EXIT_USAGE) };
        }
    };
    let code = match cli.command {
        Command::Eval(a) => run::eval(a),
        Command::Verify(a) => run::verify(a),
        Command::Mc(a) => run::mc(a),
        Command::Blocks(a) => run::blocks(a),
    };
    ExitCode::from(code)
}

pub(crate) fn write_output(path: &Option<PathBuf>, text: &str) -> std::io::Result<()> {
    println!("{text}");
    if let Some(p) = path {
        let mut f = std::fs::File::create(p)?;
        f.write_all(text.as_bytes())?;
        f.write_all(b"\n")?;
    }
    Ok(())
}
