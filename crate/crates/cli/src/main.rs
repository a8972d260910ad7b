//! `tcu-scan`: prefix sums, sorting, and cost comparisons on a simulated
//! tensor-core unit.
//!
//! Exit codes: 0 success, 1 a `verify` check failed, 2 usage or input
//! error (clap reports its own argument errors as 2 as well).

mod gen;
mod io;
mod verify;

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

use tcu_scan::cost::CostReport;
use tcu_scan::monoid::{sequential_scan, AffineCompose, F64Add, I64Add, Monoid};
use tcu_scan::{
    general_scan, matmul_scan, power_exponent, radix_sort, recursive_scan, ClassicAlgo, ScanError,
    TcuConfig,
};

use crate::verify::VerifyOpts;

/// Environment variable naming a directory that receives a JSON copy of
/// every `--report` emitted by `scan` and `sort`.
const REPORT_DIR_VAR: &str = "TCU_SCAN_REPORT_DIR";

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or bad input data: exit code 2.
    Usage(String),
    /// A verification check failed: exit code 1.
    Failure(String),
}

impl From<ScanError> for CliError {
    fn from(e: ScanError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(format!("I/O error: {e}"))
    }
}

#[derive(Parser)]
#[command(
    name = "tcu-scan",
    version,
    about = "Prefix sums and radix sort on a simulated tensor-core unit, with exact cost reports"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Scan a sequence and print the running totals.
    Scan(ScanArgs),
    /// Print a CSV table comparing scan algorithms at one input size.
    Compare(CompareArgs),
    /// Sort 32-bit keys, one stable split per bit, scans on the unit.
    Sort(SortArgs),
    /// Run the deterministic self-check suite.
    Verify(VerifyArgs),
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Algo {
    /// Fixed-shape sweep; requires the input length to be a power of s.
    Matmul,
    /// Any input length: segmented sweeps plus carry broadcasts.
    General,
    /// Recursive driver; same cost and output as matmul.
    Recursive,
    /// Sequential fold off the unit (reference answer, empty report).
    Oracle,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Op {
    /// Checked 64-bit integer addition.
    AddI64,
    /// Double-precision addition.
    AddF64,
    /// Composition of affine maps `x -> scale * x + offset`.
    Affine,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
pub enum Dist {
    /// 1, 2, 3, ... (sort keys: reversed). Ignores --seed.
    Ramp,
    /// Uniform integers in [0, 2^32).
    UniformInt,
    /// Uniform floats in [0, 1).
    UniformFloat,
}

impl fmt::Display for Dist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Dist::Ramp => "ramp",
            Dist::UniformInt => "uniform-int",
            Dist::UniformFloat => "uniform-float",
        };
        f.write_str(name)
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    /// One value per line ("scale,offset" for affine maps).
    Text,
    /// Little-endian 64-bit words; affine maps are two words each.
    Bin,
}

#[derive(Args)]
#[command(group(ArgGroup::new("source").required(true).args(["input", "gen"])))]
struct ScanArgs {
    /// Read input from this file instead of generating it.
    #[arg(long = "in", value_name = "FILE")]
    input: Option<PathBuf>,
    /// Generate this many input values.
    #[arg(long, value_name = "N")]
    gen: Option<usize>,
    /// PRNG seed for generated input.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Distribution of generated input.
    #[arg(long, value_enum, default_value_t = Dist::Ramp)]
    dist: Dist,
    /// Tile dimension of the simulated unit (multiplies s x s tiles).
    #[arg(long, default_value_t = 2)]
    s: usize,
    /// Latency charged per unit invocation.
    #[arg(long, default_value_t = 0)]
    ell: u64,
    /// Scan driver.
    #[arg(long, value_enum, default_value_t = Algo::General)]
    algo: Algo,
    /// Element type and combine operation.
    #[arg(long, value_enum, default_value_t = Op::AddI64)]
    op: Op,
    /// Append a CSV cost report (written to stderr under --format bin).
    #[arg(long)]
    report: bool,
    /// Encoding for both file input and printed output.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct CompareArgs {
    /// Input size the table is evaluated at.
    #[arg(long, default_value_t = 1024)]
    n: u64,
    /// Tile dimension for the prior-work row and the third measured row.
    #[arg(long, default_value_t = 16)]
    s: usize,
    /// Latency charged per unit invocation in the measured rows.
    #[arg(long, default_value_t = 0)]
    ell: u64,
}

#[derive(Args)]
#[command(group(ArgGroup::new("source").required(true).args(["input", "gen"])))]
struct SortArgs {
    /// Read keys from this file instead of generating them.
    #[arg(long = "in", value_name = "FILE")]
    input: Option<PathBuf>,
    /// Generate this many keys.
    #[arg(long, value_name = "N")]
    gen: Option<usize>,
    /// PRNG seed for generated keys.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Distribution of generated keys.
    #[arg(long, value_enum, default_value_t = Dist::UniformInt)]
    dist: Dist,
    /// Key width: one stable split pass per bit, low bit first.
    #[arg(long, default_value_t = 32)]
    bits: u32,
    /// Tile dimension of the simulated unit.
    #[arg(long, default_value_t = 16)]
    s: usize,
    /// Latency charged per unit invocation.
    #[arg(long, default_value_t = 0)]
    ell: u64,
    /// Append a CSV cost report (written to stderr under --format bin).
    #[arg(long)]
    report: bool,
    /// Encoding for both file input and printed output.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct VerifyArgs {
    /// Smaller grids: finishes in well under a second.
    #[arg(long)]
    quick: bool,
    /// Restrict every check to this tile dimension.
    #[arg(long)]
    s: Option<usize>,
    /// Cap the power-of-s exponent the grid climbs to.
    #[arg(long)]
    max_k: Option<u32>,
    /// Seed for the randomized checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Failure(msg)) => {
            eprintln!("FAIL {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Scan(args) => cmd_scan(args),
        Command::Compare(args) => cmd_compare(args),
        Command::Sort(args) => cmd_sort(args),
        Command::Verify(args) => verify::run(&VerifyOpts {
            quick: args.quick,
            s: args.s,
            max_k: args.max_k,
            seed: args.seed,
        })
        .map_err(CliError::Failure),
    }
}

/// Runs the selected driver and assembles the matching report row.
fn scan_with<M: Monoid>(
    x: &[M::Elem],
    op: &M,
    algo: Algo,
    config: &TcuConfig,
) -> Result<(Vec<M::Elem>, CostReport), CliError> {
    let n = x.len() as u64;
    let (s, ell) = (config.s() as u64, config.ell());
    Ok(match algo {
        Algo::Matmul => {
            let r = matmul_scan(x, config, op)?;
            (
                r.output,
                CostReport::for_fixed_scan("matmul", n, s, ell, r.ledger)?,
            )
        }
        Algo::Recursive => {
            let r = recursive_scan(x, config, op)?;
            (
                r.output,
                CostReport::for_fixed_scan("recursive", n, s, ell, r.ledger)?,
            )
        }
        Algo::General => {
            let r = general_scan(x, config, op)?;
            (r.output, CostReport::for_general_scan(n, s, ell, r.ledger)?)
        }
        Algo::Oracle => (sequential_scan(x, op)?, CostReport::for_oracle(n)),
    })
}

fn emit_report(report: &CostReport, wants_report: bool, binary: bool) -> Result<(), CliError> {
    if !wants_report {
        return Ok(());
    }
    let csv = format!("{}\n{}", CostReport::csv_header(), report.to_csv_row());
    if binary {
        eprintln!("{csv}");
    } else {
        println!("{csv}");
    }
    if let Some(dir) = std::env::var_os(REPORT_DIR_VAR) {
        let name = format!(
            "report-{}-n{}-s{}-ell{}.json",
            report.algorithm,
            report.n,
            report.s.map_or_else(|| "na".to_string(), |v| v.to_string()),
            report
                .ell
                .map_or_else(|| "na".to_string(), |v| v.to_string()),
        );
        let path = Path::new(&dir).join(name);
        std::fs::write(&path, report.to_json())
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn cmd_scan(args: ScanArgs) -> Result<(), CliError> {
    let config = TcuConfig::new(args.s, args.ell)?;
    let binary = args.format == Format::Bin;
    let stdout = std::io::stdout();
    let mut out = std::io::BufWriter::new(stdout.lock());

    let report = match args.op {
        Op::AddI64 => {
            let x = match &args.input {
                Some(path) => io::read_i64(path, binary)?,
                None => gen::gen_i64(
                    args.gen.expect("clap enforces the source group"),
                    args.seed,
                    args.dist,
                )?,
            };
            let (values, report) = scan_with(&x, &I64Add, args.algo, &config)?;
            io::write_i64(&mut out, &values, binary)?;
            report
        }
        Op::AddF64 => {
            let x = match &args.input {
                Some(path) => io::read_f64(path, binary)?,
                None => gen::gen_f64(
                    args.gen.expect("clap enforces the source group"),
                    args.seed,
                    args.dist,
                )?,
            };
            let (values, report) = scan_with(&x, &F64Add, args.algo, &config)?;
            io::write_f64(&mut out, &values, binary)?;
            report
        }
        Op::Affine => {
            let x = match &args.input {
                Some(path) => io::read_affine(path, binary)?,
                None => gen::gen_affine(
                    args.gen.expect("clap enforces the source group"),
                    args.seed,
                    args.dist,
                )?,
            };
            let (values, report) = scan_with(&x, &AffineCompose, args.algo, &config)?;
            io::write_affine(&mut out, &values, binary)?;
            report
        }
    };
    out.flush()?;
    emit_report(&report, args.report, binary)
}

fn cmd_compare(args: CompareArgs) -> Result<(), CliError> {
    TcuConfig::new(args.s, args.ell)?;
    println!("{}", CostReport::csv_header());

    if args.n.is_power_of_two() {
        for algo in [
            ClassicAlgo::Sklansky,
            ClassicAlgo::HillisSteele,
            ClassicAlgo::Blelloch,
            ClassicAlgo::BrentKung,
        ] {
            println!("{}", CostReport::for_classic(algo, args.n)?.to_csv_row());
        }
    } else {
        eprintln!(
            "note: n={} is not a power of two; skipping the four classic network rows",
            args.n
        );
    }
    println!(
        "{}",
        CostReport::for_classic(ClassicAlgo::TcuPrior { s: args.s as u64 }, args.n)?.to_csv_row()
    );

    // Measured rows: cost is data-independent, so scan a vector of ones.
    let x = vec![1i64; args.n as usize];
    let mut dims = vec![2usize, 4];
    if !dims.contains(&args.s) {
        dims.push(args.s);
    }
    for s in dims {
        let config = TcuConfig::new(s, args.ell)?;
        let report = if power_exponent(args.n as usize, s).is_some() {
            let r = matmul_scan(&x, &config, &I64Add)?;
            CostReport::for_fixed_scan("matmul", args.n, s as u64, args.ell, r.ledger)?
        } else {
            let r = general_scan(&x, &config, &I64Add)?;
            CostReport::for_general_scan(args.n, s as u64, args.ell, r.ledger)?
        };
        println!("{}", report.to_csv_row());
    }
    Ok(())
}

fn cmd_sort(args: SortArgs) -> Result<(), CliError> {
    let config = TcuConfig::new(args.s, args.ell)?;
    let binary = args.format == Format::Bin;
    if args.bits == 0 || args.bits > 32 {
        return Err(ScanError::InvalidBits { bits: args.bits }.into());
    }
    let keys = match &args.input {
        Some(path) => io::read_keys(path, binary)?,
        None => gen::gen_keys(
            args.gen.expect("clap enforces the source group"),
            args.seed,
            args.dist,
            args.bits,
        )?,
    };
    if args.bits < 32 {
        if let Some(bad) = keys.iter().find(|&&k| k >> args.bits != 0) {
            return Err(CliError::Usage(format!(
                "key {bad} does not fit in --bits {}",
                args.bits
            )));
        }
    }

    let result = radix_sort(&keys, &config, args.bits)?;
    let stdout = std::io::stdout();
    let mut out = std::io::BufWriter::new(stdout.lock());
    io::write_keys(&mut out, &result.keys, binary)?;
    out.flush()?;

    let report = CostReport::for_sort(keys.len() as u64, args.s as u64, args.ell, result.ledger);
    emit_report(&report, args.report, binary)
}
