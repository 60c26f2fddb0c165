use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use concurrence_bounds::cli::check::{run_check, CheckConfig, Fault};
use concurrence_bounds::cli::report_text;
use concurrence_bounds::cli::state_file::load_state;
use concurrence_bounds::cli::sweep::{crossover, sweep, write_csv, BoundName, SweepFamily};
use concurrence_bounds::states::StateFamily;
use concurrence_bounds::{DensityMatrix, Error};

#[derive(Parser, Debug)]
#[command(
    name = "concurrence-bounds",
    version,
    about = "Bloch-representation lower bounds on concurrence"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print every bound for one state.
    Report(StateArgs),
    /// Sweep a one-parameter family and write CSV.
    Sweep(SweepArgs),
    /// Locate where one bound overtakes the maximum of others.
    Crossover(CrossoverArgs),
    /// Run the invariant suites.
    Check(CheckArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum FamilyArg {
    Example1,
    Example2,
    Maxent,
    Isotropic,
    Haar,
    Mixed,
}

#[derive(Args, Debug)]
struct StateArgs {
    /// JSON state file with d1, d2 and row-major [re, im] entries.
    #[arg(long, conflicts_with = "family")]
    state: Option<PathBuf>,
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,
    #[arg(long)]
    x: Option<f64>,
    #[arg(long)]
    q1: Option<f64>,
    #[arg(long)]
    q2: Option<f64>,
    #[arg(long)]
    q3: Option<f64>,
    #[arg(long)]
    q4: Option<f64>,
    /// Mixing weight for the isotropic family.
    #[arg(long)]
    p: Option<f64>,
    #[arg(long, default_value_t = 2)]
    d1: usize,
    #[arg(long, default_value_t = 2)]
    d2: usize,
    #[arg(long, default_value_t = 1)]
    rank: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Local dimension for the isotropic family.
    #[arg(long, default_value_t = 2)]
    d1: usize,
    #[arg(long)]
    from: Option<f64>,
    #[arg(long)]
    to: Option<f64>,
    #[arg(long, default_value_t = 0.005)]
    step: f64,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CrossoverArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long, default_value_t = 2)]
    d1: usize,
    /// Comma-separated bound names: the first is compared against the maximum of the rest.
    #[arg(long, default_value = "thm2_c,caf_c")]
    bounds: String,
    #[arg(long)]
    from: Option<f64>,
    #[arg(long)]
    to: Option<f64>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FaultArg {
    GeneratorScale,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Random samples per dimension pair.
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long, value_enum, hide = true)]
    inject_fault: Option<FaultArg>,
}

fn required(value: Option<f64>, flag: &str) -> Result<f64, Error> {
    value.ok_or_else(|| Error::Parse(format!("--{flag} is required for this family")))
}

fn load(args: &StateArgs) -> Result<DensityMatrix, Error> {
    if let Some(path) = &args.state {
        return load_state(path);
    }
    let family = args
        .family
        .ok_or_else(|| Error::Parse("either --state or --family is required".into()))?;
    let spec = match family {
        FamilyArg::Example1 => StateFamily::Example1 {
            x: required(args.x, "x")?,
        },
        FamilyArg::Example2 => {
            let q1 = required(args.q1, "q1")?;
            let q = match (args.q2, args.q3, args.q4) {
                (None, None, None) => [q1, (1.0 - q1) / 2.0, 0.0, (1.0 - q1) / 2.0],
                (Some(q2), Some(q3), Some(q4)) => [q1, q2, q3, q4],
                _ => return Err(Error::Parse("give all of --q2 --q3 --q4 or none".into())),
            };
            StateFamily::Example2 { q }
        }
        FamilyArg::Maxent => StateFamily::MaxEntangled { d: args.d1 },
        FamilyArg::Isotropic => StateFamily::Isotropic {
            d: args.d1,
            p: required(args.p, "p")?,
        },
        FamilyArg::Haar => StateFamily::HaarPure {
            d1: args.d1,
            d2: args.d2,
            seed: args.seed,
        },
        FamilyArg::Mixed => StateFamily::RandomMixed {
            d1: args.d1,
            d2: args.d2,
            rank: args.rank,
            seed: args.seed,
        },
    };
    spec.build()
}

fn sweep_family(family: FamilyArg, d: usize) -> Result<SweepFamily, Error> {
    match family {
        FamilyArg::Example1 => Ok(SweepFamily::Example1),
        FamilyArg::Example2 => Ok(SweepFamily::Example2),
        FamilyArg::Isotropic => Ok(SweepFamily::Isotropic { d }),
        other => Err(Error::Parse(format!("family {other:?} has no sweep parameter"))),
    }
}

fn run_sweep(args: &SweepArgs) -> Result<(), Error> {
    let family = sweep_family(args.family, args.d1)?;
    let (lo, hi) = family.domain();
    let rows = sweep(family, args.from.unwrap_or(lo), args.to.unwrap_or(hi), args.step)?;
    let io_err = |e: io::Error| Error::Parse(format!("cannot write CSV: {e}"));
    match &args.out {
        Some(path) => {
            let file = File::create(path).map_err(io_err)?;
            let mut writer = BufWriter::new(file);
            write_csv(family, &rows, &mut writer).map_err(io_err)?;
            writer.flush().map_err(io_err)
        }
        None => write_csv(family, &rows, io::stdout().lock()).map_err(io_err),
    }
}

fn run_crossover(args: &CrossoverArgs) -> Result<f64, Error> {
    let family = sweep_family(args.family, args.d1)?;
    let names = args
        .bounds
        .split(',')
        .map(str::parse)
        .collect::<Result<Vec<BoundName>, _>>()?;
    let (lhs, rhs) = names
        .split_first()
        .ok_or_else(|| Error::Parse("--bounds needs at least two names".into()))?;
    let (lo, hi) = family.domain();
    crossover(family, *lhs, rhs, args.from.unwrap_or(lo), args.to.unwrap_or(hi))
}

fn run_checks(args: &CheckArgs) -> ExitCode {
    let cfg = CheckConfig {
        seed: args.seed,
        samples: args.samples,
        fault: args.inject_fault.map(|FaultArg::GeneratorScale| Fault::GeneratorScale),
    };
    let results = run_check(&cfg);
    let mut all_ok = true;
    for suite in &results {
        let status = if suite.ok() { "PASS" } else { "FAIL" };
        println!("[{status}] {:<28} {}/{}", suite.name, suite.passed, suite.total);
        for failure in &suite.failures {
            println!("       failing case: {failure}");
        }
        all_ok &= suite.ok();
    }
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn input_error(e: Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Report(args) => match load(&args).and_then(|rho| report_text(&rho)) {
            Ok(text) => {
                print!("{text}");
                ExitCode::SUCCESS
            }
            Err(e) => input_error(e),
        },
        Command::Sweep(args) => match run_sweep(&args) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => input_error(e),
        },
        Command::Crossover(args) => match run_crossover(&args) {
            Ok(value) => {
                println!("{value:.7}");
                ExitCode::SUCCESS
            }
            Err(e) => input_error(e),
        },
        Command::Check(args) => run_checks(&args),
    }
}
