use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use twolevel::SymmetryGroup;
use twolevel_cli::{
    dump, iterate, lower_bound, parse_grid_n, table1, vanishing, CliError, DumpTarget, Format,
    LevelArg, Report, RunConfig,
};

/// Optimal 2-level test functions and bounds on central-point vanishing.
#[derive(Parser, Debug)]
#[command(name = "twolevel", version, about)]
struct Args {
    #[command(subcommand)]
    command: Command,

    /// Odd number of grid nodes on [-1/2, 1/2]
    #[arg(long, global = true, default_value = "4001", value_parser = parse_grid_n)]
    grid_n: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Significant digits in text output
    #[arg(long, global = true, default_value_t = 6, value_parser = clap::value_parser!(u8).range(3..=17))]
    precision: u8,

    /// Write to this file instead of standard output
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Naive and optimal values for every group, with a Nystrom check
    Table1,
    /// Upper bound on the proportion vanishing to order at least RANK
    Vanishing {
        #[arg(long)]
        group: SymmetryGroup,
        #[arg(long)]
        rank: u64,
        #[arg(long, value_enum, default_value_t = LevelArg::Two)]
        level: LevelArg,
    },
    /// Lower bound on the proportion of small ranks
    LowerBound {
        #[arg(long)]
        group: SymmetryGroup,
        /// SO(even): ranks 0..=2k; SO(odd): ranks 1..=2k+1; O, U, Sp: k = 1 means ranks <= 2
        #[arg(long, default_value_t = 1)]
        k: u64,
        #[arg(long, value_enum, default_value_t = LevelArg::Two)]
        level: LevelArg,
    },
    /// Feed the optimum back in as the fixed test function and sum the Neumann series
    Iterate {
        #[arg(long)]
        group: SymmetryGroup,
        #[arg(long, default_value_t = 5)]
        terms: usize,
    },
    /// Export g, its self-correlation or the kernel as x,value samples
    Dump {
        #[arg(value_enum)]
        what: DumpTarget,
        #[arg(long)]
        group: SymmetryGroup,
    },
}

fn run(args: Args) -> Result<Report, CliError> {
    let cfg = RunConfig {
        grid_n: args.grid_n,
        format: args.format,
        precision: args.precision as usize,
        out: args.out,
    };
    match args.command {
        Command::Table1 => table1(&cfg),
        Command::Vanishing { group, rank, level } => vanishing(group, rank, level, &cfg),
        Command::LowerBound { group, k, level } => lower_bound(group, k, level, &cfg),
        Command::Iterate { group, terms } => iterate(group, terms, &cfg),
        Command::Dump { what, group } => dump(what, group, &cfg),
    }
}

fn emit(report: &Report) -> Result<(), CliError> {
    let body = report.render()?;
    match &report.config.out {
        Some(path) => std::fs::write(path, body).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        }),
        None => std::io::stdout()
            .lock()
            .write_all(body.as_bytes())
            .map_err(CliError::Stdout),
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let report = match run(args) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    if let Err(e) = emit(&report) {
        eprintln!("error: {e}");
        return ExitCode::from(e.exit_code());
    }
    match &report.failure {
        Some(why) => {
            eprintln!("error: {why}");
            ExitCode::from(1)
        }
        None => ExitCode::SUCCESS,
    }
}
