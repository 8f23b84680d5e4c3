mod bench;
mod commands;
mod file;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

/// Experiments with value symmetry breaking on finite-domain problems.
#[derive(Parser)]
#[command(name = "valsym", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Search for solutions of a problem file.
    Solve {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::None)]
        method: Method,
        #[arg(long, value_enum, default_value_t = GoalArg::All)]
        goal: GoalArg,
        #[arg(long, value_enum, default_value_t = VarOrderArg::Lex)]
        var_order: VarOrderArg,
        /// Abort the search after this many seconds.
        #[arg(long)]
        timeout_secs: Option<u64>,
        /// Print only the JSON record.
        #[arg(long)]
        json: bool,
    },
    /// Filter the domains of a problem file once and list the prunings.
    Propagate {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Level::Gac)]
        level: Level,
        #[arg(long, value_enum, default_value_t = Method::None)]
        method: Method,
        /// Enumeration budget for oracle levels.
        #[arg(long)]
        budget: Option<u128>,
        #[arg(long)]
        json: bool,
    },
    /// Compare the pruning of every symmetry breaking method on one file.
    Compare {
        file: PathBuf,
        #[arg(long)]
        budget: Option<u128>,
    },
    /// Static precedence vs GE-tree search on pigeonhole models, as CSV.
    BenchGetree {
        #[arg(long, default_value_t = 4)]
        n_min: usize,
        #[arg(long, default_value_t = 10)]
        n_max: usize,
        /// Per-n limit for each search.
        #[arg(long, default_value_t = 60)]
        timeout_secs: u64,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reduce a DIMACS CNF formula to a symmetry breaking problem.
    Reduce {
        #[arg(long)]
        cnf: PathBuf,
        /// Check support existence against brute-force SAT (N ≤ 3).
        #[arg(long)]
        check: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Consistency levels of the paired pigeonhole encoding.
    Kcheck {
        #[arg(long, value_enum, default_value_t = KFamily::PairedPigeonhole)]
        family: KFamily,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=16))]
        k: u64,
        #[arg(long)]
        budget: Option<u128>,
    },
    /// Print a generated instance as a problem file.
    Generate {
        #[arg(value_enum)]
        family: Family,
        /// Size for the pigeonhole model.
        #[arg(long, default_value_t = 4)]
        n: usize,
        /// Size for the paired pigeonhole family.
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    None,
    Precedence,
    GeneratorLex,
    Puget,
    GeTree,
    /// The full symmetry breaking constraint, by enumeration only.
    Valsymbreak,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Level {
    Ac,
    Gac,
    Sac,
    OracleGac,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GoalArg {
    First,
    All,
    Count,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VarOrderArg {
    Lex,
    MinDomain,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KFamily {
    #[value(alias = "thm7")]
    PairedPigeonhole,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Pigeonhole,
    GeneratorGap,
    ChannellingGap,
    PairedPigeonhole,
}

/// Exit status for a command that ran to completion.
pub enum Status {
    Ok,
    /// A check the command performs did not hold.
    CheckFailed,
    Unsatisfiable,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve { file, method, goal, var_order, timeout_secs, json } => {
            commands::solve(&file, method, goal, var_order, timeout_secs, json)
        }
        Command::Propagate { file, level, method, budget, json } => {
            commands::propagate(&file, level, method, budget, json)
        }
        Command::Compare { file, budget } => commands::compare(&file, budget),
        Command::BenchGetree { n_min, n_max, timeout_secs, out } => {
            bench::bench_getree(n_min, n_max, timeout_secs, out.as_deref())
        }
        Command::Reduce { cnf, check, out } => commands::reduce(&cnf, check, out.as_deref()),
        Command::Kcheck { family, k, budget } => commands::kcheck(family, k as usize, budget),
        Command::Generate { family, n, k } => commands::generate(family, n, k),
    };
    match result {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::CheckFailed) => ExitCode::from(1),
        Ok(Status::Unsatisfiable) => ExitCode::from(10),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
