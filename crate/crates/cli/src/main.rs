//! Command-line front end for the decision procedures, cut calculus, limit
//! checks, class codes and the atom compiler.

mod commands;
mod output;
mod repl;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use qvspi::limits::Side;
use qvspi::qe::Strategy;
use qvspi::scalar::set_precision_policy;
use qvspi::selftest::DEFAULT_SEED;

use output::{CliError, Format, Outcome};

#[derive(Debug, Parser)]
#[command(name = "qvspi", version, about = "Exact decisions in the rationals with the relation pi*x < y")]
struct Cli {
    /// Bits of the first enclosure of pi tried when separating a scalar from 0.
    #[arg(long, global = true, default_value_t = 64, value_parser = clap::value_parser!(u32).range(16..))]
    precision_start: u32,
    /// Factor by which the precision grows after a failed separation.
    #[arg(long, global = true, default_value_t = 2, value_parser = clap::value_parser!(u32).range(2..))]
    precision_growth: u32,
    /// Seed for the randomized self-test suites.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StrategyArg {
    Fm,
    Vs,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SideArg {
    Left,
    Right,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide a sentence. Exits with 1 when it is false.
    Decide {
        formula: String,
        #[arg(long, value_enum, default_value_t = StrategyArg::Fm)]
        strategy: StrategyArg,
    },
    /// Print an equivalent quantifier-free formula.
    Eliminate { formula: String },
    /// Evaluate a formula under an assignment of scalars to its free variables.
    Eval {
        formula: String,
        /// A binding VAR=SCALAR; repeat for several variables.
        #[arg(long = "assign", short = 'a')]
        assign: Vec<String>,
    },
    /// Split a one-variable definable set into convex components.
    Decompose {
        formula: String,
        #[arg(long)]
        var: Option<String>,
    },
    /// Classify the cut below a scalar as rational or irrational.
    ClassifyCut { value: String },
    /// Decide whether the cut below a scalar is valuational.
    Valuational { value: String },
    /// One-sided limit of a piecewise affine function, or the external-limit
    /// check at all its domain endpoints when no point is given.
    Limit {
        /// JSON list of pieces {lo, hi, lo_in, hi_in, slope, intercept}.
        #[arg(long)]
        function: PathBuf,
        #[arg(long)]
        at: Option<String>,
        #[arg(long, value_enum, default_value_t = SideArg::Left)]
        side: SideArg,
    },
    /// Refute candidate Skolem functions for the formula attached to a cut.
    SkolemCheck {
        cut: String,
        /// JSON list of candidates, each a list of pieces.
        #[arg(long)]
        candidates: PathBuf,
    },
    /// Canonical class codes of an equivalence relation E(x, y) at sample points.
    EiCode {
        relation: String,
        /// File with one rational sample per line; `#` starts a comment.
        #[arg(long)]
        samples: PathBuf,
    },
    /// Compile every atom into the primitive signature and verify the result.
    Compile { formula: String },
    /// Run the seeded self-test suites.
    Selftest {
        /// Upper bound on the cases of each suite; 0 runs nothing.
        #[arg(long)]
        iterations: Option<usize>,
    },
    /// Read commands from standard input, one per line.
    Repl,
}

fn run(command: &Command, seed: u64) -> Result<Outcome, CliError> {
    match command {
        Command::Decide { formula, strategy } => commands::decide(
            formula,
            match strategy {
                StrategyArg::Fm => Strategy::FourierMotzkin,
                StrategyArg::Vs => Strategy::VirtualSubstitution,
            },
        ),
        Command::Eliminate { formula } => commands::eliminate_cmd(formula),
        Command::Eval { formula, assign } => commands::eval_cmd(formula, assign),
        Command::Decompose { formula, var } => commands::decompose_cmd(formula, var.as_deref()),
        Command::ClassifyCut { value } => commands::classify_cut_cmd(value),
        Command::Valuational { value } => commands::valuational_cmd(value),
        Command::Limit { function, at, side } => commands::limit_cmd(
            function,
            at.as_deref(),
            match side {
                SideArg::Left => Side::Left,
                SideArg::Right => Side::Right,
            },
        ),
        Command::SkolemCheck { cut, candidates } => commands::skolem_check_cmd(cut, candidates),
        Command::EiCode { relation, samples } => commands::ei_code_cmd(relation, samples),
        Command::Compile { formula } => commands::compile_cmd(formula),
        Command::Selftest { iterations } => commands::selftest_cmd(seed, *iterations),
        Command::Repl => unreachable!("handled before dispatch"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    set_precision_policy(cli.precision_start, cli.precision_growth);
    if let Command::Repl = cli.command {
        return repl::run(cli.format);
    }
    let start = Instant::now();
    match run(&cli.command, cli.seed) {
        Ok(outcome) => {
            let code = outcome.exit_code();
            println!("{}", outcome.render(cli.format, start.elapsed().as_millis() as u64));
            code
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
