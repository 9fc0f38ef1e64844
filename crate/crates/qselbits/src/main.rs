//! Command-line front end: exact values, the full table, asymptotic
//! constants, Monte Carlo simulation, and the cross-validation suite.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qselbits::asymptotics::{
    mu1_asymptotic, mu1_stable, mu_avg_asymptotic, mu_avg_stable, slope_avg_truncated,
    slope_c_truncated,
};
use qselbits::cascade::{mu_general_with, CascadeOptions};
use qselbits::exact_mu::{mu1_exact, mu_avg_exact};
use qselbits::simulate::monte_carlo;
use qselbits::table::{mu_table_with, TABLE_SOFT_MAX_N};
use qselbits::validate::{self, Level};
use qselbits::{Rational, DEFAULT_DIGITS};

#[derive(Parser)]
#[command(
    name = "qselbits",
    about = "Expected bit-comparison cost of Quickselect: exact rationals, asymptotics, simulation",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact expectation for one rank (or the smallest / rank-averaged case)
    Exact(ExactArgs),
    /// Exact expectations for every rank and key count up to a bound
    Table(TableArgs),
    /// Asymptotic slope constants and expansions
    Asympt(AsymptArgs),
    /// Monte Carlo simulation of the algorithm on random bit-stream keys
    Simulate(SimulateArgs),
    /// Cross-validate the exact, asymptotic, and simulated routes
    Validate(ValidateArgs),
}

#[derive(Args)]
struct ExactArgs {
    /// Number of keys
    #[arg(short = 'n', long, value_name = "N")]
    n: usize,
    /// Target rank (1-based)
    #[arg(short = 'm', long, value_name = "M", group = "target")]
    m: Option<usize>,
    /// Expected cost of finding the smallest key
    #[arg(long, group = "target")]
    smallest: bool,
    /// Expected cost averaged over a uniformly random target rank
    #[arg(long, group = "target")]
    average: bool,
    /// Digits after the decimal point in the decimal rendering
    #[arg(long, default_value_t = DEFAULT_DIGITS)]
    digits: usize,
}

#[derive(Args)]
struct TableArgs {
    /// Largest key count in the grid
    #[arg(long, default_value_t = 20)]
    max_n: usize,
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    format: TableFormat,
    #[arg(long, default_value_t = DEFAULT_DIGITS)]
    digits: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Args)]
struct AsymptArgs {
    /// Which slope constant to report
    #[arg(long, value_enum)]
    constant: Constant,
    /// Also evaluate the expansion at this key count and compare it with
    /// the numerically stable exact evaluation
    #[arg(short = 'n', long)]
    n: Option<u64>,
    /// Truncation bound for the constant's fluctuation sum
    #[arg(long, default_value_t = 10)]
    k_max: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Constant {
    /// Slope of the smallest-rank cost (~5.27938)
    C,
    /// Slope of the rank-averaged cost (~8.20731)
    Avg,
}

#[derive(Args)]
struct SimulateArgs {
    /// Target rank (1-based)
    #[arg(short = 'm', long)]
    m: usize,
    /// Number of keys
    #[arg(short = 'n', long)]
    n: usize,
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long, value_enum, default_value_t = LevelArg::Quick)]
    level: LevelArg,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    format: ReportFormat,
    /// Corrupt the cascade integration divisor (mutation hook proving the
    /// suite can fail)
    #[arg(long, hide = true)]
    corrupt_c3: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Quick,
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

/// Decimal string with `sig` significant digits.
fn sig_digits(v: f64, sig: usize) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let mag = v.abs().log10().floor() as i32;
    let decimals = (sig as i32 - 1 - mag).max(0) as usize;
    format!("{v:.decimals$}")
}

fn print_mu(value: &Rational, digits: usize) {
    if value.is_integer() {
        println!("{value}");
    } else {
        println!("{value} ≈ {}", value.to_decimal(digits));
    }
}

fn run_exact(args: ExactArgs) -> ExitCode {
    if args.n < 1 {
        return usage_error("need n >= 1");
    }
    let value = if args.smallest {
        mu1_exact(args.n).value
    } else if args.average {
        mu_avg_exact(args.n).value
    } else if let Some(m) = args.m {
        match mu_general_with(m, args.n, &CascadeOptions::default()) {
            Ok(v) => v.value,
            Err(e) => return usage_error(&e.to_string()),
        }
    } else {
        return usage_error("choose one of --smallest, --average, or -m <M>");
    };
    print_mu(&value, args.digits);
    ExitCode::SUCCESS
}

fn run_table(args: TableArgs) -> ExitCode {
    if args.max_n < 1 {
        return usage_error("need --max-n >= 1");
    }
    if args.max_n > TABLE_SOFT_MAX_N {
        eprintln!(
            "warning: --max-n {} exceeds the soft budget of {TABLE_SOFT_MAX_N}; \
             this will take a while",
            args.max_n
        );
    }
    let table = mu_table_with(args.max_n, args.digits, &CascadeOptions::default());
    match args.format {
        TableFormat::Csv => print!("{}", table.to_csv()),
        TableFormat::Json => print!("{}", table.to_json()),
    }
    ExitCode::SUCCESS
}

fn run_asympt(args: AsymptArgs) -> ExitCode {
    match args.constant {
        Constant::C => {
            let c = slope_c_truncated(args.k_max);
            println!("c = {} (k_max = {})", sig_digits(c, 10), args.k_max);
            if let Some(n) = args.n {
                let expansion = mu1_asymptotic(n).value;
                let stable = mu1_stable(n);
                println!("expansion(n={n}) = {}", sig_digits(expansion, 10));
                println!("|exact - expansion| = {}", sig_digits((stable - expansion).abs(), 6));
            }
        }
        Constant::Avg => {
            let s = slope_avg_truncated(args.k_max);
            println!("avg slope = {} (k_max = {})", sig_digits(s, 10), args.k_max);
            if let Some(n) = args.n {
                let expansion = mu_avg_asymptotic(n).value;
                let stable = mu_avg_stable(n);
                println!("expansion(n={n}) = {}", sig_digits(expansion, 10));
                println!("|exact - expansion| = {}", sig_digits((stable - expansion).abs(), 6));
            }
        }
    }
    ExitCode::SUCCESS
}

fn run_simulate(args: SimulateArgs) -> ExitCode {
    match monte_carlo(args.m, args.n, args.trials, args.seed) {
        Ok(stats) => {
            println!(
                "{}",
                serde_json::to_string(&stats.report()).expect("report serializes")
            );
            ExitCode::SUCCESS
        }
        Err(e) => usage_error(&e.to_string()),
    }
}

fn run_validate(args: ValidateArgs) -> ExitCode {
    let level = match args.level {
        LevelArg::Quick => Level::Quick,
        LevelArg::Full => Level::Full,
    };
    let opts = CascadeOptions { corrupt_divisor: args.corrupt_c3 };
    let report = validate::run(level, &opts);
    match args.format {
        ReportFormat::Text => print!("{}", report.to_text()),
        ReportFormat::Json => print!("{}", report.to_json()),
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Exact(args) => run_exact(args),
        Command::Table(args) => run_table(args),
        Command::Asympt(args) => run_asympt(args),
        Command::Simulate(args) => run_simulate(args),
        Command::Validate(args) => run_validate(args),
    }
}
