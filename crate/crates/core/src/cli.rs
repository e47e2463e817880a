//! Command-line front end. [`run`] returns the process exit code:
//! 0 on success, 1 when verification finds violations, 2 on usage errors or
//! invalid input.

use std::ffi::OsString;
use std::io::Write;
use std::net::{IpAddr, Ipv4Addr, SocketAddr};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::continuous::{correction_identity, p_infinity_exact};
use crate::error::{Error, Result};
use crate::export::{self, ContinuousGrid};
use crate::game::{check_state, classify, closed_form_value, optimal_bid, Region};
use crate::rational::Rational;
use crate::simulation::{
    estimate_escape, estimate_win_prob, evaluate_policy, simulate_continuous, strategy_matrix,
    to_big, BuiltinStrategy, ContinuousConfig, SimConfig, SimulationOutput,
};
use crate::solver::solve_dp;
use crate::verify::verify_all;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATIONS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "guesswho",
    version,
    about = "Exact solver, simulator and advisor for Guess Who?"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Output of single-state reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct Output {
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Region, optimal value and bid at one state.
    Value {
        #[arg(value_name = "N", required_unless_present = "n")]
        pos_n: Option<u64>,
        #[arg(value_name = "M", required_unless_present = "m")]
        pos_m: Option<u64>,
        #[arg(long, conflicts_with = "pos_n")]
        n: Option<u64>,
        #[arg(long, conflicts_with = "pos_m")]
        m: Option<u64>,
        #[arg(long, value_enum, default_value = "text")]
        format: ReportFormat,
    },
    /// Solve by DP and check it against the closed forms.
    Verify {
        #[arg(long, default_value_t = 128)]
        max_sum: u64,
    },
    /// Dump the DP table.
    Solve {
        #[arg(long, default_value_t = 64)]
        max_sum: u64,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[command(flatten)]
        output: Output,
    },
    /// Optimal values on an `n x m` grid.
    Heatmap {
        #[arg(long, default_value_t = 32)]
        max_n: u64,
        #[arg(long, default_value_t = 32)]
        max_m: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Continuous values over the L-shaped `(alpha, beta)` region.
    HeatmapContinuous {
        /// Grid steps per axis.
        #[arg(long, default_value_t = 96)]
        grid: u32,
        #[arg(long, default_value_t = 4.0)]
        alpha_max: f64,
        #[arg(long, default_value_t = 4.0)]
        beta_max: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Monte Carlo estimates.
    Simulate(SimulateArgs),
    /// Exact value of a fixed strategy against optimal play.
    Evaluate {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        m: u64,
        #[arg(long, default_value = "halving")]
        p1: BuiltinStrategy,
    },
    /// Fair handicap factor `c` over `beta` in `(1, 2]`.
    Fairness {
        #[arg(long, default_value_t = 1000)]
        grid: u32,
        #[command(flatten)]
        output: Output,
    },
    /// Run the advisor HTTP service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value_t = IpAddr::V4(Ipv4Addr::LOCALHOST))]
        host: IpAddr,
        /// Load sessions from this file at start and save them on shutdown.
        #[arg(long)]
        snapshot: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, default_value_t = 16)]
    pub n: u64,
    #[arg(long, default_value_t = 16)]
    pub m: u64,
    #[arg(long, default_value = "optimal")]
    pub p1: BuiltinStrategy,
    #[arg(long, default_value = "optimal")]
    pub p2: BuiltinStrategy,
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Every pair of built-in strategies.
    #[arg(long, conflicts_with_all = ["continuous", "escape"])]
    pub matrix: bool,
    /// Continuous game from real pools `--x`, `--y`.
    #[arg(long, conflicts_with = "escape")]
    pub continuous: bool,
    /// First-escape frequency from the weeds at `--x = alpha`, `--y = beta`.
    #[arg(long)]
    pub escape: bool,
    #[arg(long, default_value_t = 4.0)]
    pub x: f64,
    #[arg(long, default_value_t = 2.0)]
    pub y: f64,
    #[arg(long, default_value_t = 100_000)]
    pub horizon: u64,
    #[arg(long, default_value_t = 1e-9)]
    pub epsilon: f64,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[command(flatten)]
    pub output: Output,
}

fn emit(output: &Output, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match &output.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::Domain(format!("cannot write {}: {e}", path.display()))),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| Error::Domain(format!("cannot write output: {e}"))),
    }
}

fn fraction_line(p: &Rational) -> String {
    format!("{p} ({})", p.to_decimal_string(export::DIGITS))
}

fn big_fraction_line(p: &BigRational) -> String {
    let approx = p.to_f64().unwrap_or(f64::NAN);
    format!("{p} ({})", format_significant(approx))
}

#[derive(Serialize)]
struct ValueReport {
    n: u64,
    m: u64,
    region: Region,
    region_label: &'static str,
    level: Option<u32>,
    value: Rational,
    bid: Option<u64>,
    p_infinity: Option<Rational>,
    correction: Option<Rational>,
}

fn value_report(n: u64, m: u64) -> Result<ValueReport> {
    check_state(n, m)?;
    let region = classify(n, m)?;
    let live = n > 1 && m > 1;
    Ok(ValueReport {
        n,
        m,
        region,
        region_label: region.label(),
        level: region.level(),
        value: closed_form_value(n, m)?,
        bid: if live {
            Some(optimal_bid(n, m)?.value())
        } else {
            None
        },
        p_infinity: if live {
            Some(p_infinity_exact(n, m)?)
        } else {
            None
        },
        correction: if live {
            Some(correction_identity(n, m)?)
        } else {
            None
        },
    })
}

fn render_value(r: &ValueReport) -> String {
    let na = || "n/a".to_string();
    let mut s = format!("state: ({}, {})\n", r.n, r.m);
    s += &format!("region: {}\n", r.region);
    s += &format!("level: {}\n", r.level.map_or_else(na, |k| k.to_string()));
    s += &format!("p*: {}\n", fraction_line(&r.value));
    s += &format!(
        "bid: {}\n",
        r.bid
            .map_or_else(|| "none (terminal)".to_string(), |b| b.to_string())
    );
    s += &format!(
        "p_inf: {}\n",
        r.p_infinity.as_ref().map_or_else(na, fraction_line)
    );
    s += &format!(
        "correction: {}\n",
        r.correction.as_ref().map_or_else(na, fraction_line)
    );
    s
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serializes") + "\n"
}

fn simulate(args: &SimulateArgs, stdout: &mut dyn Write) -> Result<i32> {
    if args.matrix {
        let cells = strategy_matrix(
            args.n,
            args.m,
            &BuiltinStrategy::ALL,
            args.trials,
            args.seed,
            args.workers,
        )?;
        let text = match args.format {
            Format::Csv => export::matrix_csv(&cells),
            Format::Json => to_json(&cells),
        };
        emit(&args.output, &text, stdout)?;
        return Ok(EXIT_OK);
    }
    if args.escape {
        let report = estimate_escape(
            args.x,
            args.y,
            args.trials,
            args.epsilon,
            args.seed,
            args.workers,
        )?;
        #[derive(Serialize)]
        struct EscapeConfig {
            alpha: f64,
            beta: f64,
            epsilon: f64,
        }
        let config = EscapeConfig {
            alpha: args.x,
            beta: args.y,
            epsilon: args.epsilon,
        };
        emit(
            &args.output,
            &to_json(&SimulationOutput::new(config, &report, 0)),
            stdout,
        )?;
        return Ok(EXIT_OK);
    }
    if args.continuous {
        let config = ContinuousConfig {
            x: args.x,
            y: args.y,
            horizon: args.horizon,
            epsilon: args.epsilon,
            trials: args.trials,
            seed: args.seed,
            workers: args.workers,
        };
        let report = simulate_continuous(&config)?;
        let out = SimulationOutput::new(config, &report.estimate, report.undecided);
        emit(&args.output, &to_json(&out), stdout)?;
        return Ok(EXIT_OK);
    }
    let config = SimConfig {
        n: args.n,
        m: args.m,
        p1: args.p1,
        p2: args.p2,
        trials: args.trials,
        seed: args.seed,
        workers: args.workers,
    };
    let report = estimate_win_prob(&config)?;
    let text = match args.format {
        Format::Json => to_json(&SimulationOutput::new(config, &report, 0)),
        Format::Csv => format!(
            "n,m,p1,p2,trials,seed,wins,p_hat,std_err\n{},{},{},{},{},{},{},{},{}\n",
            config.n,
            config.m,
            config.p1,
            config.p2,
            report.trials,
            report.seed,
            report.wins,
            format_significant(report.p_hat),
            format_significant(report.std_err)
        ),
    };
    emit(&args.output, &text, stdout)?;
    Ok(EXIT_OK)
}

fn format_significant(x: f64) -> String {
    crate::rational::format_significant(x, export::DIGITS)
}

fn dispatch(command: Command, stdout: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Value {
            pos_n,
            pos_m,
            n,
            m,
            format,
        } => {
            let (n, m) = (pos_n.or(n).unwrap_or(0), pos_m.or(m).unwrap_or(0));
            let report = value_report(n, m)?;
            let text = match format {
                ReportFormat::Text => render_value(&report),
                ReportFormat::Json => to_json(&report),
            };
            emit(&Output { out: None }, &text, stdout)?;
            Ok(EXIT_OK)
        }
        Command::Verify { max_sum } => {
            let report = verify_all(max_sum)?;
            emit(&Output { out: None }, &to_json(&report), stdout)?;
            Ok(if report.passed() {
                EXIT_OK
            } else {
                EXIT_VIOLATIONS
            })
        }
        Command::Solve {
            max_sum,
            format,
            output,
        } => {
            let table = solve_dp(max_sum)?;
            let text = match format {
                Format::Csv => export::table_csv(&table),
                Format::Json => export::table_json(&table),
            };
            emit(&output, &text, stdout)?;
            Ok(EXIT_OK)
        }
        Command::Heatmap {
            max_n,
            max_m,
            output,
        } => {
            emit(&output, &export::heatmap_csv(max_n, max_m)?, stdout)?;
            Ok(EXIT_OK)
        }
        Command::HeatmapContinuous {
            grid,
            alpha_max,
            beta_max,
            output,
        } => {
            let region_grid = ContinuousGrid {
                alpha_max,
                beta_max,
                alpha_steps: grid,
                beta_steps: grid,
            };
            emit(
                &output,
                &export::continuous_heatmap_csv(&region_grid)?,
                stdout,
            )?;
            Ok(EXIT_OK)
        }
        Command::Simulate(args) => simulate(&args, stdout),
        Command::Evaluate { n, m, p1 } => {
            let value = evaluate_policy(n, m, &p1)?;
            let best = to_big(&closed_form_value(n, m)?);
            let gap = &best - &value;
            let text = format!(
                "strategy: {p1}\nvalue: {}\np*: {}\ngap: {}\n",
                big_fraction_line(&value),
                big_fraction_line(&best),
                big_fraction_line(&gap)
            );
            emit(&Output { out: None }, &text, stdout)?;
            Ok(EXIT_OK)
        }
        Command::Fairness { grid, output } => {
            emit(&output, &export::fairness_csv(grid)?, stdout)?;
            Ok(EXIT_OK)
        }
        Command::Serve {
            port,
            host,
            snapshot,
        } => {
            let runtime = tokio::runtime::Runtime::new()
                .map_err(|e| Error::Domain(format!("cannot start runtime: {e}")))?;
            runtime.block_on(crate::service::serve(SocketAddr::new(host, port), snapshot))?;
            Ok(EXIT_OK)
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<'a, I, T>(args: I, stdout: &'a mut dyn Write, stderr: &'a mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let sink = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli.command, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
    }
}
