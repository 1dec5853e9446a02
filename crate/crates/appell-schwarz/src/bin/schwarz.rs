//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 domain error,
//! 3 convergence failure, 4 not on the image, 5 parse error.

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use appell_schwarz::cli::{
    cmd_forward, cmd_inverse, cmd_monodromy, cmd_periods, cmd_table, cmd_verify, GridSpec,
    MonodromyAction, RunConfig,
};
use appell_schwarz::error::Error;
use appell_schwarz::numerics::Tolerance;
use appell_schwarz::verify::Suite;

#[derive(Parser)]
#[command(
    name = "schwarz",
    about = "Forward and inverse Schwarz map for the specialized Appell system, \
             with verification suites and exact monodromy queries"
)]
struct Cli {
    #[command(flatten)]
    common: CommonArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Absolute quadrature tolerance
    #[arg(long, global = true)]
    abs_eps: Option<f64>,
    /// Relative quadrature tolerance
    #[arg(long, global = true)]
    rel_eps: Option<f64>,
    /// Maximum refinement depth of the quadrature rule
    #[arg(long, global = true)]
    quad_levels: Option<u32>,
    /// Series truncation threshold
    #[arg(long, global = true)]
    theta_eps: Option<f64>,
    /// Output format: json or csv
    #[arg(long, global = true)]
    format: Option<String>,
    /// Accept points outside the real chamber (principal branches,
    /// no homology guarantee)
    #[arg(long, global = true)]
    unvalidated: bool,
    /// Grid specification start:end:step for table sweeps
    #[arg(long, global = true)]
    grid: Option<String>,
    /// Optional key=value configuration file, overridden by flags
    #[arg(long, global = true)]
    config: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the forward map at a real point (x1, x2)
    Forward { x1: f64, x2: f64 },
    /// Invert an image point (y1, y2, tau), given as six reals
    #[command(allow_negative_numbers = true)]
    Inverse {
        y1_re: f64,
        y1_im: f64,
        y2_re: f64,
        y2_im: f64,
        tau_re: f64,
        tau_im: f64,
    },
    /// Evaluate the four periods at a real point (x1, x2)
    Periods { x1: f64, x2: f64 },
    /// Run a verification suite: theta, periods, curve, schwarz, monodromy, all
    Verify { suite: String },
    /// Check membership or decompose a matrix given as JSON
    Monodromy { action: String, matrix_json: String },
    /// Sweep the forward map over a chamber grid and emit CSV
    Table,
}

fn build_config(common: &CommonArgs) -> Result<RunConfig, Error> {
    let mut config = RunConfig::default();
    if let Some(path) = &common.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read config '{path}': {e}")))?;
        config.apply_config_text(&text)?;
    }
    if let Some(v) = common.abs_eps {
        config.tol.abs_eps = v;
    }
    if let Some(v) = common.rel_eps {
        config.tol.rel_eps = v;
    }
    if let Some(v) = common.quad_levels {
        config.tol.quad_levels = v;
    }
    if let Some(v) = common.theta_eps {
        config.tol.theta_trunc_eps = v;
    }
    if let Some(f) = &common.format {
        config.format = f.parse()?;
    }
    if let Some(g) = &common.grid {
        config.grid = Some(g.parse::<GridSpec>()?);
    }
    config.unvalidated |= common.unvalidated;
    // validate the assembled tolerance bundle
    Tolerance::new(
        config.tol.abs_eps,
        config.tol.rel_eps,
        config.tol.quad_levels,
        config.tol.theta_trunc_eps,
    )?;
    Ok(config)
}

fn run(cli: Cli) -> Result<i32, Error> {
    let config = build_config(&cli.common)?;
    match cli.command {
        Command::Forward { x1, x2 } => {
            print!("{}", ensure_newline(cmd_forward(x1, x2, &config)?));
            Ok(0)
        }
        Command::Inverse {
            y1_re,
            y1_im,
            y2_re,
            y2_im,
            tau_re,
            tau_im,
        } => {
            let out = cmd_inverse(
                Complex64::new(y1_re, y1_im),
                Complex64::new(y2_re, y2_im),
                Complex64::new(tau_re, tau_im),
                &config,
            )?;
            print!("{}", ensure_newline(out));
            Ok(0)
        }
        Command::Periods { x1, x2 } => {
            print!("{}", ensure_newline(cmd_periods(x1, x2, &config)?));
            Ok(0)
        }
        Command::Verify { suite } => {
            let suite: Suite = suite.parse()?;
            let (report, pass) = cmd_verify(suite, &config)?;
            print!("{}", ensure_newline(report));
            Ok(if pass { 0 } else { 1 })
        }
        Command::Monodromy {
            action,
            matrix_json,
        } => {
            let action: MonodromyAction = action.parse()?;
            print!("{}", ensure_newline(cmd_monodromy(action, &matrix_json)?));
            Ok(0)
        }
        Command::Table => {
            print!("{}", cmd_table(&config)?);
            Ok(0)
        }
    }
}

fn ensure_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
