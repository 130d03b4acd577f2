//! Command-line front end. [`run`] parses arguments, applies flag overrides
//! to the configuration and returns the process exit code.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{RunConfig, SweepAxis};
use crate::error::Error;
use crate::fas::CycleType;
use crate::runner;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NOT_CONVERGED: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "fracmg",
    version,
    about = "FAS multigrid for matrix-fracture flow with Forchheimer fractures"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub overrides: Overrides,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one problem and write fields, history and a report.
    Solve,
    /// Cycle counts over a parameter list and the grids of --h-list.
    Sweep {
        /// Swept parameter: kf or beta.
        #[arg(long, value_parser = parse_axis)]
        axis: Option<SweepAxis>,
    },
    /// Residual histories on every grid of --h-list.
    Convergence,
    /// Numerical self-checks on a small grid.
    Verify,
    /// Render history or table CSV files as an SVG chart.
    Plot {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        /// Output file; defaults to <out>/plot.svg.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Args, Default)]
pub struct Overrides {
    /// TOML configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Cells per subdomain for solve and verify.
    #[arg(long, global = true)]
    pub cells: Option<usize>,
    /// Comma-separated cells per subdomain for sweep and convergence.
    #[arg(long, global = true, value_delimiter = ',')]
    pub h_list: Option<Vec<usize>>,
    /// Comma-separated fracture permeabilities for a kf sweep.
    #[arg(long, global = true, value_delimiter = ',')]
    pub kf_list: Option<Vec<f64>>,
    /// Comma-separated Forchheimer coefficients for a beta sweep.
    #[arg(long, global = true, value_delimiter = ',')]
    pub beta_list: Option<Vec<f64>>,
    /// Residual reduction factor at which cycling stops.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Cycle budget per solve.
    #[arg(long, global = true)]
    pub max_cycles: Option<usize>,
    /// Cycle shape, V or W.
    #[arg(long, global = true, value_parser = parse_cycle)]
    pub cycle: Option<CycleType>,
    /// Closure parameter of the coupling condition.
    #[arg(long, global = true)]
    pub xi: Option<f64>,
    /// Tangential fracture permeability.
    #[arg(long, global = true)]
    pub kf: Option<f64>,
    /// Forchheimer coefficient.
    #[arg(long, global = true)]
    pub beta: Option<f64>,
}

fn parse_axis(s: &str) -> Result<SweepAxis, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_cycle(s: &str) -> Result<CycleType, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

impl Overrides {
    /// Loads the configuration file, if any, and applies the flags.
    /// `--tol` sets the stopping factor of the convergence runs when
    /// `convergence` is true and that of every other solve otherwise.
    pub fn resolve(&self, convergence: bool) -> crate::Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        if let Some(o) = &self.out {
            cfg.output.dir = o.clone();
        }
        if let Some(n) = self.cells {
            cfg.grid.cells_per_subdomain = n;
            cfg.experiment.verify_cells = n;
        }
        if let Some(v) = &self.h_list {
            cfg.experiment.h_list = v.clone();
        }
        if let Some(v) = &self.kf_list {
            cfg.experiment.kf_list = v.clone();
        }
        if let Some(v) = &self.beta_list {
            cfg.experiment.beta_list = v.clone();
        }
        if let Some(t) = self.tol {
            if convergence {
                cfg.experiment.convergence_tol = t;
            } else {
                cfg.cycle.tol = t;
            }
        }
        if let Some(m) = self.max_cycles {
            cfg.cycle.max_cycles = m;
        }
        if let Some(c) = self.cycle {
            cfg.cycle.cycle_type = c;
        }
        if let Some(x) = self.xi {
            cfg.problem.xi = x;
        }
        if let Some(k) = self.kf {
            cfg.problem.kf = k;
        }
        if let Some(b) = self.beta {
            cfg.problem.beta = b;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::CoarseSolve { .. } | Error::Newton { .. } | Error::SingularMatrix(_) => {
            EXIT_NOT_CONVERGED
        }
        _ => EXIT_INPUT,
    }
}

fn execute(cli: &Cli) -> crate::Result<i32> {
    let convergence = matches!(cli.command, Command::Convergence);
    let cfg = match cli.command {
        Command::Plot { .. } => RunConfig::default(),
        _ => cli.overrides.resolve(convergence)?,
    };
    let out = cli
        .overrides
        .out
        .clone()
        .unwrap_or_else(|| cfg.output.dir.clone());
    match &cli.command {
        Command::Solve => {
            let rep = runner::run_solve(&cfg, &out)?;
            println!(
                "{} after {} cycles, relative residual {:.3e}, output in {}",
                if rep.converged {
                    "converged"
                } else {
                    "NOT converged"
                },
                rep.iterations,
                rep.final_relative_residual(),
                out.display()
            );
            Ok(if rep.converged {
                EXIT_OK
            } else {
                EXIT_NOT_CONVERGED
            })
        }
        Command::Sweep { axis } => {
            let axis = axis.unwrap_or(cfg.experiment.sweep_axis);
            let table = runner::run_sweep(&cfg, axis, &out)?;
            print!("{}", std::fs::read_to_string(out.join("table.csv"))?);
            let failed = table.counts.iter().flatten().any(Option::is_none);
            Ok(if failed { EXIT_NOT_CONVERGED } else { EXIT_OK })
        }
        Command::Convergence => {
            let reports = runner::run_convergence(&cfg, &out)?;
            for (h, r) in &reports {
                println!(
                    "h = 1/{h}: {} cycles{}, mean reduction {:.3}",
                    r.iterations,
                    if r.converged { "" } else { " (not converged)" },
                    r.mean_reduction()
                );
            }
            Ok(if reports.iter().all(|r| r.1.converged) {
                EXIT_OK
            } else {
                EXIT_NOT_CONVERGED
            })
        }
        Command::Verify => {
            let checks = runner::run_verify(&cfg)?;
            for c in &checks {
                println!("{c}");
            }
            Ok(if checks.iter().all(|c| c.passed()) {
                EXIT_OK
            } else {
                EXIT_VERIFY
            })
        }
        Command::Plot { inputs, output } => {
            let output = output.clone().unwrap_or_else(|| out.join("plot.svg"));
            runner::run_plot(inputs, &output)?;
            println!("wrote {}", output.display());
            Ok(EXIT_OK)
        }
    }
}

/// Runs the command line given by `args` (program name first).
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
