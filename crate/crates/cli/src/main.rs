use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use coated_layer_cli::commands;
use coated_layer_cli::config::{ConvergeSection, Format, RunConfig, TransferSection};
use coated_layer_cli::CliError;

#[derive(Parser)]
#[command(
    name = "coated-layer",
    version,
    about = "Local indentation of thin coated elastic layers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Run configuration (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output directory, overriding `output.directory`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Field file format, overriding `output.format`.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Subcommand)]
enum Command {
    /// Surface deflection field for the configured load.
    Indent(Common),
    /// Table of incompressible single-mode kernels.
    Transfer {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        k_min: Option<f64>,
        #[arg(long)]
        k_max: Option<f64>,
        #[arg(long)]
        n_points: Option<usize>,
        /// Also write an SVG plot.
        #[arg(long)]
        plot: bool,
    },
    /// Model error against the reference solver.
    Converge {
        #[command(flatten)]
        common: Common,
        /// Comma-separated, strictly decreasing thinness parameters.
        #[arg(long, value_delimiter = ',')]
        eps: Option<Vec<f64>>,
        /// Rescale the membrane so that its stiffness ratio is fixed.
        #[arg(long)]
        hold_stiffness_ratio: Option<f64>,
    },
    /// Limit-case report.
    Limits(Common),
}

fn load(common: &Common) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::load(&common.config)?;
    if let Some(out) = &common.out {
        cfg.output.directory = out.clone();
    }
    if let Some(f) = common.format {
        cfg.output.format = f;
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<commands::Outcome, CliError> {
    match cli.command {
        Command::Indent(common) => commands::indent(&load(&common)?),
        Command::Transfer {
            common,
            k_min,
            k_max,
            n_points,
            plot,
        } => {
            let mut cfg = load(&common)?;
            let mut t = cfg.transfer.unwrap_or(TransferSection {
                k_min: 0.0,
                k_max: f64::NAN,
                n_points: 101,
                plot: false,
            });
            t.k_min = k_min.unwrap_or(t.k_min);
            t.k_max = k_max.unwrap_or(t.k_max);
            t.n_points = n_points.unwrap_or(t.n_points);
            t.plot |= plot;
            if t.k_max.is_nan() {
                return Err(CliError::Config(
                    "transfer.k_max: missing (set [transfer] or --k-max)".into(),
                ));
            }
            cfg.transfer = Some(t);
            commands::transfer(&cfg)
        }
        Command::Converge {
            common,
            eps,
            hold_stiffness_ratio,
        } => {
            let mut cfg = load(&common)?;
            let mut section = cfg.converge.take().unwrap_or(ConvergeSection {
                eps: Vec::new(),
                hold_stiffness_ratio: None,
            });
            if let Some(eps) = eps {
                section.eps = eps;
            }
            if hold_stiffness_ratio.is_some() {
                section.hold_stiffness_ratio = hold_stiffness_ratio;
            }
            cfg.converge = Some(section);
            commands::converge(&cfg)
        }
        Command::Limits(common) => commands::limits(&load(&common)?),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(outcome) => {
            for line in &outcome.summary {
                println!("{line}");
            }
            for f in &outcome.files {
                println!("wrote {}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
