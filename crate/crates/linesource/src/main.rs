//! Experiment runner CLI.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use linesource::experiments::{
    run_experiment, ExperimentConfig, ExperimentError, Preset,
};

#[derive(Parser, Debug)]
#[command(
    name = "linesource",
    about = "Mixed finite element convergence studies for line-source Darcy flow",
    long_about = None
)]
struct Cli {
    /// Experiment preset.
    #[arg(long, value_parser = parse_preset, default_value = "exp2_removal_3d")]
    preset: Preset,

    /// Mesh subdivisions per axis, one solve per level (default: the
    /// preset's standard levels).
    #[arg(long, value_delimiter = ',')]
    levels: Option<Vec<usize>>,

    /// Weight exponents for the error norms (standard-method preset only).
    #[arg(long, value_delimiter = ',')]
    alpha: Option<Vec<f64>>,

    /// Constant permeability.
    #[arg(long, default_value_t = 1.0)]
    kappa: f64,

    /// Segment network CSV (required for the custom preset, optional
    /// override for the network preset).
    #[arg(long)]
    network: Option<PathBuf>,

    /// Output directory for CSV tables and VTK fields.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

fn parse_preset(s: &str) -> Result<Preset, String> {
    match s {
        "exp1_standard_2d" => Ok(Preset::Exp1Standard2d),
        "exp2_removal_3d" => Ok(Preset::Exp2Removal3d),
        "network_removal_3d" => Ok(Preset::NetworkRemoval3d),
        "custom" => Ok(Preset::Custom),
        other => Err(format!(
            "unknown preset `{other}` (expected exp1_standard_2d, exp2_removal_3d, \
             network_removal_3d or custom)"
        )),
    }
}

/// Stable exit codes per error category.
fn exit_code(err: &ExperimentError) -> u8 {
    match err {
        ExperimentError::Config(_) => 2,
        ExperimentError::Network(_) => 3,
        ExperimentError::Mesh(_) => 4,
        ExperimentError::Greens(_) | ExperimentError::Consistency(_) => 5,
        ExperimentError::Solver(_) => 6,
        ExperimentError::Vtk(_) | ExperimentError::Io(_) => 7,
        ExperimentError::AtLevel { source, .. } => exit_code(source),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = ExperimentConfig {
        preset: cli.preset,
        levels: cli.levels.unwrap_or_else(|| cli.preset.default_levels()),
        alphas: cli.alpha.unwrap_or_else(|| cli.preset.default_alphas()),
        kappa: cli.kappa,
        network_path: cli.network,
        out_dir: cli.out,
    };

    match run_experiment(&config) {
        Ok(output) => {
            for (label, table) in &output.tables {
                println!("== {} [{}] ==", config.preset.name(), label);
                print!("{}", table.to_csv());
            }
            for level in &output.levels {
                println!(
                    "level n={:<4} h={:.4e}  cells={:<8} residual={:.2e}  conservation gap={:.2e}",
                    level.n, level.h, level.cells, level.relative_residual, level.conservation_gap
                );
            }
            println!("wrote {} files to {}", output.files.len(), config.out_dir.display());
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            let mut source = std::error::Error::source(&err);
            while let Some(inner) = source {
                eprintln!("  caused by: {inner}");
                source = inner.source();
            }
            ExitCode::from(exit_code(&err))
        }
    }
}
