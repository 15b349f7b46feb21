use clap::{Parser, Subcommand};
use corioband::config::{Overrides, RunConfig};
use corioband::error::CliError;
use std::path::PathBuf;
use std::process::ExitCode;

/// Band structures and Coriolis-Zeeman splittings of a rotating square
/// lattice of coupled microcavities.
#[derive(Debug, Parser)]
#[command(name = "corioband", version, about)]
struct Cli {
    /// Configuration file (TOML); defaults apply when absent.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory (overrides output.directory).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Plane-wave cutoff N (overrides pwe.cutoff).
    #[arg(long = "pwe-cutoff", global = true)]
    pwe_cutoff: Option<i32>,

    /// Number of bands (overrides pwe.bands).
    #[arg(long, global = true)]
    bands: Option<usize>,

    /// Output formats: csv or csv+svg.
    #[arg(long, global = true)]
    format: Option<String>,

    /// Seed for randomized validation oracles.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Vacuum wavelength (m).
    #[arg(long, global = true)]
    wavelength: Option<f64>,

    /// Refractive index.
    #[arg(long = "refractive-index", global = true)]
    refractive_index: Option<f64>,

    /// Lattice pitch (m).
    #[arg(long, global = true)]
    pitch: Option<f64>,

    /// Pixel fill factor.
    #[arg(long = "fill-factor", global = true)]
    fill_factor: Option<f64>,

    /// Mirror phase contrast (rad).
    #[arg(long = "delta-phi", global = true)]
    delta_phi: Option<f64>,

    /// Rotation rate about z (rad/s).
    #[arg(long, global = true)]
    omega: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Plane-wave band structure along the configured BZ path.
    Bands {
        /// Also emit the 8 k·p bands near the zone corner.
        #[arg(long)]
        kp: bool,
    },
    /// Coriolis-Zeeman splittings over the rotation sweep.
    Splitting,
    /// Relative splitting and modal size versus contrast, per pitch.
    Sweep,
    /// Longitudinal profile of one lattice period.
    Eta {
        /// Phase step per reflection; defaults to the Γ ground-state value.
        #[arg(long)]
        alpha: Option<f64>,
        /// Number of z samples over the period.
        #[arg(long = "z-samples", default_value_t = 512)]
        z_samples: usize,
    },
    /// C4v classification of the band clusters at the zone corner.
    Classify,
    /// Run the invariant suite; exits nonzero on any failure.
    Validate {
        /// Test hook: break Hermiticity by this amount (negative control).
        #[arg(long = "inject-nonhermitian", hide = true)]
        inject_nonhermitian: Option<f64>,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let overrides = Overrides {
        out: cli.out,
        pwe_cutoff: cli.pwe_cutoff,
        bands: cli.bands,
        format: cli.format,
        seed: cli.seed,
        wavelength: cli.wavelength,
        refractive_index: cli.refractive_index,
        pitch: cli.pitch,
        fill_factor: cli.fill_factor,
        delta_phi: cli.delta_phi,
        omega: cli.omega,
    };
    let config = RunConfig::load(cli.config.as_deref(), &overrides)?;
    match cli.command {
        Command::Bands { kp } => {
            corioband::cmd_bands(&config, kp)?;
        }
        Command::Splitting => {
            corioband::cmd_splitting(&config)?;
        }
        Command::Sweep => {
            corioband::cmd_sweep(&config)?;
        }
        Command::Eta { alpha, z_samples } => {
            corioband::cmd_eta(&config, alpha, z_samples)?;
        }
        Command::Classify => {
            corioband::cmd_classify(&config)?;
        }
        Command::Validate { inject_nonhermitian } => {
            let outcome = corioband::cmd_validate(&config, inject_nonhermitian)?;
            print!("{}", outcome.report);
            if !outcome.all_passed() {
                return Err(CliError::ValidationFailed {
                    failed: outcome.failed_count(),
                    total: outcome.checks.len(),
                });
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
        Err(e) => {
            // --help / --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
