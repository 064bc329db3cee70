//! Command-line surface of `qdecay`: argument parsing, run configuration and
//! artifact rendering. The binary in `main.rs` only dispatches.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use qdecay_core::validate::ValidateOptions;

use commands::{Artifact, Panel};
use config::{Format, NoiseEntry, Overrides, RunConfig, StateSpec};
use error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "qdecay",
    version,
    about = "Entanglement decay of two qubits under amplitude and phase noise"
)]
pub struct Cli {
    /// JSON run configuration; flags override its values.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Write the artifact here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Reserved. Every computation is deterministic.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Concurrence against time (CSV `t,concurrence`).
    Trace(RunArgs),
    /// Classify the decay and locate the sudden-death time.
    Esd(RunArgs),
    /// Decay class over the (a, |z|) plane with b = c = (1 − a)/2, d = 0.
    Diagram {
        #[arg(long, value_enum)]
        panel: Panel,
        /// Lattice points per axis.
        #[arg(long, default_value_t = 64)]
        resolution: usize,
    },
    /// Single-qubit coherence under both noises: Kraus, integrator and closed form.
    Additivity {
        #[arg(long, default_value_t = 1.0)]
        gamma1: f64,
        #[arg(long, default_value_t = 1.0)]
        gamma2: f64,
        #[arg(long)]
        t_max: Option<f64>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        dt: Option<f64>,
    },
    /// Run the analytic-versus-numeric self check.
    Validate {
        #[arg(long, hide = true, default_value_t = 0.0)]
        perturb_amplitude_omega: f64,
        #[arg(long, hide = true)]
        drop_combined_normalization: bool,
    },
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Member of the λ family; repeat or comma-separate to sweep.
    #[arg(long, value_delimiter = ',', conflicts_with = "state")]
    pub lambda: Vec<f64>,

    /// X state as a,b,c,d,z_re[,z_im].
    #[arg(long, allow_hyphen_values = true)]
    pub state: Option<StateSpec>,

    /// Noise as TARGET:KIND:RATE, e.g. A:phase:1. Repeatable.
    #[arg(long = "noise", value_name = "SPEC")]
    pub noises: Vec<NoiseEntry>,

    /// Amplitude rate on both qubits.
    #[arg(long)]
    pub gamma1: Option<f64>,

    /// Phase rate on both qubits.
    #[arg(long)]
    pub gamma2: Option<f64>,

    #[arg(long)]
    pub t_max: Option<f64>,

    #[arg(long)]
    pub samples: Option<usize>,

    #[arg(long)]
    pub dt: Option<f64>,
}

impl RunArgs {
    fn noise_entries(&self) -> Result<Vec<NoiseEntry>, CliError> {
        let mut out = self.noises.clone();
        let mut push = |rate: Option<f64>, kind: &str| -> Result<(), CliError> {
            if let Some(r) = rate {
                for q in ["A", "B"] {
                    out.push(format!("{q}:{kind}:{r}").parse().map_err(CliError::config)?);
                }
            }
            Ok(())
        };
        push(self.gamma1, "amplitude")?;
        push(self.gamma2, "phase")?;
        Ok(out)
    }
}

impl Cli {
    fn base_config(&self) -> Result<RunConfig, CliError> {
        match &self.config {
            Some(path) => RunConfig::load(path),
            None => Ok(RunConfig::default()),
        }
    }

    /// Configuration after flags are applied.
    pub fn resolve(&self, run: Option<&RunArgs>) -> Result<RunConfig, CliError> {
        let mut cfg = self.base_config()?;
        let mut o = Overrides {
            output: self.output.clone(),
            format: self.format,
            ..Overrides::default()
        };
        if let Some(r) = run {
            o.state = r.state;
            o.lambda = r.lambda.clone();
            o.noises = r.noise_entries()?;
            o.t_max = r.t_max;
            o.samples = r.samples;
            o.dt = r.dt;
        }
        cfg.apply(o);
        cfg.check()?;
        Ok(cfg)
    }

    /// Runs the command and writes its artifact.
    pub fn run(&self) -> Result<(), CliError> {
        let (artifact, cfg) = match &self.command {
            Command::Trace(args) => {
                let cfg = self.resolve(Some(args))?;
                (commands::trace(&cfg)?, cfg)
            }
            Command::Esd(args) => {
                let cfg = self.resolve(Some(args))?;
                (commands::esd(&cfg)?, cfg)
            }
            Command::Diagram { panel, resolution } => {
                let cfg = self.resolve(None)?;
                (commands::diagram_panel(*panel, *resolution, cfg.format)?, cfg)
            }
            Command::Additivity {
                gamma1,
                gamma2,
                t_max,
                samples,
                dt,
            } => {
                let mut cfg = self.resolve(None)?;
                cfg.t_max = t_max.or(cfg.t_max);
                cfg.samples = samples.unwrap_or(cfg.samples);
                cfg.dt = dt.unwrap_or(cfg.dt);
                cfg.check()?;
                (commands::additivity(*gamma1, *gamma2, &cfg)?, cfg)
            }
            Command::Validate {
                perturb_amplitude_omega,
                drop_combined_normalization,
            } => {
                let cfg = self.resolve(None)?;
                let opts = ValidateOptions {
                    amplitude_omega_perturbation: *perturb_amplitude_omega,
                    drop_combined_normalization: *drop_combined_normalization,
                };
                (commands::validate(opts, cfg.format)?, cfg)
            }
        };
        let Artifact { content, failure } = artifact;
        output::emit(&content, cfg.output.as_deref())?;
        failure.map_or(Ok(()), Err)
    }
}
