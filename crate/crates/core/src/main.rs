use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use psk_nla::channel::{mutual_information, phase_vs_amplitude_ratio, Truncation};
use psk_nla::povm::PovmKind;
use psk_nla::sweep::{self, NoiseKind, Output, Parameters, SweepSpec, SweepVariable};
use psk_nla::{selftest, Error};

#[derive(Parser)]
#[command(
    name = "psk-nla",
    version,
    about = "Mutual information of PSK channels with NLA-amplified coherent seeds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one channel configuration.
    Mi {
        #[command(flatten)]
        channel: ChannelArgs,
    },
    /// Sweep one parameter and write CSV.
    Sweep {
        /// tau, nbar, gain, time, eta, m_symbols or t_corr
        #[arg(long)]
        variable: String,
        /// Explicit comma-separated grid.
        #[arg(long, conflicts_with = "range")]
        grid: Option<String>,
        /// start:stop:count[:linear|log]
        #[arg(long)]
        range: Option<String>,
        /// Comma-separated outputs: I_ID, I_Q, R_Q_ID, R_amp, R_Q_amp, C_amp, sigma
        #[arg(long, default_value = "I_ID,I_Q")]
        outputs: String,
        #[command(flatten)]
        channel: ChannelArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Reproduce the data behind a figure: fig1, fig2-left, fig2-right, fig3.
    Preset {
        name: String,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Run the built-in oracle checks.
    Selftest {
        /// Seed for the Monte-Carlo dephasing oracle.
        #[arg(long, default_value_t = 2024)]
        seed: u64,
    },
    /// Check a configuration and print it normalized.
    Validate {
        #[command(flatten)]
        channel: ChannelArgs,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Write CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct ChannelArgs {
    /// Mean photon number of the input coherent state.
    #[arg(long, default_value_t = 1.0)]
    nbar: f64,
    /// Nominal NLA gain (1 = no amplification).
    #[arg(long, default_value_t = 1.0)]
    gain: f64,
    /// Static dephasing parameter τ = Γt.
    #[arg(long, default_value_t = 0.0)]
    tau: f64,
    /// Interaction time for power-law noise.
    #[arg(long, default_value_t = 0.0)]
    time: f64,
    /// Phase diffusion rate Γ.
    #[arg(long, default_value_t = 1.0)]
    gamma_rate: f64,
    /// Environment correlation time t_E; selects power-law noise.
    #[arg(long, conflicts_with = "gamma_inv")]
    t_corr: Option<f64>,
    /// Inverse correlation time γ = 1/t_E; selects power-law noise.
    #[arg(long)]
    gamma_inv: Option<f64>,
    /// Power-law exponent a > 1.
    #[arg(long, default_value_t = 3.0)]
    exponent_a: f64,
    /// Environment central frequency ω.
    #[arg(long, default_value_t = 0.0)]
    omega: f64,
    #[arg(long, default_value_t = 20)]
    m_symbols: usize,
    /// canonical or husimi-q
    #[arg(long, default_value = "canonical")]
    povm: String,
    /// Amplitude-channel transmissivity η.
    #[arg(long, default_value_t = 1.0)]
    eta: f64,
    /// Fock truncation: auto or a positive integer.
    #[arg(long, default_value = "auto")]
    dim: String,
}

impl ChannelArgs {
    fn parameters(&self) -> Result<Parameters, Error> {
        let povm: PovmKind = self.povm.parse()?;
        let dim: Truncation = self.dim.parse()?;
        let (noise, gamma_inv_corr) = match (self.t_corr, self.gamma_inv) {
            (Some(tc), _) => (NoiseKind::PowerLaw, 1.0 / tc),
            (None, Some(g)) => (NoiseKind::PowerLaw, g),
            (None, None) => (NoiseKind::Static, 1.0),
        };
        let params = Parameters {
            nbar: self.nbar,
            gain: self.gain,
            noise,
            tau: self.tau,
            gamma_rate: self.gamma_rate,
            gamma_inv_corr,
            exponent_a: self.exponent_a,
            omega: self.omega,
            time: self.time,
            povm,
            m_symbols: self.m_symbols,
            eta: self.eta,
            dim,
        };
        params.validate()?;
        Ok(params)
    }
}

fn write_output(out: &Option<PathBuf>, text: &str) -> io::Result<()> {
    match out {
        Some(path) => fs::write(path, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn invalid(e: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Mi { channel } => {
            let params = match channel.parameters() {
                Ok(p) => p,
                Err(e) => return invalid(e),
            };
            let config = params.channel_config();
            let result = match mutual_information(&config) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::FAILURE;
                }
            };
            println!("# {params}");
            println!(
                "mutual_information_bits,{}",
                sweep::format_number(result.mutual_information_bits)
            );
            println!("sigma,{}", sweep::format_number(result.sigma_used));
            println!(
                "mean_photon_number,{}",
                sweep::format_number(result.mean_photon_number)
            );
            println!("tail_mass,{}", sweep::format_number(result.tail_mass));
            println!("dim,{}", result.dim);
            if params.nbar > 0.0 && params.eta > 0.0 {
                if let Ok(r) = phase_vs_amplitude_ratio(&config, params.eta) {
                    println!("ratio_to_amplitude_capacity,{}", sweep::format_number(r));
                }
            }
            for (s, q) in result.q.iter().enumerate() {
                println!("q{s},{}", sweep::format_number(*q));
            }
            ExitCode::SUCCESS
        }
        Command::Sweep {
            variable,
            grid,
            range,
            outputs,
            channel,
            run,
        } => {
            let spec = (|| -> Result<SweepSpec, Error> {
                let variable: SweepVariable = variable.parse()?;
                let grid = match (grid, range) {
                    (Some(g), _) => sweep::parse_list(&g)?,
                    (None, Some(r)) => sweep::parse_range(&r)?,
                    (None, None) => {
                        return Err(Error::InvalidConfig("give --grid or --range".into()))
                    }
                };
                let spec = SweepSpec {
                    label: format!("{}-sweep", variable.name()),
                    variable,
                    grid,
                    base: channel.parameters()?,
                    outputs: Output::parse_list(&outputs)?,
                };
                spec.validate()?;
                Ok(spec)
            })();
            let spec = match spec {
                Ok(s) => s,
                Err(e) => return invalid(e),
            };
            match sweep::run_sweep(&spec, run.threads) {
                Ok(csv) => match write_output(&run.out, &csv) {
                    Ok(()) => ExitCode::SUCCESS,
                    Err(e) => {
                        eprintln!("error: {e}");
                        ExitCode::FAILURE
                    }
                },
                Err(e) => invalid(e),
            }
        }
        Command::Preset { name, run } => match sweep::run_preset(&name, run.threads) {
            Ok(csv) => match write_output(&run.out, &csv) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::FAILURE
                }
            },
            Err(e) => invalid(e),
        },
        Command::Selftest { seed } => {
            let checks = selftest::run(seed);
            for c in &checks {
                println!(
                    "{:<4}  {:<48}  {}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.detail
                );
            }
            match checks.iter().find(|c| !c.passed) {
                None => ExitCode::SUCCESS,
                Some(c) => {
                    eprintln!("selftest failed: {}", c.name);
                    ExitCode::FAILURE
                }
            }
        }
        Command::Validate { channel } => match channel.parameters() {
            Ok(params) => {
                let config = params.channel_config();
                match config.resolve_dim() {
                    Ok(dim) => {
                        println!("{params}");
                        println!("resolved_dim={dim}");
                        ExitCode::SUCCESS
                    }
                    Err(e) => invalid(e),
                }
            }
            Err(e) => invalid(e),
        },
    }
}
