use std::path::PathBuf;
use std::process::ExitCode;

use calogero_core::fock::{BasisKind, Coupling, Guards};
use calogero_core::scalar::Rat;
use calogero_core::singlemode::SeriesKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

mod error;
mod run;

use error::CliError;

/// Exact Gram matrices, spectra and operator expansions for the Calogero
/// model's S_M-extended Heisenberg algebra.
#[derive(Debug, Parser)]
#[command(name = "calogero", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write the result here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    /// Worker threads (default: available parallelism).
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    threads: Option<u16>,

    #[command(flatten)]
    guards: GuardArgs,
}

#[derive(Debug, Args)]
struct GuardArgs {
    /// Largest basis that may be enumerated.
    #[arg(long, global = true, default_value_t = Guards::default().max_basis)]
    max_basis: u128,

    #[arg(long, global = true, default_value_t = Guards::default().max_modes)]
    max_modes: usize,

    #[arg(long, global = true, default_value_t = Guards::default().max_degree)]
    max_degree: usize,
}

impl GuardArgs {
    fn guards(&self) -> Guards {
        Guards {
            max_modes: self.max_modes,
            max_degree: self.max_degree,
            max_basis: self.max_basis,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Gram matrix of n-particle states.
    Gram {
        #[arg(long)]
        modes: usize,
        #[arg(long)]
        particles: usize,
        /// `symbolic` or a rational `p/q`.
        #[arg(long, default_value = "symbolic")]
        nu: Coupling,
        #[arg(long, default_value = "sequence")]
        basis: BasisKind,
    },
    /// Numeric spectrum, exact rank and positivity at one coupling.
    Spectrum {
        #[arg(long)]
        modes: usize,
        #[arg(long)]
        particles: usize,
        #[arg(long)]
        nu: Rat,
        #[arg(long, default_value = "sequence")]
        basis: BasisKind,
    },
    /// Positivity over a grid of couplings.
    Scan {
        #[arg(long)]
        modes: usize,
        #[arg(long)]
        particles: usize,
        #[arg(long, allow_hyphen_values = true, default_value = "-3/5")]
        nu_min: Rat,
        #[arg(long, allow_hyphen_values = true, default_value = "1")]
        nu_max: Rat,
        #[arg(long, default_value = "1/64")]
        step: Rat,
        #[arg(long, default_value = "sequence")]
        basis: BasisKind,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Rank-one structure at nu = -1/M.
    Critical {
        #[arg(long)]
        modes: usize,
        #[arg(long, default_value_t = 3)]
        max_particles: usize,
    },
    /// Single-mode normal-ordered series coefficients.
    Single {
        #[arg(long)]
        which: SeriesKind,
        #[arg(long, default_value_t = 8)]
        terms: usize,
        #[arg(long, default_value = "symbolic")]
        nu: Coupling,
        /// Bits of precision for the Bose-mapping coefficients.
        #[arg(long, default_value_t = 128)]
        precision: usize,
    },
    /// Fit a normally ordered expansion of K_ij, N_ij, N or a_i a_j†.
    Fit {
        #[arg(long)]
        modes: usize,
        /// K12, N12, N1, N or A12 (1-based; separate two-digit labels with a comma).
        #[arg(long)]
        target: String,
        #[arg(long)]
        degree: usize,
        #[arg(long, default_value = "symbolic")]
        nu: Coupling,
    },
    /// Check operator identities on all monomials up to a degree.
    Verify {
        #[arg(long)]
        modes: usize,
        #[arg(long)]
        degree: usize,
        /// `all` or a comma-separated list of relation ids.
        #[arg(long, default_value = "all")]
        relations: String,
        #[arg(long, default_value = "symbolic")]
        nu: Coupling,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.into()).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run::dispatch(&cli.command, &cli.guards.guards()).and_then(|out| {
        run::emit(cli.output.as_deref(), &out.payload)?;
        Ok(out.passed)
    }) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(3),
        Err(CliError { code, message }) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}
