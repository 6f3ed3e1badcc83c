//! `af`: run Active Flux simulations, convergence studies and stability scans.

mod commands;
mod manifest;
mod settings;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::CliError;
use settings::RawSettings;

#[derive(Parser)]
#[command(name = "af", version, about = "Active Flux solver for 2D linear acoustics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one simulation and write snapshot CSVs.
    Run(Options),
    /// Errors and convergence orders over a list of resolutions.
    Converge(Options),
    /// Largest stable CFL number over a sweep of delta and nu.
    Stability(Options),
    /// Dump the eigenvalues of the one-step matrix at one CFL number.
    Eigs(Options),
}

/// Every option may also be given in the `--config` file under the same name.
#[derive(Args, Debug, Default)]
struct Options {
    /// `key = value` file; flags given on the command line override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Base name of the output files.
    #[arg(long)]
    name: Option<String>,
    /// example1 | example2 | example3 | example4
    #[arg(long)]
    problem: Option<String>,
    /// af | cweno
    #[arg(long)]
    recon: Option<String>,
    /// eg2 | eg2quad | eg2delta | eg2deltanu | hat-eg2delta | hat-eg2deltanu
    #[arg(long)]
    op: Option<String>,
    #[arg(long)]
    delta: Option<String>,
    #[arg(long)]
    nu: Option<String>,
    /// Circle points of the hatted operators.
    #[arg(long)]
    nquad: Option<String>,
    /// Sound speed.
    #[arg(long)]
    c: Option<String>,
    /// full-step | increment: time step that sizes the auxiliary circles.
    #[arg(long = "aux-radius")]
    aux_radius: Option<String>,
    /// linear | nonlinear CWENO weights.
    #[arg(long)]
    weights: Option<String>,
    /// CWENO regularization (nonlinear weights only).
    #[arg(long)]
    epsilon: Option<String>,
    #[arg(long)]
    cfl: Option<String>,
    #[arg(long)]
    nx: Option<String>,
    #[arg(long)]
    ny: Option<String>,
    #[arg(long)]
    tend: Option<String>,
    #[arg(long = "out-dir")]
    out_dir: Option<String>,
    /// Number of evenly spaced snapshots.
    #[arg(long)]
    snapshots: Option<String>,
    /// Cells per direction of the periodic stability grid.
    #[arg(long)]
    m: Option<String>,
    /// Comma-separated grid sizes for `converge`.
    #[arg(long)]
    resolutions: Option<String>,
    /// Comma-separated delta values for `stability`.
    #[arg(long)]
    deltas: Option<String>,
    /// Comma-separated nu values for `stability`.
    #[arg(long)]
    nus: Option<String>,
    /// CFL numbers at which `stability` also reports the spectral radius.
    #[arg(long)]
    cfls: Option<String>,
    #[arg(long = "cfl-lo")]
    cfl_lo: Option<String>,
    #[arg(long = "cfl-hi")]
    cfl_hi: Option<String>,
    /// Bisection width.
    #[arg(long)]
    tol: Option<String>,
    /// dense | fourier
    #[arg(long)]
    method: Option<String>,
}

impl Options {
    fn into_raw(self) -> Result<RawSettings, CliError> {
        let mut raw = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| CliError::ConfigFile(path.clone(), e))?;
                RawSettings::from_file_text(&text)?
            }
            None => RawSettings::default(),
        };
        let flags = [
            ("name", self.name),
            ("problem", self.problem),
            ("recon", self.recon),
            ("op", self.op),
            ("delta", self.delta),
            ("nu", self.nu),
            ("nquad", self.nquad),
            ("c", self.c),
            ("aux-radius", self.aux_radius),
            ("weights", self.weights),
            ("epsilon", self.epsilon),
            ("cfl", self.cfl),
            ("nx", self.nx),
            ("ny", self.ny),
            ("tend", self.tend),
            ("out-dir", self.out_dir),
            ("snapshots", self.snapshots),
            ("m", self.m),
            ("resolutions", self.resolutions),
            ("deltas", self.deltas),
            ("nus", self.nus),
            ("cfls", self.cfls),
            ("cfl-lo", self.cfl_lo),
            ("cfl-hi", self.cfl_hi),
            ("tol", self.tol),
            ("method", self.method),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                raw.set_flag(key, v);
            }
        }
        Ok(raw)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, opts) = match cli.command {
        Command::Run(o) => ("run", o),
        Command::Converge(o) => ("converge", o),
        Command::Stability(o) => ("stability", o),
        Command::Eigs(o) => ("eigs", o),
    };
    let result = opts.into_raw().and_then(|raw| commands::execute(name, &raw));
    match result {
        Ok(path) => {
            println!("manifest: {}", path.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
