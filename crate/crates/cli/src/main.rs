//! `hylie` — Fourier analysis of central functions on compact semisimple
//! Lie groups by maximal-torus reduction: Plancherel cross-checks,
//! Hausdorff–Young quotients and local-constant estimates, and lower-bound
//! growth certificates for mixed-norm Fourier-type constants.
//!
//! Exit codes: 0 success, 1 tolerance breach or I/O failure, 2 usage or
//! configuration error.

mod commands;
mod config;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use config::{parse_int_list, parse_real, Options};
use hylie_core::Error;

#[derive(Parser)]
#[command(
    name = "hylie",
    version,
    about = "Hausdorff-Young analysis on compact Lie groups via the maximal torus"
)]
struct Cli {
    /// Optional KEY=VALUE config file; command-line flags take precedence.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Cross-check the central Fourier transform against torus quadrature
    /// at q = 2 on random character polynomials
    Plancherel(CommonArgs),
    /// Estimate the local Hausdorff-Young constant from dilated profiles
    LocalConstant(CommonArgs),
    /// Emit lower-bound growth certificates (or --character growth data)
    Certificate(CommonArgs),
}

fn real_arg(s: &str) -> Result<f64, String> {
    parse_real(s).map_err(|e| e.to_string())
}

#[derive(Args)]
struct CommonArgs {
    /// Group label: A1, A2, B2, G2, ... or T1 (abelian circle), case-insensitive
    #[arg(long)]
    group: Option<String>,

    /// Exponent q in [1, 2]; accepts fractions such as 4/3
    #[arg(long, value_parser = real_arg)]
    q: Option<f64>,

    /// Exponent p with 1 <= p < q; accepts fractions
    #[arg(long, value_parser = real_arg)]
    p: Option<f64>,

    /// Torus grid size per axis (power of two, at least 16)
    #[arg(long)]
    grid: Option<usize>,

    /// Weight cutoff (base cutoff for dilation runs)
    #[arg(long, value_parser = real_arg)]
    cutoff: Option<f64>,

    /// Test profile: indicator, smooth, or gaussian
    #[arg(long)]
    profile: Option<String>,

    /// Profile radius in the sup norm, before Weyl symmetrization
    #[arg(long, value_parser = real_arg)]
    radius: Option<f64>,

    /// Comma-separated dilation factors, e.g. 1,2,4,8
    #[arg(long, value_name = "LIST")]
    k_list: Option<String>,

    /// Comma-separated system sizes, e.g. 1,2,4,8
    #[arg(long, value_name = "LIST")]
    n_list: Option<String>,

    /// Write the report to this path instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Report format: json or csv
    #[arg(long)]
    format: Option<String>,

    /// Certificate only: run the character-family experiment instead of
    /// the translated-profile certificate
    #[arg(long)]
    character: bool,

    /// Plancherel only: number of random trials
    #[arg(long)]
    trials: Option<usize>,

    /// Plancherel only: base RNG seed (trial t uses seed + t)
    #[arg(long)]
    seed: Option<u64>,

    /// Plancherel only: number of character terms per random polynomial
    #[arg(long)]
    terms: Option<usize>,

    /// Plancherel only: max fundamental-weight coordinate of sampled weights
    #[arg(long)]
    max_coord: Option<i64>,

    /// Plancherel only: pass/fail residual tolerance
    #[arg(long, value_parser = real_arg)]
    tolerance: Option<f64>,

    /// Local-constant only: frequency box half-width for the reference norm
    #[arg(long, value_parser = real_arg)]
    xi_max: Option<f64>,

    /// Local-constant only: frequency quadrature step
    #[arg(long, value_parser = real_arg)]
    xi_step: Option<f64>,

    /// Local-constant only: spatial quadrature points per axis
    #[arg(long)]
    euclid_n: Option<usize>,
}

impl CommonArgs {
    fn to_options(&self) -> hylie_core::Result<Options> {
        Ok(Options {
            group: self.group.clone(),
            q: self.q,
            p: self.p,
            grid: self.grid,
            cutoff: self.cutoff,
            profile: self.profile.clone(),
            radius: self.radius,
            k_list: self.k_list.as_deref().map(parse_int_list).transpose()?,
            n_list: self.n_list.as_deref().map(parse_int_list).transpose()?,
            out: self.out.clone(),
            format: self.format.as_deref().map(str::parse).transpose()?,
            character: self.character,
            trials: self.trials,
            seed: self.seed,
            terms: self.terms,
            max_coord: self.max_coord,
            tolerance: self.tolerance,
            xi_max: self.xi_max,
            xi_step: self.xi_step,
            euclid_n: self.euclid_n,
        })
    }
}

/// Maps library errors to exit codes: I/O and internal faults are runtime
/// failures (1); everything else is a usage or configuration problem (2).
fn classify(e: &Error) -> i32 {
    match e {
        Error::Io(_) | Error::Internal(_) => 1,
        _ => 2,
    }
}

fn run(cli: &Cli) -> hylie_core::Result<i32> {
    let args = match &cli.command {
        Cmd::Plancherel(a) | Cmd::LocalConstant(a) | Cmd::Certificate(a) => a,
    };
    let mut opts = args.to_options()?;
    if let Some(path) = &cli.config {
        let map = config::read_config_file(path)?;
        opts.fill_from(&map)?;
    }
    let output = match &cli.command {
        Cmd::Plancherel(_) => commands::cmd_plancherel(&opts)?,
        Cmd::LocalConstant(_) => commands::cmd_local_constant(&opts)?,
        Cmd::Certificate(_) => commands::cmd_certificate(&opts)?,
    };
    if let Some(note) = &output.note {
        eprintln!("{note}");
    }
    match &opts.out {
        Some(path) => std::fs::write(path, output.text.as_bytes())?,
        None => print!("{}", output.text),
    }
    Ok(output.exit)
}

fn main() {
    let cli = Cli::parse();
    let code = run(&cli).unwrap_or_else(|e| {
        eprintln!("error: {e}");
        classify(&e)
    });
    std::process::exit(code);
}
