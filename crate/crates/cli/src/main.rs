mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{ConfigFile, Format, RunConfig};

/// Exact p-adic dynamics: Newton counts, disk preimages, expansion
/// certificates, conjugacies and symbolic coding.
#[derive(Parser, Debug)]
#[command(name = "padyn", version)]
struct Cli {
    /// Residue characteristic
    #[arg(long = "p", global = true)]
    p: Option<u64>,
    /// Relative precision N in p-adic digits (at least 8)
    #[arg(long, global = true)]
    precision: Option<u32>,
    /// Seed for sampled inputs
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,
    /// File of `key = value` lines used for any input not given as a flag
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct MapArgs {
    /// Polynomial in z, e.g. `z^2 - z - 7/36` or `(z^2 - z)/p`
    #[arg(long, allow_hyphen_values = true)]
    pub f: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct RegionArgs {
    /// `disks: [(c, p^q), ...]` or `sphere: p^q`
    #[arg(long, allow_hyphen_values = true)]
    pub region: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate f at a point
    Eval {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, allow_hyphen_values = true)]
        z: Option<String>,
    },
    /// Number of zeros of f in a closed disk
    NewtonCount {
        #[command(flatten)]
        map: MapArgs,
        /// `(center, p^q)`
        #[arg(long, allow_hyphen_values = true)]
        disk: Option<String>,
    },
    /// The zero of f in a disk holding exactly one
    RootInDisk {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, allow_hyphen_values = true)]
        disk: Option<String>,
    },
    /// The d preimage disks of a target disk
    Preimages {
        #[command(flatten)]
        map: MapArgs,
        #[command(flatten)]
        region: RegionArgs,
        /// `(center, p^q)` with radius at most mu
        #[arg(long, allow_hyphen_values = true)]
        target: Option<String>,
    },
    /// Build and report an expansion certificate
    Certify {
        #[command(flatten)]
        map: MapArgs,
        #[command(flatten)]
        region: RegionArgs,
    },
    /// Coefficient thresholds tau(i), optionally checking a perturbation g
    Tau {
        #[command(flatten)]
        map: MapArgs,
        #[command(flatten)]
        region: RegionArgs,
        #[arg(long, allow_hyphen_values = true)]
        g: Option<String>,
    },
    /// Evaluate the conjugacy h from f to g at a point, with its trace
    Conjugate {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, allow_hyphen_values = true)]
        g: Option<String>,
        #[command(flatten)]
        region: RegionArgs,
        #[arg(long, allow_hyphen_values = true)]
        z: Option<String>,
        /// Error target `p^q`
        #[arg(long, allow_hyphen_values = true)]
        target: Option<String>,
        /// `drift` (default) or `strict`
        #[arg(long, allow_hyphen_values = true)]
        route: Option<String>,
    },
    /// Conjugacy between z^d + c and z^d + c2 on |z| = |c|^{1/d}
    Thm23 {
        #[arg(long, allow_hyphen_values = true)]
        d: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        c: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        c2: Option<String>,
        /// Point to map; the repelling fixed point when omitted
        #[arg(long, allow_hyphen_values = true)]
        z: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        target: Option<String>,
    },
    /// Itinerary of z under F(z) = z(z - 1)/p
    Itinerary {
        #[arg(long, allow_hyphen_values = true)]
        z: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        depth: Option<String>,
    },
    /// The points whose itinerary starts with a word
    Decode {
        #[arg(long, allow_hyphen_values = true)]
        word: Option<String>,
    },
    /// Code a point of J(z^2 + c) as a binary word, with an equivariance check
    #[command(alias = "pipeline")]
    Cor42 {
        #[arg(long, allow_hyphen_values = true)]
        c: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        depth: Option<String>,
        /// Point of J(z^2 + c); by default one is built from --word
        #[arg(long, allow_hyphen_values = true)]
        z: Option<String>,
        /// Word to realise; random from --seed when omitted
        #[arg(long, allow_hyphen_values = true)]
        word: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err((err, _))
            if err
                .downcast_ref::<std::io::Error>()
                .is_some_and(|e| e.kind() == std::io::ErrorKind::BrokenPipe) =>
        {
            ExitCode::SUCCESS
        }
        Err((err, format)) => {
            let math = err
                .downcast_ref::<padyn::Error>()
                .is_some_and(padyn::Error::is_mathematical);
            if format == Format::Records {
                println!("{}", commands::failure_record(&err, math).to_json());
            }
            eprintln!("error: {err:#}");
            ExitCode::from(if math { 2 } else { 1 })
        }
    }
}

fn run(cli: Cli) -> Result<(), (anyhow::Error, Format)> {
    let file = match &cli.config {
        Some(path) => {
            ConfigFile::load(path).map_err(|e| (e, cli.format.unwrap_or(Format::Text)))?
        }
        None => ConfigFile::default(),
    };
    let rc = RunConfig::resolve(cli.p, cli.precision, cli.seed, cli.format, &file)
        .map_err(|e| (e, cli.format.unwrap_or(Format::Text)))?;
    let records = commands::dispatch(&cli.command, &rc, &file).map_err(|e| (e, rc.format))?;
    let stdout = std::io::stdout();
    report::emit(&mut stdout.lock(), rc.format, &records).map_err(|e| (e.into(), rc.format))
}
