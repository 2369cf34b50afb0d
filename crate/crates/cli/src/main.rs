use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use typicality_lab::config::{Angle, Experiment, PartialChain, PartialConfig};
use typicality_lab::{run, CliError, OutputFormat};

/// Hilbert-space-average transition-probability experiments on the kicked
/// Ising chain: analytic curves next to seeded Monte Carlo, as CSV or JSON.
#[derive(Parser)]
#[command(name = "typicality-lab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Transition-probability scan over θ with a fixed reference state.
    FixedOverlapScan(CommonArgs),
    /// Scan with both states resampled every trial.
    FullAverageScan(CommonArgs),
    /// Histogram of transition probabilities at fixed overlap angle.
    Histogram(CommonArgs),
    /// Fixed reference state, deformed ψ-ensemble (requires --m-z).
    NonuniformFixedScan(CommonArgs),
    /// Both states deformed and resampled (requires --m-z, --m-z-prime).
    NonuniformFullScan(CommonArgs),
    /// Spectral form factor K(T) for T = 0..t-max.
    FormFactor(CommonArgs),
    /// Solve the statistical operator for a preset magnetization.
    RhoSolve(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// JSON config file; explicit flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Number of spins on the ring.
    #[arg(long)]
    n: Option<usize>,
    /// Ising coupling J (number or π-literal like "pi/4").
    #[arg(long = "J", value_name = "ANGLE", allow_hyphen_values = true)]
    coupling: Option<String>,
    /// Longitudinal field h.
    #[arg(long = "h", value_name = "ANGLE", allow_hyphen_values = true)]
    field: Option<String>,
    /// Transverse kick field b.
    #[arg(long = "b", value_name = "ANGLE", allow_hyphen_values = true)]
    kick: Option<String>,
    /// Number of θ grid points on [0, π/2].
    #[arg(long = "z-grid")]
    z_grid: Option<usize>,
    /// Monte Carlo samples per grid point.
    #[arg(long)]
    samples: Option<usize>,
    /// Experiment seed; fixed seed means bit-identical output.
    #[arg(long)]
    seed: Option<u64>,
    /// Output file path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Preset magnetization for the ψ-side deformation.
    #[arg(long = "m-z", allow_hyphen_values = true)]
    m_z: Option<f64>,
    /// Preset magnetization for the χ-side deformation.
    #[arg(long = "m-z-prime", allow_hyphen_values = true)]
    m_z_prime: Option<f64>,
    /// Worker threads (default: available parallelism). Results are
    /// identical for any value.
    #[arg(long)]
    workers: Option<usize>,
    /// Output format.
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// Largest T for form-factor.
    #[arg(long = "t-max")]
    t_max: Option<usize>,
    /// Histogram bin count.
    #[arg(long)]
    bins: Option<usize>,
    /// Overlap angle θ for the histogram (|z| = cos θ).
    #[arg(long, value_name = "ANGLE", allow_hyphen_values = true)]
    theta: Option<String>,
}

fn parse_angle_flag(text: Option<String>) -> Result<Option<Angle>, CliError> {
    match text {
        None => Ok(None),
        Some(t) => typicality_core::kicked_ising::parse_angle(&t)
            .map(|v| Some(Angle(v)))
            .map_err(|e| CliError::Config(e.to_string())),
    }
}

fn to_partial(args: &CommonArgs, experiment: Experiment) -> Result<PartialConfig, CliError> {
    let flags = PartialConfig {
        experiment: Some(experiment),
        chain: Some(PartialChain {
            n: args.n,
            coupling: parse_angle_flag(args.coupling.clone())?,
            h: parse_angle_flag(args.field.clone())?,
            b: parse_angle_flag(args.kick.clone())?,
        }),
        m_z: args.m_z,
        m_z_prime: args.m_z_prime,
        theta_grid: args.z_grid,
        samples: args.samples,
        seed: args.seed,
        output: args.out.clone(),
        format: args.format,
        workers: args.workers,
        t_max: args.t_max,
        bins: args.bins,
        theta: parse_angle_flag(args.theta.clone())?,
    };
    Ok(match &args.config {
        Some(path) => flags.over(PartialConfig::from_file(path)?),
        None => flags,
    })
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    let (experiment, args) = match &cli.command {
        Command::FixedOverlapScan(a) => (Experiment::FixedOverlapScan, a),
        Command::FullAverageScan(a) => (Experiment::FullAverageScan, a),
        Command::Histogram(a) => (Experiment::Histogram, a),
        Command::NonuniformFixedScan(a) => (Experiment::NonuniformFixedScan, a),
        Command::NonuniformFullScan(a) => (Experiment::NonuniformFullScan, a),
        Command::FormFactor(a) => (Experiment::FormFactor, a),
        Command::RhoSolve(a) => (Experiment::RhoSolve, a),
    };
    let config = to_partial(args, experiment)?.resolve()?;
    let metadata = run(&config)?;
    eprintln!(
        "{}: wrote {} (+ sidecar) in {:.2}s",
        config.experiment,
        config.output.display(),
        metadata.wall_time_seconds
    );
    Ok(())
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Keep clap's rendered help/usage, but exit 1 on usage errors
            // per the tool's error contract (2 is reserved for numerics).
            let is_help = matches!(
                err.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = err.print();
            std::process::exit(if is_help { 0 } else { 1 });
        }
    };
    if let Err(err) = dispatch(cli) {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}
