use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use etwist_cli::commands::{run, CliError};
use etwist_cli::config::parse_config;

/// Spin-orbit beam simulator: OAM conversion of spin-1/2 particles
/// crossing static electric field regions.
#[derive(Parser)]
#[command(name = "etwist", version, about, max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// OAM conversion vs depth for three bundled collimator profiles
    Figure1(CommonArgs),
    /// Spin-flip reflection probability vs grazing angle
    Figure2(CommonArgs),
    /// Twisted-packet amplitude and OAM bandwidth surfaces
    Figure3(CommonArgs),
    /// Real-space packet maps before and after raising the OAM index
    Figure4(CommonArgs),
    /// Voltage drop required for a full spin-orbit twist
    Voltage(VoltageArgs),
    /// Twist amplitude over a practical field-strength range
    Design(CommonArgs),
    /// Run another command over a grid of configuration values
    Sweep(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Configuration file (`key = value` lines, `#` comments)
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Override one configuration key (repeatable, applied in order)
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Output directory for tables and the provenance sidecar
    #[arg(long, value_name = "DIR", default_value = "out")]
    out: PathBuf,
    /// RNG seed; required by Monte Carlo profile sampling
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
    /// Also write a generic matplotlib script next to the CSV tables
    #[arg(long)]
    emit_plot_script: bool,
}

#[derive(Args)]
struct VoltageArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Tilt angle of the full twist, with unit suffix (e.g. 1deg, 0.02rad)
    #[arg(long, value_name = "ANGLE")]
    alpha: Option<String>,
}

fn execute(name: &str, common: &CommonArgs, extra_sets: Vec<String>) -> Result<(), CliError> {
    let text = match &common.config {
        Some(path) => std::fs::read_to_string(path).map_err(|e| {
            CliError::Config(format!("cannot read config file {}: {e}", path.display()))
        })?,
        None => String::new(),
    };
    let mut sets = common.set.clone();
    sets.extend(extra_sets);
    if let Some(seed) = common.seed {
        sets.push(format!("seed={seed}"));
    }
    let mut config = parse_config(name, &text, &sets).map_err(CliError::Config)?;
    config.out_dir = common.out.clone();
    config.emit_plot_script = common.emit_plot_script;
    let paths = run(&config)?;
    for path in paths {
        println!("{}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, common, extra_sets) = match &cli.command {
        Command::Figure1(c) => ("figure1", c, Vec::new()),
        Command::Figure2(c) => ("figure2", c, Vec::new()),
        Command::Figure3(c) => ("figure3", c, Vec::new()),
        Command::Figure4(c) => ("figure4", c, Vec::new()),
        Command::Voltage(v) => (
            "voltage",
            &v.common,
            v.alpha
                .as_ref()
                .map(|a| vec![format!("alpha={a}")])
                .unwrap_or_default(),
        ),
        Command::Design(c) => ("design", c, Vec::new()),
        Command::Sweep(c) => ("sweep", c, Vec::new()),
    };
    match execute(name, common, extra_sets) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
