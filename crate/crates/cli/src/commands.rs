//! Command execution: turn a validated [`RunConfig`] into CSV tables on
//! disk, with a provenance sidecar per run and cleanup of partial outputs
//! on failure.

use std::fmt;
use std::fs;
use std::path::PathBuf;

use etwist_core::beams::{divergence_profile, divergence_profile_monte_carlo, DivergenceProfile};
use etwist_core::oam::oam_vs_depth;
use etwist_core::scattering::reflection_probability;
use etwist_core::transverse::{fig3_surfaces, synthesize_real_space, SpectralPacket};
use etwist_core::beams::GaussianPacketSpec;
use etwist_core::C64;

use crate::config::{
    key_unit, linspace, logspace, CommandConfig, DesignConfig, Figure1Config, Figure2Config,
    Figure3Config, Figure4Config, ProfileMethod, RunConfig, SweepConfig, VoltageConfig,
};
use crate::table::{Column, ResultTable};

/// Failure modes of a run, each with its own process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Invalid invocation or configuration (exit 2).
    Config(String),
    /// A numeric routine rejected or failed on the configured inputs
    /// (exit 3).
    Numeric(String),
    /// Filesystem trouble while writing outputs (exit 4).
    Io(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "configuration error: {msg}"),
            CliError::Numeric(msg) => write!(f, "numeric error: {msg}"),
            CliError::Io(msg) => write!(f, "io error: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl From<etwist_core::Error> for CliError {
    fn from(e: etwist_core::Error) -> Self {
        CliError::Numeric(e.to_string())
    }
}

/// Execute the configured command. Returns the paths of every file
/// written; on any failure, files written so far are removed first.
pub fn run(config: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(&config.out_dir).map_err(|e| {
        CliError::Io(format!(
            "creating output directory {}: {e}",
            config.out_dir.display()
        ))
    })?;
    if let CommandConfig::Sweep(sweep) = &config.command {
        return run_sweep(config, sweep);
    }

    // Compute every table before touching the filesystem, so numeric
    // failures leave no partial outputs behind.
    let tables = compute_tables(config)?;
    let mut writer = OutputSet::new(config.out_dir.clone());
    let hash = config.config_hash();
    let mut table_names = Vec::new();
    for (file_name, table) in &tables {
        let csv = table.to_csv(&config.command_name, hash);
        writer.write(file_name, &csv)?;
        table_names.push(file_name.clone());
    }
    finalize_run(config, writer, table_names)
}

/// Shared tail of every run: optional plot script, then the provenance
/// sidecar listing all outputs.
fn finalize_run(
    config: &RunConfig,
    mut writer: OutputSet,
    data_files: Vec<String>,
) -> Result<Vec<PathBuf>, CliError> {
    if config.emit_plot_script {
        let script = plot_script(&config.command_name, &data_files);
        writer.write(&format!("plot_{}.py", config.command_name), &script)?;
    }
    let mut listed: Vec<String> = writer
        .created
        .iter()
        .map(|p| {
            p.file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_default()
        })
        .collect();
    listed.sort();
    let sidecar = provenance(config, &listed);
    writer.write(&format!("{}.provenance.txt", config.command_name), &sidecar)?;
    Ok(writer.into_created())
}

fn compute_tables(config: &RunConfig) -> Result<Vec<(String, ResultTable)>, CliError> {
    match &config.command {
        CommandConfig::Figure1(f) => figure1_tables(config, f),
        CommandConfig::Figure2(f) => figure2_tables(config, f),
        CommandConfig::Figure3(f) => figure3_tables(f),
        CommandConfig::Figure4(f) => figure4_tables(f),
        CommandConfig::Voltage(v) => voltage_tables(config, v),
        CommandConfig::Design(d) => design_tables(config, d),
        CommandConfig::Sweep(_) => unreachable!("sweep handled by run()"),
    }
}

/// Files written so far, so a failed run can remove its partial outputs.
struct OutputSet {
    dir: PathBuf,
    created: Vec<PathBuf>,
}

impl OutputSet {
    fn new(dir: PathBuf) -> Self {
        OutputSet {
            dir,
            created: Vec::new(),
        }
    }

    fn write(&mut self, name: &str, content: &str) -> Result<PathBuf, CliError> {
        let path = self.dir.join(name);
        match fs::write(&path, content) {
            Ok(()) => {
                self.created.push(path.clone());
                Ok(path)
            }
            Err(e) => {
                let msg = format!("writing {}: {e}", path.display());
                self.discard();
                Err(CliError::Io(msg))
            }
        }
    }

    fn discard(&self) {
        for path in &self.created {
            let _ = fs::remove_file(path);
        }
    }

    fn into_created(self) -> Vec<PathBuf> {
        self.created
    }
}

fn push_rows(table: &mut ResultTable, rows: Vec<Vec<f64>>) -> Result<(), CliError> {
    for row in rows {
        table.push(row).map_err(CliError::Numeric)?;
    }
    Ok(())
}

fn figure1_tables(
    config: &RunConfig,
    f: &Figure1Config,
) -> Result<Vec<(String, ResultTable)>, CliError> {
    let z_grid = linspace(0.0, f.z_max, f.z_steps);
    let profiles = [
        ("two_pinholes", &f.two_pinholes),
        ("exit_pinhole", &f.exit_pinhole),
        ("annulus", &f.annulus),
    ];
    let mut out = Vec::with_capacity(profiles.len());
    for (index, (name, geometry)) in profiles.iter().enumerate() {
        let profile: DivergenceProfile = match f.method {
            ProfileMethod::Analytic { resolution } => divergence_profile(geometry, resolution)?,
            ProfileMethod::MonteCarlo { rays, bins } => {
                let seed = config
                    .seed
                    .expect("config validation requires a seed for monte_carlo");
                // Decorrelate the three profiles while keeping the whole
                // run reproducible from the single configured seed.
                divergence_profile_monte_carlo(geometry, bins, rays, seed.wrapping_add(index as u64))?
            }
        };
        let scan = oam_vs_depth(&profile, f.coupling, f.k_z, &z_grid)?;
        let mut table = ResultTable::new(
            name,
            vec![
                Column::new("z", "m"),
                Column::new("a1", "1"),
                Column::new("a0", "1"),
            ],
        );
        let rows = scan
            .z
            .iter()
            .zip(scan.converted.iter().zip(scan.retained.iter()))
            .map(|(&z, (&a1, &a0))| vec![z, a1, a0])
            .collect();
        push_rows(&mut table, rows)?;
        out.push((format!("figure1_{name}.csv"), table));
    }
    Ok(out)
}

fn figure2_tables(
    config: &RunConfig,
    f: &Figure2Config,
) -> Result<Vec<(String, ResultTable)>, CliError> {
    let thetas = if f.theta_log {
        logspace(f.theta_min, f.theta_max, f.theta_steps)
    } else {
        linspace(f.theta_min, f.theta_max, f.theta_steps)
    };
    let mut table = ResultTable::new(
        "figure2",
        vec![
            Column::new("theta", "deg"),
            Column::new("p_flip", "1"),
            Column::new("p_nonflip", "1"),
        ],
    );
    for theta in thetas {
        let (flip, nonflip) =
            reflection_probability(&config.physics, theta, f.lambda, f.field, f.spin)?;
        table
            .push(vec![theta.to_degrees(), flip, nonflip])
            .map_err(CliError::Numeric)?;
    }
    Ok(vec![("figure2.csv".to_string(), table)])
}

fn figure3_tables(f: &Figure3Config) -> Result<Vec<(String, ResultTable)>, CliError> {
    let sigma_y: Vec<f64> = linspace(f.sigma_y_sq_min, f.sigma_y_sq_max, f.sigma_y_sq_steps)
        .into_iter()
        .map(f64::sqrt)
        .collect();
    let symmetry = linspace(f.symmetry_min, f.symmetry_max, f.symmetry_steps);
    let surfaces = fig3_surfaces(&sigma_y, &symmetry, f.k_y_mean, f.model)?;
    let mut table = ResultTable::new(
        "figure3",
        vec![
            Column::new("sigma_y", "1/m"),
            Column::new("symmetry", "1"),
            Column::new("amplitude", "1"),
            Column::new("log10_sigma_ell", "1"),
        ],
    );
    for (i, &s) in surfaces.sigma_y.iter().enumerate() {
        for (j, &r) in surfaces.symmetry.iter().enumerate() {
            table
                .push(vec![s, r, surfaces.amplitude[i][j], surfaces.log_bandwidth[i][j]])
                .map_err(CliError::Numeric)?;
        }
    }
    Ok(vec![("figure3.csv".to_string(), table)])
}

fn figure4_tables(f: &Figure4Config) -> Result<Vec<(String, ResultTable)>, CliError> {
    let spec = GaussianPacketSpec::new(f.k_y_mean, f.sigma_y_sq.sqrt(), f.symmetry)?;
    let packet = SpectralPacket::gaussian_auto(&spec, C64::new(0.0, 0.0), C64::new(1.0, 0.0))?;
    let x = linspace(f.x_min, f.x_max, f.x_steps);
    let y = linspace(f.y_min, f.y_max, f.y_steps);
    let mut out = Vec::with_capacity(2);
    for (raised, name) in [(false, "figure4_unraised.csv"), (true, "figure4_raised.csv")] {
        let field = synthesize_real_space(&packet, raised, &x, &y)?;
        let mut table = ResultTable::new(
            if raised { "raised" } else { "unraised" },
            vec![
                Column::new("x", "m"),
                Column::new("y", "m"),
                Column::new("re_psi", "1"),
            ],
        );
        for (i, &xi) in x.iter().enumerate() {
            for (j, &yj) in y.iter().enumerate() {
                table
                    .push(vec![xi, yj, field.minus[i][j].re])
                    .map_err(CliError::Numeric)?;
            }
        }
        out.push((name.to_string(), table));
    }
    Ok(out)
}

fn voltage_tables(
    config: &RunConfig,
    v: &VoltageConfig,
) -> Result<Vec<(String, ResultTable)>, CliError> {
    let voltage = config.physics.full_twist_voltage(v.alpha)?;
    let mut table = ResultTable::new(
        "voltage",
        vec![Column::new("alpha", "rad"), Column::new("voltage", "V")],
    );
    table.push(vec![v.alpha, voltage]).map_err(CliError::Numeric)?;
    Ok(vec![("voltage.csv".to_string(), table)])
}

fn design_tables(
    config: &RunConfig,
    d: &DesignConfig,
) -> Result<Vec<(String, ResultTable)>, CliError> {
    let fields = if d.field_log {
        logspace(d.field_min, d.field_max, d.field_steps)
    } else {
        linspace(d.field_min, d.field_max, d.field_steps)
    };
    let mut table = ResultTable::new(
        "design",
        vec![
            Column::new("field", "V/m"),
            Column::new("length", "m"),
            Column::new("amplitude", "1"),
        ],
    );
    for field in fields {
        let amplitude = config.physics.twister_amplitude(field, d.length)?;
        table
            .push(vec![field, d.length, amplitude])
            .map_err(CliError::Numeric)?;
    }
    Ok(vec![("design.csv".to_string(), table)])
}

/// Run every sweep point concurrently in its own subdirectory, then write
/// the plan table. Any point failure removes everything this sweep wrote.
fn run_sweep(config: &RunConfig, sweep: &SweepConfig) -> Result<Vec<PathBuf>, CliError> {
    let mut point_configs = Vec::with_capacity(sweep.points.len());
    for (i, point) in sweep.points.iter().enumerate() {
        let mut cfg = point.config.clone();
        cfg.out_dir = config.out_dir.join(format!("point_{i:03}"));
        cfg.emit_plot_script = config.emit_plot_script;
        point_configs.push(cfg);
    }

    let results: Vec<Result<Vec<PathBuf>, CliError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = point_configs
            .iter()
            .map(|cfg| scope.spawn(move || run(cfg)))
            .collect();
        handles
            .into_iter()
            .map(|h| {
                h.join()
                    .unwrap_or_else(|_| Err(CliError::Numeric("sweep worker panicked".into())))
            })
            .collect()
    });

    let mut created: Vec<PathBuf> = Vec::new();
    let mut failure: Option<CliError> = None;
    for result in results {
        match result {
            Ok(paths) => created.extend(paths),
            Err(e) if failure.is_none() => failure = Some(e),
            Err(_) => {}
        }
    }
    if let Some(e) = failure {
        for path in &created {
            let _ = fs::remove_file(path);
        }
        return Err(e);
    }

    let mut columns = vec![Column::new("point", "1")];
    for key in &sweep.vary_keys {
        columns.push(Column::new(key, key_unit(key)));
    }
    let mut plan = ResultTable::new("sweep", columns);
    for (i, point) in sweep.points.iter().enumerate() {
        let mut row = vec![i as f64];
        row.extend_from_slice(&point.values);
        plan.push(row).map_err(CliError::Numeric)?;
    }
    let mut writer = OutputSet::new(config.out_dir.clone());
    writer.created = created;
    let csv = plan.to_csv("sweep", config.config_hash());
    writer.write("sweep.csv", &csv)?;
    finalize_run(config, writer, vec!["sweep.csv".to_string()])
}

/// Provenance sidecar: what ran, with which resolved configuration, when,
/// and what it produced. The timestamp lives only here, never in the CSVs,
/// so data files stay byte-identical across reruns.
fn provenance(config: &RunConfig, outputs: &[String]) -> String {
    let mut out = String::new();
    out.push_str(&format!("tool: etwist {}\n", env!("CARGO_PKG_VERSION")));
    out.push_str(&format!("command: {}\n", config.command_name));
    out.push_str(&format!("config-hash: fnv1a64:{:016x}\n", config.config_hash()));
    out.push_str(&format!(
        "timestamp: {}\n",
        chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
    ));
    match config.seed {
        Some(seed) => out.push_str(&format!("seed: {seed}\n")),
        None => out.push_str("seed: none\n"),
    }
    out.push_str("config:\n");
    for (key, value) in &config.resolved {
        out.push_str(&format!("  {key} = {value}\n"));
    }
    out.push_str("outputs:\n");
    for name in outputs {
        out.push_str(&format!("  {name}\n"));
    }
    out
}

/// Generic matplotlib companion: reads each CSV (skipping `#` metadata)
/// and plots every column against the first.
fn plot_script(command: &str, data_files: &[String]) -> String {
    let file_list = data_files
        .iter()
        .map(|f| format!("    \"{f}\","))
        .collect::<Vec<_>>()
        .join("\n");
    format!(
        r##"#!/usr/bin/env python3
"""Plot the CSV tables produced by `etwist {command}`."""
import numpy as np
import matplotlib.pyplot as plt

FILES = [
{file_list}
]

fig, ax = plt.subplots()
for name in FILES:
    # Every table starts with a fixed five-line `#` metadata preamble,
    # then one header row of column names.
    data = np.genfromtxt(name, delimiter=",", names=True, skip_header=5)
    cols = data.dtype.names
    x = data[cols[0]]
    for col in cols[1:]:
        ax.plot(x, data[col], label=f"{{name}}: {{col}}")
    ax.set_xlabel(cols[0])
ax.legend()
fig.tight_layout()
plt.show()
"##
    )
}
