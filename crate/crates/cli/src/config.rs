//! Configuration parsing: a flat `key = value` text format with dotted
//! section keys, per-command schemas with defaults, and sweep expansion.
//!
//! Every accepted key is recorded with its final (default-filled) value in
//! a canonical resolved listing; that listing is what gets hashed into the
//! CSV preamble and written to the provenance sidecar, so two runs with the
//! same effective configuration stamp their outputs identically.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;
use std::path::PathBuf;

use etwist_core::beams::{CollimatorGeometry, CollimatorKind};
use etwist_core::scattering::Spin;
use etwist_core::transverse::TwistModel;
use etwist_core::units::{PhysicsContext, NEUTRON_GYROMAGNETIC_RATIO, SPEED_OF_LIGHT};

use crate::table::{fnv1a64, format_e12};

pub const COMMANDS: [&str; 7] = [
    "figure1", "figure2", "figure3", "figure4", "voltage", "design", "sweep",
];

/// Fully validated run plan for one command invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command_name: String,
    pub command: CommandConfig,
    pub physics: PhysicsContext,
    pub seed: Option<u64>,
    pub out_dir: PathBuf,
    pub emit_plot_script: bool,
    /// Sorted `key = value` listing with all defaults filled in.
    pub resolved: Vec<(String, String)>,
}

impl RunConfig {
    /// Canonical text form of the resolved configuration.
    pub fn resolved_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.resolved {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(v);
            out.push('\n');
        }
        out
    }

    /// Stable hash of the resolved configuration, stamped into outputs.
    pub fn config_hash(&self) -> u64 {
        fnv1a64(self.resolved_text().as_bytes())
    }
}

#[derive(Debug, Clone)]
pub enum CommandConfig {
    Figure1(Figure1Config),
    Figure2(Figure2Config),
    Figure3(Figure3Config),
    Figure4(Figure4Config),
    Voltage(VoltageConfig),
    Design(DesignConfig),
    Sweep(SweepConfig),
}

/// How the collimator divergence profile is computed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProfileMethod {
    Analytic { resolution: usize },
    MonteCarlo { rays: u64, bins: usize },
}

/// OAM conversion vs depth for the three bundled collimator profiles.
#[derive(Debug, Clone)]
pub struct Figure1Config {
    pub k_z: f64,
    pub coupling: f64,
    pub z_max: f64,
    pub z_steps: usize,
    pub method: ProfileMethod,
    pub two_pinholes: CollimatorGeometry,
    pub exit_pinhole: CollimatorGeometry,
    pub annulus: CollimatorGeometry,
}

/// Spin-flip reflection probability vs grazing angle.
#[derive(Debug, Clone)]
pub struct Figure2Config {
    pub lambda: f64,
    pub field: f64,
    /// Radians.
    pub theta_min: f64,
    /// Radians.
    pub theta_max: f64,
    pub theta_steps: usize,
    pub theta_log: bool,
    pub spin: Spin,
}

/// Twisted-packet quality surfaces over packet width and symmetry.
#[derive(Debug, Clone)]
pub struct Figure3Config {
    pub k_y_mean: f64,
    /// Values are sigma_y squared; sqrt is taken before the scan.
    pub sigma_y_sq_min: f64,
    pub sigma_y_sq_max: f64,
    pub sigma_y_sq_steps: usize,
    pub symmetry_min: f64,
    pub symmetry_max: f64,
    pub symmetry_steps: usize,
    pub model: TwistModel,
}

/// Real-space field maps of a packet before and after raising.
#[derive(Debug, Clone)]
pub struct Figure4Config {
    pub k_y_mean: f64,
    pub sigma_y_sq: f64,
    pub symmetry: f64,
    pub x_min: f64,
    pub x_max: f64,
    pub x_steps: usize,
    pub y_min: f64,
    pub y_max: f64,
    pub y_steps: usize,
}

#[derive(Debug, Clone)]
pub struct VoltageConfig {
    /// Radians.
    pub alpha: f64,
}

#[derive(Debug, Clone)]
pub struct DesignConfig {
    pub field_min: f64,
    pub field_max: f64,
    pub field_steps: usize,
    pub field_log: bool,
    pub length: f64,
}

/// One expanded sweep point: the varied values and the fully parsed run.
#[derive(Debug, Clone)]
pub struct SweepPoint {
    /// Numeric values aligned with `SweepConfig::vary_keys` (angles in
    /// radians).
    pub values: Vec<f64>,
    pub config: RunConfig,
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub command: String,
    pub vary_keys: Vec<String>,
    pub points: Vec<SweepPoint>,
}

/// Evenly spaced values over `[min, max]`; a single step collapses to
/// `[min]`.
pub fn linspace(min: f64, max: f64, steps: usize) -> Vec<f64> {
    if steps <= 1 {
        return vec![min];
    }
    let h = (max - min) / (steps - 1) as f64;
    (0..steps).map(|i| min + h * i as f64).collect()
}

/// Logarithmically spaced values over `[min, max]`; both bounds must be
/// positive.
pub fn logspace(min: f64, max: f64, steps: usize) -> Vec<f64> {
    linspace(min.ln(), max.ln(), steps)
        .into_iter()
        .map(f64::exp)
        .collect()
}

/// Parse the flat configuration text: one `key = value` per line, `#`
/// comments, blank lines ignored, later entries override earlier ones.
fn parse_raw(text: &str) -> Result<BTreeMap<String, String>, String> {
    let mut map = BTreeMap::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            format!("config line {}: expected `key = value`, got `{line}`", idx + 1)
        })?;
        let key = key.trim();
        let value = value.trim();
        if key.is_empty() {
            return Err(format!("config line {}: empty key", idx + 1));
        }
        map.insert(key.to_string(), value.to_string());
    }
    Ok(map)
}

/// Parse one `--set key=value` override.
fn parse_set(raw: &str) -> Result<(String, String), String> {
    let (key, value) = raw
        .split_once('=')
        .ok_or_else(|| format!("malformed --set `{raw}`: expected key=value"))?;
    let key = key.trim();
    if key.is_empty() {
        return Err(format!("malformed --set `{raw}`: empty key"));
    }
    Ok((key.to_string(), value.trim().to_string()))
}

/// Angle literal: a number with a mandatory `deg` or `rad` suffix.
/// Returns radians.
fn parse_angle(key: &str, raw: &str) -> Result<f64, String> {
    let s = raw.trim();
    let (number, to_rad): (&str, fn(f64) -> f64) = if let Some(v) = s.strip_suffix("deg") {
        (v, f64::to_radians)
    } else if let Some(v) = s.strip_suffix("rad") {
        (v, |x| x)
    } else {
        return Err(format!(
            "key `{key}`: angle `{raw}` needs an explicit deg or rad suffix"
        ));
    };
    let value: f64 = number.trim().parse().map_err(|_| {
        format!("key `{key}`: cannot parse `{raw}` as an angle")
    })?;
    if !value.is_finite() {
        return Err(format!("key `{key}`: angle must be finite, got `{raw}`"));
    }
    Ok(to_rad(value))
}

/// Typed reader over the raw key-value map. Records every key it touches
/// so leftovers can be rejected, and every final value for the resolved
/// listing.
struct Reader {
    command: String,
    map: BTreeMap<String, String>,
    used: BTreeSet<String>,
    resolved: BTreeMap<String, String>,
}

impl Reader {
    fn new(command: &str, map: BTreeMap<String, String>) -> Self {
        let mut resolved = BTreeMap::new();
        resolved.insert("command".to_string(), command.to_string());
        Reader {
            command: command.to_string(),
            map,
            used: BTreeSet::new(),
            resolved,
        }
    }

    fn take(&mut self, key: &str) -> Option<String> {
        self.used.insert(key.to_string());
        self.map.get(key).cloned()
    }

    fn f64(&mut self, key: &str, default: f64) -> Result<f64, String> {
        let value = match self.take(key) {
            Some(raw) => raw
                .parse::<f64>()
                .map_err(|_| format!("key `{key}`: cannot parse `{raw}` as a number"))?,
            None => default,
        };
        if !value.is_finite() {
            return Err(format!("key `{key}`: value must be finite"));
        }
        self.resolved.insert(key.to_string(), format_e12(value));
        Ok(value)
    }

    fn positive(&mut self, key: &str, default: f64) -> Result<f64, String> {
        let value = self.f64(key, default)?;
        if value <= 0.0 {
            return Err(format!("key `{key}`: value must be > 0, got {value}"));
        }
        Ok(value)
    }

    fn usize(&mut self, key: &str, default: usize, min: usize) -> Result<usize, String> {
        let value = match self.take(key) {
            Some(raw) => raw
                .parse::<usize>()
                .map_err(|_| format!("key `{key}`: cannot parse `{raw}` as an integer"))?,
            None => default,
        };
        if value < min {
            return Err(format!("key `{key}`: must be at least {min}, got {value}"));
        }
        self.resolved.insert(key.to_string(), value.to_string());
        Ok(value)
    }

    fn u64(&mut self, key: &str, default: u64, min: u64) -> Result<u64, String> {
        let value = match self.take(key) {
            Some(raw) => raw
                .parse::<u64>()
                .map_err(|_| format!("key `{key}`: cannot parse `{raw}` as an integer"))?,
            None => default,
        };
        if value < min {
            return Err(format!("key `{key}`: must be at least {min}, got {value}"));
        }
        self.resolved.insert(key.to_string(), value.to_string());
        Ok(value)
    }

    /// Angle in radians. `default` of `None` makes the key required.
    fn angle(&mut self, key: &str, default: Option<f64>) -> Result<f64, String> {
        let value = match self.take(key) {
            Some(raw) => parse_angle(key, &raw)?,
            None => default.ok_or_else(|| {
                format!(
                    "missing required key `{key}` for command {}",
                    self.command
                )
            })?,
        };
        self.resolved
            .insert(key.to_string(), format!("{}rad", format_e12(value)));
        Ok(value)
    }

    fn choice(&mut self, key: &str, default: &str, options: &[&str]) -> Result<String, String> {
        let value = match self.take(key) {
            Some(raw) => raw,
            None => default.to_string(),
        };
        if !options.contains(&value.as_str()) {
            return Err(format!(
                "key `{key}`: expected one of {}, got `{value}`",
                options.join("|")
            ));
        }
        self.resolved.insert(key.to_string(), value.clone());
        Ok(value)
    }

    fn seed(&mut self) -> Result<Option<u64>, String> {
        match self.take("seed") {
            Some(raw) => {
                let value = raw
                    .parse::<u64>()
                    .map_err(|_| format!("key `seed`: cannot parse `{raw}` as an integer"))?;
                self.resolved.insert("seed".to_string(), value.to_string());
                Ok(Some(value))
            }
            None => Ok(None),
        }
    }

    /// `physics.gamma` / `physics.c` overrides, defaulting to the neutron.
    fn physics(&mut self) -> Result<PhysicsContext, String> {
        let gamma = self.f64("physics.gamma", NEUTRON_GYROMAGNETIC_RATIO)?;
        let c = self.f64("physics.c", SPEED_OF_LIGHT)?;
        if gamma == NEUTRON_GYROMAGNETIC_RATIO && c == SPEED_OF_LIGHT {
            Ok(PhysicsContext::neutron())
        } else {
            PhysicsContext::custom(gamma, c)
                .map_err(|e| format!("keys `physics.gamma`/`physics.c`: {e}"))
        }
    }

    /// Reject every key that was present but never consumed, then hand
    /// back the sorted resolved listing.
    fn finish(self) -> Result<Vec<(String, String)>, String> {
        let unknown: Vec<&String> = self
            .map
            .keys()
            .filter(|k| !self.used.contains(*k))
            .collect();
        if !unknown.is_empty() {
            let names = unknown
                .iter()
                .map(|k| format!("`{k}`"))
                .collect::<Vec<_>>()
                .join(", ");
            return Err(format!(
                "unknown configuration key {names} for command {}",
                self.command
            ));
        }
        Ok(self.resolved.into_iter().collect())
    }
}

/// Parse and validate a command's configuration from the config file text
/// plus `--set key=value` overrides (applied in order, last one wins).
pub fn parse_config(command: &str, text: &str, sets: &[String]) -> Result<RunConfig, String> {
    if !COMMANDS.contains(&command) {
        return Err(format!(
            "unknown command `{command}`; expected one of {}",
            COMMANDS.join("|")
        ));
    }
    let mut map = parse_raw(text)?;
    for raw in sets {
        let (key, value) = parse_set(raw)?;
        map.insert(key, value);
    }
    parse_from_map(command, map)
}

fn parse_from_map(command: &str, map: BTreeMap<String, String>) -> Result<RunConfig, String> {
    if command == "sweep" {
        return parse_sweep(map);
    }
    let mut r = Reader::new(command, map);
    let physics = r.physics()?;
    let seed = r.seed()?;
    let parsed = match command {
        "figure1" => CommandConfig::Figure1(parse_figure1(&mut r, seed)?),
        "figure2" => CommandConfig::Figure2(parse_figure2(&mut r)?),
        "figure3" => CommandConfig::Figure3(parse_figure3(&mut r)?),
        "figure4" => CommandConfig::Figure4(parse_figure4(&mut r)?),
        "voltage" => CommandConfig::Voltage(VoltageConfig {
            alpha: r.angle("alpha", None)?,
        }),
        "design" => CommandConfig::Design(parse_design(&mut r)?),
        _ => unreachable!("command validated by caller"),
    };
    let resolved = r.finish()?;
    Ok(RunConfig {
        command_name: command.to_string(),
        command: parsed,
        physics,
        seed,
        out_dir: PathBuf::from("out"),
        emit_plot_script: false,
        resolved,
    })
}

fn parse_figure1(r: &mut Reader, seed: Option<u64>) -> Result<Figure1Config, String> {
    let k_z = r.positive("k_z", 1.0)?;
    let coupling = r.f64("coupling", 0.1)?;
    let z_max = r.positive("z.max", 1500.0)?;
    let z_steps = r.usize("z.steps", 301, 2)?;
    let method = match r.choice("profile.method", "analytic", &["analytic", "monte_carlo"])? {
        m if m == "analytic" => ProfileMethod::Analytic {
            resolution: r.usize("profile.resolution", 128, 8)?,
        },
        _ => {
            let rays = r.u64("profile.rays", 1_000_000, 1_000)?;
            let bins = r.usize("profile.bins", 64, 8)?;
            if seed.is_none() {
                return Err(
                    "missing required key `seed` for command figure1: \
                     profile.method = monte_carlo draws random rays"
                        .to_string(),
                );
            }
            ProfileMethod::MonteCarlo { rays, bins }
        }
    };
    let collimator = |name: &str,
                      kind: CollimatorKind,
                      separation: f64|
     -> Result<CollimatorGeometry, String> {
        CollimatorGeometry::new(kind, separation, k_z)
            .map_err(|e| format!("figure1 collimator `{name}`: {e}"))
    };
    let two_pinholes = {
        let radius = r.positive("two_pinholes.radius", 0.15)?;
        let separation = r.positive("two_pinholes.separation", 1.0)?;
        collimator(
            "two_pinholes",
            CollimatorKind::TwoPinholes { radius },
            separation,
        )?
    };
    let exit_pinhole = {
        let exit_radius = r.positive("exit_pinhole.exit_radius", 0.25)?;
        let pinhole_radius = r.positive("exit_pinhole.pinhole_radius", 0.05)?;
        let separation = r.positive("exit_pinhole.separation", 1.0)?;
        collimator(
            "exit_pinhole",
            CollimatorKind::ExitAndPinhole {
                exit_radius,
                pinhole_radius,
            },
            separation,
        )?
    };
    let annulus = {
        let inner_radius = r.positive("annulus.inner_radius", 0.20)?;
        let outer_radius = r.positive("annulus.outer_radius", 0.26)?;
        let pinhole_radius = r.positive("annulus.pinhole_radius", 0.02)?;
        let separation = r.positive("annulus.separation", 1.0)?;
        collimator(
            "annulus",
            CollimatorKind::AnnulusAndPinhole {
                inner_radius,
                outer_radius,
                pinhole_radius,
            },
            separation,
        )?
    };
    Ok(Figure1Config {
        k_z,
        coupling,
        z_max,
        z_steps,
        method,
        two_pinholes,
        exit_pinhole,
        annulus,
    })
}

fn parse_figure2(r: &mut Reader) -> Result<Figure2Config, String> {
    let lambda = r.positive("lambda", 2e-10)?;
    let field = r.positive("field", 1e10)?;
    let theta_min = r.angle("theta.min", Some(1e-5_f64.to_radians()))?;
    let theta_max = r.angle("theta.max", Some(0.1_f64.to_radians()))?;
    let theta_steps = r.usize("theta.steps", 400, 2)?;
    let theta_log = r.choice("theta.spacing", "log", &["log", "linear"])? == "log";
    // parse_angle already guarantees finite values.
    if theta_min <= 0.0 {
        return Err(format!(
            "key `theta.min`: grazing angle must be > 0, got {theta_min} rad"
        ));
    }
    if theta_max <= theta_min {
        return Err(format!(
            "key `theta.max`: must exceed theta.min, got {theta_max} rad <= {theta_min} rad"
        ));
    }
    let spin = match r.choice("spin", "down", &["down", "up"])?.as_str() {
        "up" => Spin::Up,
        _ => Spin::Down,
    };
    Ok(Figure2Config {
        lambda,
        field,
        theta_min,
        theta_max,
        theta_steps,
        theta_log,
        spin,
    })
}

fn parse_figure3(r: &mut Reader) -> Result<Figure3Config, String> {
    // The default grid keeps sigma_x = R * sigma_y below k_y_mean: once
    // the packet's transverse spectral width reaches the carrier, the
    // angular spread saturates and the bandwidth trend flattens out.
    let k_y_mean = r.positive("k_y_mean", 1.0)?;
    let sigma_y_sq_min = r.positive("sigma_y_sq.min", 0.05)?;
    let sigma_y_sq_max = r.positive("sigma_y_sq.max", 0.25)?;
    let sigma_y_sq_steps = r.usize("sigma_y_sq.steps", 10, 1)?;
    if sigma_y_sq_max < sigma_y_sq_min {
        return Err(format!(
            "key `sigma_y_sq.max`: must be >= sigma_y_sq.min, got {sigma_y_sq_max} < {sigma_y_sq_min}"
        ));
    }
    let symmetry_min = r.positive("symmetry.min", 0.5)?;
    let symmetry_max = r.positive("symmetry.max", 1.5)?;
    let symmetry_steps = r.usize("symmetry.steps", 9, 1)?;
    if symmetry_max < symmetry_min {
        return Err(format!(
            "key `symmetry.max`: must be >= symmetry.min, got {symmetry_max} < {symmetry_min}"
        ));
    }
    let model = match r.choice("model", "ideal", &["ideal", "exact"])?.as_str() {
        "ideal" => {
            // Consume the exact.* keys only when the exact model is chosen;
            // otherwise they are unknown for this run.
            TwistModel::IdealRaise
        }
        _ => {
            let coupling = r.positive("exact.coupling", 0.2)?;
            let default_time = PI / (2.0 * coupling * k_y_mean);
            let time = r.positive("exact.time", default_time)?;
            TwistModel::ExactEvolution { coupling, time }
        }
    };
    Ok(Figure3Config {
        k_y_mean,
        sigma_y_sq_min,
        sigma_y_sq_max,
        sigma_y_sq_steps,
        symmetry_min,
        symmetry_max,
        symmetry_steps,
        model,
    })
}

fn parse_figure4(r: &mut Reader) -> Result<Figure4Config, String> {
    let k_y_mean = r.positive("k_y_mean", 1.0)?;
    let sigma_y_sq = r.positive("sigma_y_sq", 0.1)?;
    let symmetry = r.positive("symmetry", 1.0)?;
    let x_min = r.f64("x.min", -10.0)?;
    let x_max = r.f64("x.max", 10.0)?;
    let x_steps = r.usize("x.steps", 81, 2)?;
    let y_min = r.f64("y.min", -10.0)?;
    let y_max = r.f64("y.max", 10.0)?;
    let y_steps = r.usize("y.steps", 81, 2)?;
    if x_max <= x_min {
        return Err(format!(
            "key `x.max`: must exceed x.min, got {x_max} <= {x_min}"
        ));
    }
    if y_max <= y_min {
        return Err(format!(
            "key `y.max`: must exceed y.min, got {y_max} <= {y_min}"
        ));
    }
    Ok(Figure4Config {
        k_y_mean,
        sigma_y_sq,
        symmetry,
        x_min,
        x_max,
        x_steps,
        y_min,
        y_max,
        y_steps,
    })
}

fn parse_design(r: &mut Reader) -> Result<DesignConfig, String> {
    let field_min = r.positive("field.min", 1e7)?;
    let field_max = r.positive("field.max", 1e8)?;
    let field_steps = r.usize("field.steps", 7, 1)?;
    if field_max < field_min {
        return Err(format!(
            "key `field.max`: must be >= field.min, got {field_max} < {field_min}"
        ));
    }
    let field_log = r.choice("field.spacing", "log", &["log", "linear"])? == "log";
    let length = r.positive("length", 1.0)?;
    Ok(DesignConfig {
        field_min,
        field_max,
        field_steps,
        field_log,
        length,
    })
}

/// Keys whose values are angle literals, per base command; sweeps over
/// these accept `deg`/`rad`-suffixed values.
fn is_angle_key(command: &str, key: &str) -> bool {
    matches!(
        (command, key),
        ("voltage", "alpha") | ("figure2", "theta.min") | ("figure2", "theta.max")
    )
}

fn parse_sweep(map: BTreeMap<String, String>) -> Result<RunConfig, String> {
    let mut base: BTreeMap<String, String> = BTreeMap::new();
    let mut vary: Vec<(String, Vec<String>)> = Vec::new();
    let mut command: Option<String> = None;
    for (key, value) in &map {
        if key == "sweep.command" {
            command = Some(value.clone());
        } else if let Some(point_key) = key.strip_prefix("sweep.vary.") {
            let values: Vec<String> = value
                .split(',')
                .map(|v| v.trim().to_string())
                .filter(|v| !v.is_empty())
                .collect();
            if values.is_empty() {
                return Err(format!("key `{key}`: empty value list"));
            }
            vary.push((point_key.to_string(), values));
        } else if key.starts_with("sweep.") {
            return Err(format!(
                "unknown configuration key `{key}` for command sweep"
            ));
        } else {
            base.insert(key.clone(), value.clone());
        }
    }
    let command = command
        .ok_or_else(|| "missing required key `sweep.command` for command sweep".to_string())?;
    if !COMMANDS.contains(&command.as_str()) || command == "sweep" {
        return Err(format!(
            "key `sweep.command`: expected one of figure1|figure2|figure3|figure4|voltage|design, got `{command}`"
        ));
    }
    if vary.is_empty() {
        return Err(
            "missing required key `sweep.vary.<key>` for command sweep: nothing to vary"
                .to_string(),
        );
    }

    // Numeric value of each varied entry, for the plan table.
    let mut numeric: Vec<Vec<f64>> = Vec::with_capacity(vary.len());
    for (key, values) in &vary {
        let mut nums = Vec::with_capacity(values.len());
        for v in values {
            let n = if is_angle_key(&command, key) {
                parse_angle(key, v)?
            } else {
                v.parse::<f64>().map_err(|_| {
                    format!("key `sweep.vary.{key}`: cannot parse `{v}` as a number")
                })?
            };
            nums.push(n);
        }
        numeric.push(nums);
    }

    // Cartesian expansion, last key fastest.
    let mut points: Vec<SweepPoint> = Vec::new();
    let total: usize = vary.iter().map(|(_, v)| v.len()).product();
    for flat in 0..total {
        let mut idx = flat;
        let mut choice = vec![0usize; vary.len()];
        for axis in (0..vary.len()).rev() {
            let n = vary[axis].1.len();
            choice[axis] = idx % n;
            idx /= n;
        }
        let mut point_map = base.clone();
        let mut values = Vec::with_capacity(vary.len());
        for (axis, (key, raw_values)) in vary.iter().enumerate() {
            point_map.insert(key.clone(), raw_values[choice[axis]].clone());
            values.push(numeric[axis][choice[axis]]);
        }
        let config = parse_from_map(&command, point_map)?;
        points.push(SweepPoint { values, config });
    }

    // The sweep's own resolved listing records the raw entries verbatim;
    // every point additionally carries its fully resolved configuration.
    let mut resolved: Vec<(String, String)> =
        vec![("command".to_string(), "sweep".to_string())];
    resolved.extend(map.iter().map(|(k, v)| (k.clone(), v.clone())));
    resolved.sort();

    let seed = points.first().and_then(|p| p.config.seed);
    Ok(RunConfig {
        command_name: "sweep".to_string(),
        command: CommandConfig::Sweep(SweepConfig {
            command,
            vary_keys: vary.into_iter().map(|(k, _)| k).collect(),
            points,
        }),
        physics: PhysicsContext::neutron(),
        seed,
        out_dir: PathBuf::from("out"),
        emit_plot_script: false,
        resolved,
    })
}

/// Unit tag for a configuration key, used in sweep plan tables.
pub fn key_unit(key: &str) -> &'static str {
    match key {
        "field" | "field.min" | "field.max" => "V/m",
        "length" | "lambda" | "z.max" | "separation" => "m",
        "alpha" | "theta.min" | "theta.max" => "rad",
        "k_z" | "k_y_mean" | "coupling" => "1/m",
        "sigma_y_sq" | "sigma_y_sq.min" | "sigma_y_sq.max" => "1/m^2",
        _ => "1",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(command: &str, text: &str) -> Result<RunConfig, String> {
        parse_config(command, text, &[])
    }

    #[test]
    fn minimal_figure1_fills_documented_defaults() {
        let cfg = parse("figure1", "").unwrap();
        let CommandConfig::Figure1(f) = &cfg.command else {
            panic!("wrong variant");
        };
        assert_eq!(f.k_z, 1.0);
        assert_eq!(f.coupling, 0.1);
        assert_eq!(f.z_max, 1500.0);
        assert_eq!(f.z_steps, 301);
        assert_eq!(f.method, ProfileMethod::Analytic { resolution: 128 });
        let listing = cfg.resolved_text();
        assert!(listing.contains("k_z = 1.000000000000e+00"));
        assert!(listing.contains("coupling = 1.000000000000e-01"));
    }

    #[test]
    fn unknown_keys_are_rejected_by_name() {
        let err = parse("figure1", "k_zz = 2\n").unwrap_err();
        assert!(err.contains("`k_zz`"), "{err}");
        assert!(err.contains("figure1"), "{err}");
    }

    #[test]
    fn voltage_without_alpha_names_the_missing_key() {
        let err = parse("voltage", "").unwrap_err();
        assert!(err.contains("`alpha`"), "{err}");
        let cfg = parse("voltage", "alpha = 1deg").unwrap();
        let CommandConfig::Voltage(v) = &cfg.command else {
            panic!("wrong variant");
        };
        assert!((v.alpha - 1.0_f64.to_radians()).abs() < 1e-15);
    }

    #[test]
    fn angles_demand_an_explicit_unit_suffix() {
        let err = parse("voltage", "alpha = 0.5").unwrap_err();
        assert!(err.contains("deg or rad"), "{err}");
        let cfg = parse("voltage", "alpha = 0.5rad").unwrap();
        let CommandConfig::Voltage(v) = &cfg.command else {
            panic!("wrong variant");
        };
        assert_eq!(v.alpha, 0.5);
    }

    #[test]
    fn sets_override_file_entries_in_order() {
        let sets = vec!["coupling=0.2".to_string(), "coupling=0.3".to_string()];
        let cfg = parse_config("figure1", "coupling = 0.15\n", &sets).unwrap();
        let CommandConfig::Figure1(f) = &cfg.command else {
            panic!("wrong variant");
        };
        assert_eq!(f.coupling, 0.3);
    }

    #[test]
    fn comments_and_blank_lines_are_ignored_and_last_entry_wins() {
        let text = "# a comment\n\nk_z = 2.0\nk_z = 3.0\n";
        let cfg = parse("figure1", text).unwrap();
        let CommandConfig::Figure1(f) = &cfg.command else {
            panic!("wrong variant");
        };
        assert_eq!(f.k_z, 3.0);
    }

    #[test]
    fn malformed_lines_report_their_line_number() {
        let err = parse("figure1", "k_z = 1\nnot a key value line\n").unwrap_err();
        assert!(err.contains("line 2"), "{err}");
    }

    #[test]
    fn monte_carlo_profile_requires_a_seed() {
        let err = parse("figure1", "profile.method = monte_carlo\n").unwrap_err();
        assert!(err.contains("`seed`"), "{err}");
        let cfg = parse("figure1", "profile.method = monte_carlo\nseed = 7\n").unwrap();
        assert_eq!(cfg.seed, Some(7));
        let CommandConfig::Figure1(f) = &cfg.command else {
            panic!("wrong variant");
        };
        assert_eq!(
            f.method,
            ProfileMethod::MonteCarlo {
                rays: 1_000_000,
                bins: 64
            }
        );
    }

    #[test]
    fn sweep_over_two_fields_expands_to_a_two_row_plan() {
        let text = "sweep.command = design\nsweep.vary.field.min = 1e7, 2e7\n\
                    sweep.vary.field.max = 3e7, 4e7\n";
        // Varying min and max together would give 4 points; a plain
        // one-axis sweep is the documented example.
        let cfg = parse(
            "sweep",
            "sweep.command = design\nsweep.vary.field.min = 1e7, 1e8\nfield.steps = 1\n",
        )
        .unwrap();
        let CommandConfig::Sweep(s) = &cfg.command else {
            panic!("wrong variant");
        };
        assert_eq!(s.command, "design");
        assert_eq!(s.vary_keys, vec!["field.min".to_string()]);
        assert_eq!(s.points.len(), 2);
        assert_eq!(s.points[0].values, vec![1e7]);
        assert_eq!(s.points[1].values, vec![1e8]);
        let CommandConfig::Design(d) = &s.points[1].config.command else {
            panic!("wrong point variant");
        };
        assert_eq!(d.field_min, 1e8);
        // The longer two-axis document expands to the full product.
        let cfg = parse("sweep", text).unwrap();
        let CommandConfig::Sweep(s) = &cfg.command else {
            panic!("wrong variant");
        };
        assert_eq!(s.points.len(), 4);
    }

    #[test]
    fn sweep_validates_base_and_vary_keys() {
        let err = parse("sweep", "sweep.vary.length = 1,2\n").unwrap_err();
        assert!(err.contains("`sweep.command`"), "{err}");
        let err = parse(
            "sweep",
            "sweep.command = design\nsweep.vary.length = 1,2\nbogus = 3\n",
        )
        .unwrap_err();
        assert!(err.contains("`bogus`"), "{err}");
        let err = parse(
            "sweep",
            "sweep.command = voltage\nsweep.vary.alpha = 1deg, 2deg\nsweep.extra = 1\n",
        )
        .unwrap_err();
        assert!(err.contains("`sweep.extra`"), "{err}");
    }

    #[test]
    fn sweep_angle_values_parse_with_suffixes() {
        let cfg = parse(
            "sweep",
            "sweep.command = voltage\nsweep.vary.alpha = 1deg, 0.5rad\n",
        )
        .unwrap();
        let CommandConfig::Sweep(s) = &cfg.command else {
            panic!("wrong variant");
        };
        assert!((s.points[0].values[0] - 1.0_f64.to_radians()).abs() < 1e-15);
        assert_eq!(s.points[1].values[0], 0.5);
    }

    #[test]
    fn physics_overrides_build_a_custom_context() {
        let cfg = parse("voltage", "alpha = 1deg\nphysics.c = 3e8\n").unwrap();
        assert_eq!(cfg.physics.speed_of_light(), 3e8);
        let err = parse("voltage", "alpha = 1deg\nphysics.c = -1\n").unwrap_err();
        assert!(err.contains("physics.c"), "{err}");
    }

    #[test]
    fn resolved_listing_is_sorted_and_hash_is_stable() {
        let a = parse("figure2", "").unwrap();
        let b = parse_config("figure2", "lambda = 2e-10\n", &[]).unwrap();
        // Explicitly restating a default leaves the resolved form identical.
        assert_eq!(a.resolved_text(), b.resolved_text());
        assert_eq!(a.config_hash(), b.config_hash());
        let keys: Vec<&String> = a.resolved.iter().map(|(k, _)| k).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        let c = parse("figure2", "field = 5e9\n").unwrap();
        assert_ne!(a.config_hash(), c.config_hash());
    }

    #[test]
    fn figure3_exact_model_reads_its_own_section() {
        let err = parse("figure3", "exact.coupling = 0.2\n").unwrap_err();
        assert!(err.contains("`exact.coupling`"), "{err}");
        let cfg = parse("figure3", "model = exact\n").unwrap();
        let CommandConfig::Figure3(f) = &cfg.command else {
            panic!("wrong variant");
        };
        let TwistModel::ExactEvolution { coupling, time } = f.model else {
            panic!("wrong model");
        };
        assert_eq!(coupling, 0.2);
        assert!((time - PI / 0.4).abs() < 1e-12);
    }

    #[test]
    fn range_helpers_cover_the_degenerate_cases() {
        assert_eq!(linspace(2.0, 5.0, 1), vec![2.0]);
        let xs = linspace(0.0, 1.0, 5);
        assert_eq!(xs, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let ys = logspace(1e7, 1e8, 2);
        assert!((ys[0] - 1e7).abs() / 1e7 < 1e-12);
        assert!((ys[1] - 1e8).abs() / 1e8 < 1e-12);
    }

    #[test]
    fn out_of_range_values_name_the_key() {
        let err = parse("figure2", "theta.steps = 1\n").unwrap_err();
        assert!(err.contains("`theta.steps`"), "{err}");
        let err = parse("figure2", "lambda = -2e-10\n").unwrap_err();
        assert!(err.contains("`lambda`"), "{err}");
        let err = parse("figure2", "spin = sideways\n").unwrap_err();
        assert!(err.contains("`spin`"), "{err}");
    }
}
