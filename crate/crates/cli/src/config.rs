//! Configuration resolution.  Settings come from three layers with
//! increasing precedence: built-in defaults, an optional flat key=value
//! config file, and command line flags.  Tolerance overrides may only
//! tighten the built-in defaults unless relaxation is requested
//! explicitly.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use thetatrace_core::params::KernelParams;

#[derive(Clone, Debug)]
pub struct ConfigError {
    pub message: String,
}

impl ConfigError {
    pub fn new(message: impl Into<String>) -> Self {
        ConfigError {
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config error: {}", self.message)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
        }
    }
}

/// Named tolerances that config may override.  Each entry is the default
/// for the suite check of the same name; the list is the complete set of
/// overridable names, so a typo in a config key is caught at parse time.
pub const DEFAULT_TOLERANCES: &[(&str, f64)] = &[
    ("theta_inversion", 1e-12),
    ("trace_dual_agreement", 1e-12),
    ("self_dual_residual", 1e-11),
    ("annihilation", 1e-8),
    ("series_vs_operator", 1e-6),
    ("mellin_identification", 1e-8),
    ("axis_value_origin", 1e-8),
    ("axis_first_zero", 1e-6),
    ("axis_second_zero", 1e-6),
    ("laplace_oracle", 1e-8),
    ("laplace_quarter", 1e-9),
    ("kernel_routes", 1e-11),
    ("building_block_oracle", 1e-10),
    ("gauge_identity", 1e-12),
];

pub fn default_tolerance(name: &str) -> Option<f64> {
    DEFAULT_TOLERANCES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|&(_, v)| v)
}

#[derive(Clone, Debug, Default)]
pub struct Tolerances {
    overrides: BTreeMap<String, f64>,
}

impl Tolerances {
    /// Effective tolerance for a named check.  Panics on names outside
    /// the table; suite code only asks for listed names.
    pub fn get(&self, name: &str) -> f64 {
        if let Some(&v) = self.overrides.get(name) {
            return v;
        }
        default_tolerance(name).unwrap_or_else(|| panic!("no default tolerance named {}", name))
    }

    pub fn overrides(&self) -> &BTreeMap<String, f64> {
        &self.overrides
    }
}

/// One source of settings; `None` means the layer does not speak to that
/// setting.
#[derive(Clone, Debug, Default)]
pub struct ConfigLayer {
    pub self_dual: Option<bool>,
    pub length: Option<f64>,
    pub diffusion: Option<f64>,
    pub seed: Option<u64>,
    pub eps: Option<f64>,
    pub jobs: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<OutputFormat>,
    pub relax: Option<bool>,
    pub tol: BTreeMap<String, f64>,
}

/// Fully resolved run configuration.
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub params: KernelParams,
    pub tolerances: Tolerances,
    pub seed: u64,
    pub eps: f64,
    pub jobs: usize,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
    pub relax: bool,
}

fn parse_bool(key: &str, value: &str) -> Result<bool, ConfigError> {
    match value {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(ConfigError::new(format!(
            "key {} wants a boolean, got {:?}",
            key, value
        ))),
    }
}

fn parse_f64(key: &str, value: &str) -> Result<f64, ConfigError> {
    value
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| {
            ConfigError::new(format!(
                "key {} wants a finite number, got {:?}",
                key, value
            ))
        })
}

/// Flat `key=value` file, one setting per line, `#` comments.  Keys mirror
/// the command line flags; `tol.<check>` entries override tolerances.
pub fn parse_config_file(text: &str) -> Result<ConfigLayer, ConfigError> {
    let mut layer = ConfigLayer::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            ConfigError::new(format!(
                "line {}: expected key=value, got {:?}",
                lineno + 1,
                line
            ))
        })?;
        let key = key.trim();
        let value = value.trim();
        match key {
            "self_dual" | "self-dual" => layer.self_dual = Some(parse_bool(key, value)?),
            "l" | "L" => layer.length = Some(parse_f64(key, value)?),
            "d" | "D" => layer.diffusion = Some(parse_f64(key, value)?),
            "seed" => {
                layer.seed = Some(value.parse::<u64>().map_err(|_| {
                    ConfigError::new(format!(
                        "key seed wants an unsigned integer, got {:?}",
                        value
                    ))
                })?)
            }
            "eps" => layer.eps = Some(parse_f64(key, value)?),
            "jobs" => {
                layer.jobs = Some(value.parse::<usize>().map_err(|_| {
                    ConfigError::new(format!(
                        "key jobs wants a positive integer, got {:?}",
                        value
                    ))
                })?)
            }
            "out" => layer.out = Some(PathBuf::from(value)),
            "format" => {
                layer.format = Some(match value {
                    "json" => OutputFormat::Json,
                    "csv" => OutputFormat::Csv,
                    _ => {
                        return Err(ConfigError::new(format!(
                            "key format wants json or csv, got {:?}",
                            value
                        )))
                    }
                })
            }
            "relax" => layer.relax = Some(parse_bool(key, value)?),
            _ => {
                if let Some(tol_name) = key.strip_prefix("tol.") {
                    if default_tolerance(tol_name).is_none() {
                        return Err(ConfigError::new(format!(
                            "unknown tolerance name {:?}",
                            tol_name
                        )));
                    }
                    layer
                        .tol
                        .insert(tol_name.to_string(), parse_f64(key, value)?);
                } else {
                    return Err(ConfigError::new(format!("unknown key {:?}", key)));
                }
            }
        }
    }
    Ok(layer)
}

/// Merge layers (later wins) and validate the result.
pub fn resolve(layers: &[ConfigLayer]) -> Result<SuiteConfig, ConfigError> {
    // Geometry defaults to the self dual normalization.
    let canonical = KernelParams::self_dual_canonical();
    let mut length = canonical.length();
    let mut diffusion = canonical.diffusion();
    let mut seed = 0u64;
    let mut eps = 1e-15;
    let mut jobs = 1usize;
    let mut out: Option<PathBuf> = None;
    let mut format = OutputFormat::Json;
    let mut relax = false;
    let mut tol: BTreeMap<String, f64> = BTreeMap::new();

    for layer in layers {
        if layer.self_dual == Some(true) {
            if layer.length.is_some() || layer.diffusion.is_some() {
                return Err(ConfigError::new(
                    "self_dual fixes the geometry; do not also set L or D in the same source",
                ));
            }
            length = canonical.length();
            diffusion = canonical.diffusion();
        }
        if let Some(l) = layer.length {
            length = l;
        }
        if let Some(d) = layer.diffusion {
            diffusion = d;
        }
        if let Some(s) = layer.seed {
            seed = s;
        }
        if let Some(e) = layer.eps {
            eps = e;
        }
        if let Some(j) = layer.jobs {
            jobs = j;
        }
        if let Some(o) = &layer.out {
            out = Some(o.clone());
        }
        if let Some(f) = layer.format {
            format = f;
        }
        if let Some(r) = layer.relax {
            relax = r;
        }
        for (k, v) in &layer.tol {
            tol.insert(k.clone(), *v);
        }
    }

    let params = KernelParams::new(length, diffusion)
        .map_err(|e| ConfigError::new(format!("bad kernel geometry: {}", e)))?;
    if !(eps > 0.0 && eps < 1e-3) {
        return Err(ConfigError::new("series budget eps must lie in (0, 1e-3)"));
    }
    if jobs == 0 || jobs > 64 {
        return Err(ConfigError::new("jobs must lie in 1..=64"));
    }
    for (name, &value) in &tol {
        if !(value > 0.0 && value.is_finite()) {
            return Err(ConfigError::new(format!(
                "tolerance {} must be positive and finite",
                name
            )));
        }
        let default = default_tolerance(name).expect("validated at parse time");
        if value > default && !relax {
            return Err(ConfigError::new(format!(
                "tolerance {} = {} is looser than the default {}; pass --relax to allow it",
                name, value, default
            )));
        }
    }
    Ok(SuiteConfig {
        params,
        tolerances: Tolerances { overrides: tol },
        seed,
        eps,
        jobs,
        out,
        format,
        relax,
    })
}
