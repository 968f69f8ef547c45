//! Run configuration. Frequencies are given in MHz and multiplied by 2π,
//! times in ns, angles in radians.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::fmt;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use nhqc::dynamics::{IntegrationConfig, NoiseMode, Truncation};
use nhqc::holonomy::{GateKind, GateSpec};
use nhqc::model::{mhz, PhysicalParams};

#[derive(Debug)]
pub enum ConfigError {
    Io { path: PathBuf, source: std::io::Error },
    Syntax { path: PathBuf, message: String },
    Invalid { key: &'static str, message: String },
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Io { path, source } => write!(f, "cannot read {}: {source}", path.display()),
            Self::Syntax { path, message } => write!(f, "{}: {message}", path.display()),
            Self::Invalid { key, message } => write!(f, "invalid `{key}`: {message}"),
        }
    }
}

impl std::error::Error for ConfigError {}

fn invalid(key: &'static str, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid { key, message: message.into() }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default)]
    system: RawSystem,
    #[serde(default)]
    drives: RawDrives,
    #[serde(default)]
    decoherence: RawDecoherence,
    #[serde(default)]
    simulation: RawSimulation,
    #[serde(default)]
    output: RawOutput,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSystem {
    #[serde(alias = "G")]
    cavity_coupling: Option<f64>,
    #[serde(alias = "Omega_L")]
    laser_rabi: Option<f64>,
    #[serde(alias = "Delta")]
    optical_detuning: Option<f64>,
    #[serde(alias = "delta")]
    raman_detuning: Option<f64>,
    #[serde(alias = "g")]
    raman_coupling: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDrives {
    kind: Option<String>,
    angle: Option<f64>,
    phase: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDecoherence {
    mode: Option<String>,
    kappa: Option<f64>,
    gamma: Option<f64>,
    gamma_phi: Option<f64>,
    multipliers: Option<Vec<f64>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSimulation {
    dt_ns: Option<f64>,
    t_end_ns: Option<f64>,
    sample_stride: Option<usize>,
    n_max: Option<usize>,
    truncation: Option<String>,
    excitation_margin: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    directory: Option<PathBuf>,
}

/// Validated configuration in simulation units (rad/ns, ns).
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub params: PhysicalParams<f64>,
    pub gate_kind: GateKind,
    /// `None` means the default angle for the gate kind.
    pub angle: Option<f64>,
    pub phase: f64,
    pub mode: NoiseMode,
    pub simulation: IntegrationConfig<f64>,
    pub output_dir: PathBuf,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ConfigError::Io { path: path.to_path_buf(), source })?;
        Self::parse(&text).map_err(|e| match e {
            ConfigError::Syntax { message, .. } => ConfigError::Syntax { path: path.to_path_buf(), message },
            other => other,
        })
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let raw: RawConfig = toml::from_str(text)
            .map_err(|e| ConfigError::Syntax { path: PathBuf::from("<config>"), message: e.to_string() })?;
        Self::from_raw(raw)
    }

    pub fn defaults() -> Self {
        Self::from_raw(RawConfig::default()).expect("defaults are valid")
    }

    fn from_raw(raw: RawConfig) -> Result<Self, ConfigError> {
        let mut params = PhysicalParams::<f64>::default();
        let freq = |key: &'static str, v: Option<f64>, slot: &mut f64, positive: bool| -> Result<(), ConfigError> {
            if let Some(v) = v {
                if !v.is_finite() || v < 0.0 || (positive && v == 0.0) {
                    let need = if positive { "a positive" } else { "a non-negative" };
                    return Err(invalid(key, format!("expected {need} frequency in MHz, got {v}")));
                }
                *slot = mhz(v);
            }
            Ok(())
        };
        let s = &raw.system;
        freq("system.cavity_coupling", s.cavity_coupling, &mut params.cavity_coupling, true)?;
        freq("system.laser_rabi", s.laser_rabi, &mut params.laser_rabi, true)?;
        freq("system.optical_detuning", s.optical_detuning, &mut params.optical_detuning, true)?;
        freq("system.raman_detuning", s.raman_detuning, &mut params.raman_detuning, true)?;
        freq("system.raman_coupling", s.raman_coupling, &mut params.raman_coupling, true)?;
        let d = &raw.decoherence;
        freq("decoherence.kappa", d.kappa, &mut params.kappa, false)?;
        freq("decoherence.gamma", d.gamma, &mut params.gamma, false)?;
        freq("decoherence.gamma_phi", d.gamma_phi, &mut params.gamma_phi, false)?;
        if let Some(m) = &d.multipliers {
            if m.is_empty() || m.iter().any(|x| !x.is_finite() || *x < 0.0) {
                return Err(invalid("decoherence.multipliers", "expected a non-empty list of non-negative numbers"));
            }
            params.rate_multipliers = m.clone();
        }
        params.validate().map_err(|e| invalid("system", e.to_string()))?;

        let mode = match d.mode.as_deref() {
            None | Some("collective") => NoiseMode::Collective,
            Some("individual") => NoiseMode::Individual,
            Some(other) => {
                return Err(invalid("decoherence.mode", format!("expected \"collective\" or \"individual\", got {other:?}")))
            }
        };

        let gate_kind = match raw.drives.kind.as_deref() {
            None => GateKind::U1,
            Some(k) => parse_kind(k).ok_or_else(|| invalid("drives.kind", format!("expected \"u1\" or \"u2\", got {k:?}")))?,
        };
        if let Some(a) = raw.drives.angle {
            if !a.is_finite() {
                return Err(invalid("drives.angle", "must be finite"));
            }
        }
        let phase = raw.drives.phase.unwrap_or(0.0);
        if !phase.is_finite() {
            return Err(invalid("drives.phase", "must be finite"));
        }

        let r = &raw.simulation;
        let mut simulation = IntegrationConfig::for_detuning(params.raman_detuning);
        if let Some(dt) = r.dt_ns {
            simulation.dt = dt;
        }
        simulation.t_end = r.t_end_ns;
        if let Some(s) = r.sample_stride {
            simulation.sample_stride = s;
        }
        if let Some(n) = r.n_max {
            simulation.n_max = n;
        }
        let margin = r.excitation_margin.unwrap_or(0);
        simulation.truncation = match r.truncation.as_deref() {
            None | Some("excitation") => Truncation::Excitation { margin },
            Some("full") => Truncation::Full,
            Some(other) => {
                return Err(invalid("simulation.truncation", format!("expected \"excitation\" or \"full\", got {other:?}")))
            }
        };
        simulation.validate(params.raman_detuning).map_err(|e| {
            let key = match e.to_string() {
                m if m.contains("dt") => "simulation.dt_ns",
                m if m.contains("t_end") => "simulation.t_end_ns",
                m if m.contains("stride") => "simulation.sample_stride",
                _ => "simulation.n_max",
            };
            invalid(key, e.to_string())
        })?;

        Ok(Self {
            params,
            gate_kind,
            angle: raw.drives.angle,
            phase,
            mode,
            simulation,
            output_dir: raw.output.directory.unwrap_or_else(|| PathBuf::from(".")),
        })
    }

    /// Gate of the given kind with the configured angle and phase.
    pub fn gate(&self, kind: GateKind) -> GateSpec<f64> {
        let default = match kind {
            GateKind::U1 => FRAC_PI_2,
            GateKind::U2 => FRAC_PI_4,
        };
        GateSpec { kind, angle: self.angle.unwrap_or(default), phase: self.phase }
    }
}

pub fn parse_kind(s: &str) -> Option<GateKind> {
    match s.to_ascii_lowercase().as_str() {
        "u1" => Some(GateKind::U1),
        "u2" => Some(GateKind::U2),
        _ => None,
    }
}
