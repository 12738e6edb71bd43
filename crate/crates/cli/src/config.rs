//! Run configuration files (TOML).
//!
//! ```toml
//! [scenario]
//! sensor = "clock_geodesic"     # clock_stationary | clock_geodesic | lightpulse_ai | guided_ai
//! sequence = "echo"             # ramsey | echo | mach_zehnder | lmt_mz | hyper_echo | custom
//! N = 1
//! h_plus = 1e-6
//! phase0 = 0.3
//! k_g_L = 1e-4
//! omega_g_T = 3.141592653589793
//!
//! [sweep]
//! axis = "omega_g_T"            # omega_g_T | N | k_g_L | omega_t_ratio | T_a
//! start = 0.1
//! stop = 10.0
//! points = 200
//! spacing = "log"
//!
//! [output]
//! components = ["gw_total", "phi_k"]
//! ```
//!
//! Omitted scenario keys take the reference values of [`Scenario::default`].

use std::fmt;
use std::path::Path;

use gwsense_core::engine::EngineOptions;
use gwsense_core::model::Diagnostics;
use gwsense_core::sequence::PulseSpec;
use gwsense_core::{Component, Scenario, SensorKind, SequenceKind};
use serde::Deserialize;
use thiserror::Error;

pub const MAX_GRID_POINTS: usize = 1_000_000;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Syntax(String),
    #[error("line {line}: field `{field}`: {message}")]
    Field {
        line: usize,
        field: String,
        message: String,
    },
    #[error("field `{field}`: {message}")]
    Invalid { field: String, message: String },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    scenario: RawScenario,
    sweep: Option<RawSweep>,
    output: Option<RawOutput>,
    engine: Option<RawEngine>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    sensor: String,
    sequence: Option<String>,
    #[serde(rename = "N")]
    order: Option<usize>,
    h_plus: Option<f64>,
    phase0: Option<f64>,
    #[serde(rename = "k_g_L")]
    k_g_l: Option<f64>,
    #[serde(rename = "omega_g_T")]
    omega_g_t: Option<f64>,
    #[serde(rename = "L")]
    baseline: Option<f64>,
    k_l: Option<f64>,
    k_a: Option<f64>,
    mass: Option<f64>,
    omega_t_ratio: Option<f64>,
    accel: Option<f64>,
    #[serde(rename = "omega_g_T_a")]
    omega_g_t_a: Option<f64>,
    geodesic_t0: Option<f64>,
    pulses: Option<Vec<RawPulse>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPulse {
    t_a: f64,
    t_b: f64,
    lambda_omega: i8,
    lambda_k: i8,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    axis: String,
    start: f64,
    stop: f64,
    points: Option<usize>,
    spacing: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    components: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEngine {
    quadrature_order: Option<usize>,
    max_panel_phase: Option<f64>,
    strict: Option<bool>,
    oracle_points: Option<usize>,
    oracle_tolerance: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    OmegaGT,
    N,
    KGL,
    OmegaTRatio,
    /// `ω_G T_a` of guided sensors.
    Ta,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::OmegaGT => "omega_g_T",
            Axis::N => "N",
            Axis::KGL => "k_g_L",
            Axis::OmegaTRatio => "omega_t_ratio",
            Axis::Ta => "T_a",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [Axis::OmegaGT, Axis::N, Axis::KGL, Axis::OmegaTRatio, Axis::Ta]
            .into_iter()
            .find(|a| a.name() == s)
    }

    /// Copy of `base` with this axis set to `v`.
    pub fn apply(self, base: &Scenario, v: f64) -> Scenario {
        let mut s = base.clone();
        match self {
            Axis::OmegaGT => s.omega_g_t = v,
            Axis::N => s.order = v as usize,
            Axis::KGL => s.k_g_l = v,
            Axis::OmegaTRatio => s.omega_t_ratio = v,
            Axis::Ta => s.omega_g_t_a = v,
        }
        s
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub axis: Axis,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl Sweep {
    /// Grid values, endpoints included. `N` sweeps step through every integer.
    pub fn grid(&self) -> Vec<f64> {
        if self.axis == Axis::N {
            return (self.start as usize..=self.stop as usize).map(|n| n as f64).collect();
        }
        if self.points == 1 {
            return vec![self.start];
        }
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                if i == 0 {
                    return self.start;
                }
                if i + 1 == self.points {
                    return self.stop;
                }
                let f = i as f64 / last;
                match self.spacing {
                    Spacing::Linear => self.start + (self.stop - self.start) * f,
                    Spacing::Log => (self.start.ln() + (self.stop.ln() - self.start.ln()) * f).exp(),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct RunSpec {
    pub scenario: Scenario,
    pub sweep: Option<Sweep>,
    pub components: Vec<Component>,
    pub engine: EngineOptions,
    pub diagnostics: Diagnostics,
    /// Closure warnings of custom pulse tables.
    pub warnings: Vec<String>,
}

pub fn parse_config(path: &Path) -> Result<RunSpec, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_str(&text)
}

/// 1-based line of the first `key = …` assignment, if any.
fn line_of(text: &str, key: &str) -> Option<usize> {
    text.lines().position(|l| {
        let l = l.trim_start();
        l.strip_prefix(key).is_some_and(|rest| rest.trim_start().starts_with('='))
    })
    .map(|i| i + 1)
}

fn field_error(text: &str, field: &str, message: impl Into<String>) -> ConfigError {
    let key = field.rsplit('.').next().unwrap_or(field);
    let message = message.into();
    match line_of(text, key) {
        Some(line) => ConfigError::Field {
            line,
            field: field.into(),
            message,
        },
        None => ConfigError::Invalid {
            field: field.into(),
            message,
        },
    }
}

/// Config field that most likely caused a core error.
fn field_for(err: &gwsense_core::Error) -> &'static str {
    use gwsense_core::Error as E;
    match err {
        E::WeakField(_) => "scenario.h_plus",
        E::InvalidParameter { name, .. } => match *name {
            "L" => "scenario.L",
            "k_g_L" | "omega_g" => "scenario.k_g_L",
            "omega_g_T" | "T" | "tau" => "scenario.omega_g_T",
            "omega_t" | "omega_t_ratio" => "scenario.omega_t_ratio",
            "mass" => "scenario.mass",
            "k_l" | "omega_a" => "scenario.k_l",
            "a" => "scenario.accel",
            "T_a" => "scenario.omega_g_T_a",
            "phase0" => "scenario.phase0",
            _ => "scenario",
        },
        E::TrapResonance(_) => "scenario.omega_t_ratio",
        E::Sequence(_) | E::OpenSequence(_) => "scenario.sequence",
        E::Sensor(_) => "scenario.sensor",
        _ => "scenario",
    }
}

fn positive(text: &str, field: &str, v: f64) -> Result<f64, ConfigError> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(field_error(text, field, format!("{v} must be finite and > 0")))
    }
}

pub fn parse_str(text: &str) -> Result<RunSpec, ConfigError> {
    let raw: RawFile = toml::from_str(text).map_err(|e| ConfigError::Syntax(e.to_string().trim_end().to_string()))?;
    let r = raw.scenario;

    let sensor = SensorKind::parse(&r.sensor)
        .ok_or_else(|| field_error(text, "scenario.sensor", format!("unknown sensor `{}`", r.sensor)))?;
    let sequence = match (&r.sequence, sensor) {
        (Some(name), _) => SequenceKind::parse(name)
            .ok_or_else(|| field_error(text, "scenario.sequence", format!("unknown sequence `{name}`")))?,
        (None, SensorKind::GuidedAi) => SequenceKind::Custom,
        (None, _) => return Err(field_error(text, "scenario.sequence", "required for pulsed sensors")),
    };

    let mut s = Scenario::new(sensor, sequence);
    macro_rules! set {
        ($field:ident, $key:literal) => {
            if let Some(v) = r.$field {
                s.$field = positive(text, concat!("scenario.", $key), v)?;
            }
        };
    }
    set!(k_g_l, "k_g_L");
    set!(omega_g_t, "omega_g_T");
    set!(baseline, "L");
    set!(k_l, "k_l");
    set!(mass, "mass");
    set!(omega_t_ratio, "omega_t_ratio");
    set!(accel, "accel");
    set!(omega_g_t_a, "omega_g_T_a");
    if let Some(h) = r.h_plus {
        // zero strain is a valid control run; the weak-field bound is checked below
        s.h_plus = h;
    }
    if let Some(p) = r.phase0 {
        if !p.is_finite() {
            return Err(field_error(text, "scenario.phase0", "must be finite"));
        }
        s.phase0 = p;
    }
    if let Some(t0) = r.geodesic_t0 {
        if !t0.is_finite() {
            return Err(field_error(text, "scenario.geodesic_t0", "must be finite"));
        }
        s.geodesic_t0 = t0;
    }
    if let Some(ka) = r.k_a {
        s.k_a = Some(positive(text, "scenario.k_a", ka)?);
    }
    if let Some(n) = r.order {
        if n == 0 {
            return Err(field_error(text, "scenario.N", "must be >= 1"));
        }
        s.order = n;
    }
    match (sequence, r.pulses) {
        (SequenceKind::Custom, Some(p)) => {
            s.custom_pulses = p
                .into_iter()
                .map(|p| PulseSpec {
                    t_a: p.t_a,
                    t_b: p.t_b,
                    lambda_omega: p.lambda_omega,
                    lambda_k: p.lambda_k,
                })
                .collect();
        }
        (SequenceKind::Custom, None) if sensor != SensorKind::GuidedAi => {
            return Err(field_error(text, "scenario.pulses", "custom sequences need a pulse table"));
        }
        (SequenceKind::Custom, None) => {}
        (_, Some(_)) => return Err(field_error(text, "scenario.pulses", "only allowed with sequence = \"custom\"")),
        (_, None) => {}
    }

    let mut engine = EngineOptions::default();
    if let Some(e) = raw.engine {
        if let Some(q) = e.quadrature_order {
            if !(2..=256).contains(&q) {
                return Err(field_error(text, "engine.quadrature_order", "must be in 2..=256"));
            }
            engine.quadrature_order = q;
        }
        if let Some(m) = e.max_panel_phase {
            engine.max_panel_phase = positive(text, "engine.max_panel_phase", m)?;
        }
        if let Some(st) = e.strict {
            engine.strict = st;
        }
        if let Some(p) = e.oracle_points {
            if p < 3 {
                return Err(field_error(text, "engine.oracle_points", "must be >= 3"));
            }
            engine.oracle_points = p;
        }
        if let Some(t) = e.oracle_tolerance {
            engine.oracle_tolerance = positive(text, "engine.oracle_tolerance", t)?;
        }
    }

    let components = match raw.output {
        None => vec![Component::GwTotal],
        Some(o) => {
            let mut out = Vec::new();
            for c in &o.components {
                out.push(
                    Component::parse(c)
                        .ok_or_else(|| field_error(text, "output.components", format!("unknown component `{c}`")))?,
                );
            }
            if out.is_empty() {
                return Err(field_error(text, "output.components", "must list at least one component"));
            }
            out
        }
    };

    let sweep = match raw.sweep {
        None => None,
        Some(w) => {
            let axis = Axis::parse(&w.axis)
                .ok_or_else(|| field_error(text, "sweep.axis", format!("unknown axis `{}`", w.axis)))?;
            let fits = match axis {
                Axis::N => matches!(sequence, SequenceKind::LmtMz | SequenceKind::HyperEcho),
                Axis::OmegaTRatio => sensor.is_clock(),
                Axis::Ta => sensor == SensorKind::GuidedAi,
                Axis::OmegaGT | Axis::KGL => true,
            };
            if !fits {
                return Err(field_error(
                    text,
                    "sweep.axis",
                    format!("`{axis}` does not apply to {sensor} with {sequence}"),
                ));
            }
            let start = positive(text, "sweep.start", w.start)?;
            let stop = positive(text, "sweep.stop", w.stop)?;
            if stop < start {
                return Err(field_error(text, "sweep.stop", "must be >= start"));
            }
            let spacing = match w.spacing.as_deref() {
                None | Some("linear") => Spacing::Linear,
                Some("log") => Spacing::Log,
                Some(other) => {
                    return Err(field_error(text, "sweep.spacing", format!("`{other}` is not linear or log")))
                }
            };
            let points = if axis == Axis::N {
                if start.fract() != 0.0 || stop.fract() != 0.0 {
                    return Err(field_error(text, "sweep.start", "N sweeps need integer bounds"));
                }
                (stop - start) as usize + 1
            } else {
                w.points.ok_or_else(|| field_error(text, "sweep.points", "required"))?
            };
            if points == 0 || points > MAX_GRID_POINTS {
                return Err(field_error(
                    text,
                    "sweep.points",
                    format!("{points} outside 1..={MAX_GRID_POINTS}"),
                ));
            }
            Some(Sweep {
                axis,
                start,
                stop,
                points,
                spacing,
            })
        }
    };

    // physical invariants of the base point
    let physics = |e: gwsense_core::Error| field_error(text, field_for(&e), e.to_string());
    let (_, warnings) = s.pulse_sequence().map_err(physics)?;
    s.setup().map_err(physics)?;
    let diagnostics = s.diagnostics().map_err(physics)?;

    Ok(RunSpec {
        scenario: s,
        sweep,
        components,
        engine,
        diagnostics,
        warnings,
    })
}
