//! Simulation configuration files.
//!
//! TOML with the sections `mesh`, `rail`, `bridge`, `vehicle`, `track`,
//! `integrator` and `output`, SI units throughout. Unknown keys are errors.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use trackbridge_core::assembly::{BeamSection, Mesh};
use trackbridge_core::irregularity::Profile;
use trackbridge_core::newmark::NewmarkParams;
use trackbridge_core::sim::{default_probes, AccelerationUpdate, Probe, SimConfig};
use trackbridge_core::vehicle::VehicleParams;
use trackbridge_core::GRAVITY;

use crate::{profile_file, Error, Result};

const SECTIONS: [&str; 7] = ["mesh", "rail", "bridge", "vehicle", "track", "integrator", "output"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub mesh: MeshConfig,
    pub rail: BeamConfig,
    pub bridge: BeamConfig,
    pub vehicle: VehicleConfig,
    #[serde(default)]
    pub track: TrackConfig,
    #[serde(default)]
    pub integrator: IntegratorConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshConfig {
    #[serde(default = "default_elements")]
    pub elements: usize,
    /// Span length, m.
    pub span: f64,
    /// Bed stiffness per unit length, N/m².
    pub bed_stiffness: f64,
    /// Bed damping per unit length, N·s/m².
    #[serde(default)]
    pub bed_damping: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BeamConfig {
    /// Pa
    pub youngs_modulus: f64,
    /// m⁴
    pub second_moment: f64,
    /// kg/m
    pub mass_per_length: f64,
    /// N·s/m²
    #[serde(default)]
    pub damping_per_length: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VehicleConfig {
    pub body_mass: f64,
    #[serde(default)]
    pub wheel_mass: f64,
    pub suspension_stiffness: f64,
    #[serde(default)]
    pub suspension_damping: f64,
    pub speed: f64,
    #[serde(default)]
    pub acceleration: f64,
    #[serde(default)]
    pub entry_position: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProfileKind {
    #[default]
    Smooth,
    Sinusoid,
    Sampled,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrackConfig {
    #[serde(default)]
    pub profile: ProfileKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitude: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wavelength: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase: Option<f64>,
    /// Two-column table, relative paths resolve against the config file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AccelerationUpdateConfig {
    #[default]
    Equilibrium,
    Incremental,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorConfig {
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_beta")]
    pub beta: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_end: Option<f64>,
    #[serde(default)]
    pub tail: f64,
    #[serde(default = "default_gravity")]
    pub gravity: f64,
    #[serde(default)]
    pub acceleration_update: AccelerationUpdateConfig,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            dt: default_dt(),
            beta: default_beta(),
            t_end: None,
            tail: 0.0,
            gravity: default_gravity(),
            acceleration_update: AccelerationUpdateConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// Probe names such as `bridge.displacement@15`; empty means the defaults.
    #[serde(default)]
    pub probes: Vec<String>,
}

fn default_elements() -> usize {
    10
}

fn default_dt() -> f64 {
    0.005
}

fn default_beta() -> f64 {
    0.25
}

fn default_gravity() -> f64 {
    GRAVITY
}

/// A `section.key=value` override. The value is read as a TOML value and
/// falls back to a bare string.
#[derive(Debug, Clone, PartialEq)]
pub struct Override {
    pub section: String,
    pub key: String,
    pub value: toml::Value,
}

impl std::str::FromStr for Override {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let fail = |why: &str| Error::Override(s.to_string(), why.to_string());
        let (path, raw) = s.split_once('=').ok_or_else(|| fail("expected KEY=VALUE"))?;
        let (section, key) = path
            .trim()
            .split_once('.')
            .ok_or_else(|| fail("key must be section.name"))?;
        if !SECTIONS.contains(&section) {
            return Err(fail("unknown section"));
        }
        if key.is_empty() || key.contains('.') {
            return Err(fail("key must be section.name"));
        }
        let raw = raw.trim();
        let value = toml::from_str::<toml::Table>(&format!("v = {raw}"))
            .ok()
            .and_then(|mut t| t.remove("v"))
            .unwrap_or_else(|| toml::Value::String(raw.to_string()));
        Ok(Override {
            section: section.to_string(),
            key: key.to_string(),
            value,
        })
    }
}

impl Config {
    /// Parses a config document, applying `overrides` before validation of
    /// the key set. `origin` is used in error messages.
    pub fn parse(text: &str, origin: &Path, overrides: &[Override]) -> Result<Self> {
        let mut table: toml::Table = toml::from_str(text).map_err(|e| Error::parse(origin, e.to_string()))?;
        for ov in overrides {
            let section = table
                .entry(ov.section.clone())
                .or_insert_with(|| toml::Value::Table(toml::Table::new()));
            let toml::Value::Table(section) = section else {
                return Err(Error::parse(origin, format!("'{}' is not a section", ov.section)));
            };
            section.insert(ov.key.clone(), ov.value.clone());
        }
        Config::deserialize(toml::Value::Table(table)).map_err(|e| Error::parse(origin, e.to_string()))
    }

    pub fn load(path: &Path, overrides: &[Override]) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = Config::parse(&text, path, overrides)?;
        if let (Some(file), Some(dir)) = (&cfg.track.file, path.parent()) {
            if file.is_relative() {
                cfg.track.file = Some(dir.join(file));
            }
        }
        Ok(cfg)
    }

    /// The resolved configuration as TOML.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn mesh(&self) -> Mesh {
        let beam = |b: &BeamConfig| BeamSection {
            rigidity: b.youngs_modulus * b.second_moment,
            mass_per_length: b.mass_per_length,
            damping_per_length: b.damping_per_length,
        };
        Mesh {
            n: self.mesh.elements,
            l: self.mesh.span / self.mesh.elements.max(1) as f64,
            rail: beam(&self.rail),
            bridge: beam(&self.bridge),
            k_bed: self.mesh.bed_stiffness,
            c_bed: self.mesh.bed_damping,
        }
    }

    pub fn vehicle(&self) -> VehicleParams {
        let v = &self.vehicle;
        VehicleParams {
            m_body: v.body_mass,
            m_wheel: v.wheel_mass,
            k_susp: v.suspension_stiffness,
            c_susp: v.suspension_damping,
            v: v.speed,
            a: v.acceleration,
        }
    }

    pub fn profile(&self) -> Result<Profile> {
        let t = &self.track;
        let origin = Path::new("[track]");
        let need = |v: Option<f64>, name: &str| {
            v.ok_or_else(|| Error::parse(origin, format!("profile = \"{:?}\" needs '{name}'", t.profile).to_lowercase()))
        };
        match t.profile {
            ProfileKind::Smooth => Ok(Profile::Smooth),
            ProfileKind::Sinusoid => Ok(Profile::sinusoid(
                need(t.amplitude, "amplitude")?,
                need(t.wavelength, "wavelength")?,
                t.phase.unwrap_or(0.0),
            )?),
            ProfileKind::Sampled => {
                let file = t
                    .file
                    .as_deref()
                    .ok_or_else(|| Error::parse(origin, "profile = \"sampled\" needs 'file'"))?;
                profile_file::load(file)
            }
        }
    }

    pub fn probes(&self) -> Result<Vec<Probe>> {
        if self.output.probes.is_empty() {
            return Ok(default_probes(self.mesh.span));
        }
        self.output
            .probes
            .iter()
            .map(|p| p.parse::<Probe>().map_err(Error::from))
            .collect()
    }

    pub fn sim_config(&self) -> Result<SimConfig> {
        let it = &self.integrator;
        let cfg = SimConfig {
            mesh: self.mesh(),
            vehicle: self.vehicle(),
            profile: self.profile()?,
            newmark: NewmarkParams {
                beta: it.beta,
                delta: 0.5,
                dt: it.dt,
            },
            probes: self.probes()?,
            t_end: it.t_end,
            tail: it.tail,
            x0: self.vehicle.entry_position,
            gravity: it.gravity,
            acceleration_update: match it.acceleration_update {
                AccelerationUpdateConfig::Equilibrium => AccelerationUpdate::Equilibrium,
                AccelerationUpdateConfig::Incremental => AccelerationUpdate::Incremental,
            },
        };
        cfg.validate()?;
        Ok(cfg)
    }
}
