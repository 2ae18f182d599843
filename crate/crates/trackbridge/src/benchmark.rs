//! The bundled single-axle benchmark: a 5750 kg sprung mass at 27.78 m/s
//! over a 30 m simply supported deck.

use std::fmt;
use std::path::Path;

use trackbridge_core::sim::{self, Probe, Quantity, SimConfig, TimeHistory};

use crate::config::{Config, Override};
use crate::oracle::{self, ModalBeam, SprungMass};
use crate::Result;

pub const BENCHMARK_TOML: &str = include_str!("../configs/benchmark.toml");

pub fn config() -> Config {
    config_with(&[]).expect("bundled benchmark config is valid")
}

pub fn config_with(overrides: &[Override]) -> Result<Config> {
    Config::parse(BENCHMARK_TOML, Path::new("<benchmark>"), overrides)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Peak {
    pub name: String,
    pub unit: &'static str,
    pub value: f64,
    pub time: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Deviation {
    pub name: &'static str,
    pub fem: f64,
    pub reference: f64,
    pub modes: usize,
}

impl Deviation {
    pub fn relative(&self) -> f64 {
        (self.fem - self.reference).abs() / self.reference.abs()
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub crossing_time: f64,
    pub first_frequency: f64,
    /// Static midspan deflection under the body weight.
    pub static_scale: f64,
    pub peaks: Vec<Peak>,
    pub deviations: Vec<Deviation>,
    pub history: TimeHistory,
}

fn peak_abs(values: &[f64]) -> f64 {
    values.iter().fold(0.0, |m: f64, v| m.max(v.abs()))
}

/// Runs the case and compares peak responses with the modal sprung-mass
/// reference at 10 and 40 modes.
pub fn run(cfg: &SimConfig) -> Result<Report> {
    let mut cfg = cfg.clone();
    let span = cfg.mesh.span();
    let mid = 0.5 * span;
    let probes = [
        Probe::bridge(mid, Quantity::Displacement),
        Probe::bridge(mid, Quantity::Acceleration),
        Probe::body(Quantity::Acceleration),
    ];
    for p in probes {
        if !cfg.probes.contains(&p) {
            cfg.probes.push(p);
        }
    }
    let history = sim::run(cfg.clone())?;
    let beam = ModalBeam {
        rigidity: cfg.mesh.bridge.rigidity,
        mass_per_length: cfg.mesh.bridge.mass_per_length,
        span,
    };
    let crossing_time = cfg.crossing_end()?;
    let peaks = history
        .columns
        .iter()
        .map(|c| {
            let (time, value) = history.peak(&c.name).unwrap_or((0.0, 0.0));
            Peak {
                name: c.name.clone(),
                unit: c.unit,
                value,
                time,
            }
        })
        .collect();

    // Reference values only cover the crossing itself.
    let on_span = history.times.iter().take_while(|t| **t <= crossing_time + 1e-9).count();
    let fem_peak = |p: &Probe| peak_abs(&history.column(&p.name()).expect("probe recorded")[..on_span]);
    let veh = SprungMass {
        m_body: cfg.vehicle.m_body,
        k_susp: cfg.vehicle.k_susp,
        c_susp: cfg.vehicle.c_susp,
        v: cfg.vehicle.v,
        gravity: cfg.gravity,
    };
    let mut deviations = Vec::new();
    for modes in [10, 40] {
        let h = 1e-4_f64.min(1.0 / beam.omega(modes));
        let reference = oracle::sprung_mass(&beam, &veh, modes, h, 1)?;
        let pk = |f: fn(&oracle::SprungSample) -> f64| reference.iter().map(f).fold(0.0, |m: f64, v| m.max(v.abs()));
        deviations.push(Deviation {
            name: "midspan displacement",
            fem: fem_peak(&probes[0]),
            reference: pk(|s| s.midspan_displacement),
            modes,
        });
        deviations.push(Deviation {
            name: "midspan acceleration",
            fem: fem_peak(&probes[1]),
            reference: pk(|s| s.midspan_acceleration),
            modes,
        });
        deviations.push(Deviation {
            name: "body acceleration",
            fem: fem_peak(&probes[2]),
            reference: pk(|s| s.body_acceleration),
            modes,
        });
    }
    Ok(Report {
        crossing_time,
        first_frequency: beam.first_frequency(),
        static_scale: beam.static_midspan(cfg.vehicle.m_body * cfg.gravity),
        peaks,
        deviations,
        history,
    })
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "crossing time          {:.6} s", self.crossing_time)?;
        writeln!(f, "bridge f1 (analytic)   {:.6} Hz", self.first_frequency)?;
        writeln!(f, "static midspan scale   {:.6e} m", self.static_scale)?;
        writeln!(f)?;
        writeln!(f, "peaks")?;
        for p in &self.peaks {
            writeln!(f, "  {:<28} {:>14.6e} {:<6} at t = {:.4} s", p.name, p.value, p.unit, p.time)?;
        }
        writeln!(f)?;
        writeln!(f, "modal reference (peak |value| during crossing)")?;
        for d in &self.deviations {
            writeln!(
                f,
                "  {:<22} {:>2} modes  fem {:>12.6e}  ref {:>12.6e}  rel dev {:.3}%",
                d.name,
                d.modes,
                d.fem,
                d.reference,
                100.0 * d.relative()
            )?;
        }
        Ok(())
    }
}
