//! Crossing simulation: per step the wheel is located, the interaction
//! blocks are rebuilt and scattered into the constant rail-bridge system,
//! and one Newmark step is taken.
//!
//! `M, C, K` are frozen at the start of each step (wheel at `x(t)`); the
//! load increment uses the wheel position at `t + Δt`.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DVector;

use crate::assembly::{self, Beam, GlobalSystem, Mesh};
use crate::coupling::{self, CouplingBlocks};
use crate::irregularity::{IrregularitySample, Profile};
use crate::newmark::{self, NewmarkParams, State};
use crate::vehicle::{self, VehicleParams, WheelLocation};
use crate::{Error, Result, GRAVITY};

/// How the acceleration is updated at the end of each step.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum AccelerationUpdate {
    /// Solve equilibrium at `t + Δt` with the new matrices.
    #[default]
    Equilibrium,
    /// Keep the Newmark increment computed with the frozen matrices.
    Incremental,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Bridge,
    Rail,
    Body,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Displacement,
    Velocity,
    Acceleration,
    ContactForce,
}

impl Quantity {
    pub fn unit(self) -> &'static str {
        match self {
            Quantity::Displacement => "m",
            Quantity::Velocity => "m/s",
            Quantity::Acceleration => "m/s^2",
            Quantity::ContactForce => "N",
        }
    }

    fn label(self) -> &'static str {
        match self {
            Quantity::Displacement => "displacement",
            Quantity::Velocity => "velocity",
            Quantity::Acceleration => "acceleration",
            Quantity::ContactForce => "contact_force",
        }
    }
}

/// A response series to record. For beam targets `x = None` follows the
/// wheel (zero once it has left). `x` is ignored for the body and for the
/// contact force.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Probe {
    pub target: Target,
    pub x: Option<f64>,
    pub quantity: Quantity,
}

impl Probe {
    pub fn bridge(x: f64, quantity: Quantity) -> Self {
        Probe {
            target: Target::Bridge,
            x: Some(x),
            quantity,
        }
    }

    pub fn body(quantity: Quantity) -> Self {
        Probe {
            target: Target::Body,
            x: None,
            quantity,
        }
    }

    pub fn contact_force() -> Self {
        Probe {
            target: Target::Body,
            x: None,
            quantity: Quantity::ContactForce,
        }
    }

    pub fn name(&self) -> String {
        if self.quantity == Quantity::ContactForce {
            return String::from("contact_force");
        }
        let q = self.quantity.label();
        match (self.target, self.x) {
            (Target::Body, _) => format!("body.{q}"),
            (Target::Bridge, Some(x)) => format!("bridge.{q}@{x}"),
            (Target::Rail, Some(x)) => format!("rail.{q}@{x}"),
            (Target::Bridge, None) => format!("bridge.{q}@wheel"),
            (Target::Rail, None) => format!("rail.{q}@wheel"),
        }
    }
}

impl core::str::FromStr for Probe {
    type Err = Error;

    /// Parses the names produced by [`Probe::name`]: `contact_force`,
    /// `body.<quantity>`, `bridge.<quantity>@<x>`, `rail.<quantity>@wheel`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("unrecognized probe '{s}'"));
        let s = s.trim();
        if s == "contact_force" {
            return Ok(Probe::contact_force());
        }
        let (target, rest) = s.split_once('.').ok_or_else(bad)?;
        let (quantity, at) = match rest.split_once('@') {
            Some((q, at)) => (q, Some(at)),
            None => (rest, None),
        };
        let quantity = match quantity {
            "displacement" => Quantity::Displacement,
            "velocity" => Quantity::Velocity,
            "acceleration" => Quantity::Acceleration,
            _ => return Err(bad()),
        };
        let target = match target {
            "body" => Target::Body,
            "bridge" => Target::Bridge,
            "rail" => Target::Rail,
            _ => return Err(bad()),
        };
        let x = match (target, at) {
            (Target::Body, None) => None,
            (Target::Body, Some(_)) | (_, None) => return Err(bad()),
            (_, Some("wheel")) => None,
            (_, Some(x)) => Some(x.parse::<f64>().map_err(|_| bad())?),
        };
        Ok(Probe { target, x, quantity })
    }
}

/// Bridge midspan displacement and acceleration plus body acceleration.
pub fn default_probes(span: f64) -> Vec<Probe> {
    vec![
        Probe::bridge(0.5 * span, Quantity::Displacement),
        Probe::bridge(0.5 * span, Quantity::Acceleration),
        Probe::body(Quantity::Acceleration),
    ]
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub mesh: Mesh,
    pub vehicle: VehicleParams,
    pub profile: Profile,
    pub newmark: NewmarkParams,
    pub probes: Vec<Probe>,
    /// End of the crossing phase; defaults to the time the wheel reaches the
    /// far support.
    pub t_end: Option<f64>,
    /// Extra free-vibration time after `t_end`, with the vehicle removed.
    pub tail: f64,
    /// Wheel abscissa at `t = 0`.
    pub x0: f64,
    pub gravity: f64,
    pub acceleration_update: AccelerationUpdate,
}

impl SimConfig {
    /// Default integrator, smooth rail, default probes, entry at `x = 0`.
    pub fn new(mesh: Mesh, vehicle: VehicleParams) -> Self {
        SimConfig {
            probes: default_probes(mesh.span()),
            mesh,
            vehicle,
            profile: Profile::Smooth,
            newmark: NewmarkParams::default(),
            t_end: None,
            tail: 0.0,
            x0: 0.0,
            gravity: GRAVITY,
            acceleration_update: AccelerationUpdate::Equilibrium,
        }
    }

    /// Resolved end of the crossing phase.
    pub fn crossing_end(&self) -> Result<f64> {
        match self.t_end {
            Some(t) => Ok(t),
            None => self
                .vehicle
                .time_to_travel(self.mesh.span() - self.x0)
                .ok_or_else(|| Error::Config("vehicle stops before leaving the span; set t_end".into())),
        }
    }

    /// Number of steps covering `crossing_end + tail`.
    pub fn step_count(&self) -> Result<usize> {
        let total = self.crossing_end()? + self.tail;
        let steps = libm::round(total / self.newmark.dt);
        Ok(steps as usize)
    }

    pub fn validate(&self) -> Result<()> {
        self.mesh.validate()?;
        self.vehicle.validate()?;
        self.newmark.validate()?;
        let span = self.mesh.span();
        if !(0.0..=span).contains(&self.x0) {
            return Err(Error::domain("x0", self.x0, "0 <= x0 <= span"));
        }
        if !(self.tail >= 0.0 && self.tail.is_finite()) {
            return Err(Error::domain("tail", self.tail, "tail >= 0"));
        }
        if !self.gravity.is_finite() {
            return Err(Error::NonFinite("gravity"));
        }
        let t_end = self.crossing_end()?;
        if !(t_end >= 0.0 && t_end.is_finite()) {
            return Err(Error::domain("t_end", t_end, "t_end >= 0"));
        }
        if self.vehicle.speed(t_end) <= 0.0 {
            return Err(Error::Config(format!(
                "vehicle speed becomes non-positive before t_end = {t_end} s"
            )));
        }
        if let Some(extent) = self.profile.extent() {
            if extent < span {
                return Err(Error::Config(format!(
                    "sampled profile covers {extent} m but the span is {span} m"
                )));
            }
        }
        for p in &self.probes {
            if p.target == Target::Body || p.quantity == Quantity::ContactForce {
                continue;
            }
            if let Some(x) = p.x {
                if !(0.0..=span).contains(&x) {
                    return Err(Error::Config(format!("probe {} lies outside the span 0..{span}", p.name())));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub unit: &'static str,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TimeHistory {
    pub times: Vec<f64>,
    pub columns: Vec<Series>,
}

impl TimeHistory {
    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns
            .iter()
            .find(|c| c.name == name)
            .map(|c| c.values.as_slice())
    }

    /// `(time, value)` of the largest `|value|` in a column.
    pub fn peak(&self, name: &str) -> Option<(f64, f64)> {
        let col = self.column(name)?;
        col.iter()
            .zip(&self.times)
            .max_by(|a, b| a.0.abs().total_cmp(&b.0.abs()))
            .map(|(v, t)| (*t, *v))
    }
}

/// Wheel state needed to evaluate the contact force.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContactInputs {
    pub params: VehicleParams,
    pub x: f64,
    pub irr: IrregularitySample,
    pub v_t: f64,
    pub gravity: f64,
}

/// Wheel-rail contact force (positive pushes the rail down):
/// `W + k·(q₁ − q_e) + c·(q̇₁ − q̇_e) − m_w·q̈_e` with `q_e = r + w_r`.
/// A negative value means the contact would separate; it is reported as is.
pub fn contact_force(state: &State, sys: &GlobalSystem, inputs: &ContactInputs) -> Result<f64> {
    if !sys.has_vehicle {
        return Err(Error::Config("contact force needs a coupled system".into()));
    }
    let ContactInputs {
        params,
        x,
        irr,
        v_t,
        gravity,
    } = *inputs;
    let (w, w1, w2) = sys.field_at(&state.u, Beam::Rail, x)?;
    let (wd, wd1, _) = sys.field_at(&state.v, Beam::Rail, x)?;
    let (wdd, _, _) = sys.field_at(&state.acc, Beam::Rail, x)?;
    let a = params.a;

    let qe = irr.r + w;
    let qe_d = v_t * irr.r1 + wd + v_t * w1;
    let qe_dd = v_t * v_t * irr.r2 + a * irr.r1 + wdd + 2.0 * v_t * wd1 + v_t * v_t * w2 + a * w1;

    let weight = (params.m_body + params.m_wheel) * gravity;
    Ok(weight + params.k_susp * (state.u[0] - qe) + params.c_susp * (state.v[0] - qe_d)
        - params.m_wheel * qe_dd)
}

/// Interpolated displacement of a beam at `x` (constrained DOFs count as 0).
pub fn probe_displacement(state: &State, sys: &GlobalSystem, target: Beam, x: f64) -> Result<f64> {
    Ok(sys.field_at(&state.u, target, x)?.0)
}

/// Wheel and coupled matrices at one instant.
struct Snapshot {
    sys: GlobalSystem,
    wheel: Option<(WheelLocation, ContactInputs)>,
}

/// A crossing in progress. [`run`] drives it to the end.
pub struct Simulation {
    config: SimConfig,
    base: GlobalSystem,
    crossing_end: f64,
    steps: usize,
    step_index: usize,
    current: Snapshot,
    state: State,
}

impl Simulation {
    pub fn new(config: SimConfig) -> Result<Self> {
        config.validate()?;
        let base = assembly::apply_constraints(&assembly::assemble_rail_bridge(&config.mesh)?)?;
        let crossing_end = config.crossing_end()?;
        let steps = config.step_count()?;
        let mut sim = Simulation {
            current: Snapshot {
                sys: base.clone(),
                wheel: None,
            },
            base,
            crossing_end,
            steps,
            step_index: 0,
            state: State::at_rest(0, 0.0),
            config,
        };
        sim.current = sim.snapshot(0.0)?;
        let sys = &sim.current.sys;
        let zero = DVector::zeros(sys.size());
        let acc = newmark::initial_acceleration(&sys.m, &sys.c, &sys.k, &sys.f, &zero, &zero)
            .map_err(|e| step_error(0, 0.0, e))?;
        sim.state = State {
            u: zero.clone(),
            v: zero,
            acc,
            t: 0.0,
        };
        Ok(sim)
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    pub fn state(&self) -> &State {
        &self.state
    }

    /// Coupled system at the current time.
    pub fn system(&self) -> &GlobalSystem {
        &self.current.sys
    }

    /// Rail-bridge system without vehicle, supports applied.
    pub fn base_system(&self) -> &GlobalSystem {
        &self.base
    }

    pub fn total_steps(&self) -> usize {
        self.steps
    }

    pub fn steps_taken(&self) -> usize {
        self.step_index
    }

    pub fn is_finished(&self) -> bool {
        self.step_index >= self.steps
    }

    fn time_of(&self, i: usize) -> f64 {
        i as f64 * self.config.newmark.dt
    }

    fn snapshot(&self, t: f64) -> Result<Snapshot> {
        let cfg = &self.config;
        let span = cfg.mesh.span();
        let x = vehicle::position(&cfg.vehicle, t, cfg.x0);
        let on_span = t <= self.crossing_end + 1e-9 * cfg.newmark.dt && x <= span * (1.0 + 1e-12);
        if !on_span {
            let blocks = CouplingBlocks::departed(&cfg.vehicle);
            let loc = vehicle::locate(span, cfg.mesh.l, cfg.mesh.n)?;
            let sys = assembly::scatter_vehicle(&self.base, &blocks, &loc)?;
            return Ok(Snapshot { sys, wheel: None });
        }
        let x = x.min(span);
        let loc = vehicle::locate(x, cfg.mesh.l, cfg.mesh.n)?;
        let irr = cfg.profile.eval(x)?;
        let v_t = cfg.vehicle.speed(t);
        let blocks = coupling::build(&cfg.vehicle, &loc, cfg.mesh.l, &irr, v_t, cfg.gravity)?;
        let sys = assembly::scatter_vehicle(&self.base, &blocks, &loc)?;
        let inputs = ContactInputs {
            params: cfg.vehicle,
            x,
            irr,
            v_t,
            gravity: cfg.gravity,
        };
        Ok(Snapshot {
            sys,
            wheel: Some((loc, inputs)),
        })
    }

    /// Takes one step. Returns `false` once the run is complete.
    pub fn advance(&mut self) -> Result<bool> {
        if self.is_finished() {
            return Ok(false);
        }
        let i = self.step_index + 1;
        let t_next = self.time_of(i);
        let wrap = |e| step_error(i, t_next, e);

        let next = self.snapshot(t_next).map_err(wrap)?;
        let cur = &self.current.sys;
        let df = &next.sys.f - &cur.f;
        let mut state =
            newmark::step(&cur.m, &cur.c, &cur.k, &df, &self.state, &self.config.newmark).map_err(wrap)?;
        state.t = t_next;
        if self.config.acceleration_update == AccelerationUpdate::Equilibrium {
            let s = &next.sys;
            state.acc = newmark::recompute_acceleration(&s.m, &s.c, &s.k, &s.f, &state.u, &state.v)
                .map_err(wrap)?;
        }
        if !state.u.iter().chain(state.v.iter()).chain(state.acc.iter()).all(|v| v.is_finite()) {
            return Err(wrap(Error::NonFinite("state")));
        }
        self.state = state;
        self.current = next;
        self.step_index = i;
        Ok(true)
    }

    /// Value of `probe` at the current time.
    pub fn probe(&self, probe: &Probe) -> Result<f64> {
        let sys = &self.current.sys;
        let st = &self.state;
        if probe.quantity == Quantity::ContactForce {
            return match &self.current.wheel {
                Some((_, inputs)) => contact_force(st, sys, inputs),
                None => Ok(0.0),
            };
        }
        let field = match probe.quantity {
            Quantity::Displacement => &st.u,
            Quantity::Velocity => &st.v,
            _ => &st.acc,
        };
        let beam = match probe.target {
            Target::Body => return Ok(field[0]),
            Target::Bridge => Beam::Bridge,
            Target::Rail => Beam::Rail,
        };
        let x = match (probe.x, &self.current.wheel) {
            (Some(x), _) => x,
            (None, Some((loc, _))) => loc.x,
            (None, None) => return Ok(0.0),
        };
        Ok(sys.field_at(field, beam, x)?.0)
    }

    fn record(&self, history: &mut TimeHistory) -> Result<()> {
        history.times.push(self.state.t);
        for (col, probe) in history.columns.iter_mut().zip(&self.config.probes) {
            col.values.push(self.probe(probe)?);
        }
        Ok(())
    }

    /// Runs the remaining steps, recording every probe at every step
    /// (including the current instant).
    pub fn run_to_end(mut self) -> Result<TimeHistory> {
        let mut history = TimeHistory {
            times: Vec::with_capacity(self.steps + 1),
            columns: self
                .config
                .probes
                .iter()
                .map(|p| Series {
                    name: p.name(),
                    unit: p.quantity.unit(),
                    values: Vec::with_capacity(self.steps + 1),
                })
                .collect(),
        };
        self.record(&mut history)?;
        while self.advance()? {
            self.record(&mut history)?;
        }
        Ok(history)
    }
}

fn step_error(step: usize, time: f64, source: Error) -> Error {
    Error::Step {
        step,
        time,
        source: Box::new(source),
    }
}

/// Runs a full crossing.
pub fn run(config: SimConfig) -> Result<TimeHistory> {
    Simulation::new(config)?.run_to_end()
}
