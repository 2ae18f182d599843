//! Built-in self checks against closed-form results.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use trackbridge_core::assembly::{self, Beam, Mesh};
use trackbridge_core::linalg::{max_asymmetry, natural_frequencies, solve};
use trackbridge_core::newmark::{self, NewmarkParams, State};
use trackbridge_core::sim::{self, Probe, Quantity, SimConfig};
use trackbridge_core::Result;

use crate::oracle::{self, ModalBeam};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub measured: f64,
    pub expected: f64,
    /// What `measured` is compared with, e.g. `|ratio - 1| < 1e-9`.
    pub criterion: String,
    pub passed: bool,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(
            f,
            "{tag} {:<14} measured {:.10e}  expected {:.10e}  ({})",
            self.name, self.measured, self.expected, self.criterion
        )
    }
}

fn bridge_modal(mesh: &Mesh) -> ModalBeam {
    ModalBeam {
        rigidity: mesh.bridge.rigidity,
        mass_per_length: mesh.bridge.mass_per_length,
        span: mesh.span(),
    }
}

/// Unit load at the midspan node of the bare bridge.
pub fn static_check(mesh: &Mesh) -> Result<CheckResult> {
    let sys = assembly::apply_constraints(&assembly::assemble_beam(&mesh.bridge, mesh.n, mesh.l)?)?;
    let span = mesh.span();
    let mut f = DVector::zeros(sys.size());
    if !mesh.n.is_multiple_of(2) {
        return Err(trackbridge_core::Error::domain("elements", mesh.n as f64, "even, for a midspan node"));
    }
    let node = mesh.n / 2;
    let dof = sys.index_of(2 * node).ok_or(trackbridge_core::Error::Singular("midspan node"))?;
    f[dof] = 1.0;
    let u = solve(&sys.k, &f, "stiffness")?;
    let w = sys.field_at(&u, Beam::Bridge, 0.5 * span)?.0;
    let expected = bridge_modal(mesh).static_midspan(1.0);
    let ratio = w / expected;
    Ok(CheckResult {
        name: "static",
        measured: w,
        expected,
        criterion: format!("|ratio - 1| = {:.2e} < 1e-9", (ratio - 1.0).abs()),
        passed: (ratio - 1.0).abs() < 1e-9,
    })
}

/// First two bare-bridge frequencies against `(iπ/L)²√(EI/m)`.
pub fn modal_checks(mesh: &Mesh) -> Result<Vec<CheckResult>> {
    let sys = assembly::apply_constraints(&assembly::assemble_beam(&mesh.bridge, mesh.n, mesh.l)?)?;
    let f = natural_frequencies(&sys.m, &sys.k)?;
    let beam = bridge_modal(mesh);
    let f1 = beam.first_frequency();
    let e1 = (f[0] - f1).abs() / f1;
    let e2 = (f[1] - 4.0 * f1).abs() / (4.0 * f1);
    Ok(vec![
        CheckResult {
            name: "modal-1",
            measured: f[0],
            expected: f1,
            criterion: format!("relative error {e1:.2e} < 1e-3"),
            passed: e1 < 1e-3,
        },
        CheckResult {
            name: "modal-2",
            measured: f[1],
            expected: 4.0 * f1,
            criterion: format!("relative error {e2:.2e} < 5e-3"),
            passed: e2 < 5e-3,
        },
    ])
}

/// Weight of the body crossing without suspension dynamics, against the
/// closed-form modal solution with 50 modes.
pub fn moving_force_check(config: &SimConfig) -> Result<CheckResult> {
    let mut cfg = config.clone();
    cfg.vehicle.k_susp = 0.0;
    cfg.vehicle.c_susp = 0.0;
    cfg.vehicle.m_wheel = 0.0;
    cfg.vehicle.a = 0.0;
    cfg.x0 = 0.0;
    cfg.t_end = None;
    cfg.tail = 0.0;
    cfg.profile = trackbridge_core::irregularity::Profile::Smooth;
    let mid = 0.5 * cfg.mesh.span();
    cfg.probes = vec![Probe::bridge(mid, Quantity::Displacement)];
    let hist = sim::run(cfg.clone())?;
    let fem = &hist.columns[0].values;
    let beam = bridge_modal(&cfg.mesh);
    let p = cfg.vehicle.m_body * cfg.gravity;
    let mut peak: f64 = 0.0;
    let mut dev: f64 = 0.0;
    for (t, w) in hist.times.iter().zip(fem) {
        let (w_ref, _) = oracle::moving_force(&beam, p, cfg.vehicle.v, 50, mid, *t);
        peak = peak.max(w_ref.abs());
        dev = dev.max((w - w_ref).abs());
    }
    let rel = if peak > 0.0 { dev / peak } else { 0.0 };
    Ok(CheckResult {
        name: "moving-force",
        measured: dev,
        expected: peak,
        criterion: format!("max deviation / peak = {rel:.2e} <= 1e-2"),
        passed: rel <= 1e-2,
    })
}

/// Undamped unit oscillator at β = 1/4, 10⁴ steps of Ω·dt = 0.3.
pub fn newmark_check() -> Result<CheckResult> {
    let omega = 2.0 * std::f64::consts::PI;
    let m = DMatrix::from_element(1, 1, 1.0);
    let c = DMatrix::zeros(1, 1);
    let k = DMatrix::from_element(1, 1, omega * omega);
    let df = DVector::zeros(1);
    let p = NewmarkParams::new(0.25, 0.3 / omega)?;
    let mut s = State {
        u: DVector::from_element(1, 1.0),
        v: DVector::zeros(1),
        acc: DVector::from_element(1, -omega * omega),
        t: 0.0,
    };
    let amplitude = |s: &State| (s.u[0].powi(2) + (s.v[0] / omega).powi(2)).sqrt();
    for _ in 0..10_000 {
        s = newmark::step(&m, &c, &k, &df, &s, &p)?;
    }
    let a = amplitude(&s);
    Ok(CheckResult {
        name: "newmark-sdof",
        measured: a,
        expected: 1.0,
        criterion: format!("|amplitude - 1| = {:.2e} < 1e-9", (a - 1.0).abs()),
        passed: (a - 1.0).abs() < 1e-9,
    })
}

/// Exact symmetry of the assembled rail-bridge matrices.
pub fn symmetry_check(mesh: &Mesh) -> Result<CheckResult> {
    let sys = assembly::apply_constraints(&assembly::assemble_rail_bridge(mesh)?)?;
    let worst = [&sys.m, &sys.c, &sys.k].iter().map(|a| max_asymmetry(a)).fold(0.0, f64::max);
    Ok(CheckResult {
        name: "symmetry",
        measured: worst,
        expected: 0.0,
        criterion: "max |A - Aᵀ| over M, C, K = 0".into(),
        passed: worst == 0.0,
    })
}

/// Runs every check on `config`.
pub fn run_all(config: &SimConfig) -> Result<Vec<CheckResult>> {
    let mut out = vec![static_check(&config.mesh)?];
    out.extend(modal_checks(&config.mesh)?);
    out.push(moving_force_check(config)?);
    out.push(newmark_check()?);
    out.push(symmetry_check(&config.mesh)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmark;

    #[test]
    fn all_checks_pass_on_benchmark() {
        let cfg = benchmark::config().sim_config().unwrap();
        for c in run_all(&cfg).unwrap() {
            assert!(c.passed, "{c}");
        }
    }
}
