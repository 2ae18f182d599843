//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fail.
//!
//! The reference solutions here are written independently of the library's
//! own `oracle` module.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use nalgebra::{DMatrix, DVector};
use trackbridge_core::assembly::{
    apply_constraints, assemble_beam, assemble_rail_bridge, connectivity, element_matrices, BeamSection, Beam, Mesh,
};
use trackbridge_core::hermite::element_blocks;
use trackbridge_core::linalg::{max_asymmetry, natural_frequencies, solve};
use trackbridge_core::newmark::{self, NewmarkParams, State};
use trackbridge_core::sim::{self, Probe, Quantity, SimConfig};
use trackbridge_core::vehicle::VehicleParams;

const G: f64 = 9.81;
const SPAN: f64 = 30.0;
const V: f64 = 27.78;
const M_BODY: f64 = 5750.0;
const K_SUSP: f64 = 1.595e6;
const EI_B: f64 = 2.87e9 * 2.90;
const M_B: f64 = 2.303e3;

fn bridge() -> BeamSection {
    BeamSection {
        rigidity: EI_B,
        mass_per_length: M_B,
        damping_per_length: 0.0,
    }
}

fn mesh(n: usize) -> Mesh {
    Mesh {
        n,
        l: SPAN / n as f64,
        rail: BeamSection {
            rigidity: 2.06e11 * 1e-10,
            mass_per_length: 1e-7,
            damping_per_length: 0.0,
        },
        bridge: bridge(),
        k_bed: 1e13,
        c_bed: 0.0,
    }
}

fn vehicle(k_susp: f64) -> VehicleParams {
    VehicleParams {
        m_body: M_BODY,
        m_wheel: 0.0,
        k_susp,
        c_susp: 0.0,
        v: V,
        a: 0.0,
    }
}

fn omega(i: usize) -> f64 {
    let k = i as f64 * PI / SPAN;
    k * k * (EI_B / M_B).sqrt()
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(checks: &[(bool, String)]) -> Outcome {
    Outcome {
        passed: checks.iter().all(|c| c.0),
        detail: checks
            .iter()
            .map(|(ok, s)| format!("{}{s}", if *ok { "" } else { "[x] " }))
            .collect::<Vec<_>>()
            .join("; "),
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn static_exactness() -> Outcome {
    let ((w, expected), elapsed) = timed(|| {
        let sys = apply_constraints(&assemble_beam(&bridge(), 10, 3.0).unwrap()).unwrap();
        let mut f = DVector::zeros(sys.size());
        f[sys.index_of(10).unwrap()] = 1.0;
        let u = solve(&sys.k, &f, "stiffness").unwrap();
        let w = sys.field_at(&u, Beam::Bridge, 15.0).unwrap().0;
        (w, SPAN.powi(3) / (48.0 * EI_B))
    });
    let rel = (w / expected - 1.0).abs();
    outcome(&[
        ((expected - 6.758e-8).abs() < 5e-11, format!("L³/48EI = {expected:.4e} m/N")),
        (rel < 1e-9, format!("w = {w:.10e}, rel err {rel:.1e} < 1e-9")),
        (elapsed.as_secs_f64() < 0.1, format!("{:.1} ms < 100 ms", elapsed.as_secs_f64() * 1e3)),
    ])
}

fn modal_accuracy() -> Outcome {
    let sys = apply_constraints(&assemble_beam(&bridge(), 10, 3.0).unwrap()).unwrap();
    let f = natural_frequencies(&sys.m, &sys.k).unwrap();
    let f1 = PI * PI * (EI_B / (M_B * SPAN.powi(4))).sqrt() / (2.0 * PI);
    let e1 = (f[0] - f1).abs() / f1;
    let e2 = (f[1] - 4.0 * f1).abs() / (4.0 * f1);
    outcome(&[
        ((f1 - 3.318).abs() < 5e-4, format!("analytic f1 = {f1:.4} Hz")),
        (e1 < 1e-3, format!("f1 = {:.5} Hz, rel err {e1:.1e} < 1e-3", f[0])),
        (e2 < 5e-3, format!("f2 = {:.4} Hz, rel err vs 4·f1 {e2:.1e} < 5e-3", f[1])),
    ])
}

/// Undamped modal response to a constant force crossing the span, advanced
/// with the exact solution for a linearly varying load over each substep.
struct Duhamel {
    modes: usize,
    q: Vec<f64>,
    qd: Vec<f64>,
    t: f64,
}

impl Duhamel {
    fn new(modes: usize) -> Self {
        Duhamel {
            modes,
            q: vec![0.0; modes],
            qd: vec![0.0; modes],
            t: 0.0,
        }
    }

    fn force(i: usize, p: f64, t: f64) -> f64 {
        let t_exit = SPAN / V;
        if t > t_exit {
            0.0
        } else {
            p * (i as f64 * PI * V * t / SPAN).sin()
        }
    }

    fn substep(&mut self, p: f64, t1: f64) {
        let t0 = self.t;
        let h = t1 - t0;
        let modal_mass = 0.5 * M_B * SPAN;
        for i in 0..self.modes {
            let w = omega(i + 1);
            let k = modal_mass * w * w;
            let f0 = Self::force(i + 1, p, t0);
            // left limit at the exit instant so the kink sits on a breakpoint
            let f1 = Self::force(i + 1, p, t1.min(SPAN / V));
            let df = if t1 <= SPAN / V + 1e-15 { f1 - f0 } else { -f0 };
            let (s, c) = (w * h).sin_cos();
            let (q0, v0) = (self.q[i], self.qd[i]);
            self.q[i] = q0 * c + v0 / w * s + f0 / k * (1.0 - c) + df / k * (1.0 - s / (w * h));
            self.qd[i] = -q0 * w * s + v0 * c + f0 / k * w * s + df / (k * h) * (1.0 - c);
        }
        self.t = t1;
    }

    /// Advances to `t_end` in substeps no longer than `h`, with a breakpoint
    /// at the exit instant.
    fn advance_to(&mut self, p: f64, t_end: f64, h: f64) {
        let t_exit = SPAN / V;
        let count = ((t_end - self.t) / h).round().max(1.0) as usize;
        let start = self.t;
        for s in 1..=count {
            let target = start + (t_end - start) * s as f64 / count as f64;
            if self.t < t_exit && target > t_exit {
                self.substep(p, t_exit);
                self.substep(0.0, target);
            } else {
                self.substep(p, target);
            }
        }
    }

    fn midspan(&self) -> f64 {
        (0..self.modes).map(|i| ((i + 1) as f64 * PI * 0.5).sin() * self.q[i]).sum()
    }
}

fn moving_force_oracle() -> Outcome {
    let mut cfg = SimConfig::new(mesh(10), vehicle(0.0));
    cfg.probes = vec![Probe::bridge(15.0, Quantity::Displacement)];
    let (hist, elapsed) = timed(|| sim::run(cfg).unwrap());
    let p = M_BODY * G;
    let mut oracle = Duhamel::new(60);
    let mut peak: f64 = 0.0;
    let mut dev: f64 = 0.0;
    for (t, w) in hist.times.iter().zip(&hist.columns[0].values) {
        if *t > 0.0 {
            oracle.advance_to(p, *t, 1e-4);
        }
        let w_ref = oracle.midspan();
        peak = peak.max(w_ref.abs());
        dev = dev.max((w - w_ref).abs());
    }
    let rel = dev / peak;
    outcome(&[
        (rel <= 0.01, format!("max |Δw| / peak = {:.3}% <= 1% (60 modes, h = 1e-4 s)", rel * 100.0)),
        (elapsed.as_secs_f64() < 1.0, format!("{:.0} ms < 1 s", elapsed.as_secs_f64() * 1e3)),
    ])
}

/// Peak |midspan displacement|, |midspan acceleration|, |body acceleration|
/// of a sprung mass on a modal beam, RK4 at `h`, sampled at multiples of
/// `sample` up to the exit instant.
fn sprung_reference(modes: usize, h: f64, sample: f64) -> [f64; 3] {
    let t_exit = SPAN / V;
    let mm = 0.5 * M_B * SPAN;
    let n = 2 * modes + 2;
    // z = [body disp, body vel, q_1.., qdot_1..]
    let deriv = |t: f64, z: &[f64]| -> (Vec<f64>, f64) {
        let x = V * t;
        let mut w = 0.0;
        for i in 0..modes {
            w += (((i + 1) as f64) * PI * x / SPAN).sin() * z[2 + i];
        }
        let spring = K_SUSP * (z[0] - w);
        let mut d = vec![0.0; n];
        d[0] = z[1];
        d[1] = -spring / M_BODY;
        let load = M_BODY * G + spring;
        let mut acc_mid = 0.0;
        for i in 0..modes {
            let phi = (((i + 1) as f64) * PI * x / SPAN).sin();
            let w2 = omega(i + 1).powi(2);
            d[2 + i] = z[2 + modes + i];
            d[2 + modes + i] = load * phi / mm - w2 * z[2 + i];
            acc_mid += (((i + 1) as f64) * PI * 0.5).sin() * d[2 + modes + i];
        }
        (d, acc_mid)
    };
    let per_sample = (sample / h).round() as usize;
    let mut z = vec![0.0; n];
    let mut peaks = [0.0f64; 3];
    let mut k = 0usize;
    loop {
        let t = k as f64 * h;
        if k.is_multiple_of(per_sample) {
            let (d, acc_mid) = deriv(t, &z);
            let w_mid: f64 = (0..modes).map(|i| (((i + 1) as f64) * PI * 0.5).sin() * z[2 + i]).sum();
            peaks[0] = peaks[0].max(w_mid.abs());
            peaks[1] = peaks[1].max(acc_mid.abs());
            peaks[2] = peaks[2].max(d[1].abs());
        }
        if t + h > t_exit + 1e-12 {
            break;
        }
        let add = |a: &[f64], b: &[f64], s: f64| a.iter().zip(b).map(|(x, y)| x + s * y).collect::<Vec<_>>();
        let (k1, _) = deriv(t, &z);
        let (k2, _) = deriv(t + 0.5 * h, &add(&z, &k1, 0.5 * h));
        let (k3, _) = deriv(t + 0.5 * h, &add(&z, &k2, 0.5 * h));
        let (k4, _) = deriv(t + h, &add(&z, &k3, h));
        for j in 0..n {
            z[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        k += 1;
    }
    peaks
}

fn sprung_benchmark() -> Outcome {
    let cfg = SimConfig::new(mesh(10), vehicle(K_SUSP));
    let t_exit = cfg.crossing_end().unwrap();
    let (hist, elapsed) = timed(|| sim::run(cfg.clone()).unwrap());
    let on_span = hist.times.iter().take_while(|t| **t <= t_exit).count();
    let col = |name: &str| &hist.column(name).unwrap()[..on_span];
    let w = col("bridge.displacement@15");
    let peak_of = |v: &[f64]| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let fem = [peak_of(w), peak_of(col("bridge.acceleration@15")), peak_of(col("body.acceleration"))];
    let refs = sprung_reference(10, 1e-4, cfg.newmark.dt);

    let mut checks = Vec::new();
    for (i, label) in ["midspan disp", "midspan acc", "body acc"].iter().enumerate() {
        let rel = (fem[i] - refs[i]).abs() / refs[i];
        checks.push((rel <= 0.03, format!("{label} {:.4e} vs {:.4e} ({:.2}%)", fem[i], refs[i], rel * 100.0)));
    }

    let (i_peak, w_peak) = w.iter().enumerate().fold((0, 0.0), |b, (i, v)| if *v > b.1 { (i, *v) } else { b });
    let t_peak = hist.times[i_peak];
    checks.push((
        t_peak > t_exit / 3.0 && t_peak < 2.0 * t_exit / 3.0,
        format!("peak at {t_peak:.3} s in middle third of {t_exit:.3} s"),
    ));
    let w_min = w.iter().cloned().fold(f64::INFINITY, f64::min);
    checks.push((w_min >= -0.05 * w_peak, format!("single hump, min {:.1}% of peak", 100.0 * w_min / w_peak)));
    let w_exit = w[on_span - 1];
    checks.push((
        w_exit.abs() <= 0.25 * w_peak,
        format!("exit deflection {:.0}% of peak <= 25%", 100.0 * w_exit.abs() / w_peak),
    ));
    checks.push((
        hist.times.len() == 217 && elapsed.as_secs_f64() < 1.0,
        format!("{} steps in {:.0} ms < 1 s", hist.times.len() - 1, elapsed.as_secs_f64() * 1e3),
    ));
    outcome(&checks)
}

fn sdof(
    omega: f64,
    dt: f64,
    steps: usize,
    beta: f64,
) -> State {
    let m = DMatrix::from_element(1, 1, 1.0);
    let c = DMatrix::zeros(1, 1);
    let k = DMatrix::from_element(1, 1, omega * omega);
    let df = DVector::zeros(1);
    let p = NewmarkParams::new(beta, dt).unwrap();
    let mut s = State {
        u: DVector::from_element(1, 1.0),
        v: DVector::zeros(1),
        acc: DVector::from_element(1, -omega * omega),
        t: 0.0,
    };
    for _ in 0..steps {
        s = newmark::step(&m, &c, &k, &df, &s, &p).unwrap();
    }
    s
}

fn amplitude(s: &State, omega: f64) -> f64 {
    (s.u[0].powi(2) + (s.v[0] / omega).powi(2)).sqrt()
}

fn newmark_properties() -> Outcome {
    let w = 2.0 * PI;
    let a = amplitude(&sdof(w, 0.01, 10_000, 0.25), w);
    // t = 1.25 s sits on a zero crossing, where phase error shows at first order
    let err = |dt: f64| {
        let steps = (1.25 / dt).round() as usize;
        (sdof(w, dt, steps, 0.25).u[0] - (w * steps as f64 * dt).cos()).abs()
    };
    let ratio = err(0.01) / err(0.005);
    let worst = [0.5, 1.0, 3.0, 10.0, 30.0, 100.0]
        .iter()
        .map(|od| amplitude(&sdof(w, od / w, 1000, 0.25), w))
        .fold(0.0f64, f64::max);
    outcome(&[
        ((a - 1.0).abs() < 1e-9, format!("|A - 1| = {:.1e} after 1e4 steps", (a - 1.0).abs())),
        ((3.6..=4.4).contains(&ratio), format!("halving ratio {ratio:.3} in [3.6, 4.4]")),
        (worst <= 1.0 + 1e-9, format!("max amplitude {worst:.12} for Ω·dt <= 100")),
    ])
}

fn assembly_properties() -> Outcome {
    let mut m = mesh(10);
    m.c_bed = 3.7e4;
    m.rail.damping_per_length = 11.0;
    m.bridge.damping_per_length = 250.0;
    let full = assemble_rail_bridge(&m).unwrap();
    let red = apply_constraints(&full).unwrap();
    let asym = [&full.m, &full.c, &full.k, &red.m, &red.c, &red.k]
        .iter()
        .map(|a| max_asymmetry(a))
        .fold(0.0, f64::max);

    // brute force n = 2: every global entry is the sum over elements whose
    // DOF list contains both indices
    let mut m2 = mesh(2);
    m2.c_bed = 3.7e4;
    let sys = assemble_rail_bridge(&m2).unwrap();
    let (me, ce, ke) = element_matrices(&m2, &element_blocks(m2.l).unwrap());
    let dofs = |e: usize| -> [usize; 8] {
        let r = 2 * e;
        [r, r + 1, r + 2, r + 3, 6 + r, 7 + r, 8 + r, 9 + r]
    };
    let mut exact = sys.size() == 12;
    for (global, local) in [(&sys.m, &me), (&sys.c, &ce), (&sys.k, &ke)] {
        for gi in 0..12 {
            for gj in 0..12 {
                let mut v = 0.0;
                for e in 0..2 {
                    let d = dofs(e);
                    if let (Some(a), Some(b)) = (d.iter().position(|&x| x == gi), d.iter().position(|&x| x == gj)) {
                        v += local[(a, b)];
                    }
                }
                exact &= global[(gi, gj)] == v;
            }
        }
    }

    let vc_rows: [[usize; 8]; 4] = [
        [1, 2, 3, 4, 23, 24, 25, 26],
        [3, 4, 5, 6, 25, 26, 27, 28],
        [5, 6, 7, 8, 27, 28, 29, 30],
        [7, 8, 9, 10, 29, 30, 31, 32],
    ];
    let vc = connectivity(10);
    outcome(&[
        (asym == 0.0, format!("max asymmetry {asym:e}")),
        (exact, "n = 2 equals brute force exactly".into()),
        (vc[..4] == vc_rows, "connectivity(10) rows 1-4 match".into()),
    ])
}

fn convergence() -> Outcome {
    let peak = |n: usize, dt: f64| {
        let mut cfg = SimConfig::new(mesh(n), vehicle(K_SUSP));
        cfg.newmark.dt = dt;
        cfg.probes = vec![Probe::bridge(15.0, Quantity::Displacement)];
        sim::run(cfg).unwrap().peak("bridge.displacement@15").unwrap().1.abs()
    };
    let base = peak(10, 0.005);
    let dn = (peak(20, 0.005) - base).abs() / base;
    let dt = (peak(10, 0.0025) - base).abs() / base;
    outcome(&[
        (dn < 0.005, format!("n 10→20: {:.3}% < 0.5%", dn * 100.0)),
        (dt < 0.002, format!("dt 0.005→0.0025: {:.3}% < 0.2%", dt * 100.0)),
    ])
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("static exactness", static_exactness),
        ("modal accuracy", modal_accuracy),
        ("moving-force oracle", moving_force_oracle),
        ("sprung-mass benchmark", sprung_benchmark),
        ("Newmark properties", newmark_properties),
        ("assembly properties", assembly_properties),
        ("discretization convergence", convergence),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        if !o.passed {
            failed += 1;
        }
        println!("{} {}. {name}: {}", if o.passed { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
