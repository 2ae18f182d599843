//! Modal-superposition reference solutions for a simply supported beam.
//!
//! Mode `i` has shape `sin(iπx/L)`, circular frequency
//! `ωᵢ = (iπ/L)²·√(EI/m)` and modal mass `mL/2`.

use std::f64::consts::PI;

use trackbridge_core::Error;

/// Uniform simply supported beam.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModalBeam {
    pub rigidity: f64,
    pub mass_per_length: f64,
    pub span: f64,
}

impl ModalBeam {
    pub fn omega(&self, mode: usize) -> f64 {
        let k = mode as f64 * PI / self.span;
        k * k * (self.rigidity / self.mass_per_length).sqrt()
    }

    /// First natural frequency in Hz.
    pub fn first_frequency(&self) -> f64 {
        self.omega(1) / (2.0 * PI)
    }

    /// Static midspan deflection under a midspan point load `p`.
    pub fn static_midspan(&self, p: f64) -> f64 {
        p * self.span.powi(3) / (48.0 * self.rigidity)
    }

    fn shape(&self, mode: usize, x: f64) -> f64 {
        (mode as f64 * PI * x / self.span).sin()
    }

    fn shape_slope(&self, mode: usize, x: f64) -> f64 {
        let k = mode as f64 * PI / self.span;
        k * (k * x).cos()
    }

    fn modal_mass(&self) -> f64 {
        0.5 * self.mass_per_length * self.span
    }
}

/// Closed-form response to a constant force `p` crossing at speed `v`,
/// entering at `t = 0`, free vibration after it leaves. Returns
/// displacement and acceleration at abscissa `x`.
pub fn moving_force(beam: &ModalBeam, p: f64, v: f64, modes: usize, x: f64, t: f64) -> (f64, f64) {
    let t_exit = beam.span / v;
    let scale = p / beam.modal_mass();
    let (mut w, mut a) = (0.0, 0.0);
    for i in 1..=modes {
        let om = beam.omega(i);
        let big = i as f64 * PI * v / beam.span;
        let denom = om * om - big * big;
        let forced = |t: f64| {
            let q = scale * ((big * t).sin() - big / om * (om * t).sin()) / denom;
            let qd = scale * big * ((big * t).cos() - (om * t).cos()) / denom;
            let qdd = scale * (-big * big * (big * t).sin() + big * om * (om * t).sin()) / denom;
            (q, qd, qdd)
        };
        let (q, qdd) = if t <= t_exit {
            let (q, _, qdd) = forced(t);
            (q, qdd)
        } else {
            let (q0, qd0, _) = forced(t_exit);
            let tau = t - t_exit;
            let q = q0 * (om * tau).cos() + qd0 / om * (om * tau).sin();
            (q, -om * om * q)
        };
        let phi = beam.shape(i, x);
        w += phi * q;
        a += phi * qdd;
    }
    (w, a)
}

/// One sample of the sprung-mass reference solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SprungSample {
    pub t: f64,
    pub midspan_displacement: f64,
    pub midspan_acceleration: f64,
    pub body_acceleration: f64,
}

/// Sprung mass (no wheel mass) crossing a modal beam on a smooth track.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SprungMass {
    pub m_body: f64,
    pub k_susp: f64,
    pub c_susp: f64,
    pub v: f64,
    pub gravity: f64,
}

/// Integrates the body DOF plus `modes` beam modes with classical RK4 at
/// step `h`, sampling every `every` steps until the wheel leaves.
///
/// `h` must resolve the highest mode: `h·ω_max ≤ 2` keeps RK4 stable.
pub fn sprung_mass(
    beam: &ModalBeam,
    vehicle: &SprungMass,
    modes: usize,
    h: f64,
    every: usize,
) -> Result<Vec<SprungSample>, Error> {
    if h.is_nan() || h <= 0.0 || every == 0 || modes == 0 {
        return Err(Error::Config("sprung-mass oracle needs h > 0, every >= 1, modes >= 1".into()));
    }
    if h * beam.omega(modes) > 2.0 {
        return Err(Error::Config(format!(
            "sprung-mass oracle step {h} is unstable for mode {modes}, need h <= {}",
            2.0 / beam.omega(modes)
        )));
    }
    let t_exit = beam.span / vehicle.v;
    let steps = (t_exit / h).floor() as usize;
    let mm = beam.modal_mass();
    let omegas: Vec<f64> = (1..=modes).map(|i| beam.omega(i)).collect();
    let mid: Vec<f64> = (1..=modes).map(|i| beam.shape(i, 0.5 * beam.span)).collect();

    // y = [q1, q1', a_1..a_n, a_1'..a_n']
    let dim = 2 + 2 * modes;
    let rhs = |t: f64, y: &[f64], out: &mut [f64]| -> (f64, f64) {
        let x = (vehicle.v * t).min(beam.span);
        let (mut w, mut wd) = (0.0, 0.0);
        for i in 0..modes {
            let phi = beam.shape(i + 1, x);
            let dphi = beam.shape_slope(i + 1, x);
            w += phi * y[2 + i];
            wd += phi * y[2 + modes + i] + vehicle.v * dphi * y[2 + i];
        }
        let spring = vehicle.k_susp * (y[0] - w) + vehicle.c_susp * (y[1] - wd);
        let contact = vehicle.m_body * vehicle.gravity + spring;
        out[0] = y[1];
        out[1] = -spring / vehicle.m_body;
        let mut acc_mid = 0.0;
        for i in 0..modes {
            let phi = beam.shape(i + 1, x);
            let qdd = phi * contact / mm - omegas[i] * omegas[i] * y[2 + i];
            out[2 + i] = y[2 + modes + i];
            out[2 + modes + i] = qdd;
            acc_mid += mid[i] * qdd;
        }
        (acc_mid, out[1])
    };

    let mut y = vec![0.0; dim];
    let (mut k1, mut k2, mut k3, mut k4, mut tmp) =
        (vec![0.0; dim], vec![0.0; dim], vec![0.0; dim], vec![0.0; dim], vec![0.0; dim]);
    let mut out = Vec::with_capacity(steps / every + 2);
    let sample = |t: f64, y: &[f64], scratch: &mut [f64]| {
        let (acc_mid, acc_body) = rhs(t, y, scratch);
        let w_mid: f64 = (0..modes).map(|i| mid[i] * y[2 + i]).sum();
        SprungSample {
            t,
            midspan_displacement: w_mid,
            midspan_acceleration: acc_mid,
            body_acceleration: acc_body,
        }
    };
    out.push(sample(0.0, &y, &mut tmp));
    for s in 0..steps {
        let t = s as f64 * h;
        rhs(t, &y, &mut k1);
        for j in 0..dim {
            tmp[j] = y[j] + 0.5 * h * k1[j];
        }
        rhs(t + 0.5 * h, &tmp, &mut k2);
        for j in 0..dim {
            tmp[j] = y[j] + 0.5 * h * k2[j];
        }
        rhs(t + 0.5 * h, &tmp, &mut k3);
        for j in 0..dim {
            tmp[j] = y[j] + h * k3[j];
        }
        rhs(t + h, &tmp, &mut k4);
        for j in 0..dim {
            y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        if (s + 1) % every == 0 {
            out.push(sample(t + h, &y, &mut tmp));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn benchmark_beam() -> ModalBeam {
        ModalBeam {
            rigidity: 2.87e9 * 2.90,
            mass_per_length: 2.303e3,
            span: 30.0,
        }
    }

    #[test]
    fn first_frequency_and_static_scale() {
        let b = benchmark_beam();
        assert!((b.first_frequency() - 3.318).abs() < 1e-3);
        let d = b.static_midspan(5750.0 * 9.81);
        assert!((d - 3.813e-3).abs() < 1e-6, "{d}");
    }

    #[test]
    fn slow_force_is_quasi_static() {
        // v → 0: midspan deflection under a force at midspan → PL³/48EI
        let b = benchmark_beam();
        let v = 0.01;
        let t = 15.0 / v;
        let (w, _) = moving_force(&b, 1.0, v, 99, 15.0, t);
        assert!((w - b.static_midspan(1.0)).abs() < 2e-3 * b.static_midspan(1.0));
    }

    #[test]
    fn unstable_step_is_rejected() {
        let veh = SprungMass {
            m_body: 5750.0,
            k_susp: 1.595e6,
            c_susp: 0.0,
            v: 27.78,
            gravity: 9.81,
        };
        assert!(sprung_mass(&benchmark_beam(), &veh, 40, 1e-4, 1).is_err());
        assert!(sprung_mass(&benchmark_beam(), &veh, 10, 1e-4, 1).is_ok());
    }

    #[test]
    fn stiff_suspension_tends_to_moving_mass_free_force() {
        // k = 0: body coasts and the beam sees a constant force
        let b = benchmark_beam();
        let veh = SprungMass {
            m_body: 5750.0,
            k_susp: 0.0,
            c_susp: 0.0,
            v: 27.78,
            gravity: 9.81,
        };
        let hist = sprung_mass(&b, &veh, 10, 1e-4, 50).unwrap();
        let p = 5750.0 * 9.81;
        for s in hist.iter().step_by(7) {
            let (w, _) = moving_force(&b, p, 27.78, 10, 15.0, s.t);
            assert!((s.midspan_displacement - w).abs() < 1e-9, "{} vs {}", s.midspan_displacement, w);
        }
    }
}
