//! Single-axle sprung-mass vehicle and wheel localization on the rail mesh.

use crate::error::ensure;
use crate::Result;

/// Body mass on a suspension spring-damper over a wheel that stays in
/// contact with the rail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VehicleParams {
    /// Sprung body mass, kg.
    pub m_body: f64,
    /// Wheel (unsprung) mass, kg.
    pub m_wheel: f64,
    /// Suspension stiffness, N/m.
    pub k_susp: f64,
    /// Suspension damping, N·s/m.
    pub c_susp: f64,
    /// Entry speed, m/s.
    pub v: f64,
    /// Longitudinal acceleration, m/s².
    pub a: f64,
}

impl VehicleParams {
    pub fn validate(&self) -> Result<()> {
        ensure(self.m_body > 0.0 && self.m_body.is_finite(), "m_body", self.m_body, "m_body > 0")?;
        ensure(self.m_wheel >= 0.0 && self.m_wheel.is_finite(), "m_wheel", self.m_wheel, "m_wheel >= 0")?;
        ensure(self.k_susp >= 0.0 && self.k_susp.is_finite(), "k_susp", self.k_susp, "k_susp >= 0")?;
        ensure(self.c_susp >= 0.0 && self.c_susp.is_finite(), "c_susp", self.c_susp, "c_susp >= 0")?;
        ensure(self.v > 0.0 && self.v.is_finite(), "v", self.v, "v > 0")?;
        ensure(self.a.is_finite(), "a", self.a, "finite")?;
        Ok(())
    }

    /// Instantaneous speed `v + a·t`.
    pub fn speed(&self, t: f64) -> f64 {
        self.v + self.a * t
    }

    /// Time at which the wheel has travelled `distance` from its entry point,
    /// or `None` if it never gets there.
    pub fn time_to_travel(&self, distance: f64) -> Option<f64> {
        if distance <= 0.0 {
            return Some(0.0);
        }
        if self.a == 0.0 {
            return Some(distance / self.v);
        }
        // a/2 t² + v t − d = 0
        let disc = self.v * self.v + 2.0 * self.a * distance;
        if disc < 0.0 {
            return None;
        }
        Some(2.0 * distance / (self.v + libm::sqrt(disc)))
    }
}

/// Wheel abscissa at time `t` for entry offset `x0`: `x0 + v·t + a·t²/2`.
pub fn position(params: &VehicleParams, t: f64, x0: f64) -> f64 {
    x0 + params.v * t + 0.5 * params.a * t * t
}

/// Element (1-based `j`) and local coordinate under the wheel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WheelLocation {
    pub x: f64,
    pub j: usize,
    pub s: f64,
    pub xi: f64,
}

/// Finds the element containing `x` on a mesh of `n` elements of length `l`.
///
/// `x = n·l` belongs to the last element with `s = l`.
pub fn locate(x: f64, l: f64, n: usize) -> Result<WheelLocation> {
    ensure(l > 0.0 && l.is_finite(), "element length", l, "l > 0")?;
    ensure(n >= 1, "element count", n as f64, "n >= 1")?;
    let span = l * n as f64;
    ensure(x >= 0.0 && x <= span, "x", x, "0 <= x <= n*l")?;
    let j = ((libm::floor(x / l) as usize) + 1).min(n);
    let s = (x - (j - 1) as f64 * l).clamp(0.0, l);
    Ok(WheelLocation { x, j, s, xi: s / l })
}
