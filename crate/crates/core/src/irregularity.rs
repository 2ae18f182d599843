//! Vertical rail-surface irregularity `r(x)` and its first two derivatives.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::ensure;
use crate::{Error, Result};

/// `r`, `dr/dx` and `d²r/dx²` at one abscissa.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct IrregularitySample {
    pub r: f64,
    pub r1: f64,
    pub r2: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Profile {
    Smooth,
    /// `r = amplitude · sin(2πx/wavelength + phase)`
    Sinusoid {
        amplitude: f64,
        wavelength: f64,
        phase: f64,
    },
    Sampled(SampledProfile),
}

impl Profile {
    pub fn sinusoid(amplitude: f64, wavelength: f64, phase: f64) -> Result<Self> {
        ensure(amplitude.is_finite(), "amplitude", amplitude, "finite")?;
        ensure(phase.is_finite(), "phase", phase, "finite")?;
        ensure(
            wavelength > 0.0 && wavelength.is_finite(),
            "wavelength",
            wavelength,
            "wavelength > 0",
        )?;
        Ok(Profile::Sinusoid {
            amplitude,
            wavelength,
            phase,
        })
    }

    pub fn sampled(spacing: f64, ordinates: Vec<f64>) -> Result<Self> {
        SampledProfile::new(spacing, ordinates).map(Profile::Sampled)
    }

    /// Largest abscissa the profile is defined on (`None` means unbounded).
    pub fn extent(&self) -> Option<f64> {
        match self {
            Profile::Sampled(s) => Some(s.extent()),
            _ => None,
        }
    }

    pub fn eval(&self, x: f64) -> Result<IrregularitySample> {
        ensure(x >= 0.0 && x.is_finite(), "x", x, "0 <= x <= track length")?;
        match *self {
            Profile::Smooth => Ok(IrregularitySample::default()),
            Profile::Sinusoid {
                amplitude,
                wavelength,
                phase,
            } => {
                let k = 2.0 * PI / wavelength;
                let arg = k * x + phase;
                let (s, c) = (libm::sin(arg), libm::cos(arg));
                Ok(IrregularitySample {
                    r: amplitude * s,
                    r1: amplitude * k * c,
                    r2: -amplitude * k * k * s,
                })
            }
            Profile::Sampled(ref s) => s.eval(x),
        }
    }
}

/// Ordinates on a uniform grid starting at `x = 0`, interpolated by a natural
/// cubic spline.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledProfile {
    spacing: f64,
    ordinates: Vec<f64>,
    // spline second derivatives at the grid points
    curvature: Vec<f64>,
}

impl SampledProfile {
    pub fn new(spacing: f64, ordinates: Vec<f64>) -> Result<Self> {
        ensure(
            spacing > 0.0 && spacing.is_finite(),
            "grid spacing",
            spacing,
            "spacing > 0",
        )?;
        if ordinates.len() < 4 {
            return Err(Error::Config(alloc::format!(
                "sampled profile needs at least 4 ordinates, got {}",
                ordinates.len()
            )));
        }
        if !ordinates.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("profile ordinates"));
        }
        let curvature = natural_spline_curvature(spacing, &ordinates);
        Ok(SampledProfile {
            spacing,
            ordinates,
            curvature,
        })
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn ordinates(&self) -> &[f64] {
        &self.ordinates
    }

    pub fn extent(&self) -> f64 {
        self.spacing * (self.ordinates.len() - 1) as f64
    }

    pub fn eval(&self, x: f64) -> Result<IrregularitySample> {
        let end = self.extent();
        // the grid end is computed in floating point; accept a rounding-level overshoot
        ensure(
            x >= 0.0 && x <= end * (1.0 + 4.0 * f64::EPSILON),
            "x",
            x,
            "inside the sampled profile",
        )?;
        let h = self.spacing;
        let last = self.ordinates.len() - 2;
        let k = (libm::floor(x / h) as usize).min(last);
        let (y0, y1) = (self.ordinates[k], self.ordinates[k + 1]);
        let (m0, m1) = (self.curvature[k], self.curvature[k + 1]);
        let a = (k + 1) as f64 * h - x;
        let b = x - k as f64 * h;

        let r = m0 * a * a * a / (6.0 * h)
            + m1 * b * b * b / (6.0 * h)
            + (y0 - m0 * h * h / 6.0) * a / h
            + (y1 - m1 * h * h / 6.0) * b / h;
        let r1 = -m0 * a * a / (2.0 * h) + m1 * b * b / (2.0 * h) + (y1 - y0) / h
            - (m1 - m0) * h / 6.0;
        let r2 = (m0 * a + m1 * b) / h;
        Ok(IrregularitySample { r, r1, r2 })
    }
}

/// Second derivatives of the natural cubic spline through uniformly spaced
/// `y`, from the tridiagonal system `M[i-1] + 4M[i] + M[i+1] = 6Δ²y[i]/h²`.
fn natural_spline_curvature(h: f64, y: &[f64]) -> Vec<f64> {
    let n = y.len();
    let mut m = vec![0.0; n];
    let interior = n - 2;
    let mut diag = vec![4.0; interior];
    let mut rhs: Vec<f64> = (1..n - 1)
        .map(|i| 6.0 * (y[i + 1] - 2.0 * y[i] + y[i - 1]) / (h * h))
        .collect();
    // Thomas algorithm, unit off-diagonals
    for i in 1..interior {
        let w = 1.0 / diag[i - 1];
        diag[i] -= w;
        rhs[i] -= w * rhs[i - 1];
    }
    let mut next = 0.0;
    for i in (0..interior).rev() {
        let v = (rhs[i] - next) / diag[i];
        m[i + 1] = v;
        next = v;
    }
    m
}
