//! Incremental Newmark-β stepping for `M ü + C u̇ + K u = F` with matrices
//! that may change between steps.
//!
//! Per step, with `M, C, K` frozen at the start of the step:
//!
//! ```text
//! K̂  = K + M/(β·Δt²) + C·δ/(β·Δt)
//! ΔF̂ = ΔF + M·(u̇/(β·Δt) + ü/(2β)) + C·(δ/β·u̇ + Δt·(δ/(2β) − 1)·ü)
//! K̂·Δu = ΔF̂
//! Δu̇ = δ/(β·Δt)·Δu − δ/β·u̇ + Δt·(1 − δ/(2β))·ü
//! Δü = (Δu − Δt·u̇ − Δt²/2·ü) / (β·Δt²)
//! ```

use nalgebra::{DMatrix, DVector};

use crate::error::ensure;
use crate::linalg::solve;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewmarkParams {
    pub beta: f64,
    pub delta: f64,
    pub dt: f64,
}

impl Default for NewmarkParams {
    /// Average acceleration, `Δt = 0.005 s`.
    fn default() -> Self {
        NewmarkParams {
            beta: 0.25,
            delta: 0.5,
            dt: 0.005,
        }
    }
}

impl NewmarkParams {
    pub fn new(beta: f64, dt: f64) -> Result<Self> {
        let p = NewmarkParams {
            beta,
            delta: 0.5,
            dt,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        ensure(
            (1.0 / 6.0..=0.5).contains(&self.beta),
            "beta",
            self.beta,
            "1/6 <= beta <= 1/2",
        )?;
        ensure(self.delta == 0.5, "delta", self.delta, "delta = 1/2")?;
        ensure(self.dt > 0.0 && self.dt.is_finite(), "dt", self.dt, "dt > 0")
    }
}

/// Displacement, velocity and acceleration at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    pub u: DVector<f64>,
    pub v: DVector<f64>,
    pub acc: DVector<f64>,
    pub t: f64,
}

impl State {
    pub fn at_rest(size: usize, t: f64) -> Self {
        State {
            u: DVector::zeros(size),
            v: DVector::zeros(size),
            acc: DVector::zeros(size),
            t,
        }
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    fn check(&self, size: usize) -> Result<()> {
        for (what, vec) in [("displacement", &self.u), ("velocity", &self.v), ("acceleration", &self.acc)] {
            if vec.len() != size {
                return Err(Error::Dimension {
                    what,
                    expected: size,
                    actual: vec.len(),
                });
            }
            if !vec.iter().all(|x| x.is_finite()) {
                return Err(Error::NonFinite(what));
            }
        }
        Ok(())
    }
}

/// Solves `m·ü = f − c·v − k·u` for the acceleration.
pub fn initial_acceleration(
    m: &DMatrix<f64>,
    c: &DMatrix<f64>,
    k: &DMatrix<f64>,
    f: &DVector<f64>,
    u0: &DVector<f64>,
    v0: &DVector<f64>,
) -> Result<DVector<f64>> {
    let rhs = f - c * v0 - k * u0;
    solve(m, &rhs, "mass")
}

/// Acceleration from equilibrium at the end of a step, using the matrices
/// and load of the new time.
pub fn recompute_acceleration(
    m: &DMatrix<f64>,
    c: &DMatrix<f64>,
    k: &DMatrix<f64>,
    f: &DVector<f64>,
    u: &DVector<f64>,
    v: &DVector<f64>,
) -> Result<DVector<f64>> {
    initial_acceleration(m, c, k, f, u, v)
}

/// Advances `state` by one step under the load increment `df`.
///
/// The returned acceleration is the Newmark increment itself. Callers with
/// time-varying matrices usually replace it with [`recompute_acceleration`].
pub fn step(
    m: &DMatrix<f64>,
    c: &DMatrix<f64>,
    k: &DMatrix<f64>,
    df: &DVector<f64>,
    state: &State,
    p: &NewmarkParams,
) -> Result<State> {
    p.validate()?;
    let n = state.len();
    state.check(n)?;
    for (what, mat) in [("mass", m), ("damping", c), ("stiffness", k)] {
        if mat.nrows() != n || mat.ncols() != n {
            return Err(Error::Dimension {
                what,
                expected: n,
                actual: mat.nrows(),
            });
        }
    }
    if df.len() != n {
        return Err(Error::Dimension {
            what: "force increment",
            expected: n,
            actual: df.len(),
        });
    }

    let NewmarkParams { beta, delta, dt } = *p;
    let k_eff = k + m * (1.0 / (beta * dt * dt)) + c * (delta / (beta * dt));
    let mv = &state.v * (1.0 / (beta * dt)) + &state.acc * (1.0 / (2.0 * beta));
    let cv = &state.v * (delta / beta) + &state.acc * (dt * (delta / (2.0 * beta) - 1.0));
    let df_eff = df + m * mv + c * cv;

    let du = solve(&k_eff, &df_eff, "effective stiffness")?;
    let dv = &du * (delta / (beta * dt)) - &state.v * (delta / beta)
        + &state.acc * (dt * (1.0 - delta / (2.0 * beta)));
    let da = (&du - &state.v * dt - &state.acc * (0.5 * dt * dt)) * (1.0 / (beta * dt * dt));

    Ok(State {
        u: &state.u + du,
        v: &state.v + dv,
        acc: &state.acc + da,
        t: state.t + dt,
    })
}
