//! Vehicle-rail interaction blocks for the element under the wheel.
//!
//! The wheel stays in contact with the rail, `q_e = r + w_r`, so its
//! acceleration carries convective terms in `v·N′` and `v²·N″`. All vertical
//! quantities are positive downward; gravity loads the rail with the full
//! vehicle weight and the body equation is written about its static state.

use crate::irregularity::IrregularitySample;
use crate::linalg::{Mat4, Vec4};
use crate::vehicle::{VehicleParams, WheelLocation};
use crate::hermite;
use crate::Result;

/// Local blocks scattered into the body DOF and the four rail DOFs of the
/// element under the wheel. Row vectors `*_1r` and column vectors `*_r1`
/// are both stored as `Vec4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingBlocks {
    pub m_rr_add: Mat4,
    pub c_rr_add: Mat4,
    pub k_rr_add: Mat4,
    pub c_1r: Vec4,
    pub c_r1: Vec4,
    pub k_1r: Vec4,
    pub k_r1: Vec4,
    pub m_11: f64,
    pub c_11: f64,
    pub k_11: f64,
    pub f_1: f64,
    pub f_r: Vec4,
}

impl CouplingBlocks {
    /// Blocks of a vehicle that has left the span: only the body mass remains.
    pub fn departed(params: &VehicleParams) -> Self {
        CouplingBlocks {
            m_rr_add: Mat4::zeros(),
            c_rr_add: Mat4::zeros(),
            k_rr_add: Mat4::zeros(),
            c_1r: Vec4::zeros(),
            c_r1: Vec4::zeros(),
            k_1r: Vec4::zeros(),
            k_r1: Vec4::zeros(),
            m_11: params.m_body,
            c_11: 0.0,
            k_11: 0.0,
            f_1: 0.0,
            f_r: Vec4::zeros(),
        }
    }
}

/// Builds the interaction blocks for a wheel at `loc` on elements of length
/// `l`, moving at instantaneous speed `v_t`, under gravity `g`.
pub fn build(
    params: &VehicleParams,
    loc: &WheelLocation,
    l: f64,
    irr: &IrregularitySample,
    v_t: f64,
    g: f64,
) -> Result<CouplingBlocks> {
    let sh = hermite::shape(loc.xi, l)?;
    let (n, n1, n2) = (sh.n, sh.d1, sh.d2);
    let VehicleParams {
        m_body,
        m_wheel,
        k_susp,
        c_susp,
        a,
        ..
    } = *params;

    let nn = n * n.transpose();
    let nn1 = n * n1.transpose();
    let nn2 = n * n2.transpose();

    let contact = (m_body + m_wheel) * g
        - k_susp * irr.r
        - c_susp * v_t * irr.r1
        - m_wheel * (a * irr.r1 + v_t * v_t * irr.r2);

    Ok(CouplingBlocks {
        m_rr_add: nn * m_wheel,
        c_rr_add: nn * c_susp + nn1 * (2.0 * v_t * m_wheel),
        k_rr_add: nn * k_susp + nn1 * (c_susp * v_t + m_wheel * a) + nn2 * (m_wheel * v_t * v_t),
        c_1r: -n * c_susp,
        c_r1: -n * c_susp,
        k_1r: -n * k_susp - n1 * (c_susp * v_t),
        k_r1: -n * k_susp,
        m_11: m_body,
        c_11: c_susp,
        k_11: k_susp,
        f_1: k_susp * irr.r + c_susp * v_t * irr.r1,
        f_r: n * contact,
    })
}
