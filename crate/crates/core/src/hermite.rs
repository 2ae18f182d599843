//! Cubic Hermite beam interpolation.
//!
//! Local DOF order is `[w₁, θ₁, w₂, θ₂]`: deflection and rotation at the left
//! node, then at the right node. With `ξ = s/l`:
//!
//! ```text
//! N_A = 1 − 3ξ² + 2ξ³     N_B = l·ξ(ξ − 1)²
//! N_C = ξ²(3 − 2ξ)        N_D = l·ξ²(ξ − 1)
//! ```
//!
//! Derivatives are taken with respect to the physical coordinate `s`.

use crate::error::ensure;
use crate::linalg::{Mat4, Vec4};
use crate::Result;

/// Shape-function values and their first two `s`-derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeEval {
    pub n: Vec4,
    pub d1: Vec4,
    pub d2: Vec4,
}

/// `nn = ∫₀ˡ NᵀN ds` and `bb = ∫₀ˡ N″ᵀN″ ds` for one element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementBlocks {
    pub nn: Mat4,
    pub bb: Mat4,
}

/// Evaluates the shape functions at `ξ ∈ [0, 1]` on an element of length `l`.
pub fn shape(xi: f64, l: f64) -> Result<ShapeEval> {
    ensure((0.0..=1.0).contains(&xi), "xi", xi, "0 <= xi <= 1")?;
    ensure(l > 0.0 && l.is_finite(), "element length", l, "l > 0")?;
    Ok(shape_unchecked(xi, l))
}

pub(crate) fn shape_unchecked(xi: f64, l: f64) -> ShapeEval {
    let x2 = xi * xi;
    let x3 = x2 * xi;
    let n = Vec4::new(
        1.0 - 3.0 * x2 + 2.0 * x3,
        l * xi * (xi - 1.0) * (xi - 1.0),
        x2 * (3.0 - 2.0 * xi),
        l * x2 * (xi - 1.0),
    );
    // d/dξ, then chain rule d/ds = (1/l) d/dξ
    let d1 = Vec4::new(
        (-6.0 * xi + 6.0 * x2) / l,
        3.0 * x2 - 4.0 * xi + 1.0,
        (6.0 * xi - 6.0 * x2) / l,
        3.0 * x2 - 2.0 * xi,
    );
    let d2 = Vec4::new(
        (12.0 * xi - 6.0) / (l * l),
        (6.0 * xi - 4.0) / l,
        (6.0 - 12.0 * xi) / (l * l),
        (6.0 * xi - 2.0) / l,
    );
    ShapeEval { n, d1, d2 }
}

/// Closed-form element integrals for an element of length `l`.
pub fn element_blocks(l: f64) -> Result<ElementBlocks> {
    ensure(l > 0.0 && l.is_finite(), "element length", l, "l > 0")?;
    let l2 = l * l;
    let l3 = l2 * l;

    #[rustfmt::skip]
    let nn = Mat4::new(
        13.0 / 35.0,         11.0 * l / 210.0,  9.0 / 70.0,         -13.0 * l / 420.0,
        11.0 * l / 210.0,    l2 / 105.0,        13.0 * l / 420.0,   -l2 / 140.0,
        9.0 / 70.0,          13.0 * l / 420.0,  13.0 / 35.0,        -11.0 * l / 210.0,
        -13.0 * l / 420.0,   -l2 / 140.0,       -11.0 * l / 210.0,  l2 / 105.0,
    ) * l;

    #[rustfmt::skip]
    let bb = Mat4::new(
        12.0 / l3,   6.0 / l2,  -12.0 / l3,  6.0 / l2,
        6.0 / l2,    4.0 / l,   -6.0 / l2,   2.0 / l,
        -12.0 / l3,  -6.0 / l2, 12.0 / l3,   -6.0 / l2,
        6.0 / l2,    2.0 / l,   -6.0 / l2,   4.0 / l,
    );

    Ok(ElementBlocks { nn, bb })
}
