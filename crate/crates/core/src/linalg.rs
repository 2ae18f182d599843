//! Dense linear algebra used by the integrator and the modal checks.

use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::{Cholesky, DMatrix, DVector, SMatrix, SVector, SymmetricEigen};

use crate::{Error, Result};

pub type Vec4 = SVector<f64, 4>;
pub type Mat4 = SMatrix<f64, 4, 4>;

/// Solves `a·x = b` by LU with partial pivoting.
///
/// A pivot smaller than `n·ε·max|pivot|` is treated as singular instead of
/// producing a garbage solution.
pub fn solve(a: &DMatrix<f64>, b: &DVector<f64>, what: &'static str) -> Result<DVector<f64>> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::Dimension {
            what,
            expected: n,
            actual: a.ncols(),
        });
    }
    if b.len() != n {
        return Err(Error::Dimension {
            what,
            expected: n,
            actual: b.len(),
        });
    }
    if !a.iter().all(|v| v.is_finite()) || !b.iter().all(|v| v.is_finite()) {
        return Err(Error::NonFinite(what));
    }
    if n == 0 {
        return Ok(DVector::zeros(0));
    }

    let lu = a.clone().lu();
    let u = lu.u();
    let (mut lo, mut hi) = (f64::INFINITY, 0.0_f64);
    for i in 0..n {
        let p = u[(i, i)].abs();
        lo = lo.min(p);
        hi = hi.max(p);
    }
    if hi == 0.0 || lo <= hi * (n as f64) * f64::EPSILON {
        return Err(Error::Singular(what));
    }
    let x = lu.solve(b).ok_or(Error::Singular(what))?;
    if x.iter().all(|v| v.is_finite()) {
        Ok(x)
    } else {
        Err(Error::Singular(what))
    }
}

/// Largest absolute entry of `a - aᵀ`.
pub fn max_asymmetry(a: &DMatrix<f64>) -> f64 {
    let n = a.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in (i + 1)..n {
            worst = worst.max((a[(i, j)] - a[(j, i)]).abs());
        }
    }
    worst
}

/// Whether a Cholesky factorization of `a` succeeds.
pub fn is_positive_definite(a: &DMatrix<f64>) -> bool {
    Cholesky::new(a.clone()).is_some()
}

/// Natural frequencies in Hz of the undamped pencil `(k, m)`, ascending.
///
/// Both matrices must be symmetric positive definite (supports applied).
/// The reduction goes through the Cholesky factor of `k` and solves for
/// `1/ω²`, so the low modes stay accurate when `m` spans many orders of
/// magnitude (a nearly massless rail on a heavy deck). Modes beyond the
/// resolvable range are reported as `f64::INFINITY`.
pub fn natural_frequencies(m: &DMatrix<f64>, k: &DMatrix<f64>) -> Result<Vec<f64>> {
    let n = m.nrows();
    if k.nrows() != n || k.ncols() != n || m.ncols() != n {
        return Err(Error::Dimension {
            what: "eigenproblem",
            expected: n,
            actual: k.nrows(),
        });
    }
    let chol = Cholesky::new(k.clone()).ok_or(Error::Singular("stiffness"))?;
    let l = chol.l();
    // A = L⁻¹ M L⁻ᵀ, eigenvalues 1/ω²
    let x = l
        .solve_lower_triangular(m)
        .ok_or(Error::Singular("stiffness"))?;
    let y = l
        .solve_lower_triangular(&x.transpose())
        .ok_or(Error::Singular("stiffness"))?;
    let a = (&y + y.transpose()) * 0.5;
    let eig = SymmetricEigen::new(a);
    let mut freqs = Vec::with_capacity(n);
    for &mu in eig.eigenvalues.iter() {
        // modes stiffer than the working precision come out as roundoff
        let f = if mu > 0.0 {
            1.0 / (2.0 * PI * libm::sqrt(mu))
        } else {
            f64::INFINITY
        };
        freqs.push(f);
    }
    freqs.sort_by(|a, b| a.total_cmp(b));
    Ok(freqs)
}
