//! Dense helpers shared by the walk and zeta modules.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type RealMatrix = DMatrix<f64>;
pub type ComplexMatrix = DMatrix<Complex64>;

pub fn to_complex(m: &RealMatrix) -> ComplexMatrix {
    m.map(|x| Complex64::new(x, 0.0))
}

/// I − u·M for real M and complex u.
pub fn identity_minus(u: Complex64, m: &RealMatrix) -> ComplexMatrix {
    let mut out = m.map(|x| -u * x);
    for i in 0..m.nrows().min(m.ncols()) {
        out[(i, i)] += 1.0;
    }
    out
}

/// I − u·M for complex M.
pub fn identity_minus_complex(u: Complex64, m: &ComplexMatrix) -> ComplexMatrix {
    let mut out = m.map(|x| -u * x);
    for i in 0..m.nrows().min(m.ncols()) {
        out[(i, i)] += 1.0;
    }
    out
}

/// log det(M) from partial-pivot LU: Σ ln(pivot) plus iπ per row swap.
/// The imaginary part is not reduced mod 2π.
pub fn log_det(m: ComplexMatrix) -> Result<Complex64> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "determinant of a {}x{} matrix",
            n,
            m.ncols()
        )));
    }
    if n == 0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let lu = m.lu();
    let sign: f64 = lu.p().determinant();
    let mut acc = if sign < 0.0 {
        Complex64::new(0.0, PI)
    } else {
        Complex64::new(0.0, 0.0)
    };
    let u = lu.u();
    for i in 0..n {
        let p = u[(i, i)];
        if p.norm() == 0.0 {
            return Err(Error::Singular);
        }
        acc += p.ln();
    }
    Ok(acc)
}

pub fn log_det_real(m: &RealMatrix) -> Result<Complex64> {
    log_det(to_complex(m))
}

/// Reduces the imaginary part into (−π, π].
pub fn wrap_phase(z: Complex64) -> Complex64 {
    let mut im = z.im.rem_euclid(2.0 * PI);
    if im > PI {
        im -= 2.0 * PI;
    }
    Complex64::new(z.re, im)
}

/// |log(a/b)| for two values given by their logarithms: the relative
/// log-residual used for every identity check.
pub fn log_residual(lhs_log: Complex64, rhs_log: Complex64) -> f64 {
    wrap_phase(lhs_log - rhs_log).norm()
}

pub fn max_abs(m: &RealMatrix) -> f64 {
    m.iter().fold(0.0, |a, x| a.max(x.abs()))
}

/// ‖MᵀM − I‖_max.
pub fn orthogonality_defect(m: &RealMatrix) -> f64 {
    let n = m.ncols();
    max_abs(&(m.transpose() * m - RealMatrix::identity(n, n)))
}

/// ‖M*M − I‖_max for complex M.
pub fn unitarity_defect(m: &ComplexMatrix) -> f64 {
    let n = m.ncols();
    (m.adjoint() * m - ComplexMatrix::identity(n, n))
        .iter()
        .fold(0.0, |a, z| a.max(z.norm()))
}
