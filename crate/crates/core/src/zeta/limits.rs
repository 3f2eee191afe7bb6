//! N → ∞ limits of normalized torus zetas as integrals over [0, 2π)^d.
//!
//! Each integrand includes its constant prefactor, so a single quadrature
//! returns the logarithm of the limiting reciprocal zeta. On a grid of N
//! points per axis the same sum is exactly the finite-N value obtained from
//! the torus spectrum.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::{
    convergence_trace, periodic_integral, GridSpec, TracePoint,
};
use crate::spectra::complex_eigenvalue_list;
use crate::walk::{fourier_symbol, CoinSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LimitKind {
    /// (1 − u²)^{d−1}, log((1 + u²) − (2u/d) Σ cos θ_j).
    Grover,
    /// (1 − u²)^{d−1}, log((1 + (2d − 1)u²) − 2u Σ cos θ_j).
    Ihara,
    /// (1 − u)², log(u² − u(¼c² + c − 2) + 1) with c = cos θ₁ + cos θ₂.
    VertexFace,
    /// Square-lattice Grover form: (1 − u²), log((1 + u²) − u(cos θ₁ + cos θ₂)).
    GroverSquare,
    /// Square-lattice Ihara form: (1 − u²), log((1 + 3u²) − 2u(cos θ₁ + cos θ₂)).
    IharaSquare,
}

impl LimitKind {
    pub const ALL: [LimitKind; 5] = [
        LimitKind::Grover,
        LimitKind::Ihara,
        LimitKind::VertexFace,
        LimitKind::GroverSquare,
        LimitKind::IharaSquare,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LimitKind::Grover => "grover",
            LimitKind::Ihara => "ihara",
            LimitKind::VertexFace => "vertex-face",
            LimitKind::GroverSquare => "grover-2d",
            LimitKind::IharaSquare => "ihara-2d",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown limit kind {s:?}")))
    }

    /// Dimension the integrand lives in; the two-dimensional kinds reject
    /// any other `d`.
    pub fn dim(self, d: usize) -> Result<usize> {
        match self {
            LimitKind::Grover | LimitKind::Ihara => {
                if d == 0 {
                    Err(Error::InvalidDimension(d))
                } else {
                    Ok(d)
                }
            }
            _ if d == 2 => Ok(2),
            _ => Err(Error::InvalidParameter(format!(
                "{} integrand is two-dimensional, got d = {d}",
                self.name()
            ))),
        }
    }

    fn log_prefactor(self, d: usize, u: f64) -> f64 {
        self.log_prefactor_complex(d, Complex64::new(u, 0.0)).re
    }

    /// The argument of the logarithm at angles θ.
    pub fn argument(self, u: f64, theta: &[f64]) -> f64 {
        self.argument_complex(Complex64::new(u, 0.0), theta).re
    }

    pub fn argument_complex(self, u: Complex64, theta: &[f64]) -> Complex64 {
        let d = theta.len() as f64;
        let s: f64 = theta.iter().map(|t| t.cos()).sum();
        match self {
            LimitKind::Grover => (1.0 + u * u) - u * (2.0 / d * s),
            LimitKind::Ihara => (1.0 + u * u * (2.0 * d - 1.0)) - u * (2.0 * s),
            LimitKind::VertexFace => u * u - u * (0.25 * s * s + s - 2.0) + 1.0,
            LimitKind::GroverSquare => (1.0 + u * u) - u * s,
            LimitKind::IharaSquare => (1.0 + u * u * 3.0) - u * (2.0 * s),
        }
    }

    fn log_prefactor_complex(self, d: usize, u: Complex64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        match self {
            LimitKind::Grover | LimitKind::Ihara => (one - u * u).ln() * (d as f64 - 1.0),
            LimitKind::VertexFace => (one - u).ln() * 2.0,
            LimitKind::GroverSquare | LimitKind::IharaSquare => (one - u * u).ln(),
        }
    }
}

fn check_u(u: f64) -> Result<()> {
    if !(u.is_finite() && u.abs() < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "limit integrals need real u in (-1, 1), got {u}"
        )));
    }
    Ok(())
}

fn branch_error(e: Error) -> Error {
    match e {
        Error::NonFinite { node } => Error::BranchCrossing { angles: node },
        other => other,
    }
}

/// Prefactor log plus log of the argument; NaN where the argument is not
/// positive.
pub fn limit_log_integrand(kind: LimitKind, d: usize, u: f64) -> impl Fn(&[f64]) -> f64 + Sync {
    let pref = kind.log_prefactor(d, u);
    move |theta: &[f64]| {
        let a = kind.argument(u, theta);
        if a > 0.0 {
            pref + a.ln()
        } else {
            f64::NAN
        }
    }
}

/// Log of the limiting reciprocal zeta, by quadrature on `grid`.
pub fn limit_log(kind: LimitKind, d: usize, u: f64, grid: GridSpec) -> Result<f64> {
    check_u(u)?;
    let d = kind.dim(d)?;
    if grid.dim() != d {
        return Err(Error::DimensionMismatch(format!(
            "grid of dimension {} for a {d}-dimensional integrand",
            grid.dim()
        )));
    }
    periodic_integral(limit_log_integrand(kind, d, u), grid).map_err(branch_error)
}

/// (1/N^d)·log of the finite-N reciprocal zeta on T^d_N, from the torus
/// spectrum: the same sum as `limit_log` on a grid of N points.
pub fn finite_torus_log(kind: LimitKind, d: usize, u: f64, side: usize) -> Result<f64> {
    let d = kind.dim(d)?;
    limit_log(kind, d, u, GridSpec::new(d, side)?)
}

/// N^d prefactor log plus Σ_k log(argument) over the momentum grid of
/// T^d_N, for complex u: the unnormalized finite-N log reciprocal zeta.
pub fn finite_torus_log_complex(kind: LimitKind, d: usize, u: Complex64, side: usize) -> Result<Complex64> {
    let d = kind.dim(d)?;
    let grid = GridSpec::new(d, side)?;
    let mut acc = kind.log_prefactor_complex(d, u) * grid.node_count() as f64;
    for i in 0..grid.node_count() {
        let theta = grid.node(i);
        let a = kind.argument_complex(u, &theta);
        if a.norm() == 0.0 {
            return Err(Error::SingularPoint { k: theta });
        }
        acc += a.ln();
    }
    Ok(acc)
}

/// Doubling trace of the limit quadrature for G = 8, 16, …, `g_max`.
pub fn limit_trace(kind: LimitKind, d: usize, u: f64, g_max: usize) -> Result<Vec<TracePoint<f64>>> {
    check_u(u)?;
    let d = kind.dim(d)?;
    convergence_trace(limit_log_integrand(kind, d, u), d, g_max).map_err(branch_error)
}

/// Σ log(1 − uλ) over the eigenvalues λ of M̂_A(θ): log det F(θ, u) on the
/// branch continuous from u = 0. NaN where some |uλ| ≥ 1.
pub fn walk_log_integrand(coin: &CoinSpec, u: Complex64) -> impl Fn(&[f64]) -> Complex64 + Sync + '_ {
    move |theta: &[f64]| {
        let nan = Complex64::new(f64::NAN, f64::NAN);
        let Ok(symbol) = fourier_symbol(coin, theta) else {
            return nan;
        };
        let Ok(ev) = complex_eigenvalue_list(&symbol) else {
            return nan;
        };
        let mut acc = Complex64::new(0.0, 0.0);
        for lambda in ev {
            let z = u * lambda;
            if z.norm() >= 1.0 {
                return nan;
            }
            acc += (1.0 - z).ln();
        }
        acc
    }
}

/// ∫ log det F(θ, u) dθ/(2π)^d: the log of the limiting reciprocal walk zeta.
pub fn walk_limit_log(coin: &CoinSpec, d: usize, u: Complex64, grid: GridSpec) -> Result<Complex64> {
    if coin.size() != 2 * d || grid.dim() != d {
        return Err(Error::CoinSizeMismatch {
            expected: 2 * d,
            rows: coin.size(),
            cols: coin.size(),
        });
    }
    periodic_integral(walk_log_integrand(coin, u), grid).map_err(branch_error)
}

pub fn walk_limit_trace(
    coin: &CoinSpec,
    d: usize,
    u: Complex64,
    g_max: usize,
) -> Result<Vec<TracePoint<Complex64>>> {
    if coin.size() != 2 * d {
        return Err(Error::CoinSizeMismatch {
            expected: 2 * d,
            rows: coin.size(),
            cols: coin.size(),
        });
    }
    convergence_trace(walk_log_integrand(coin, u), d, g_max).map_err(branch_error)
}
