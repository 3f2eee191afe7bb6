//! Uniform Riemann sums over [0, 2π)^d with doubling-gap convergence checks.
//!
//! Node j on an axis of G points sits at 2π·(j/G), computed exactly that way
//! everywhere so a grid of size N reproduces the finite-N torus momenta bit
//! for bit.

use std::f64::consts::PI;
use std::ops::{Add, Sub};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::format::fmt_g17;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    dim: usize,
    points: usize,
}

impl GridSpec {
    pub fn new(dim: usize, points: usize) -> Result<Self> {
        if dim < 1 {
            return Err(Error::InvalidDimension(dim));
        }
        if points < 2 {
            return Err(Error::DimensionMismatch(format!(
                "grid needs at least 2 points per axis, got {points}"
            )));
        }
        Ok(Self { dim, points })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn node_count(&self) -> usize {
        self.points.pow(self.dim as u32)
    }

    /// Angles of node `index`, first axis most significant.
    pub fn node(&self, index: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        let mut rest = index;
        for j in (0..self.dim).rev() {
            out[j] = grid_angle(rest % self.points, self.points);
            rest /= self.points;
        }
        out
    }
}

pub fn grid_angle(j: usize, points: usize) -> f64 {
    2.0 * PI * (j as f64 / points as f64)
}

/// Values that can be averaged by a compensated sum.
pub trait Summand: Copy + Send + Sync + Add<Output = Self> + Sub<Output = Self> {
    fn zero() -> Self;
    fn is_finite(&self) -> bool;
    fn scale(self, s: f64) -> Self;
    fn magnitude(&self) -> f64;
}

impl Summand for f64 {
    fn zero() -> Self {
        0.0
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Summand for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// Kahan–Babuška (Neumaier) summation in the given order.
pub fn compensated_sum<T: Summand>(values: &[T]) -> T {
    let mut sum = T::zero();
    let mut comp = T::zero();
    for &v in values {
        let t = sum + v;
        if sum.magnitude() >= v.magnitude() {
            comp = comp + ((sum - t) + v);
        } else {
            comp = comp + ((v - t) + sum);
        }
        sum = t;
    }
    sum + comp
}

/// G^{−d} Σ f(nodes). Nodes are evaluated in parallel and summed in index order.
pub fn periodic_integral<T, F>(f: F, grid: GridSpec) -> Result<T>
where
    T: Summand,
    F: Fn(&[f64]) -> T + Sync,
{
    let values: Vec<T> = (0..grid.node_count())
        .into_par_iter()
        .map(|i| f(&grid.node(i)))
        .collect();
    if let Some(bad) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            node: grid.node(bad),
        });
    }
    Ok(compensated_sum(&values).scale(1.0 / grid.node_count() as f64))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint<T> {
    pub points: usize,
    pub value: T,
    /// |I(G) − I(G/2)|; `None` for the first grid.
    pub gap: Option<f64>,
}

/// Values on grids 8, 16, … up to and including `g_max`.
pub fn convergence_trace<T, F>(f: F, dim: usize, g_max: usize) -> Result<Vec<TracePoint<T>>>
where
    T: Summand,
    F: Fn(&[f64]) -> T + Sync,
{
    let mut out: Vec<TracePoint<T>> = Vec::new();
    let mut g = 8;
    while g <= g_max {
        let value = periodic_integral(&f, GridSpec::new(dim, g)?)?;
        let gap = out.last().map(|p| (value - p.value).magnitude());
        out.push(TracePoint {
            points: g,
            value,
            gap,
        });
        g *= 2;
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Converged<T> {
    pub value: T,
    pub gap: f64,
    pub points: usize,
}

/// Doubles G from 8 until successive values differ by at most `tol`.
pub fn converged_integral<T, F>(f: F, dim: usize, tol: f64, g_max: usize) -> Result<Converged<T>>
where
    T: Summand,
    F: Fn(&[f64]) -> T + Sync,
{
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::DimensionMismatch(format!("tolerance must be positive, got {tol}")));
    }
    let mut g = 8;
    let mut prev = periodic_integral(&f, GridSpec::new(dim, g)?)?;
    if tol == f64::INFINITY {
        return Ok(Converged {
            value: prev,
            gap: f64::INFINITY,
            points: g,
        });
    }
    let mut gap = f64::INFINITY;
    while g * 2 <= g_max {
        g *= 2;
        let value = periodic_integral(&f, GridSpec::new(dim, g)?)?;
        gap = (value - prev).magnitude();
        prev = value;
        if gap <= tol {
            return Ok(Converged {
                value,
                gap,
                points: g,
            });
        }
    }
    Err(Error::NoConvergence { gap, grid: g })
}

/// CSV `G,value,gap` (complex values add an `im` column).
pub fn trace_csv_real(trace: &[TracePoint<f64>]) -> String {
    let mut out = String::from("G,value,gap\n");
    for p in trace {
        let gap = p.gap.map(fmt_g17).unwrap_or_default();
        out.push_str(&format!("{},{},{}\n", p.points, fmt_g17(p.value), gap));
    }
    out
}

pub fn trace_csv_complex(trace: &[TracePoint<Complex64>]) -> String {
    let mut out = String::from("G,value_re,value_im,gap\n");
    for p in trace {
        let gap = p.gap.map(fmt_g17).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{}\n",
            p.points,
            fmt_g17(p.value.re),
            fmt_g17(p.value.im),
            gap
        ));
    }
    out
}

/// True when no recorded gap exceeds its predecessor by more than `floor`.
/// Once the sum has converged the gaps are rounding noise, so a floor of a
/// few ulps of the value keeps that noise from counting as growth.
pub fn gaps_nonincreasing<T>(trace: &[TracePoint<T>], floor: f64) -> bool {
    let gaps: Vec<f64> = trace.iter().filter_map(|p| p.gap).collect();
    gaps.windows(2).all(|w| w[1] <= w[0].max(floor))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_and_cosine() {
        for g in [2, 3, 8, 17] {
            let grid = GridSpec::new(1, g).unwrap();
            let c: f64 = periodic_integral(|_| 2.5, grid).unwrap();
            assert!((c - 2.5).abs() < 1e-15);
            let v: f64 = periodic_integral(|t| t[0].cos(), grid).unwrap();
            assert!(v.abs() < 1e-15, "G={g}: {v}");
        }
    }

    #[test]
    fn analytic_integrand_converges_by_doubling() {
        let f = |t: &[f64]| (1.0 + 0.25 * t[0].cos()).ln();
        let a: f64 = periodic_integral(f, GridSpec::new(1, 64).unwrap()).unwrap();
        let b: f64 = periodic_integral(f, GridSpec::new(1, 128).unwrap()).unwrap();
        assert!((a - b).abs() <= 1e-12);
        // ∫ log(1 + a cos θ) dθ/2π = log((1 + √(1 − a²))/2)
        let exact = ((1.0 + (1.0f64 - 0.0625).sqrt()) / 2.0).ln();
        assert!((b - exact).abs() < 1e-14);
        let conv = converged_integral(f, 1, 1e-8, 1024).unwrap();
        assert!(conv.points <= 64);
    }

    #[test]
    fn infinite_tolerance_stops_at_eight() {
        let conv = converged_integral(|t: &[f64]| t[0].sin() + 1.0, 1, f64::INFINITY, 8).unwrap();
        assert_eq!(conv.points, 8);
    }

    #[test]
    fn non_finite_node_is_named() {
        let err = periodic_integral(|t: &[f64]| (t[0].cos()).ln(), GridSpec::new(1, 4).unwrap())
            .unwrap_err();
        assert!(matches!(err, Error::NonFinite { .. }));
    }

    #[test]
    fn non_convergence_is_reported() {
        // log|cos θ| is singular; the gap never closes at this tolerance
        let f = |t: &[f64]| (t[0] + 0.1).cos().abs().ln();
        assert!(matches!(
            converged_integral(f, 1, 1e-14, 64),
            Err(Error::NoConvergence { .. })
        ));
    }

    #[test]
    fn product_integrands_factor() {
        let f = |t: f64| (1.0 + 0.3 * t.cos()).ln() + 2.0;
        let g = |t: f64| (1.2 - 0.5 * t.sin()).exp();
        let grid1 = GridSpec::new(1, 32).unwrap();
        let a: f64 = periodic_integral(|t: &[f64]| f(t[0]), grid1).unwrap();
        let b: f64 = periodic_integral(|t: &[f64]| g(t[0]), grid1).unwrap();
        let ab: f64 =
            periodic_integral(|t: &[f64]| f(t[0]) * g(t[1]), GridSpec::new(2, 32).unwrap()).unwrap();
        assert!((ab - a * b).abs() < 1e-12);
    }

    #[test]
    fn grid_nodes_are_exact_fractions() {
        let grid = GridSpec::new(2, 5).unwrap();
        assert_eq!(grid.node(7), vec![grid_angle(1, 5), grid_angle(2, 5)]);
        assert!(GridSpec::new(1, 1).is_err());
    }
}
