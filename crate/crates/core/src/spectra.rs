//! Eigenvalue multisets, characteristic polynomials, the K-to-U spectral
//! map of the vertex-face walk, and the closed-form torus adjacency spectrum.

use std::cmp::Ordering;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::embedding::EmbeddedGraph;
use crate::error::{Error, Result};
use crate::format::fmt_g17;
use crate::linalg::{to_complex, ComplexMatrix, RealMatrix};
use crate::walk::face_overlap_matrix;

pub const CLUSTER_TOL: f64 = 1e-8;
/// Largest matrix accepted by the Faddeev–LeVerrier recursion.
pub const CHAR_POLY_MAX_DIM: usize = 512;
/// Slack allowed on K eigenvalues outside [0, 1] before they count as anomalies.
pub const MU_SLACK: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    /// Coefficients c_0..c_deg; trailing coefficients with |c| ≤ 1e−12 are trimmed.
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.norm() <= 1e-12) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Complex64::new(0.0, 0.0));
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// Monic ∏ (λ − r).
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut c = vec![Complex64::new(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
            for (i, &a) in c.iter().enumerate() {
                next[i + 1] += a;
                next[i] -= a * r;
            }
            c = next;
        }
        Self { coeffs: c }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c)
    }
}

/// det(λI − M) via the Faddeev–LeVerrier recursion.
pub fn char_poly(m: &RealMatrix) -> Result<Polynomial> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::DimensionMismatch("char_poly needs a square matrix".into()));
    }
    if n > CHAR_POLY_MAX_DIM {
        return Err(Error::DimensionTooLarge {
            dim: n,
            max: CHAR_POLY_MAX_DIM,
        });
    }
    let mut c = vec![0.0; n + 1];
    c[n] = 1.0;
    let mut mk = RealMatrix::zeros(n, n);
    for k in 1..=n {
        mk = m * &mk;
        for i in 0..n {
            mk[(i, i)] += c[n - k + 1];
        }
        let am = m * &mk;
        c[n - k] = -am.trace() / k as f64;
    }
    Ok(Polynomial::from_real(&c))
}

/// det(λI − M) at a single point via LU; usable at any dimension.
pub fn char_poly_at(m: &RealMatrix, lambda: Complex64) -> Result<Complex64> {
    let n = m.nrows();
    let mut a: ComplexMatrix = to_complex(m).map(|z| -z);
    for i in 0..n {
        a[(i, i)] += lambda;
    }
    Ok(a.lu().determinant())
}

/// Sort key: argument in [0, 2π), with arguments within 1e−9 of 2π folded
/// onto 0 so values just below the positive real axis sort next to it.
fn angle_key(z: Complex64) -> f64 {
    let mut a = z.im.atan2(z.re);
    if a < 0.0 {
        a += 2.0 * PI;
    }
    if 2.0 * PI - a < 1e-9 {
        a = 0.0;
    }
    a
}

/// Sorts by argument in [0, 2π), then by modulus.
pub fn sort_by_angle(values: &mut [Complex64]) {
    values.sort_by(cmp_eigen);
}

fn cmp_eigen(a: &Complex64, b: &Complex64) -> Ordering {
    angle_key(*a)
        .total_cmp(&angle_key(*b))
        .then(a.norm().total_cmp(&b.norm()))
}

/// Eigenvalue multiset stored as clustered (value, multiplicity) pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    entries: Vec<(Complex64, usize)>,
    tolerance: f64,
}

impl Spectrum {
    /// Merges values within `tolerance` of an existing cluster's first member.
    pub fn from_values(values: &[Complex64], tolerance: f64) -> Self {
        let mut sorted = values.to_vec();
        sorted.sort_by(cmp_eigen);
        let mut clusters: Vec<(Complex64, Complex64, usize)> = Vec::new();
        for z in sorted {
            match clusters.iter_mut().find(|(rep, _, _)| (*rep - z).norm() <= tolerance) {
                Some((_, sum, count)) => {
                    *sum += z;
                    *count += 1;
                }
                None => clusters.push((z, z, 1)),
            }
        }
        let mut entries: Vec<_> = clusters
            .into_iter()
            .map(|(_, sum, count)| (sum / count as f64, count))
            .collect();
        entries.sort_by(|a, b| cmp_eigen(&a.0, &b.0));
        Self { entries, tolerance }
    }

    pub fn from_real_values(values: &[f64], tolerance: f64) -> Self {
        let v: Vec<_> = values.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_values(&v, tolerance)
    }

    pub fn entries(&self) -> &[(Complex64, usize)] {
        &self.entries
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn total_multiplicity(&self) -> usize {
        self.entries.iter().map(|e| e.1).sum()
    }

    /// Multiplicity of the cluster containing `z`, 0 if none.
    pub fn multiplicity_of(&self, z: Complex64) -> usize {
        self.entries
            .iter()
            .filter(|(v, _)| (*v - z).norm() <= self.tolerance)
            .map(|e| e.1)
            .sum()
    }

    /// Expanded multiset in sorted order.
    pub fn values(&self) -> Vec<Complex64> {
        self.entries
            .iter()
            .flat_map(|&(z, k)| std::iter::repeat_n(z, k))
            .collect()
    }

    /// CSV with header `re,im,multiplicity`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("re,im,multiplicity\n");
        for (z, k) in &self.entries {
            out.push_str(&format!("{},{},{}\n", fmt_g17(z.re), fmt_g17(z.im), k));
        }
        out
    }
}

/// Eigenvalues of a real square matrix (Schur-based, via faer).
pub fn eigenvalue_list(m: &RealMatrix) -> Result<Vec<Complex64>> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::DimensionMismatch("eigenvalues need a square matrix".into()));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let fm = faer::Mat::<f64>::from_fn(n, n, |i, j| m[(i, j)]);
    let ev = fm
        .eigenvalues()
        .map_err(|e| Error::Eigen(format!("{e:?}")))?;
    let out: Vec<Complex64> = ev.iter().map(|z| Complex64::new(z.re, z.im)).collect();
    if out.len() != n || out.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Eigen("eigensolver returned non-finite values".into()));
    }
    Ok(out)
}

/// Eigenvalues of a complex square matrix.
pub fn complex_eigenvalue_list(m: &ComplexMatrix) -> Result<Vec<Complex64>> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::DimensionMismatch("eigenvalues need a square matrix".into()));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let fm = faer::Mat::<faer::c64>::from_fn(n, n, |i, j| m[(i, j)]);
    let ev = fm
        .eigenvalues()
        .map_err(|e| Error::Eigen(format!("{e:?}")))?;
    if ev.len() != n || ev.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Eigen("eigensolver returned non-finite values".into()));
    }
    Ok(ev)
}

pub fn eigenvalues(m: &RealMatrix) -> Result<Spectrum> {
    Ok(Spectrum::from_values(&eigenvalue_list(m)?, CLUSTER_TOL))
}

/// Ascending eigenvalues of a symmetric matrix.
pub fn symmetric_eigenvalues(m: &RealMatrix) -> Vec<f64> {
    let mut v: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// The two roots of λ² − 2(2μ − 1)λ + 1: (2μ − 1) ± 2√(μ(μ − 1)), with the
/// root taken as i√(μ(1 − μ)) on [0, 1]. `mu` must already be clamped.
pub fn vf_eigenvalues_from_mu(mu: f64) -> [Complex64; 2] {
    let re = 2.0 * mu - 1.0;
    let im = 2.0 * (mu * (1.0 - mu)).max(0.0).sqrt();
    [Complex64::new(re, im), Complex64::new(re, -im)]
}

#[derive(Debug, Clone)]
pub struct VfSpectrum {
    pub spectrum: Spectrum,
    /// Eigenvalues μ of K, ascending.
    pub mu: Vec<f64>,
    /// Multiplicity 2m − n − k of eigenvalue +1.
    pub plus_one: usize,
    /// Multiplicity n − k of eigenvalue −1.
    pub minus_one: usize,
    /// μ values outside [0, 1] by more than `MU_SLACK`.
    pub anomalies: Vec<f64>,
}

/// Predicted spectrum of the vertex-face walk from the spectrum of K.
pub fn vf_spectrum_via_k(emb: &EmbeddedGraph) -> Result<VfSpectrum> {
    let k_mat = face_overlap_matrix(emb)?.incidence;
    let g = emb.graph();
    vf_spectrum_from_mu(
        symmetric_eigenvalues(&k_mat),
        g.vertex_count(),
        g.edge_count(),
        emb.face_count(),
    )
}

pub fn vf_spectrum_from_mu(mu: Vec<f64>, n: usize, m: usize, k: usize) -> Result<VfSpectrum> {
    let plus = 2 * m as i64 - n as i64 - k as i64;
    let minus = n as i64 - k as i64;
    for c in [plus, minus] {
        if c < 0 {
            return Err(Error::NegativeMultiplicity(c));
        }
    }
    let mut anomalies = Vec::new();
    let mut values = Vec::with_capacity(2 * m);
    for &x in &mu {
        if !(-MU_SLACK..=1.0 + MU_SLACK).contains(&x) {
            anomalies.push(x);
        }
        values.extend(vf_eigenvalues_from_mu(x.clamp(0.0, 1.0)));
    }
    values.extend(std::iter::repeat_n(Complex64::new(1.0, 0.0), plus as usize));
    values.extend(std::iter::repeat_n(Complex64::new(-1.0, 0.0), minus as usize));
    Ok(VfSpectrum {
        spectrum: Spectrum::from_values(&values, CLUSTER_TOL),
        mu,
        plus_one: plus as usize,
        minus_one: minus as usize,
        anomalies,
    })
}

/// {2cos(2πk₁/N) + 2cos(2πk₂/N)}: the adjacency spectrum of T²_N.
pub fn torus_adjacency_spectrum(side: usize) -> Result<Spectrum> {
    if side < 3 {
        return Err(Error::NonSimpleTorus { side });
    }
    let c = |k: usize| 2.0 * (2.0 * PI * (k as f64 / side as f64)).cos();
    let mut values = Vec::with_capacity(side * side);
    for k1 in 0..side {
        for k2 in 0..side {
            values.push(c(k1) + c(k2));
        }
    }
    Ok(Spectrum::from_real_values(&values, 1e-9))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumMatch {
    pub matched: bool,
    pub max_gap: f64,
    /// `(left, right)` total multiplicities when they differ.
    pub multiplicity_mismatch: Option<(usize, usize)>,
}

/// Pairs the two multisets in angle order and, if that fails, greedily by
/// nearest neighbour; reports the largest paired distance.
pub fn spectra_match(a: &Spectrum, b: &Spectrum, tol: f64) -> SpectrumMatch {
    let (va, vb) = (a.values(), b.values());
    if va.len() != vb.len() {
        return SpectrumMatch {
            matched: false,
            max_gap: f64::INFINITY,
            multiplicity_mismatch: Some((va.len(), vb.len())),
        };
    }
    let sorted_gap = va
        .iter()
        .zip(&vb)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max);
    let gap = if sorted_gap <= tol {
        sorted_gap
    } else {
        let mut used = vec![false; vb.len()];
        let mut worst: f64 = 0.0;
        for x in &va {
            let (j, d) = vb
                .iter()
                .enumerate()
                .filter(|(j, _)| !used[*j])
                .map(|(j, y)| (j, (x - y).norm()))
                .min_by(|p, q| p.1.total_cmp(&q.1))
                .expect("equal lengths");
            used[j] = true;
            worst = worst.max(d);
        }
        worst.min(sorted_gap)
    };
    SpectrumMatch {
        matched: gap <= tol,
        max_gap: gap,
        multiplicity_mismatch: None,
    }
}
