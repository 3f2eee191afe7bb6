//! Reciprocal zeta functions of graphs, circular embeddings and torus walks,
//! each available through more than one independent route.
//!
//! Every value is carried as a logarithm. Normalized zetas (walk and
//! vertex-face types) keep the unscaled log-determinant together with the
//! scale N^d, so comparisons never take fractional powers.

pub mod claims;
pub mod limits;

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::embedding::{dual_graph, EmbeddedGraph};
use crate::error::{Error, Result};
use crate::graph::{adjacency_matrix, degree_matrix, transition_matrix, Graph, TorusSpec};
use crate::linalg::{
    identity_minus, identity_minus_complex, log_det, to_complex, ComplexMatrix, RealMatrix,
};
use crate::quadrature::{grid_angle, GridSpec};
use crate::series::{log_one_minus_u2, SeriesOracle};
use crate::walk::{
    coin_walk_matrix, face_overlap_matrix, fourier_symbol, grover_matrix, positive_support,
    vertex_face_transition, CoinSpec,
};

pub const DEFAULT_SEED: u64 = 0xA11CE;
pub const SAMPLE_COUNT: usize = 20;
pub const SAMPLE_RADIUS: f64 = 0.9;
pub const SAMPLE_GAP: f64 = 0.05;
/// |det F| below this counts as a vanishing Fourier block.
pub const SINGULAR_DET: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    Ihara,
    Grover,
    PositiveSupport,
    Generalized,
    Walk,
    VertexFace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    Determinant,
    ClosedForm,
    Factorization,
    SeriesOracle,
    FourierProduct,
    LimitIntegral,
}

impl Route {
    pub fn name(self) -> &'static str {
        match self {
            Route::Determinant => "determinant",
            Route::ClosedForm => "closed-form",
            Route::Factorization => "factorization",
            Route::SeriesOracle => "series-oracle",
            Route::FourierProduct => "fourier-product",
            Route::LimitIntegral => "limit-integral",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaEvaluation {
    pub model: Model,
    pub route: Route,
    pub u: Complex64,
    /// Logarithm of the unnormalized reciprocal, e.g. log det(I − uU).
    pub log_det: Complex64,
    /// The reciprocal zeta is exp(log_det / scale).
    pub scale: f64,
}

impl ZetaEvaluation {
    pub fn log_value(&self) -> Complex64 {
        self.log_det / self.scale
    }

    /// Principal-branch value of the reciprocal zeta.
    pub fn value(&self) -> Complex64 {
        self.log_value().exp()
    }
}

/// `count` seeded points in |u| ≤ 0.9, each at least 0.05 away from ±1.
pub fn sample_points(seed: u64, count: usize) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let r = SAMPLE_RADIUS * rng.random::<f64>().sqrt();
        let t = 2.0 * PI * rng.random::<f64>();
        let u = Complex64::from_polar(r, t);
        if (u - 1.0).norm() >= SAMPLE_GAP && (u + 1.0).norm() >= SAMPLE_GAP {
            out.push(u);
        }
    }
    out
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// log[(1 − u²)^{r−1} det(I − uA + u²(D − I))].
pub fn ihara_bass_log(g: &Graph, u: Complex64) -> Result<Complex64> {
    let n = g.vertex_count();
    let a = adjacency_matrix(g);
    let dm = degree_matrix(g) - RealMatrix::identity(n, n);
    let m = ComplexMatrix::identity(n, n) - to_complex(&a) * u + to_complex(&dm) * (u * u);
    let r = g.betti_number();
    Ok(c((r - 1) as f64) * (c(1.0) - u * u).ln() + log_det(m)?)
}

/// log det(I − uU⁺) with U⁺ the positive support of the Grover matrix.
pub fn positive_support_log(g: &Graph, u: Complex64) -> Result<Complex64> {
    log_det(identity_minus(u, &positive_support(&grover_matrix(g))))
}

/// log det(I − uU) for the Grover matrix U.
pub fn grover_determinant_log(g: &Graph, u: Complex64) -> Result<Complex64> {
    log_det(identity_minus(u, &grover_matrix(g)))
}

/// log[(1 − u²)^{m−n} det((1 + u²)I − 2uP)] with P = D⁻¹A.
pub fn grover_closed_form_log(g: &Graph, u: Complex64) -> Result<Complex64> {
    let n = g.vertex_count();
    let p = to_complex(&transition_matrix(g));
    let m = ComplexMatrix::identity(n, n) * (c(1.0) + u * u) - p * (u * 2.0);
    let exp = g.edge_count() as f64 - n as f64;
    Ok(c(exp) * (c(1.0) - u * u).ln() + log_det(m)?)
}

/// Ihara routes: closed form (Bass) and, when every degree is at least 2,
/// the positive-support determinant.
pub fn ihara_routes(g: &Graph, u: Complex64) -> Result<Vec<ZetaEvaluation>> {
    let mut out = vec![ZetaEvaluation {
        model: Model::Ihara,
        route: Route::ClosedForm,
        u,
        log_det: ihara_bass_log(g, u)?,
        scale: 1.0,
    }];
    if g.min_degree() >= 2 {
        out.push(ZetaEvaluation {
            model: Model::Ihara,
            route: Route::Determinant,
            u,
            log_det: positive_support_log(g, u)?,
            scale: 1.0,
        });
    }
    Ok(out)
}

pub fn grover_routes(g: &Graph, u: Complex64) -> Result<Vec<ZetaEvaluation>> {
    Ok(vec![
        ZetaEvaluation {
            model: Model::Grover,
            route: Route::Determinant,
            u,
            log_det: grover_determinant_log(g, u)?,
            scale: 1.0,
        },
        ZetaEvaluation {
            model: Model::Grover,
            route: Route::ClosedForm,
            u,
            log_det: grover_closed_form_log(g, u)?,
            scale: 1.0,
        },
    ])
}

/// Truncated series of log det(I − X(u)) = −Σ tr(X(u)^k)/k, where X is a
/// matrix polynomial given by its coefficients (`x[j]` multiplies u^j,
/// `x[0]` must vanish).
fn log_det_series(x: &[RealMatrix], order: usize) -> SeriesOracle {
    let n = x[0].nrows();
    let zero = RealMatrix::zeros(n, n);
    let mut coeffs = vec![0.0; order + 1];
    let mut power: Vec<RealMatrix> = vec![zero.clone(); order + 1];
    power[0] = RealMatrix::identity(n, n);
    for k in 1..=order {
        let mut next = vec![zero.clone(); order + 1];
        for (i, p) in power.iter().enumerate() {
            if p.iter().all(|&v| v == 0.0) {
                continue;
            }
            for (j, xj) in x.iter().enumerate().skip(1) {
                if i + j <= order {
                    next[i + j] += p * xj;
                }
            }
        }
        power = next;
        for (j, p) in power.iter().enumerate() {
            coeffs[j] -= p.trace() / k as f64;
        }
    }
    SeriesOracle::new(coeffs)
}

/// Taylor series of log Z(G, u)⁻¹ from the Bass determinant.
pub fn bass_log_series(g: &Graph, order: usize) -> SeriesOracle {
    let n = g.vertex_count();
    let x = vec![
        RealMatrix::zeros(n, n),
        adjacency_matrix(g),
        RealMatrix::identity(n, n) - degree_matrix(g),
    ];
    let p = (g.betti_number() - 1) as f64;
    log_det_series(&x, order).add(&log_one_minus_u2(p, order))
}

/// Taylor series of log det(I − uU) for the Grover matrix.
pub fn grover_log_series(g: &Graph, order: usize) -> SeriesOracle {
    let u = grover_matrix(g);
    let n = u.nrows();
    log_det_series(&[RealMatrix::zeros(n, n), u], order)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Flavor {
    /// Reduced x0-cycle counts against Z^{1/n}.
    Ihara,
    /// Grover-weighted x0-cycle sums against Z̄^{1/n}.
    Grover,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesComparison {
    pub oracle: SeriesOracle,
    pub determinant: SeriesOracle,
    pub max_gap: f64,
}

fn compare(oracle: SeriesOracle, determinant: SeriesOracle) -> SeriesComparison {
    let max_gap = oracle.max_relative_gap(&determinant);
    SeriesComparison {
        oracle,
        determinant,
        max_gap,
    }
}

/// Brute-force Ihara series exp(Σ N_k u^k / k) against the inverted Bass
/// determinant series.
pub fn ihara_series(
    g: &Graph,
    order: usize,
    budget: crate::cycles::Budget,
) -> Result<SeriesComparison> {
    let counts = crate::cycles::reduced_cycle_counts(g, order, budget)?;
    let oracle = crate::series::series_exp(&crate::cycles::counts_as_f64(&counts), order);
    let determinant = bass_log_series(g, order).scale(-1.0).exp();
    Ok(compare(oracle, determinant))
}

/// Based generalized zeta at `x0` against the n-th root of the global one.
pub fn generalized_zeta_series(
    g: &Graph,
    x0: usize,
    order: usize,
    flavor: Flavor,
    budget: crate::cycles::Budget,
) -> Result<SeriesComparison> {
    let n = g.vertex_count() as f64;
    let (sums, log_det) = match flavor {
        Flavor::Ihara => (
            crate::cycles::counts_as_f64(&crate::cycles::reduced_x0_cycle_counts(
                g, x0, order, budget,
            )?),
            bass_log_series(g, order),
        ),
        Flavor::Grover => (
            crate::cycles::weighted_x0_cycle_sums(g, x0, order, budget)?,
            grover_log_series(g, order),
        ),
    };
    let oracle = crate::series::series_exp(&sums, order);
    let determinant = log_det.scale(-1.0 / n).exp();
    Ok(compare(oracle, determinant))
}

/// log det(I − u M_A) on T^d_N.
pub fn walk_determinant_log(spec: TorusSpec, coin: &CoinSpec, u: Complex64) -> Result<Complex64> {
    let m = coin_walk_matrix(spec, coin)?;
    log_det(identity_minus_complex(u, &m))
}

/// Σ_k log det F(k, u) over the momentum grid {2πj/N}^d.
pub fn walk_fourier_log(spec: TorusSpec, coin: &CoinSpec, u: Complex64) -> Result<Complex64> {
    let spec = TorusSpec::new(spec.dim, spec.side)?;
    let grid = GridSpec::new(spec.dim, spec.side)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..grid.node_count() {
        let k = grid.node(i);
        let f = identity_minus_complex(u, &fourier_symbol(coin, &k)?);
        let ld = match log_det(f) {
            Ok(v) => v,
            Err(Error::Singular) => return Err(Error::SingularPoint { k }),
            Err(e) => return Err(e),
        };
        if ld.re < SINGULAR_DET.ln() {
            return Err(Error::SingularPoint { k });
        }
        acc += ld;
    }
    Ok(acc)
}

/// Determinant, Fourier-product and (with a grid) limit-integral routes of
/// the walk-type zeta; all carry scale N^d.
pub fn walk_zeta(
    spec: TorusSpec,
    coin: &CoinSpec,
    u: Complex64,
    grid: Option<usize>,
) -> Result<Vec<ZetaEvaluation>> {
    let scale = spec.vertex_count() as f64;
    let mut out = vec![
        ZetaEvaluation {
            model: Model::Walk,
            route: Route::Determinant,
            u,
            log_det: walk_determinant_log(spec, coin, u)?,
            scale,
        },
        ZetaEvaluation {
            model: Model::Walk,
            route: Route::FourierProduct,
            u,
            log_det: walk_fourier_log(spec, coin, u)?,
            scale,
        },
    ];
    if let Some(points) = grid {
        let per_site = limits::walk_limit_log(coin, spec.dim, u, GridSpec::new(spec.dim, points)?)?;
        out.push(ZetaEvaluation {
            model: Model::Walk,
            route: Route::LimitIntegral,
            u,
            log_det: per_site * scale,
            scale,
        });
    }
    Ok(out)
}

/// Multiplicity exponents (2m − n − k, n − k) of the ±1 factors.
pub fn vertex_face_exponents(emb: &EmbeddedGraph) -> (i64, i64) {
    let g = emb.graph();
    let (n, m, k) = (
        g.vertex_count() as i64,
        g.edge_count() as i64,
        emb.face_count() as i64,
    );
    (2 * m - n - k, n - k)
}

/// log det(I − uU) for the vertex-face walk.
pub fn vertex_face_determinant_log(emb: &EmbeddedGraph, u: Complex64) -> Result<Complex64> {
    log_det(identity_minus(u, &vertex_face_transition(emb)?))
}

/// log[(1 − u)^{2m−n−k} (1 + u)^{n−k} det((1 + u)²I − 4uK)].
pub fn vertex_face_factorization_log(emb: &EmbeddedGraph, u: Complex64) -> Result<Complex64> {
    let k_mat = face_overlap_matrix(emb)?.incidence;
    factorization_log_with(emb, &k_mat, u)
}

pub(crate) fn factorization_log_with(emb: &EmbeddedGraph, k_mat: &RealMatrix, u: Complex64) -> Result<Complex64> {
    let (e1, e2) = vertex_face_exponents(emb);
    let k = k_mat.nrows();
    let m = ComplexMatrix::identity(k, k) * ((c(1.0) + u) * (c(1.0) + u)) - to_complex(k_mat) * (u * 4.0);
    Ok(c(e1 as f64) * (c(1.0) - u).ln() + c(e2 as f64) * (c(1.0) + u).ln() + log_det(m)?)
}

/// log det(λI − U).
pub fn vertex_face_char_log(emb: &EmbeddedGraph, lambda: Complex64) -> Result<Complex64> {
    let u = vertex_face_transition(emb)?;
    let n = u.nrows();
    log_det(ComplexMatrix::identity(n, n) * lambda - to_complex(&u))
}

/// log[(λ − 1)^{2m−n−k} (λ + 1)^{n−k} det((λ + 1)²I − 4λK)].
pub fn vertex_face_char_factorization_log(emb: &EmbeddedGraph, lambda: Complex64) -> Result<Complex64> {
    let (e1, e2) = vertex_face_exponents(emb);
    let k_mat = face_overlap_matrix(emb)?.incidence;
    let k = k_mat.nrows();
    let m = ComplexMatrix::identity(k, k) * ((lambda + 1.0) * (lambda + 1.0))
        - to_complex(&k_mat) * (lambda * 4.0);
    Ok(c(e1 as f64) * (lambda - 1.0).ln() + c(e2 as f64) * (lambda + 1.0).ln() + log_det(m)?)
}

/// A² + 2A for the adjacency matrix of the dual graph (faces in face order).
pub fn dual_adjacency_polynomial(emb: &EmbeddedGraph) -> Result<(RealMatrix, RealMatrix)> {
    let a = adjacency_matrix(&dual_graph(emb)?);
    let poly = &a * &a + &a * 2.0;
    Ok((a, poly))
}

/// log[(1 − u)^{2N²} det((1 + u)²I − (u/4)(A² + 2A))] on the torus embedding.
pub fn torus_adjacency_form_log(emb: &EmbeddedGraph, u: Complex64) -> Result<Complex64> {
    let (_, poly) = dual_adjacency_polynomial(emb)?;
    let k = poly.nrows();
    let m = ComplexMatrix::identity(k, k) * ((c(1.0) + u) * (c(1.0) + u)) - to_complex(&poly) * (u / 4.0);
    Ok(c(2.0 * k as f64) * (c(1.0) - u).ln() + log_det(m)?)
}

/// ¼c² + c − 2 with c = cos θ₁ + cos θ₂.
pub fn torus_closed_form_coefficient(t1: f64, t2: f64) -> f64 {
    let s = t1.cos() + t2.cos();
    0.25 * s * s + s - 2.0
}

/// log[(λ − 1)^{2N²} Π_k (λ² − λ·b(k) + 1)], the trigonometric product for
/// the characteristic polynomial of U on T²_N.
pub fn torus_char_closed_form_log(side: usize, lambda: Complex64) -> Result<Complex64> {
    let spec = TorusSpec::new(2, side)?;
    let mut acc = c(2.0 * spec.vertex_count() as f64) * (lambda - 1.0).ln();
    for k1 in 0..side {
        for k2 in 0..side {
            let b = torus_closed_form_coefficient(grid_angle(k1, side), grid_angle(k2, side));
            acc += (lambda * lambda - lambda * b + 1.0).ln();
        }
    }
    Ok(acc)
}

/// log[(1 − u)^{2N²} Π_k (u² − u·b(k) + 1)], the trigonometric product for
/// det(I − uU) on T²_N; unscaled (N² times the normalized log).
pub fn torus_closed_form_log(side: usize, u: Complex64) -> Result<Complex64> {
    let spec = TorusSpec::new(2, side)?;
    let mut acc = c(2.0 * spec.vertex_count() as f64) * (c(1.0) - u).ln();
    for k1 in 0..side {
        for k2 in 0..side {
            let b = torus_closed_form_coefficient(grid_angle(k1, side), grid_angle(k2, side));
            acc += (u * u - u * b + 1.0).ln();
        }
    }
    Ok(acc)
}

/// Determinant and factorization routes of the vertex-face zeta; on the
/// torus embedding of side N the trigonometric closed form is added.
pub fn vertex_face_zeta(
    emb: &EmbeddedGraph,
    torus_side: Option<usize>,
    u: Complex64,
) -> Result<Vec<ZetaEvaluation>> {
    let scale = emb.graph().vertex_count() as f64;
    let mut out = vec![
        ZetaEvaluation {
            model: Model::VertexFace,
            route: Route::Determinant,
            u,
            log_det: vertex_face_determinant_log(emb, u)?,
            scale,
        },
        ZetaEvaluation {
            model: Model::VertexFace,
            route: Route::Factorization,
            u,
            log_det: vertex_face_factorization_log(emb, u)?,
            scale,
        },
    ];
    if let Some(side) = torus_side {
        out.push(ZetaEvaluation {
            model: Model::VertexFace,
            route: Route::ClosedForm,
            u,
            log_det: torus_closed_form_log(side, u)?,
            scale,
        });
    }
    Ok(out)
}
