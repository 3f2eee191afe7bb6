//! Arc-space walk operators: the Grover matrix, its positive support, the
//! vertex-face walk with its incidence matrices and face-overlap matrix K,
//! and the coin walk M_A on T^d_N together with its Fourier symbol.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::embedding::{require_circular, EmbeddedGraph};
use crate::error::{Error, Result};
use crate::graph::{Graph, TorusSpec};
use crate::linalg::{max_abs, unitarity_defect, ComplexMatrix, RealMatrix};

/// U_{ef} = 2/d_{t(f)} − δ_{f,e⁻¹} whenever t(f) = o(e).
pub fn grover_matrix(g: &Graph) -> RealMatrix {
    let arcs = g.arcs();
    let two_m = arcs.len();
    let mut u = RealMatrix::zeros(two_m, two_m);
    for e in 0..two_m {
        let v = arcs.origin(e);
        let base = 2.0 / g.degree(v) as f64;
        for out in arcs.out_arcs(v) {
            let f = arcs.inverse(out);
            u[(e, f)] = if f == arcs.inverse(e) { base - 1.0 } else { base };
        }
    }
    u
}

/// 1 where the entry is strictly positive, else 0.
pub fn positive_support(f: &RealMatrix) -> RealMatrix {
    f.map(|x| if x > 0.0 { 1.0 } else { 0.0 })
}

/// M (2m×k): M_{ef} = 1 iff arc e lies on face f.
pub fn arc_face_incidence(emb: &EmbeddedGraph) -> Result<RealMatrix> {
    require_circular(emb)?;
    let two_m = emb.graph().arcs().len();
    let mut m = RealMatrix::zeros(two_m, emb.face_count());
    for e in 0..two_m {
        m[(e, emb.face_of_arc(e))] = 1.0;
    }
    Ok(m)
}

/// N (2m×n): N_{ev} = 1 iff o(e) = v.
pub fn arc_origin_incidence(g: &Graph) -> RealMatrix {
    let arcs = g.arcs();
    let mut n = RealMatrix::zeros(arcs.len(), g.vertex_count());
    for e in 0..arcs.len() {
        n[(e, arcs.origin(e))] = 1.0;
    }
    n
}

/// Divides every column by its Euclidean norm.
pub fn normalize_columns(m: &RealMatrix, which: &'static str) -> Result<RealMatrix> {
    let mut out = m.clone();
    for (j, mut col) in out.column_iter_mut().enumerate() {
        let norm = col.norm();
        if norm == 0.0 {
            return Err(Error::ZeroColumn { which, index: j });
        }
        col.unscale_mut(norm);
    }
    Ok(out)
}

/// (M̂, N̂) for a circular embedding.
pub fn normalized_incidences(emb: &EmbeddedGraph) -> Result<(RealMatrix, RealMatrix)> {
    let m_hat = normalize_columns(&arc_face_incidence(emb)?, "arc-face incidence")?;
    let n_hat = normalize_columns(&arc_origin_incidence(emb.graph()), "arc-origin incidence")?;
    Ok((m_hat, n_hat))
}

/// 2XXᵀ − I for X with orthonormal columns.
pub fn reflection(x: &RealMatrix) -> RealMatrix {
    let rows = x.nrows();
    x * x.transpose() * 2.0 - RealMatrix::identity(rows, rows)
}

/// U = (2M̂M̂ᵀ − I)(2N̂N̂ᵀ − I).
pub fn vertex_face_transition(emb: &EmbeddedGraph) -> Result<RealMatrix> {
    let (m_hat, n_hat) = normalized_incidences(emb)?;
    Ok(reflection(&m_hat) * reflection(&n_hat))
}

#[derive(Debug, Clone)]
pub struct FaceOverlap {
    /// K_{fh} = Σ_{u ∈ f∩h} (1/deg u) / √(|f||h|), from boundary vertex sets.
    pub direct: RealMatrix,
    /// M̂ᵀN̂N̂ᵀM̂.
    pub incidence: RealMatrix,
    pub residual: f64,
}

pub fn face_overlap_matrix(emb: &EmbeddedGraph) -> Result<FaceOverlap> {
    let (m_hat, n_hat) = normalized_incidences(emb)?;
    let x = n_hat.transpose() * &m_hat;
    let incidence = x.transpose() * x;

    let g = emb.graph();
    let k = emb.face_count();
    let sets: Vec<std::collections::BTreeSet<usize>> = emb
        .faces()
        .iter()
        .map(|f| f.vertices().iter().copied().collect())
        .collect();
    let mut direct = RealMatrix::zeros(k, k);
    for f in 0..k {
        for h in 0..k {
            let s: f64 = sets[f]
                .intersection(&sets[h])
                .map(|&u| 1.0 / g.degree(u) as f64)
                .sum();
            let norm = (emb.faces()[f].len() as f64 * emb.faces()[h].len() as f64).sqrt();
            direct[(f, h)] = s / norm;
        }
    }
    let residual = max_abs(&(&direct - &incidence));
    Ok(FaceOverlap {
        direct,
        incidence,
        residual,
    })
}

const COIN_TOL: f64 = 1e-12;

/// A d_c×d_c coin matrix with its walk classification.
#[derive(Debug, Clone, PartialEq)]
pub struct CoinSpec {
    matrix: ComplexMatrix,
    is_stochastic: bool,
    is_unitary: bool,
}

impl CoinSpec {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "coin must be square, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::DimensionMismatch("coin has non-finite entries".into()));
        }
        let is_unitary = unitarity_defect(&matrix) <= COIN_TOL;
        let is_stochastic = matrix.iter().all(|z| {
            z.im.abs() <= COIN_TOL && z.re >= -COIN_TOL && z.re <= 1.0 + COIN_TOL
        }) && matrix
            .column_iter()
            .all(|c| (c.iter().map(|z| z.re).sum::<f64>() - 1.0).abs() <= COIN_TOL);
        Ok(Self {
            matrix,
            is_stochastic,
            is_unitary,
        })
    }

    pub fn from_real(m: &RealMatrix) -> Result<Self> {
        Self::new(crate::linalg::to_complex(m))
    }

    pub fn identity(size: usize) -> Self {
        Self::new(ComplexMatrix::identity(size, size)).expect("identity coin")
    }

    /// Grover coin 2/d_c − δ_ij.
    pub fn grover(size: usize) -> Self {
        let m = RealMatrix::from_fn(size, size, |i, j| {
            2.0 / size as f64 - if i == j { 1.0 } else { 0.0 }
        });
        Self::from_real(&m).expect("grover coin")
    }

    /// Grover coin with the paired rows (+e_j, −e_j) swapped: 2/d_c − δ_{ī j}.
    /// With this coin M_A is permutation-similar to the Grover matrix of T^d_N.
    pub fn flip_flop_grover(size: usize) -> Self {
        let m = RealMatrix::from_fn(size, size, |i, j| {
            2.0 / size as f64 - if (i ^ 1) == j { 1.0 } else { 0.0 }
        });
        Self::from_real(&m).expect("flip-flop grover coin")
    }

    /// Haar-distributed unitary: QR of a complex Gaussian matrix with the
    /// phases of R's diagonal folded into Q.
    pub fn random_unitary(size: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let z = ComplexMatrix::from_fn(size, size, |_, _| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            Complex64::new(re, im)
        });
        let qr = z.qr();
        let (mut q, r) = (qr.q(), qr.r());
        for j in 0..size {
            let d = r[(j, j)];
            let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
            for i in 0..size {
                q[(i, j)] *= phase;
            }
        }
        Self::new(q).expect("random unitary coin")
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn size(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn is_stochastic(&self) -> bool {
        self.is_stochastic
    }

    pub fn is_unitary(&self) -> bool {
        self.is_unitary
    }

    fn check_size(&self, expected: usize) -> Result<()> {
        if self.size() != expected {
            return Err(Error::CoinSizeMismatch {
                expected,
                rows: self.matrix.nrows(),
                cols: self.matrix.ncols(),
            });
        }
        Ok(())
    }
}

/// M_A = Σ_j (P_{2j−1} A τ_j⁻¹ + P_{2j} A τ_j) on C^{2d} ⊗ C^{N^d}.
///
/// State `(x, s)` has index `x * 2d + s`; slot 2j reads the coin output from
/// x + e_j, slot 2j+1 from x − e_j, so this matches the torus arc layout.
pub fn coin_walk_matrix(spec: TorusSpec, coin: &CoinSpec) -> Result<ComplexMatrix> {
    let spec = TorusSpec::new(spec.dim, spec.side)?;
    let slots = spec.slots();
    coin.check_size(slots)?;
    let n = spec.vertex_count();
    let a = coin.matrix();
    let mut m = ComplexMatrix::zeros(n * slots, n * slots);
    for x in 0..n {
        for s in 0..slots {
            let y = spec.step(x, s);
            for t in 0..slots {
                m[(x * slots + s, y * slots + t)] = a[(s, t)];
            }
        }
    }
    Ok(m)
}

/// M̂_A(w) = Σ_j (e^{i w_j} P_{2j−1} A + e^{−i w_j} P_{2j} A).
pub fn fourier_symbol(coin: &CoinSpec, w: &[f64]) -> Result<ComplexMatrix> {
    let d = w.len();
    if d == 0 {
        return Err(Error::DimensionMismatch("empty momentum vector".into()));
    }
    coin.check_size(2 * d)?;
    let mut out = coin.matrix().clone();
    for (j, &wj) in w.iter().enumerate() {
        let plus = Complex64::from_polar(1.0, wj);
        for c in 0..2 * d {
            out[(2 * j, c)] *= plus;
            out[(2 * j + 1, c)] *= plus.conj();
        }
    }
    Ok(out)
}

/// Column sums of a complex matrix (real parts).
pub fn column_sums(m: &ComplexMatrix) -> Vec<Complex64> {
    m.column_iter().map(|c| c.iter().sum()).collect()
}

/// Permutation taking Grover-matrix arc indices to coin-walk state indices on
/// T^d_N, under which U_Grover = Π M_A(flip-flop Grover) Πᵀ.
///
/// Arc `v*2d + s` leaves v in direction s; it corresponds to the coin state
/// sitting at its head with the opposite slot.
pub fn arc_to_coin_state(spec: TorusSpec) -> Vec<usize> {
    let slots = spec.slots();
    (0..spec.vertex_count() * slots)
        .map(|arc| {
            let (v, s) = (arc / slots, arc % slots);
            spec.step(v, s) * slots + (s ^ 1)
        })
        .collect()
}

/// Dense real copy of a matrix known to be real.
pub fn real_part(m: &ComplexMatrix) -> RealMatrix {
    m.map(|z| z.re)
}
