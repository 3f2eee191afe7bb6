//! Closed forms known independently of the library's own routes.

use nalgebra::DMatrix;
use num_complex::Complex64;

use vfwalk::graph::{Graph, TorusSpec};
use vfwalk::linalg::log_residual;
use vfwalk::walk::CoinSpec;
use vfwalk::zeta::{
    grover_determinant_log, ihara_bass_log, positive_support_log, sample_points, vertex_face_determinant_log,
    walk_determinant_log, walk_fourier_log, DEFAULT_SEED,
};
use vfwalk::embedding::cycle_embedding;
use vfwalk::cycles::{reduced_cycle_counts, Budget};

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

#[test]
fn cycle_zetas_are_squares_of_one_minus_u_to_the_n() {
    // C_n has exactly two primitive reduced cycles up to rotation, so every
    // route reduces to (1 − uⁿ)².
    for n in 3..=7 {
        let g = Graph::cycle(n).unwrap();
        for u in sample_points(DEFAULT_SEED, 20) {
            let expected = (c(1.0) - u.powi(n as i32)).ln() * 2.0;
            for got in [
                ihara_bass_log(&g, u).unwrap(),
                grover_determinant_log(&g, u).unwrap(),
                positive_support_log(&g, u).unwrap(),
            ] {
                assert!(log_residual(got, expected) < 1e-12, "n={n} u={u}");
            }
        }
    }
}

#[test]
fn reduced_cycle_counts_match_nonbacktracking_traces() {
    // N_k = tr(Bᵏ) for the non-backtracking matrix B on directed edges,
    // built here straight from the edge list.
    let graphs = [Graph::complete(4).unwrap(), Graph::cycle(5).unwrap(), Graph::complete(5).unwrap()];
    for g in graphs {
        let mut darts = Vec::new();
        for &[a, b] in g.edges() {
            darts.push((a, b));
            darts.push((b, a));
        }
        let n = darts.len();
        let b = DMatrix::<f64>::from_fn(n, n, |i, j| {
            let (a0, a1) = darts[i];
            let (b0, b1) = darts[j];
            if a1 == b0 && b1 != a0 {
                1.0
            } else {
                0.0
            }
        });
        let counts = reduced_cycle_counts(&g, 6, Budget::default()).unwrap();
        let mut power = DMatrix::<f64>::identity(n, n);
        for k in 1..=6 {
            power = &power * &b;
            assert_eq!(counts[k] as f64, power.trace(), "k={k}");
        }
    }
}

#[test]
fn identity_coin_walk_is_a_shift() {
    // With the identity coin each direction is a translation whose cycles
    // have length N, so det(I − uS) = (1 − u^N)^(2d·N^(d−1)).
    for (d, n) in [(1, 3), (1, 5), (2, 3), (2, 4), (3, 3)] {
        let spec = TorusSpec::new(d, n).unwrap();
        let coin = CoinSpec::identity(2 * d);
        let exponent = (2 * d * n.pow(d as u32 - 1)) as f64;
        for u in sample_points(DEFAULT_SEED, 10) {
            let expected = (c(1.0) - u.powi(n as i32)).ln() * exponent;
            assert!(log_residual(walk_determinant_log(spec, &coin, u).unwrap(), expected) < 1e-10);
            assert!(log_residual(walk_fourier_log(spec, &coin, u).unwrap(), expected) < 1e-10);
        }
    }
}

#[test]
fn vertex_face_walk_on_the_sphere_cycle() {
    // C_n on the sphere: two n-gon faces, every vertex of degree 2. The
    // factorization gives (1 − u)^(n−2)(1 + u)^(n−2)·det((1 + u)²I − 4uK)
    // with K = [[1/2, 1/2], [1/2, 1/2]], i.e. eigenvalues 1 and 0.
    for n in 3..=6 {
        let emb = cycle_embedding(n).unwrap();
        for u in sample_points(DEFAULT_SEED, 10) {
            let one = c(1.0);
            let k_part = ((one + u) * (one + u) - u * 4.0) * (one + u) * (one + u);
            let expected = (one - u).ln() * (n as f64 - 2.0) + (one + u).ln() * (n as f64 - 2.0) + k_part.ln();
            let got = vertex_face_determinant_log(&emb, u).unwrap();
            assert!(log_residual(got, expected) < 1e-10, "n={n} u={u}");
        }
    }
}
