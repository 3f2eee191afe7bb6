use num_complex::Complex64;
use proptest::prelude::*;

use vfwalk::embedding::{is_circular, trace_faces, RotationSystem};
use vfwalk::graph::{Graph, TorusSpec};
use vfwalk::linalg::{log_residual, orthogonality_defect, unitarity_defect};
use vfwalk::spectra::{char_poly, eigenvalue_list, symmetric_eigenvalues};
use vfwalk::walk::{coin_walk_matrix, face_overlap_matrix, grover_matrix, vertex_face_transition, CoinSpec};
use vfwalk::zeta::{
    grover_closed_form_log, grover_determinant_log, ihara_bass_log, positive_support_log,
    vertex_face_determinant_log, vertex_face_factorization_log, walk_determinant_log, walk_fourier_log,
};

/// A connected simple graph: a random spanning tree plus random extra edges.
fn connected_graph() -> impl Strategy<Value = Graph> {
    (3usize..9)
        .prop_flat_map(|n| {
            let parents: Vec<BoxedStrategy<usize>> = (1..n).map(|v| (0..v).boxed()).collect();
            (Just(n), parents, prop::collection::vec((0..n, 0..n), 0..2 * n))
        })
        .prop_map(|(n, parents, extra)| {
            let mut edges: Vec<(usize, usize)> = parents.iter().enumerate().map(|(i, &p)| (p, i + 1)).collect();
            for (a, b) in extra {
                let e = (a.min(b), a.max(b));
                if a != b && !edges.iter().any(|&(x, y)| (x.min(y), x.max(y)) == e) {
                    edges.push(e);
                }
            }
            Graph::from_edges(n, &edges).unwrap()
        })
}

fn small_u() -> impl Strategy<Value = Complex64> {
    (0.0f64..0.3, 0.0f64..std::f64::consts::TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn arc_inverse_is_an_involution(g in connected_graph()) {
        let arcs = g.arcs();
        for e in 0..arcs.len() {
            let f = arcs.inverse(e);
            prop_assert_ne!(e, f);
            prop_assert_eq!(arcs.inverse(f), e);
            prop_assert_eq!(arcs.origin(f), arcs.terminus(e));
            prop_assert_eq!(arcs.edge_of(f), arcs.edge_of(e));
        }
    }

    #[test]
    fn grover_matrix_is_orthogonal(g in connected_graph()) {
        prop_assert!(orthogonality_defect(&grover_matrix(&g)) <= 1e-12);
    }

    #[test]
    fn grover_routes_agree(g in connected_graph(), u in small_u()) {
        let a = grover_determinant_log(&g, u).unwrap();
        let b = grover_closed_form_log(&g, u).unwrap();
        prop_assert!(log_residual(a, b) <= 1e-9, "{}", log_residual(a, b));
    }

    #[test]
    fn positive_support_matches_bass_when_min_degree_two(g in connected_graph(), u in small_u()) {
        prop_assume!(g.min_degree() >= 2);
        let a = positive_support_log(&g, u).unwrap();
        let b = ihara_bass_log(&g, u).unwrap();
        prop_assert!(log_residual(a, b) <= 1e-9, "{}", log_residual(a, b));
    }

    #[test]
    fn char_poly_vanishes_at_eigenvalues(g in connected_graph()) {
        let u = grover_matrix(&g);
        let p = char_poly(&u).unwrap();
        prop_assert_eq!(p.degree(), u.nrows());
        for z in eigenvalue_list(&u).unwrap() {
            // |p(λ)| relative to the size of its terms at |λ| = 1.
            let scale: f64 = p.coeffs().iter().map(|c| c.norm()).sum();
            prop_assert!(p.eval(z).norm() <= 1e-7 * scale, "{}", p.eval(z).norm());
        }
    }

    #[test]
    fn random_rotations_of_k4_and_k5(n in 4usize..6, seed in any::<u64>()) {
        let g = Graph::complete(n).unwrap();
        // A seeded shuffle of each neighbour list.
        let mut state = seed | 1;
        let lists: Vec<Vec<usize>> = (0..n)
            .map(|v| {
                let mut l: Vec<usize> = g.neighbors(v).collect();
                for i in (1..l.len()).rev() {
                    state ^= state << 13;
                    state ^= state >> 7;
                    state ^= state << 17;
                    l.swap(i, (state % (i as u64 + 1)) as usize);
                }
                l
            })
            .collect();
        let rot = RotationSystem::from_neighbors(&g, &lists).unwrap();
        let emb = trace_faces(&g, &rot).unwrap();
        let (nv, m, k) = (n as i64, g.edge_count() as i64, emb.face_count() as i64);
        prop_assert_eq!(nv - m + k, 2 - 2 * emb.genus() as i64);
        prop_assume!(is_circular(&emb));

        prop_assert!(orthogonality_defect(&vertex_face_transition(&emb).unwrap()) <= 1e-12);
        let kmat = face_overlap_matrix(&emb).unwrap();
        prop_assert!(kmat.residual <= 1e-12);
        for mu in symmetric_eigenvalues(&kmat.incidence) {
            prop_assert!((-1e-10..=1.0 + 1e-10).contains(&mu), "{mu}");
        }
        let u = Complex64::new(0.21, -0.13);
        let a = vertex_face_determinant_log(&emb, u).unwrap();
        let b = vertex_face_factorization_log(&emb, u).unwrap();
        prop_assert!(log_residual(a, b) <= 1e-9);
    }

    #[test]
    fn random_unitary_coins_give_unitary_walks(seed in any::<u64>(), d in 1usize..3, n in 3usize..5, u in small_u()) {
        let spec = TorusSpec::new(d, n).unwrap();
        let coin = CoinSpec::random_unitary(2 * d, seed);
        prop_assert!(coin.is_unitary());
        prop_assert!(unitarity_defect(&coin_walk_matrix(spec, &coin).unwrap()) <= 1e-12);
        let a = walk_determinant_log(spec, &coin, u).unwrap();
        let b = walk_fourier_log(spec, &coin, u).unwrap();
        prop_assert!(log_residual(a, b) <= 1e-9);
    }
}
