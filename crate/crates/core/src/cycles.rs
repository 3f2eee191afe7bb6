//! Brute-force closed-walk enumeration. These are the independent oracles the
//! determinant formulas are checked against, so they walk arc sequences
//! directly and never touch a matrix.
//!
//! Cycles are rooted, oriented arc sequences: a k-cycle is counted once per
//! starting arc, which is the convention the exponential series of a zeta
//! function expects.

use crate::error::{Error, Result};
use crate::graph::{Arc, Graph, Vertex};

/// Hard upper bound on the cycle length any enumerator accepts.
pub const MAX_ENUMERATION_ORDER: usize = 12;

/// Limit on the number of visited search nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            max_nodes: 10_000_000,
        }
    }
}

struct Counter {
    visited: u64,
    limit: u64,
}

impl Counter {
    fn new(budget: Budget) -> Self {
        Self {
            visited: 0,
            limit: budget.max_nodes,
        }
    }

    fn tick(&mut self) -> Result<()> {
        self.visited += 1;
        if self.visited > self.limit {
            Err(Error::BudgetExceeded { limit: self.limit })
        } else {
            Ok(())
        }
    }
}

fn check_order(k_max: usize) -> Result<()> {
    if k_max > MAX_ENUMERATION_ORDER {
        Err(Error::OrderTooLarge {
            requested: k_max,
            max: MAX_ENUMERATION_ORDER,
        })
    } else {
        Ok(())
    }
}

/// Counts reduced cycles (no backtracking in C nor in C²) of every length
/// 1..=k_max whose first arc is one of `starts`. Entry `k` of the result is
/// the count for length `k`; entry 0 is always 0.
fn reduced_counts_from(
    g: &Graph,
    starts: impl Iterator<Item = Arc>,
    k_max: usize,
    budget: Budget,
) -> Result<Vec<u64>> {
    check_order(k_max)?;
    let arcs = g.arcs();
    let mut counts = vec![0u64; k_max + 1];
    let mut counter = Counter::new(budget);

    fn walk(
        g: &Graph,
        first: Arc,
        last: Arc,
        len: usize,
        k_max: usize,
        counts: &mut [u64],
        counter: &mut Counter,
    ) -> Result<()> {
        counter.tick()?;
        let arcs = g.arcs();
        if arcs.terminus(last) == arcs.origin(first) && arcs.inverse(last) != first {
            counts[len] += 1;
        }
        if len == k_max {
            return Ok(());
        }
        for next in arcs.out_arcs(arcs.terminus(last)) {
            if next != arcs.inverse(last) {
                walk(g, first, next, len + 1, k_max, counts, counter)?;
            }
        }
        Ok(())
    }

    if k_max == 0 {
        return Ok(counts);
    }
    for e in starts {
        debug_assert!(e < arcs.len());
        walk(g, e, e, 1, k_max, &mut counts, &mut counter)?;
    }
    Ok(counts)
}

/// N_1..N_{k_max}: reduced cycles of each length, rooted at any arc.
pub fn reduced_cycle_counts(g: &Graph, k_max: usize, budget: Budget) -> Result<Vec<u64>> {
    reduced_counts_from(g, 0..g.arcs().len(), k_max, budget)
}

/// N⁰_1..N⁰_{k_max}: reduced cycles starting (and ending) at `x0`.
pub fn reduced_x0_cycle_counts(
    g: &Graph,
    x0: Vertex,
    k_max: usize,
    budget: Budget,
) -> Result<Vec<u64>> {
    check_vertex(g, x0)?;
    reduced_counts_from(g, g.arcs().out_arcs(x0), k_max, budget)
}

fn check_vertex(g: &Graph, x0: Vertex) -> Result<()> {
    if x0 >= g.vertex_count() {
        Err(Error::VertexOutOfRange {
            vertex: x0,
            n: g.vertex_count(),
        })
    } else {
        Ok(())
    }
}

/// The Grover weight w(e, f): 2/deg t(e) on a non-backtracking transition,
/// 2/deg t(e) − 1 on a backtrack, 0 when f does not follow e.
pub fn grover_weight(g: &Graph, e: Arc, f: Arc) -> f64 {
    let arcs = g.arcs();
    let head = arcs.terminus(e);
    if arcs.origin(f) != head {
        return 0.0;
    }
    let base = 2.0 / g.degree(head) as f64;
    if f == arcs.inverse(e) {
        base - 1.0
    } else {
        base
    }
}

/// Σ w(C) over all x0-closed paths C of each length 1..=r_max, backtracking
/// included. Entry `r` of the result is the sum for length `r`.
pub fn weighted_x0_cycle_sums(
    g: &Graph,
    x0: Vertex,
    r_max: usize,
    budget: Budget,
) -> Result<Vec<f64>> {
    check_order(r_max)?;
    check_vertex(g, x0)?;
    let mut sums = vec![0.0; r_max + 1];
    let mut counter = Counter::new(budget);

    #[allow(clippy::too_many_arguments)]
    fn walk(
        g: &Graph,
        x0: Vertex,
        first: Arc,
        last: Arc,
        weight: f64,
        len: usize,
        r_max: usize,
        sums: &mut [f64],
        counter: &mut Counter,
    ) -> Result<()> {
        counter.tick()?;
        let arcs = g.arcs();
        if arcs.terminus(last) == x0 {
            sums[len] += weight * grover_weight(g, last, first);
        }
        if len == r_max {
            return Ok(());
        }
        for next in arcs.out_arcs(arcs.terminus(last)) {
            let w = grover_weight(g, last, next);
            if w != 0.0 {
                walk(g, x0, first, next, weight * w, len + 1, r_max, sums, counter)?;
            }
        }
        Ok(())
    }

    if r_max == 0 {
        return Ok(sums);
    }
    for e in g.arcs().out_arcs(x0) {
        walk(g, x0, e, e, 1.0, 1, r_max, &mut sums, &mut counter)?;
    }
    Ok(sums)
}

pub fn counts_as_f64(counts: &[u64]) -> Vec<f64> {
    counts.iter().map(|&c| c as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_torus, TorusSpec};

    #[test]
    fn triangle_counts() {
        let c3 = Graph::cycle(3).unwrap();
        let n = reduced_cycle_counts(&c3, 6, Budget::default()).unwrap();
        assert_eq!(n, vec![0, 0, 0, 6, 0, 0, 6]);
        let n0 = reduced_x0_cycle_counts(&c3, 1, 3, Budget::default()).unwrap();
        assert_eq!(n0[3], 2);
    }

    #[test]
    fn trees_have_no_reduced_cycles() {
        let p = Graph::path(5).unwrap();
        let star = Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        for g in [p, star] {
            let n = reduced_cycle_counts(&g, 10, Budget::default()).unwrap();
            assert!(n.iter().all(|&c| c == 0));
        }
    }

    #[test]
    fn k4_triangles() {
        let k4 = Graph::complete(4).unwrap();
        let n = reduced_cycle_counts(&k4, 3, Budget::default()).unwrap();
        assert_eq!(n[3], 24);
    }

    #[test]
    fn torus_triangles_only_wrap_around() {
        // side 3: each of the 6 axis cycles counted from 3 starts in 2 directions
        let g = build_torus(TorusSpec::new(2, 3).unwrap()).unwrap();
        assert_eq!(reduced_cycle_counts(&g, 3, Budget::default()).unwrap()[3], 36);
        for side in 4..=5 {
            let g = build_torus(TorusSpec::new(2, side).unwrap()).unwrap();
            let n = reduced_cycle_counts(&g, 3, Budget::default()).unwrap();
            assert_eq!(n[3], 0, "side {side}");
        }
    }

    #[test]
    fn weighted_sums_small_cases() {
        let k4 = Graph::complete(4).unwrap();
        let s = weighted_x0_cycle_sums(&k4, 0, 3, Budget::default()).unwrap();
        assert_eq!(s[1], 0.0);
        let c4 = Graph::cycle(4).unwrap();
        let s = weighted_x0_cycle_sums(&c4, 0, 4, Budget::default()).unwrap();
        assert_eq!(s[2], 0.0);
        // On a cycle the only weighted closed walks of length 4 wrap once.
        assert_eq!(s[4], 2.0);
    }

    #[test]
    fn budget_and_order_guards() {
        let k5 = Graph::complete(5).unwrap();
        assert_eq!(
            reduced_cycle_counts(&k5, 8, Budget { max_nodes: 100 }),
            Err(Error::BudgetExceeded { limit: 100 })
        );
        assert!(matches!(
            reduced_cycle_counts(&k5, 13, Budget::default()),
            Err(Error::OrderTooLarge { .. })
        ));
        assert!(matches!(
            reduced_x0_cycle_counts(&k5, 9, 3, Budget::default()),
            Err(Error::VertexOutOfRange { .. })
        ));
    }
}
