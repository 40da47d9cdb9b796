//! Random instances for property checks and the verification sweep.

use rand::Rng;

use crate::graph::Graph;
use crate::partition::Partition;

/// Erdős–Rényi `G(n, p)`.
pub fn gnp<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).expect("generated edges are valid")
}

/// `G(n, p)` with the edge `(0, 1)` forced in, so that `m >= 1` for `n >= 2`.
pub fn gnp_nonempty<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Graph {
    let g = gnp(n, p, rng);
    if g.m() > 0 || n < 2 {
        return g;
    }
    Graph::from_edges(n, &[(0, 1)]).expect("valid edge")
}

/// Uniform assignment of the vertices to at most `k` communities.
pub fn random_partition<R: Rng + ?Sized>(g: &Graph, k: usize, rng: &mut R) -> Partition {
    let k = k.max(1);
    let assign = (0..g.n()).map(|_| rng.gen_range(0..k)).collect();
    Partition::from_assignment(g, assign).expect("sizes match")
}
