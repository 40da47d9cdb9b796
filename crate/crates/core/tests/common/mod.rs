#![allow(dead_code)]

use comdet::{Graph, Partition};

/// Modularity by the double sum over all vertex pairs,
/// `(1/2m) Σ_ij [A_ij − k_i k_j / 2m] δ(c_i, c_j)`.
pub fn pair_sum_modularity(g: &Graph, p: &Partition) -> f64 {
    let two_m = 2.0 * g.m() as f64;
    let mut q = 0.0;
    for i in 0..g.n() {
        for j in 0..g.n() {
            if p.community_of(i) != p.community_of(j) {
                continue;
            }
            let a = if g.has_edge(i, j) { 1.0 } else { 0.0 };
            q += a - (g.deg(i) * g.deg(j)) as f64 / two_m;
        }
    }
    q / two_m
}

/// Gain of moving `w` to `target` by two pair-sum evaluations.
pub fn pair_sum_delta(g: &Graph, p: &Partition, w: usize, target: usize) -> f64 {
    let mut assign = p.assignment().to_vec();
    assign[w] = target;
    let moved = Partition::from_assignment(g, assign).unwrap();
    pair_sum_modularity(g, &moved) - pair_sum_modularity(g, p)
}
