//! Newman modularity of a partition of a binary graph.
//!
//! The production path evaluates the community-sum form
//! `Q = Σ_C [ |e_C|/m − (d_C/2m)² ]`, which is linear in the graph size.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::partition::{recount, CommunityId, CommunityStats, Partition};

fn check(g: &Graph, p: &Partition) -> Result<f64> {
    if p.n() != g.n() {
        return Err(Error::PartitionSize {
            expected: g.n(),
            got: p.n(),
        });
    }
    if g.m() == 0 {
        return Err(Error::EmptyGraph);
    }
    Ok(g.m() as f64)
}

/// Modularity from a set of community aggregates.
pub fn modularity_from_stats<'a>(
    m: f64,
    stats: impl IntoIterator<Item = &'a CommunityStats>,
) -> f64 {
    let two_m = 2.0 * m;
    stats
        .into_iter()
        .map(|s| {
            let share = s.degree_sum as f64 / two_m;
            s.internal_edges as f64 / m - share * share
        })
        .sum()
}

/// Modularity of `p` using the partition's maintained aggregates.
pub fn modularity(g: &Graph, p: &Partition) -> Result<f64> {
    let m = check(g, p)?;
    Ok(modularity_from_stats(m, p.all_stats().values()))
}

/// Per-community aggregates recounted from scratch.
pub fn community_stats(g: &Graph, p: &Partition) -> BTreeMap<CommunityId, CommunityStats> {
    recount(g, p.assignment())
}

/// Change in modularity when `w` moves to `target`, by full re-evaluation of
/// both partitions from recounted aggregates.
///
/// `target` must be live in `p` or equal to `p.fresh_id()`.
pub fn exact_delta_q(g: &Graph, p: &Partition, w: VertexId, target: CommunityId) -> Result<f64> {
    let m = check(g, p)?;
    if w >= g.n() {
        return Err(Error::VertexOutOfRange(w));
    }
    if !p.contains(target) && target != p.fresh_id() {
        return Err(Error::UnknownCommunity(target));
    }
    let before = modularity_from_stats(m, recount(g, p.assignment()).values());
    let mut moved = p.assignment().to_vec();
    moved[w] = target;
    let after = modularity_from_stats(m, recount(g, &moved).values());
    Ok(after - before)
}
