//! Louvain modularity optimization: local moving followed by aggregation of
//! communities into super-vertices, repeated until no vertex moves.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LouvainConfig {
    /// Seed for the per-pass vertex visit order.
    pub seed: u64,
    pub max_levels: usize,
    /// Smallest modularity gain that justifies a local move.
    pub min_gain: f64,
}

impl Default for LouvainConfig {
    fn default() -> Self {
        LouvainConfig {
            seed: 0,
            max_levels: 32,
            min_gain: 1e-9,
        }
    }
}

impl LouvainConfig {
    pub fn with_seed(seed: u64) -> Self {
        LouvainConfig {
            seed,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.max_levels < 1 {
            return Err(Error::Config("max_levels must be at least 1".into()));
        }
        if !(self.min_gain >= 0.0) {
            return Err(Error::Config("min_gain must be non-negative".into()));
        }
        Ok(())
    }
}

/// Weighted graph used inside Louvain levels. Vertex `i` of a level stands
/// for a community of the previous level; its self-loop weight is twice the
/// number of edges inside that community.
#[derive(Clone, Debug, PartialEq)]
pub struct AggregateGraph {
    adjacency: Vec<Vec<(usize, f64)>>,
    self_loops: Vec<f64>,
    strength: Vec<f64>,
    total_weight: f64,
}

impl AggregateGraph {
    pub fn from_graph(g: &Graph) -> Self {
        let adjacency: Vec<Vec<(usize, f64)>> = (0..g.n())
            .map(|v| g.neighbors(v).iter().map(|&u| (u, 1.0)).collect())
            .collect();
        let strength = (0..g.n()).map(|v| g.deg(v) as f64).collect();
        AggregateGraph {
            adjacency,
            self_loops: vec![0.0; g.n()],
            strength,
            total_weight: 2.0 * g.m() as f64,
        }
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    /// Neighbors with edge weights, excluding the self-loop.
    pub fn neighbors(&self, v: usize) -> &[(usize, f64)] {
        &self.adjacency[v]
    }

    pub fn self_loop(&self, v: usize) -> f64 {
        self.self_loops[v]
    }

    /// Weighted degree, self-loop included.
    pub fn strength(&self, v: usize) -> f64 {
        self.strength[v]
    }

    /// Sum of all adjacency entries, i.e. `2m` of the original graph.
    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    /// Weighted modularity of a vertex assignment on this level.
    pub fn modularity(&self, assign: &[usize]) -> f64 {
        let two_m = self.total_weight;
        let mut inner: BTreeMap<usize, f64> = BTreeMap::new();
        let mut tot: BTreeMap<usize, f64> = BTreeMap::new();
        for v in 0..self.n() {
            let c = assign[v];
            *tot.entry(c).or_default() += self.strength[v];
            let e = inner.entry(c).or_default();
            *e += self.self_loops[v];
            for &(u, w) in &self.adjacency[v] {
                if assign[u] == c {
                    *e += w;
                }
            }
        }
        tot.iter()
            .map(|(c, &t)| inner[c] / two_m - (t / two_m) * (t / two_m))
            .sum()
    }
}

/// One sweep over `order`, moving each vertex to the neighboring community
/// with the largest modularity gain. Returns the new assignment and whether
/// any vertex moved.
pub fn local_move_pass(
    ag: &AggregateGraph,
    assign: &[usize],
    order: &[usize],
    min_gain: f64,
) -> (Vec<usize>, bool) {
    let two_m = ag.total_weight;
    let m = two_m / 2.0;
    let mut assign = assign.to_vec();
    let mut tot: BTreeMap<usize, f64> = BTreeMap::new();
    for v in 0..ag.n() {
        *tot.entry(assign[v]).or_default() += ag.strength[v];
    }
    let mut improved = false;
    let mut links: BTreeMap<usize, f64> = BTreeMap::new();

    for &v in order {
        let k = ag.strength[v];
        let home = assign[v];
        links.clear();
        links.insert(home, 0.0);
        for &(u, w) in &ag.adjacency[v] {
            *links.entry(assign[u]).or_default() += w;
        }
        *tot.get_mut(&home).unwrap() -= k;

        // Gain of inserting v into c, in modularity units.
        let gain = |c: usize, k_in: f64| (k_in - tot.get(&c).copied().unwrap_or(0.0) * k / two_m) / m;
        let stay = gain(home, links[&home]);
        let mut best = home;
        let mut best_gain = f64::NEG_INFINITY;
        for (&c, &k_in) in &links {
            let g = gain(c, k_in);
            if g > best_gain {
                best = c;
                best_gain = g;
            }
        }
        if best != home && best_gain - stay > min_gain {
            assign[v] = best;
            improved = true;
        }
        *tot.entry(assign[v]).or_default() += k;
    }
    (assign, improved)
}

/// Collapses each community of `assign` into one vertex. Returns the new
/// level and, for each vertex of `ag`, the index of its super-vertex.
pub fn aggregate(ag: &AggregateGraph, assign: &[usize]) -> (AggregateGraph, Vec<usize>) {
    let mut ids: BTreeMap<usize, usize> = BTreeMap::new();
    for &c in assign {
        let next = ids.len();
        ids.entry(c).or_insert(next);
    }
    let node_of: Vec<usize> = assign.iter().map(|c| ids[c]).collect();
    let k = ids.len();

    let mut self_loops = vec![0.0; k];
    let mut strength = vec![0.0; k];
    let mut cross: Vec<BTreeMap<usize, f64>> = vec![BTreeMap::new(); k];
    for v in 0..ag.n() {
        let a = node_of[v];
        strength[a] += ag.strength[v];
        self_loops[a] += ag.self_loops[v];
        for &(u, w) in &ag.adjacency[v] {
            let b = node_of[u];
            if a == b {
                self_loops[a] += w;
            } else {
                *cross[a].entry(b).or_default() += w;
            }
        }
    }
    let adjacency = cross.into_iter().map(|m| m.into_iter().collect()).collect();
    (
        AggregateGraph {
            adjacency,
            self_loops,
            strength,
            total_weight: ag.total_weight,
        },
        node_of,
    )
}

/// Partitions of the original vertices after each aggregation level.
pub fn louvain_levels(g: &Graph, cfg: &LouvainConfig) -> Result<Vec<Partition>> {
    cfg.validate()?;
    if g.m() == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut ag = AggregateGraph::from_graph(g);
    let mut membership: Vec<usize> = (0..g.n()).collect();
    let mut levels = Vec::new();

    for _ in 0..cfg.max_levels {
        let mut assign: Vec<usize> = (0..ag.n()).collect();
        let mut order: Vec<usize> = (0..ag.n()).collect();
        let mut moved = false;
        loop {
            order.shuffle(&mut rng);
            let (next, improved) = local_move_pass(&ag, &assign, &order, cfg.min_gain);
            assign = next;
            if !improved {
                break;
            }
            moved = true;
        }
        if !moved {
            break;
        }
        let (next, node_of) = aggregate(&ag, &assign);
        for c in &mut membership {
            *c = node_of[*c];
        }
        levels.push(Partition::from_assignment(g, membership.clone())?.canonical(g));
        ag = next;
    }
    if levels.is_empty() {
        levels.push(Partition::singletons(g));
    }
    Ok(levels)
}

/// Runs Louvain and returns the final partition of the original vertices,
/// with communities numbered by their smallest member.
pub fn louvain(g: &Graph, cfg: &LouvainConfig) -> Result<Partition> {
    Ok(louvain_levels(g, cfg)?.pop().expect("at least one level"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modularity::modularity;

    fn two_triangles() -> Graph {
        Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap()
    }

    #[test]
    fn two_triangles_split() {
        let g = two_triangles();
        for seed in 0..8 {
            let p = louvain(&g, &LouvainConfig::with_seed(seed)).unwrap();
            assert_eq!(p.assignment(), &[0, 0, 0, 1, 1, 1]);
            assert!((modularity(&g, &p).unwrap() - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn single_edge_merges() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let ag = AggregateGraph::from_graph(&g);
        let (assign, improved) = local_move_pass(&ag, &[0, 1], &[0, 1], 1e-9);
        assert!(improved);
        assert_eq!(assign[0], assign[1]);
    }

    #[test]
    fn fixed_point_pass_is_idle() {
        let g = two_triangles();
        let ag = AggregateGraph::from_graph(&g);
        let start = [0, 0, 0, 3, 3, 3];
        let (assign, improved) = local_move_pass(&ag, &start, &[5, 4, 3, 2, 1, 0], 1e-9);
        assert!(!improved);
        assert_eq!(assign, start);
    }

    #[test]
    fn aggregate_two_triangles() {
        let g = two_triangles();
        let ag = AggregateGraph::from_graph(&g);
        let (next, node_of) = aggregate(&ag, &[0, 0, 0, 1, 1, 1]);
        assert_eq!(next.n(), 2);
        assert_eq!(node_of, vec![0, 0, 0, 1, 1, 1]);
        assert_eq!(next.self_loop(0), 6.0);
        assert_eq!(next.self_loop(1), 6.0);
        assert!(next.neighbors(0).is_empty() && next.neighbors(1).is_empty());
        assert_eq!(next.total_weight(), 12.0);
    }

    #[test]
    fn singleton_aggregate_is_identity() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (0, 3), (0, 2)]).unwrap();
        let ag = AggregateGraph::from_graph(&g);
        let (next, _) = aggregate(&ag, &[0, 1, 2, 3]);
        assert_eq!(next, ag);
    }

    #[test]
    fn isolated_vertices_stay_alone() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let p = louvain(&g, &LouvainConfig::default()).unwrap();
        assert_eq!(p.num_communities(), 3);
        assert_ne!(p.community_of(3), p.community_of(4));
    }

    #[test]
    fn bad_config_and_empty_graph() {
        let g = two_triangles();
        let cfg = LouvainConfig {
            max_levels: 0,
            ..LouvainConfig::default()
        };
        assert!(matches!(louvain(&g, &cfg), Err(Error::Config(_))));
        let empty = Graph::from_edges(3, &[]).unwrap();
        assert!(matches!(
            louvain(&empty, &LouvainConfig::default()),
            Err(Error::EmptyGraph)
        ));
    }
}
