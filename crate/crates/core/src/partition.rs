use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};

pub type CommunityId = usize;

/// Aggregates of one community.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommunityStats {
    pub members: usize,
    /// Edges with both endpoints inside the community.
    pub internal_edges: usize,
    /// Sum of member degrees.
    pub degree_sum: usize,
}

/// Vertex-to-community assignment with per-community aggregates kept in step
/// with every move.
///
/// Community ids are stable across moves; a community that loses its last
/// member is dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    community_of: Vec<CommunityId>,
    stats: BTreeMap<CommunityId, CommunityStats>,
}

impl Partition {
    pub fn from_assignment(g: &Graph, community_of: Vec<CommunityId>) -> Result<Self> {
        if community_of.len() != g.n() {
            return Err(Error::PartitionSize {
                expected: g.n(),
                got: community_of.len(),
            });
        }
        let stats = recount(g, &community_of);
        Ok(Partition {
            community_of,
            stats,
        })
    }

    pub fn singletons(g: &Graph) -> Self {
        Self::from_assignment(g, (0..g.n()).collect()).expect("sizes match")
    }

    pub fn all_in_one(g: &Graph) -> Self {
        Self::from_assignment(g, vec![0; g.n()]).expect("sizes match")
    }

    /// Builds a partition from explicit vertex groups; unlisted vertices get
    /// singleton communities after the listed ones.
    pub fn from_groups(g: &Graph, groups: &[Vec<VertexId>]) -> Result<Self> {
        let mut assign = vec![usize::MAX; g.n()];
        for (c, group) in groups.iter().enumerate() {
            for &v in group {
                if v >= g.n() {
                    return Err(Error::VertexOutOfRange(v));
                }
                assign[v] = c;
            }
        }
        let mut next = groups.len();
        for a in &mut assign {
            if *a == usize::MAX {
                *a = next;
                next += 1;
            }
        }
        Self::from_assignment(g, assign)
    }

    pub fn n(&self) -> usize {
        self.community_of.len()
    }

    #[inline]
    pub fn community_of(&self, v: VertexId) -> CommunityId {
        self.community_of[v]
    }

    pub fn assignment(&self) -> &[CommunityId] {
        &self.community_of
    }

    /// Live community ids in ascending order.
    pub fn community_ids(&self) -> impl Iterator<Item = CommunityId> + '_ {
        self.stats.keys().copied()
    }

    pub fn num_communities(&self) -> usize {
        self.stats.len()
    }

    pub fn contains(&self, c: CommunityId) -> bool {
        self.stats.contains_key(&c)
    }

    pub fn stats(&self, c: CommunityId) -> Option<&CommunityStats> {
        self.stats.get(&c)
    }

    pub fn all_stats(&self) -> &BTreeMap<CommunityId, CommunityStats> {
        &self.stats
    }

    /// Smallest id larger than every live community; a designated empty target.
    pub fn fresh_id(&self) -> CommunityId {
        self.stats.keys().next_back().map_or(0, |&c| c + 1)
    }

    pub fn members(&self, c: CommunityId) -> Vec<VertexId> {
        (0..self.n()).filter(|&v| self.community_of[v] == c).collect()
    }

    /// Communities as member lists, ordered by community id.
    pub fn groups(&self) -> Vec<Vec<VertexId>> {
        let mut by_id: BTreeMap<CommunityId, Vec<VertexId>> = BTreeMap::new();
        for (v, &c) in self.community_of.iter().enumerate() {
            by_id.entry(c).or_default().push(v);
        }
        by_id.into_values().collect()
    }

    /// Number of edges from `v` to members of `c` other than `v` itself.
    pub fn links_to(&self, g: &Graph, v: VertexId, c: CommunityId) -> usize {
        g.neighbors(v)
            .iter()
            .filter(|&&u| self.community_of[u] == c)
            .count()
    }

    /// Moves `v` into `target`, which may be a live community or any unused
    /// id (creating a new community). Stats are updated incrementally.
    pub fn move_vertex(&mut self, g: &Graph, v: VertexId, target: CommunityId) -> Result<()> {
        if v >= self.n() {
            return Err(Error::VertexOutOfRange(v));
        }
        let source = self.community_of[v];
        if source == target {
            return Ok(());
        }
        let to_source = self.links_to(g, v, source);
        let to_target = self.links_to(g, v, target);
        let d = g.deg(v);

        let s = self.stats.get_mut(&source).expect("source community is live");
        s.members -= 1;
        s.internal_edges -= to_source;
        s.degree_sum -= d;
        if s.members == 0 {
            self.stats.remove(&source);
        }
        let t = self.stats.entry(target).or_default();
        t.members += 1;
        t.internal_edges += to_target;
        t.degree_sum += d;

        self.community_of[v] = target;
        Ok(())
    }

    /// Relabels communities `0..k` in order of their smallest member.
    pub fn canonical(&self, g: &Graph) -> Partition {
        let mut map = BTreeMap::new();
        let mut assign = Vec::with_capacity(self.n());
        for &c in &self.community_of {
            let next = map.len();
            assign.push(*map.entry(c).or_insert(next));
        }
        Partition::from_assignment(g, assign).expect("sizes match")
    }

    /// Checks the incrementally maintained stats against a full recount.
    pub fn stats_consistent(&self, g: &Graph) -> bool {
        recount(g, &self.community_of) == self.stats
    }
}

pub(crate) fn recount(g: &Graph, community_of: &[CommunityId]) -> BTreeMap<CommunityId, CommunityStats> {
    let mut stats: BTreeMap<CommunityId, CommunityStats> = BTreeMap::new();
    for (v, &c) in community_of.iter().enumerate() {
        let s = stats.entry(c).or_default();
        s.members += 1;
        s.degree_sum += g.deg(v);
    }
    for &(u, v) in g.edges() {
        if community_of[u] == community_of[v] {
            stats.get_mut(&community_of[u]).unwrap().internal_edges += 1;
        }
    }
    stats
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_triangles() -> Graph {
        Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap()
    }

    #[test]
    fn moving_last_member_drops_community() {
        let g = two_triangles();
        let mut p = Partition::singletons(&g);
        p.move_vertex(&g, 0, 1).unwrap();
        assert!(!p.contains(0));
        assert_eq!(p.num_communities(), 5);
        assert!(p.stats_consistent(&g));
        assert_eq!(p.stats(1).unwrap().internal_edges, 1);
    }

    #[test]
    fn move_to_fresh_id_creates_community() {
        let g = two_triangles();
        let mut p = Partition::all_in_one(&g);
        let fresh = p.fresh_id();
        assert_eq!(fresh, 1);
        p.move_vertex(&g, 2, fresh).unwrap();
        assert!(p.stats_consistent(&g));
        assert_eq!(
            p.stats(1).copied(),
            Some(CommunityStats {
                members: 1,
                internal_edges: 0,
                degree_sum: 2
            })
        );
    }

    #[test]
    fn canonical_relabels_by_first_member() {
        let g = two_triangles();
        let p = Partition::from_assignment(&g, vec![7, 7, 7, 2, 2, 2]).unwrap();
        assert_eq!(p.canonical(&g).assignment(), &[0, 0, 0, 1, 1, 1]);
    }

    #[test]
    fn size_mismatch_rejected() {
        let g = two_triangles();
        assert!(matches!(
            Partition::from_assignment(&g, vec![0; 5]),
            Err(Error::PartitionSize { expected: 6, got: 5 })
        ));
    }
}
