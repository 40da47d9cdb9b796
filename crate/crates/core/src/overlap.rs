//! Fuzzy community membership ("legitimacy") and α-cuts over it.
//!
//! The legitimacy of `u` toward community `c` is the number of `u`'s
//! neighbors in `c` divided by the number of members of `c` that `u` could be
//! adjacent to: the opposite-part members for a bipartite graph, and every
//! member other than `u` for a unipartite graph.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::{Graph, Part, VertexId};
use crate::partition::{CommunityId, Partition};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LegitimacyMatrix {
    /// Column order.
    pub communities: Vec<CommunityId>,
    /// `values[u][j]` is the legitimacy of `u` toward `communities[j]`.
    pub values: Vec<Vec<f64>>,
    /// Eligible community size used as the denominator of each entry.
    pub denominators: Vec<Vec<usize>>,
    /// Column index of each vertex's assigned community.
    pub assigned: Vec<usize>,
}

impl LegitimacyMatrix {
    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn column(&self, c: CommunityId) -> Option<usize> {
        self.communities.binary_search(&c).ok()
    }

    pub fn get(&self, u: VertexId, c: CommunityId) -> Option<f64> {
        self.column(c).map(|j| self.values[u][j])
    }

    /// Column with the highest legitimacy for `u`; a tie with the assigned
    /// community resolves to the assigned one, other ties to the lowest id.
    pub fn argmax(&self, u: VertexId) -> usize {
        let row = &self.values[u];
        let own = self.assigned[u];
        let mut best = own;
        for (j, &v) in row.iter().enumerate() {
            if v > row[best] {
                best = j;
            }
        }
        best
    }

    /// Writes the matrix as CSV with a `vertex` column followed by one column
    /// per community id.
    pub fn write_csv<W: Write>(&self, g: &Graph, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["vertex".to_string()];
        header.extend(self.communities.iter().map(|c| c.to_string()));
        w.write_record(&header).map_err(csv_err)?;
        for (u, row) in self.values.iter().enumerate() {
            let mut rec = vec![g.label(u).to_string()];
            rec.extend(row.iter().map(|v| v.to_string()));
            w.write_record(&rec).map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self, g: &Graph) -> String {
        let mut buf = Vec::new();
        self.write_csv(g, &mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("labels are UTF-8")
    }
}

fn csv_err(e: csv::Error) -> crate::error::Error {
    crate::error::Error::Io(std::io::Error::other(e))
}

struct Counts {
    communities: Vec<CommunityId>,
    /// Per community: members in the top part, members in the bottom part.
    by_part: Vec<[usize; 2]>,
}

impl Counts {
    fn new(g: &Graph, p: &Partition) -> Self {
        let communities: Vec<CommunityId> = p.community_ids().collect();
        let mut by_part = vec![[0usize; 2]; communities.len()];
        for v in 0..g.n() {
            let j = communities.binary_search(&p.community_of(v)).unwrap();
            by_part[j][part_index(g.part(v))] += 1;
        }
        Counts {
            communities,
            by_part,
        }
    }

    fn denominator(&self, g: &Graph, p: &Partition, u: VertexId, j: usize) -> usize {
        let [top, bottom] = self.by_part[j];
        match g.part(u) {
            Some(Part::Top) => bottom,
            Some(Part::Bottom) => top,
            None => {
                let size = top + bottom;
                if p.community_of(u) == self.communities[j] {
                    size - 1
                } else {
                    size
                }
            }
        }
    }

    fn row(&self, g: &Graph, p: &Partition, u: VertexId) -> (Vec<f64>, Vec<usize>) {
        let mut links = vec![0usize; self.communities.len()];
        for &v in g.neighbors(u) {
            let j = self.communities.binary_search(&p.community_of(v)).unwrap();
            links[j] += 1;
        }
        let denominators: Vec<usize> = (0..self.communities.len())
            .map(|j| self.denominator(g, p, u, j))
            .collect();
        let values = links
            .iter()
            .zip(&denominators)
            .map(|(&l, &d)| if d == 0 { 0.0 } else { l as f64 / d as f64 })
            .collect();
        (values, denominators)
    }
}

fn part_index(p: Option<Part>) -> usize {
    match p {
        Some(Part::Bottom) => 1,
        _ => 0,
    }
}

/// Legitimacy of `u` toward every community of `p`, in ascending id order.
pub fn legitimacy(g: &Graph, p: &Partition, u: VertexId) -> Vec<(CommunityId, f64)> {
    let counts = Counts::new(g, p);
    let (values, _) = counts.row(g, p, u);
    counts.communities.iter().copied().zip(values).collect()
}

pub fn legitimacy_matrix(g: &Graph, p: &Partition) -> LegitimacyMatrix {
    let counts = Counts::new(g, p);
    let mut values = Vec::with_capacity(g.n());
    let mut denominators = Vec::with_capacity(g.n());
    let mut assigned = Vec::with_capacity(g.n());
    for u in 0..g.n() {
        let (v, d) = counts.row(g, p, u);
        values.push(v);
        denominators.push(d);
        assigned.push(counts.communities.binary_search(&p.community_of(u)).unwrap());
    }
    LegitimacyMatrix {
        communities: counts.communities,
        values,
        denominators,
        assigned,
    }
}

/// One vertex's row after an α-cut.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Membership {
    pub vertex: VertexId,
    pub assigned: CommunityId,
    /// Communities kept by the cut, always including the assigned one.
    pub communities: Vec<CommunityId>,
    /// The assigned community fell below the cut and is kept only because it
    /// is assigned.
    pub assigned_below_alpha: bool,
    /// Community of maximal legitimacy.
    pub preferred: CommunityId,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OverlapReport {
    pub alpha: f64,
    pub memberships: Vec<Membership>,
    /// Vertices whose maximal-legitimacy community is not their assigned one.
    pub deviants: Vec<VertexId>,
}

impl OverlapReport {
    /// Vertices that belong to more than one community after the cut.
    pub fn overlapping(&self) -> Vec<VertexId> {
        self.memberships
            .iter()
            .filter(|m| m.communities.len() > 1)
            .map(|m| m.vertex)
            .collect()
    }
}

/// Crisp memberships at level `alpha`: `u` belongs to `c` when
/// `L(u, c) >= alpha` and `L(u, c) > 0`, and always to its assigned
/// community.
pub fn alpha_cut(l: &LegitimacyMatrix, alpha: f64) -> Result<OverlapReport> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(crate::error::Error::Config(format!(
            "alpha must lie in [0, 1], got {alpha}"
        )));
    }
    let mut memberships = Vec::with_capacity(l.n());
    let mut deviants = Vec::new();
    for u in 0..l.n() {
        let own = l.assigned[u];
        let row = &l.values[u];
        let communities = (0..row.len())
            .filter(|&j| j == own || (row[j] > 0.0 && row[j] >= alpha))
            .map(|j| l.communities[j])
            .collect();
        let best = l.argmax(u);
        if best != own {
            deviants.push(u);
        }
        memberships.push(Membership {
            vertex: u,
            assigned: l.communities[own],
            communities,
            assigned_below_alpha: row[own] < alpha,
            preferred: l.communities[best],
        });
    }
    Ok(OverlapReport {
        alpha,
        memberships,
        deviants,
    })
}
