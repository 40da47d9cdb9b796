//! Reassignment of single vertices until no vertex gains by leaving its
//! community.
//!
//! Read as a game, each vertex is a player whose strategies are the community
//! ids and whose payoff for switching is the reassignment measure `RM`. `RM`
//! is exactly the resulting change in modularity, so modularity is a
//! potential for the game: every improving move raises `Q`, greedy best
//! response terminates, and the fixed point is a pure Nash equilibrium.
//!
//! For a vertex `w` of degree `d_w` moving from `C1` to `C2`,
//!
//! ```text
//! RM = (l2 - l1)/m - (d_w² + d_w (D2 - D1)) / (2m²)
//! ```
//!
//! where `l_i` counts edges from `w` to the other members of `C_i` and `D_i`
//! is the degree sum of `C_i` (with `D1` still including `d_w`). All terms
//! are integers, so the numerator is formed exactly and divided once.

use std::collections::BTreeMap;

use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::modularity::modularity;
use crate::partition::{CommunityId, Partition};

/// A candidate single-vertex reassignment and its modularity gain.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MoveEvaluation {
    pub vertex: VertexId,
    pub from: CommunityId,
    pub to: CommunityId,
    pub gain: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    #[serde(flatten)]
    pub evaluation: MoveEvaluation,
    pub q_before: f64,
    pub q_after: f64,
}

/// Accepted moves in the order they were applied.
///
/// Serializes as a JSON array of
/// `{vertex, from, to, gain, q_before, q_after}` objects.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct MoveTrace {
    pub entries: Vec<TraceEntry>,
    pub final_q: f64,
    /// Number of full evaluate-and-select rounds, the last of which finds
    /// no improving move.
    pub iterations: usize,
}

impl MoveTrace {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn moved_vertices(&self) -> Vec<VertexId> {
        self.entries.iter().map(|e| e.evaluation.vertex).collect()
    }
}

impl Serialize for MoveTrace {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.entries.len()))?;
        for e in &self.entries {
            seq.serialize_element(e)?;
        }
        seq.end()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilizeConfig {
    /// A move is improving only if its gain exceeds this.
    pub epsilon: f64,
    pub max_moves: usize,
    /// Also consider moving a vertex into a brand-new community.
    pub allow_empty_target: bool,
    /// Recompute every gain from scratch after each move and compare with the
    /// incrementally corrected table.
    pub debug_recompute: bool,
}

impl Default for StabilizeConfig {
    fn default() -> Self {
        StabilizeConfig {
            epsilon: 1e-9,
            max_moves: 100_000,
            allow_empty_target: false,
            debug_recompute: false,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum StabilizeError {
    #[error(transparent)]
    Input(#[from] Error),

    #[error("no equilibrium after {} moves; suspected cycle", trace.len())]
    MaxMovesExceeded {
        partition: Partition,
        trace: MoveTrace,
    },

    #[error("incremental gain for vertex {vertex} toward {to} drifted to {incremental}, expected {exact}")]
    Drift {
        vertex: VertexId,
        to: CommunityId,
        incremental: f64,
        exact: f64,
    },
}

/// `RM` from the raw counts. `l_from` and `l_to` are edges from `w` into the
/// two communities (excluding `w`), `d_from` includes `d_w`.
pub fn rm_from_counts(m: usize, d_w: usize, l_from: usize, l_to: usize, d_from: usize, d_to: usize) -> f64 {
    let (m, d_w) = (m as i128, d_w as i128);
    let num = 2 * m * (l_to as i128 - l_from as i128)
        - (d_w * d_w + d_w * (d_to as i128 - d_from as i128));
    num as f64 / (2 * m * m) as f64
}

fn check_vertex(g: &Graph, p: &Partition, w: VertexId) -> Result<()> {
    if g.m() == 0 {
        return Err(Error::EmptyGraph);
    }
    if p.n() != g.n() {
        return Err(Error::PartitionSize {
            expected: g.n(),
            got: p.n(),
        });
    }
    if w >= g.n() {
        return Err(Error::VertexOutOfRange(w));
    }
    Ok(())
}

fn rm_unchecked(g: &Graph, p: &Partition, w: VertexId, c2: CommunityId) -> f64 {
    let c1 = p.community_of(w);
    let d_w = g.deg(w);
    let l1 = p.links_to(g, w, c1);
    let d1 = p.stats(c1).expect("own community is live").degree_sum;
    if c2 == c1 {
        // Re-entering C1 means joining C1 \ {w}.
        return rm_from_counts(g.m(), d_w, l1, l1, d1, d1 - d_w);
    }
    let (l2, d2) = match p.stats(c2) {
        Some(s) => (p.links_to(g, w, c2), s.degree_sum),
        None => (0, 0),
    };
    rm_from_counts(g.m(), d_w, l1, l2, d1, d2)
}

/// Modularity gain of moving `w` from its community into the live community
/// `c2`. Moving into its own community yields exactly zero.
pub fn rm(g: &Graph, p: &Partition, w: VertexId, c2: CommunityId) -> Result<f64> {
    check_vertex(g, p, w)?;
    if !p.contains(c2) {
        return Err(Error::UnknownCommunity(c2));
    }
    Ok(rm_unchecked(g, p, w, c2))
}

/// Modularity gain of moving `w` out on its own into a new community.
pub fn rm_to_empty(g: &Graph, p: &Partition, w: VertexId) -> Result<f64> {
    check_vertex(g, p, w)?;
    Ok(rm_unchecked(g, p, w, p.fresh_id()))
}

/// Every move of every vertex to every other live community, ordered by
/// vertex then target.
pub fn rm_all(g: &Graph, p: &Partition) -> Result<Vec<MoveEvaluation>> {
    if g.m() == 0 {
        return Err(Error::EmptyGraph);
    }
    let ids: Vec<CommunityId> = p.community_ids().collect();
    let mut out = Vec::with_capacity(g.n() * ids.len().saturating_sub(1));
    for w in 0..g.n() {
        let from = p.community_of(w);
        for &to in &ids {
            if to != from {
                out.push(MoveEvaluation {
                    vertex: w,
                    from,
                    to,
                    gain: rm_unchecked(g, p, w, to),
                });
            }
        }
    }
    Ok(out)
}

/// Vertices with at least one move whose gain exceeds `epsilon`.
pub fn unstable_vertices(g: &Graph, p: &Partition, epsilon: f64) -> Result<Vec<VertexId>> {
    let mut out: Vec<VertexId> = rm_all(g, p)?
        .into_iter()
        .filter(|e| e.gain > epsilon)
        .map(|e| e.vertex)
        .collect();
    out.dedup();
    Ok(out)
}

/// Exhaustive check that no vertex gains more than `epsilon` by moving to
/// another existing community.
pub fn is_nash_equilibrium(g: &Graph, p: &Partition, epsilon: f64) -> bool {
    match rm_all(g, p) {
        Ok(all) => all.iter().all(|e| e.gain <= epsilon),
        // Without edges every gain is zero.
        Err(Error::EmptyGraph) => true,
        Err(_) => false,
    }
}

/// `A_wz - d_z d_w / 2m`: the pairwise term that drives how `z`'s gains shift
/// when `w` moves.
pub fn delta_r(g: &Graph, w: VertexId, z: VertexId) -> f64 {
    let a = if g.has_edge(w, z) { 1.0 } else { 0.0 };
    a - (g.deg(z) * g.deg(w)) as f64 / (2 * g.m()) as f64
}

/// Position of one of `z`'s communities relative to a move of `w` from `C1`
/// to `C2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Role {
    /// `C1`, the community `w` left.
    Source,
    /// `C2`, the community `w` joined.
    Target,
    /// Any community not involved in the move.
    Other,
}

impl Role {
    pub fn classify(c: CommunityId, w_move: &MoveEvaluation) -> Role {
        if c == w_move.from {
            Role::Source
        } else if c == w_move.to {
            Role::Target
        } else {
            Role::Other
        }
    }

    fn weight(self) -> i32 {
        match self {
            Role::Source => -1,
            Role::Target => 1,
            Role::Other => 0,
        }
    }
}

/// Multiplier of `delta_r / m` in the correction of `RM_{z: from -> to}`
/// after `w` moves from `C1` to `C2`.
///
/// ```text
///   to \ from   C1   C2   other
///   C1           0   -2    -1
///   C2          +2    0    +1
///   other       +1   -1     0
/// ```
pub fn correction_coefficient(z_from: Role, z_to: Role) -> i32 {
    z_to.weight() - z_from.weight()
}

/// Change of `RM_{z: from -> to}` caused by the move `w_move`, so that
/// `RM_after = RM_before + correction`.
///
/// Two `Other` roles may denote different communities; the correction is
/// zero either way.
pub fn rm_correction(
    g: &Graph,
    z: VertexId,
    z_from: Role,
    z_to: Role,
    w_move: &MoveEvaluation,
) -> Result<f64> {
    let w = w_move.vertex;
    if z >= g.n() {
        return Err(Error::VertexOutOfRange(z));
    }
    if w >= g.n() {
        return Err(Error::VertexOutOfRange(w));
    }
    if z == w {
        return Err(Error::InconsistentCase(format!(
            "vertex {z} is the vertex that moved; recompute its gains instead"
        )));
    }
    if w_move.from == w_move.to {
        return Err(Error::InconsistentCase(format!(
            "move of vertex {w} has identical source and target {}",
            w_move.from
        )));
    }
    if g.m() == 0 {
        return Err(Error::EmptyGraph);
    }
    let coeff = correction_coefficient(z_from, z_to);
    Ok(f64::from(coeff) * delta_r(g, w, z) / g.m() as f64)
}

/// Gains of every vertex toward every candidate community, kept current
/// across moves.
struct GainTable {
    rows: Vec<BTreeMap<CommunityId, f64>>,
}

impl GainTable {
    fn build(g: &Graph, p: &Partition, allow_empty: bool) -> Self {
        let rows = (0..g.n()).map(|w| Self::row(g, p, w, allow_empty)).collect();
        GainTable { rows }
    }

    fn row(g: &Graph, p: &Partition, w: VertexId, allow_empty: bool) -> BTreeMap<CommunityId, f64> {
        let own = p.community_of(w);
        let mut row: BTreeMap<CommunityId, f64> = p
            .community_ids()
            .filter(|&c| c != own)
            .map(|c| (c, rm_unchecked(g, p, w, c)))
            .collect();
        if allow_empty {
            row.insert(p.fresh_id(), rm_unchecked(g, p, w, p.fresh_id()));
        }
        row
    }

    /// Largest gain; ties go to the lowest vertex, then the lowest target.
    fn best(&self) -> Option<(VertexId, CommunityId, f64)> {
        let mut best: Option<(VertexId, CommunityId, f64)> = None;
        for (w, row) in self.rows.iter().enumerate() {
            for (&c, &gain) in row {
                if best.map_or(true, |(_, _, b)| gain > b) {
                    best = Some((w, c, gain));
                }
            }
        }
        best
    }

    /// Brings the table up to date after `mv` was applied to `p`.
    fn apply(&mut self, g: &Graph, p: &Partition, mv: &MoveEvaluation, allow_empty: bool) {
        let source_gone = !p.contains(mv.from);
        let fresh = p.fresh_id();
        for z in 0..g.n() {
            let own = p.community_of(z);
            if z == mv.vertex || own == mv.from || own == mv.to {
                self.rows[z] = Self::row(g, p, z, allow_empty);
                continue;
            }
            let row = &mut self.rows[z];
            if allow_empty {
                // The empty-target slot changes id when the id range moves.
                row.retain(|&c, _| p.contains(c));
            }
            for (&c, gain) in row.iter_mut() {
                let role = Role::classify(c, mv);
                let coeff = correction_coefficient(Role::Other, role);
                if coeff != 0 {
                    *gain += f64::from(coeff) * delta_r(g, mv.vertex, z) / g.m() as f64;
                }
            }
            if source_gone {
                row.remove(&mv.from);
            }
            if !row.contains_key(&mv.to) && mv.to != own {
                // The target was a new community.
                row.insert(mv.to, rm_unchecked(g, p, z, mv.to));
            }
            if allow_empty {
                row.insert(fresh, rm_unchecked(g, p, z, fresh));
            }
        }
    }

    fn check_against_scratch(&self, g: &Graph, p: &Partition, allow_empty: bool) -> Result<(), StabilizeError> {
        for (w, row) in self.rows.iter().enumerate() {
            let exact = Self::row(g, p, w, allow_empty);
            if exact.len() != row.len() {
                return Err(StabilizeError::Drift {
                    vertex: w,
                    to: exact.keys().find(|c| !row.contains_key(c)).copied().unwrap_or(usize::MAX),
                    incremental: f64::NAN,
                    exact: f64::NAN,
                });
            }
            for (c, &e) in &exact {
                let inc = row.get(c).copied().unwrap_or(f64::NAN);
                if !((inc - e).abs() <= 1e-12) {
                    return Err(StabilizeError::Drift {
                        vertex: w,
                        to: *c,
                        incremental: inc,
                        exact: e,
                    });
                }
            }
        }
        Ok(())
    }
}

/// Repeatedly applies the single best improving move until every gain is at
/// most `epsilon`.
///
/// After each move the gains of vertices in the two affected communities are
/// recomputed; the remaining vertices are updated with the correction table.
pub fn stabilize(
    g: &Graph,
    p: &Partition,
    cfg: &StabilizeConfig,
) -> std::result::Result<(Partition, MoveTrace), StabilizeError> {
    if !(cfg.epsilon > 0.0) {
        return Err(Error::Config("epsilon must be positive".into()).into());
    }
    let mut p = p.clone();
    let mut q = modularity(g, &p)?;
    let mut table = GainTable::build(g, &p, cfg.allow_empty_target);
    let mut trace = MoveTrace::default();

    loop {
        trace.iterations += 1;
        let Some((w, to, gain)) = table.best().filter(|&(_, _, gain)| gain > cfg.epsilon) else {
            break;
        };
        if trace.len() >= cfg.max_moves {
            trace.final_q = q;
            return Err(StabilizeError::MaxMovesExceeded { partition: p, trace });
        }
        let evaluation = MoveEvaluation {
            vertex: w,
            from: p.community_of(w),
            to,
            gain,
        };
        p.move_vertex(g, w, to)?;
        let q_after = modularity(g, &p)?;
        log::debug!(
            "move {} : {} -> {} gain {gain:.6} Q {q:.6} -> {q_after:.6}",
            g.label(w),
            evaluation.from,
            to
        );
        trace.entries.push(TraceEntry {
            evaluation,
            q_before: q,
            q_after,
        });
        q = q_after;
        table.apply(g, &p, &evaluation, cfg.allow_empty_target);
        if cfg.debug_recompute {
            table.check_against_scratch(g, &p, cfg.allow_empty_target)?;
        }
    }
    trace.final_q = q;
    Ok((p, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modularity::exact_delta_q;

    fn path3() -> Graph {
        Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn self_move_is_exactly_zero() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4)]).unwrap();
        let p = Partition::from_assignment(&g, vec![0, 0, 0, 1, 1]).unwrap();
        for w in 0..5 {
            assert_eq!(rm(&g, &p, w, p.community_of(w)).unwrap(), 0.0);
        }
    }

    #[test]
    fn path_move_matches_hand_value() {
        // c joins {a, b}: m = 2, l2 = 1, l1 = 0, d_c = 1, D1 = 1, D2 = 3.
        let g = path3();
        let p = Partition::from_assignment(&g, vec![0, 0, 1]).unwrap();
        let hand = (1.0 - 0.0) / 2.0 - (1.0 + 1.0 * (3.0 - 1.0)) / (2.0 * 4.0);
        assert_eq!(hand, 0.125);
        assert_eq!(rm(&g, &p, 2, 0).unwrap(), hand);
        assert!((exact_delta_q(&g, &p, 2, 0).unwrap() - hand).abs() < 1e-12);
    }

    #[test]
    fn unknown_target_rejected_but_empty_target_available() {
        let g = path3();
        let p = Partition::from_assignment(&g, vec![0, 0, 1]).unwrap();
        assert!(matches!(rm(&g, &p, 0, 5), Err(Error::UnknownCommunity(5))));
        let e = rm_to_empty(&g, &p, 0).unwrap();
        assert!((e - exact_delta_q(&g, &p, 0, p.fresh_id()).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn delta_r_examples() {
        let iso = Graph::from_edges(3, &[(0, 1)]).unwrap();
        assert_eq!(delta_r(&iso, 0, 2), 0.0);
        let edge = Graph::from_edges(2, &[(0, 1)]).unwrap();
        assert_eq!(delta_r(&edge, 0, 1), 0.5);
    }

    #[test]
    fn coefficient_table() {
        use Role::*;
        let expect = [
            ((Source, Source), 0),
            ((Target, Source), -2),
            ((Other, Source), -1),
            ((Source, Target), 2),
            ((Target, Target), 0),
            ((Other, Target), 1),
            ((Source, Other), 1),
            ((Target, Other), -1),
            ((Other, Other), 0),
        ];
        // Entries are (z_from, z_to) -> coefficient.
        for ((from, to), c) in expect {
            assert_eq!(correction_coefficient(from, to), c, "{from:?} -> {to:?}");
        }
    }

    #[test]
    fn correction_rejects_inconsistent_requests() {
        let g = path3();
        let mv = MoveEvaluation {
            vertex: 1,
            from: 0,
            to: 1,
            gain: 0.0,
        };
        assert!(matches!(
            rm_correction(&g, 1, Role::Source, Role::Target, &mv),
            Err(Error::InconsistentCase(_))
        ));
        let null = MoveEvaluation { to: 0, ..mv };
        assert!(matches!(
            rm_correction(&g, 0, Role::Source, Role::Target, &null),
            Err(Error::InconsistentCase(_))
        ));
        assert_eq!(rm_correction(&g, 0, Role::Other, Role::Other, &mv).unwrap(), 0.0);
    }

    #[test]
    fn split_edge_is_not_equilibrium() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let p = Partition::singletons(&g);
        // RM = 1/1 - (1 + 1*(1 - 1)) / 2 = 0.5
        assert_eq!(rm(&g, &p, 0, 1).unwrap(), 0.5);
        assert!(!is_nash_equilibrium(&g, &p, 1e-9));
    }

    #[test]
    fn merged_triangles_are_a_single_move_equilibrium() {
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        let p = Partition::all_in_one(&g);
        assert!(is_nash_equilibrium(&g, &p, 1e-9));
        // Leaving alone loses: (0 - 2)/6 - (4 + 2 (0 - 12)) / 72 = -1/18.
        let out = rm_to_empty(&g, &p, 0).unwrap();
        assert!((out + 1.0 / 18.0).abs() < 1e-15);
        let (_, trace) = stabilize(
            &g,
            &p,
            &StabilizeConfig {
                allow_empty_target: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(trace.is_empty());
    }

    #[test]
    fn empty_target_moves_are_tracked() {
        // Star center with a pendant pair glued on: {0,1,2,3} | {4,5} is
        // improved by letting 3 leave for a new community.
        let g = Graph::from_edges(6, &[(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)]).unwrap();
        let p = Partition::from_assignment(&g, vec![0, 0, 0, 0, 1, 1]).unwrap();
        let cfg = StabilizeConfig {
            allow_empty_target: true,
            debug_recompute: true,
            ..Default::default()
        };
        let (out, trace) = stabilize(&g, &p, &cfg).unwrap();
        assert_eq!(trace.moved_vertices(), vec![3]);
        assert!(is_nash_equilibrium(&g, &out, 1e-9));
        assert!(out.stats_consistent(&g));
    }

    #[test]
    fn stabilize_fixes_split_edge() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let (p, trace) = stabilize(&g, &Partition::singletons(&g), &StabilizeConfig::default()).unwrap();
        assert_eq!(p.num_communities(), 1);
        assert_eq!(trace.len(), 1);
        let e = trace.entries[0];
        assert_eq!((e.evaluation.vertex, e.evaluation.from, e.evaluation.to), (0, 0, 1));
        assert_eq!(e.q_before, -0.5);
        assert_eq!(e.q_after, 0.0);
        assert_eq!(trace.iterations, 2);
    }

    #[test]
    fn max_moves_carries_partial_trace() {
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        let cfg = StabilizeConfig {
            max_moves: 1,
            ..Default::default()
        };
        match stabilize(&g, &Partition::singletons(&g), &cfg) {
            Err(StabilizeError::MaxMovesExceeded { trace, partition }) => {
                assert_eq!(trace.len(), 1);
                assert_eq!(partition.num_communities(), 3);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn trace_serializes_as_flat_array() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let (_, trace) = stabilize(&g, &Partition::singletons(&g), &StabilizeConfig::default()).unwrap();
        let v: serde_json::Value = serde_json::to_value(&trace).unwrap();
        let row = &v.as_array().unwrap()[0];
        for key in ["vertex", "from", "to", "gain", "q_before", "q_after"] {
            assert!(row.get(key).is_some(), "missing {key}");
        }
    }
}
