//! Randomized cross-checks of the incremental formulas against full
//! re-evaluation.
//!
//! Each trial draws `G(n, 0.2)` and a random partition, then checks
//!
//! * `rm` against [`exact_delta_q`] for every vertex and every target,
//!   including a fresh empty community;
//! * incrementally maintained community stats against a recount after a
//!   random move;
//! * every gain corrected through [`rm_correction`] against its from-scratch
//!   value after that move.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::generate::{gnp_nonempty, random_partition};
use crate::graph::{Graph, VertexId};
use crate::modularity::exact_delta_q;
use crate::nash::{rm, rm_correction, rm_to_empty, MoveEvaluation, Role};
use crate::partition::{CommunityId, Partition};

pub const TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub trials: usize,
    pub max_n: usize,
    pub seed: u64,
    pub edge_prob: f64,
    /// Perturb every incremental value so that the harness must fail.
    pub inject_fault: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            trials: 100,
            max_n: 30,
            seed: 0,
            edge_prob: 0.2,
            inject_fault: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Potential,
    Stats,
    Correction,
}

/// Everything needed to replay a failed check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FailingInstance {
    pub trial: usize,
    pub kind: CheckKind,
    pub n: usize,
    pub edges: Vec<(VertexId, VertexId)>,
    pub assignment: Vec<CommunityId>,
    /// The vertex whose gain was checked.
    pub vertex: VertexId,
    pub target: CommunityId,
    /// For correction checks, the move applied before the check.
    pub applied_move: Option<MoveEvaluation>,
    pub expected: f64,
    pub got: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VerifySummary {
    pub trials: usize,
    pub potential_checks: usize,
    pub correction_checks: usize,
    pub stats_checks: usize,
    pub max_potential_error: f64,
    pub max_correction_error: f64,
    pub failure: Option<FailingInstance>,
}

impl VerifySummary {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

struct Trial<'a> {
    index: usize,
    g: &'a Graph,
    fault: f64,
}

impl Trial<'_> {
    fn fail(
        &self,
        kind: CheckKind,
        p: &Partition,
        vertex: VertexId,
        target: CommunityId,
        applied_move: Option<MoveEvaluation>,
        expected: f64,
        got: f64,
    ) -> FailingInstance {
        FailingInstance {
            trial: self.index,
            kind,
            n: self.g.n(),
            edges: self.g.edges().to_vec(),
            assignment: p.assignment().to_vec(),
            vertex,
            target,
            applied_move,
            expected,
            got,
        }
    }
}

/// Checks `rm` against full re-evaluation for every vertex and target of `p`.
/// Returns the largest deviation seen, or the first failing instance.
pub fn check_potential(
    g: &Graph,
    p: &Partition,
) -> Result<std::result::Result<(f64, usize), (VertexId, CommunityId, f64, f64)>> {
    check_potential_with(g, p, 0.0)
}

fn check_potential_with(
    g: &Graph,
    p: &Partition,
    fault: f64,
) -> Result<std::result::Result<(f64, usize), (VertexId, CommunityId, f64, f64)>> {
    let mut worst = 0.0f64;
    let mut count = 0;
    let fresh = p.fresh_id();
    let targets: Vec<CommunityId> = p.community_ids().chain(std::iter::once(fresh)).collect();
    for w in 0..g.n() {
        for &c in &targets {
            let fast = if c == fresh {
                rm_to_empty(g, p, w)?
            } else {
                rm(g, p, w, c)?
            } + fault;
            let exact = exact_delta_q(g, p, w, c)?;
            let err = (fast - exact).abs();
            count += 1;
            if !(err <= TOLERANCE) {
                return Ok(Err((w, c, exact, fast)));
            }
            worst = worst.max(err);
        }
    }
    Ok(Ok((worst, count)))
}

pub fn verify(cfg: &VerifyConfig) -> Result<VerifySummary> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut summary = VerifySummary::default();
    let fault = if cfg.inject_fault { 1e-6 } else { 0.0 };
    let max_n = cfg.max_n.max(2);

    for index in 0..cfg.trials {
        summary.trials += 1;
        let n = rng.gen_range(2..=max_n);
        let g = gnp_nonempty(n, cfg.edge_prob, &mut rng);
        let k = rng.gen_range(1..=n);
        let p = random_partition(&g, k, &mut rng);
        let trial = Trial {
            index,
            g: &g,
            fault,
        };

        match check_potential_with(&g, &p, trial.fault)? {
            Ok((worst, count)) => {
                summary.potential_checks += count;
                summary.max_potential_error = summary.max_potential_error.max(worst);
            }
            Err((w, c, expected, got)) => {
                summary.failure = Some(trial.fail(CheckKind::Potential, &p, w, c, None, expected, got));
                return Ok(summary);
            }
        }

        // Random move: another live community, or a new one.
        let w = rng.gen_range(0..n);
        let from = p.community_of(w);
        let mut targets: Vec<CommunityId> = p.community_ids().filter(|&c| c != from).collect();
        if p.members(from).len() > 1 {
            targets.push(p.fresh_id());
        }
        if targets.is_empty() {
            continue;
        }
        let to = targets[rng.gen_range(0..targets.len())];
        let mv = MoveEvaluation {
            vertex: w,
            from,
            to,
            gain: exact_delta_q(&g, &p, w, to)?,
        };
        let mut after = p.clone();
        after.move_vertex(&g, w, to)?;
        summary.stats_checks += 1;
        if !after.stats_consistent(&g) {
            summary.failure = Some(trial.fail(CheckKind::Stats, &p, w, to, Some(mv), 0.0, 1.0));
            return Ok(summary);
        }

        for z in (0..n).filter(|&z| z != w) {
            let own = p.community_of(z);
            for c in p.community_ids().filter(|&c| c != own && after.contains(c)) {
                let before = rm(&g, &p, z, c)?;
                let corr = rm_correction(&g, z, Role::classify(own, &mv), Role::classify(c, &mv), &mv)?;
                let incremental = before + corr + trial.fault;
                let scratch = rm(&g, &after, z, c)?;
                let err = (incremental - scratch).abs();
                summary.correction_checks += 1;
                if !(err <= TOLERANCE) {
                    summary.failure = Some(trial.fail(
                        CheckKind::Correction,
                        &p,
                        z,
                        c,
                        Some(mv),
                        scratch,
                        incremental,
                    ));
                    return Ok(summary);
                }
                summary.max_correction_error = summary.max_correction_error.max(err);
            }
        }
    }
    Ok(summary)
}
