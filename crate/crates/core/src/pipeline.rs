//! End-to-end runs: Louvain, then stabilization, then overlap analysis, with
//! a serializable report of every stage.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Format, Graph};
use crate::louvain::{louvain, LouvainConfig};
use crate::modularity::modularity;
use crate::nash::{stabilize, unstable_vertices, MoveTrace, StabilizeConfig, StabilizeError};
use crate::overlap::{alpha_cut, legitimacy_matrix, LegitimacyMatrix, OverlapReport};
use crate::partition::Partition;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub seed: u64,
    pub epsilon: f64,
    pub alpha: f64,
    pub max_moves: usize,
    pub allow_empty_target: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        let s = StabilizeConfig::default();
        PipelineConfig {
            seed: 0,
            epsilon: s.epsilon,
            alpha: 0.2,
            max_moves: s.max_moves,
            allow_empty_target: s.allow_empty_target,
        }
    }
}

impl PipelineConfig {
    pub fn stabilize_config(&self) -> StabilizeConfig {
        StabilizeConfig {
            epsilon: self.epsilon,
            max_moves: self.max_moves,
            allow_empty_target: self.allow_empty_target,
            debug_recompute: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputMeta {
    pub source: Option<String>,
    pub format: Format,
    pub vertices: usize,
    pub edges: usize,
}

impl InputMeta {
    pub fn new(g: &Graph, source: Option<String>) -> Self {
        InputMeta {
            source,
            format: g.format(),
            vertices: g.n(),
            edges: g.m(),
        }
    }
}

/// A partition written with vertex labels.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionReport {
    pub modularity: f64,
    pub communities: BTreeMap<usize, Vec<String>>,
}

impl PartitionReport {
    pub fn new(g: &Graph, p: &Partition) -> Result<Self> {
        let mut communities: BTreeMap<usize, Vec<String>> = BTreeMap::new();
        for v in 0..g.n() {
            communities
                .entry(p.community_of(v))
                .or_default()
                .push(g.label(v).to_string());
        }
        Ok(PartitionReport {
            modularity: modularity(g, p)?,
            communities,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MoveSummary {
    pub vertex: String,
    pub from: usize,
    pub to: usize,
    pub gain: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub input: InputMeta,
    pub config: PipelineConfig,
    pub initial: PartitionReport,
    /// Vertices of the initial partition with an improving move.
    pub unstable: Vec<String>,
    pub stabilized: Option<PartitionReport>,
    pub q_initial: f64,
    pub q_stabilized: Option<f64>,
    pub moves: Vec<MoveSummary>,
    pub trace: Option<MoveTrace>,
    pub legitimacy: Option<LegitimacyMatrix>,
    /// Always `eligible-members`: bipartite denominators count opposite-part
    /// members, unipartite ones every member except the vertex itself.
    pub legitimacy_denominator: Option<&'static str>,
    pub overlap: Option<OverlapReport>,
    pub deviants: Vec<String>,
}

/// Everything a pipeline run produced, in library form.
#[derive(Clone, Debug)]
pub struct PipelineOutput {
    pub initial: Partition,
    pub stabilized: Partition,
    pub trace: MoveTrace,
    pub legitimacy: LegitimacyMatrix,
    pub overlap: OverlapReport,
    pub report: RunReport,
}

fn labels(g: &Graph, vs: &[usize]) -> Vec<String> {
    vs.iter().map(|&v| g.label(v).to_string()).collect()
}

/// Louvain only.
pub fn detect(g: &Graph, cfg: &PipelineConfig, source: Option<String>) -> Result<(Partition, RunReport)> {
    if g.m() == 0 {
        return Err(Error::EmptyGraph);
    }
    let p = louvain(g, &LouvainConfig::with_seed(cfg.seed))?;
    let initial = PartitionReport::new(g, &p)?;
    let unstable = unstable_vertices(g, &p, cfg.epsilon)?;
    let report = RunReport {
        input: InputMeta::new(g, source),
        config: cfg.clone(),
        q_initial: initial.modularity,
        initial,
        unstable: labels(g, &unstable),
        stabilized: None,
        q_stabilized: None,
        moves: Vec::new(),
        trace: None,
        legitimacy: None,
        legitimacy_denominator: None,
        overlap: None,
        deviants: Vec::new(),
    };
    Ok((p, report))
}

/// Louvain, then stabilization to an equilibrium, then legitimacy and α-cut
/// of the stabilized partition.
pub fn run_pipeline(
    g: &Graph,
    cfg: &PipelineConfig,
    source: Option<String>,
) -> std::result::Result<PipelineOutput, StabilizeError> {
    let (initial, report) = detect(g, cfg, source)?;
    refine(g, initial, cfg, report)
}

/// Stabilization and overlap for a given starting partition.
pub fn run_from_partition(
    g: &Graph,
    initial: Partition,
    cfg: &PipelineConfig,
    source: Option<String>,
) -> std::result::Result<PipelineOutput, StabilizeError> {
    let initial_report = PartitionReport::new(g, &initial)?;
    let unstable = unstable_vertices(g, &initial, cfg.epsilon)?;
    let report = RunReport {
        input: InputMeta::new(g, source),
        config: cfg.clone(),
        q_initial: initial_report.modularity,
        initial: initial_report,
        unstable: labels(g, &unstable),
        stabilized: None,
        q_stabilized: None,
        moves: Vec::new(),
        trace: None,
        legitimacy: None,
        legitimacy_denominator: None,
        overlap: None,
        deviants: Vec::new(),
    };
    refine(g, initial, cfg, report)
}

fn refine(
    g: &Graph,
    initial: Partition,
    cfg: &PipelineConfig,
    mut report: RunReport,
) -> std::result::Result<PipelineOutput, StabilizeError> {
    let (stabilized, trace) = stabilize(g, &initial, &cfg.stabilize_config())?;
    let legitimacy = legitimacy_matrix(g, &stabilized);
    let overlap = alpha_cut(&legitimacy, cfg.alpha)?;

    let stabilized_report = PartitionReport::new(g, &stabilized)?;
    report.q_stabilized = Some(stabilized_report.modularity);
    report.stabilized = Some(stabilized_report);
    report.moves = trace
        .entries
        .iter()
        .map(|e| MoveSummary {
            vertex: g.label(e.evaluation.vertex).to_string(),
            from: e.evaluation.from,
            to: e.evaluation.to,
            gain: e.evaluation.gain,
        })
        .collect();
    report.trace = Some(trace.clone());
    report.legitimacy = Some(legitimacy.clone());
    report.legitimacy_denominator = Some("eligible-members");
    report.deviants = labels(g, &overlap.deviants);
    report.overlap = Some(overlap.clone());

    Ok(PipelineOutput {
        initial,
        stabilized,
        trace,
        legitimacy,
        overlap,
        report,
    })
}
