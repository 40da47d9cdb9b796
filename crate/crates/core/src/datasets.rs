//! Benchmark graphs bundled with the crate.

use std::path::PathBuf;

use crate::error::Result;
use crate::graph::{load_edge_list_str, Format, Graph};
use crate::partition::Partition;

pub const KARATE_TSV: &str = include_str!("../data/karate.tsv");
pub const SOUTHERN_WOMEN_TSV: &str = include_str!("../data/southern_women.tsv");
pub const LEGITIMACY_EXAMPLE_TSV: &str = include_str!("../data/legitimacy_example.tsv");

/// Zachary's karate club: 34 vertices labelled `1..=34`, 78 edges.
pub fn karate() -> Graph {
    load_edge_list_str(KARATE_TSV, Format::Unipartite).expect("bundled karate graph parses")
}

/// Davis' Southern Women: women `W1..W18` (top), events `E1..E14` (bottom).
pub fn southern_women() -> Graph {
    load_edge_list_str(SOUTHERN_WOMEN_TSV, Format::Bipartite)
        .expect("bundled southern women graph parses")
}

/// Small bipartite graph whose three communities hold 7, 5 and 2 events,
/// together with that partition. `W1` links to 2, 1 and 1 of them.
pub fn legitimacy_example() -> (Graph, Partition) {
    let g = load_edge_list_str(LEGITIMACY_EXAMPLE_TSV, Format::Bipartite)
        .expect("bundled legitimacy example parses");
    let group = |labels: &[&str]| -> Vec<usize> {
        labels.iter().map(|l| g.vertex(l).expect("label present")).collect()
    };
    let groups = [
        group(&["W2", "E1", "E2", "E3", "E4", "E5", "E6", "E7"]),
        group(&["W3", "E8", "E9", "E10", "E11", "E12"]),
        group(&["W1", "W4", "E13", "E14"]),
    ];
    let p = Partition::from_groups(&g, &groups).expect("fixture groups are valid");
    (g, p)
}

/// Where the dolphin network is looked up: `COMDET_DOLPHINS`, else
/// `data/dolphins.tsv` in this crate.
pub fn dolphins_path() -> PathBuf {
    std::env::var_os("COMDET_DOLPHINS")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/dolphins.tsv"))
}

/// The Lusseau dolphin network, if a copy is available locally.
pub fn dolphins() -> Option<Result<Graph>> {
    let path = dolphins_path();
    if !path.exists() {
        return None;
    }
    Some(
        std::fs::read_to_string(&path)
            .map_err(Into::into)
            .and_then(|text| load_edge_list_str(&text, Format::Unipartite)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        let k = karate();
        assert_eq!((k.n(), k.m()), (34, 78));
        let sw = southern_women();
        assert_eq!((sw.n(), sw.m()), (32, 89));
        assert_eq!(sw.degree(sw.vertex("W1").unwrap()).unwrap(), 8);
        let (g, p) = legitimacy_example();
        assert_eq!(p.num_communities(), 3);
        assert!(g.is_bipartite());
    }
}
