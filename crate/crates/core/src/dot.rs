//! Graphviz export of a partitioned graph.
//!
//! Bipartite graphs are laid out as two layers (top part above, bottom part
//! below); vertices are filled with one color per community.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::graph::{Graph, Part, VertexId};
use crate::partition::Partition;

const PALETTE: &[&str] = &[
    "#e41a1c", "#377eb8", "#ffd92f", "#4daf4a", "#984ea3", "#ff7f00", "#a65628", "#f781bf",
    "#999999", "#66c2a5", "#fc8d62", "#8da0cb",
];

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Renders `g` colored by `p`. Vertices listed in `highlight` are drawn with
/// a bold outline (e.g. the vertices moved during stabilization).
pub fn to_dot(g: &Graph, p: &Partition, highlight: &[VertexId]) -> String {
    let color: BTreeMap<usize, &str> = p
        .community_ids()
        .enumerate()
        .map(|(i, c)| (c, PALETTE[i % PALETTE.len()]))
        .collect();
    let mut out = String::new();
    let _ = writeln!(out, "graph communities {{");
    let _ = writeln!(out, "  node [style=filled, fontsize=10];");
    if g.is_bipartite() {
        let _ = writeln!(out, "  rankdir=TB; nodesep=0.15; ranksep=1.5;");
    }

    let node = |out: &mut String, v: VertexId| {
        let c = p.community_of(v);
        let shape = match g.part(v) {
            Some(Part::Bottom) => "box",
            _ => "ellipse",
        };
        let pen = if highlight.contains(&v) { ", penwidth=3" } else { "" };
        let _ = writeln!(
            out,
            "    {} [fillcolor=\"{}\", shape={shape}, tooltip=\"community {c}\"{pen}];",
            quote(g.label(v)),
            color[&c]
        );
    };

    if g.is_bipartite() {
        for (name, part, rank) in [("top", Part::Top, "min"), ("bottom", Part::Bottom, "max")] {
            let _ = writeln!(out, "  subgraph layer_{name} {{");
            let _ = writeln!(out, "    rank={rank};");
            for v in (0..g.n()).filter(|&v| g.part(v) == Some(part)) {
                node(&mut out, v);
            }
            let _ = writeln!(out, "  }}");
        }
    } else {
        for v in 0..g.n() {
            node(&mut out, v);
        }
    }

    for &(u, v) in g.edges() {
        let style = if p.community_of(u) == p.community_of(v) {
            ""
        } else {
            " [color=\"#bbbbbb\"]"
        };
        let _ = writeln!(out, "  {} -- {}{style};", quote(g.label(u)), quote(g.label(v)));
    }
    let _ = writeln!(out, "}}");
    out
}
