//! Simple undirected binary graphs, optionally bipartite.
//!
//! A bipartite graph is stored as an ordinary graph over the union of its two
//! parts; the part label of each vertex is kept alongside so that consumers
//! (legitimacy denominators, DOT layout) can tell the layers apart.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::io::BufRead;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense vertex index in `0..n`.
pub type VertexId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Part {
    Top,
    Bottom,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Unipartite,
    Bipartite,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unipartite" => Ok(Format::Unipartite),
            "bipartite" => Ok(Format::Bipartite),
            other => Err(Error::Config(format!("unknown format `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    labels: Vec<String>,
    index: HashMap<String, VertexId>,
    adjacency: Vec<Vec<VertexId>>,
    edges: Vec<(VertexId, VertexId)>,
    parts: Option<Vec<Part>>,
}

impl Graph {
    /// Builds a unipartite graph on `n` vertices labelled `0..n`.
    pub fn from_edges(n: usize, edges: &[(VertexId, VertexId)]) -> Result<Self> {
        let labels = (0..n).map(|i| i.to_string()).collect();
        Self::build(labels, edges, None)
    }

    /// Builds a graph from explicit labels, edges and optional part labels.
    ///
    /// Duplicate edges are merged; self-loops and (when parts are given)
    /// same-part edges are rejected.
    pub fn build(
        labels: Vec<String>,
        edges: &[(VertexId, VertexId)],
        parts: Option<Vec<Part>>,
    ) -> Result<Self> {
        let n = labels.len();
        if let Some(p) = &parts {
            if p.len() != n {
                return Err(Error::Config(format!(
                    "{} part labels for {n} vertices",
                    p.len()
                )));
            }
        }
        let mut index = HashMap::with_capacity(n);
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::Config(format!("duplicate vertex label `{l}`")));
            }
        }
        let mut seen = HashSet::with_capacity(edges.len());
        let mut norm = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::EdgeOutOfRange(u, v));
            }
            if u == v {
                return Err(Error::SelfLoop {
                    line: 0,
                    label: labels[u].clone(),
                });
            }
            if let Some(p) = &parts {
                if p[u] == p[v] {
                    return Err(Error::SamePart {
                        line: 0,
                        u: labels[u].clone(),
                        v: labels[v].clone(),
                    });
                }
            }
            let e = (u.min(v), u.max(v));
            if seen.insert(e) {
                norm.push(e);
            }
        }
        norm.sort_unstable();
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in &norm {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for nb in &mut adjacency {
            nb.sort_unstable();
        }
        Ok(Graph {
            labels,
            index,
            adjacency,
            edges: norm,
            parts,
        })
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    /// Number of edges.
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn degree(&self, v: VertexId) -> Result<usize> {
        self.adjacency
            .get(v)
            .map(Vec::len)
            .ok_or(Error::VertexOutOfRange(v))
    }

    /// Degree without bounds reporting; panics on an out-of-range vertex.
    #[inline]
    pub fn deg(&self, v: VertexId) -> usize {
        self.adjacency[v].len()
    }

    #[inline]
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adjacency[v]
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        u < self.n() && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vertex(&self, label: &str) -> Option<VertexId> {
        self.index.get(label).copied()
    }

    pub fn part(&self, v: VertexId) -> Option<Part> {
        self.parts.as_ref().map(|p| p[v])
    }

    pub fn is_bipartite(&self) -> bool {
        self.parts.is_some()
    }

    pub fn format(&self) -> Format {
        if self.is_bipartite() {
            Format::Bipartite
        } else {
            Format::Unipartite
        }
    }

    /// Serializes back to edge-list text; bipartite graphs put the top
    /// vertex in the first column so the output reloads with the same parts.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for &(u, v) in &self.edges {
            let (a, b) = match self.part(u) {
                Some(Part::Bottom) => (v, u),
                _ => (u, v),
            };
            let _ = writeln!(out, "{}\t{}", self.labels[a], self.labels[b]);
        }
        if !self.is_bipartite() {
            for v in 0..self.n() {
                if self.adjacency[v].is_empty() {
                    let _ = writeln!(out, "{}", self.labels[v]);
                }
            }
        }
        out
    }
}

/// Result of parsing an edge list, including non-fatal diagnostics.
#[derive(Clone, Debug)]
pub struct ParsedEdgeList {
    pub graph: Graph,
    /// Line numbers of edges that repeated an earlier edge and were dropped.
    pub duplicate_lines: Vec<usize>,
}

/// Parses an edge list.
///
/// Each non-comment line carries two whitespace-separated vertex labels.
/// `#` starts a comment and blank lines are skipped. In unipartite mode a
/// line with a single label declares an isolated vertex. In bipartite mode
/// the first column is the top part and the second the bottom part, and the
/// two columns have disjoint label namespaces.
pub fn parse_edge_list<R: BufRead>(source: R, format: Format) -> Result<ParsedEdgeList> {
    let mut labels: Vec<String> = Vec::new();
    let mut parts: Vec<Part> = Vec::new();
    let mut index: HashMap<(Part, String), VertexId> = HashMap::new();
    let mut edges = Vec::new();
    let mut seen = HashSet::new();
    let mut duplicate_lines = Vec::new();

    let mut intern = |part: Part, label: &str| -> VertexId {
        // Unipartite graphs share one namespace, tagged as Top.
        let key = (part, label.to_string());
        if let Some(&id) = index.get(&key) {
            return id;
        }
        let id = labels.len();
        labels.push(label.to_string());
        parts.push(part);
        index.insert(key, id);
        id
    };

    for (i, line) in source.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|e| Error::Parse {
            line: lineno,
            message: e.to_string(),
        })?;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        match (tokens.len(), format) {
            (1, Format::Unipartite) => {
                intern(Part::Top, tokens[0]);
            }
            (2, _) => {
                let (a, b) = (tokens[0], tokens[1]);
                let (u, v) = match format {
                    Format::Unipartite => {
                        if a == b {
                            return Err(Error::SelfLoop {
                                line: lineno,
                                label: a.to_string(),
                            });
                        }
                        (intern(Part::Top, a), intern(Part::Top, b))
                    }
                    Format::Bipartite => (intern(Part::Top, a), intern(Part::Bottom, b)),
                };
                let e = (u.min(v), u.max(v));
                if seen.insert(e) {
                    edges.push(e);
                } else {
                    log::warn!("line {lineno}: duplicate edge `{a}`-`{b}` ignored");
                    duplicate_lines.push(lineno);
                }
            }
            (3, _) => {
                return Err(Error::Parse {
                    line: lineno,
                    message: "weight columns are not supported; only binary graphs are accepted"
                        .into(),
                })
            }
            (k, _) => {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!("expected 2 vertex labels, found {k} tokens"),
                })
            }
        }
    }

    let (labels, parts) = match format {
        Format::Unipartite => (labels, None),
        Format::Bipartite => {
            // A label used in both columns names two distinct vertices; keep
            // the printed labels unique.
            let mut count: HashMap<&str, usize> = HashMap::new();
            for l in &labels {
                *count.entry(l.as_str()).or_default() += 1;
            }
            let clash: HashSet<String> = count
                .into_iter()
                .filter(|&(_, c)| c > 1)
                .map(|(l, _)| l.to_string())
                .collect();
            let labels = labels
                .iter()
                .zip(&parts)
                .map(|(l, p)| {
                    if clash.contains(l) {
                        match p {
                            Part::Top => format!("{l}@top"),
                            Part::Bottom => format!("{l}@bottom"),
                        }
                    } else {
                        l.clone()
                    }
                })
                .collect();
            (labels, Some(parts))
        }
    };

    let graph = Graph::build(labels, &edges, parts)?;
    Ok(ParsedEdgeList {
        graph,
        duplicate_lines,
    })
}

/// Parses an edge list, logging and dropping duplicate edges.
pub fn load_edge_list<R: BufRead>(source: R, format: Format) -> Result<Graph> {
    parse_edge_list(source, format).map(|p| p.graph)
}

pub fn load_edge_list_str(text: &str, format: Format) -> Result<Graph> {
    load_edge_list(text.as_bytes(), format)
}
