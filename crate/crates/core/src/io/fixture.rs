use std::fmt::Write as _;
use std::sync::Arc;

use rustc_hash::FxHashMap;

use crate::error::MapfError;
use crate::graph::{Graph, VertexId};
use crate::instance::{Instance, Semantics};

/// Parses a graph fixture:
///
/// ```text
/// # comment
/// semantics stay
/// v A
/// v B
/// e A B
/// a A B
/// ```
///
/// `v` declares a vertex, `e` an undirected edge, `a` an agent's start and
/// target. Agents are numbered in file order. Semantics default to stay.
pub fn parse_graph_fixture(text: &str) -> Result<Instance, MapfError> {
    let mut labels: Vec<String> = Vec::new();
    let mut edges: Vec<(String, String, usize)> = Vec::new();
    let mut agents: Vec<(String, String, usize)> = Vec::new();
    let mut semantics = Semantics::StayAtTarget;
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |reason: &str| MapfError::MalformedFixture {
            line: line_no,
            reason: reason.to_string(),
        };
        let parts: Vec<&str> = line.split_whitespace().collect();
        match parts.as_slice() {
            ["v", label] => labels.push(label.to_string()),
            ["e", a, b] => edges.push((a.to_string(), b.to_string(), line_no)),
            ["a", s, t] => agents.push((s.to_string(), t.to_string(), line_no)),
            ["semantics", s] => semantics = Semantics::parse(s).ok_or_else(|| bad("semantics must be stay or disappear"))?,
            _ => return Err(bad(&format!("cannot read `{line}`"))),
        }
    }
    let mut ids = FxHashMap::default();
    for (k, l) in labels.iter().enumerate() {
        if ids.insert(l.as_str(), VertexId(k as u32)).is_some() {
            return Err(MapfError::DuplicateLabel(l.clone()));
        }
    }
    let index = |l: &str, line: usize| {
        ids.get(l).copied().ok_or_else(|| MapfError::MalformedFixture {
            line,
            reason: format!("undeclared vertex `{l}`"),
        })
    };
    let mut edge_ids = Vec::with_capacity(edges.len());
    for (a, b, line) in &edges {
        edge_ids.push((index(a, *line)?, index(b, *line)?));
    }
    let mut endpoints = Vec::with_capacity(agents.len());
    for (s, t, line) in &agents {
        endpoints.push((index(s, *line)?, index(t, *line)?));
    }
    let graph = Graph::from_edges(labels, edge_ids)?;
    Instance::new(Arc::new(graph), endpoints, semantics)
}

pub fn write_graph_fixture(instance: &Instance) -> String {
    let g = instance.graph();
    let mut out = format!("semantics {}\n", instance.semantics());
    for v in g.vertices() {
        writeln!(out, "v {}", g.label(v)).unwrap();
    }
    for &(u, v) in g.edges() {
        writeln!(out, "e {} {}", g.label(u), g.label(v)).unwrap();
    }
    for a in instance.agents() {
        writeln!(out, "a {} {}", g.label(a.start), g.label(a.target)).unwrap();
    }
    out
}
