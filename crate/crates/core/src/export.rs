//! DOT rendering and file input/output.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::dyadic::Weight;
use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::hypergraph::WeightedHypergraph;

/// Graphviz source for a weighted hypergraph state. Nodes and edges are
/// emitted in sorted order, so equal states give identical text.
///
/// Weight-1 pairs are plain edges, fractional pairs are dashed and
/// labelled, and every other edge is drawn as a star through a box node
/// carrying its weight.
pub fn to_dot(h: &WeightedHypergraph) -> String {
    let mut out = String::from("graph G {\n  node [shape=circle];\n");
    for v in 0..h.n() {
        let _ = writeln!(out, "  q{v} [label=\"{v}\"];");
    }
    let mut aux = 0;
    for (e, w) in h.edges() {
        let vs = e.vertices();
        if vs.len() == 2 {
            if w == Weight::ONE {
                let _ = writeln!(out, "  q{} -- q{};", vs[0], vs[1]);
            } else {
                let _ = writeln!(out, "  q{} -- q{} [style=dashed, label=\"{w}\"];", vs[0], vs[1]);
            }
        } else {
            let _ = writeln!(out, "  e{aux} [shape=box, label=\"{w}\"];");
            for v in vs {
                let _ = writeln!(out, "  e{aux} -- q{v};");
            }
            aux += 1;
        }
    }
    if !h.global_phase().is_zero() {
        let _ = writeln!(out, "  label=\"global phase {}\";", h.global_phase());
    }
    out.push_str("}\n");
    out
}

pub fn graph_to_dot(g: &SimpleGraph) -> String {
    to_dot(&WeightedHypergraph::from_graph(g))
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    from_json(&read_text(path)?).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    write_text(path, &to_json(value))
}

/// Parses a graph from hypergraph JSON or from the adjacency text format,
/// whichever the first non-blank character indicates.
pub fn parse_graph(text: &str) -> Result<SimpleGraph> {
    if text.trim_start().starts_with('{') {
        let h: WeightedHypergraph = from_json(text)?;
        h.to_graph().ok_or(Error::NotAGraphState)
    } else {
        SimpleGraph::parse_adjacency_text(text)
    }
}

pub fn read_graph(path: &Path) -> Result<SimpleGraph> {
    parse_graph(&read_text(path)?).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn read_state(path: &Path) -> Result<WeightedHypergraph> {
    let text = read_text(path)?;
    if text.trim_start().starts_with('{') {
        from_json(&text)
    } else {
        Ok(WeightedHypergraph::from_graph(&SimpleGraph::parse_adjacency_text(&text)?))
    }
}
