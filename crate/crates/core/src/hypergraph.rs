//! Weighted hypergraph states.
//!
//! A [`WeightedHypergraph`] on `n` qubits stands for
//! `prod_e C_e^{w_e} |+>^n`, where `C_e^w` multiplies the all-ones
//! component on `e` by `exp(i pi w)`. Weights live in `[0, 2)`; zero-weight
//! edges are never stored, and the empty edge is kept separately as the
//! global phase. With those rules the representation is canonical: two
//! values describe the same state exactly when they compare equal.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dyadic::{Dyadic, Weight};
use crate::error::{Error, Result};
use crate::graph::SimpleGraph;

pub type VertexId = usize;

/// A hyperedge: a strictly ascending list of vertices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(from = "Vec<VertexId>", into = "Vec<VertexId>")]
pub struct Edge(Vec<VertexId>);

impl Edge {
    pub fn new(vertices: impl IntoIterator<Item = VertexId>) -> Self {
        let mut v: Vec<VertexId> = vertices.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Edge(v)
    }

    pub fn empty() -> Self {
        Edge(Vec::new())
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn without(&self, v: VertexId) -> Edge {
        Edge(self.0.iter().copied().filter(|&u| u != v).collect())
    }

    pub fn union(&self, other: &Edge) -> Edge {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Edge(out)
    }

    pub fn max_vertex(&self) -> Option<VertexId> {
        self.0.last().copied()
    }
}

impl From<Vec<VertexId>> for Edge {
    fn from(v: Vec<VertexId>) -> Self {
        Edge::new(v)
    }
}

impl From<Edge> for Vec<VertexId> {
    fn from(e: Edge) -> Self {
        e.0
    }
}

impl<const N: usize> From<[VertexId; N]> for Edge {
    fn from(v: [VertexId; N]) -> Self {
        Edge::new(v)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, v) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WeightedHypergraph {
    n: usize,
    edges: BTreeMap<Edge, Weight>,
    global_phase: Weight,
}

impl WeightedHypergraph {
    /// The product state `|+>^n`.
    pub fn new(n: usize) -> Self {
        WeightedHypergraph { n, edges: BTreeMap::new(), global_phase: Weight::ZERO }
    }

    /// Canonical form of an arbitrary list of weighted edges: weights are
    /// summed per edge and reduced modulo 2, zero weights dropped, and the
    /// empty edge folded into the global phase.
    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Edge, Dyadic)>) -> Result<Self> {
        let mut h = Self::new(n);
        for (e, w) in terms {
            h.add_weight_mut(&e, w)?;
        }
        Ok(h)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn global_phase(&self) -> Weight {
        self.global_phase
    }

    /// Weight of `e`, zero when absent. The empty edge reports the global
    /// phase.
    pub fn weight(&self, e: &Edge) -> Weight {
        if e.is_empty() {
            self.global_phase
        } else {
            self.edges.get(e).copied().unwrap_or(Weight::ZERO)
        }
    }

    /// Nonempty edges in canonical (lexicographic) order.
    pub fn edges(&self) -> impl Iterator<Item = (&Edge, Weight)> + '_ {
        self.edges.iter().map(|(e, &w)| (e, w))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges containing `v`, with their weights.
    pub fn incident(&self, v: VertexId) -> impl Iterator<Item = (&Edge, Weight)> + '_ {
        self.edges().filter(move |(e, _)| e.contains(v))
    }

    /// `(edge, weight)` pairs including the global phase as the empty edge,
    /// suitable for [`Self::from_terms`].
    pub fn terms(&self) -> Vec<(Edge, Dyadic)> {
        let mut t: Vec<(Edge, Dyadic)> = Vec::with_capacity(self.edges.len() + 1);
        if !self.global_phase.is_zero() {
            t.push((Edge::empty(), self.global_phase.value()));
        }
        t.extend(self.edges.iter().map(|(e, w)| (e.clone(), w.value())));
        t
    }

    pub(crate) fn check_edge(&self, e: &Edge) -> Result<()> {
        match e.max_vertex() {
            Some(v) if v >= self.n => Err(Error::VertexOutOfRange { vertex: v, n: self.n }),
            _ => Ok(()),
        }
    }

    pub(crate) fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v >= self.n {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        } else {
            Ok(())
        }
    }

    /// Add `w` to the weight of `e` modulo 2.
    pub fn add_weight(&self, e: &Edge, w: Dyadic) -> Result<Self> {
        let mut out = self.clone();
        out.add_weight_mut(e, w)?;
        Ok(out)
    }

    pub fn add_weight_mut(&mut self, e: &Edge, w: Dyadic) -> Result<()> {
        self.check_edge(e)?;
        let w = Weight::from(w);
        if w.is_zero() {
            return Ok(());
        }
        if e.is_empty() {
            self.global_phase += w;
            return Ok(());
        }
        match self.edges.get_mut(e) {
            Some(cur) => {
                *cur += w;
                if cur.is_zero() {
                    self.edges.remove(e);
                }
            }
            None => {
                self.edges.insert(e.clone(), w);
            }
        }
        Ok(())
    }

    pub fn with_global_phase(mut self, phase: Weight) -> Self {
        self.global_phase = phase;
        self
    }

    /// Equality of the represented states, optionally up to a global phase.
    pub fn states_equal(&self, other: &Self, ignore_global_phase: bool) -> Result<bool> {
        if self.n != other.n {
            return Err(Error::SizeMismatch { left: self.n, right: other.n });
        }
        Ok(self.edges == other.edges && (ignore_global_phase || self.global_phase == other.global_phase))
    }

    /// Each graph edge becomes a weight-1 two-vertex hyperedge.
    pub fn from_graph(g: &SimpleGraph) -> Self {
        let mut h = Self::new(g.n());
        for (u, v) in g.edges() {
            h.edges.insert(Edge(vec![u, v]), Weight::ONE);
        }
        h
    }

    /// All edges have cardinality two and weight one; the global phase is
    /// unconstrained.
    pub fn is_graph_state(&self) -> bool {
        self.edges.iter().all(|(e, &w)| e.len() == 2 && w == Weight::ONE)
    }

    pub fn to_graph(&self) -> Option<SimpleGraph> {
        if !self.is_graph_state() {
            return None;
        }
        let mut g = SimpleGraph::new(self.n);
        for e in self.edges.keys() {
            g.add_edge(e.0[0], e.0[1]).ok()?;
        }
        Some(g)
    }

    /// Edges grouped by cardinality, for reporting.
    pub fn cardinality_histogram(&self) -> BTreeMap<usize, usize> {
        let mut hist = BTreeMap::new();
        for e in self.edges.keys() {
            *hist.entry(e.len()).or_insert(0) += 1;
        }
        hist
    }
}

/// Free-function form of [`WeightedHypergraph::from_terms`].
pub fn canonicalize(n: usize, terms: impl IntoIterator<Item = (Edge, Dyadic)>) -> Result<WeightedHypergraph> {
    WeightedHypergraph::from_terms(n, terms)
}

impl fmt::Debug for WeightedHypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeightedHypergraph(n={}, phase={}, [", self.n, self.global_phase)?;
        for (k, (e, w)) in self.edges.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{e}:{w}")?;
        }
        f.write_str("])")
    }
}

#[derive(Serialize, Deserialize)]
struct EdgeRecord {
    v: Vec<VertexId>,
    w: Dyadic,
}

#[derive(Serialize, Deserialize)]
struct HypergraphRecord {
    n: usize,
    edges: Vec<EdgeRecord>,
    #[serde(default)]
    phase: Dyadic,
}

impl Serialize for WeightedHypergraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        HypergraphRecord {
            n: self.n,
            edges: self.edges.iter().map(|(e, w)| EdgeRecord { v: e.0.clone(), w: w.value() }).collect(),
            phase: self.global_phase.value(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for WeightedHypergraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rec = HypergraphRecord::deserialize(d)?;
        let terms = rec
            .edges
            .into_iter()
            .map(|r| (Edge::new(r.v), r.w))
            .chain(std::iter::once((Edge::empty(), rec.phase)));
        WeightedHypergraph::from_terms(rec.n, terms).map_err(serde::de::Error::custom)
    }
}
