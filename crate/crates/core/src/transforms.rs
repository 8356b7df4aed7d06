//! Graphical rewriting rules for local gates on weighted hypergraph states.
//!
//! * `Z_i^a` adds `a` to the single-qubit edge `{i}`.
//! * `X_i` multiplies the state by `C_{link(i)}`, toggling every edge of the
//!   link of `i` (the incident edges with `i` removed).
//! * `X_i^a` multiplies the state by `C_{link(i)}^a`, which is expanded into
//!   weighted edges by [`crate::phase::power_terms`].
//!
//! The `X` rules require every edge at `i` to carry weight 1. The extended
//! mode lifts this for Pauli `X` (and integer powers) through the
//! conjugation identity `X_i C_e^w X_i = C_{e-i}^w C_e^{-w}`. For a
//! non-integer power and a fractional incident weight the image is no longer
//! an equally weighted state, which the extended mode reports as an error.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dyadic::{Dyadic, Weight};
use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::hypergraph::{Edge, VertexId, WeightedHypergraph};
use crate::par::Exec;
use crate::phase::{power_terms, EdgeGateProduct};

/// Z exponent applied to every neighbour of `v` after `X_v^{1/2}`. Together with
/// the centre correction the sequence yields the locally complemented graph state.
pub const LC_NEIGHBOR_Z_CORRECTION: Dyadic = Dyadic::from_parts(-1, 1);
/// Z exponent applied to `v` itself in the same sequence.
pub const LC_CENTER_Z_CORRECTION: Dyadic = Dyadic::ZERO;

/// Below this many link edges the subset expansion runs on the calling
/// thread.
const PARALLEL_LINK_THRESHOLD: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    PauliX,
    XPower(Dyadic),
    ZPower(Dyadic),
    LocalComplement,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GateApplication {
    pub qubit: VertexId,
    pub gate: Gate,
}

impl GateApplication {
    pub fn x(qubit: VertexId) -> Self {
        GateApplication { qubit, gate: Gate::PauliX }
    }
    pub fn x_power(qubit: VertexId, alpha: Dyadic) -> Self {
        GateApplication { qubit, gate: Gate::XPower(alpha) }
    }
    pub fn z_power(qubit: VertexId, alpha: Dyadic) -> Self {
        GateApplication { qubit, gate: Gate::ZPower(alpha) }
    }
    pub fn local_complement(qubit: VertexId) -> Self {
        GateApplication { qubit, gate: Gate::LocalComplement }
    }
}

impl fmt::Display for GateApplication {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.gate {
            Gate::PauliX => write!(f, "X[{}]", self.qubit),
            Gate::XPower(a) => write!(f, "X^{a}[{}]", self.qubit),
            Gate::ZPower(a) => write!(f, "Z^{a}[{}]", self.qubit),
            Gate::LocalComplement => write!(f, "LC[{}]", self.qubit),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct GateRecord {
    q: VertexId,
    g: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    a: Option<Dyadic>,
}

impl Serialize for GateApplication {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let (g, a) = match self.gate {
            Gate::PauliX => ("X", None),
            Gate::XPower(a) => ("Xp", Some(a)),
            Gate::ZPower(a) => ("Zp", Some(a)),
            Gate::LocalComplement => ("LC", None),
        };
        GateRecord { q: self.qubit, g: g.to_string(), a }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for GateApplication {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = GateRecord::deserialize(d)?;
        let gate = match (r.g.as_str(), r.a) {
            ("X", None) => Gate::PauliX,
            ("LC", None) => Gate::LocalComplement,
            ("Xp", Some(a)) => Gate::XPower(a),
            ("Zp", Some(a)) => Gate::ZPower(a),
            ("X" | "LC", Some(_)) => return Err(D::Error::custom(format!("gate {} takes no exponent", r.g))),
            ("Xp" | "Zp", None) => return Err(D::Error::custom(format!("gate {} needs an exponent", r.g))),
            (other, _) => return Err(D::Error::custom(format!("unknown gate {other:?}"))),
        };
        Ok(GateApplication { qubit: r.q, gate })
    }
}

/// An ordered list of local gates, applied left to right.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GateSequence(pub Vec<GateApplication>);

impl GateSequence {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, g: GateApplication) {
        self.0.push(g);
    }

    pub fn gates(&self) -> &[GateApplication] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromIterator<GateApplication> for GateSequence {
    fn from_iter<I: IntoIterator<Item = GateApplication>>(iter: I) -> Self {
        GateSequence(iter.into_iter().collect())
    }
}

/// Whether the X rules insist on weight-1 incident edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum XRuleMode {
    #[default]
    Standard,
    Extended,
}

/// The link of `i`: every edge containing `i`, with `i` removed. May contain
/// the empty edge.
pub fn link(h: &WeightedHypergraph, i: VertexId) -> Result<EdgeGateProduct> {
    h.check_vertex(i)?;
    let mut edges = Vec::new();
    for (e, w) in h.incident(i) {
        if w != Weight::ONE {
            return Err(Error::FractionalIncidentEdge { qubit: i, edge: e.clone(), weight: w.to_string() });
        }
        edges.push(e.without(i));
    }
    EdgeGateProduct::new(edges)
}

pub fn apply_z_power(h: &WeightedHypergraph, i: VertexId, alpha: Dyadic) -> Result<WeightedHypergraph> {
    h.check_vertex(i)?;
    h.add_weight(&Edge::new([i]), alpha)
}

pub fn apply_pauli_x(h: &WeightedHypergraph, i: VertexId) -> Result<WeightedHypergraph> {
    let mut out = h.clone();
    for e in link(h, i)?.edges() {
        out.add_weight_mut(e, Dyadic::ONE)?;
    }
    Ok(out)
}

/// Unreduced weight changes produced by `X_i^alpha`.
pub fn x_power_terms(h: &WeightedHypergraph, i: VertexId, alpha: Dyadic) -> Result<BTreeMap<Edge, Dyadic>> {
    let l = link(h, i)?;
    let exec = if l.len() < PARALLEL_LINK_THRESHOLD { Exec::Sequential } else { Exec::default() };
    Ok(power_terms(&l, alpha, true, exec))
}

pub fn apply_x_power(h: &WeightedHypergraph, i: VertexId, alpha: Dyadic) -> Result<WeightedHypergraph> {
    let mut out = h.clone();
    for (e, w) in x_power_terms(h, i, alpha)? {
        out.add_weight_mut(&e, w)?;
    }
    Ok(out)
}

/// Pauli `X_i` for arbitrary incident weights.
pub fn apply_pauli_x_extended(h: &WeightedHypergraph, i: VertexId) -> Result<WeightedHypergraph> {
    h.check_vertex(i)?;
    let mut out = h.clone();
    for (e, w) in h.incident(i) {
        out.add_weight_mut(&e.without(i), w.value())?;
        out.add_weight_mut(e, w.value().scale(-2))?;
    }
    Ok(out)
}

/// `X_i^alpha` allowing fractional incident weights where the image stays a
/// weighted hypergraph state.
pub fn apply_x_power_extended(h: &WeightedHypergraph, i: VertexId, alpha: Dyadic) -> Result<WeightedHypergraph> {
    h.check_vertex(i)?;
    if alpha.is_integer() {
        return if alpha.numerator().rem_euclid(2) == 0 { Ok(h.clone()) } else { apply_pauli_x_extended(h, i) };
    }
    match link(h, i) {
        Ok(_) => apply_x_power(h, i, alpha),
        Err(Error::FractionalIncidentEdge { .. }) => {
            Err(Error::LeavesHypergraphClass { qubit: i, alpha: alpha.to_string() })
        }
        Err(e) => Err(e),
    }
}

pub fn local_complement(g: &SimpleGraph, v: VertexId) -> Result<SimpleGraph> {
    g.local_complement(v)
}

/// Local complementation of a graph state at `v` realised by `X_v^{1/2}`
/// followed by the frozen Z corrections.
pub fn local_complement_via_x_half(h: &WeightedHypergraph, v: VertexId) -> Result<WeightedHypergraph> {
    let seq = local_complement_sequence(h, v)?;
    apply_sequence(h, &seq)
}

/// The gate sequence used by [`local_complement_via_x_half`].
pub fn local_complement_sequence(h: &WeightedHypergraph, v: VertexId) -> Result<GateSequence> {
    h.check_vertex(v)?;
    let g = h.to_graph().ok_or(Error::NotAGraphState)?;
    let mut seq = GateSequence::new();
    seq.push(GateApplication::x_power(v, Dyadic::new(1, 1)));
    if !LC_CENTER_Z_CORRECTION.is_zero() {
        seq.push(GateApplication::z_power(v, LC_CENTER_Z_CORRECTION));
    }
    for u in g.neighbors(v) {
        seq.push(GateApplication::z_power(u, LC_NEIGHBOR_Z_CORRECTION));
    }
    Ok(seq)
}

/// Raw weight changes of a single gate.
pub fn gate_terms(h: &WeightedHypergraph, g: &GateApplication, mode: XRuleMode) -> Result<BTreeMap<Edge, Dyadic>> {
    let i = g.qubit;
    h.check_vertex(i)?;
    match (g.gate, mode) {
        (Gate::ZPower(a), _) => Ok(BTreeMap::from([(Edge::new([i]), a)])),
        (Gate::PauliX, XRuleMode::Standard) => Ok(link(h, i)?.edges().iter().map(|e| (e.clone(), Dyadic::ONE)).collect()),
        (Gate::XPower(a), XRuleMode::Standard) => x_power_terms(h, i, a),
        (Gate::PauliX, XRuleMode::Extended) => Ok(diff_terms(h, &apply_pauli_x_extended(h, i)?)),
        (Gate::XPower(a), XRuleMode::Extended) => Ok(diff_terms(h, &apply_x_power_extended(h, i, a)?)),
        (Gate::LocalComplement, _) => Ok(diff_terms(h, &apply_local_complement(h, i)?)),
    }
}

fn diff_terms(before: &WeightedHypergraph, after: &WeightedHypergraph) -> BTreeMap<Edge, Dyadic> {
    let mut out = BTreeMap::new();
    let edges: std::collections::BTreeSet<&Edge> =
        before.edges().map(|(e, _)| e).chain(after.edges().map(|(e, _)| e)).collect();
    for e in edges {
        let d = Weight::from(after.weight(e).value() - before.weight(e).value());
        if !d.is_zero() {
            out.insert(e.clone(), d.value());
        }
    }
    let phase = Weight::from(after.global_phase().value() - before.global_phase().value());
    if !phase.is_zero() {
        out.insert(Edge::empty(), phase.value());
    }
    out
}

fn apply_local_complement(h: &WeightedHypergraph, v: VertexId) -> Result<WeightedHypergraph> {
    h.check_vertex(v)?;
    let g = h.to_graph().ok_or(Error::NotAGraphState)?;
    Ok(WeightedHypergraph::from_graph(&g.local_complement(v)?).with_global_phase(h.global_phase()))
}

pub fn apply_gate(h: &WeightedHypergraph, g: &GateApplication, mode: XRuleMode) -> Result<WeightedHypergraph> {
    match (g.gate, mode) {
        (Gate::ZPower(a), _) => apply_z_power(h, g.qubit, a),
        (Gate::PauliX, XRuleMode::Standard) => apply_pauli_x(h, g.qubit),
        (Gate::XPower(a), XRuleMode::Standard) => apply_x_power(h, g.qubit, a),
        (Gate::PauliX, XRuleMode::Extended) => apply_pauli_x_extended(h, g.qubit),
        (Gate::XPower(a), XRuleMode::Extended) => apply_x_power_extended(h, g.qubit, a),
        (Gate::LocalComplement, _) => apply_local_complement(h, g.qubit),
    }
}

/// Left-to-right fold of `seq` over `h`; a failure names its step index.
pub fn apply_sequence(h: &WeightedHypergraph, seq: &GateSequence) -> Result<WeightedHypergraph> {
    apply_sequence_with(h, seq, XRuleMode::Standard)
}

pub fn apply_sequence_with(h: &WeightedHypergraph, seq: &GateSequence, mode: XRuleMode) -> Result<WeightedHypergraph> {
    seq.gates().iter().enumerate().try_fold(h.clone(), |state, (step, g)| {
        apply_gate(&state, g, mode).map_err(|e| Error::Step { step, source: Box::new(e) })
    })
}

/// Per-step weight changes recorded by [`apply_sequence_traced`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepDelta {
    pub step: usize,
    pub gate: GateApplication,
    pub terms: BTreeMap<Edge, Dyadic>,
}

pub fn apply_sequence_traced(
    h: &WeightedHypergraph,
    seq: &GateSequence,
    mode: XRuleMode,
) -> Result<(WeightedHypergraph, Vec<StepDelta>)> {
    let mut state = h.clone();
    let mut trace = Vec::with_capacity(seq.len());
    for (step, g) in seq.gates().iter().enumerate() {
        let wrap = |e| Error::Step { step, source: Box::new(e) };
        let terms = gate_terms(&state, g, mode).map_err(wrap)?;
        let next = apply_gate(&state, g, mode).map_err(wrap)?;
        trace.push(StepDelta { step, gate: *g, terms });
        state = next;
    }
    Ok((state, trace))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> Dyadic {
        s.parse().unwrap()
    }

    fn star4() -> WeightedHypergraph {
        WeightedHypergraph::from_graph(&SimpleGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap())
    }

    #[test]
    fn link_examples() {
        let l = link(&star4(), 0).unwrap();
        assert_eq!(l.edges(), &[Edge::from([1]), Edge::from([2]), Edge::from([3])]);
        let single = WeightedHypergraph::from_terms(1, [(Edge::from([0]), Dyadic::ONE)]).unwrap();
        assert_eq!(link(&single, 0).unwrap().edges(), &[Edge::empty()]);
        let tri = WeightedHypergraph::from_terms(3, [(Edge::from([0, 1, 2]), Dyadic::ONE)]).unwrap();
        assert_eq!(link(&tri, 2).unwrap().edges(), &[Edge::from([0, 1])]);
        let frac = WeightedHypergraph::from_terms(2, [(Edge::from([0, 1]), d("1/2"))]).unwrap();
        match link(&frac, 1) {
            Err(Error::FractionalIncidentEdge { qubit: 1, edge, .. }) => assert_eq!(edge, Edge::from([0, 1])),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn z_power_examples() {
        let h = star4();
        assert_eq!(apply_z_power(&h, 2, Dyadic::ZERO).unwrap(), h);
        let h1 = h.add_weight(&Edge::from([1]), d("1/4")).unwrap();
        assert_eq!(apply_z_power(&h1, 1, d("-1/4")).unwrap(), h);
        let e = apply_z_power(&WeightedHypergraph::new(2), 0, Dyadic::ONE).unwrap();
        assert_eq!(e.weight(&Edge::from([0])), Weight::ONE);
        assert!(apply_z_power(&h, 4, Dyadic::ONE).is_err());
    }

    #[test]
    fn pauli_x_examples() {
        let h = star4();
        let x = apply_pauli_x(&h, 0).unwrap();
        assert_eq!(apply_pauli_x(&x, 0).unwrap(), h);
        assert_eq!(x, apply_x_power(&h, 0, Dyadic::ONE).unwrap());
        for v in 1..4 {
            assert_eq!(x.weight(&Edge::new([v])), Weight::ONE);
        }
        let empty = WeightedHypergraph::new(3);
        assert_eq!(apply_pauli_x(&empty, 1).unwrap(), empty);
        // X on a qubit carrying {i} flips the global phase through the empty edge
        let single = WeightedHypergraph::from_terms(1, [(Edge::from([0]), Dyadic::ONE)]).unwrap();
        assert_eq!(apply_pauli_x(&single, 0).unwrap().global_phase(), Weight::ONE);
    }

    #[test]
    fn x_quarter_on_star_center() {
        let out = apply_x_power(&star4(), 0, d("1/4")).unwrap();
        let q = Weight::new(1, 2);
        let mut expected = star4();
        for (e, w) in [
            (vec![1], "1/4"),
            (vec![2], "1/4"),
            (vec![3], "1/4"),
            (vec![1, 2], "-1/2"),
            (vec![1, 3], "-1/2"),
            (vec![2, 3], "-1/2"),
            (vec![1, 2, 3], "1"),
        ] {
            expected.add_weight_mut(&Edge::new(e), d(w)).unwrap();
        }
        assert_eq!(out, expected);
        assert_eq!(out.weight(&Edge::from([1])), q);
        assert_eq!(out.weight(&Edge::from([1, 2])), Weight::new(3, 1));
        assert_eq!(apply_x_power(&star4(), 0, Dyadic::ZERO).unwrap(), star4());
    }

    #[test]
    fn x_half_on_triangle_is_local_complement_plus_halves() {
        let g = SimpleGraph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let out = apply_x_power(&WeightedHypergraph::from_graph(&g), 0, d("1/2")).unwrap();
        let mut expected = WeightedHypergraph::from_graph(&g.local_complement(0).unwrap());
        expected.add_weight_mut(&Edge::from([1]), d("1/2")).unwrap();
        expected.add_weight_mut(&Edge::from([2]), d("1/2")).unwrap();
        assert_eq!(out, expected);
        assert_eq!(local_complement_via_x_half(&WeightedHypergraph::from_graph(&g), 0).unwrap(),
            WeightedHypergraph::from_graph(&g.local_complement(0).unwrap()));
    }

    #[test]
    fn local_complement_examples() {
        let iso = SimpleGraph::from_edges(3, &[(0, 1)]).unwrap();
        assert_eq!(local_complement(&iso, 2).unwrap(), iso);
        let g = SimpleGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2)]).unwrap();
        assert_eq!(local_complement(&local_complement(&g, 0).unwrap(), 0).unwrap(), g);
        assert!(local_complement(&g, 9).is_err());
    }

    #[test]
    fn sequence_examples() {
        let h = star4();
        assert_eq!(apply_sequence(&h, &GateSequence::new()).unwrap(), h);
        let seq: GateSequence = [GateApplication::x_power(0, d("1/4")), GateApplication::x_power(0, d("-1/4"))]
            .into_iter()
            .collect();
        assert_eq!(apply_sequence(&h, &seq).unwrap(), h);
        let bad: GateSequence = [GateApplication::x_power(0, d("1/4")), GateApplication::x(1)].into_iter().collect();
        match apply_sequence(&h, &bad) {
            Err(Error::Step { step: 1, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        let lc: GateSequence = [GateApplication::local_complement(1)].into_iter().collect();
        let fractional = apply_x_power(&h, 0, d("1/4")).unwrap();
        assert!(matches!(apply_sequence(&fractional, &lc), Err(Error::Step { step: 0, .. })));
    }

    #[test]
    fn sequence_json() {
        let seq: GateSequence = [
            GateApplication::x(0),
            GateApplication::x_power(1, d("1/4")),
            GateApplication::z_power(2, d("-15/4")),
            GateApplication::local_complement(3),
        ]
        .into_iter()
        .collect();
        let s = serde_json::to_string(&seq).unwrap();
        assert_eq!(
            s,
            r#"[{"q":0,"g":"X"},{"q":1,"g":"Xp","a":"1/4"},{"q":2,"g":"Zp","a":"-15/4"},{"q":3,"g":"LC"}]"#
        );
        assert_eq!(serde_json::from_str::<GateSequence>(&s).unwrap(), seq);
        assert!(serde_json::from_str::<GateSequence>(r#"[{"q":0,"g":"Xp"}]"#).is_err());
        assert!(serde_json::from_str::<GateSequence>(r#"[{"q":0,"g":"X","a":"1"}]"#).is_err());
        assert!(serde_json::from_str::<GateSequence>(r#"[{"q":0,"g":"Y"}]"#).is_err());
        assert!(serde_json::from_str::<GateSequence>(r#"[{"q":0,"g":"Xp","a":"1/3"}]"#).is_err());
    }

    #[test]
    fn extended_mode() {
        let frac = WeightedHypergraph::from_terms(3, [(Edge::from([0, 1]), d("1/2")), (Edge::from([1, 2]), d("1"))])
            .unwrap();
        assert!(apply_pauli_x(&frac, 1).is_err());
        let x = apply_pauli_x_extended(&frac, 1).unwrap();
        assert_eq!(x.weight(&Edge::from([0])), Weight::new(1, 1));
        assert_eq!(x.weight(&Edge::from([0, 1])), Weight::new(3, 1));
        assert_eq!(x.weight(&Edge::from([2])), Weight::ONE);
        assert_eq!(apply_pauli_x_extended(&x, 1).unwrap(), frac);
        assert!(matches!(
            apply_x_power_extended(&frac, 1, d("1/2")),
            Err(Error::LeavesHypergraphClass { qubit: 1, .. })
        ));
        assert_eq!(apply_x_power_extended(&frac, 1, d("3")).unwrap(), x);
        assert_eq!(apply_x_power_extended(&star4(), 0, d("1/4")).unwrap(), apply_x_power(&star4(), 0, d("1/4")).unwrap());
    }
}
