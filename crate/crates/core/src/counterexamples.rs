//! Bipartite graph pairs that are LU but not LC equivalent.
//!
//! Vertex order is fixed: the central (left) block first, then the right
//! blocks in lexicographic subset order.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dyadic::{Dyadic, Weight};
use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::hypergraph::{Edge, WeightedHypergraph};
use crate::lc::{self, BipartiteSplit, CliffordWitness, LcVerdict, LemmaReport, SolverConfig, SolverStats};
use crate::par::{self, Exec};
use crate::phase::power_terms;
use crate::transforms::{apply_gate, apply_sequence, link, GateApplication, GateSequence, XRuleMode};

/// Largest number of right vertices a subset construction may create.
pub const MAX_RIGHT_VERTICES: usize = 1 << 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ConstructionSpec {
    /// `n` left vertices and one right vertex per `r`-subset of them.
    BipartiteSubsets { n: usize, r: usize },
    /// Six centrals, one right vertex per 5-subset and per 4-subset.
    TwentySeven,
    /// The 7-qubit graph turned into a hypergraph with a three-edge.
    GraphToHypergraph7,
}

fn binomial(n: usize, k: usize) -> Option<usize> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    (0..k).try_fold(1usize, |acc, i| acc.checked_mul(n - i).map(|x| x / (i + 1)))
}

impl ConstructionSpec {
    pub fn left_count(&self) -> usize {
        match self {
            ConstructionSpec::BipartiteSubsets { n, .. } => *n,
            ConstructionSpec::TwentySeven => 6,
            ConstructionSpec::GraphToHypergraph7 => 3,
        }
    }

    pub fn right_count(&self) -> Result<usize> {
        match *self {
            ConstructionSpec::BipartiteSubsets { n, r } => {
                if r == 0 || r > n {
                    return Err(Error::Parse(format!("subset size {r} must lie in 1..={n}")));
                }
                match binomial(n, r) {
                    Some(c) if c <= MAX_RIGHT_VERTICES => Ok(c),
                    _ => Err(Error::ConstructionTooLarge(format!(
                        "C({n}, {r}) right vertices exceed the cap of {MAX_RIGHT_VERTICES}"
                    ))),
                }
            }
            ConstructionSpec::TwentySeven => Ok(21),
            ConstructionSpec::GraphToHypergraph7 => Ok(4),
        }
    }

    pub fn vertex_count(&self) -> Result<usize> {
        Ok(self.left_count() + self.right_count()?)
    }
}

impl fmt::Display for ConstructionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstructionSpec::BipartiteSubsets { n, r } => write!(f, "bipartite:{n}:{r}"),
            ConstructionSpec::TwentySeven => f.write_str("twentyseven"),
            ConstructionSpec::GraphToHypergraph7 => f.write_str("g2h7"),
        }
    }
}

impl FromStr for ConstructionSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let num = |t: &str| t.parse::<usize>().map_err(|_| Error::Parse(format!("bad number {t:?} in {s:?}")));
        let spec = match parts.as_slice() {
            ["bipartite", n, r] => ConstructionSpec::BipartiteSubsets { n: num(n)?, r: num(r)? },
            ["twentyseven"] | ["27"] => ConstructionSpec::TwentySeven,
            ["g2h7"] => ConstructionSpec::GraphToHypergraph7,
            _ => {
                return Err(Error::Parse(format!(
                    "unknown construction {s:?}; expected bipartite:N:R, twentyseven or g2h7"
                )))
            }
        };
        spec.right_count()?;
        Ok(spec)
    }
}

fn subset_graph(left: usize, blocks: &[Vec<Vec<usize>>]) -> (SimpleGraph, BipartiteSplit) {
    let right: usize = blocks.iter().map(Vec::len).sum();
    let mut g = SimpleGraph::new(left + right);
    let mut v = left;
    for block in blocks {
        for subset in block {
            for &u in subset {
                g.add_edge(u, v).expect("in range");
            }
            v += 1;
        }
    }
    (g, BipartiteSplit::new((0..left).collect(), (left..left + right).collect()))
}

pub fn build(spec: &ConstructionSpec) -> Result<(SimpleGraph, BipartiteSplit)> {
    spec.right_count()?;
    Ok(match *spec {
        ConstructionSpec::BipartiteSubsets { n, r } => subset_graph(n, &[(0..n).combinations(r).collect()]),
        ConstructionSpec::TwentySeven => {
            subset_graph(6, &[(0..6).combinations(5).collect(), (0..6).combinations(4).collect()])
        }
        ConstructionSpec::GraphToHypergraph7 => {
            let (g, _, _) = build_graph_to_hypergraph7()?;
            (g, BipartiteSplit::new(vec![1, 2, 3], vec![0, 4, 5, 6]))
        }
    })
}

/// Weights collected for all edges of one cardinality.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LedgerEntry {
    pub cardinality: usize,
    pub edges: usize,
    /// Distinct accumulated weights before reduction, with edge counts.
    pub raw: BTreeMap<Dyadic, usize>,
    /// Distinct weights modulo 2, with edge counts.
    pub reduced: BTreeMap<Weight, usize>,
}

/// Bookkeeping of the `X^{1/4}` stage and the Z corrections it implies.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Ledger {
    pub entries: Vec<LedgerEntry>,
    /// `(vertex, exponent)` for each Z correction.
    pub z_corrections: Vec<(usize, Dyadic)>,
    /// Edges other than the original ones whose weight is not in {0, 1}
    /// after the corrections, or that are not pairs.
    pub surviving: Vec<(Edge, Weight)>,
}

impl Ledger {
    pub fn entry(&self, cardinality: usize) -> Option<&LedgerEntry> {
        self.entries.iter().find(|e| e.cardinality == cardinality)
    }
}

/// Applies `X^{1/4}` on every right vertex, then cancels the accumulated
/// single-qubit weights. Returns the final state, the full witness, and
/// the ledger; the state need not be a graph state.
pub fn derive_ledger(g: &SimpleGraph, split: &BipartiteSplit) -> Result<(WeightedHypergraph, GateSequence, Ledger)> {
    split.validate(g)?;
    let start = WeightedHypergraph::from_graph(g);
    let quarter = Dyadic::new(1, 2);
    let mut witness = GateSequence::new();
    // totals over the unpruned expansion, vanishing cardinalities included
    let mut totals: BTreeMap<Edge, Dyadic> = BTreeMap::new();
    let mut state = start.clone();
    for (step, &j) in split.right.iter().enumerate() {
        let gate = GateApplication::x_power(j, quarter);
        let wrap = |e| Error::Step { step, source: Box::new(e) };
        let l = link(&state, j).map_err(wrap)?;
        for (e, w) in power_terms(&l, quarter, false, Exec::Sequential) {
            *totals.entry(e).or_insert(Dyadic::ZERO) += w;
        }
        state = apply_gate(&state, &gate, XRuleMode::Standard).map_err(wrap)?;
        witness.push(gate);
    }
    let mut by_card: BTreeMap<usize, LedgerEntry> = BTreeMap::new();
    for (e, w) in &totals {
        if e.is_empty() {
            continue;
        }
        let entry = by_card.entry(e.len()).or_insert_with(|| LedgerEntry {
            cardinality: e.len(),
            edges: 0,
            raw: BTreeMap::new(),
            reduced: BTreeMap::new(),
        });
        entry.edges += 1;
        *entry.raw.entry(*w).or_insert(0) += 1;
        *entry.reduced.entry(w.weight()).or_insert(0) += 1;
    }

    let z_corrections: Vec<(usize, Dyadic)> = totals
        .iter()
        .filter(|(e, w)| e.len() == 1 && !w.weight().is_zero())
        .map(|(e, w)| (e.vertices()[0], -*w))
        .collect();
    for &(v, a) in &z_corrections {
        witness.push(GateApplication::z_power(v, a));
    }
    let end = apply_sequence(&start, &witness)?;
    let surviving = end
        .edges()
        .filter(|(e, w)| e.len() != 2 || *w != Weight::ONE)
        .map(|(e, w)| (e.clone(), w))
        .collect();
    let ledger = Ledger { entries: by_card.into_values().collect(), z_corrections, surviving };
    Ok((end, witness, ledger))
}

/// The graph reached from `g` by the `X^{1/4}` / `Z` pipeline, with its
/// witness and ledger.
pub fn derive_lu_partner(g: &SimpleGraph, split: &BipartiteSplit) -> Result<(SimpleGraph, GateSequence, Ledger)> {
    let (end, witness, ledger) = derive_ledger(g, split)?;
    match end.to_graph() {
        Some(target) => Ok((target, witness, ledger)),
        None => Err(Error::CancellationFailed {
            surviving: ledger.surviving.iter().map(|(e, w)| format!("{e}:{w}")).join(", "),
        }),
    }
}

/// Star on `{0,1,2,3}` centred at 0, connectors 4, 5, 6 joined to
/// `{1,2}`, `{1,3}`, `{2,3}`. The witness turns it into a state whose only
/// non-graph edge is the three-edge `{1,2,3}`.
pub fn build_graph_to_hypergraph7() -> Result<(SimpleGraph, GateSequence, WeightedHypergraph)> {
    let g = SimpleGraph::from_edges(7, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (1, 5), (3, 5), (2, 6), (3, 6)])?;
    let quarter = Dyadic::new(1, 2);
    let mut witness = GateSequence::new();
    witness.push(GateApplication::x_power(0, quarter));
    for c in 4..7 {
        witness.push(GateApplication::x_power(c, -quarter));
    }
    let mid = apply_sequence(&WeightedHypergraph::from_graph(&g), &witness)?;
    let corrections: Vec<GateApplication> = mid
        .edges()
        .filter(|(e, w)| e.len() == 1 && !w.is_zero())
        .map(|(e, w)| GateApplication::z_power(e.vertices()[0], -w.value()))
        .collect();
    for z in corrections {
        witness.push(z);
    }
    let expected = apply_sequence(&WeightedHypergraph::from_graph(&g), &witness)?;
    Ok((g, witness, expected))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LcConclusion {
    YesWithWitness,
    NoBySolver,
    NoByParity,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LcSummary {
    pub verdict: LcConclusion,
    pub witness: Option<CliffordWitness>,
    pub solver: SolverStats,
    pub solver_note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub n: usize,
    pub lu_equivalent: bool,
    pub lu_witness: GateSequence,
    pub lu_note: Option<String>,
    pub ledger: Ledger,
    pub lc: LcSummary,
    pub lemma: Option<LemmaReport>,
    pub confirmed: bool,
}

impl VerificationReport {
    pub fn lc_inconclusive(&self) -> bool {
        self.lc.verdict == LcConclusion::Inconclusive
    }
}

/// LU side from the `X^{1/4}` pipeline, LC side from the solver and the
/// lemma analysis, with the two LC arguments cross-checked.
pub fn verify_counterexample(g1: &SimpleGraph, split: &BipartiteSplit, g2: &SimpleGraph) -> Result<VerificationReport> {
    verify_counterexample_with(g1, split, g2, &SolverConfig::default())
}

pub fn verify_counterexample_with(
    g1: &SimpleGraph,
    split: &BipartiteSplit,
    g2: &SimpleGraph,
    cfg: &SolverConfig,
) -> Result<VerificationReport> {
    if g1.n() != g2.n() {
        return Err(Error::SizeMismatch { left: g1.n(), right: g2.n() });
    }
    split.validate(g1)?;
    let (end, witness, ledger) = derive_ledger(g1, split)?;
    let (lu_equivalent, lu_note) = match end.to_graph() {
        Some(t) if &t == g2 => (true, None),
        Some(_) => (false, Some("the local pipeline reaches a different graph".to_string())),
        None => (false, Some(format!("{} non-graph edges survive the corrections", ledger.surviving.len()))),
    };

    let (verdict, stats) = lc::lc_equivalent_with(g1, g2, cfg)?;
    let lemma = match lc::lemma_case_analysis(g1, split, g2) {
        Ok(r) => Some(r),
        Err(Error::LemmaPrecondition(_)) => None,
        Err(e) => return Err(e),
    };

    if let (Some(r), LcVerdict::Equivalent { .. } | LcVerdict::NotEquivalent) = (&lemma, &verdict) {
        let solver_yes = verdict.witness().is_some();
        if solver_yes != r.transformation_possible {
            return Err(Error::Inconsistent(format!(
                "solver says {}, case analysis says {}",
                if solver_yes { "equivalent" } else { "not equivalent" },
                if r.transformation_possible { "possible" } else { "impossible" }
            )));
        }
    }
    if let Some(w) = verdict.witness() {
        if !lc::verify_witness(g1, g2, w)? {
            return Err(Error::Inconsistent("solver witness fails the independent check".into()));
        }
    }

    let parity = lemma.as_ref().is_some_and(|r| r.parity.obstruction);
    let (conclusion, solver_note) = match &verdict {
        LcVerdict::Equivalent { .. } => (LcConclusion::YesWithWitness, None),
        LcVerdict::NotEquivalent if parity => (LcConclusion::NoByParity, None),
        LcVerdict::NotEquivalent => (LcConclusion::NoBySolver, None),
        LcVerdict::Inconclusive { reason } if parity => (LcConclusion::NoByParity, Some(reason.clone())),
        LcVerdict::Inconclusive { reason } => (LcConclusion::Inconclusive, Some(reason.clone())),
    };
    let confirmed = lu_equivalent && matches!(conclusion, LcConclusion::NoBySolver | LcConclusion::NoByParity);
    Ok(VerificationReport {
        n: g1.n(),
        lu_equivalent,
        lu_witness: witness,
        lu_note,
        ledger,
        lc: LcSummary { verdict: conclusion, witness: verdict.witness().cloned(), solver: stats, solver_note },
        lemma,
        confirmed,
    })
}

/// Builds the construction, derives its LU partner and verifies the pair.
/// A failed cancellation yields an unconfirmed report instead of an error.
pub fn verify_construction(spec: &ConstructionSpec) -> Result<VerificationReport> {
    verify_construction_with(spec, &SolverConfig::default())
}

pub fn verify_construction_with(spec: &ConstructionSpec, cfg: &SolverConfig) -> Result<VerificationReport> {
    let (g1, split) = build(spec)?;
    let (end, witness, ledger) = derive_ledger(&g1, &split)?;
    match end.to_graph() {
        Some(g2) => verify_counterexample_with(&g1, &split, &g2, cfg),
        None => {
            let lu_note = Some(format!("{} non-graph edges survive the corrections", ledger.surviving.len()));
            Ok(VerificationReport {
                n: g1.n(),
                lu_equivalent: false,
                lu_witness: witness,
                lu_note,
                ledger,
                lc: LcSummary {
                    verdict: LcConclusion::Inconclusive,
                    witness: None,
                    solver: SolverStats::default(),
                    solver_note: Some("no partner graph to compare against".into()),
                },
                lemma: None,
                confirmed: false,
            })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum BipartiteOutcome {
    Bipartite { graph: SimpleGraph, split: BipartiteSplit },
    NotBipartite { graph: SimpleGraph, edge: (usize, usize) },
}

impl BipartiteOutcome {
    pub fn graph(&self) -> &SimpleGraph {
        match self {
            BipartiteOutcome::Bipartite { graph, .. } | BipartiteOutcome::NotBipartite { graph, .. } => graph,
        }
    }
}

/// Complements all central vertices, then `subset`, then the centrals and
/// `subset` once more, and re-checks bipartiteness. In the new split the
/// smaller colour class is placed on the left.
pub fn bipartite_preserving_sequence(
    g: &SimpleGraph,
    split: &BipartiteSplit,
    subset: &[usize],
) -> Result<BipartiteOutcome> {
    split.validate(g)?;
    if let Some(&v) = subset.iter().find(|v| !split.right.contains(v)) {
        return Err(Error::InvalidSplit(format!("vertex {v} is central")));
    }
    let mut h = g.clone();
    for _ in 0..2 {
        for &c in &split.left {
            h.local_complement_in_place(c);
        }
        for &v in subset {
            h.local_complement_in_place(v);
        }
    }
    Ok(match h.two_coloring() {
        Ok(colors) => {
            let (mut a, mut b): (Vec<usize>, Vec<usize>) = (0..h.n()).partition(|&v| !colors[v]);
            if b.len() < a.len() {
                std::mem::swap(&mut a, &mut b);
            }
            BipartiteOutcome::Bipartite { graph: h, split: BipartiteSplit::new(a, b) }
        }
        Err(edge) => BipartiteOutcome::NotBipartite { graph: h, edge },
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Largest subset size considered.
    pub max_subset_size: usize,
    /// Maximum number of subsets examined.
    pub budget: usize,
    /// Draw random subsets instead of enumerating in lexicographic order.
    pub sample_seed: Option<u64>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { max_subset_size: 6, budget: 1 << 20, sample_seed: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchResult {
    pub candidates: Vec<Vec<usize>>,
    pub examined: usize,
    /// The budget ran out before the search space did.
    pub budget_exhausted: bool,
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}

/// Subsets of the right side whose [`bipartite_preserving_sequence`]
/// output is bipartite with degree multiset `target_degrees`.
pub fn degree_distribution_search(
    g: &SimpleGraph,
    split: &BipartiteSplit,
    target_degrees: &[usize],
    cfg: &SearchConfig,
    exec: Exec,
) -> Result<SearchResult> {
    split.validate(g)?;
    if target_degrees.len() != g.n() {
        return Err(Error::SizeMismatch { left: g.n(), right: target_degrees.len() });
    }
    let target = sorted(target_degrees.to_vec());
    let right = &split.right;
    let max_size = cfg.max_subset_size.min(right.len());
    let matches = |subset: &Vec<usize>| -> Result<bool> {
        Ok(match bipartite_preserving_sequence(g, split, subset)? {
            BipartiteOutcome::Bipartite { graph, .. } => graph.degree_sequence() == target,
            BipartiteOutcome::NotBipartite { .. } => false,
        })
    };

    let total: Option<usize> = (0..=max_size).try_fold(0usize, |acc, k| binomial(right.len(), k).and_then(|c| acc.checked_add(c)));
    let mut candidates = Vec::new();
    let mut examined = 0;

    if let Some(seed) = cfg.sample_seed {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let draws: Vec<Vec<usize>> = (0..cfg.budget)
            .map(|_| {
                let k = rng.gen_range(0..=max_size);
                sorted(right.choose_multiple(&mut rng, k).copied().collect())
            })
            .collect();
        let hits = par::map_slice(exec, &draws, matches);
        for (s, hit) in draws.into_iter().zip(hits) {
            if hit? && !candidates.contains(&s) {
                candidates.push(s);
            }
        }
        return Ok(SearchResult { candidates, examined: cfg.budget, budget_exhausted: true });
    }

    const CHUNK: usize = 4096;
    let mut all = (0..=max_size).flat_map(|k| right.iter().copied().combinations(k));
    let mut exhausted_space = false;
    while examined < cfg.budget {
        let chunk: Vec<Vec<usize>> = all.by_ref().take(CHUNK.min(cfg.budget - examined)).collect();
        if chunk.is_empty() {
            exhausted_space = true;
            break;
        }
        examined += chunk.len();
        let hits = par::map_slice(exec, &chunk, matches);
        for (s, hit) in chunk.into_iter().zip(hits) {
            if hit? {
                candidates.push(s);
            }
        }
    }
    let budget_exhausted = !exhausted_space && total.is_none_or(|t| examined < t);
    Ok(SearchResult { candidates, examined, budget_exhausted })
}
