//! Local Clifford equivalence of labeled graph states.
//!
//! Two graph states with adjacency matrices `t1`, `t2` are LC equivalent iff
//! there are diagonal binary matrices `A, B, C, D` with
//!
//! ```text
//! t1 C t2 + t1 A + D t2 + B = 0        and   a_i d_i + b_i c_i = 1 for all i.
//! ```
//!
//! The first condition is linear in the `4n` diagonal entries; its solution
//! space is enumerated with per-vertex pruning to find a point satisfying
//! the second.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{BitVec, GF2Matrix};
use crate::graph::SimpleGraph;
use crate::par::{self, Exec};

/// Diagonals of the symplectic blocks `A, B, C, D`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliffordWitness {
    pub a: BitVec,
    pub b: BitVec,
    pub c: BitVec,
    pub d: BitVec,
}

impl CliffordWitness {
    pub fn identity(n: usize) -> Self {
        CliffordWitness { a: BitVec::ones(n), b: BitVec::zeros(n), c: BitVec::zeros(n), d: BitVec::ones(n) }
    }

    /// `a_i d_i + b_i c_i = 1` at every vertex.
    pub fn is_nondegenerate(&self) -> bool {
        (0..self.a.len()).all(|i| (self.a.get(i) && self.d.get(i)) ^ (self.b.get(i) && self.c.get(i)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum LcVerdict {
    Equivalent { witness: CliffordWitness },
    NotEquivalent,
    Inconclusive { reason: String },
}

impl LcVerdict {
    pub fn witness(&self) -> Option<&CliffordWitness> {
        match self {
            LcVerdict::Equivalent { witness } => Some(witness),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SolverConfig {
    /// Maximum number of search nodes before giving up as inconclusive.
    pub node_budget: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { node_budget: 1 << 28 }
    }
}

/// Statistics of one solver run.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SolverStats {
    pub equations: usize,
    pub unknowns: usize,
    pub solution_space_dimension: usize,
    pub nodes: u64,
}

pub fn lc_equivalent(g1: &SimpleGraph, g2: &SimpleGraph) -> Result<LcVerdict> {
    lc_equivalent_with(g1, g2, &SolverConfig::default()).map(|(v, _)| v)
}

/// The linear system in `(a, b, c, d)` (unknown `k` of block `X` at index
/// `X*n + k`), one equation per matrix entry.
pub fn linear_system(g1: &SimpleGraph, g2: &SimpleGraph) -> Result<GF2Matrix> {
    let n = g1.n();
    if g2.n() != n {
        return Err(Error::SizeMismatch { left: n, right: g2.n() });
    }
    let (t1, t2) = (g1.adjacency(), g2.adjacency());
    let mut m = GF2Matrix::zeros(n * n, 4 * n);
    for i in 0..n {
        for j in 0..n {
            let row = i * n + j;
            for k in 0..n {
                if t1.get(i, k) && t2.get(k, j) {
                    m.set(row, 2 * n + k, true);
                }
            }
            if t1.get(i, j) {
                m.toggle(row, j);
            }
            if t2.get(i, j) {
                m.toggle(row, 3 * n + i);
            }
            if i == j {
                m.toggle(row, n + i);
            }
        }
    }
    Ok(m)
}

pub fn lc_equivalent_with(g1: &SimpleGraph, g2: &SimpleGraph, cfg: &SolverConfig) -> Result<(LcVerdict, SolverStats)> {
    let n = g1.n();
    let system = linear_system(g1, g2)?;
    let sol = system
        .solve(&BitVec::zeros(n * n))?
        .expect("homogeneous systems are always consistent");
    let dim = sol.nullspace.len();
    let mut stats = SolverStats { equations: n * n, unknowns: 4 * n, solution_space_dimension: dim, nodes: 0 };

    // forms[var] = coefficients of `var` over the nullspace basis
    let mut forms: Vec<BitVec> = vec![BitVec::zeros(dim); 4 * n];
    for (t, basis) in sol.nullspace.iter().enumerate() {
        for var in basis.iter_ones() {
            forms[var].set(t, true);
        }
    }

    // Order coordinates by how many vertex constraints they touch.
    let mut fan_out = vec![0usize; dim];
    for i in 0..n {
        let mut touched = BitVec::zeros(dim);
        for blk in 0..4 {
            for t in forms[blk * n + i].iter_ones() {
                touched.set(t, true);
            }
        }
        for t in touched.iter_ones() {
            fan_out[t] += 1;
        }
    }
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by_key(|&t| (std::cmp::Reverse(fan_out[t]), t));
    let mut position = vec![0usize; dim];
    for (p, &t) in order.iter().enumerate() {
        position[t] = p;
    }

    // Re-express forms in search order.
    let reorder = |f: &BitVec| {
        let mut out = BitVec::zeros(dim);
        for t in f.iter_ones() {
            out.set(position[t], true);
        }
        out
    };
    let forms: Vec<BitVec> = forms.iter().map(reorder).collect();

    // closes[p] = vertices whose four forms are fully determined once
    // positions 0..=p are assigned
    let mut closes: Vec<Vec<usize>> = vec![Vec::new(); dim];
    for i in 0..n {
        let last = (0..4).filter_map(|blk| forms[blk * n + i].iter_ones().last()).max();
        match last {
            Some(p) => closes[p].push(i),
            // all four entries identically zero: a d + b c = 0
            None => return Ok((LcVerdict::NotEquivalent, stats)),
        }
    }

    let holds = |i: usize, assignment: &BitVec| {
        let v = |blk: usize| forms[blk * n + i].dot(assignment);
        (v(0) && v(3)) ^ (v(1) && v(2))
    };

    // Iterative DFS over positions; `choice[p]` is the bit tried at p.
    let mut assignment = BitVec::zeros(dim);
    let mut choice: Vec<u8> = Vec::with_capacity(dim);
    let found = loop {
        let depth = choice.len();
        if depth == dim {
            break true;
        }
        // descend with 0 first
        choice.push(0);
        assignment.set(depth, false);
        stats.nodes += 1;
        let mut ok = closes[depth].iter().all(|&i| holds(i, &assignment));
        while !ok {
            // advance to the next sibling, backtracking when exhausted
            while let Some(last) = choice.last_mut() {
                if *last == 0 {
                    *last = 1;
                    assignment.set(choice.len() - 1, true);
                    break;
                }
                choice.pop();
                assignment.set(choice.len(), false);
            }
            if choice.is_empty() {
                break;
            }
            stats.nodes += 1;
            let p = choice.len() - 1;
            ok = closes[p].iter().all(|&i| holds(i, &assignment));
        }
        if choice.is_empty() {
            break false;
        }
        if stats.nodes > cfg.node_budget {
            let reason = format!(
                "search budget of {} nodes exhausted in a solution space of dimension {dim}",
                cfg.node_budget
            );
            return Ok((LcVerdict::Inconclusive { reason }, stats));
        }
    };
    if dim == 0 {
        // only the zero vector, already rejected above unless n == 0
        return Ok((
            if n == 0 { LcVerdict::Equivalent { witness: CliffordWitness::identity(0) } } else { LcVerdict::NotEquivalent },
            stats,
        ));
    }
    if !found {
        return Ok((LcVerdict::NotEquivalent, stats));
    }
    let value = |var: usize| forms[var].dot(&assignment);
    let block = |blk: usize| BitVec::from_bools(&(0..n).map(|i| value(blk * n + i)).collect::<Vec<_>>());
    let witness = CliffordWitness { a: block(0), b: block(1), c: block(2), d: block(3) };
    Ok((LcVerdict::Equivalent { witness }, stats))
}

/// Independent check of a witness by direct matrix arithmetic.
pub fn verify_witness(g1: &SimpleGraph, g2: &SimpleGraph, w: &CliffordWitness) -> Result<bool> {
    let n = g1.n();
    if g2.n() != n {
        return Err(Error::SizeMismatch { left: n, right: g2.n() });
    }
    if [&w.a, &w.b, &w.c, &w.d].iter().any(|v| v.len() != n) {
        return Err(Error::Dimension("witness length differs from vertex count".into()));
    }
    let (t1, t2) = (g1.adjacency(), g2.adjacency());
    let (a, b, c, d) =
        (GF2Matrix::diagonal(&w.a), GF2Matrix::diagonal(&w.b), GF2Matrix::diagonal(&w.c), GF2Matrix::diagonal(&w.d));
    let lhs = t1
        .mul(&c)?
        .mul(t2)?
        .add(&t1.mul(&a)?)?
        .add(&d.mul(t2)?)?
        .add(&b)?;
    Ok(lhs.is_zero() && w.is_nondegenerate())
}

/// A labeled local-complementation orbit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    /// Members in ascending order.
    pub graphs: Vec<SimpleGraph>,
    /// False when the cap stopped the search early.
    pub complete: bool,
}

impl Orbit {
    pub fn contains(&self, g: &SimpleGraph) -> bool {
        self.graphs.binary_search(g).is_ok()
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }
}

pub fn lc_orbit(g: &SimpleGraph, cap: usize) -> Orbit {
    lc_orbit_with(g, cap, Exec::default())
}

/// Breadth-first closure under local complementation at every vertex.
pub fn lc_orbit_with(g: &SimpleGraph, cap: usize, exec: Exec) -> Orbit {
    let mut seen: HashSet<SimpleGraph> = HashSet::from([g.clone()]);
    let mut frontier = vec![g.clone()];
    let mut complete = true;
    'bfs: while !frontier.is_empty() {
        let expanded = par::map_slice(exec, &frontier, |h| {
            (0..h.n())
                .map(|v| {
                    let mut c = h.clone();
                    c.local_complement_in_place(v);
                    c
                })
                .collect::<Vec<_>>()
        });
        let mut next = Vec::new();
        for c in expanded.into_iter().flatten() {
            if seen.contains(&c) {
                continue;
            }
            if seen.len() >= cap {
                complete = false;
                break 'bfs;
            }
            seen.insert(c.clone());
            next.push(c);
        }
        frontier = next;
    }
    let mut graphs: Vec<SimpleGraph> = seen.into_iter().collect();
    graphs.sort();
    Orbit { graphs, complete }
}

/// A bipartition of the vertex set with no edges inside either side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipartiteSplit {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl BipartiteSplit {
    pub fn new(mut left: Vec<usize>, mut right: Vec<usize>) -> Self {
        left.sort_unstable();
        right.sort_unstable();
        BipartiteSplit { left, right }
    }

    pub fn k1(&self) -> usize {
        self.left.len()
    }

    pub fn k2(&self) -> usize {
        self.right.len()
    }

    /// Disjoint, covering `0..n`, and independent in `g` on both sides.
    pub fn validate(&self, g: &SimpleGraph) -> Result<()> {
        let n = g.n();
        let mut side = vec![None; n];
        for (s, verts) in [(false, &self.left), (true, &self.right)] {
            for &v in verts {
                if v >= n {
                    return Err(Error::InvalidSplit(format!("vertex {v} out of range")));
                }
                if side[v].replace(s).is_some() {
                    return Err(Error::InvalidSplit(format!("vertex {v} listed twice")));
                }
            }
        }
        if let Some(v) = side.iter().position(Option::is_none) {
            return Err(Error::InvalidSplit(format!("vertex {v} is on neither side")));
        }
        if let Some((u, v)) = g.edges().find(|&(u, v)| side[u] == side[v]) {
            return Err(Error::InvalidSplit(format!("edge ({u}, {v}) lies within one side")));
        }
        Ok(())
    }

    /// `k1 x k2` cross-adjacency block, rows indexed by `left`, columns by
    /// `right`.
    pub fn cross_block(&self, g: &SimpleGraph) -> GF2Matrix {
        let mut z = GF2Matrix::zeros(self.k1(), self.k2());
        for (r, &u) in self.left.iter().enumerate() {
            for (c, &v) in self.right.iter().enumerate() {
                if g.has_edge(u, v) {
                    z.set(r, c, true);
                }
            }
        }
        z
    }
}

/// Parity of the number of left-side edges toggled by complementing the
/// right vertex `j`: `C(deg j, 2) mod 2`.
pub fn complementation_edge_parity(g: &SimpleGraph, split: &BipartiteSplit, j: usize) -> Result<bool> {
    if !split.right.contains(&j) {
        return Err(Error::InvalidSplit(format!("vertex {j} is not on the right side")));
    }
    let deg = g.degree(j);
    Ok((deg * deg.saturating_sub(1) / 2) % 2 == 1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ToggleEntry {
    pub vertex: usize,
    pub degree: usize,
    pub toggled_edges: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParityLedger {
    pub eta_edges: usize,
    pub eta_odd: bool,
    pub toggles: Vec<ToggleEntry>,
    pub all_toggles_even: bool,
    /// Every right complementation toggles an even number of left edges
    /// while the required number is odd.
    pub obstruction: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub k1: usize,
    pub k2: usize,
    /// Dimension of the solution space of `zeta A_l + D_u zeta = 0`.
    pub al_du_solution_dimension: usize,
    /// The only solutions are `A_l = D_u = 0` and `A_l = D_u = I`.
    pub al_du_zero_or_identity: bool,
    pub zeta_rank: usize,
    /// `zeta zeta^T = I` and `zeta^T zeta = I` cannot hold together.
    pub case1_excluded: bool,
    /// Right vertices whose complementation turns `g1` into `g2`, when they
    /// exist.
    pub complementation_set: Option<Vec<usize>>,
    pub parity: ParityLedger,
    pub transformation_possible: bool,
}

fn check_lemma_preconditions(g1: &SimpleGraph, split: &BipartiteSplit, g2: &SimpleGraph) -> Result<()> {
    if g1.n() != g2.n() {
        return Err(Error::SizeMismatch { left: g1.n(), right: g2.n() });
    }
    split.validate(g1).map_err(|e| Error::LemmaPrecondition(format!("g1 is not bipartite with this split: {e}")))?;
    if !g1.is_connected() {
        return Err(Error::LemmaPrecondition("g1 is not connected".into()));
    }
    if split.k1() == split.k2() {
        return Err(Error::LemmaPrecondition(format!("both sides have {} vertices", split.k1())));
    }
    if split.cross_block(g1) != split.cross_block(g2) {
        return Err(Error::LemmaPrecondition("g2 changes edges between the sides".into()));
    }
    for (x, &u) in split.right.iter().enumerate() {
        for &v in &split.right[x + 1..] {
            if g2.has_edge(u, v) {
                return Err(Error::LemmaPrecondition(format!("g2 has right-side edge ({u}, {v})")));
            }
        }
    }
    Ok(())
}

/// Structural analysis for a connected bipartite `g1` and a `g2` that adds
/// left-side edges only.
pub fn lemma_case_analysis(g1: &SimpleGraph, split: &BipartiteSplit, g2: &SimpleGraph) -> Result<LemmaReport> {
    check_lemma_preconditions(g1, split, g2)?;
    let (k1, k2) = (split.k1(), split.k2());
    let zeta = split.cross_block(g1);

    // zeta A_l + D_u zeta = 0: a_j + d_i = 0 wherever zeta_ij = 1.
    // Unknowns: a_j at j, d_i at k2 + i.
    let ones = (0..k1).map(|i| zeta.row(i).count_ones()).sum::<usize>();
    let mut top_right = GF2Matrix::zeros(ones, k1 + k2);
    let mut row = 0;
    for i in 0..k1 {
        for j in zeta.row(i).iter_ones() {
            top_right.set(row, j, true);
            top_right.set(row, k2 + i, true);
            row += 1;
        }
    }
    let sol = top_right.solve(&BitVec::zeros(ones))?.expect("homogeneous");
    let al_du_solution_dimension = sol.nullspace.len();
    let al_du_zero_or_identity = al_du_solution_dimension == 1 && sol.nullspace[0] == BitVec::ones(k1 + k2);

    let zeta_rank = zeta.rank();
    let case1_excluded = zeta_rank < k1.max(k2);

    // Case 2: zeta C_l zeta^T = eta off the diagonal.
    let left_pairs: Vec<(usize, usize)> =
        (0..k1).flat_map(|x| ((x + 1)..k1).map(move |y| (x, y))).collect();
    let mut system = GF2Matrix::zeros(left_pairs.len(), k2);
    let mut rhs = BitVec::zeros(left_pairs.len());
    for (r, &(x, y)) in left_pairs.iter().enumerate() {
        let (zx, zy) = (zeta.row(x), zeta.row(y));
        for j in zx.iter_ones() {
            if zy.get(j) {
                system.set(r, j, true);
            }
        }
        rhs.set(r, g2.has_edge(split.left[x], split.left[y]));
    }
    let complementation_set = system
        .solve(&rhs)?
        .map(|s| s.particular.iter_ones().map(|j| split.right[j]).collect::<Vec<_>>());
    if let Some(set) = &complementation_set {
        let mut g = g1.clone();
        for &j in set {
            g.local_complement_in_place(j);
        }
        if &g != g2 {
            return Err(Error::Inconsistent("case-2 complementation set does not reproduce g2".into()));
        }
    }

    let eta_edges = rhs.count_ones();
    let toggles: Vec<ToggleEntry> = split
        .right
        .iter()
        .map(|&j| {
            let degree = g1.degree(j);
            ToggleEntry { vertex: j, degree, toggled_edges: degree * degree.saturating_sub(1) / 2 }
        })
        .collect();
    let all_toggles_even = toggles.iter().all(|t| t.toggled_edges % 2 == 0);
    let eta_odd = eta_edges % 2 == 1;
    let parity = ParityLedger { eta_edges, eta_odd, toggles, all_toggles_even, obstruction: all_toggles_even && eta_odd };

    Ok(LemmaReport {
        k1,
        k2,
        al_du_solution_dimension,
        al_du_zero_or_identity,
        zeta_rank,
        case1_excluded,
        transformation_possible: complementation_set.is_some(),
        complementation_set,
        parity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, edges: &[(usize, usize)]) -> SimpleGraph {
        SimpleGraph::from_edges(n, edges).unwrap()
    }

    #[test]
    fn identical_graphs_give_identity_witness() {
        let g = graph(4, &[(0, 1), (1, 2), (2, 3)]);
        let v = lc_equivalent(&g, &g).unwrap();
        let w = v.witness().expect("equivalent");
        assert!(verify_witness(&g, &g, w).unwrap());
        assert!(verify_witness(&g, &g, &CliffordWitness::identity(4)).unwrap());
    }

    #[test]
    fn local_complement_is_equivalent() {
        let g = graph(5, &[(0, 1), (0, 3), (1, 3), (1, 4), (2, 3)]);
        let h = g.local_complement(1).unwrap();
        let w = lc_equivalent(&g, &h).unwrap();
        assert!(verify_witness(&g, &h, w.witness().unwrap()).unwrap());
    }

    #[test]
    fn different_edge_counts_on_two_vertices() {
        let v = lc_equivalent(&graph(2, &[(0, 1)]), &graph(2, &[])).unwrap();
        assert_eq!(v, LcVerdict::NotEquivalent);
        assert!(lc_equivalent(&graph(2, &[]), &graph(3, &[])).is_err());
    }

    #[test]
    fn small_orbits() {
        let e = graph(3, &[]);
        assert_eq!(lc_orbit(&e, 100).graphs, vec![e]);
        let k2 = graph(2, &[(0, 1)]);
        assert_eq!(lc_orbit(&k2, 100).graphs, vec![k2]);
        let k3 = graph(3, &[(0, 1), (1, 2), (0, 2)]);
        let orbit = lc_orbit(&k3, 100);
        assert!(orbit.complete);
        assert_eq!(orbit.len(), 4);
        assert!(orbit.contains(&graph(3, &[(0, 1), (1, 2)])));
        let capped = lc_orbit(&k3, 2);
        assert!(!capped.complete);
        assert_eq!(capped.len(), 2);
    }

    #[test]
    fn budget_exhaustion_is_inconclusive() {
        let g = graph(6, &[]);
        let (v, stats) = lc_equivalent_with(&g, &graph(6, &[(0, 1)]), &SolverConfig { node_budget: 3 }).unwrap();
        assert!(matches!(v, LcVerdict::Inconclusive { .. }), "{v:?} {stats:?}");
    }

    #[test]
    fn edge_parity() {
        let g = graph(8, &[(0, 5), (1, 5), (2, 5), (3, 5), (4, 5), (0, 6), (1, 6), (2, 6), (3, 6), (0, 7), (1, 7)]);
        let split = BipartiteSplit::new(vec![0, 1, 2, 3, 4], vec![5, 6, 7]);
        assert!(!complementation_edge_parity(&g, &split, 5).unwrap());
        assert!(!complementation_edge_parity(&g, &split, 6).unwrap());
        assert!(complementation_edge_parity(&g, &split, 7).unwrap());
        assert!(complementation_edge_parity(&g, &split, 0).is_err());
    }

    #[test]
    fn split_validation() {
        let g = graph(4, &[(0, 2), (1, 3), (0, 1)]);
        assert!(BipartiteSplit::new(vec![0, 1], vec![2, 3]).validate(&g).is_err());
        let p = graph(4, &[(0, 2), (1, 3), (1, 2)]);
        assert!(BipartiteSplit::new(vec![0, 1], vec![2, 3]).validate(&p).is_ok());
        assert!(BipartiteSplit::new(vec![0, 1], vec![2]).validate(&p).is_err());
        assert!(BipartiteSplit::new(vec![0, 1, 2], vec![2, 3]).validate(&p).is_err());
    }

    #[test]
    fn lemma_trivial_case() {
        // star K_{1,3}: left = leaves
        let g = graph(4, &[(0, 3), (1, 3), (2, 3)]);
        let split = BipartiteSplit::new(vec![0, 1, 2], vec![3]);
        let r = lemma_case_analysis(&g, &split, &g).unwrap();
        assert_eq!(r.complementation_set, Some(vec![]));
        assert!(r.al_du_zero_or_identity && r.case1_excluded && r.transformation_possible);
        let mut g2 = g.clone();
        for (u, v) in [(0, 1), (0, 2), (1, 2)] {
            g2.add_edge(u, v).unwrap();
        }
        let r = lemma_case_analysis(&g, &split, &g2).unwrap();
        assert_eq!(r.complementation_set, Some(vec![3]));
        let mut g3 = g.clone();
        g3.add_edge(0, 1).unwrap();
        let r = lemma_case_analysis(&g, &split, &g3).unwrap();
        assert!(!r.transformation_possible && r.complementation_set.is_none());
    }

    #[test]
    fn lemma_preconditions() {
        let g = graph(4, &[(0, 3), (1, 3), (2, 3)]);
        let split = BipartiteSplit::new(vec![0, 1, 2], vec![3]);
        let disconnected = graph(4, &[(0, 3), (1, 3)]);
        assert!(matches!(lemma_case_analysis(&disconnected, &split, &disconnected), Err(Error::LemmaPrecondition(_))));
        let mut moved = g.clone();
        moved.toggle_edge(2, 3).unwrap();
        assert!(matches!(lemma_case_analysis(&g, &split, &moved), Err(Error::LemmaPrecondition(_))));
        let p4 = graph(4, &[(0, 2), (1, 2), (1, 3)]);
        let even = BipartiteSplit::new(vec![0, 1], vec![2, 3]);
        assert!(matches!(lemma_case_analysis(&p4, &even, &p4), Err(Error::LemmaPrecondition(_))));
    }
}
