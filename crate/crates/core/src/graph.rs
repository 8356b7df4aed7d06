//! Simple labeled graphs backed by a symmetric GF(2) adjacency matrix.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};
use crate::gf2::{BitVec, GF2Matrix};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SimpleGraph {
    n: usize,
    adj: GF2Matrix,
}

impl SimpleGraph {
    /// Edgeless graph on `n` vertices.
    pub fn new(n: usize) -> Self {
        SimpleGraph { n, adj: GF2Matrix::zeros(n, n) }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Validates symmetry and a zero diagonal.
    pub fn from_adjacency(adj: GF2Matrix) -> Result<Self> {
        if adj.rows() != adj.cols() {
            return Err(Error::InvalidAdjacency(format!("{}x{} is not square", adj.rows(), adj.cols())));
        }
        let n = adj.rows();
        for i in 0..n {
            if adj.get(i, i) {
                return Err(Error::InvalidAdjacency(format!("self-loop at vertex {i}")));
            }
            for j in (i + 1)..n {
                if adj.get(i, j) != adj.get(j, i) {
                    return Err(Error::InvalidAdjacency(format!("asymmetric entry ({i}, {j})")));
                }
            }
        }
        Ok(SimpleGraph { n, adj })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn adjacency(&self) -> &GF2Matrix {
        &self.adj
    }

    fn check(&self, v: usize) -> Result<()> {
        if v >= self.n {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        } else {
            Ok(())
        }
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj.get(u, v)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        self.set_edge(u, v, true)
    }

    pub fn set_edge(&mut self, u: usize, v: usize, present: bool) -> Result<()> {
        self.check(u)?;
        self.check(v)?;
        if u == v {
            return Err(Error::InvalidAdjacency(format!("self-loop at vertex {u}")));
        }
        self.adj.set(u, v, present);
        self.adj.set(v, u, present);
        Ok(())
    }

    pub fn toggle_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let present = self.has_edge(u, v);
        self.set_edge(u, v, !present)
    }

    pub fn neighborhood(&self, v: usize) -> BitVec {
        self.adj.row(v)
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        self.adj.row(v).iter_ones().collect()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj.row_words(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Degrees sorted ascending.
    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = (0..self.n).map(|v| self.degree(v)).collect();
        d.sort_unstable();
        d
    }

    /// Edges `(u, v)` with `u < v` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| ((u + 1)..self.n).filter(move |&v| self.adj.get(u, v)).map(move |v| (u, v)))
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for w in self.adj.row(u).iter_ones() {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == self.n
    }

    /// Complement the subgraph induced by the neighbourhood of `v`.
    pub fn local_complement(&self, v: usize) -> Result<SimpleGraph> {
        self.check(v)?;
        let mut out = self.clone();
        out.local_complement_in_place(v);
        Ok(out)
    }

    pub(crate) fn local_complement_in_place(&mut self, v: usize) {
        let nbhd = self.adj.row(v);
        for u in nbhd.iter_ones() {
            self.adj.xor_row_with(u, &nbhd);
            self.adj.toggle(u, u);
        }
    }

    /// A proper two-colouring when one exists (component-wise, smallest
    /// vertex of each component coloured `false`); otherwise an edge closing
    /// an odd cycle.
    pub fn two_coloring(&self) -> std::result::Result<Vec<bool>, (usize, usize)> {
        let mut color: Vec<Option<bool>> = vec![None; self.n];
        for start in 0..self.n {
            if color[start].is_some() {
                continue;
            }
            color[start] = Some(false);
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                let cu = color[u].unwrap();
                for w in self.adj.row(u).iter_ones() {
                    match color[w] {
                        None => {
                            color[w] = Some(!cu);
                            queue.push_back(w);
                        }
                        Some(cw) if cw == cu => return Err((u.min(w), u.max(w))),
                        Some(_) => {}
                    }
                }
            }
        }
        Ok(color.into_iter().map(Option::unwrap).collect())
    }

    /// Parse the adjacency text format: a line with `n`, then `n` rows of
    /// `0`/`1` characters.
    pub fn parse_adjacency_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let n: usize = lines
            .next()
            .ok_or_else(|| Error::Parse("empty adjacency file".into()))?
            .parse()
            .map_err(|_| Error::Parse("first line must be the vertex count".into()))?;
        let mut adj = GF2Matrix::zeros(n, n);
        for r in 0..n {
            let line = lines.next().ok_or_else(|| Error::Parse(format!("missing row {r}")))?;
            let row: Vec<char> = line.chars().filter(|c| !c.is_whitespace()).collect();
            if row.len() != n {
                return Err(Error::Parse(format!("row {r} has {} entries, expected {n}", row.len())));
            }
            for (c, ch) in row.into_iter().enumerate() {
                match ch {
                    '0' => {}
                    '1' => adj.set(r, c, true),
                    other => return Err(Error::Parse(format!("bad character {other:?} in row {r}"))),
                }
            }
        }
        if lines.next().is_some() {
            return Err(Error::Parse("trailing rows after adjacency matrix".into()));
        }
        Self::from_adjacency(adj)
    }

    pub fn to_adjacency_text(&self) -> String {
        let mut s = format!("{}\n", self.n);
        for r in 0..self.n {
            s.push_str(&self.adj.row(r).to_string());
            s.push('\n');
        }
        s
    }
}

impl fmt::Debug for SimpleGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SimpleGraph(n={}, edges={:?})", self.n, self.edges().collect::<Vec<_>>())
    }
}

/// Serialized in the hypergraph JSON layout with every edge at weight 1.
impl serde::Serialize for SimpleGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        crate::hypergraph::WeightedHypergraph::from_graph(self).serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for SimpleGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        crate::hypergraph::WeightedHypergraph::deserialize(d)?
            .to_graph()
            .ok_or_else(|| D::Error::custom("state has edges that are not weight-1 pairs"))
    }
}
