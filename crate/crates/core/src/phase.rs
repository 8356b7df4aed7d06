//! Powers of involutions and of products of edge gates.
//!
//! For a product `C_{e_1} ... C_{e_k}` of distinct edge gates,
//!
//! ```text
//! (C_{e_1} ... C_{e_k})^a = prod_{S nonempty} C_{union_{j in S} e_j}^{(-2)^{|S|-1} a}
//! ```
//!
//! which follows from writing the indicator of the symmetric difference of
//! the `-1` eigenspaces as an alternating sum over unions. When `a = p/2^q`,
//! every term with `|S| >= q + 2` is a multiple of 2 and acts trivially, so
//! only subsets up to size `q + 1` are enumerated.

use std::collections::{BTreeMap, HashSet};

use num_complex::Complex64;

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::hypergraph::{Edge, WeightedHypergraph};
use crate::par::{self, Exec};

/// Largest operator handled by [`involution_power_check`].
pub const MAX_CHECK_QUBITS: usize = 12;

/// A product of pairwise distinct edge gates.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct EdgeGateProduct {
    edges: Vec<Edge>,
}

impl EdgeGateProduct {
    pub fn new(edges: Vec<Edge>) -> Result<Self> {
        let mut seen = HashSet::new();
        for e in &edges {
            if !seen.insert(e) {
                return Err(Error::Parse(format!("duplicate edge {e} in gate product")));
            }
        }
        Ok(EdgeGateProduct { edges })
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// Largest subset size that can contribute a nonzero weight modulo 2.
pub fn contributing_subset_size(alpha: Dyadic) -> usize {
    if alpha.is_zero() {
        0
    } else {
        alpha.exponent() as usize + 1
    }
}

/// Unreduced weight totals of the expansion: for every nonempty subset `S`
/// (up to the contributing size when `prune` is set), `(-2)^{|S|-1} alpha`
/// is added to the union of its edges. Distinct subsets with equal unions
/// accumulate.
pub fn power_terms(p: &EdgeGateProduct, alpha: Dyadic, prune: bool, exec: Exec) -> BTreeMap<Edge, Dyadic> {
    let k = p.len();
    if alpha.is_zero() || k == 0 {
        return BTreeMap::new();
    }
    let max_size = if prune { contributing_subset_size(alpha).min(k) } else { k };
    let coeffs: Vec<Dyadic> = (1..=max_size)
        .map(|s| {
            let c = alpha.mul_pow2(s as i32 - 1);
            if s % 2 == 0 {
                -c
            } else {
                c
            }
        })
        .collect();

    // Partition by the smallest index in the subset.
    let partial = par::map_range(exec, k, |first| {
        let mut acc = BTreeMap::new();
        let mut stack: Vec<(usize, Edge, usize)> = vec![(first, p.edges[first].clone(), 1)];
        while let Some((last, union, size)) = stack.pop() {
            let entry = acc.entry(union.clone()).or_insert(Dyadic::ZERO);
            *entry += coeffs[size - 1];
            if size < max_size {
                for next in (last + 1)..k {
                    stack.push((next, union.union(&p.edges[next]), size + 1));
                }
            }
        }
        acc
    });

    let mut total: BTreeMap<Edge, Dyadic> = BTreeMap::new();
    for part in partial {
        for (e, w) in part {
            *total.entry(e).or_insert(Dyadic::ZERO) += w;
        }
    }
    total
}

/// Canonical weighted-edge delta realising `p^alpha` on `n` qubits.
pub fn power_of_product(n: usize, p: &EdgeGateProduct, alpha: Dyadic) -> Result<WeightedHypergraph> {
    power_of_product_with(n, p, alpha, true, Exec::default())
}

pub fn power_of_product_with(
    n: usize,
    p: &EdgeGateProduct,
    alpha: Dyadic,
    prune: bool,
    exec: Exec,
) -> Result<WeightedHypergraph> {
    WeightedHypergraph::from_terms(n, power_terms(p, alpha, prune, exec))
}

/// Dense reference for `G^alpha` with `G` a diagonal involution: every `-1`
/// entry becomes `exp(i pi alpha)`.
pub fn involution_power_check(diag: &[i8], alpha: f64) -> Result<Vec<Complex64>> {
    let len = diag.len();
    if !len.is_power_of_two() {
        return Err(Error::Dimension(format!("diagonal length {len} is not a power of two")));
    }
    let n = len.trailing_zeros() as usize;
    if n > MAX_CHECK_QUBITS {
        return Err(Error::TooManyQubits { n, max: MAX_CHECK_QUBITS });
    }
    let phase = Complex64::from_polar(1.0, std::f64::consts::PI * alpha);
    diag.iter()
        .enumerate()
        .map(|(index, &value)| match value {
            1 => Ok(Complex64::new(1.0, 0.0)),
            -1 => Ok(phase),
            _ => Err(Error::NotInvolution { index, value }),
        })
        .collect()
}

/// The `+-1` diagonal of `prod_e C_e` on `n` qubits, with qubit `q` as bit
/// `q` of the basis index.
pub fn edge_product_diagonal(n: usize, edges: &[Edge]) -> Vec<i8> {
    let masks: Vec<usize> = edges.iter().map(|e| e.vertices().iter().fold(0usize, |m, &v| m | 1 << v)).collect();
    (0..1usize << n)
        .map(|x| {
            let flips = masks.iter().filter(|&&m| x & m == m).count();
            if flips % 2 == 0 {
                1
            } else {
                -1
            }
        })
        .collect()
}
