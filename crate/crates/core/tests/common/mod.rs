#![allow(dead_code)]

use lulc::oracle::{x_power_matrix, DenseState};
use lulc::transforms::apply_x_power;
use lulc::{Dyadic, SimpleGraph, WeightedHypergraph};
use rand::Rng;

/// Every labeled graph on `n` vertices, in edge-mask order.
pub fn all_graphs(n: usize) -> Vec<SimpleGraph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v))).collect();
    (0u64..1 << pairs.len())
        .map(|mask| {
            let edges: Vec<(usize, usize)> =
                pairs.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &p)| p).collect();
            SimpleGraph::from_edges(n, &edges).unwrap()
        })
        .collect()
}

pub fn connected_graphs(n: usize) -> Vec<SimpleGraph> {
    all_graphs(n).into_iter().filter(SimpleGraph::is_connected).collect()
}

pub fn random_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> SimpleGraph {
    let mut g = SimpleGraph::new(n);
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

/// Distance up to global phase between the symbolic `X_i^alpha` image and
/// the dense matrix applied to the input state.
pub fn x_power_error(h: &WeightedHypergraph, i: usize, alpha: Dyadic) -> f64 {
    let symbolic = apply_x_power(h, i, alpha).unwrap();
    let dense = DenseState::from_hypergraph(h).unwrap().apply_unitary_1q(i, &x_power_matrix(alpha.to_f64())).unwrap();
    DenseState::from_hypergraph(&symbolic).unwrap().distance_up_to_global_phase(&dense).unwrap()
}

pub fn d(s: &str) -> Dyadic {
    s.parse().unwrap()
}
