//! Small random networks for property tests and oracle comparisons.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::graph::Digraph;
use crate::model::{build_network_indexed, CitationNetwork, Publication};

/// Edges `i -> j` with `i > j`, each present with probability `density`.
/// Node order is a topological order, newest (largest) first.
pub fn random_dag_edges(n: usize, density: f64, rng: &mut ChaCha8Rng) -> Vec<(u32, u32)> {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..i {
            if rng.gen_bool(density) {
                edges.push((i as u32, j as u32));
            }
        }
    }
    edges
}

pub fn random_dag(n: usize, density: f64, rng: &mut ChaCha8Rng) -> Digraph {
    Digraph::from_edges(n, &random_dag_edges(n, density, rng))
}

/// A random DAG with its nodes relabeled by a random permutation, so that
/// index order says nothing about topological order.
pub fn shuffled_dag(n: usize, density: f64, rng: &mut ChaCha8Rng) -> Digraph {
    use rand::seq::SliceRandom;
    let mut perm: Vec<u32> = (0..n as u32).collect();
    perm.shuffle(rng);
    let edges: Vec<(u32, u32)> = random_dag_edges(n, density, rng)
        .into_iter()
        .map(|(a, b)| (perm[a as usize], perm[b as usize]))
        .collect();
    Digraph::from_edges(n, &edges)
}

/// Publication `i` has id `p0000i` and a year that never decreases with
/// `i`; several publications share each year. Citations run from newer to
/// older indices, so nothing is dropped when the network is built.
pub fn random_network(n: usize, density: f64, rng: &mut ChaCha8Rng) -> CitationNetwork {
    let per_year = rng.gen_range(1..=4);
    let publications = (0..n)
        .map(|i| {
            Publication::new(format!("p{i:05}"), format!("Author{} A", i % 17), 1990 + (i / per_year) as i32)
                .with_title(format!("Publication {i}"))
        })
        .collect();
    let edges = random_dag_edges(n, density, rng);
    let outcome = build_network_indexed(publications, edges).expect("valid random network");
    debug_assert!(outcome.dropped.is_empty());
    outcome.network
}

/// Random digraph with `m` distinct edges in either direction and no
/// self-loops; used where direction must not matter.
pub fn random_digraph(n: usize, m: usize, rng: &mut ChaCha8Rng) -> Digraph {
    let mut edges = Vec::with_capacity(m);
    if n >= 2 {
        for _ in 0..m {
            let a = rng.gen_range(0..n as u32);
            let mut b = rng.gen_range(0..n as u32 - 1);
            if b >= a {
                b += 1;
            }
            edges.push((a, b));
        }
    }
    Digraph::from_edges(n, &edges)
}

/// Two 4-cliques `0..4` and `4..8`, each citing within the block from
/// higher to lower index, joined by the single edge `4 -> 3`.
pub fn two_blocks() -> Digraph {
    let mut edges = Vec::new();
    for block in [0u32, 4] {
        for i in 0..4 {
            for j in 0..i {
                edges.push((block + i, block + j));
            }
        }
    }
    edges.push((4, 3));
    Digraph::from_edges(8, &edges)
}
