//! Core publications: the k-core of the undirected citation relation.

use std::collections::VecDeque;

use crate::graph::Digraph;

/// The largest node set in which every node has at least `k` citation
/// relations (incoming or outgoing) with other members, ascending.
/// Computed by peeling nodes whose remaining degree falls below `k`.
pub fn core_publications(graph: &Digraph, k: usize) -> Vec<u32> {
    let n = graph.node_count();
    let mut degree: Vec<usize> = (0..n)
        .map(|v| graph.undirected_neighbors(v).filter(|&u| u as usize != v).count())
        .collect();
    let mut removed = vec![false; n];
    let mut queue: VecDeque<u32> = (0..n as u32).filter(|&v| degree[v as usize] < k).collect();
    for &v in &queue {
        removed[v as usize] = true;
    }
    while let Some(v) = queue.pop_front() {
        for u in graph.undirected_neighbors(v as usize) {
            let u = u as usize;
            if removed[u] {
                continue;
            }
            degree[u] -= 1;
            if degree[u] < k {
                removed[u] = true;
                queue.push_back(u as u32);
            }
        }
    }
    (0..n as u32).filter(|&v| !removed[v as usize]).collect()
}
