//! Weakly connected components.

use std::collections::VecDeque;

use crate::graph::Digraph;

/// Component label per node, ignoring edge direction. Components are
/// numbered from 0 by decreasing size, ties broken by smallest member.
pub fn connected_components(graph: &Digraph) -> Vec<u32> {
    let n = graph.node_count();
    let mut label = vec![u32::MAX; n];
    let mut sizes = Vec::new();
    let mut queue = VecDeque::new();
    // Discovery in ascending index order means component k's smallest member
    // is its root, and roots increase with k.
    for root in 0..n {
        if label[root] != u32::MAX {
            continue;
        }
        let id = sizes.len() as u32;
        label[root] = id;
        queue.push_back(root as u32);
        let mut size = 0usize;
        while let Some(v) = queue.pop_front() {
            size += 1;
            for u in graph.undirected_neighbors(v as usize) {
                if label[u as usize] == u32::MAX {
                    label[u as usize] = id;
                    queue.push_back(u);
                }
            }
        }
        sizes.push(size);
    }

    let mut order: Vec<usize> = (0..sizes.len()).collect();
    order.sort_by_key(|&c| std::cmp::Reverse(sizes[c]));
    let mut rank = vec![0u32; sizes.len()];
    for (r, &c) in order.iter().enumerate() {
        rank[c] = r as u32;
    }
    label.iter().map(|&c| rank[c as usize]).collect()
}

/// Nodes of the largest component (component 0), ascending.
pub fn largest_component(graph: &Digraph) -> Vec<u32> {
    connected_components(graph)
        .iter()
        .enumerate()
        .filter(|&(_, &c)| c == 0)
        .map(|(v, _)| v as u32)
        .collect()
}
