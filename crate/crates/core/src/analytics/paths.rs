//! Shortest and longest directed citation paths between two publications.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Digraph;

pub const DEFAULT_MAX_PATHS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PathKind {
    Shortest,
    Longest,
}

/// Every extremal path found, in lexicographic order of node indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathSet {
    /// Length in edges, shared by all paths.
    pub length: usize,
    pub paths: Vec<Vec<u32>>,
    /// More extremal paths exist than `max_paths` allowed.
    pub truncated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PathQuery {
    Found(PathSet),
    /// No directed path leads from the first publication to the second.
    Unreachable,
}

/// Paths follow citations, from the citing (newer) publication toward the
/// cited (older) one. Longest paths require an acyclic graph.
pub fn extreme_path(graph: &Digraph, from: u32, to: u32, kind: PathKind, max_paths: usize) -> Result<PathQuery> {
    let n = graph.node_count();
    if from as usize >= n || to as usize >= n {
        return Err(Error::NotFound(format!("node {}", from.max(to))));
    }
    let forward = reach(graph, from, true);
    if !forward[to as usize] {
        return Ok(PathQuery::Unreachable);
    }
    let backward = reach(graph, to, false);
    let relevant: Vec<bool> = forward.iter().zip(&backward).map(|(&f, &b)| f && b).collect();

    let (dist_from, dist_to) = match kind {
        PathKind::Shortest => (
            bfs_distances(graph, from, true, &relevant),
            bfs_distances(graph, to, false, &relevant),
        ),
        PathKind::Longest => longest_distances(graph, from, to, &relevant)?,
    };
    let length = dist_from[to as usize] as usize;
    let tight = |u: u32, v: u32| {
        relevant[v as usize] && dist_from[u as usize] as usize + 1 + dist_to[v as usize] as usize == length
    };

    // Depth-first enumeration over tight edges; each stack frame holds the
    // node and the next neighbor slot to try.
    let mut paths = Vec::new();
    let mut truncated = false;
    let mut stack: Vec<(u32, usize)> = vec![(from, 0)];
    while let Some(&mut (v, ref mut slot)) = stack.last_mut() {
        if v == to {
            if paths.len() == max_paths {
                truncated = true;
                break;
            }
            paths.push(stack.iter().map(|&(u, _)| u).collect());
            stack.pop();
            continue;
        }
        let next = graph.out_neighbors(v as usize)[*slot..].iter().position(|&w| tight(v, w));
        match next {
            Some(offset) => {
                let w = graph.out_neighbors(v as usize)[*slot + offset];
                *slot += offset + 1;
                stack.push((w, 0));
            }
            None => {
                stack.pop();
            }
        }
    }
    Ok(PathQuery::Found(PathSet { length, paths, truncated }))
}

fn reach(graph: &Digraph, start: u32, forward: bool) -> Vec<bool> {
    let mut seen = vec![false; graph.node_count()];
    seen[start as usize] = true;
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        let next = if forward {
            graph.out_neighbors(v as usize)
        } else {
            graph.in_neighbors(v as usize)
        };
        for &w in next {
            if !seen[w as usize] {
                seen[w as usize] = true;
                stack.push(w);
            }
        }
    }
    seen
}

fn bfs_distances(graph: &Digraph, start: u32, forward: bool, relevant: &[bool]) -> Vec<u32> {
    let mut dist = vec![u32::MAX; graph.node_count()];
    dist[start as usize] = 0;
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        let next = if forward {
            graph.out_neighbors(v as usize)
        } else {
            graph.in_neighbors(v as usize)
        };
        for &w in next {
            if relevant[w as usize] && dist[w as usize] == u32::MAX {
                dist[w as usize] = dist[v as usize] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Longest distances from `from` and to `to` by dynamic programming over a
/// topological order of the relevant nodes.
fn longest_distances(graph: &Digraph, from: u32, to: u32, relevant: &[bool]) -> Result<(Vec<u32>, Vec<u32>)> {
    let n = graph.node_count();
    let mut indegree = vec![0u32; n];
    for v in (0..n).filter(|&v| relevant[v]) {
        for &w in graph.out_neighbors(v) {
            if relevant[w as usize] {
                indegree[w as usize] += 1;
            }
        }
    }
    let mut order = Vec::new();
    let mut queue: VecDeque<u32> = (0..n as u32)
        .filter(|&v| relevant[v as usize] && indegree[v as usize] == 0)
        .collect();
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for &w in graph.out_neighbors(v as usize) {
            if relevant[w as usize] {
                indegree[w as usize] -= 1;
                if indegree[w as usize] == 0 {
                    queue.push_back(w);
                }
            }
        }
    }
    if order.len() != relevant.iter().filter(|&&r| r).count() {
        return Err(Error::Contract("longest paths require an acyclic network".into()));
    }

    let mut dist_from = vec![0u32; n];
    for &v in &order {
        for &w in graph.out_neighbors(v as usize) {
            if relevant[w as usize] {
                dist_from[w as usize] = dist_from[w as usize].max(dist_from[v as usize] + 1);
            }
        }
    }
    let mut dist_to = vec![0u32; n];
    for &v in order.iter().rev() {
        if v == to {
            continue;
        }
        dist_to[v as usize] = graph
            .out_neighbors(v as usize)
            .iter()
            .filter(|&&w| relevant[w as usize])
            .map(|&w| dist_to[w as usize] + 1)
            .max()
            .unwrap_or(0);
    }
    debug_assert_eq!(dist_from[to as usize], dist_to[from as usize]);
    Ok((dist_from, dist_to))
}
