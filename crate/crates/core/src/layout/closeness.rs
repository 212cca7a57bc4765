//! Random-walk closeness between displayed publications.
//!
//! A walk starts at `i`, moves to a uniformly chosen undirected neighbor at
//! each step, and stops after each step with probability `p`. The closeness
//! `s_ij` is the probability that the walk stops at `j` within `steps`
//! steps:
//!
//! ```text
//! s_ij = sum_{t=1..T} p (1-p)^(t-1) P^t_ij
//! ```
//!
//! symmetrized as `(s_ij + s_ji) / 2`.

use crate::graph::Digraph;

pub const DEFAULT_WALK_STEPS: usize = 3;
pub const DEFAULT_STOP_PROBABILITY: f64 = 0.5;

/// Dense symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        SymMatrix { n, data: vec![0.0; n * n] }
    }

    /// Builds from a full row-major matrix, averaging with its transpose.
    pub fn symmetrized(n: usize, full: &[f64]) -> Self {
        assert_eq!(full.len(), n * n);
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                data[i * n + j] = 0.5 * (full[i * n + j] + full[j * n + i]);
            }
        }
        SymMatrix { n, data }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.n + j] = value;
        self.data[j * self.n + i] = value;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }
}

/// Unsymmetrized stopping probabilities, row-major.
pub fn walk_end_probabilities(graph: &Digraph, steps: usize, stop_probability: f64) -> Vec<f64> {
    let n = graph.node_count();
    let neighbors: Vec<Vec<u32>> = (0..n).map(|v| graph.undirected_neighbors(v).collect()).collect();
    let mut out = vec![0.0; n * n];
    let mut dist = vec![0.0; n];
    let mut next = vec![0.0; n];
    for start in 0..n {
        if neighbors[start].is_empty() {
            continue;
        }
        dist.iter_mut().for_each(|d| *d = 0.0);
        dist[start] = 1.0;
        let mut weight = stop_probability;
        for _ in 0..steps {
            next.iter_mut().for_each(|d| *d = 0.0);
            for v in 0..n {
                if dist[v] == 0.0 || neighbors[v].is_empty() {
                    continue;
                }
                let share = dist[v] / neighbors[v].len() as f64;
                for &u in &neighbors[v] {
                    next[u as usize] += share;
                }
            }
            std::mem::swap(&mut dist, &mut next);
            let row = &mut out[start * n..(start + 1) * n];
            for (r, d) in row.iter_mut().zip(&dist) {
                *r += weight * d;
            }
            weight *= 1.0 - stop_probability;
        }
    }
    out
}

pub fn closeness(graph: &Digraph, steps: usize, stop_probability: f64) -> SymMatrix {
    let n = graph.node_count();
    SymMatrix::symmetrized(n, &walk_end_probabilities(graph, steps, stop_probability))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_edge_one_step() {
        let g = Digraph::from_edges(2, &[(1, 0)]);
        let s = closeness(&g, 1, 0.5);
        assert_eq!(s.get(0, 1), 0.5);
        assert_eq!(s.get(1, 0), 0.5);
        assert_eq!(s.get(0, 0), 0.0);
    }

    #[test]
    fn isolated_node_has_zero_row_and_column() {
        let g = Digraph::from_edges(3, &[(1, 0)]);
        let s = closeness(&g, 3, 0.5);
        for j in 0..3 {
            assert_eq!(s.get(2, j), 0.0);
            assert_eq!(s.get(j, 2), 0.0);
        }
    }

    #[test]
    fn row_mass_is_the_stopping_probability() {
        // On a connected graph every walk survives; mass within T steps is 1 - (1-p)^T.
        let g = Digraph::from_edges(4, &[(1, 0), (2, 1), (3, 2)]);
        let raw = walk_end_probabilities(&g, 3, 0.5);
        for i in 0..4 {
            let mass: f64 = raw[i * 4..(i + 1) * 4].iter().sum();
            assert!((mass - 0.875).abs() < 1e-12);
        }
    }
}
