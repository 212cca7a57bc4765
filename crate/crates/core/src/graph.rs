//! Compressed adjacency storage shared by every algorithm in the crate.
//!
//! Nodes are dense `u32` indices. Both the forward (citing -> cited) and the
//! reverse adjacency are kept so that predecessor and successor queries are
//! equally cheap. Neighbor lists are sorted ascending and free of duplicates.

use std::collections::VecDeque;

/// Directed graph in CSR form.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Digraph {
    out_offsets: Vec<usize>,
    out_targets: Vec<u32>,
    in_offsets: Vec<usize>,
    in_sources: Vec<u32>,
}

impl Digraph {
    /// Builds the graph from an edge list. Duplicate edges collapse into one;
    /// self-loops are kept as given (callers that need a simple graph strip
    /// them beforehand).
    pub fn from_edges(node_count: usize, edges: &[(u32, u32)]) -> Self {
        let (out_offsets, out_targets) = csr(node_count, edges.iter().copied());
        let (in_offsets, in_sources) = csr(node_count, edges.iter().map(|&(s, t)| (t, s)));
        Digraph {
            out_offsets,
            out_targets,
            in_offsets,
            in_sources,
        }
    }

    pub fn empty(node_count: usize) -> Self {
        Digraph::from_edges(node_count, &[])
    }

    pub fn node_count(&self) -> usize {
        self.out_offsets.len().saturating_sub(1)
    }

    pub fn edge_count(&self) -> usize {
        self.out_targets.len()
    }

    #[inline]
    pub fn out_neighbors(&self, v: usize) -> &[u32] {
        &self.out_targets[self.out_offsets[v]..self.out_offsets[v + 1]]
    }

    #[inline]
    pub fn in_neighbors(&self, v: usize) -> &[u32] {
        &self.in_sources[self.in_offsets[v]..self.in_offsets[v + 1]]
    }

    #[inline]
    pub fn out_degree(&self, v: usize) -> usize {
        self.out_offsets[v + 1] - self.out_offsets[v]
    }

    #[inline]
    pub fn in_degree(&self, v: usize) -> usize {
        self.in_offsets[v + 1] - self.in_offsets[v]
    }

    /// Out- and in-neighbors chained; direction is forgotten.
    pub fn undirected_neighbors(&self, v: usize) -> impl Iterator<Item = u32> + '_ {
        self.out_neighbors(v)
            .iter()
            .chain(self.in_neighbors(v))
            .copied()
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.out_neighbors(from).binary_search(&(to as u32)).is_ok()
    }

    /// All edges ordered by source, then target.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.node_count()).flat_map(move |v| {
            self.out_neighbors(v).iter().map(move |&t| (v as u32, t))
        })
    }

    pub fn reversed(&self) -> Digraph {
        Digraph {
            out_offsets: self.in_offsets.clone(),
            out_targets: self.in_sources.clone(),
            in_offsets: self.out_offsets.clone(),
            in_sources: self.out_targets.clone(),
        }
    }

    /// Kahn's algorithm, smallest ready index first among the initial
    /// sources and FIFO afterwards. `None` if the graph has a cycle.
    pub fn topological_order(&self) -> Option<Vec<u32>> {
        let n = self.node_count();
        let mut indegree: Vec<u32> = (0..n).map(|v| self.in_degree(v) as u32).collect();
        let mut queue: VecDeque<u32> = (0..n as u32).filter(|&v| indegree[v as usize] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &t in self.out_neighbors(v as usize) {
                let d = &mut indegree[t as usize];
                *d -= 1;
                if *d == 0 {
                    queue.push_back(t);
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }

    /// Subgraph induced by `members` (which must be sorted and unique).
    /// Local index `i` corresponds to `members[i]`.
    pub fn induced(&self, members: &[u32]) -> Digraph {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        let mut local = vec![u32::MAX; self.node_count()];
        for (i, &m) in members.iter().enumerate() {
            local[m as usize] = i as u32;
        }
        let mut edges = Vec::new();
        for (i, &m) in members.iter().enumerate() {
            for &t in self.out_neighbors(m as usize) {
                let lt = local[t as usize];
                if lt != u32::MAX {
                    edges.push((i as u32, lt));
                }
            }
        }
        Digraph::from_edges(members.len(), &edges)
    }
}

fn csr(node_count: usize, edges: impl Iterator<Item = (u32, u32)> + Clone) -> (Vec<usize>, Vec<u32>) {
    let mut counts = vec![0usize; node_count + 1];
    for (s, _) in edges.clone() {
        counts[s as usize + 1] += 1;
    }
    for i in 0..node_count {
        counts[i + 1] += counts[i];
    }
    let mut cursor = counts.clone();
    let mut targets = vec![0u32; counts[node_count]];
    for (s, t) in edges {
        let slot = &mut cursor[s as usize];
        targets[*slot] = t;
        *slot += 1;
    }

    // Sort each row, then compact away duplicates.
    let mut offsets = Vec::with_capacity(node_count + 1);
    offsets.push(0);
    let mut write = 0;
    for v in 0..node_count {
        let (start, end) = (counts[v], counts[v + 1]);
        targets[start..end].sort_unstable();
        let mut prev = None;
        for read in start..end {
            let t = targets[read];
            if prev != Some(t) {
                targets[write] = t;
                write += 1;
                prev = Some(t);
            }
        }
        offsets.push(write);
    }
    targets.truncate(write);
    targets.shrink_to_fit();
    (offsets, targets)
}
