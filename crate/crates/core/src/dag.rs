//! Acyclicity enforcement and transitive reduction.

use crate::error::{Error, Result};
use crate::graph::Digraph;

/// Output of [`break_cycles`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CycleBreak {
    pub kept: Vec<(u32, u32)>,
    pub removed: Vec<(u32, u32)>,
}

/// Removes the back edges of a depth-first traversal so that the remaining
/// edges form a DAG.
///
/// Roots are taken in ascending `rank` and out-edges are followed in
/// ascending rank of their target, which makes the result a pure function of
/// the edge set and the ranking. Every removed edge closes a cycle with tree
/// edges that are kept, so none of them can be re-added on its own.
///
/// `kept` preserves the input order of the surviving edges.
pub fn break_cycles(node_count: usize, edges: Vec<(u32, u32)>, rank: &[u32]) -> CycleBreak {
    assert_eq!(rank.len(), node_count, "one rank per node");
    let n = node_count;

    // Adjacency holding edge positions, sorted by target rank.
    let mut offsets = vec![0usize; n + 1];
    for &(s, _) in &edges {
        offsets[s as usize + 1] += 1;
    }
    for i in 0..n {
        offsets[i + 1] += offsets[i];
    }
    let mut cursor = offsets.clone();
    let mut adj = vec![0u32; edges.len()];
    for (pos, &(s, _)) in edges.iter().enumerate() {
        adj[cursor[s as usize]] = pos as u32;
        cursor[s as usize] += 1;
    }
    drop(cursor);
    for v in 0..n {
        adj[offsets[v]..offsets[v + 1]].sort_unstable_by_key(|&e| (rank[edges[e as usize].1 as usize], e));
    }

    let mut roots: Vec<u32> = (0..n as u32).collect();
    roots.sort_unstable_by_key(|&v| rank[v as usize]);

    const WHITE: u8 = 0;
    const GREY: u8 = 1;
    const BLACK: u8 = 2;
    let mut color = vec![WHITE; n];
    let mut back = vec![false; edges.len()];
    let mut stack: Vec<(u32, usize)> = Vec::new();

    for root in roots {
        if color[root as usize] != WHITE {
            continue;
        }
        color[root as usize] = GREY;
        stack.push((root, offsets[root as usize]));
        while let Some(top) = stack.last_mut() {
            let (v, next) = (top.0 as usize, top.1);
            if next == offsets[v + 1] {
                color[v] = BLACK;
                stack.pop();
                continue;
            }
            top.1 += 1;
            let e = adj[next] as usize;
            let t = edges[e].1;
            match color[t as usize] {
                WHITE => {
                    color[t as usize] = GREY;
                    stack.push((t, offsets[t as usize]));
                }
                GREY => back[e] = true,
                _ => {}
            }
        }
    }
    drop(adj);

    let mut out = CycleBreak::default();
    for (e, edge) in edges.into_iter().enumerate() {
        if back[e] {
            out.removed.push(edge);
        } else {
            out.kept.push(edge);
        }
    }
    out
}

/// Edges of a DAG split into essential and non-essential ones. An edge
/// `(a, b)` is essential when it is the only path from `a` to `b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeSubset {
    /// All edges in [`Digraph::edges`] order.
    pub edges: Vec<(u32, u32)>,
    /// `essential[i]` tags `edges[i]`.
    pub essential: Vec<bool>,
}

impl EdgeSubset {
    pub fn essential_edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.edges
            .iter()
            .zip(&self.essential)
            .filter(|(_, &e)| e)
            .map(|(&edge, _)| edge)
    }

    pub fn non_essential_edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.edges
            .iter()
            .zip(&self.essential)
            .filter(|(_, &e)| !e)
            .map(|(&edge, _)| edge)
    }

    pub fn essential_count(&self) -> usize {
        self.essential.iter().filter(|&&e| e).count()
    }

    /// The transitive reduction as a graph on the same nodes.
    pub fn reduced_graph(&self, node_count: usize) -> Digraph {
        Digraph::from_edges(node_count, &self.essential_edges().collect::<Vec<_>>())
    }
}

/// Graphs up to this many nodes use dense descendant bit sets.
const DENSE_LIMIT: usize = 8192;

/// How [`transitive_reduction_using`] decides essentiality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReductionMethod {
    /// Dense for small graphs, sparse otherwise.
    #[default]
    Auto,
    /// Descendant bit rows; memory grows with the square of the node count.
    Dense,
    /// Pruned per-source search; memory linear in the graph size.
    Sparse,
}

/// Tags every edge of `graph` as essential or not.
///
/// Fails with [`Error::Contract`] when the graph has a cycle.
pub fn transitive_reduction(graph: &Digraph) -> Result<EdgeSubset> {
    transitive_reduction_using(graph, ReductionMethod::Auto)
}

pub fn transitive_reduction_using(graph: &Digraph, method: ReductionMethod) -> Result<EdgeSubset> {
    let order = window_order(graph)
        .ok_or_else(|| Error::Contract("transitive reduction requires an acyclic network".into()))?;
    let n = graph.node_count();
    let mut position = vec![0u32; n];
    for (p, &v) in order.iter().enumerate() {
        position[v as usize] = p as u32;
    }

    let dense = match method {
        ReductionMethod::Auto => n <= DENSE_LIMIT,
        ReductionMethod::Dense => true,
        ReductionMethod::Sparse => false,
    };
    let flags = if dense {
        // Per node: essential flags for its out-neighbors in adjacency order.
        let mut essential_by_node: Vec<Vec<bool>> = Vec::new();
        reduce_dense(graph, &order, &position, &mut essential_by_node);
        essential_by_node.into_iter().flatten().collect::<Vec<bool>>()
    } else {
        reduce_sparse(graph, &position)
    };

    Ok(EdgeSubset {
        edges: graph.edges().collect(),
        essential: flags,
    })
}

/// Topological order that releases the highest-indexed ready node first.
fn window_order(graph: &Digraph) -> Option<Vec<u32>> {
    let n = graph.node_count();
    let mut indegree: Vec<u32> = (0..n).map(|v| graph.in_degree(v) as u32).collect();
    let mut heap: std::collections::BinaryHeap<u32> = (0..n as u32).filter(|&v| indegree[v as usize] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = heap.pop() {
        order.push(v);
        for &t in graph.out_neighbors(v as usize) {
            let d = &mut indegree[t as usize];
            *d -= 1;
            if *d == 0 {
                heap.push(t);
            }
        }
    }
    (order.len() == n).then_some(order)
}

/// Children sorted by topological position, nearest first.
fn children_by_position(graph: &Digraph, v: usize, position: &[u32], buf: &mut Vec<(u32, usize)>) {
    buf.clear();
    buf.extend(
        graph
            .out_neighbors(v)
            .iter()
            .enumerate()
            .map(|(slot, &t)| (position[t as usize], slot)),
    );
    buf.sort_unstable();
}

/// Descendant sets as bit rows, filled in reverse topological order. A child
/// is redundant when an earlier (nearer) child already reaches it.
fn reduce_dense(graph: &Digraph, order: &[u32], position: &[u32], out: &mut Vec<Vec<bool>>) {
    let n = graph.node_count();
    let words = n.div_ceil(64);
    let mut reach = vec![0u64; n * words];
    out.clear();
    out.resize(n, Vec::new());
    let mut children = Vec::new();
    let mut row = vec![0u64; words];
    for &v in order.iter().rev() {
        let v = v as usize;
        children_by_position(graph, v, position, &mut children);
        let targets = graph.out_neighbors(v);
        let mut flags = vec![false; targets.len()];
        row.iter_mut().for_each(|w| *w = 0);
        for &(_, slot) in &children {
            let t = targets[slot] as usize;
            if row[t / 64] & (1 << (t % 64)) != 0 {
                continue;
            }
            flags[slot] = true;
            row[t / 64] |= 1 << (t % 64);
            let child = &reach[t * words..(t + 1) * words];
            for (w, c) in row.iter_mut().zip(child) {
                *w |= c;
            }
        }
        reach[v * words..(v + 1) * words].copy_from_slice(&row);
        out[v] = flags;
    }
}

/// Interval labels from one post-order traversal: if `u` reaches `w` then
/// `low[u] <= low[w]` and `post[w] <= post[u]`. The converse does not hold,
/// so the labels only rule reachability out.
struct ReachLabels {
    low: Vec<u32>,
    post: Vec<u32>,
}

impl ReachLabels {
    fn new(graph: &Digraph, reverse_children: bool) -> Self {
        let n = graph.node_count();
        let mut post = vec![u32::MAX; n];
        let mut low = vec![u32::MAX; n];
        let mut rank = 0u32;
        // (node, next child slot)
        let mut stack: Vec<(u32, usize)> = Vec::new();
        let roots: Box<dyn Iterator<Item = usize>> = if reverse_children { Box::new((0..n).rev()) } else { Box::new(0..n) };
        let mut entered = vec![false; n];
        for root in roots {
            if entered[root] || graph.in_degree(root) != 0 {
                continue;
            }
            entered[root] = true;
            stack.push((root as u32, 0));
            while let Some(&mut (v, ref mut slot)) = stack.last_mut() {
                let children = graph.out_neighbors(v as usize);
                if *slot < children.len() {
                    let k = if reverse_children { children.len() - 1 - *slot } else { *slot };
                    *slot += 1;
                    let c = children[k] as usize;
                    if !entered[c] {
                        entered[c] = true;
                        stack.push((c as u32, 0));
                    }
                } else {
                    stack.pop();
                    let v = v as usize;
                    post[v] = rank;
                    low[v] = children.iter().map(|&c| low[c as usize]).fold(rank, u32::min);
                    rank += 1;
                }
            }
        }
        ReachLabels { low, post }
    }

    #[inline]
    fn may_reach(&self, u: usize, w: usize) -> bool {
        self.low[u] <= self.low[w] && self.post[w] <= self.post[u]
    }
}

/// Per-source depth-first search from the children, nearest first. The
/// search only enters nodes that may still reach an unresolved child: one
/// that lies earlier in topological order and passes the label filters.
fn reduce_sparse(graph: &Digraph, position: &[u32]) -> Vec<bool> {
    let n = graph.node_count();
    let labels = [ReachLabels::new(graph, false), ReachLabels::new(graph, true)];
    let may_reach = |u: usize, w: usize| position[u] < position[w] && labels.iter().all(|l| l.may_reach(u, w));
    let mut flags = vec![false; graph.edge_count()];
    let mut stamp = vec![u32::MAX; n];
    let mut children = Vec::new();
    let mut pending: Vec<usize> = Vec::new();
    let mut stack = Vec::new();
    let mut base = 0usize;
    for v in 0..n {
        let targets = graph.out_neighbors(v);
        if targets.len() == 1 {
            flags[base] = true;
        } else if !targets.is_empty() {
            children_by_position(graph, v, position, &mut children);
            let gen = v as u32;
            pending.clear();
            pending.extend(children.iter().map(|&(_, slot)| targets[slot] as usize));
            pending.reverse();
            for &(_, slot) in &children {
                let t = targets[slot] as usize;
                pending.pop();
                if stamp[t] == gen {
                    continue;
                }
                flags[base + slot] = true;
                stamp[t] = gen;
                stack.push(t);
                while let Some(u) = stack.pop() {
                    if pending.is_empty() {
                        stack.clear();
                        break;
                    }
                    for &w in graph.out_neighbors(u) {
                        let w = w as usize;
                        if stamp[w] == gen {
                            continue;
                        }
                        stamp[w] = gen;
                        if pending.contains(&w) || pending.iter().any(|&p| may_reach(w, p)) {
                            stack.push(w);
                        }
                    }
                }
            }
        }
        base += targets.len();
    }
    flags
}
