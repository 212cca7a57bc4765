//! Modularity-style clustering with a constant null term.
//!
//! The quality of an assignment `u` of the `n` publications to clusters is
//!
//! ```text
//! Q = sum_i sum_j delta(u_i, u_j) * (a_ij - gamma / (2n)),   a_ij = c_ij / sum_k c_ik
//! ```
//!
//! where `c_ij` is 1 when `i` cites `j`. Because `delta` is symmetric, `Q`
//! equals the same sum over the symmetrized weights `w_ij = a_ij + a_ji`
//! taken over unordered pairs, minus `gamma/(2n)` times the sum of squared
//! cluster sizes. The optimizer works on that undirected form.
//!
//! Optimization follows the smart local moving scheme: local moving, then
//! local moving from singletons inside each cluster to split it, then a
//! recursive pass on the network of sub-clusters seeded with the parent
//! clusters. The whole step is iterated and restarted from several random
//! node orders; the best partition wins.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Digraph;

/// Moves must improve the quality by more than this.
const MIN_GAIN: f64 = 1e-12;

/// Sparse row-stochastic relatedness: row `i` holds `1/outdeg(i)` for each
/// publication cited by `i`. Publications that cite nothing have empty rows.
#[derive(Debug, Clone, PartialEq)]
pub struct RelatednessMatrix {
    offsets: Vec<usize>,
    columns: Vec<u32>,
    values: Vec<f64>,
}

impl RelatednessMatrix {
    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (u32, f64)> + '_ {
        let range = self.offsets[i]..self.offsets[i + 1];
        self.columns[range.clone()].iter().copied().zip(self.values[range].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let range = self.offsets[i]..self.offsets[i + 1];
        match self.columns[range.clone()].binary_search(&(j as u32)) {
            Ok(pos) => self.values[range.start + pos],
            Err(_) => 0.0,
        }
    }

    pub fn row_sum(&self, i: usize) -> f64 {
        self.row(i).map(|(_, v)| v).sum()
    }
}

pub fn relatedness(graph: &Digraph) -> RelatednessMatrix {
    let n = graph.node_count();
    let mut offsets = Vec::with_capacity(n + 1);
    offsets.push(0);
    let mut columns = Vec::with_capacity(graph.edge_count());
    let mut values = Vec::with_capacity(graph.edge_count());
    for i in 0..n {
        let targets = graph.out_neighbors(i);
        let weight = 1.0 / targets.len() as f64;
        for &t in targets {
            columns.push(t);
            values.push(weight);
        }
        offsets.push(columns.len());
    }
    RelatednessMatrix { offsets, columns, values }
}

/// Evaluates the clustering quality for a complete assignment, diagonal terms
/// included. Fails if `clusters` does not cover every publication.
pub fn quality(graph: &Digraph, clusters: &[u32], resolution: f64) -> Result<f64> {
    let n = graph.node_count();
    if clusters.len() != n {
        return Err(Error::Contract(format!(
            "partition covers {} of {} publications",
            clusters.len(),
            n
        )));
    }
    if n == 0 {
        return Ok(0.0);
    }
    let related = relatedness(graph);
    let mut within = 0.0;
    for i in 0..n {
        for (j, a) in related.row(i) {
            if clusters[i] == clusters[j as usize] {
                within += a;
            }
        }
    }
    let max = *clusters.iter().max().unwrap() as usize;
    let mut sizes = vec![0f64; max + 1];
    for &c in clusters {
        sizes[c as usize] += 1.0;
    }
    let pairs: f64 = sizes.iter().map(|s| s * s).sum();
    Ok(within - resolution / (2.0 * n as f64) * pairs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SmallClusterPolicy {
    /// Publications in undersized clusters are left without a cluster.
    #[default]
    Discard,
    /// Undersized clusters join their most related neighboring cluster.
    Merge,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClusterParams {
    pub resolution: f64,
    pub min_cluster_size: usize,
    pub policy: SmallClusterPolicy,
    pub seed: u64,
    pub random_starts: usize,
    pub iterations: usize,
}

impl Default for ClusterParams {
    fn default() -> Self {
        ClusterParams {
            resolution: 1.0,
            min_cluster_size: 1,
            policy: SmallClusterPolicy::Discard,
            seed: 0,
            random_starts: 10,
            iterations: 10,
        }
    }
}

/// Cluster assignment per publication.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Partition {
    /// Cluster ids numbered from 1 by decreasing size, ties by smallest
    /// member. `None` for publications whose cluster was discarded.
    pub clusters: Vec<Option<u32>>,
    pub resolution: f64,
    /// Quality of the optimized assignment, before small clusters are handled.
    pub quality: f64,
    pub min_cluster_size: usize,
    pub policy: SmallClusterPolicy,
}

impl Partition {
    pub fn cluster_count(&self) -> usize {
        self.clusters.iter().flatten().max().copied().unwrap_or(0) as usize
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.cluster_count()];
        for c in self.clusters.iter().flatten() {
            sizes[*c as usize - 1] += 1;
        }
        sizes
    }
}

/// Undirected weighted graph used by the optimizer. Node weights count the
/// publications a (possibly aggregated) node stands for.
#[derive(Debug, Clone)]
struct WeightedGraph {
    node_weight: Vec<f64>,
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
    weights: Vec<f64>,
}

impl WeightedGraph {
    fn from_digraph(graph: &Digraph) -> Self {
        let n = graph.node_count();
        let related = relatedness(graph);
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for v in 0..n {
            offsets.push(offsets[v] + graph.out_degree(v) + graph.in_degree(v));
        }
        let mut neighbors = vec![0u32; offsets[n]];
        let mut weights = vec![0f64; offsets[n]];
        let mut cursor = offsets.clone();
        for i in 0..n {
            for (j, a) in related.row(i) {
                let j = j as usize;
                for (from, to) in [(i, j), (j, i)] {
                    neighbors[cursor[from]] = to as u32;
                    weights[cursor[from]] = a;
                    cursor[from] += 1;
                }
            }
        }
        WeightedGraph {
            node_weight: vec![1.0; n],
            offsets,
            neighbors,
            weights,
        }
    }

    fn len(&self) -> usize {
        self.node_weight.len()
    }

    fn adjacent(&self, v: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.offsets[v]..self.offsets[v + 1];
        self.neighbors[range.clone()]
            .iter()
            .map(|&u| u as usize)
            .zip(self.weights[range].iter().copied())
    }

    /// Subgraph on `nodes` (local index = position in `nodes`).
    fn subgraph(&self, nodes: &[usize], local: &mut [u32]) -> WeightedGraph {
        for (i, &v) in nodes.iter().enumerate() {
            local[v] = i as u32;
        }
        let mut offsets = Vec::with_capacity(nodes.len() + 1);
        offsets.push(0);
        let mut neighbors = Vec::new();
        let mut weights = Vec::new();
        for &v in nodes {
            for (u, w) in self.adjacent(v) {
                if local[u] != u32::MAX {
                    neighbors.push(local[u]);
                    weights.push(w);
                }
            }
            offsets.push(neighbors.len());
        }
        for &v in nodes {
            local[v] = u32::MAX;
        }
        WeightedGraph {
            node_weight: nodes.iter().map(|&v| self.node_weight[v]).collect(),
            offsets,
            neighbors,
            weights,
        }
    }

    /// Collapses nodes sharing a label in `groups` (labels `0..count`).
    /// Weight inside a group is dropped: it is constant for every assignment
    /// of the aggregated network.
    fn aggregate(&self, groups: &[u32], count: usize) -> WeightedGraph {
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); count];
        for (v, &g) in groups.iter().enumerate() {
            members[g as usize].push(v);
        }
        let mut node_weight = vec![0.0; count];
        let mut offsets = Vec::with_capacity(count + 1);
        offsets.push(0);
        let mut neighbors = Vec::new();
        let mut weights = Vec::new();
        let mut scratch = vec![0f64; count];
        let mut touched = Vec::new();
        for (g, nodes) in members.iter().enumerate() {
            for &v in nodes {
                node_weight[g] += self.node_weight[v];
                for (u, w) in self.adjacent(v) {
                    let h = groups[u] as usize;
                    if h == g {
                        continue;
                    }
                    if scratch[h] == 0.0 {
                        touched.push(h);
                    }
                    scratch[h] += w;
                }
            }
            touched.sort_unstable();
            for &h in &touched {
                neighbors.push(h as u32);
                weights.push(scratch[h]);
                scratch[h] = 0.0;
            }
            touched.clear();
            offsets.push(neighbors.len());
        }
        WeightedGraph {
            node_weight,
            offsets,
            neighbors,
            weights,
        }
    }
}

/// Quality of `clusters` on `g` up to the constant inside-node weight:
/// sum of weights between distinct nodes sharing a cluster (unordered
/// pairs) minus `penalty` times the squared cluster weights.
fn weighted_quality(g: &WeightedGraph, clusters: &[u32], penalty: f64) -> f64 {
    let mut within = 0.0;
    for v in 0..g.len() {
        for (u, w) in g.adjacent(v) {
            if clusters[u] == clusters[v] {
                within += w;
            }
        }
    }
    let mut size = vec![0f64; g.len()];
    for v in 0..g.len() {
        size[clusters[v] as usize] += g.node_weight[v];
    }
    within / 2.0 - penalty * size.iter().map(|s| s * s).sum::<f64>()
}

/// Repeated sweeps of single-node moves in random order until no move gains
/// more than [`MIN_GAIN`]. Cluster labels stay within `0..n`.
fn local_moving(g: &WeightedGraph, penalty: f64, clusters: &mut [u32], rng: &mut ChaCha8Rng) -> bool {
    let n = g.len();
    if n <= 1 {
        return false;
    }
    let mut cluster_weight = vec![0f64; n];
    let mut cluster_nodes = vec![0usize; n];
    for v in 0..n {
        cluster_weight[clusters[v] as usize] += g.node_weight[v];
        cluster_nodes[clusters[v] as usize] += 1;
    }
    let mut empty: Vec<u32> = (0..n as u32).filter(|&c| cluster_nodes[c as usize] == 0).collect();

    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut link = vec![0f64; n];
    let mut touched: Vec<u32> = Vec::new();
    let mut changed = false;

    loop {
        let mut moved = false;
        for &v in &order {
            let current = clusters[v];
            let wv = g.node_weight[v];
            cluster_weight[current as usize] -= wv;
            cluster_nodes[current as usize] -= 1;
            if cluster_nodes[current as usize] == 0 {
                empty.push(current);
            }

            touched.clear();
            for (u, w) in g.adjacent(v) {
                if u == v {
                    continue;
                }
                let c = clusters[u];
                if link[c as usize] == 0.0 {
                    touched.push(c);
                }
                link[c as usize] += w;
            }

            let gain = |c: u32, link: &[f64]| link[c as usize] - 2.0 * penalty * wv * cluster_weight[c as usize];
            let stay = gain(current, &link);
            let mut best = current;
            let mut best_gain = stay;
            for &c in &touched {
                let gc = gain(c, &link);
                if gc > best_gain || (gc == best_gain && c < best && best != current) {
                    best = c;
                    best_gain = gc;
                }
            }
            // An empty cluster gains exactly zero.
            if best_gain < 0.0 && cluster_nodes[current as usize] > 0 {
                best = *empty.last().expect("an empty cluster exists while v is detached");
                best_gain = 0.0;
            }
            if best != current && best_gain <= stay + MIN_GAIN {
                best = current;
            }

            for &c in &touched {
                link[c as usize] = 0.0;
            }
            if cluster_nodes[best as usize] == 0 {
                let pos = empty.iter().rposition(|&c| c == best).expect("empty cluster listed");
                empty.swap_remove(pos);
            }
            cluster_weight[best as usize] += wv;
            cluster_nodes[best as usize] += 1;
            clusters[v] = best;
            if best != current {
                moved = true;
                changed = true;
            }
        }
        if !moved {
            break;
        }
    }
    changed
}

/// Relabels to `0..k` in order of first appearance; returns `k`.
fn renumber(clusters: &mut [u32]) -> usize {
    let mut map = vec![u32::MAX; clusters.len().max(1)];
    let mut next = 0u32;
    for c in clusters.iter_mut() {
        let slot = &mut map[*c as usize];
        if *slot == u32::MAX {
            *slot = next;
            next += 1;
        }
        *c = *slot;
    }
    next as usize
}

/// One smart-local-moving step on `g` starting from `clusters`.
fn slm_step(g: &WeightedGraph, penalty: f64, clusters: &mut Vec<u32>, rng: &mut ChaCha8Rng) {
    local_moving(g, penalty, clusters, rng);
    let count = renumber(clusters);

    let mut members: Vec<Vec<usize>> = vec![Vec::new(); count];
    for (v, &c) in clusters.iter().enumerate() {
        members[c as usize].push(v);
    }
    let mut local = vec![u32::MAX; g.len()];
    let mut sub = vec![0u32; g.len()];
    let mut sub_parent = Vec::new();
    for (c, nodes) in members.iter().enumerate() {
        let mut split: Vec<u32> = (0..nodes.len() as u32).collect();
        if nodes.len() > 1 {
            let sg = g.subgraph(nodes, &mut local);
            local_moving(&sg, penalty, &mut split, rng);
        }
        let base = sub_parent.len() as u32;
        let parts = renumber(&mut split);
        for (&v, &s) in nodes.iter().zip(&split) {
            sub[v] = base + s;
        }
        sub_parent.extend(std::iter::repeat_n(c as u32, parts));
    }

    if sub_parent.len() < g.len() {
        let reduced = g.aggregate(&sub, sub_parent.len());
        let mut reduced_clusters = sub_parent;
        slm_step(&reduced, penalty, &mut reduced_clusters, rng);
        for v in 0..g.len() {
            clusters[v] = reduced_clusters[sub[v] as usize];
        }
    }
    renumber(clusters);
}

/// Clusters the publications of `graph`, treating citations as undirected.
pub fn cluster(graph: &Digraph, params: &ClusterParams) -> Result<Partition> {
    if !(params.resolution > 0.0) || !params.resolution.is_finite() {
        return Err(Error::InvalidParameter("resolution must be positive".into()));
    }
    if params.min_cluster_size == 0 {
        return Err(Error::InvalidParameter("min_cluster_size must be at least 1".into()));
    }
    let n = graph.node_count();
    if n == 0 {
        return Ok(Partition {
            clusters: Vec::new(),
            resolution: params.resolution,
            quality: 0.0,
            min_cluster_size: params.min_cluster_size,
            policy: params.policy,
        });
    }
    let g = WeightedGraph::from_digraph(graph);
    let penalty = params.resolution / (2.0 * n as f64);
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);

    let mut best: Option<(f64, Vec<u32>)> = None;
    for _ in 0..params.random_starts.max(1) {
        let mut clusters: Vec<u32> = (0..n as u32).collect();
        let mut value = weighted_quality(&g, &clusters, penalty);
        for _ in 0..params.iterations.max(1) {
            let mut next = clusters.clone();
            slm_step(&g, penalty, &mut next, &mut rng);
            let next_value = weighted_quality(&g, &next, penalty);
            let improved = next_value > value + MIN_GAIN;
            if next_value >= value {
                clusters = next;
                value = next_value;
            }
            if !improved {
                break;
            }
        }
        if best.as_ref().is_none_or(|(q, _)| value > *q + MIN_GAIN) {
            best = Some((value, clusters));
        }
    }
    let (_, clusters) = best.expect("at least one start");
    // Report the literal quality, which adds back nothing: the diagonal of the
    // relatedness matrix is zero.
    let value = quality(graph, &clusters, params.resolution)?;

    let mut assignment: Vec<Option<u32>> = clusters.iter().map(|&c| Some(c)).collect();
    if params.min_cluster_size > 1 {
        apply_small_cluster_policy(&g, &mut assignment, params.min_cluster_size, params.policy);
    }
    number_by_size(&mut assignment);
    Ok(Partition {
        clusters: assignment,
        resolution: params.resolution,
        quality: value,
        min_cluster_size: params.min_cluster_size,
        policy: params.policy,
    })
}

/// Undersized clusters are handled smallest first (ties by label). A merge
/// goes to the neighboring cluster with the largest total weight, ties by
/// smaller label; clusters without neighbors stay as they are under `Merge`.
fn apply_small_cluster_policy(g: &WeightedGraph, assignment: &mut [Option<u32>], min_size: usize, policy: SmallClusterPolicy) {
    let count = assignment.iter().flatten().max().map_or(0, |&c| c as usize + 1);
    let mut sizes = vec![0usize; count];
    for c in assignment.iter().flatten() {
        sizes[*c as usize] += 1;
    }
    match policy {
        SmallClusterPolicy::Discard => {
            for slot in assignment.iter_mut() {
                if slot.is_some_and(|c| sizes[c as usize] < min_size) {
                    *slot = None;
                }
            }
        }
        SmallClusterPolicy::Merge => loop {
            let Some(small) = (0..count)
                .filter(|&c| sizes[c] > 0 && sizes[c] < min_size)
                .min_by_key(|&c| (sizes[c], c))
            else {
                break;
            };
            let mut link = vec![0f64; count];
            for v in 0..g.len() {
                if assignment[v] != Some(small as u32) {
                    continue;
                }
                for (u, w) in g.adjacent(v) {
                    if let Some(c) = assignment[u] {
                        if c as usize != small {
                            link[c as usize] += w;
                        }
                    }
                }
            }
            let target = (0..count)
                .filter(|&c| link[c] > 0.0)
                .max_by(|&a, &b| link[a].total_cmp(&link[b]).then(b.cmp(&a)));
            match target {
                Some(t) => {
                    for slot in assignment.iter_mut() {
                        if *slot == Some(small as u32) {
                            *slot = Some(t as u32);
                        }
                    }
                    sizes[t] += sizes[small];
                    sizes[small] = 0;
                }
                // Isolated: nothing to merge into. Exclude it from further rounds.
                None => sizes[small] = usize::MAX,
            }
        },
    }
}

/// Renumbers clusters from 1 by decreasing size, ties by smallest member.
fn number_by_size(assignment: &mut [Option<u32>]) {
    let count = assignment.iter().flatten().max().map_or(0, |&c| c as usize + 1);
    let mut size = vec![0usize; count];
    let mut first = vec![usize::MAX; count];
    for (v, c) in assignment.iter().enumerate() {
        if let Some(c) = *c {
            size[c as usize] += 1;
            first[c as usize] = first[c as usize].min(v);
        }
    }
    let mut labels: Vec<usize> = (0..count).filter(|&c| size[c] > 0).collect();
    labels.sort_by_key(|&c| (std::cmp::Reverse(size[c]), first[c]));
    let mut map = vec![0u32; count];
    for (rank, &c) in labels.iter().enumerate() {
        map[c] = rank as u32 + 1;
    }
    for c in assignment.iter_mut().flatten() {
        *c = map[*c as usize];
    }
}
