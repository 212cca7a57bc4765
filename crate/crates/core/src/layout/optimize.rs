//! Horizontal placement on a discrete grid.
//!
//! Positions are grid indices `g_i` in `0..m`, standing for `x_i = g_i/(m-1)`.
//! The optimizer minimizes
//!
//! ```text
//! E(x) = sum_i sum_j ( s_ij d_ij^2 - alpha d_ij^beta ),   d_ij = |x_i - x_j|
//! ```
//!
//! over ordered pairs, with `0^beta = 0`, subject to a minimum grid distance
//! between publications in the same layer. Each restart draws a random
//! feasible placement and then alternates single-node moves to the best
//! feasible grid point with pairwise position swaps. Once those stall, pairs
//! of nodes are relocated jointly, and the loop repeats until no
//! move improves. Each restart then kicks the placement a few times by
//! re-scattering one layer and descending again.

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::closeness::SymMatrix;
use crate::error::{Error, Result};

/// Swap passes are cubic in the node count; larger frames skip them.
const SWAP_LIMIT: usize = 300;
const MIN_GAIN: f64 = 1e-12;
/// Perturbations tried per restart.
const KICKS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridParams {
    pub alpha: f64,
    pub beta: f64,
    pub grid_points: usize,
    pub min_separation: usize,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for GridParams {
    fn default() -> Self {
        GridParams {
            alpha: 0.1,
            beta: 0.5,
            grid_points: 100,
            min_separation: 5,
            restarts: 10,
            seed: 0,
        }
    }
}

impl GridParams {
    pub fn validate(&self) -> Result<()> {
        if self.min_separation < 1 || self.grid_points <= self.min_separation {
            return Err(Error::InvalidParameter(format!(
                "need grid points ({}) > minimum separation ({}) >= 1",
                self.grid_points, self.min_separation
            )));
        }
        if !(self.alpha > 0.0 && self.beta > 0.0) {
            return Err(Error::InvalidParameter("alpha and beta must be positive".into()));
        }
        Ok(())
    }

    pub fn x(&self, grid: u32) -> f64 {
        grid as f64 / (self.grid_points - 1) as f64
    }
}

/// Pair cost lookup by grid distance.
struct CostTable {
    squared: Vec<f64>,
    repulsion: Vec<f64>,
}

impl CostTable {
    fn new(params: &GridParams) -> Self {
        let m = params.grid_points;
        let span = (m - 1) as f64;
        let squared = (0..m).map(|k| (k as f64 / span).powi(2)).collect();
        let repulsion = (0..m)
            .map(|k| if k == 0 { 0.0 } else { params.alpha * (k as f64 / span).powf(params.beta) })
            .collect();
        CostTable { squared, repulsion }
    }

    #[inline]
    fn pair(&self, s: f64, a: u32, b: u32) -> f64 {
        let k = a.abs_diff(b) as usize;
        s * self.squared[k] - self.repulsion[k]
    }
}

/// Energy of a placement, summed over ordered pairs.
pub fn energy(s: &SymMatrix, grid: &[u32], params: &GridParams) -> f64 {
    let table = CostTable::new(params);
    let n = grid.len();
    let mut total = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            total += table.pair(s.get(i, j), grid[i], grid[j]);
        }
    }
    2.0 * total
}

/// True when same-layer nodes keep the minimum separation and all points
/// lie on the grid.
pub fn is_feasible(grid: &[u32], layer: &[u32], params: &GridParams) -> bool {
    let n = grid.len();
    grid.iter().all(|&g| (g as usize) < params.grid_points)
        && (0..n).all(|i| {
            ((i + 1)..n).all(|j| layer[i] != layer[j] || grid[i].abs_diff(grid[j]) as usize >= params.min_separation)
        })
}

fn check_capacity(layer: &[u32], params: &GridParams) -> Result<()> {
    let layers = layer.iter().max().map_or(0, |&l| l as usize + 1);
    let mut occupancy = vec![0usize; layers];
    for &l in layer {
        occupancy[l as usize] += 1;
    }
    if let Some((l, &k)) = occupancy
        .iter()
        .enumerate()
        .find(|&(_, &k)| k > 0 && (k - 1) * params.min_separation + 1 > params.grid_points)
    {
        return Err(Error::Infeasible(format!(
            "layer {l} holds {k} publications, which cannot be {} grid points apart on a {}-point grid; \
             increase the number of grid points or lower the maximum per layer",
            params.min_separation, params.grid_points
        )));
    }
    Ok(())
}

/// Uniformly random feasible placement.
pub fn random_feasible(layer: &[u32], params: &GridParams, rng: &mut ChaCha8Rng) -> Result<Vec<u32>> {
    params.validate()?;
    check_capacity(layer, params)?;
    let layers = layer.iter().max().map_or(0, |&l| l as usize + 1);
    let mut grid = vec![0u32; layer.len()];
    for l in 0..layers {
        let mut nodes: Vec<usize> = (0..layer.len()).filter(|&v| layer[v] as usize == l).collect();
        let k = nodes.len();
        if k == 0 {
            continue;
        }
        // Choose k slots among the positions left after reserving the gaps.
        let free = params.grid_points - (k - 1) * (params.min_separation - 1);
        let mut slots = index::sample(rng, free, k).into_vec();
        slots.sort_unstable();
        nodes.shuffle(rng);
        for (rank, (&v, &slot)) in nodes.iter().zip(&slots).enumerate() {
            grid[v] = (slot + rank * (params.min_separation - 1)) as u32;
        }
    }
    Ok(grid)
}

struct Descent<'a> {
    s: &'a SymMatrix,
    layer: &'a [u32],
    params: &'a GridParams,
    table: CostTable,
}

impl Descent<'_> {
    /// Cost of node `v` at `g` against all other nodes (one direction).
    fn node_cost(&self, grid: &[u32], v: usize, g: u32) -> f64 {
        let row = self.s.row(v);
        let mut c = 0.0;
        for (u, &gu) in grid.iter().enumerate() {
            if u != v {
                c += self.table.pair(row[u], g, gu);
            }
        }
        c
    }

    fn allowed(&self, grid: &[u32], v: usize, g: u32, ignore: Option<usize>) -> bool {
        let sep = self.params.min_separation as u32;
        grid.iter().enumerate().all(|(u, &gu)| {
            u == v || Some(u) == ignore || self.layer[u] != self.layer[v] || g.abs_diff(gu) >= sep
        })
    }

    fn move_pass(&self, grid: &mut [u32], order: &[usize]) -> bool {
        let mut improved = false;
        for &v in order {
            let current = self.node_cost(grid, v, grid[v]);
            let mut best = (current, grid[v]);
            for g in 0..self.params.grid_points as u32 {
                if g == grid[v] || !self.allowed(grid, v, g, None) {
                    continue;
                }
                let c = self.node_cost(grid, v, g);
                if c < best.0 {
                    best = (c, g);
                }
            }
            if best.1 != grid[v] && best.0 < current - MIN_GAIN {
                grid[v] = best.1;
                improved = true;
            }
        }
        improved
    }

    /// Relocates two nodes jointly. Moves of this kind escape placements
    /// where each node alone is boxed in by the other's separation or pull.
    /// `profile[v * m + g]` caches the cost of `v` at `g` against all others.
    fn pair_pass(&self, grid: &mut [u32], pairs: &[(usize, usize)]) -> bool {
        let m = self.params.grid_points;
        let n = grid.len();
        let mut profile = vec![0.0; n * m];
        for v in 0..n {
            for g in 0..m {
                profile[v * m + g] = self.node_cost(grid, v, g as u32);
            }
        }
        let sep = self.params.min_separation as u32;
        let mut improved = false;
        for &(a, b) in pairs {
            let s_ab = self.s.get(a, b);
            let (pa, pb) = (&profile[a * m..(a + 1) * m], &profile[b * m..(b + 1) * m]);
            // Profiles include the a-b term at b's and a's current spots.
            let joint = |ga: u32, gb: u32| {
                pa[ga as usize] - self.table.pair(s_ab, ga, grid[b]) + pb[gb as usize]
                    - self.table.pair(s_ab, gb, grid[a])
                    + self.table.pair(s_ab, ga, gb)
            };
            let current = joint(grid[a], grid[b]);
            let mut best = (current, grid[a], grid[b]);
            let open_a: Vec<u32> = (0..m as u32).filter(|&g| self.allowed(grid, a, g, Some(b))).collect();
            let open_b: Vec<u32> = (0..m as u32).filter(|&g| self.allowed(grid, b, g, Some(a))).collect();
            let same_layer = self.layer[a] == self.layer[b];
            for &ga in &open_a {
                for &gb in &open_b {
                    if same_layer && ga.abs_diff(gb) < sep {
                        continue;
                    }
                    let c = joint(ga, gb);
                    if c < best.0 {
                        best = (c, ga, gb);
                    }
                }
            }
            if best.0 < current - MIN_GAIN {
                for (v, to) in [(a, best.1), (b, best.2)] {
                    let from = grid[v];
                    grid[v] = to;
                    let row = self.s.row(v);
                    for u in (0..n).filter(|&u| u != v) {
                        for g in 0..m as u32 {
                            profile[u * m + g as usize] +=
                                self.table.pair(row[u], g, to) - self.table.pair(row[u], g, from);
                        }
                    }
                }
                improved = true;
            }
        }
        improved
    }

    fn swap_pass(&self, grid: &mut [u32]) -> bool {
        let n = grid.len();
        let mut improved = false;
        for a in 0..n {
            for b in (a + 1)..n {
                let (ga, gb) = (grid[a], grid[b]);
                if ga == gb {
                    continue;
                }
                if self.layer[a] != self.layer[b]
                    && !(self.allowed(grid, a, gb, Some(b)) && self.allowed(grid, b, ga, Some(a)))
                {
                    continue;
                }
                let before = self.node_cost(grid, a, ga) + self.node_cost(grid, b, gb)
                    - self.table.pair(self.s.get(a, b), ga, gb);
                grid.swap(a, b);
                let after = self.node_cost(grid, a, gb) + self.node_cost(grid, b, ga)
                    - self.table.pair(self.s.get(a, b), gb, ga);
                if after < before - MIN_GAIN {
                    improved = true;
                } else {
                    grid.swap(a, b);
                }
            }
        }
        improved
    }
}

/// Best placement found over `params.restarts` descents. Deterministic for
/// a given seed.
pub fn optimize_x(s: &SymMatrix, layer: &[u32], params: &GridParams) -> Result<Vec<u32>> {
    params.validate()?;
    assert_eq!(s.len(), layer.len());
    check_capacity(layer, params)?;
    let n = layer.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let descent = Descent {
        s,
        layer,
        params,
        table: CostTable::new(params),
    };
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| ((a + 1)..n).map(move |b| (a, b)))
        .filter(|&(a, b)| layer[a] == layer[b])
        .collect();
    let layer_count = layer.iter().max().map_or(0, |&l| l as usize + 1);
    let mut layers = vec![Vec::new(); layer_count];
    for (v, &l) in layer.iter().enumerate() {
        layers[l as usize].push(v);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut best: Option<(f64, Vec<u32>)> = None;
    let descend = |grid: &mut Vec<u32>, order: &[usize]| loop {
        let moved = descent.move_pass(grid, order);
        let swapped = n <= SWAP_LIMIT && descent.swap_pass(grid);
        if moved || swapped {
            continue;
        }
        if !descent.pair_pass(grid, &pairs) {
            break;
        }
    };
    for _ in 0..params.restarts.max(1) {
        let mut grid = random_feasible(layer, params, &mut rng)?;
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        descend(&mut grid, &order);
        let mut e = energy(s, &grid, params);
        // Kicks: re-scatter one layer at random and descend again, keeping
        // the result only when it lowers the energy.
        for _ in 0..KICKS {
            let scatter = random_feasible(layer, params, &mut rng)?;
            let target = layer[rng.gen_range(0..n)];
            let mut trial = grid.clone();
            for &v in &layers[target as usize] {
                trial[v] = scatter[v];
            }
            descend(&mut trial, &order);
            let te = energy(s, &trial, params);
            if te < e - MIN_GAIN {
                grid = trial;
                e = te;
            }
        }
        if best.as_ref().is_none_or(|(b, _)| e < *b - MIN_GAIN) {
            best = Some((e, grid));
        }
    }
    Ok(best.expect("at least one restart").1)
}
