use serde::{Deserialize, Serialize};

use super::closeness::{closeness, DEFAULT_STOP_PROBABILITY, DEFAULT_WALK_STEPS};
use super::layers::assign_layers;
use super::optimize::{energy, optimize_x, GridParams};
use crate::dag::transitive_reduction;
use crate::error::{Error, Result};
use crate::model::{CitationNetwork, NetworkView, ScoreMode};

pub const FRAME_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LayoutParams {
    pub display_count: usize,
    pub alpha: f64,
    pub beta: f64,
    pub grid_points: usize,
    pub min_separation: usize,
    pub max_per_layer: usize,
    /// Draw only the edges of the transitive reduction of the displayed
    /// subgraph.
    pub use_transitive_reduction: bool,
    /// Rank by citations from inside the view instead of the full network.
    pub score_within_view: bool,
    pub walk_steps: usize,
    pub stop_probability: f64,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for LayoutParams {
    fn default() -> Self {
        let grid = GridParams::default();
        LayoutParams {
            display_count: 40,
            alpha: grid.alpha,
            beta: grid.beta,
            grid_points: grid.grid_points,
            min_separation: grid.min_separation,
            max_per_layer: 10,
            use_transitive_reduction: false,
            score_within_view: false,
            walk_steps: DEFAULT_WALK_STEPS,
            stop_probability: DEFAULT_STOP_PROBABILITY,
            restarts: grid.restarts,
            seed: 0,
        }
    }
}

impl LayoutParams {
    pub fn grid(&self) -> GridParams {
        GridParams {
            alpha: self.alpha,
            beta: self.beta,
            grid_points: self.grid_points,
            min_separation: self.min_separation,
            restarts: self.restarts,
            seed: self.seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.grid().validate()?;
        if self.display_count < 1 {
            return Err(Error::InvalidParameter("display count must be at least 1".into()));
        }
        if self.max_per_layer < 1 {
            return Err(Error::InvalidParameter("maximum per layer must be at least 1".into()));
        }
        if !(self.stop_probability > 0.0 && self.stop_probability <= 1.0) {
            return Err(Error::InvalidParameter("stop probability must be in (0, 1]".into()));
        }
        if self.walk_steps < 1 {
            return Err(Error::InvalidParameter("walk steps must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameNode {
    pub id: String,
    pub label: String,
    pub year: i32,
    pub layer: u32,
    pub x: f64,
    /// Grid index of `x`.
    pub grid: u32,
    pub marked: bool,
    pub selected: bool,
    pub group: Option<u32>,
    pub internal_score: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameEdge {
    pub citing: String,
    pub cited: String,
    /// Part of the transitive reduction of the displayed subgraph.
    pub essential: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameLayer {
    pub index: u32,
    pub year: i32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayoutFrame {
    pub version: u32,
    /// Displayed publications, highest ranked first.
    pub nodes: Vec<FrameNode>,
    pub edges: Vec<FrameEdge>,
    pub layers: Vec<FrameLayer>,
    pub grid_points: usize,
    pub min_separation: usize,
    pub energy: f64,
}

impl LayoutFrame {
    pub fn empty(params: &LayoutParams) -> Self {
        LayoutFrame {
            version: FRAME_VERSION,
            nodes: Vec::new(),
            edges: Vec::new(),
            layers: Vec::new(),
            grid_points: params.grid_points,
            min_separation: params.min_separation,
            energy: 0.0,
        }
    }

    /// Lists every broken frame invariant; empty when the frame is valid.
    pub fn violations(&self, max_per_layer: usize) -> Vec<String> {
        let mut out = Vec::new();
        let m = self.grid_points;
        let index: std::collections::HashMap<&str, &FrameNode> = self.nodes.iter().map(|n| (n.id.as_str(), n)).collect();
        for n in &self.nodes {
            if n.grid as usize >= m || n.x != n.grid as f64 / (m - 1) as f64 {
                out.push(format!("{} is off the grid", n.id));
            }
            if n.layer as usize >= self.layers.len() {
                out.push(format!("{} has unknown layer {}", n.id, n.layer));
            } else if self.layers[n.layer as usize].year != n.year {
                out.push(format!("{} sits in a layer of another year", n.id));
            }
        }
        for e in &self.edges {
            match (index.get(e.citing.as_str()), index.get(e.cited.as_str())) {
                (Some(a), Some(b)) if a.layer > b.layer => {}
                (Some(_), Some(_)) => out.push(format!("{} -> {} does not flow upward", e.citing, e.cited)),
                _ => out.push(format!("{} -> {} has an undisplayed endpoint", e.citing, e.cited)),
            }
        }
        for (i, a) in self.nodes.iter().enumerate() {
            for b in &self.nodes[i + 1..] {
                if a.layer == b.layer && (a.grid.abs_diff(b.grid) as usize) < self.min_separation {
                    out.push(format!("{} and {} are too close", a.id, b.id));
                }
            }
        }
        let mut occupancy = vec![0usize; self.layers.len()];
        for n in &self.nodes {
            if let Some(c) = occupancy.get_mut(n.layer as usize) {
                *c += 1;
            }
        }
        for (l, &c) in occupancy.iter().enumerate() {
            if c > max_per_layer {
                out.push(format!("layer {l} holds {c} publications"));
            }
        }
        if self.layers.windows(2).any(|w| w[0].year > w[1].year) {
            out.push("layer years decrease downward".into());
        }
        out
    }
}

/// The `count` highest scoring members of `view`, ties going to the older
/// publication and then the smaller id.
pub fn display_subset(network: &CitationNetwork, view: &NetworkView, count: usize, within_view: bool) -> Vec<u32> {
    let mut ranked: Vec<(u64, u32)> = view
        .members()
        .iter()
        .map(|&ix| (view.score(network, ix, ScoreMode::Internal, within_view), ix))
        .collect();
    ranked.sort_by(|&(sa, a), &(sb, b)| {
        let (pa, pb) = (network.publication(a), network.publication(b));
        sb.cmp(&sa).then(pa.year.cmp(&pb.year)).then(pa.id.cmp(&pb.id))
    });
    ranked.truncate(count);
    ranked.into_iter().map(|(_, ix)| ix).collect()
}

/// Lays out the top publications of `view`.
pub fn compose_frame(network: &CitationNetwork, view: &NetworkView, params: &LayoutParams) -> Result<LayoutFrame> {
    params.validate()?;
    let shown = display_subset(network, view, params.display_count, params.score_within_view);
    if shown.is_empty() {
        return Ok(LayoutFrame::empty(params));
    }
    let mut sorted = shown.clone();
    sorted.sort_unstable();
    // Local node i is sorted[i].
    let graph = network.graph().induced(&sorted);
    let years: Vec<i32> = sorted.iter().map(|&g| network.publication(g).year).collect();
    let layering = assign_layers(&graph, &years, params.max_per_layer);
    let s = closeness(&graph, params.walk_steps, params.stop_probability);
    let grid_params = params.grid();
    let grid = optimize_x(&s, &layering.layer, &grid_params)?;
    let reduction = transitive_reduction(&graph)?;

    let attributes = view.attributes();
    let nodes = shown
        .iter()
        .map(|&g| {
            let local = sorted.binary_search(&g).expect("displayed node");
            let publication = network.publication(g);
            FrameNode {
                id: publication.id.clone(),
                label: publication.label().to_string(),
                year: publication.year,
                layer: layering.layer[local],
                x: grid_params.x(grid[local]),
                grid: grid[local],
                marked: attributes.is_marked(g),
                selected: attributes.is_selected(g),
                group: attributes.group(g),
                internal_score: view.score(network, g, ScoreMode::Internal, params.score_within_view),
            }
        })
        .collect();
    let edges = reduction
        .edges
        .iter()
        .zip(&reduction.essential)
        .filter(|&(_, &essential)| essential || !params.use_transitive_reduction)
        .map(|(&(a, b), &essential)| FrameEdge {
            citing: network.id(sorted[a as usize]).to_string(),
            cited: network.id(sorted[b as usize]).to_string(),
            essential,
        })
        .collect();
    let layers = layering
        .layer_years
        .iter()
        .enumerate()
        .map(|(index, &year)| FrameLayer { index: index as u32, year })
        .collect();
    Ok(LayoutFrame {
        version: FRAME_VERSION,
        nodes,
        edges,
        layers,
        grid_points: params.grid_points,
        min_separation: params.min_separation,
        energy: energy(&s, &grid, &grid_params),
    })
}
