//! Request and response bodies.

use std::collections::BTreeMap;

use citnet_core::analytics::{PathKind, SmallClusterPolicy};
use citnet_core::explore::{Session, SelectionSpec};
use citnet_core::ingest::MatchReport;
use citnet_core::layout::LayoutParams;
use serde::{Deserialize, Serialize};

/// Counts shown next to the current network.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateDto {
    pub session: String,
    pub publications: usize,
    pub citations: usize,
    pub selected: usize,
    pub selected_citations: usize,
    pub marked: usize,
    pub grouped: usize,
    pub total_publications: usize,
    pub total_citations: usize,
    pub cursor: usize,
    pub history_length: usize,
    pub can_back: bool,
    pub can_forward: bool,
}

impl StateDto {
    pub fn of(id: &str, session: &Session) -> Self {
        let view = session.current();
        let counts = view.counts();
        let attrs = view.attributes();
        StateDto {
            session: id.to_string(),
            publications: counts.publications,
            citations: counts.citations,
            selected: counts.selected,
            selected_citations: counts.selected_citations,
            marked: attrs.marked.len(),
            grouped: view.members().iter().filter(|&&m| attrs.group(m).is_some()).count(),
            total_publications: session.network().len(),
            total_citations: session.network().edge_count(),
            cursor: session.cursor(),
            history_length: session.history().len(),
            can_back: session.cursor() > 0,
            can_forward: session.cursor() + 1 < session.history().len(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "format", rename_all = "lowercase")]
pub enum CreateRequest {
    Pairs { publications: String, citations: String },
    Wos {
        text: String,
        #[serde(default)]
        incomplete_min_citations: Option<usize>,
    },
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct LoadSummary {
    pub format: String,
    /// Dropped citations by reason.
    pub dropped: BTreeMap<String, usize>,
    pub skipped_records: usize,
    pub matching: Option<MatchReport>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CreateResponse {
    pub session: String,
    pub state: StateDto,
    pub load: LoadSummary,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateEnvelope {
    pub state: StateDto,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NavigateResponse {
    pub state: StateDto,
    pub moved: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IdList {
    pub ids: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MarkRequest {
    pub ids: Vec<String>,
    #[serde(default = "yes")]
    pub value: bool,
    /// Unmark everything else first.
    #[serde(default)]
    pub exclusive: bool,
}

fn yes() -> bool {
    true
}

/// Drill into explicit members or into a selection.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DrillRequest {
    Members { members: Vec<String> },
    Spec(SelectionSpec),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct ClusterRequest {
    pub resolution: f64,
    pub min_cluster_size: usize,
    pub policy: SmallClusterPolicy,
    pub seed: u64,
    pub random_starts: usize,
    pub iterations: usize,
}

impl Default for ClusterRequest {
    fn default() -> Self {
        let p = citnet_core::analytics::ClusterParams::default();
        ClusterRequest {
            resolution: p.resolution,
            min_cluster_size: p.min_cluster_size,
            policy: p.policy,
            seed: p.seed,
            random_starts: p.random_starts,
            iterations: p.iterations,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClusterResponse {
    pub state: StateDto,
    pub clusters: usize,
    /// Cluster sizes, largest first; cluster `k` has size `sizes[k-1]`.
    pub sizes: Vec<usize>,
    pub quality: f64,
    pub unassigned: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoresRequest {
    pub k: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoresResponse {
    pub state: StateDto,
    pub core: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PublicationDto {
    pub id: String,
    pub label: String,
    pub authors: Vec<String>,
    pub title: String,
    pub source: String,
    pub year: i32,
    pub doi: Option<String>,
    pub external_citations: Option<u64>,
    pub internal_citations: usize,
    pub complete_record: bool,
    pub member: bool,
    pub marked: bool,
    pub selected: bool,
    pub group: Option<u32>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ListQuery {
    pub search: Option<String>,
    pub offset: Option<usize>,
    pub limit: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ListItem {
    pub id: String,
    pub label: String,
    pub title: String,
    pub year: i32,
    pub internal_citations: usize,
    pub marked: bool,
    pub selected: bool,
    pub group: Option<u32>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ListResponse {
    pub total: usize,
    pub offset: usize,
    pub items: Vec<ListItem>,
}

/// Layout parameters as query fields; absent ones take their defaults.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct FrameQuery {
    pub format: Option<String>,
    pub display_count: Option<usize>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub grid_points: Option<usize>,
    pub min_separation: Option<usize>,
    pub max_per_layer: Option<usize>,
    pub use_transitive_reduction: Option<bool>,
    pub score_within_view: Option<bool>,
    pub walk_steps: Option<usize>,
    pub stop_probability: Option<f64>,
    pub restarts: Option<usize>,
    pub seed: Option<u64>,
}

impl FrameQuery {
    pub fn params(&self) -> LayoutParams {
        let d = LayoutParams::default();
        LayoutParams {
            display_count: self.display_count.unwrap_or(d.display_count),
            alpha: self.alpha.unwrap_or(d.alpha),
            beta: self.beta.unwrap_or(d.beta),
            grid_points: self.grid_points.unwrap_or(d.grid_points),
            min_separation: self.min_separation.unwrap_or(d.min_separation),
            max_per_layer: self.max_per_layer.unwrap_or(d.max_per_layer),
            use_transitive_reduction: self.use_transitive_reduction.unwrap_or(d.use_transitive_reduction),
            score_within_view: self.score_within_view.unwrap_or(d.score_within_view),
            walk_steps: self.walk_steps.unwrap_or(d.walk_steps),
            stop_probability: self.stop_probability.unwrap_or(d.stop_probability),
            restarts: self.restarts.unwrap_or(d.restarts),
            seed: self.seed.unwrap_or(d.seed),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PathQueryParams {
    pub from: String,
    pub to: String,
    #[serde(default = "shortest")]
    pub kind: PathKind,
    pub max_paths: Option<usize>,
}

fn shortest() -> PathKind {
    PathKind::Shortest
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PathResponse {
    pub kind: PathKind,
    pub reachable: bool,
    pub length: Option<usize>,
    pub paths: Vec<Vec<String>>,
    pub truncated: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComponentsResponse {
    /// Components of the current network, largest first.
    pub components: Vec<Vec<String>>,
}
