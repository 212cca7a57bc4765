//! Declarative exploration pipelines read from TOML.
//!
//! ```toml
//! [[step]]
//! action = "mark"
//! ids = ["p00010", "p00030"]
//!
//! [[step]]
//! action = "drill"
//! mode = "by_marked"
//! include_intermediates = true
//!
//! [[step]]
//! action = "expand"
//! add_successors = true
//! min_relations = 2
//! ```
//!
//! Actions: `mark`, `unmark`, `mark_only`, `drill`, `drill_members`,
//! `remove`, `expand`, `cluster`, `cores`, `search`, `largest_component`,
//! `back`, `forward`.

use std::path::Path;

use serde::Deserialize;

use citnet_core::analytics::{largest_component, ClusterParams, SmallClusterPolicy, Subnetwork};
use citnet_core::explore::{ExpansionSpec, NavDirection, SelectionSpec, Session};
use citnet_core::model::AttributeChange;
use citnet_core::search::search_titles;

use crate::error::{CliError, CliResult};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Script {
    #[serde(default)]
    pub step: Vec<Step>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "action", rename_all = "snake_case")]
pub enum Step {
    Mark { ids: Vec<String> },
    Unmark { ids: Vec<String> },
    MarkOnly { ids: Vec<String> },
    Drill(SelectionSpec),
    DrillMembers { members: Vec<String> },
    Remove { ids: Vec<String> },
    Expand(ExpansionSpec),
    Cluster(ClusterStep),
    Cores { k: usize },
    /// Marks every title matching the pattern.
    Search { pattern: String },
    /// Drills down to the largest weakly connected component.
    LargestComponent,
    Back,
    Forward,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClusterStep {
    resolution: Option<f64>,
    min_cluster_size: Option<usize>,
    policy: Option<SmallClusterPolicy>,
    seed: Option<u64>,
    random_starts: Option<usize>,
    iterations: Option<usize>,
}

impl ClusterStep {
    fn params(&self, default_seed: u64) -> ClusterParams {
        let d = ClusterParams::default();
        ClusterParams {
            resolution: self.resolution.unwrap_or(d.resolution),
            min_cluster_size: self.min_cluster_size.unwrap_or(d.min_cluster_size),
            policy: self.policy.unwrap_or(d.policy),
            seed: self.seed.unwrap_or(default_seed),
            random_starts: self.random_starts.unwrap_or(d.random_starts),
            iterations: self.iterations.unwrap_or(d.iterations),
        }
    }
}

pub fn read(path: &Path) -> CliResult<Script> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })?;
    toml::from_str(&text).map_err(|e| CliError::Script { path: path.to_path_buf(), message: e.message().to_string() })
}

fn resolve(session: &Session, ids: &[String]) -> CliResult<Vec<u32>> {
    Ok(session.network().resolve_ids(ids)?)
}

fn set_marks(session: &mut Session, ids: Vec<String>, value: bool) -> CliResult<()> {
    let changes: Vec<AttributeChange> = ids.into_iter().map(|id| AttributeChange::Marked { id, value }).collect();
    session.update_attributes(&changes)?;
    Ok(())
}

/// Runs the steps in order. A step that fails stops the pipeline; navigation
/// past either end of the history is a no-op.
pub fn run(session: &mut Session, script: Script, seed: u64) -> CliResult<()> {
    for step in script.step {
        match step {
            Step::Mark { ids } => set_marks(session, ids, true)?,
            Step::Unmark { ids } => set_marks(session, ids, false)?,
            Step::MarkOnly { ids } => {
                let ix = resolve(session, &ids)?;
                session.mark_only(&ix)?;
            }
            Step::Drill(spec) => {
                session.drill_down(&spec)?;
            }
            Step::DrillMembers { members } => {
                let ix = resolve(session, &members)?;
                session.drill_to(ix)?;
            }
            Step::Remove { ids } => {
                let ix = resolve(session, &ids)?;
                session.remove(&ix)?;
            }
            Step::Expand(spec) => {
                session.expand(&spec)?;
            }
            Step::Cluster(c) => {
                session.cluster_into_groups(&c.params(seed))?;
            }
            Step::Cores { k } => {
                session.select_core(k)?;
            }
            Step::Search { pattern } => {
                let hits = search_titles(session.network(), session.current(), &pattern)?;
                let ids = hits.iter().map(|&ix| session.network().id(ix).to_string()).collect();
                set_marks(session, ids, true)?;
            }
            Step::LargestComponent => {
                let sub = Subnetwork::of_view(session.network(), session.current());
                let members = sub.to_global(&largest_component(sub.graph()));
                session.drill_to(members)?;
            }
            Step::Back => {
                session.navigate(NavDirection::Back);
            }
            Step::Forward => {
                session.navigate(NavDirection::Forward);
            }
        }
    }
    Ok(())
}
