//! Drill-down, expansion and back/forward navigation over network views.
//!
//! The neighborhood primitives work on index sets of a [`Digraph`]. A
//! `scope` mask, when given, restricts both the candidates and the nodes a
//! path may pass through; drill-down uses the current view as scope while
//! expansion searches the whole network.

use std::collections::VecDeque;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::analytics::{cluster, core_publications, ClusterParams, Partition, Subnetwork};
use crate::error::{Error, Result};
use crate::graph::Digraph;
use crate::model::{update_attributes, AttributeChange, AttributeState, CitationNetwork, NetworkView};

fn default_min_relations() -> u32 {
    1
}

/// Options for selecting via marked publications.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkedOptions {
    #[serde(default)]
    pub include_predecessors: bool,
    #[serde(default)]
    pub include_successors: bool,
    #[serde(default)]
    pub include_intermediates: bool,
    #[serde(default = "default_min_relations")]
    pub min_relations: u32,
}

impl Default for MarkedOptions {
    fn default() -> Self {
        MarkedOptions {
            include_predecessors: false,
            include_successors: false,
            include_intermediates: false,
            min_relations: 1,
        }
    }
}

/// How a drill-down picks publications from the current network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum SelectionSpec {
    ByPeriod { year_min: i32, year_max: i32 },
    ByGroup { group: u32 },
    ByMarked(MarkedOptions),
}

impl Default for SelectionSpec {
    fn default() -> Self {
        SelectionSpec::ByMarked(MarkedOptions::default())
    }
}

impl SelectionSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            SelectionSpec::ByPeriod { year_min, year_max } if year_min > year_max => Err(Error::InvalidParameter(
                format!("period {year_min}-{year_max} is empty"),
            )),
            SelectionSpec::ByMarked(MarkedOptions { min_relations: 0, .. }) => {
                Err(Error::InvalidParameter("min_relations must be at least 1".into()))
            }
            _ => Ok(()),
        }
    }
}

/// Which linked outside publications an expansion adds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpansionSpec {
    #[serde(default)]
    pub add_predecessors: bool,
    #[serde(default)]
    pub add_successors: bool,
    #[serde(default)]
    pub add_intermediates: bool,
    #[serde(default = "default_min_relations")]
    pub min_relations: u32,
}

impl ExpansionSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.add_predecessors || self.add_successors || self.add_intermediates) {
            return Err(Error::InvalidParameter("expansion must add predecessors, successors or intermediates".into()));
        }
        if self.min_relations == 0 {
            return Err(Error::InvalidParameter("min_relations must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Direction {
    /// Follow citing -> cited.
    Cited,
    /// Follow cited -> citing.
    Citing,
}

fn step<'g>(graph: &'g Digraph, v: u32, dir: Direction) -> &'g [u32] {
    match dir {
        Direction::Cited => graph.out_neighbors(v as usize),
        Direction::Citing => graph.in_neighbors(v as usize),
    }
}

fn in_scope(scope: Option<&[bool]>, v: u32) -> bool {
    scope.is_none_or(|s| s[v as usize])
}

/// Nodes outside `anchors` (and inside `scope`) linked to at least
/// `min_relations` anchors in direction `dir`.
fn linked(graph: &Digraph, anchors: &[u32], dir: Direction, min_relations: u32, scope: Option<&[bool]>) -> Result<Vec<u32>> {
    if anchors.is_empty() {
        return Err(Error::Precondition("the anchor set is empty".into()));
    }
    let mut is_anchor = vec![false; graph.node_count()];
    for &a in anchors {
        is_anchor[a as usize] = true;
    }
    let mut counts = vec![0u32; graph.node_count()];
    let mut touched = Vec::new();
    for &a in anchors {
        for &v in step(graph, a, dir) {
            if is_anchor[v as usize] || !in_scope(scope, v) {
                continue;
            }
            if counts[v as usize] == 0 {
                touched.push(v);
            }
            counts[v as usize] += 1;
        }
    }
    let mut out: Vec<u32> = touched.into_iter().filter(|&v| counts[v as usize] >= min_relations).collect();
    out.sort_unstable();
    Ok(out)
}

/// Outside publications cited by at least `min_relations` of `members`.
pub fn predecessors(graph: &Digraph, members: &[u32], min_relations: u32, scope: Option<&[bool]>) -> Result<Vec<u32>> {
    linked(graph, members, Direction::Cited, min_relations, scope)
}

/// Outside publications citing at least `min_relations` of `members`.
pub fn successors(graph: &Digraph, members: &[u32], min_relations: u32, scope: Option<&[bool]>) -> Result<Vec<u32>> {
    linked(graph, members, Direction::Citing, min_relations, scope)
}

fn reachable(graph: &Digraph, anchors: &[u32], dir: Direction, scope: Option<&[bool]>) -> Vec<bool> {
    let mut seen = vec![false; graph.node_count()];
    let mut queue: VecDeque<u32> = VecDeque::new();
    for &a in anchors {
        if !seen[a as usize] {
            seen[a as usize] = true;
            queue.push_back(a);
        }
    }
    while let Some(v) = queue.pop_front() {
        for &w in step(graph, v, dir) {
            if !seen[w as usize] && in_scope(scope, w) {
                seen[w as usize] = true;
                queue.push_back(w);
            }
        }
    }
    seen
}

/// Non-anchor nodes lying on a directed path between two anchors: reachable
/// from some anchor and reaching some anchor.
pub fn intermediates(graph: &Digraph, anchors: &[u32], scope: Option<&[bool]>) -> Vec<u32> {
    if anchors.is_empty() {
        return Vec::new();
    }
    let forward = reachable(graph, anchors, Direction::Cited, scope);
    let backward = reachable(graph, anchors, Direction::Citing, scope);
    let mut is_anchor = vec![false; graph.node_count()];
    for &a in anchors {
        is_anchor[a as usize] = true;
    }
    (0..graph.node_count() as u32)
        .filter(|&v| forward[v as usize] && backward[v as usize] && !is_anchor[v as usize])
        .collect()
}

/// Resolves a selection against `view`. The result is sorted and always a
/// subset of the view's members.
pub fn resolve_selection(network: &CitationNetwork, view: &NetworkView, spec: &SelectionSpec) -> Result<Vec<u32>> {
    spec.validate()?;
    let selected = match *spec {
        SelectionSpec::ByPeriod { year_min, year_max } => view
            .members()
            .iter()
            .copied()
            .filter(|&m| (year_min..=year_max).contains(&network.publication(m).year))
            .collect(),
        SelectionSpec::ByGroup { group } => view
            .members()
            .iter()
            .copied()
            .filter(|&m| view.attributes().group(m) == Some(group))
            .collect(),
        SelectionSpec::ByMarked(opts) => {
            let marked: Vec<u32> = view.attributes().marked.iter().copied().collect();
            if marked.is_empty() {
                return Err(Error::Precondition("no publications are marked".into()));
            }
            let scope = view.mask(network);
            let graph = network.graph();
            let mut out = marked.clone();
            if opts.include_predecessors {
                out.extend(predecessors(graph, &marked, opts.min_relations, Some(&scope))?);
            }
            if opts.include_successors {
                out.extend(successors(graph, &marked, opts.min_relations, Some(&scope))?);
            }
            if opts.include_intermediates {
                out.extend(intermediates(graph, &marked, Some(&scope)));
            }
            out.sort_unstable();
            out.dedup();
            out
        }
    };
    Ok(selected)
}

/// Membership after expanding `view` according to `spec`, computed over the
/// full network. Intermediates are taken after predecessors and successors
/// have been added.
pub fn resolve_expansion(network: &CitationNetwork, view: &NetworkView, spec: &ExpansionSpec) -> Result<Vec<u32>> {
    spec.validate()?;
    let graph = network.graph();
    let mut members = view.members().to_vec();
    if members.is_empty() {
        return Ok(members);
    }
    let mut added = Vec::new();
    if spec.add_predecessors {
        added.extend(predecessors(graph, &members, spec.min_relations, None)?);
    }
    if spec.add_successors {
        added.extend(successors(graph, &members, spec.min_relations, None)?);
    }
    members.extend(added);
    members.sort_unstable();
    members.dedup();
    if spec.add_intermediates {
        members.extend(intermediates(graph, &members, None));
        members.sort_unstable();
        members.dedup();
    }
    Ok(members)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NavDirection {
    Back,
    Forward,
}

/// Outcome of a history step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Navigation {
    Moved,
    /// Nothing in that direction; the session is unchanged.
    Boundary,
}

/// Browser-style exploration over one full network.
///
/// Every drill-down or expansion pushes a new view and discards the forward
/// tail. Attribute edits replace the current view in place.
#[derive(Debug, Clone)]
pub struct Session {
    network: Arc<CitationNetwork>,
    history: Vec<NetworkView>,
    cursor: usize,
}

impl Session {
    pub fn new(network: Arc<CitationNetwork>) -> Self {
        let full = NetworkView::full(&network);
        Session {
            network,
            history: vec![full],
            cursor: 0,
        }
    }

    /// Rebuilds a session from saved history.
    pub fn from_history(network: Arc<CitationNetwork>, history: Vec<NetworkView>, cursor: usize) -> Result<Self> {
        if history.is_empty() || cursor >= history.len() {
            return Err(Error::InvalidParameter("history cursor out of bounds".into()));
        }
        Ok(Session {
            network,
            history,
            cursor,
        })
    }

    pub fn network(&self) -> &Arc<CitationNetwork> {
        &self.network
    }

    pub fn current(&self) -> &NetworkView {
        &self.history[self.cursor]
    }

    pub fn history(&self) -> &[NetworkView] {
        &self.history
    }

    pub fn cursor(&self) -> usize {
        self.cursor
    }

    fn push(&mut self, view: NetworkView) -> &NetworkView {
        self.history.truncate(self.cursor + 1);
        self.history.push(view);
        self.cursor += 1;
        self.current()
    }

    fn replace(&mut self, view: NetworkView) -> &NetworkView {
        self.history[self.cursor] = view;
        self.current()
    }

    pub fn update_attributes(&mut self, changes: &[AttributeChange]) -> Result<&NetworkView> {
        let view = update_attributes(&self.network, self.current(), changes)?;
        Ok(self.replace(view))
    }

    /// Replaces the whole attribute state of the current view.
    pub fn set_attributes(&mut self, attributes: AttributeState) -> &NetworkView {
        let view = self.current().with_attributes(&self.network, attributes);
        self.replace(view)
    }

    /// Marks exactly `ids` (indices into the full network), unmarking the rest.
    pub fn mark_only(&mut self, ids: &[u32]) -> Result<&NetworkView> {
        let current = self.current();
        if let Some(&bad) = ids.iter().find(|&&ix| !current.contains(ix)) {
            return Err(Error::NotMember(self.network.id(bad).to_string()));
        }
        let mut attrs = current.attributes().clone();
        attrs.marked = ids.iter().copied().collect();
        Ok(self.set_attributes(attrs))
    }

    /// Flags the resolved selection as selected without drilling down.
    pub fn select(&mut self, spec: &SelectionSpec) -> Result<&NetworkView> {
        let selection = resolve_selection(&self.network, self.current(), spec)?;
        let mut attrs = self.current().attributes().clone();
        attrs.selected = selection.into_iter().collect();
        Ok(self.set_attributes(attrs))
    }

    pub fn drill_down(&mut self, spec: &SelectionSpec) -> Result<&NetworkView> {
        let selection = resolve_selection(&self.network, self.current(), spec)?;
        self.drill_to(selection)
    }

    /// Drills into an explicit subset of the current members. Marks and
    /// selection flags are cleared; groups carry over.
    pub fn drill_to(&mut self, members: Vec<u32>) -> Result<&NetworkView> {
        if members.is_empty() {
            return Err(Error::Precondition("the selection is empty".into()));
        }
        if let Some(&bad) = members.iter().find(|&&ix| !self.current().contains(ix)) {
            return Err(Error::NotMember(self.network.id(bad).to_string()));
        }
        let attrs = AttributeState {
            groups: self.current().attributes().groups.clone(),
            ..AttributeState::default()
        };
        let view = NetworkView::new(&self.network, members, attrs);
        Ok(self.push(view))
    }

    /// Drops `ids` from the current network.
    pub fn remove(&mut self, ids: &[u32]) -> Result<&NetworkView> {
        let mut drop = ids.to_vec();
        drop.sort_unstable();
        let keep: Vec<u32> = self
            .current()
            .members()
            .iter()
            .copied()
            .filter(|m| drop.binary_search(m).is_err())
            .collect();
        self.drill_to(keep)
    }

    /// Adds linked publications from the full network. Marks and groups are
    /// kept; selection flags are cleared.
    pub fn expand(&mut self, spec: &ExpansionSpec) -> Result<&NetworkView> {
        let members = resolve_expansion(&self.network, self.current(), spec)?;
        let attrs = AttributeState {
            selected: Default::default(),
            ..self.current().attributes().clone()
        };
        let view = NetworkView::new(&self.network, members, attrs);
        Ok(self.push(view))
    }

    /// Clusters the current network and stores cluster numbers as groups.
    /// Members of discarded clusters lose their group. Cluster numbers are
    /// those of the returned partition, which is indexed like `members()`.
    pub fn cluster_into_groups(&mut self, params: &ClusterParams) -> Result<Partition> {
        let sub = Subnetwork::of_view(&self.network, self.current());
        let partition = cluster(sub.graph(), params)?;
        let mut attrs = self.current().attributes().clone();
        for (local, c) in partition.clusters.iter().enumerate() {
            let ix = sub.global(local as u32);
            match c {
                Some(c) => attrs.groups.insert(ix, *c),
                None => attrs.groups.remove(&ix),
            };
        }
        self.set_attributes(attrs);
        Ok(partition)
    }

    /// Flags the `k`-core of the current network as selected and returns it.
    pub fn select_core(&mut self, k: usize) -> Result<Vec<u32>> {
        if k == 0 {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        let sub = Subnetwork::of_view(&self.network, self.current());
        let core = sub.to_global(&core_publications(sub.graph(), k));
        let mut attrs = self.current().attributes().clone();
        attrs.selected = core.iter().copied().collect();
        self.set_attributes(attrs);
        Ok(core)
    }

    pub fn navigate(&mut self, direction: NavDirection) -> Navigation {
        match direction {
            NavDirection::Back if self.cursor > 0 => {
                self.cursor -= 1;
                Navigation::Moved
            }
            NavDirection::Forward if self.cursor + 1 < self.history.len() => {
                self.cursor += 1;
                Navigation::Moved
            }
            _ => Navigation::Boundary,
        }
    }
}
