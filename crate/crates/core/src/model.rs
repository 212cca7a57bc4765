//! Publications, the immutable full citation network, and views over it.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::dag;
use crate::error::{Error, Result};
use crate::graph::Digraph;

/// A node of the citation network.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Publication {
    pub id: String,
    /// Last name plus first initial, e.g. `Hirsch J`.
    pub first_author: String,
    #[serde(default)]
    pub co_authors: Vec<String>,
    pub title: String,
    pub source: String,
    pub year: i32,
    pub doi: Option<String>,
    /// Citations from anywhere, as supplied by the data source. `None` when
    /// the source did not report a count.
    pub external_citations: Option<u64>,
    pub complete_record: bool,
}

impl Publication {
    pub fn new(id: impl Into<String>, first_author: impl Into<String>, year: i32) -> Self {
        Publication {
            id: id.into(),
            first_author: first_author.into(),
            co_authors: Vec::new(),
            title: String::new(),
            source: String::new(),
            year,
            doi: None,
            external_citations: None,
            complete_record: true,
        }
    }

    pub fn with_title(mut self, title: impl Into<String>) -> Self {
        self.title = title.into();
        self
    }

    pub fn incomplete(mut self) -> Self {
        self.complete_record = false;
        self
    }

    /// Display label: the first author's last name.
    pub fn label(&self) -> &str {
        let name = self.first_author.trim();
        if let Some((last, _)) = name.split_once(',') {
            return last.trim();
        }
        match name.rfind(char::is_whitespace) {
            Some(pos) => name[..pos].trim_end(),
            None => name,
        }
    }

    /// All authors, first author first.
    pub fn authors(&self) -> impl Iterator<Item = &str> {
        std::iter::once(self.first_author.as_str()).chain(self.co_authors.iter().map(String::as_str))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScoreMode {
    #[default]
    Internal,
    External,
}

/// Why an input citation did not make it into the network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DropReason {
    SelfCitation,
    Duplicate,
    /// The citing publication has an incomplete record and so cannot cite.
    IncompleteCiting,
    ForwardInTime,
    Cycle,
}

impl DropReason {
    pub fn as_str(self) -> &'static str {
        match self {
            DropReason::SelfCitation => "self-citation",
            DropReason::Duplicate => "duplicate",
            DropReason::IncompleteCiting => "incomplete-citing",
            DropReason::ForwardInTime => "forward-in-time",
            DropReason::Cycle => "cycle",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DroppedEdge {
    pub citing: String,
    pub cited: String,
    pub reason: DropReason,
}

/// Result of [`build_network`]: the network plus the citations that were
/// removed to satisfy its constraints.
#[derive(Debug, Clone)]
pub struct BuildOutcome {
    pub network: CitationNetwork,
    pub dropped: Vec<DroppedEdge>,
}

/// The full network: publications sorted by id and acyclic, temporally
/// consistent citing -> cited edges. Immutable once built.
#[derive(Debug, Clone)]
pub struct CitationNetwork {
    publications: Vec<Publication>,
    index: HashMap<String, u32>,
    graph: Digraph,
}

impl CitationNetwork {
    pub fn len(&self) -> usize {
        self.publications.len()
    }

    pub fn is_empty(&self) -> bool {
        self.publications.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn publications(&self) -> &[Publication] {
        &self.publications
    }

    pub fn publication(&self, ix: u32) -> &Publication {
        &self.publications[ix as usize]
    }

    pub fn id(&self, ix: u32) -> &str {
        &self.publications[ix as usize].id
    }

    pub fn index_of(&self, id: &str) -> Option<u32> {
        self.index.get(id).copied()
    }

    /// Like [`index_of`](Self::index_of) but fails with [`Error::NotFound`].
    pub fn require(&self, id: &str) -> Result<u32> {
        self.index_of(id).ok_or_else(|| Error::NotFound(id.to_string()))
    }

    pub fn graph(&self) -> &Digraph {
        &self.graph
    }

    /// Number of citations received from within the full network.
    pub fn internal_citations(&self, ix: u32) -> usize {
        self.graph.in_degree(ix as usize)
    }

    pub fn citation_score(&self, id: &str, mode: ScoreMode) -> Result<u64> {
        let ix = self.require(id)?;
        Ok(self.score(ix, mode))
    }

    pub(crate) fn score(&self, ix: u32, mode: ScoreMode) -> u64 {
        match mode {
            ScoreMode::Internal => self.internal_citations(ix) as u64,
            ScoreMode::External => self.publication(ix).external_citations.unwrap_or(0),
        }
    }

    /// Edges as `(citing, cited)` id pairs.
    pub fn edges(&self) -> impl Iterator<Item = (&str, &str)> + '_ {
        self.graph.edges().map(move |(s, t)| (self.id(s), self.id(t)))
    }

    pub fn all_indices(&self) -> Vec<u32> {
        (0..self.len() as u32).collect()
    }

    /// Resolves a list of ids to sorted, deduplicated indices.
    pub fn resolve_ids<S: AsRef<str>>(&self, ids: &[S]) -> Result<Vec<u32>> {
        let mut out = ids
            .iter()
            .map(|id| self.require(id.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }
}

/// Builds the full network from publications and citations given as id pairs.
pub fn build_network(publications: Vec<Publication>, raw_edges: &[(String, String)]) -> Result<BuildOutcome> {
    let index = unique_index(&publications)?;
    let mut edges = Vec::with_capacity(raw_edges.len());
    for (citing, cited) in raw_edges {
        match (index.get(citing.as_str()), index.get(cited.as_str())) {
            (Some(&s), Some(&t)) => edges.push((s, t)),
            _ => {
                return Err(Error::UnknownEdgeEndpoint {
                    citing: citing.clone(),
                    cited: cited.clone(),
                })
            }
        }
    }
    drop(index);
    build_network_indexed(publications, edges)
}

/// Builds the full network from citations given as positions into
/// `publications`. This is the path used by the file readers, which have
/// already resolved ids.
///
/// Invalid citations are dropped in this order: self-citations, duplicates,
/// citations made by incomplete records, citations pointing forward in time,
/// and finally the back edges found while breaking cycles.
pub fn build_network_indexed(publications: Vec<Publication>, raw_edges: Vec<(u32, u32)>) -> Result<BuildOutcome> {
    let n = publications.len();
    if n > u32::MAX as usize {
        return Err(Error::InvalidParameter("too many publications".into()));
    }
    unique_index(&publications)?;
    if let Some(&(s, t)) = raw_edges.iter().find(|&&(s, t)| s as usize >= n || t as usize >= n) {
        return Err(Error::UnknownEdgeEndpoint {
            citing: format!("#{s}"),
            cited: format!("#{t}"),
        });
    }

    // Reorder publications by id; `remap[old] = new`.
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.sort_by(|&a, &b| publications[a as usize].id.cmp(&publications[b as usize].id));
    let mut remap = vec![0u32; n];
    for (new, &old) in order.iter().enumerate() {
        remap[old as usize] = new as u32;
    }
    let mut slots: Vec<Option<Publication>> = publications.into_iter().map(Some).collect();
    let publications: Vec<Publication> = order
        .iter()
        .map(|&old| slots[old as usize].take().expect("each slot taken once"))
        .collect();
    drop(slots);

    let mut dropped = Vec::new();
    let mut drop_edge = |s: u32, t: u32, reason: DropReason| {
        dropped.push((s, t, reason));
    };

    let mut seen = std::collections::HashSet::with_capacity(raw_edges.len());
    let mut temporal = Vec::with_capacity(raw_edges.len());
    for (s, t) in raw_edges {
        let (s, t) = (remap[s as usize], remap[t as usize]);
        let (citing, cited) = (&publications[s as usize], &publications[t as usize]);
        if s == t {
            drop_edge(s, t, DropReason::SelfCitation);
        } else if !seen.insert(((s as u64) << 32) | t as u64) {
            drop_edge(s, t, DropReason::Duplicate);
        } else if !citing.complete_record {
            drop_edge(s, t, DropReason::IncompleteCiting);
        } else if citing.year < cited.year {
            drop_edge(s, t, DropReason::ForwardInTime);
        } else {
            temporal.push((s, t));
        }
    }
    drop(seen);

    // Deterministic order for cycle breaking: year ascending, then id. The
    // publications are already sorted by id so a stable sort on year suffices.
    let mut by_year: Vec<u32> = (0..n as u32).collect();
    by_year.sort_by_key(|&v| publications[v as usize].year);
    let mut rank = vec![0u32; n];
    for (r, &v) in by_year.iter().enumerate() {
        rank[v as usize] = r as u32;
    }
    drop(by_year);

    let broken = dag::break_cycles(n, temporal, &rank);
    for (s, t) in broken.removed {
        drop_edge(s, t, DropReason::Cycle);
    }
    let graph = Digraph::from_edges(n, &broken.kept);
    drop(broken.kept);

    let dropped = dropped
        .into_iter()
        .map(|(s, t, reason)| DroppedEdge {
            citing: publications[s as usize].id.clone(),
            cited: publications[t as usize].id.clone(),
            reason,
        })
        .collect();

    let index = publications
        .iter()
        .enumerate()
        .map(|(i, p)| (p.id.clone(), i as u32))
        .collect();
    Ok(BuildOutcome {
        network: CitationNetwork {
            publications,
            index,
            graph,
        },
        dropped,
    })
}

fn unique_index(publications: &[Publication]) -> Result<HashMap<&str, u32>> {
    let mut index = HashMap::with_capacity(publications.len());
    for (i, p) in publications.iter().enumerate() {
        if index.insert(p.id.as_str(), i as u32).is_some() {
            return Err(Error::DuplicateId(p.id.clone()));
        }
    }
    Ok(index)
}

/// Per-publication marking, selection and group assignment.
///
/// Indices refer to the full network. Groups are kept for publications that
/// leave the view so that they reappear with their group after an expansion.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AttributeState {
    pub marked: BTreeSet<u32>,
    pub selected: BTreeSet<u32>,
    pub groups: BTreeMap<u32, u32>,
}

impl AttributeState {
    pub fn is_marked(&self, ix: u32) -> bool {
        self.marked.contains(&ix)
    }

    pub fn is_selected(&self, ix: u32) -> bool {
        self.selected.contains(&ix)
    }

    pub fn group(&self, ix: u32) -> Option<u32> {
        self.groups.get(&ix).copied()
    }
}

/// Derived counts shown for the current network.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViewCounts {
    pub publications: usize,
    pub citations: usize,
    pub selected: usize,
    pub selected_citations: usize,
}

/// A subset of the full network together with its attribute state: the
/// "current network" of an exploration session. Views are immutable
/// snapshots; every change produces a new value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkView {
    members: Arc<[u32]>,
    attributes: AttributeState,
    counts: ViewCounts,
}

impl NetworkView {
    /// The view containing the entire network.
    pub fn full(network: &CitationNetwork) -> Self {
        NetworkView::new(network, network.all_indices(), AttributeState::default())
    }

    /// `members` must be valid network indices; they are sorted and deduplicated.
    pub fn new(network: &CitationNetwork, mut members: Vec<u32>, attributes: AttributeState) -> Self {
        members.sort_unstable();
        members.dedup();
        NetworkView::from_parts(network, members.into(), attributes)
    }

    fn from_parts(network: &CitationNetwork, members: Arc<[u32]>, mut attributes: AttributeState) -> Self {
        let is_member = |ix: &u32| members.binary_search(ix).is_ok();
        attributes.marked.retain(is_member);
        attributes.selected.retain(is_member);
        let counts = ViewCounts {
            publications: members.len(),
            citations: count_internal_edges(network, &members, |v| members.binary_search(&v).is_ok()),
            selected: attributes.selected.len(),
            selected_citations: attributes
                .selected
                .iter()
                .map(|&s| {
                    network
                        .graph()
                        .out_neighbors(s as usize)
                        .iter()
                        .filter(|t| attributes.selected.contains(t))
                        .count()
                })
                .sum(),
        };
        NetworkView {
            members,
            attributes,
            counts,
        }
    }

    pub fn members(&self) -> &[u32] {
        &self.members
    }

    pub fn contains(&self, ix: u32) -> bool {
        self.members.binary_search(&ix).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn attributes(&self) -> &AttributeState {
        &self.attributes
    }

    pub fn counts(&self) -> ViewCounts {
        self.counts
    }

    /// Boolean membership mask over the full network.
    pub fn mask(&self, network: &CitationNetwork) -> Vec<bool> {
        let mut mask = vec![false; network.len()];
        for &m in self.members.iter() {
            mask[m as usize] = true;
        }
        mask
    }

    /// Same membership, new attributes.
    pub(crate) fn with_attributes(&self, network: &CitationNetwork, attributes: AttributeState) -> Self {
        NetworkView::from_parts(network, Arc::clone(&self.members), attributes)
    }

    /// Citation score of a member. With `within_view`, internal scores count
    /// only citations from other members of this view.
    pub fn score(&self, network: &CitationNetwork, ix: u32, mode: ScoreMode, within_view: bool) -> u64 {
        match (mode, within_view) {
            (ScoreMode::Internal, true) => network
                .graph()
                .in_neighbors(ix as usize)
                .iter()
                .filter(|&&s| self.contains(s))
                .count() as u64,
            _ => network.score(ix, mode),
        }
    }
}

fn count_internal_edges(network: &CitationNetwork, members: &[u32], is_member: impl Fn(u32) -> bool) -> usize {
    if members.len() == network.len() {
        return network.edge_count();
    }
    members
        .iter()
        .map(|&m| {
            network
                .graph()
                .out_neighbors(m as usize)
                .iter()
                .filter(|&&t| is_member(t))
                .count()
        })
        .sum()
}

/// A single attribute mutation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "attribute", rename_all = "lowercase")]
pub enum AttributeChange {
    Marked { id: String, value: bool },
    Selected { id: String, value: bool },
    /// `None` clears the group.
    Group { id: String, value: Option<u32> },
}

impl AttributeChange {
    pub fn id(&self) -> &str {
        match self {
            AttributeChange::Marked { id, .. }
            | AttributeChange::Selected { id, .. }
            | AttributeChange::Group { id, .. } => id,
        }
    }
}

/// Applies `changes` in order and returns the new view. Every id must be a
/// member of `view`; group numbers must be positive.
pub fn update_attributes(network: &CitationNetwork, view: &NetworkView, changes: &[AttributeChange]) -> Result<NetworkView> {
    let mut attrs = view.attributes.clone();
    for change in changes {
        let ix = network
            .index_of(change.id())
            .filter(|&ix| view.contains(ix))
            .ok_or_else(|| Error::NotMember(change.id().to_string()))?;
        match *change {
            AttributeChange::Marked { value, .. } => set_flag(&mut attrs.marked, ix, value),
            AttributeChange::Selected { value, .. } => set_flag(&mut attrs.selected, ix, value),
            AttributeChange::Group { value: Some(0), .. } => {
                return Err(Error::InvalidParameter("group numbers start at 1".into()))
            }
            AttributeChange::Group { value: Some(g), .. } => {
                attrs.groups.insert(ix, g);
            }
            AttributeChange::Group { value: None, .. } => {
                attrs.groups.remove(&ix);
            }
        }
    }
    Ok(view.with_attributes(network, attrs))
}

fn set_flag(set: &mut BTreeSet<u32>, ix: u32, value: bool) {
    if value {
        set.insert(ix);
    } else {
        set.remove(&ix);
    }
}
