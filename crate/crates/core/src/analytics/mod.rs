//! Components, clustering, core publications and path queries.
//!
//! The algorithms operate on a [`Digraph`]; [`Subnetwork`] ties such a graph
//! to a set of publications of the full network so results can be reported
//! by publication id.

pub mod clustering;
pub mod components;
pub mod cores;
pub mod paths;

use std::borrow::Cow;

pub use clustering::{cluster, quality, relatedness, ClusterParams, Partition, RelatednessMatrix, SmallClusterPolicy};
pub use components::{connected_components, largest_component};
pub use cores::core_publications;
pub use paths::{extreme_path, PathKind, PathQuery, PathSet, DEFAULT_MAX_PATHS};

use crate::graph::Digraph;
use crate::model::{CitationNetwork, NetworkView};

/// Induced subgraph of the full network over a sorted member list. Local
/// node `i` is `members[i]`.
#[derive(Debug, Clone)]
pub struct Subnetwork<'a> {
    network: &'a CitationNetwork,
    members: Cow<'a, [u32]>,
    graph: Cow<'a, Digraph>,
}

impl<'a> Subnetwork<'a> {
    pub fn full(network: &'a CitationNetwork) -> Self {
        Subnetwork {
            network,
            members: Cow::Owned(network.all_indices()),
            graph: Cow::Borrowed(network.graph()),
        }
    }

    pub fn of_view(network: &'a CitationNetwork, view: &'a NetworkView) -> Self {
        if view.len() == network.len() {
            return Subnetwork {
                network,
                members: Cow::Borrowed(view.members()),
                graph: Cow::Borrowed(network.graph()),
            };
        }
        Subnetwork {
            network,
            members: Cow::Borrowed(view.members()),
            graph: Cow::Owned(network.graph().induced(view.members())),
        }
    }

    /// `members` must be sorted and unique.
    pub fn of_members(network: &'a CitationNetwork, members: Vec<u32>) -> Self {
        let graph = network.graph().induced(&members);
        Subnetwork {
            network,
            members: Cow::Owned(members),
            graph: Cow::Owned(graph),
        }
    }

    pub fn network(&self) -> &'a CitationNetwork {
        self.network
    }

    pub fn graph(&self) -> &Digraph {
        &self.graph
    }

    pub fn members(&self) -> &[u32] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Full-network index of local node `local`.
    pub fn global(&self, local: u32) -> u32 {
        self.members[local as usize]
    }

    pub fn local(&self, global: u32) -> Option<u32> {
        self.members.binary_search(&global).ok().map(|i| i as u32)
    }

    pub fn id(&self, local: u32) -> &'a str {
        self.network.id(self.global(local))
    }

    pub fn to_global(&self, locals: &[u32]) -> Vec<u32> {
        locals.iter().map(|&l| self.global(l)).collect()
    }
}
