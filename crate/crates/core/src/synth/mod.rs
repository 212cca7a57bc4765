//! Deterministic synthetic data: random networks for property checks,
//! fixtures with known answers, and large networks for load testing.

pub mod corpus;
pub mod random;
pub mod scale;
pub mod workflow;

pub use corpus::{matching_corpus, MatchingCorpus};
pub use random::{random_dag, random_dag_edges, random_digraph, random_network, shuffled_dag, two_blocks};
pub use scale::{scale_network, ScaleNetwork, ScaleParams};
pub use workflow::{workflow_fixture, WorkflowFixture, WorkflowManifest};
