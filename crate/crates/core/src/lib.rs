//! Construction, exploration, analysis and historiograph layout of
//! publication-level citation networks.

pub mod analytics;
pub mod dag;
pub mod error;
pub mod explore;
pub mod graph;
pub mod ingest;
pub mod layout;
pub mod model;
pub mod search;
pub mod synth;

pub use error::{Error, Result};
pub use graph::Digraph;
pub use model::{build_network, build_network_indexed, CitationNetwork, NetworkView, Publication};
