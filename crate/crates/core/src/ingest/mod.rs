//! Reading bibliographic data: tagged record exports with citation
//! matching, and the two-file pair format.

pub mod matching;
pub mod normalize;
pub mod pairs;
pub mod wos;

pub use matching::{match_citations, AmbiguousReference, MatchOptions, MatchOutcome, MatchReport};
pub use pairs::{parse_pair_files, write_network, PairData};
pub use wos::{parse_cited_reference, parse_wos, parse_wos_str, write_wos, CitedReference, ParsedExport, RawRecord};

use crate::error::Result;
use crate::model::{build_network, BuildOutcome};

/// A network built from a tagged export.
#[derive(Debug)]
pub struct WosLoad {
    pub build: BuildOutcome,
    pub parsed: ParsedExport,
    pub matching: MatchOutcome,
}

pub fn load_wos(text: &str, options: &MatchOptions) -> Result<WosLoad> {
    let parsed = parse_wos_str(text)?;
    let matching = match_citations(&parsed.records, options)?;
    let build = build_network(matching.publications.clone(), &matching.edges)?;
    Ok(WosLoad { build, parsed, matching })
}

/// A network built from pair files.
pub fn load_pairs(publications: &str, citations: &str) -> Result<BuildOutcome> {
    let data = parse_pair_files(publications, citations)?;
    crate::model::build_network_indexed(data.publications, data.edges)
}
