//! Wildcard title search.

use regex::{Regex, RegexBuilder};

use crate::error::{Error, Result};
use crate::model::{CitationNetwork, NetworkView};

/// Case-insensitive title pattern. `*` matches any run of characters and
/// the pattern must cover the whole title; a pattern without `*` matches
/// anywhere in the title.
#[derive(Debug, Clone)]
pub struct TitlePattern {
    regex: Regex,
}

impl TitlePattern {
    pub fn new(pattern: &str) -> Result<Self> {
        let pattern = pattern.trim();
        if pattern.is_empty() {
            return Err(Error::InvalidParameter("empty search pattern".into()));
        }
        let wrapped;
        let pattern = if pattern.contains('*') {
            pattern
        } else {
            wrapped = format!("*{pattern}*");
            &wrapped
        };
        let body: Vec<String> = pattern.split('*').map(regex::escape).collect();
        let regex = RegexBuilder::new(&format!("^{}$", body.join(".*")))
            .case_insensitive(true)
            .dot_matches_new_line(true)
            .build()
            .map_err(|e| Error::InvalidParameter(e.to_string()))?;
        Ok(TitlePattern { regex })
    }

    pub fn matches(&self, title: &str) -> bool {
        self.regex.is_match(title)
    }
}

/// Members of `view` whose title matches `pattern`, in index order.
pub fn search_titles(network: &CitationNetwork, view: &NetworkView, pattern: &str) -> Result<Vec<u32>> {
    let pattern = TitlePattern::new(pattern)?;
    Ok(view
        .members()
        .iter()
        .copied()
        .filter(|&ix| pattern.matches(&network.publication(ix).title))
        .collect())
}
