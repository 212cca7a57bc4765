//! Citation matching: turns parsed records and their cited references into
//! publications and citation pairs.
//!
//! A reference is matched by DOI when it carries one that some record also
//! carries. Otherwise it needs an exact match on normalized first author,
//! year, volume and beginning page. References that resolve to several
//! records are left unmatched and reported. Unmatched references cited by
//! enough distinct records become incomplete-record publications.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::normalize;
use super::wos::{parse_cited_reference, RawRecord};
use crate::error::{Error, Result};
use crate::model::Publication;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct MatchOptions {
    /// Distinct citing records needed before an unmatched reference
    /// becomes an incomplete-record publication.
    pub incomplete_min_citations: usize,
}

impl Default for MatchOptions {
    fn default() -> Self {
        MatchOptions { incomplete_min_citations: 10 }
    }
}

/// Counts over all cited references of the matched records.
/// `matched_by_doi + matched_by_tuple + admitted_incomplete + unmatched`
/// equals `total_references`; `ambiguous` is part of `unmatched`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchReport {
    pub records: usize,
    pub records_without_year: usize,
    pub total_references: usize,
    pub matched_by_doi: usize,
    pub matched_by_tuple: usize,
    pub admitted_incomplete: usize,
    pub unmatched: usize,
    pub ambiguous: usize,
    pub incomplete_publications: usize,
    pub edges: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmbiguousReference {
    pub citing: String,
    pub reference: String,
    pub candidates: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchOutcome {
    pub publications: Vec<Publication>,
    /// Sorted and free of duplicates.
    pub edges: Vec<(String, String)>,
    pub report: MatchReport,
    pub ambiguous: Vec<AmbiguousReference>,
}

type TupleKey = (String, i32, String, String);

fn record_tuple(r: &RawRecord) -> Option<TupleKey> {
    Some((
        normalize::author_key(r.authors.first()?)?,
        r.year?,
        normalize::digits(r.volume.as_deref()?)?,
        normalize::digits(r.begin_page.as_deref()?)?,
    ))
}

fn composite_key(author: Option<&str>, year: Option<i32>, volume: Option<&str>, page: Option<&str>) -> String {
    format!(
        "{}|{}|{}|{}",
        author.and_then(normalize::author_key).unwrap_or_default(),
        year.map(|y| y.to_string()).unwrap_or_default(),
        volume.and_then(normalize::digits).unwrap_or_default(),
        page.and_then(normalize::digits).unwrap_or_default()
    )
}

/// Orders records by content so results do not depend on input order.
fn canonical_order(records: &[RawRecord]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..records.len()).collect();
    order.sort_by(|&a, &b| {
        let key = |r: &RawRecord| {
            (
                r.accession.clone(),
                r.doi.as_deref().and_then(normalize::doi),
                r.authors.clone(),
                r.year,
                r.volume.clone(),
                r.begin_page.clone(),
                r.title.clone(),
                r.source.clone(),
                r.times_cited,
                r.cited_references.clone(),
            )
        };
        key(&records[a]).cmp(&key(&records[b]))
    });
    order
}

/// Unique with `#2`, `#3`, ... appended on collision.
fn unique_id(base: String, taken: &mut HashSet<String>) -> String {
    if taken.insert(base.clone()) {
        return base;
    }
    (2..)
        .map(|k| format!("{base}#{k}"))
        .find(|candidate| taken.insert(candidate.clone()))
        .expect("unbounded suffixes")
}

struct Pending {
    citing: BTreeSet<usize>,
    references: Vec<(usize, String)>,
}

pub fn match_citations(records: &[RawRecord], options: &MatchOptions) -> Result<MatchOutcome> {
    if options.incomplete_min_citations < 1 {
        return Err(Error::InvalidParameter("incomplete_min_citations must be at least 1".into()));
    }
    let mut report = MatchReport::default();
    let kept: Vec<&RawRecord> = canonical_order(records)
        .into_iter()
        .map(|i| &records[i])
        .filter(|r| {
            let has_year = r.year.is_some();
            report.records_without_year += usize::from(!has_year);
            has_year
        })
        .collect();
    report.records = kept.len();

    let mut taken = HashSet::new();
    let mut publications = Vec::with_capacity(kept.len());
    for r in &kept {
        let doi = r.doi.as_deref().and_then(normalize::doi);
        let base = match (&r.accession, &doi) {
            (Some(ut), _) if !ut.trim().is_empty() => ut.trim().to_string(),
            (_, Some(doi)) => format!("doi:{doi}"),
            _ => composite_key(r.authors.first().map(String::as_str), r.year, r.volume.as_deref(), r.begin_page.as_deref()),
        };
        let mut authors = r.authors.iter().map(|a| normalize::display_author(a));
        publications.push(Publication {
            id: unique_id(base, &mut taken),
            first_author: authors.next().unwrap_or_default(),
            co_authors: authors.collect(),
            title: r.title.clone().unwrap_or_default(),
            source: r.source.clone().unwrap_or_default(),
            year: r.year.expect("filtered"),
            doi,
            external_citations: r.times_cited,
            complete_record: true,
        });
    }

    let mut by_doi: HashMap<&str, Vec<usize>> = HashMap::new();
    let mut by_tuple: HashMap<TupleKey, Vec<usize>> = HashMap::new();
    for (i, (r, p)) in kept.iter().zip(&publications).enumerate() {
        if let Some(doi) = p.doi.as_deref() {
            by_doi.entry(doi).or_default().push(i);
        }
        if let Some(key) = record_tuple(r) {
            by_tuple.entry(key).or_default().push(i);
        }
    }

    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut ambiguous = Vec::new();
    let mut pending: BTreeMap<String, Pending> = BTreeMap::new();
    let mut pending_refs: BTreeMap<String, super::wos::CitedReference> = BTreeMap::new();
    for (citing, r) in kept.iter().enumerate() {
        for raw in &r.cited_references {
            report.total_references += 1;
            let reference = parse_cited_reference(raw);
            let doi_hits = reference.doi.as_deref().and_then(|d| by_doi.get(d));
            let (hits, by_doi_route) = match doi_hits {
                Some(hits) => (Some(hits), true),
                None => (reference.tuple_key().and_then(|k| by_tuple.get(&k)), false),
            };
            match hits.map(Vec::as_slice) {
                Some([cited]) => {
                    if by_doi_route {
                        report.matched_by_doi += 1;
                    } else {
                        report.matched_by_tuple += 1;
                    }
                    edges.insert((citing, *cited));
                }
                Some(candidates) => {
                    report.ambiguous += 1;
                    report.unmatched += 1;
                    ambiguous.push(AmbiguousReference {
                        citing: publications[citing].id.clone(),
                        reference: raw.clone(),
                        candidates: candidates.iter().map(|&c| publications[c].id.clone()).collect(),
                    });
                }
                None => {
                    let key = match (&reference.doi, reference.year) {
                        (Some(doi), Some(_)) => Some(format!("doi:{doi}")),
                        (None, Some(year)) if reference.first_author.is_some() => Some(composite_key(
                            reference.first_author.as_deref(),
                            Some(year),
                            reference.volume.as_deref(),
                            reference.page.as_deref(),
                        )),
                        _ => None,
                    };
                    match key {
                        Some(key) => {
                            let entry = pending.entry(key.clone()).or_insert_with(|| Pending {
                                citing: BTreeSet::new(),
                                references: Vec::new(),
                            });
                            entry.citing.insert(citing);
                            entry.references.push((citing, raw.clone()));
                            let slot = pending_refs.entry(key).or_insert_with(|| reference.clone());
                            if reference.raw < slot.raw {
                                *slot = reference;
                            }
                        }
                        None => report.unmatched += 1,
                    }
                }
            }
        }
    }

    for (key, entry) in pending {
        if entry.citing.len() < options.incomplete_min_citations {
            report.unmatched += entry.references.len();
            continue;
        }
        let reference = &pending_refs[&key];
        let index = publications.len();
        publications.push(Publication {
            id: unique_id(key, &mut taken),
            first_author: reference.first_author.as_deref().map(normalize::display_author).unwrap_or_default(),
            co_authors: Vec::new(),
            title: String::new(),
            source: reference.source.clone().unwrap_or_default(),
            year: reference.year.expect("admitted keys carry a year"),
            doi: reference.doi.clone(),
            external_citations: None,
            complete_record: false,
        });
        report.incomplete_publications += 1;
        report.admitted_incomplete += entry.references.len();
        for citing in entry.citing {
            edges.insert((citing, index));
        }
    }

    let mut edges: Vec<(String, String)> = edges
        .into_iter()
        .map(|(a, b)| (publications[a].id.clone(), publications[b].id.clone()))
        .collect();
    edges.sort_unstable();
    report.edges = edges.len();
    publications.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(MatchOutcome { publications, edges, report, ambiguous })
}
