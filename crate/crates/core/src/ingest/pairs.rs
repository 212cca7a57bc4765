//! Two-file tab-separated network format.
//!
//! Publications file, header
//! `id	authors	title	source	year	doi	ext_cit` with an optional trailing
//! `complete_record` column (`true`/`false`, default `true`). Authors are
//! separated by `; `, the first being the first author. Empty `doi` and
//! empty or `-` `ext_cit` mean absent.
//!
//! Citations file, header `citing_id	cited_id`.
//!
//! UTF-8; LF or CRLF line endings.

use std::collections::HashMap;
use std::fmt::Write;

use crate::error::{Error, Result};
use crate::model::{CitationNetwork, Publication};

const PUBLICATION_HEADER: [&str; 7] = ["id", "authors", "title", "source", "year", "doi", "ext_cit"];
const CITATION_HEADER: [&str; 2] = ["citing_id", "cited_id"];

/// Publications in file order and citations as indices into them.
#[derive(Debug, Clone, PartialEq)]
pub struct PairData {
    pub publications: Vec<Publication>,
    pub edges: Vec<(u32, u32)>,
}

fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.split('\n')
        .enumerate()
        .map(|(i, l)| (i + 1, l.strip_suffix('\r').unwrap_or(l)))
        .filter(|(_, l)| !l.is_empty())
}

fn check_header(line: Option<(usize, &str)>, expected: &[&str], optional: Option<&str>) -> Result<bool> {
    let Some((n, line)) = line else {
        return Err(Error::format(1, format!("missing header `{}`", expected.join("\\t"))));
    };
    let line = line.strip_prefix('\u{feff}').unwrap_or(line);
    let cols: Vec<&str> = line.split('\t').map(str::trim).collect();
    if cols == expected {
        return Ok(false);
    }
    if let Some(extra) = optional {
        if cols.len() == expected.len() + 1 && cols[..expected.len()] == *expected && cols[expected.len()] == extra {
            return Ok(true);
        }
    }
    Err(Error::format(n, format!("missing header `{}`", expected.join("\\t"))))
}

pub fn parse_publications(text: &str) -> Result<Vec<Publication>> {
    let mut rows = lines(text);
    let with_complete = check_header(rows.next(), &PUBLICATION_HEADER, Some("complete_record"))?;
    let width = PUBLICATION_HEADER.len() + usize::from(with_complete);
    let mut out = Vec::new();
    for (n, line) in rows {
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != width {
            return Err(Error::format(n, format!("expected {width} columns, found {}", cols.len())));
        }
        let id = cols[0].trim();
        if id.is_empty() {
            return Err(Error::format(n, "empty id"));
        }
        let mut authors = cols[1].split(';').map(str::trim).filter(|a| !a.is_empty()).map(String::from);
        let year = cols[4]
            .trim()
            .parse::<i32>()
            .map_err(|_| Error::format(n, format!("year `{}` of `{id}` is not an integer", cols[4].trim())))?;
        let ext = cols[6].trim();
        let external_citations = match ext {
            "" | "-" => None,
            _ => Some(ext.parse::<u64>().map_err(|_| Error::format(n, format!("ext_cit `{ext}` of `{id}` is not a count")))?),
        };
        let complete_record = match with_complete.then(|| cols[7].trim()) {
            None | Some("true" | "1") => true,
            Some("false" | "0") => false,
            Some(other) => return Err(Error::format(n, format!("complete_record `{other}` is not a boolean"))),
        };
        let doi = cols[5].trim();
        out.push(Publication {
            id: id.to_string(),
            first_author: authors.next().unwrap_or_default(),
            co_authors: authors.collect(),
            title: cols[2].trim().to_string(),
            source: cols[3].trim().to_string(),
            year,
            doi: (!doi.is_empty()).then(|| doi.to_string()),
            external_citations,
            complete_record,
        });
    }
    Ok(out)
}

/// Citation rows resolved against `publications`. Rows naming an
/// undeclared id are rejected with their line number.
pub fn parse_citations(text: &str, publications: &[Publication]) -> Result<Vec<(u32, u32)>> {
    let mut index: HashMap<&str, u32> = HashMap::with_capacity(publications.len());
    for (i, p) in publications.iter().enumerate() {
        if index.insert(p.id.as_str(), i as u32).is_some() {
            return Err(Error::DuplicateId(p.id.clone()));
        }
    }
    let mut rows = lines(text);
    check_header(rows.next(), &CITATION_HEADER, None)?;
    let mut edges = Vec::new();
    for (n, line) in rows {
        let (citing, cited) = line
            .split_once('\t')
            .ok_or_else(|| Error::format(n, "expected 2 columns"))?;
        if cited.contains('\t') {
            return Err(Error::format(n, "expected 2 columns"));
        }
        let resolve = |id: &str| {
            let id = id.trim();
            index
                .get(id)
                .copied()
                .ok_or_else(|| Error::format(n, format!("unknown publication id `{id}`")))
        };
        edges.push((resolve(citing)?, resolve(cited)?));
    }
    Ok(edges)
}

pub fn parse_pair_files(publications: &str, citations: &str) -> Result<PairData> {
    let publications = parse_publications(publications)?;
    let edges = parse_citations(citations, &publications)?;
    Ok(PairData { publications, edges })
}

fn clean(field: &str) -> String {
    field.replace(['\t', '\n', '\r'], " ")
}

/// Publications file for `publications`; the `complete_record` column is
/// written only when some record is incomplete.
pub fn write_publications(publications: &[Publication]) -> String {
    let with_complete = publications.iter().any(|p| !p.complete_record);
    let mut out = PUBLICATION_HEADER.join("\t");
    if with_complete {
        out.push_str("\tcomplete_record");
    }
    out.push('\n');
    for p in publications {
        let authors: Vec<String> = p.authors().filter(|a| !a.is_empty()).map(clean).collect();
        let _ = write!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
            clean(&p.id),
            authors.join("; "),
            clean(&p.title),
            clean(&p.source),
            p.year,
            p.doi.as_deref().map(clean).unwrap_or_default(),
            p.external_citations.map(|c| c.to_string()).unwrap_or_default()
        );
        if with_complete {
            out.push_str(if p.complete_record { "\ttrue" } else { "\tfalse" });
        }
        out.push('\n');
    }
    out
}

pub fn write_citations<'a>(edges: impl IntoIterator<Item = (&'a str, &'a str)>) -> String {
    let mut out = CITATION_HEADER.join("\t");
    out.push('\n');
    for (a, b) in edges {
        let _ = writeln!(out, "{a}\t{b}");
    }
    out
}

/// Both files for a built network.
pub fn write_network(network: &CitationNetwork) -> (String, String) {
    (write_publications(network.publications()), write_citations(network.edges()))
}
