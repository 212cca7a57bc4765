//! Tagged plain-text bibliographic exports.
//!
//! A file is a sequence of records. Each field line starts with a two
//! character tag, a space, and the value; lines starting with three spaces
//! continue the previous field. `ER` ends a record and `EF` ends the file.
//! `FN` and `VR` header lines outside records are ignored, as are tags not
//! listed below.
//!
//! | tag | field |
//! |-----|-------|
//! | AU  | authors, `Last, Initials`, one per line |
//! | TI  | title |
//! | SO  | source |
//! | PY  | publication year |
//! | VL  | volume |
//! | BP  | beginning page |
//! | DI  | DOI |
//! | TC  | times cited |
//! | UT  | accession number |
//! | CR  | cited references, one per line |
//!
//! Continuation lines of single-valued fields are folded with a space. An
//! `AU` continuation line containing a comma starts a new author; one
//! without a comma is folded into the preceding author.

use std::io::BufRead;

use serde::{Deserialize, Serialize};

use super::normalize;
use crate::error::{Error, Result};

/// First and last line (1-based, inclusive) of a record in its source.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct LineSpan {
    pub first: usize,
    pub last: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct RawRecord {
    pub authors: Vec<String>,
    pub title: Option<String>,
    pub source: Option<String>,
    pub year: Option<i32>,
    pub volume: Option<String>,
    pub begin_page: Option<String>,
    pub doi: Option<String>,
    pub times_cited: Option<u64>,
    pub accession: Option<String>,
    /// Verbatim, in input order.
    pub cited_references: Vec<String>,
    pub span: LineSpan,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedRecord {
    pub span: LineSpan,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParsedExport {
    pub records: Vec<RawRecord>,
    pub skipped: Vec<SkippedRecord>,
}

impl ParsedExport {
    /// Indices of records without a publication year.
    pub fn year_absent(&self) -> Vec<usize> {
        (0..self.records.len()).filter(|&i| self.records[i].year.is_none()).collect()
    }
}

#[derive(Default)]
struct Pending {
    first: usize,
    fields: Vec<(String, Vec<String>)>,
    error: Option<String>,
}

impl Pending {
    fn finish(self, last: usize) -> std::result::Result<RawRecord, SkippedRecord> {
        let span = LineSpan { first: self.first, last };
        let skip = |reason: String| SkippedRecord { span, reason };
        if let Some(reason) = self.error {
            return Err(skip(reason));
        }
        let mut record = RawRecord { span, ..RawRecord::default() };
        for (tag, lines) in self.fields {
            let folded = || lines.join(" ");
            match tag.as_str() {
                "AU" => {
                    for line in lines {
                        match record.authors.last_mut() {
                            Some(prev) if !line.contains(',') => {
                                prev.push(' ');
                                prev.push_str(&line);
                            }
                            _ => record.authors.push(line),
                        }
                    }
                }
                "CR" => record.cited_references.extend(lines),
                "TI" => record.title = Some(folded()),
                "SO" => record.source = Some(folded()),
                "PY" => {
                    let value = folded();
                    record.year = Some(value.parse().map_err(|_| skip(format!("year `{value}` is not an integer")))?);
                }
                "VL" => record.volume = Some(folded()),
                "BP" => record.begin_page = Some(folded()),
                "DI" => record.doi = Some(folded()),
                "TC" => {
                    let value = folded();
                    record.times_cited =
                        Some(value.parse().map_err(|_| skip(format!("times cited `{value}` is not a count")))?);
                }
                "UT" => record.accession = Some(folded()),
                _ => {}
            }
        }
        if record.authors.is_empty() {
            return Err(skip("record has no authors".into()));
        }
        Ok(record)
    }
}

fn tag_of(line: &str) -> Option<(&str, &str)> {
    let bytes = line.as_bytes();
    let is_tag_char = |b: u8| b.is_ascii_uppercase() || b.is_ascii_digit();
    if bytes.len() >= 2 && bytes[0].is_ascii_uppercase() && is_tag_char(bytes[1]) && (bytes.len() == 2 || bytes[2] == b' ') {
        Some((&line[..2], line.get(3..).unwrap_or("").trim()))
    } else {
        None
    }
}

/// Parses an export. Malformed records are skipped and listed in
/// [`ParsedExport::skipped`].
pub fn parse_wos<R: BufRead>(reader: R) -> Result<ParsedExport> {
    let mut out = ParsedExport::default();
    let mut current: Option<Pending> = None;
    let mut line_no = 0;
    for line in reader.lines() {
        let line = line?;
        line_no += 1;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        let line = line.strip_prefix('\u{feff}').unwrap_or(line);
        if line.trim().is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("   ") {
            match current.as_mut() {
                Some(p) => {
                    if let Some((_, values)) = p.fields.last_mut() {
                        values.push(rest.trim().to_string());
                    }
                }
                None => out.skipped.push(SkippedRecord {
                    span: LineSpan { first: line_no, last: line_no },
                    reason: "continuation line outside a record".into(),
                }),
            }
            continue;
        }
        let Some((tag, value)) = tag_of(line) else {
            match current.as_mut() {
                Some(p) => {
                    p.error.get_or_insert_with(|| format!("unrecognized line {line_no}"));
                }
                None => out.skipped.push(SkippedRecord {
                    span: LineSpan { first: line_no, last: line_no },
                    reason: "unrecognized line outside a record".into(),
                }),
            }
            continue;
        };
        match tag {
            "EF" => break,
            "ER" => {
                if let Some(p) = current.take() {
                    match p.finish(line_no) {
                        Ok(r) => out.records.push(r),
                        Err(s) => out.skipped.push(s),
                    }
                }
            }
            "FN" | "VR" if current.is_none() => {}
            _ => {
                let p = current.get_or_insert_with(|| Pending { first: line_no, ..Pending::default() });
                p.fields.push((tag.to_string(), vec![value.to_string()]));
            }
        }
    }
    if let Some(p) = current {
        out.skipped.push(SkippedRecord {
            span: LineSpan { first: p.first, last: line_no },
            reason: "record is not terminated".into(),
        });
    }
    if out.records.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(out)
}

pub fn parse_wos_str(text: &str) -> Result<ParsedExport> {
    parse_wos(text.as_bytes())
}

fn push_field(out: &mut String, tag: &str, value: &str) {
    out.push_str(tag);
    out.push(' ');
    // Wrap long values on spaces so continuation lines get exercised.
    let mut width = 0;
    for (i, word) in value.split(' ').enumerate() {
        if i > 0 {
            if width + word.len() > 70 {
                out.push_str("\n   ");
                width = 0;
            } else {
                out.push(' ');
                width += 1;
            }
        }
        out.push_str(word);
        width += word.len();
    }
    out.push('\n');
}

fn push_lines(out: &mut String, tag: &str, values: &[String]) {
    for (i, v) in values.iter().enumerate() {
        out.push_str(if i == 0 { tag } else { "  " });
        out.push(' ');
        out.push_str(v);
        out.push('\n');
    }
}

/// Serializes records in the format read by [`parse_wos`].
pub fn write_wos(records: &[RawRecord]) -> String {
    let mut out = String::from("FN Exported records\nVR 1.0\n");
    for r in records {
        push_lines(&mut out, "AU", &r.authors);
        for (tag, value) in [
            ("TI", r.title.clone()),
            ("SO", r.source.clone()),
            ("PY", r.year.map(|y| y.to_string())),
            ("VL", r.volume.clone()),
            ("BP", r.begin_page.clone()),
            ("DI", r.doi.clone()),
            ("TC", r.times_cited.map(|c| c.to_string())),
            ("UT", r.accession.clone()),
        ] {
            if let Some(v) = value {
                push_field(&mut out, tag, &v);
            }
        }
        push_lines(&mut out, "CR", &r.cited_references);
        out.push_str("ER\n\n");
    }
    out.push_str("EF\n");
    out
}

/// A cited reference split into the fields used for matching.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CitedReference {
    pub first_author: Option<String>,
    pub year: Option<i32>,
    pub volume: Option<String>,
    pub page: Option<String>,
    pub doi: Option<String>,
    pub source: Option<String>,
    pub raw: String,
}

impl CitedReference {
    /// Normalized (author, year, volume, page) when all four are present.
    pub fn tuple_key(&self) -> Option<(String, i32, String, String)> {
        Some((
            normalize::author_key(self.first_author.as_deref()?)?,
            self.year?,
            normalize::digits(self.volume.as_deref()?)?,
            normalize::digits(self.page.as_deref()?)?,
        ))
    }
}

/// Splits `Smith J, 2005, P NATL ACAD SCI USA, V102, P16569, DOI 10.1/x`.
/// For multi-author references the first listed name is the author.
pub fn parse_cited_reference(raw: &str) -> CitedReference {
    let text = raw.trim();
    let (body, doi) = match text.find("DOI ") {
        Some(pos) if pos == 0 || text[..pos].ends_with(", ") => {
            let value = text[pos + 4..].trim().trim_start_matches('[');
            let first = value.split([',', ']']).next().unwrap_or("").trim();
            (text[..pos].trim_end_matches([',', ' ']), normalize::doi(first))
        }
        _ => (text, None),
    };
    let mut reference = CitedReference {
        first_author: None,
        year: None,
        volume: None,
        page: None,
        doi,
        source: None,
        raw: raw.to_string(),
    };
    for (i, part) in body.split(',').map(str::trim).enumerate() {
        if part.is_empty() {
            continue;
        }
        let year = (part.len() == 4 && part.bytes().all(|b| b.is_ascii_digit())).then(|| part.parse::<i32>().ok()).flatten();
        if i == 0 && year.is_none() {
            if !part.starts_with('[') && !part.starts_with('*') {
                reference.first_author = Some(part.to_string());
            }
        } else if year.is_some() && reference.year.is_none() {
            reference.year = year;
        } else if reference.volume.is_none() && is_marked_number(part, 'V') {
            reference.volume = Some(part[1..].to_string());
        } else if reference.page.is_none() && is_marked_number(part, 'P') {
            reference.page = Some(part[1..].to_string());
        } else if reference.source.is_none() {
            reference.source = Some(part.to_string());
        }
    }
    reference
}

/// `V12`, `P345`, `PE1234`: marker letter followed by a token containing a digit.
fn is_marked_number(part: &str, marker: char) -> bool {
    part.starts_with(marker) && part.len() > 1 && !part[1..].contains(' ') && part[1..].bytes().any(|b| b.is_ascii_digit())
}
