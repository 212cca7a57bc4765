//! Session archives: a gzip-compressed tar holding the pair files, the
//! current attribute table and the view history as ordered id sets.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::sync::Arc;

use citnet_core::explore::Session;
use citnet_core::ingest::{self, pairs};
use citnet_core::model::AttributeState;
use citnet_core::{CitationNetwork, NetworkView};
use flate2::read::GzDecoder;
use flate2::write::GzEncoder;
use flate2::Compression;
use serde::{Deserialize, Serialize};

use crate::error::{ApiError, ApiResult};

const ARCHIVE_VERSION: u32 = 1;
const PUBLICATIONS: &str = "publications.tsv";
const CITATIONS: &str = "citations.tsv";
const ATTRIBUTES: &str = "attributes.tsv";
const HISTORY: &str = "history.json";

#[derive(Debug, Serialize, Deserialize)]
struct HistoryDoc {
    version: u32,
    cursor: usize,
    views: Vec<ViewDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ViewDoc {
    members: Vec<String>,
    marked: Vec<String>,
    selected: Vec<String>,
    groups: BTreeMap<String, u32>,
}

fn view_doc(network: &CitationNetwork, view: &NetworkView) -> ViewDoc {
    let ids = |set: &mut dyn Iterator<Item = u32>| set.map(|ix| network.id(ix).to_string()).collect::<Vec<_>>();
    let attrs = view.attributes();
    ViewDoc {
        members: ids(&mut view.members().iter().copied()),
        marked: ids(&mut attrs.marked.iter().copied()),
        selected: ids(&mut attrs.selected.iter().copied()),
        groups: attrs.groups.iter().map(|(&ix, &g)| (network.id(ix).to_string(), g)).collect(),
    }
}

fn attribute_table(network: &CitationNetwork, view: &NetworkView) -> String {
    let mut out = String::from("id\tmarked\tselected\tgroup\n");
    let attrs = view.attributes();
    for &ix in view.members() {
        let group = attrs.group(ix).map(|g| g.to_string()).unwrap_or_default();
        out.push_str(&format!("{}\t{}\t{}\t{group}\n", network.id(ix), attrs.is_marked(ix), attrs.is_selected(ix)));
    }
    out
}

fn append(builder: &mut tar::Builder<impl Write>, name: &str, data: &[u8]) -> std::io::Result<()> {
    let mut header = tar::Header::new_gnu();
    header.set_size(data.len() as u64);
    header.set_mode(0o644);
    header.set_mtime(0);
    header.set_cksum();
    builder.append_data(&mut header, name, data)
}

/// Serializes a session. Output is byte-identical for identical sessions.
pub fn save(session: &Session) -> ApiResult<Vec<u8>> {
    let network = session.network();
    let (pubs, cites) = pairs::write_network(network);
    let history = HistoryDoc {
        version: ARCHIVE_VERSION,
        cursor: session.cursor(),
        views: session.history().iter().map(|v| view_doc(network, v)).collect(),
    };
    let history = serde_json::to_vec_pretty(&history).map_err(|e| ApiError::Archive(e.to_string()))?;
    let attributes = attribute_table(network, session.current());

    let encoder = GzEncoder::new(Vec::new(), Compression::default());
    let mut builder = tar::Builder::new(encoder);
    let io = |e: std::io::Error| ApiError::Archive(e.to_string());
    append(&mut builder, PUBLICATIONS, pubs.as_bytes()).map_err(io)?;
    append(&mut builder, CITATIONS, cites.as_bytes()).map_err(io)?;
    append(&mut builder, ATTRIBUTES, attributes.as_bytes()).map_err(io)?;
    append(&mut builder, HISTORY, &history).map_err(io)?;
    builder.into_inner().map_err(io)?.finish().map_err(io)
}

/// Rebuilds a session from [`save`] output.
pub fn restore(bytes: &[u8]) -> ApiResult<Session> {
    let mut files: BTreeMap<String, String> = BTreeMap::new();
    let mut archive = tar::Archive::new(GzDecoder::new(bytes));
    let io = |e: std::io::Error| ApiError::Archive(e.to_string());
    for entry in archive.entries().map_err(io)? {
        let mut entry = entry.map_err(io)?;
        let name = entry.path().map_err(io)?.to_string_lossy().into_owned();
        let mut text = String::new();
        entry.read_to_string(&mut text).map_err(io)?;
        files.insert(name, text);
    }
    let file = |name: &str| files.get(name).ok_or_else(|| ApiError::Archive(format!("missing `{name}`")));
    let build = ingest::load_pairs(file(PUBLICATIONS)?, file(CITATIONS)?)?;
    let history: HistoryDoc = serde_json::from_str(file(HISTORY)?).map_err(|e| ApiError::Archive(e.to_string()))?;
    if history.version != ARCHIVE_VERSION {
        return Err(ApiError::Archive(format!("unsupported archive version {}", history.version)));
    }
    let network = Arc::new(build.network);
    let mut views = Vec::with_capacity(history.views.len());
    for doc in history.views {
        let resolve = |ids: &[String]| network.resolve_ids(ids);
        let attributes = AttributeState {
            marked: resolve(&doc.marked)?.into_iter().collect(),
            selected: resolve(&doc.selected)?.into_iter().collect(),
            groups: doc
                .groups
                .iter()
                .map(|(id, &g)| network.require(id).map(|ix| (ix, g)))
                .collect::<citnet_core::Result<_>>()?,
        };
        views.push(NetworkView::new(&network, resolve(&doc.members)?, attributes));
    }
    Ok(Session::from_history(network, views, history.cursor)?)
}
