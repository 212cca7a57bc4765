//! Local HTTP service exposing exploration sessions over citation networks.
//!
//! Every route lives under `/v1`. Bodies are JSON except the raw export and
//! archive uploads. Mutations answer with the new state counts.

pub mod archive;
pub mod dto;
pub mod error;

use std::collections::HashMap;
use std::net::SocketAddr;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use axum::body::Bytes;
use axum::extract::rejection::JsonRejection;
use axum::extract::{FromRequest, Path, Query, Request, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use citnet_core::analytics::{connected_components, extreme_path, ClusterParams, PathQuery, Subnetwork, DEFAULT_MAX_PATHS};
use citnet_core::explore::{ExpansionSpec, NavDirection, Navigation, SelectionSpec, Session};
use citnet_core::ingest::{self, MatchOptions};
use citnet_core::layout::{compose_frame, render_svg, LayoutFrame};
use citnet_core::model::{AttributeChange, BuildOutcome};
use citnet_core::search::search_titles;
use citnet_core::{CitationNetwork, NetworkView};
use serde::de::DeserializeOwned;
use tokio::sync::RwLock;

use dto::*;
pub use error::{ApiError, ApiResult};

/// One exploration session. Reads share the lock; mutations take it
/// exclusively, so they apply in arrival order.
struct SessionSlot {
    session: Session,
    load: LoadSummary,
    /// Bumped by every mutation; a cached frame is valid only for the
    /// revision it was computed at.
    revision: u64,
    frame: Mutex<Option<CachedFrame>>,
}

struct CachedFrame {
    revision: u64,
    key: String,
    frame: Arc<LayoutFrame>,
}

#[derive(Clone, Default)]
pub struct AppState {
    sessions: Arc<RwLock<HashMap<String, Arc<RwLock<SessionSlot>>>>>,
    next_id: Arc<AtomicU64>,
}

impl AppState {
    async fn slot(&self, id: &str) -> ApiResult<Arc<RwLock<SessionSlot>>> {
        self.sessions.read().await.get(id).cloned().ok_or_else(|| ApiError::UnknownSession(id.to_string()))
    }

    async fn insert(&self, session: Session, load: LoadSummary) -> (String, StateDto) {
        let id = format!("s{}", self.next_id.fetch_add(1, Ordering::Relaxed) + 1);
        let state = StateDto::of(&id, &session);
        let slot = SessionSlot { session, load, revision: 0, frame: Mutex::new(None) };
        self.sessions.write().await.insert(id.clone(), Arc::new(RwLock::new(slot)));
        (id, state)
    }

    /// Runs a mutation under the session's write lock.
    async fn mutate<T>(&self, id: &str, f: impl FnOnce(&mut Session) -> ApiResult<T>) -> ApiResult<(T, StateDto)> {
        let slot = self.slot(id).await?;
        let mut slot = slot.write().await;
        let out = f(&mut slot.session)?;
        slot.revision += 1;
        Ok((out, StateDto::of(id, &slot.session)))
    }
}

/// JSON body whose rejections are reported as 400.
pub struct Body<T>(pub T);

impl<S: Send + Sync, T: DeserializeOwned> FromRequest<S> for Body<T> {
    type Rejection = ApiError;

    async fn from_request(req: Request, state: &S) -> Result<Self, Self::Rejection> {
        Json::<T>::from_request(req, state)
            .await
            .map(|Json(v)| Body(v))
            .map_err(|e: JsonRejection| ApiError::BadRequest(e.body_text()))
    }
}

/// Query string whose rejections are reported as 400.
pub struct Params<T>(pub T);

impl<S: Send + Sync, T: DeserializeOwned> axum::extract::FromRequestParts<S> for Params<T> {
    type Rejection = ApiError;

    async fn from_request_parts(parts: &mut axum::http::request::Parts, state: &S) -> Result<Self, Self::Rejection> {
        Query::<T>::from_request_parts(parts, state)
            .await
            .map(|Query(v)| Params(v))
            .map_err(|e| ApiError::BadRequest(e.body_text()))
    }
}

pub fn router(state: AppState) -> Router {
    let session = Router::new()
        .route("/", get(get_state).delete(delete_session))
        .route("/report", get(get_report))
        .route("/archive", get(get_archive))
        .route("/publications", get(list_publications))
        .route("/publications/{pid}", get(get_publication))
        .route("/frame", get(get_frame))
        .route("/attributes", post(post_attributes))
        .route("/mark", post(post_mark))
        .route("/select", post(post_select))
        .route("/drill", post(post_drill))
        .route("/remove", post(post_remove))
        .route("/expand", post(post_expand))
        .route("/cluster", post(post_cluster))
        .route("/cores", post(post_cores))
        .route("/back", post(post_back))
        .route("/forward", post(post_forward))
        .route("/path", get(get_path))
        .route("/components", get(get_components));
    Router::new()
        .route("/v1/sessions", post(create_session))
        .route("/v1/sessions/wos", post(create_from_wos))
        .route("/v1/sessions/archive", post(create_from_archive))
        .nest("/v1/sessions/{sid}", session)
        .with_state(state)
}

/// Serves until the listener fails.
pub async fn serve(addr: SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(AppState::default())).await
}

fn summary(format: &str, build: &BuildOutcome) -> LoadSummary {
    let mut dropped = std::collections::BTreeMap::new();
    for d in &build.dropped {
        *dropped.entry(d.reason.as_str().to_string()).or_insert(0) += 1;
    }
    LoadSummary { format: format.to_string(), dropped, ..LoadSummary::default() }
}

fn load_wos(text: &str, min_citations: Option<usize>) -> ApiResult<(Session, LoadSummary)> {
    let mut options = MatchOptions::default();
    if let Some(m) = min_citations {
        options.incomplete_min_citations = m;
    }
    let load = ingest::load_wos(text, &options)?;
    let mut summary = summary("wos", &load.build);
    summary.skipped_records = load.parsed.skipped.len();
    summary.matching = Some(load.matching.report.clone());
    Ok((Session::new(Arc::new(load.build.network)), summary))
}

async fn created(state: &AppState, session: Session, load: LoadSummary) -> Response {
    let (id, dto) = state.insert(session, load.clone()).await;
    (StatusCode::CREATED, Json(CreateResponse { session: id, state: dto, load })).into_response()
}

async fn create_session(State(state): State<AppState>, Body(req): Body<CreateRequest>) -> ApiResult<Response> {
    let (session, load) = match req {
        CreateRequest::Pairs { publications, citations } => {
            let build = ingest::load_pairs(&publications, &citations)?;
            let load = summary("pairs", &build);
            (Session::new(Arc::new(build.network)), load)
        }
        CreateRequest::Wos { text, incomplete_min_citations } => load_wos(&text, incomplete_min_citations)?,
    };
    Ok(created(&state, session, load).await)
}

#[derive(serde::Deserialize)]
struct WosUpload {
    incomplete_min_citations: Option<usize>,
}

async fn create_from_wos(State(state): State<AppState>, Params(q): Params<WosUpload>, body: Bytes) -> ApiResult<Response> {
    let text = std::str::from_utf8(&body).map_err(|e| ApiError::BadRequest(format!("export is not UTF-8: {e}")))?;
    let (session, load) = load_wos(text, q.incomplete_min_citations)?;
    Ok(created(&state, session, load).await)
}

async fn create_from_archive(State(state): State<AppState>, body: Bytes) -> ApiResult<Response> {
    let session = archive::restore(&body)?;
    let load = LoadSummary { format: "archive".into(), ..LoadSummary::default() };
    Ok(created(&state, session, load).await)
}

async fn get_state(State(state): State<AppState>, Path(sid): Path<String>) -> ApiResult<Json<StateDto>> {
    let slot = state.slot(&sid).await?;
    let slot = slot.read().await;
    Ok(Json(StateDto::of(&sid, &slot.session)))
}

async fn delete_session(State(state): State<AppState>, Path(sid): Path<String>) -> ApiResult<StatusCode> {
    match state.sessions.write().await.remove(&sid) {
        Some(_) => Ok(StatusCode::NO_CONTENT),
        None => Err(ApiError::UnknownSession(sid)),
    }
}

async fn get_report(State(state): State<AppState>, Path(sid): Path<String>) -> ApiResult<Json<LoadSummary>> {
    let slot = state.slot(&sid).await?;
    let slot = slot.read().await;
    Ok(Json(slot.load.clone()))
}

async fn get_archive(State(state): State<AppState>, Path(sid): Path<String>) -> ApiResult<Response> {
    let slot = state.slot(&sid).await?;
    let bytes = archive::save(&slot.read().await.session)?;
    Ok(([(header::CONTENT_TYPE, "application/gzip")], bytes).into_response())
}

fn publication_dto(network: &CitationNetwork, view: &NetworkView, ix: u32) -> PublicationDto {
    let p = network.publication(ix);
    let attrs = view.attributes();
    PublicationDto {
        id: p.id.clone(),
        label: p.label().to_string(),
        authors: p.authors().map(str::to_string).collect(),
        title: p.title.clone(),
        source: p.source.clone(),
        year: p.year,
        doi: p.doi.clone(),
        external_citations: p.external_citations,
        internal_citations: network.internal_citations(ix),
        complete_record: p.complete_record,
        member: view.contains(ix),
        marked: attrs.is_marked(ix),
        selected: attrs.is_selected(ix),
        group: attrs.group(ix),
    }
}

async fn get_publication(State(state): State<AppState>, Path((sid, pid)): Path<(String, String)>) -> ApiResult<Json<PublicationDto>> {
    let slot = state.slot(&sid).await?;
    let slot = slot.read().await;
    let network = slot.session.network();
    let ix = network.require(&pid)?;
    Ok(Json(publication_dto(network, slot.session.current(), ix)))
}

/// Members of the current network, most cited first, optionally filtered
/// by a title pattern.
async fn list_publications(State(state): State<AppState>, Path(sid): Path<String>, Params(q): Params<ListQuery>) -> ApiResult<Json<ListResponse>> {
    let slot = state.slot(&sid).await?;
    let slot = slot.read().await;
    let network = slot.session.network();
    let view = slot.session.current();
    let mut members = match q.search.as_deref().filter(|s| !s.is_empty()) {
        Some(pattern) => search_titles(network, view, pattern)?,
        None => view.members().to_vec(),
    };
    members.sort_by(|&a, &b| {
        let (pa, pb) = (network.publication(a), network.publication(b));
        network
            .internal_citations(b)
            .cmp(&network.internal_citations(a))
            .then(pa.year.cmp(&pb.year))
            .then(pa.id.cmp(&pb.id))
    });
    let offset = q.offset.unwrap_or(0);
    let limit = q.limit.unwrap_or(usize::MAX);
    let attrs = view.attributes();
    let items = members
        .iter()
        .skip(offset)
        .take(limit)
        .map(|&ix| {
            let p = network.publication(ix);
            ListItem {
                id: p.id.clone(),
                label: p.label().to_string(),
                title: p.title.clone(),
                year: p.year,
                internal_citations: network.internal_citations(ix),
                marked: attrs.is_marked(ix),
                selected: attrs.is_selected(ix),
                group: attrs.group(ix),
            }
        })
        .collect();
    Ok(Json(ListResponse { total: members.len(), offset, items }))
}

async fn get_frame(State(state): State<AppState>, Path(sid): Path<String>, Params(q): Params<FrameQuery>) -> ApiResult<Response> {
    let svg = match q.format.as_deref() {
        None | Some("json") => false,
        Some("svg") => true,
        Some(other) => return Err(ApiError::BadRequest(format!("unknown frame format `{other}`"))),
    };
    let params = q.params();
    params.validate()?;
    let key = serde_json::to_string(&params).expect("params serialize");
    let slot = state.slot(&sid).await?;
    let (network, view, revision) = {
        let guard = slot.read().await;
        let cache = guard.frame.lock().expect("frame cache lock");
        if let Some(hit) = cache.as_ref().filter(|c| c.revision == guard.revision && c.key == key) {
            return Ok(frame_response(&hit.frame, svg));
        }
        (guard.session.network().clone(), guard.session.current().clone(), guard.revision)
    };
    let compose_params = params.clone();
    let frame = tokio::task::spawn_blocking(move || compose_frame(&network, &view, &compose_params))
        .await
        .map_err(|e| ApiError::BadRequest(format!("layout task failed: {e}")))??;
    let frame = Arc::new(frame);
    let guard = slot.read().await;
    if guard.revision == revision {
        *guard.frame.lock().expect("frame cache lock") = Some(CachedFrame { revision, key, frame: frame.clone() });
    }
    Ok(frame_response(&frame, svg))
}

fn frame_response(frame: &LayoutFrame, svg: bool) -> Response {
    if svg {
        ([(header::CONTENT_TYPE, "image/svg+xml")], render_svg(frame)).into_response()
    } else {
        Json(frame).into_response()
    }
}

#[derive(serde::Deserialize)]
struct AttributesRequest {
    changes: Vec<AttributeChange>,
}

async fn post_attributes(State(state): State<AppState>, Path(sid): Path<String>, Body(req): Body<AttributesRequest>) -> ApiResult<Json<StateEnvelope>> {
    let ((), dto) = state.mutate(&sid, |s| s.update_attributes(&req.changes).map(|_| ()).map_err(Into::into)).await?;
    Ok(Json(StateEnvelope { state: dto }))
}

async fn post_mark(State(state): State<AppState>, Path(sid): Path<String>, Body(req): Body<MarkRequest>) -> ApiResult<Json<StateEnvelope>> {
    let ((), dto) = state
        .mutate(&sid, |s| {
            let mut changes = Vec::new();
            if req.exclusive {
                let network = s.network().clone();
                changes.extend(s.current().attributes().marked.iter().map(|&ix| AttributeChange::Marked { id: network.id(ix).to_string(), value: false }));
            }
            changes.extend(req.ids.iter().map(|id| AttributeChange::Marked { id: id.clone(), value: req.value }));
            s.update_attributes(&changes)?;
            Ok(())
        })
        .await?;
    Ok(Json(StateEnvelope { state: dto }))
}

async fn post_select(State(state): State<AppState>, Path(sid): Path<String>, Body(spec): Body<SelectionSpec>) -> ApiResult<Json<StateEnvelope>> {
    let ((), dto) = state.mutate(&sid, |s| s.select(&spec).map(|_| ()).map_err(Into::into)).await?;
    Ok(Json(StateEnvelope { state: dto }))
}

async fn post_drill(State(state): State<AppState>, Path(sid): Path<String>, Body(req): Body<DrillRequest>) -> ApiResult<Json<StateEnvelope>> {
    let ((), dto) = state
        .mutate(&sid, |s| {
            match &req {
                DrillRequest::Members { members } => {
                    let ids = s.network().resolve_ids(members)?;
                    s.drill_to(ids)?;
                }
                DrillRequest::Spec(spec) => {
                    s.drill_down(spec)?;
                }
            }
            Ok(())
        })
        .await?;
    Ok(Json(StateEnvelope { state: dto }))
}

async fn post_remove(State(state): State<AppState>, Path(sid): Path<String>, Body(req): Body<IdList>) -> ApiResult<Json<StateEnvelope>> {
    let ((), dto) = state
        .mutate(&sid, |s| {
            let ids = s.network().resolve_ids(&req.ids)?;
            s.remove(&ids)?;
            Ok(())
        })
        .await?;
    Ok(Json(StateEnvelope { state: dto }))
}

async fn post_expand(State(state): State<AppState>, Path(sid): Path<String>, Body(spec): Body<ExpansionSpec>) -> ApiResult<Json<StateEnvelope>> {
    let ((), dto) = state.mutate(&sid, |s| s.expand(&spec).map(|_| ()).map_err(Into::into)).await?;
    Ok(Json(StateEnvelope { state: dto }))
}

async fn post_cluster(State(state): State<AppState>, Path(sid): Path<String>, Body(req): Body<ClusterRequest>) -> ApiResult<Json<ClusterResponse>> {
    let params = ClusterParams {
        resolution: req.resolution,
        min_cluster_size: req.min_cluster_size,
        policy: req.policy,
        seed: req.seed,
        random_starts: req.random_starts,
        iterations: req.iterations,
    };
    let (partition, dto) = state.mutate(&sid, |s| s.cluster_into_groups(&params).map_err(Into::into)).await?;
    Ok(Json(ClusterResponse {
        state: dto,
        clusters: partition.cluster_count(),
        sizes: partition.sizes(),
        quality: partition.quality,
        unassigned: partition.clusters.iter().filter(|c| c.is_none()).count(),
    }))
}

async fn post_cores(State(state): State<AppState>, Path(sid): Path<String>, Body(req): Body<CoresRequest>) -> ApiResult<Json<CoresResponse>> {
    let (core, dto) = state
        .mutate(&sid, |s| {
            let core = s.select_core(req.k)?;
            let network = s.network();
            Ok(core.iter().map(|&ix| network.id(ix).to_string()).collect())
        })
        .await?;
    Ok(Json(CoresResponse { state: dto, core }))
}

async fn navigate(state: AppState, sid: String, direction: NavDirection) -> ApiResult<Json<NavigateResponse>> {
    let (moved, dto) = state.mutate(&sid, |s| Ok(s.navigate(direction) == Navigation::Moved)).await?;
    Ok(Json(NavigateResponse { state: dto, moved }))
}

async fn post_back(State(state): State<AppState>, Path(sid): Path<String>) -> ApiResult<Json<NavigateResponse>> {
    navigate(state, sid, NavDirection::Back).await
}

async fn post_forward(State(state): State<AppState>, Path(sid): Path<String>) -> ApiResult<Json<NavigateResponse>> {
    navigate(state, sid, NavDirection::Forward).await
}

/// Extremal paths inside the current network.
async fn get_path(State(state): State<AppState>, Path(sid): Path<String>, Params(q): Params<PathQueryParams>) -> ApiResult<Json<PathResponse>> {
    let slot = state.slot(&sid).await?;
    let slot = slot.read().await;
    let network = slot.session.network();
    let view = slot.session.current();
    let sub = Subnetwork::of_view(network, view);
    let local = |id: &str| -> ApiResult<u32> {
        let ix = network.require(id)?;
        Ok(sub.local(ix).ok_or_else(|| citnet_core::Error::NotMember(id.to_string()))?)
    };
    let (from, to) = (local(&q.from)?, local(&q.to)?);
    let result = extreme_path(sub.graph(), from, to, q.kind, q.max_paths.unwrap_or(DEFAULT_MAX_PATHS))?;
    Ok(Json(match result {
        PathQuery::Found(set) => PathResponse {
            kind: q.kind,
            reachable: true,
            length: Some(set.length),
            paths: set.paths.iter().map(|p| p.iter().map(|&v| sub.id(v).to_string()).collect()).collect(),
            truncated: set.truncated,
        },
        PathQuery::Unreachable => PathResponse { kind: q.kind, reachable: false, length: None, paths: Vec::new(), truncated: false },
    }))
}

async fn get_components(State(state): State<AppState>, Path(sid): Path<String>) -> ApiResult<Json<ComponentsResponse>> {
    let slot = state.slot(&sid).await?;
    let slot = slot.read().await;
    let sub = Subnetwork::of_view(slot.session.network(), slot.session.current());
    let labels = connected_components(sub.graph());
    let count = labels.iter().max().map_or(0, |&m| m as usize + 1);
    let mut components = vec![Vec::new(); count];
    for (local, &c) in labels.iter().enumerate() {
        components[c as usize].push(sub.id(local as u32).to_string());
    }
    Ok(Json(ComponentsResponse { components }))
}
