//! Session-based HTTP API for exploring fold sequences interactively.
//!
//! Each session owns a fold state and an undo stack. Requests on one session
//! are serialized by its lock; distinct sessions proceed independently.
//! Sessions live in memory and are dropped after a period of inactivity.

use std::collections::BTreeMap;
use std::net::SocketAddr;
use std::sync::Arc;
use std::time::{Duration, Instant};

use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use dashmap::DashMap;
use parking_lot::Mutex;
use serde::{Deserialize, Serialize};
use serde_json::json;
use tower_http::cors::{Any, CorsLayer};
use uuid::Uuid;

use crate::cnf::normalize_formula;
use crate::fold::{
    apply_fold, check_legal, fold_lines, segments_on_line, FoldMode, FoldMove, FoldState, Illegality, Instance,
    SegmentId,
};
use crate::geom::{line_through, Side};
use crate::io::document::{Int, LayoutDoc};
use crate::io::{
    parse_dimacs, read_instance, read_layout, write_instance, write_trace, InstanceDocument, Layout, TraceDocument,
};
use crate::reduce::{compile, ClauseHeight, LayoutParams};
use crate::solve::{solve_state, SearchBudget, SearchOutcome};

pub struct Session {
    current: FoldState,
    undo: Vec<FoldState>,
    mode: FoldMode,
    budget: usize,
    roles: BTreeMap<SegmentId, String>,
    layout: Option<Layout>,
    touched: Instant,
}

impl Session {
    fn new(inst: &Instance, mode: FoldMode, layout: Option<Layout>) -> Self {
        let st = FoldState::new(inst);
        Session {
            current: st,
            undo: Vec::new(),
            mode,
            budget: inst.len(),
            roles: inst.roles.clone(),
            layout,
            touched: Instant::now(),
        }
    }

    fn remaining_budget(&self) -> usize {
        self.budget.saturating_sub(self.current.history().len())
    }
}

#[derive(Clone, Default)]
pub struct AppState {
    sessions: Arc<DashMap<Uuid, Arc<Mutex<Session>>>>,
}

impl AppState {
    /// Drop sessions idle for longer than `max_idle`; returns how many.
    pub fn evict_idle(&self, max_idle: Duration) -> usize {
        let before = self.sessions.len();
        self.sessions.retain(|_, s| s.lock().touched.elapsed() <= max_idle);
        before - self.sessions.len()
    }

    pub fn len(&self) -> usize {
        self.sessions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sessions.is_empty()
    }

    fn get(&self, id: &str) -> Result<Arc<Mutex<Session>>, ApiError> {
        let uuid = Uuid::parse_str(id).map_err(|_| ApiError::NotFound)?;
        let s = self.sessions.get(&uuid).map(|s| s.clone()).ok_or(ApiError::NotFound)?;
        s.lock().touched = Instant::now();
        Ok(s)
    }
}

#[derive(Debug)]
enum ApiError {
    BadRequest(String),
    NotFound,
    Illegal(Illegality),
    EmptyHistory,
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let (code, body) = match self {
            ApiError::BadRequest(msg) => (StatusCode::BAD_REQUEST, json!({ "error": "bad_request", "message": msg })),
            ApiError::NotFound => (StatusCode::NOT_FOUND, json!({ "error": "not_found", "message": "no such session" })),
            ApiError::Illegal(ill) => (
                StatusCode::CONFLICT,
                json!({ "error": "illegal_fold", "message": ill.to_string(), "illegality": ill }),
            ),
            ApiError::EmptyHistory => (
                StatusCode::CONFLICT,
                json!({ "error": "empty_history", "message": "nothing to undo" }),
            ),
        };
        (code, Json(body)).into_response()
    }
}

#[derive(Debug, Deserialize)]
pub struct CreateRequest {
    /// DIMACS text to compile.
    #[serde(default)]
    pub cnf: Option<String>,
    /// A ready instance.
    #[serde(default)]
    pub instance: Option<InstanceDocument>,
    #[serde(default)]
    pub mode: FoldMode,
    #[serde(default)]
    pub w_g: Option<i64>,
    #[serde(default)]
    pub h_c: Option<ClauseHeight>,
}

/// What the client sees of a session.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct StateDocument {
    pub id: String,
    pub mode: FoldMode,
    pub budget: usize,
    pub remaining_budget: usize,
    pub solved: bool,
    /// Current segments, each labelled with the role of its first original.
    pub segments: InstanceDocument,
    /// Original ids each current segment descends from.
    pub provenance: BTreeMap<SegmentId, Vec<SegmentId>>,
    pub history: TraceDocument,
    /// Ids creased by each applied fold.
    pub creased: Vec<Vec<SegmentId>>,
}

fn state_document(id: &Uuid, s: &Session) -> StateDocument {
    let st = &s.current;
    // label each piece with the role of the first original it came from
    let roles = st
        .provenance()
        .iter()
        .filter_map(|(cur, orig)| {
            let first = orig.iter().next()?;
            s.roles.get(first).map(|r| (*cur, r.clone()))
        })
        .collect();
    let current = Instance { segments: st.segments().to_vec(), roles };
    let doc = write_instance(&current, s.layout.as_ref());
    StateDocument {
        id: id.to_string(),
        mode: s.mode,
        budget: s.budget,
        remaining_budget: s.remaining_budget(),
        solved: st.is_empty(),
        segments: doc,
        provenance: st.provenance().iter().map(|(k, v)| (*k, v.iter().copied().collect())).collect(),
        history: write_trace(&st.moves().cloned().collect::<Vec<_>>(), s.mode),
        creased: st.history().iter().map(|h| h.consumed.clone()).collect(),
    }
}

#[derive(Debug, Serialize)]
struct Created {
    id: String,
    state: StateDocument,
    layout: Option<LayoutDoc>,
    roles: BTreeMap<SegmentId, String>,
}

async fn create_session(
    State(app): State<AppState>,
    body: Result<Json<CreateRequest>, axum::extract::rejection::JsonRejection>,
) -> Result<(StatusCode, Json<Created>), ApiError> {
    let Json(req) = body.map_err(|e| ApiError::BadRequest(e.body_text()))?;
    let (inst, layout) = match (req.cnf, req.instance) {
        (Some(text), None) => {
            let f = parse_dimacs(&text).map_err(|e| ApiError::BadRequest(e.to_string()))?;
            let nf = normalize_formula(&f).map_err(|e| ApiError::BadRequest(e.to_string()))?;
            let params = LayoutParams::new(req.w_g.unwrap_or(400), req.h_c.unwrap_or_default())
                .map_err(|e| ApiError::BadRequest(e.to_string()))?;
            let (inst, gm) = compile(&nf, &params).map_err(|e| ApiError::BadRequest(e.to_string()))?;
            (inst, Some(Layout::from(&gm)))
        }
        (None, Some(doc)) => {
            let inst = read_instance(&doc).map_err(|e| ApiError::BadRequest(e.to_string()))?;
            let layout = read_layout(&doc).map_err(|e| ApiError::BadRequest(e.to_string()))?;
            (inst, layout)
        }
        _ => return Err(ApiError::BadRequest("give exactly one of `cnf` and `instance`".into())),
    };
    let id = Uuid::new_v4();
    let session = Session::new(&inst, req.mode, layout);
    let created = Created {
        id: id.to_string(),
        state: state_document(&id, &session),
        layout: session.layout.as_ref().map(LayoutDoc::from),
        roles: session.roles.clone(),
    };
    app.sessions.insert(id, Arc::new(Mutex::new(session)));
    Ok((StatusCode::CREATED, Json(created)))
}

async fn get_state(State(app): State<AppState>, Path(id): Path<String>) -> Result<Json<StateDocument>, ApiError> {
    let s = app.get(&id)?;
    let s = s.lock();
    Ok(Json(state_document(&Uuid::parse_str(&id).expect("checked"), &s)))
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SideVerdict {
    pub legal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub illegality: Option<Illegality>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct LineReport {
    /// `[a, b, c]` for the line `a x + b y = c`.
    pub line: [Int; 3],
    pub segments: Vec<SegmentId>,
    pub left: SideVerdict,
    pub right: SideVerdict,
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct MovesDocument {
    pub lines: Vec<LineReport>,
    /// Legal moves as `[a, b, c, side]`.
    pub legal: Vec<(Int, Int, Int, Side)>,
}

fn verdict(st: &FoldState, mv: &FoldMove, mode: FoldMode) -> SideVerdict {
    match check_legal(st, mv, mode) {
        None => SideVerdict { legal: true, illegality: None, message: None },
        Some(ill) => SideVerdict { legal: false, message: Some(ill.to_string()), illegality: Some(ill) },
    }
}

fn list(st: &FoldState, mode: FoldMode) -> MovesDocument {
    let mut lines = Vec::new();
    let mut legal = Vec::new();
    for line in fold_lines(st) {
        let coeffs = [line.a().into(), line.b().into(), line.c().into()];
        let left = verdict(st, &FoldMove::new(line.clone(), Side::Left), mode);
        let right = verdict(st, &FoldMove::new(line.clone(), Side::Right), mode);
        for (side, v) in [(Side::Left, &left), (Side::Right, &right)] {
            if v.legal {
                legal.push((line.a().into(), line.b().into(), line.c().into(), side));
            }
        }
        lines.push(LineReport { line: coeffs, segments: segments_on_line(st, &line), left, right });
    }
    MovesDocument { lines, legal }
}

async fn list_moves(State(app): State<AppState>, Path(id): Path<String>) -> Result<Json<MovesDocument>, ApiError> {
    let s = app.get(&id)?;
    let (st, mode) = {
        let s = s.lock();
        (s.current.clone(), s.mode)
    };
    let doc = tokio::task::spawn_blocking(move || list(&st, mode)).await.expect("listing does not panic");
    Ok(Json(doc))
}

#[derive(Debug, Deserialize)]
pub struct FoldRequest {
    /// `[a, b, c]` of the fold line.
    #[serde(default)]
    pub line: Option<[Int; 3]>,
    /// Alternatively, fold along the line of this current segment.
    #[serde(default)]
    pub segment: Option<SegmentId>,
    pub side: Side,
}

fn parse_move(st: &FoldState, req: &FoldRequest) -> Result<FoldMove, ApiError> {
    let line = match (&req.line, req.segment) {
        (Some([a, b, c]), None) => {
            let v = |i: &Int| i.value().map_err(|e| ApiError::BadRequest(e.to_string()));
            crate::geom::Line::new(v(a)?, v(b)?, v(c)?).map_err(|e| ApiError::BadRequest(e.to_string()))?
        }
        (None, Some(id)) => {
            let seg = st
                .segment(id)
                .ok_or_else(|| ApiError::BadRequest(format!("segment {id} is not present")))?;
            line_through(seg)
        }
        _ => return Err(ApiError::BadRequest("give exactly one of `line` and `segment`".into())),
    };
    Ok(FoldMove::new(line, req.side))
}

async fn apply_move(
    State(app): State<AppState>,
    Path(id): Path<String>,
    body: Result<Json<FoldRequest>, axum::extract::rejection::JsonRejection>,
) -> Result<Json<StateDocument>, ApiError> {
    let Json(req) = body.map_err(|e| ApiError::BadRequest(e.body_text()))?;
    let s = app.get(&id)?;
    let mut s = s.lock();
    let mv = parse_move(&s.current, &req)?;
    let next = apply_fold(&s.current, &mv, s.mode).map_err(ApiError::Illegal)?;
    let prev = std::mem::replace(&mut s.current, next);
    s.undo.push(prev);
    Ok(Json(state_document(&Uuid::parse_str(&id).expect("checked"), &s)))
}

async fn undo(State(app): State<AppState>, Path(id): Path<String>) -> Result<Json<StateDocument>, ApiError> {
    let s = app.get(&id)?;
    let mut s = s.lock();
    let prev = s.undo.pop().ok_or(ApiError::EmptyHistory)?;
    s.current = prev;
    Ok(Json(state_document(&Uuid::parse_str(&id).expect("checked"), &s)))
}

#[derive(Debug, Default, Deserialize)]
pub struct SolveRequest {
    /// Defaults to the session's remaining budget.
    #[serde(default)]
    pub depth: Option<usize>,
    #[serde(default)]
    pub node_cap: Option<u64>,
    /// Deepen one fold at a time so the returned trace is shortest.
    #[serde(default)]
    pub shortest: bool,
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SolveDocument {
    /// `solved`, `unsolvable` or `exhausted`.
    pub verdict: String,
    pub depth: usize,
    pub nodes: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<TraceDocument>,
}

async fn solve_session(
    State(app): State<AppState>,
    Path(id): Path<String>,
    body: Option<Json<SolveRequest>>,
) -> Result<Json<SolveDocument>, ApiError> {
    let req = body.map(|Json(r)| r).unwrap_or_default();
    let s = app.get(&id)?;
    let (st, mode, remaining) = {
        let s = s.lock();
        (s.current.clone(), s.mode, s.remaining_budget())
    };
    let depth = req.depth.unwrap_or(remaining);
    let mut budget = if req.shortest { SearchBudget::depth(depth) } else { SearchBudget::decision(depth) };
    if let Some(cap) = req.node_cap {
        budget.node_cap = cap;
    }
    let res = tokio::task::spawn_blocking(move || solve_state(&st, mode, budget))
        .await
        .expect("solver does not panic");
    let (verdict, trace) = match res.outcome {
        SearchOutcome::Solved(seq) => ("solved", Some(write_trace(&seq, mode))),
        SearchOutcome::Unsolvable => ("unsolvable", None),
        SearchOutcome::ResourceExhausted => ("exhausted", None),
    };
    Ok(Json(SolveDocument { verdict: verdict.into(), depth, nodes: res.stats.nodes, trace }))
}

async fn not_found() -> ApiError {
    ApiError::NotFound
}

pub fn router(app: AppState) -> Router {
    let cors = CorsLayer::new().allow_origin(Any).allow_methods(Any).allow_headers(Any);
    Router::new()
        .route("/sessions", post(create_session))
        .route("/sessions/:id", get(get_state))
        .route("/sessions/:id/moves", get(list_moves))
        .route("/sessions/:id/fold", post(apply_move))
        .route("/sessions/:id/undo", post(undo))
        .route("/sessions/:id/solve", post(solve_session))
        .fallback(not_found)
        .layer(cors)
        .with_state(app)
}

/// Serve on `addr` until the process ends, evicting sessions idle for
/// longer than `max_idle`.
pub async fn serve(addr: SocketAddr, max_idle: Duration) -> std::io::Result<()> {
    let app = AppState::default();
    let sweeper = app.clone();
    tokio::spawn(async move {
        let mut tick = tokio::time::interval(Duration::from_secs(60));
        loop {
            tick.tick().await;
            sweeper.evict_idle(max_idle);
        }
    });
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(app)).await
}

#[cfg(test)]
mod tests {
    use super::*;
    use axum::body::Body;
    use axum::http::{Method, Request};
    use http_body_util::BodyExt;
    use serde_json::Value;
    use tower::ServiceExt;

    async fn call(app: &Router, method: Method, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
        let mut req = Request::builder().method(method).uri(uri);
        let body = match body {
            Some(v) => {
                req = req.header("content-type", "application/json");
                Body::from(v.to_string())
            }
            None => Body::empty(),
        };
        let resp = app.clone().oneshot(req.body(body).unwrap()).await.unwrap();
        let status = resp.status();
        let bytes = resp.into_body().collect().await.unwrap().to_bytes();
        let v = if bytes.is_empty() { Value::Null } else { serde_json::from_slice(&bytes).unwrap() };
        (status, v)
    }

    fn one_segment() -> Value {
        json!({ "instance": { "version": 1, "segments": [[0, 0, 1, 0, 1, 0, 1, 2, 1]] } })
    }

    async fn create(app: &Router, body: Value) -> String {
        let (status, v) = call(app, Method::POST, "/sessions", Some(body)).await;
        assert_eq!(status, StatusCode::CREATED, "{v}");
        v["id"].as_str().unwrap().to_string()
    }

    #[tokio::test]
    async fn create_from_cnf_and_instance() {
        let app = router(AppState::default());
        let (status, v) = call(&app, Method::POST, "/sessions", Some(json!({ "cnf": "p cnf 1 1\n1 0\n" }))).await;
        assert_eq!(status, StatusCode::CREATED);
        assert_eq!(v["state"]["budget"], 20);
        assert_eq!(v["state"]["segments"]["segments"].as_array().unwrap().len(), 20);
        assert_eq!(v["layout"]["zones"].as_array().unwrap().len(), 2);
        assert_eq!(v["roles"]["0"], "x1.t");
        let (status, v) = call(&app, Method::POST, "/sessions", Some(json!({ "cnf": "p cnf 1 1\n1 1 1 1 0" }))).await;
        assert_eq!(status, StatusCode::BAD_REQUEST);
        assert!(v["message"].as_str().unwrap().contains("more than 3"));
        let (status, _) = call(&app, Method::POST, "/sessions", Some(json!({}))).await;
        assert_eq!(status, StatusCode::BAD_REQUEST);
        let (status, _) = call(&app, Method::POST, "/sessions", Some(json!({ "cnf": 3 }))).await;
        assert_eq!(status, StatusCode::BAD_REQUEST);
        create(&app, one_segment()).await;
    }

    #[tokio::test]
    async fn fold_undo_round_trip() {
        let app = router(AppState::default());
        let id = create(&app, one_segment()).await;
        let (status, fresh) = call(&app, Method::GET, &format!("/sessions/{id}"), None).await;
        assert_eq!(status, StatusCode::OK);
        assert_eq!(fresh["history"]["moves"].as_array().unwrap().len(), 0);
        assert_eq!(fresh["solved"], false);

        let (status, moves) = call(&app, Method::GET, &format!("/sessions/{id}/moves"), None).await;
        assert_eq!(status, StatusCode::OK);
        assert_eq!(moves["legal"].as_array().unwrap().len(), 2);

        let (status, after) =
            call(&app, Method::POST, &format!("/sessions/{id}/fold"), Some(json!({ "line": [1, 0, 0], "side": "Left" })))
                .await;
        assert_eq!(status, StatusCode::OK);
        assert_eq!(after["history"]["moves"].as_array().unwrap().len(), 1);
        assert_eq!(after["solved"], true);
        assert_eq!(after["remaining_budget"], 0);
        let (_, moves) = call(&app, Method::GET, &format!("/sessions/{id}/moves"), None).await;
        assert!(moves["legal"].as_array().unwrap().is_empty());

        let (status, undone) = call(&app, Method::POST, &format!("/sessions/{id}/undo"), None).await;
        assert_eq!(status, StatusCode::OK);
        assert_eq!(undone, fresh);
        let (status, v) = call(&app, Method::POST, &format!("/sessions/{id}/undo"), None).await;
        assert_eq!(status, StatusCode::CONFLICT);
        assert_eq!(v["error"], "empty_history");
    }

    #[tokio::test]
    async fn illegal_fold_is_a_conflict() {
        let app = router(AppState::default());
        // fold along x = 0 would cut the horizontal (-1,5)-(1,5)
        let doc = json!({ "instance": { "version": 1, "segments": [
            [0, 0, 1, 0, 1, 0, 1, 1, 1],
            [1, -1, 1, 5, 1, 1, 1, 5, 1]
        ] } });
        let id = create(&app, doc).await;
        let (status, v) =
            call(&app, Method::POST, &format!("/sessions/{id}/fold"), Some(json!({ "segment": 0, "side": "Right" }))).await;
        assert_eq!(status, StatusCode::CONFLICT);
        assert_eq!(v["illegality"], json!({ "StabsInterior": 1 }));
        let (_, moves) = call(&app, Method::GET, &format!("/sessions/{id}/moves"), None).await;
        let lines = moves["lines"].as_array().unwrap();
        assert_eq!(lines.len(), 2);
        assert!(lines.iter().any(|l| l["left"]["illegality"] == json!({ "StabsInterior": 1 })));
        let (status, _) =
            call(&app, Method::POST, &format!("/sessions/{id}/fold"), Some(json!({ "line": [0, 0, 1], "side": "Left" }))).await;
        assert_eq!(status, StatusCode::BAD_REQUEST);
        let (status, _) =
            call(&app, Method::POST, &format!("/sessions/{id}/fold"), Some(json!({ "segment": 7, "side": "Left" }))).await;
        assert_eq!(status, StatusCode::BAD_REQUEST);
    }

    #[tokio::test]
    async fn unknown_sessions() {
        let app = router(AppState::default());
        for (m, path) in [
            (Method::GET, "/sessions/nope".to_string()),
            (Method::GET, format!("/sessions/{}", Uuid::new_v4())),
            (Method::GET, format!("/sessions/{}/moves", Uuid::new_v4())),
            (Method::POST, format!("/sessions/{}/undo", Uuid::new_v4())),
            (Method::POST, format!("/sessions/{}/solve", Uuid::new_v4())),
        ] {
            let (status, _) = call(&app, m, &path, None).await;
            assert_eq!(status, StatusCode::NOT_FOUND, "{path}");
        }
    }

    #[tokio::test]
    async fn solve_verdicts() {
        let app = router(AppState::default());
        let id = create(&app, one_segment()).await;
        let (status, v) = call(&app, Method::POST, &format!("/sessions/{id}/solve"), None).await;
        assert_eq!(status, StatusCode::OK);
        assert_eq!(v["verdict"], "solved");
        assert_eq!(v["trace"]["moves"].as_array().unwrap().len(), 1);

        // two segments crossing obliquely need three folds
        let doc = json!({ "instance": { "version": 1, "segments": [
            [0, 0, 1, 0, 1, 4, 1, 0, 1],
            [1, 0, 1, -1, 1, 2, 1, 1, 1]
        ] }, "mode": "unrestricted" });
        let id = create(&app, doc).await;
        let (_, v) = call(&app, Method::POST, &format!("/sessions/{id}/solve"), None).await;
        assert_eq!(v["verdict"], "unsolvable");
        assert_eq!(v["depth"], 2);
        let (_, v) = call(&app, Method::POST, &format!("/sessions/{id}/solve"), Some(json!({ "depth": 3 }))).await;
        assert_eq!(v["verdict"], "solved");
        let (_, v) =
            call(&app, Method::POST, &format!("/sessions/{id}/solve"), Some(json!({ "depth": 5, "node_cap": 1 }))).await;
        assert_eq!(v["verdict"], "exhausted");
    }

    #[tokio::test]
    async fn cors_and_eviction() {
        let state = AppState::default();
        let app = router(state.clone());
        let req = Request::builder()
            .method(Method::OPTIONS)
            .uri("/sessions")
            .header("origin", "http://localhost:5173")
            .header("access-control-request-method", "POST")
            .body(Body::empty())
            .unwrap();
        let resp = app.clone().oneshot(req).await.unwrap();
        assert_eq!(resp.headers()["access-control-allow-origin"], "*");
        create(&app, one_segment()).await;
        assert_eq!(state.len(), 1);
        assert_eq!(state.evict_idle(Duration::from_secs(3600)), 0);
        assert_eq!(state.evict_idle(Duration::ZERO), 1);
        assert!(state.is_empty());
    }
}
