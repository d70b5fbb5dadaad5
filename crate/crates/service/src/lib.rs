//! JSON review API over a dictionary store: preview a pasted template
//! invocation, commit its paradigm, browse lemmas and settle conflicts.

use std::sync::Arc;

use axum::extract::rejection::{JsonRejection, PathRejection, QueryRejection};
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::json;
use tokio::sync::RwLock;

use wikiparadigm_core::dictionary::{governing_kind, OpenError, StoreDir, UpsertOptions};
use wikiparadigm_core::wikitext::{extract_templates, find_inflection_invocations};
use wikiparadigm_core::{
    Conflict, EntryKey, Gramset, InflectionKind, Language, LemmaEntry, MergeReport, Paradigm, Pos,
    Resolution, RuleSet, Store,
};

pub const PAGE_SIZE: usize = 50;

/// Error body: `{"code": ..., "message": ...}` plus optional extra fields.
#[derive(Debug)]
pub struct ApiError {
    pub status: StatusCode,
    pub code: &'static str,
    pub message: String,
    pub extra: Option<serde_json::Value>,
}

impl ApiError {
    pub fn new(status: StatusCode, code: &'static str, message: impl Into<String>) -> Self {
        ApiError {
            status,
            code,
            message: message.into(),
            extra: None,
        }
    }

    fn unprocessable(code: &'static str, message: impl Into<String>) -> Self {
        ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, code, message)
    }

    fn bad_request(message: impl Into<String>) -> Self {
        ApiError::new(StatusCode::BAD_REQUEST, "bad_request", message)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let mut body = json!({ "code": self.code, "message": self.message });
        if let Some(serde_json::Value::Object(extra)) = self.extra {
            body.as_object_mut().unwrap().extend(extra);
        }
        (self.status, Json(body)).into_response()
    }
}

impl From<JsonRejection> for ApiError {
    fn from(r: JsonRejection) -> Self {
        ApiError::bad_request(r.body_text())
    }
}

impl From<PathRejection> for ApiError {
    fn from(r: PathRejection) -> Self {
        ApiError::bad_request(r.body_text())
    }
}

impl From<QueryRejection> for ApiError {
    fn from(r: QueryRejection) -> Self {
        ApiError::bad_request(r.body_text())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PreviewResponse {
    pub paradigm: Paradigm,
    pub lemma: String,
    pub kind: InflectionKind,
    pub warnings: Vec<String>,
}

/// Finds the single inflection invocation in `text` and builds its paradigm.
pub fn preview(rules: &RuleSet, text: &str) -> Result<PreviewResponse, ApiError> {
    let extraction = extract_templates(text);
    let mut found = find_inflection_invocations(&extraction.invocations);
    let (invocation, kind) = match found.len() {
        0 => {
            let mut message = "no inflection template found".to_string();
            if !extraction.warnings.is_empty() {
                message.push_str(&format!(" ({})", extraction.warnings.join("; ")));
            }
            return Err(ApiError::unprocessable("no_template", message));
        }
        1 => found.remove(0),
        n => {
            return Err(ApiError::unprocessable(
                "multiple_templates",
                format!("expected one inflection template, found {n}"),
            ))
        }
    };
    let paradigm = rules
        .paradigm_for(&invocation, kind)
        .map_err(|e| ApiError::unprocessable("generation_failed", e.to_string()))?;
    let mut warnings = extraction.warnings;
    warnings.extend(invocation.warnings);
    Ok(PreviewResponse {
        lemma: paradigm.lemma.clone(),
        kind,
        paradigm,
        warnings,
    })
}

/// Shared server state. Commits and conflict resolutions take the write
/// lock, so they are applied one at a time.
pub struct AppState {
    rules: RuleSet,
    store: RwLock<Store>,
    dir: Option<StoreDir>,
}

impl AppState {
    pub fn new(mut store: Store, rules: RuleSet, dir: Option<StoreDir>) -> Self {
        store.set_slot_orders(rules.slot_orders());
        AppState {
            rules,
            store: RwLock::new(store),
            dir,
        }
    }

    pub fn rules(&self) -> &RuleSet {
        &self.rules
    }

    pub async fn snapshot(&self) -> Store {
        self.store.read().await.clone()
    }

    /// Writes the current store to disk, if the state is backed by one.
    pub async fn flush(&self) -> Result<(), String> {
        let store = self.store.read().await;
        self.persist(&store, "flush", json!({}))
            .map_err(|e| e.message)
    }

    fn persist(&self, store: &Store, op: &str, detail: serde_json::Value) -> Result<(), ApiError> {
        let Some(dir) = &self.dir else { return Ok(()) };
        let fail = |e: OpenError| {
            ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "store_write", e.to_string())
        };
        dir.save(store).map_err(fail)?;
        dir.log(op, detail).map_err(fail)
    }
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/api/health", get(health))
        .route("/api/preview", post(api_preview))
        .route("/api/commit", post(api_commit))
        .route("/api/lemmas", get(api_search))
        .route("/api/lemmas/{id}", get(api_lemma))
        .route("/api/conflicts", get(api_conflicts))
        .route("/api/conflicts/{id}/resolve", post(api_resolve))
        .with_state(state)
}

async fn health(State(state): State<Arc<AppState>>) -> Json<serde_json::Value> {
    let lemmas = state.store.read().await.entries().len();
    Json(json!({ "status": "ok", "lemmas": lemmas }))
}

#[derive(Debug, Deserialize)]
pub struct PreviewRequest {
    pub template_text: String,
}

async fn api_preview(
    State(state): State<Arc<AppState>>,
    body: Result<Json<PreviewRequest>, JsonRejection>,
) -> Result<Json<PreviewResponse>, ApiError> {
    let Json(req) = body?;
    preview(&state.rules, &req.template_text).map(Json)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GramsetResolution {
    pub gramset: Gramset,
    pub resolution: Resolution,
}

#[derive(Debug, Deserialize)]
pub struct CommitRequest {
    pub template_text: String,
    pub language: Language,
    pub pos: Pos,
    #[serde(default)]
    pub resolutions: Vec<GramsetResolution>,
}

/// Regenerates the paradigm from the submitted text and merges it. The
/// commit is all-or-nothing: if any conflict is left without a resolution
/// the store is not touched and the conflicts come back with a 409.
async fn api_commit(
    State(state): State<Arc<AppState>>,
    body: Result<Json<CommitRequest>, JsonRejection>,
) -> Result<Json<MergeReport>, ApiError> {
    let Json(req) = body?;
    let preview = preview(&state.rules, &req.template_text)?;
    if governing_kind(req.language, req.pos) != Some(preview.kind) {
        return Err(ApiError::unprocessable(
            "kind_mismatch",
            format!(
                "{{{{{}}}}} cannot be stored as {} {}",
                preview.kind.template_name(),
                req.language,
                req.pos
            ),
        ));
    }
    if req.resolutions.iter().any(|r| r.resolution == Resolution::Unresolved) {
        return Err(ApiError::unprocessable(
            "invalid_resolution",
            "'unresolved' is not a resolution",
        ));
    }
    let key = EntryKey::new(preview.lemma.clone(), req.language, req.pos);
    let options = UpsertOptions {
        create: true,
        accept: true,
        template_args: Some(req.template_text.trim().to_string()),
    };

    let mut guard = state.store.write().await;
    let mut draft = guard.clone();
    let mut report = draft
        .upsert_generated(&key, &preview.paradigm, &options)
        .map_err(|e| ApiError::unprocessable("merge_failed", e.to_string()))?;

    let mut unresolved = Vec::new();
    for conflict in report.conflicts.iter_mut().filter(|c| c.is_open()) {
        match req.resolutions.iter().find(|r| r.gramset == conflict.gramset) {
            Some(r) => {
                draft
                    .resolve_conflict(conflict.id, r.resolution)
                    .map_err(|e| ApiError::unprocessable("merge_failed", e.to_string()))?;
                conflict.resolution = r.resolution;
            }
            None => unresolved.push(conflict.clone()),
        }
    }
    if !unresolved.is_empty() {
        let mut err = ApiError::new(
            StatusCode::CONFLICT,
            "conflicts",
            format!(
                "{} form(s) differ from the dictionary and need a resolution",
                unresolved.len()
            ),
        );
        err.extra = Some(json!({ "conflicts": unresolved }));
        return Err(err);
    }

    state.persist(
        &draft,
        "commit",
        json!({ "lemma": key.lemma, "language": key.language, "pos": key.pos, "report": report }),
    )?;
    *guard = draft;
    log::info!(
        "commit {key}: created {}, attached {}, unchanged {}",
        report.created,
        report.gramsets_attached,
        report.unchanged
    );
    Ok(Json(report))
}

#[derive(Debug, Deserialize)]
pub struct SearchQuery {
    #[serde(default)]
    pub q: String,
    pub language: Option<String>,
    pub pos: Option<String>,
    pub page: Option<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct LemmaSummary {
    pub id: u64,
    pub lemma: String,
    pub language: Language,
    pub pos: Pos,
    pub form_count: usize,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SearchResponse {
    pub items: Vec<LemmaSummary>,
    pub page: usize,
    pub page_size: usize,
    pub total: usize,
}

fn parse_opt<T: std::str::FromStr<Err = String>>(v: Option<String>) -> Result<Option<T>, ApiError> {
    match v.as_deref().map(str::trim) {
        None | Some("") => Ok(None),
        Some(s) => s.parse().map(Some).map_err(ApiError::bad_request),
    }
}

async fn api_search(
    State(state): State<Arc<AppState>>,
    query: Result<Query<SearchQuery>, QueryRejection>,
) -> Result<Json<SearchResponse>, ApiError> {
    let Query(q) = query?;
    let language = parse_opt::<Language>(q.language)?;
    let pos = parse_opt::<Pos>(q.pos)?;
    let page = q.page.unwrap_or(1).max(1);
    let store = state.store.read().await;
    let hits = store.search(q.q.trim(), language, pos);
    let items = hits
        .iter()
        .skip((page - 1) * PAGE_SIZE)
        .take(PAGE_SIZE)
        .map(|e| LemmaSummary {
            id: e.id,
            lemma: e.lemma.clone(),
            language: e.language,
            pos: e.pos,
            form_count: e.forms.len(),
        })
        .collect();
    Ok(Json(SearchResponse {
        items,
        page,
        page_size: PAGE_SIZE,
        total: hits.len(),
    }))
}

async fn api_lemma(
    State(state): State<Arc<AppState>>,
    id: Result<Path<u64>, PathRejection>,
) -> Result<Json<LemmaEntry>, ApiError> {
    let Path(id) = id?;
    let store = state.store.read().await;
    let entry = store
        .entry(id)
        .ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, "not_found", format!("no lemma with id {id}")))?;
    Ok(Json(LemmaEntry {
        forms: store.ordered_forms(entry).into_iter().cloned().collect(),
        ..entry.clone()
    }))
}

#[derive(Debug, Deserialize)]
pub struct ConflictQuery {
    /// `open` (default) or `all`.
    pub status: Option<String>,
}

async fn api_conflicts(
    State(state): State<Arc<AppState>>,
    query: Result<Query<ConflictQuery>, QueryRejection>,
) -> Result<Json<Vec<Conflict>>, ApiError> {
    let Query(q) = query?;
    let all = match q.status.as_deref() {
        None | Some("open") => false,
        Some("all") => true,
        Some(other) => {
            return Err(ApiError::bad_request(format!(
                "unknown status '{other}' (expected open or all)"
            )))
        }
    };
    let store = state.store.read().await;
    Ok(Json(
        store
            .conflicts()
            .iter()
            .filter(|c| all || c.is_open())
            .cloned()
            .collect(),
    ))
}

#[derive(Debug, Deserialize)]
pub struct ResolveRequest {
    pub resolution: Resolution,
}

async fn api_resolve(
    State(state): State<Arc<AppState>>,
    id: Result<Path<u64>, PathRejection>,
    body: Result<Json<ResolveRequest>, JsonRejection>,
) -> Result<Json<LemmaEntry>, ApiError> {
    use wikiparadigm_core::dictionary::DictionaryError as E;
    let Path(id) = id?;
    let Json(req) = body?;
    let mut guard = state.store.write().await;
    let mut draft = guard.clone();
    let entry = draft.resolve_conflict(id, req.resolution).map_err(|e| match e {
        E::UnknownConflict(_) => ApiError::new(StatusCode::NOT_FOUND, "not_found", e.to_string()),
        E::AlreadyResolved(_) => ApiError::new(StatusCode::CONFLICT, "already_resolved", e.to_string()),
        other => ApiError::unprocessable("invalid_resolution", other.to_string()),
    })?;
    state.persist(&draft, "resolve", json!({ "conflict": id, "resolution": req.resolution }))?;
    *guard = draft;
    Ok(Json(entry))
}
