//! HTTP service over the engine.
//!
//! * `GET /api/parse?form=<ascii>`: 200 with analyses (possibly none), 400 on
//!   a malformed form, 413 when the form exceeds the segment limit.
//! * `POST /api/generate` with a JSON [`GenerateBody`]: 200 with forms, 400
//!   on a schema violation, 422 for an unsupported concrete cell.
//!
//! Everything else is served from the static directory, if one is configured.
//!
//! Configuration comes from `AKKAD_ADDR`, `AKKAD_RULES_DIR`,
//! `AKKAD_MAX_SEGMENTS` and `AKKAD_STATIC_DIR`.

use std::collections::HashMap;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use anyhow::Context;
use axum::extract::rejection::JsonRejection;
use axum::extract::{Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use tower_http::services::ServeDir;

use crate::analyzer::{AnalyzerError, Engine, GenRequest};
use crate::cli::AnalysisRecord;
use crate::segform::{decode, Consonant};
use crate::stems::{PngCell, Stem, Tense};
use crate::suffixes::SuffixFeatures;

pub const SCHEMA_VERSION: u32 = 1;
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const DEFAULT_ADDR: &str = "127.0.0.1:8080";
pub const DEFAULT_MAX_SEGMENTS: usize = 64;

#[derive(Debug, Clone)]
pub struct ServerConfig {
    pub addr: SocketAddr,
    pub rules_dir: Option<PathBuf>,
    pub max_segments: usize,
    pub static_dir: Option<PathBuf>,
}

impl Default for ServerConfig {
    fn default() -> Self {
        ServerConfig {
            addr: DEFAULT_ADDR.parse().expect("default address"),
            rules_dir: None,
            max_segments: DEFAULT_MAX_SEGMENTS,
            static_dir: None,
        }
    }
}

impl ServerConfig {
    pub fn from_env() -> anyhow::Result<ServerConfig> {
        let mut config = ServerConfig::default();
        if let Ok(addr) = std::env::var("AKKAD_ADDR") {
            config.addr = addr.parse().with_context(|| format!("AKKAD_ADDR={addr}"))?;
        }
        if let Ok(dir) = std::env::var("AKKAD_RULES_DIR") {
            config.rules_dir = Some(dir.into());
        }
        if let Ok(n) = std::env::var("AKKAD_MAX_SEGMENTS") {
            config.max_segments = n.parse().with_context(|| format!("AKKAD_MAX_SEGMENTS={n}"))?;
        }
        if let Ok(dir) = std::env::var("AKKAD_STATIC_DIR") {
            config.static_dir = Some(dir.into());
        }
        Ok(config)
    }
}

#[derive(Clone)]
pub struct AppState {
    engine: Arc<EngineRef>,
    max_segments: usize,
}

enum EngineRef {
    Builtin,
    Custom(Engine),
}

impl AppState {
    pub fn new(config: &ServerConfig) -> anyhow::Result<AppState> {
        let engine = match &config.rules_dir {
            Some(dir) => EngineRef::Custom(
                Engine::from_dir(dir).with_context(|| format!("loading rules from {}", dir.display()))?,
            ),
            None => EngineRef::Builtin,
        };
        Ok(AppState { engine: Arc::new(engine), max_segments: config.max_segments })
    }

    fn engine(&self) -> &Engine {
        match &*self.engine {
            EngineRef::Builtin => Engine::builtin(),
            EngineRef::Custom(e) => e,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParseResponse {
    pub schema_version: u32,
    pub engine_version: String,
    pub request: ParseRequest,
    pub analyses: Vec<AnalysisRecord>,
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParseRequest {
    pub form: String,
}

/// Body of `POST /api/generate`. `stem`, `tense` and `png` accept `"any"`
/// or may be omitted for a wildcard.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenerateBody {
    pub radicals: Vec<String>,
    #[serde(default)]
    pub stem: Option<String>,
    #[serde(default)]
    pub tense: Option<String>,
    #[serde(default)]
    pub png: Option<String>,
    #[serde(default)]
    pub suffix: Option<SuffixFeatures>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerateResponse {
    pub schema_version: u32,
    pub engine_version: String,
    pub request: GenerateBody,
    pub forms: Vec<AnalysisRecord>,
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorResponse {
    pub schema_version: u32,
    pub engine_version: String,
    /// Machine-readable reason: `missing_form`, `decode_error`,
    /// `form_too_long`, `schema_violation` or `unsupported_cell`.
    pub error: String,
    pub message: String,
}

fn fail(status: StatusCode, error: &str, message: impl Into<String>) -> Response {
    let body = ErrorResponse {
        schema_version: SCHEMA_VERSION,
        engine_version: ENGINE_VERSION.to_string(),
        error: error.to_string(),
        message: message.into(),
    };
    (status, Json(body)).into_response()
}

pub fn router(state: AppState, static_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/api/parse", get(parse_handler))
        .route("/api/generate", post(generate_handler))
        .with_state(state);
    match static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    }
}

async fn parse_handler(State(state): State<AppState>, Query(q): Query<HashMap<String, String>>) -> Response {
    let Some(form) = q.get("form").filter(|f| !f.trim().is_empty()) else {
        return fail(StatusCode::BAD_REQUEST, "missing_form", "query parameter `form` is required");
    };
    // Cheap bound before decoding: no segment is longer than three characters.
    if form.chars().count() > state.max_segments * 3 {
        return fail(StatusCode::PAYLOAD_TOO_LARGE, "form_too_long", too_long(state.max_segments));
    }
    let started = Instant::now();
    let decoded = match decode(form) {
        Ok(d) => d,
        Err(e) => return fail(StatusCode::BAD_REQUEST, "decode_error", e.to_string()),
    };
    if decoded.len() > state.max_segments {
        return fail(StatusCode::PAYLOAD_TOO_LARGE, "form_too_long", too_long(state.max_segments));
    }
    let analyses = state.engine().parse_form(&decoded);
    let elapsed_ms = started.elapsed().as_secs_f64() * 1000.0;
    Json(ParseResponse {
        schema_version: SCHEMA_VERSION,
        engine_version: ENGINE_VERSION.to_string(),
        request: ParseRequest { form: form.clone() },
        analyses: analyses.iter().map(AnalysisRecord::from).collect(),
        elapsed_ms,
    })
    .into_response()
}

fn too_long(max: usize) -> String {
    format!("forms are limited to {max} segments")
}

fn wild<T: std::str::FromStr>(field: &str, value: &Option<String>) -> Result<Option<T>, String>
where
    T::Err: std::fmt::Display,
{
    match value.as_deref() {
        None => Ok(None),
        Some(v) if v.eq_ignore_ascii_case("any") => Ok(None),
        Some(v) => v.parse().map(Some).map_err(|e: T::Err| format!("{field}: {e}")),
    }
}

impl GenerateBody {
    pub fn to_request(&self) -> Result<GenRequest, String> {
        let radicals: Vec<Consonant> = self
            .radicals
            .iter()
            .map(|r| Consonant::parse(r).ok_or_else(|| format!("radicals: {r:?} is not a consonant")))
            .collect::<Result<_, _>>()?;
        let radicals: [Consonant; 3] = radicals
            .try_into()
            .map_err(|_| "radicals: exactly three are required".to_string())?;
        let png: Option<PngCell> = wild("png", &self.png)?;
        if let Some(p) = png {
            if !p.is_subject() {
                return Err(format!("png: {p} is not a subject cell"));
            }
        }
        if let Some(s) = &self.suffix {
            if !s.is_valid() {
                return Err("suffix: no such dative or accusative cell".to_string());
            }
        }
        Ok(GenRequest {
            radicals,
            stem: wild::<Stem>("stem", &self.stem)?,
            tense: wild::<Tense>("tense", &self.tense)?,
            png,
            suffix: self.suffix,
        })
    }
}

async fn generate_handler(
    State(state): State<AppState>,
    body: Result<Json<serde_json::Value>, JsonRejection>,
) -> Response {
    let value = match body {
        Ok(Json(v)) => v,
        Err(e) => return fail(StatusCode::BAD_REQUEST, "schema_violation", e.body_text()),
    };
    let body: GenerateBody = match serde_json::from_value(value) {
        Ok(b) => b,
        Err(e) => return fail(StatusCode::BAD_REQUEST, "schema_violation", e.to_string()),
    };
    let req = match body.to_request() {
        Ok(r) => r,
        Err(e) => return fail(StatusCode::BAD_REQUEST, "schema_violation", e),
    };
    let started = Instant::now();
    let result = state.engine().generate(&req);
    let elapsed_ms = started.elapsed().as_secs_f64() * 1000.0;
    match result {
        Ok(generated) => Json(GenerateResponse {
            schema_version: SCHEMA_VERSION,
            engine_version: ENGINE_VERSION.to_string(),
            request: body,
            forms: generated.iter().map(|g| AnalysisRecord::from(&g.analysis)).collect(),
            elapsed_ms,
        })
        .into_response(),
        Err(AnalyzerError::Unsupported(m)) => fail(StatusCode::UNPROCESSABLE_ENTITY, "unsupported_cell", m),
        Err(e) => fail(StatusCode::BAD_REQUEST, "schema_violation", e.to_string()),
    }
}

/// Binds `config.addr` and serves until the process is stopped.
pub async fn serve(config: ServerConfig) -> anyhow::Result<()> {
    let state = AppState::new(&config)?;
    let app = router(state, config.static_dir.clone());
    let listener = tokio::net::TcpListener::bind(config.addr)
        .await
        .with_context(|| format!("binding {}", config.addr))?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, app).await?;
    Ok(())
}
