//! HTTP chat service.
//!
//! | Method | Path | |
//! |---|---|---|
//! | `POST` | `/sessions` | start a session, body `{"user": "john"}` |
//! | `POST` | `/sessions/{id}/utterance` | body `{"text": "...", "radius": 3}` |
//! | `GET` | `/sessions/{id}` | session state and turns |
//! | `POST` | `/solve` | body `{"program": "...", "query": "p", "topic": "p", "radius": 2}` |
//! | `GET` | `/health` | liveness |

use std::collections::HashMap;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path as UrlPath, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};

use discasp_core::{
    compute_rcc, extract_path, parse_program, solve, CnrDepGraph, Radius, RccError, SolveError,
};

use crate::dialog::{next_turn, parse_utterance, DialogState, TurnError, DEFAULT_RADIUS};
use crate::json::{ModelDoc, PathDoc, RccDoc, SolveDoc};
use crate::kb::MovieKb;
use crate::store::{Event, SessionStore};

pub const KB_DIR_ENV: &str = "DISCASP_KB_DIR";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub bind: String,
    /// Directory with `movies.lp`, `users.lp`, `rules.lp` and `phrases.txt`;
    /// the bundled KB is used when unset.
    pub kb_dir: Option<PathBuf>,
    /// Where session logs are written; sessions live in memory when unset.
    /// Defaults to `sessions` in the working directory.
    pub store_dir: Option<PathBuf>,
    pub default_radius: u32,
    pub max_radius: u32,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            bind: "127.0.0.1:8080".into(),
            kb_dir: None,
            store_dir: Some("sessions".into()),
            default_radius: DEFAULT_RADIUS,
            max_radius: 10,
        }
    }
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(Self::from_toml(&text)?)
    }

    /// `DISCASP_KB_DIR` overrides `kb_dir`.
    pub fn with_env(mut self) -> Self {
        if let Some(dir) = std::env::var_os(KB_DIR_ENV) {
            self.kb_dir = Some(dir.into());
        }
        self
    }
}

pub struct AppState {
    pub kb: MovieKb,
    pub config: Config,
    store: SessionStore,
    sessions: Mutex<HashMap<String, Arc<tokio::sync::Mutex<DialogState>>>>,
}

impl AppState {
    pub fn new(kb: MovieKb, config: Config, store: SessionStore) -> std::io::Result<Self> {
        let sessions = store
            .load_all()?
            .into_iter()
            .map(|s| (s.id.clone(), Arc::new(tokio::sync::Mutex::new(s))))
            .collect();
        Ok(AppState { kb, config, store, sessions: Mutex::new(sessions) })
    }

    pub fn from_config(config: Config) -> anyhow::Result<Self> {
        let kb = match &config.kb_dir {
            Some(dir) => MovieKb::load_dir(dir)?,
            None => MovieKb::bundled(),
        };
        let store = match &config.store_dir {
            Some(dir) => SessionStore::on_disk(dir)?,
            None => SessionStore::in_memory(),
        };
        Ok(Self::new(kb, config, store)?)
    }

    fn session(&self, id: &str) -> Option<Arc<tokio::sync::Mutex<DialogState>>> {
        self.sessions.lock().unwrap().get(id).cloned()
    }
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    message: String,
    reply: Option<String>,
}

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>) -> Self {
        ApiError { status, message: message.into(), reply: None }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let mut body = serde_json::json!({ "error": self.message });
        if let Some(reply) = self.reply {
            body["reply"] = reply.into();
        }
        (self.status, Json(body)).into_response()
    }
}

impl From<JsonRejection> for ApiError {
    fn from(r: JsonRejection) -> Self {
        ApiError::new(StatusCode::BAD_REQUEST, r.body_text())
    }
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/health", get(|| async { "ok" }))
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/utterance", post(utterance))
        .route("/solve", post(solve_endpoint))
        .with_state(state)
}

pub async fn serve(config: Config) -> anyhow::Result<()> {
    let addr: SocketAddr = config.bind.parse()?;
    let state = Arc::new(AppState::from_config(config)?);
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CreateSession {
    #[serde(default)]
    pub user: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SessionCreated {
    pub id: String,
    pub user: String,
}

fn valid_constant(s: &str) -> bool {
    s.chars().next().is_some_and(|c| c.is_ascii_lowercase())
        && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

async fn create_session(
    State(app): State<Arc<AppState>>,
    body: Option<Json<CreateSession>>,
) -> Result<(StatusCode, Json<SessionCreated>), ApiError> {
    let user = body.and_then(|b| b.0.user).unwrap_or_else(|| "guest".into());
    if !valid_constant(&user) {
        return Err(ApiError::new(StatusCode::BAD_REQUEST, "user must be a lowercase identifier"));
    }
    let id = uuid::Uuid::new_v4().to_string();
    app.store
        .append(&id, &Event::Created { id: id.clone(), user: user.clone() })
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))?;
    let state = DialogState::new(id.clone(), user.clone());
    app.sessions.lock().unwrap().insert(id.clone(), Arc::new(tokio::sync::Mutex::new(state)));
    Ok((StatusCode::CREATED, Json(SessionCreated { id, user })))
}

async fn get_session(State(app): State<Arc<AppState>>, UrlPath(id): UrlPath<String>) -> Result<Json<DialogState>, ApiError> {
    let session = app.session(&id).ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, "no such session"))?;
    let state = session.lock().await.clone();
    Ok(Json(state))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UtteranceRequest {
    pub text: String,
    #[serde(default)]
    pub radius: Option<u32>,
}

async fn utterance(
    State(app): State<Arc<AppState>>,
    UrlPath(id): UrlPath<String>,
    body: Result<Json<UtteranceRequest>, JsonRejection>,
) -> Result<Response, ApiError> {
    let session = app.session(&id).ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, "no such session"))?;
    let Json(req) = body?;
    let radius = req.radius.unwrap_or(app.config.default_radius);
    if radius > app.config.max_radius {
        return Err(ApiError::new(
            StatusCode::BAD_REQUEST,
            format!("radius {radius} is above the limit of {}", app.config.max_radius),
        ));
    }
    let Some(topic) = parse_utterance(&req.text, &app.kb) else {
        return Err(ApiError {
            status: StatusCode::UNPROCESSABLE_ENTITY,
            message: TurnError::NoIntent.to_string(),
            reply: Some("Tell me about a movie or an actor you like, for example \"I like Titanic\".".into()),
        });
    };
    let mut guard = session.lock().await;
    let snapshot = guard.clone();
    let worker = app.clone();
    let turn = tokio::task::spawn_blocking(move || next_turn(&worker.kb, &snapshot, &topic, Radius::Within(radius)))
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))?
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))?;
    app.store
        .append(&id, &Event::Turn { utterance: req.text.clone(), turn: turn.clone() })
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))?;
    guard.apply(&req.text, turn.clone());
    Ok(Json(turn).into_response())
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveRequest {
    pub program: String,
    #[serde(default)]
    pub query: Option<String>,
    /// With `topic`, the response also carries the RCC of that atom.
    #[serde(default)]
    pub topic: Option<String>,
    /// RCC radius; omitted means unbounded.
    #[serde(default)]
    pub radius: Option<u32>,
    #[serde(default)]
    pub explain: bool,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SolveResponse {
    #[serde(flatten)]
    pub solution: SolveDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rcc: Option<RccDoc>,
}

fn solve_error(e: SolveError) -> ApiError {
    match e {
        SolveError::UnknownAtom(_) => ApiError::new(StatusCode::BAD_REQUEST, e.to_string()),
        SolveError::Invalid(errs) => {
            let text: Vec<String> = errs.iter().map(|e| e.to_string()).collect();
            ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, text.join("; "))
        }
        SolveError::OddLoop { .. } => ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, e.to_string()),
    }
}

async fn solve_endpoint(body: Result<Json<SolveRequest>, JsonRejection>) -> Result<Json<SolveResponse>, ApiError> {
    let Json(req) = body?;
    tokio::task::spawn_blocking(move || solve_request(&req))
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))?
        .map(Json)
}

fn solve_request(req: &SolveRequest) -> Result<SolveResponse, ApiError> {
    let bad = |m: String| ApiError::new(StatusCode::BAD_REQUEST, m);
    let p = parse_program(&req.program).map_err(|e| bad(e.to_string()))?;
    let query = match (&req.query, &p.query) {
        (Some(q), _) => p.parse_query(q).map_err(|e| bad(e.to_string()))?,
        (None, Some(q)) => q.clone(),
        (None, None) => Vec::new(),
    };
    let models = solve(&p, &query).map_err(solve_error)?;
    let solution = SolveDoc {
        query: query.iter().map(|l| l.display(p.atoms()).to_string()).collect(),
        models: models.iter().map(|m| ModelDoc::new(m, p.atoms())).collect(),
    };
    let rcc = match &req.topic {
        None => None,
        Some(t) => {
            let topic = p.atoms().lookup(t.trim()).ok_or_else(|| bad(format!("unknown atom `{t}`")))?;
            let radius = req.radius.map_or(Radius::Unbounded, Radius::Within);
            match compute_rcc(&p, topic, radius) {
                Ok(r) => {
                    let mut doc = RccDoc::new(&r, p.atoms());
                    if req.explain {
                        let g = CnrDepGraph::from_program(&p);
                        let paths = r
                            .members
                            .iter()
                            .filter_map(|m| {
                                let path = extract_path(&g, topic, m.atom).ok()?;
                                let name = p.atoms().name(m.atom);
                                Some(PathDoc::new(&path, name, &g, &Default::default()))
                            })
                            .collect();
                        doc.paths = Some(paths);
                    }
                    Some(doc)
                }
                Err(RccError::NoModel) => None,
                Err(RccError::Solve(e)) => return Err(solve_error(e)),
                Err(e) => return Err(bad(e.to_string())),
            }
        }
    };
    Ok(SolveResponse { solution, rcc })
}
