//! Local JSON-over-HTTP service.
//!
//! Everything is synchronous except solving: `POST /api/solve` queues a job on
//! a bounded worker pool and returns its id, which is then polled with
//! `GET /api/solve/{id}` or cancelled with `DELETE /api/solve/{id}`. Job state
//! lives in memory only.

use std::collections::HashMap;
use std::net::SocketAddr;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use axum::body::Bytes;
use axum::extract::rejection::QueryRejection;
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use peaceful_core::{AngleSpec, GridDim, SearchMode, SolveReport};
use serde::Serialize;
use tokio::sync::Semaphore;

use crate::api::{self, ApiError, ApiResult, PointsRequest, SolveRequest};

#[derive(Clone, Debug)]
pub struct ServiceConfig {
    /// Requests with a larger `n` are rejected with 422.
    pub n_cap: u32,
    /// Number of solve jobs allowed to run at once.
    pub workers: usize,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            n_cap: api::DEFAULT_N_CAP,
            workers: std::thread::available_parallelism().map_or(2, |n| n.get()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum JobStatus {
    Queued,
    Running,
    Done,
    Cancelled,
    Failed,
}

/// What `GET /api/solve/{id}` returns.
#[derive(Clone, Debug, Serialize)]
pub struct JobView {
    pub id: u64,
    pub status: JobStatus,
    pub n: GridDim,
    pub theta: AngleSpec,
    pub mode: SearchMode,
    pub result: Option<SolveReport>,
    pub error: Option<ApiError>,
}

struct Job {
    view: JobView,
    cancel: Arc<AtomicBool>,
}

struct Shared {
    config: ServiceConfig,
    jobs: Mutex<HashMap<u64, Job>>,
    next_id: AtomicU64,
    workers: Arc<Semaphore>,
}

#[derive(Clone)]
pub struct AppState(Arc<Shared>);

impl AppState {
    pub fn new(config: ServiceConfig) -> Self {
        let workers = Arc::new(Semaphore::new(config.workers.max(1)));
        AppState(Arc::new(Shared {
            config,
            jobs: Mutex::new(HashMap::new()),
            next_id: AtomicU64::new(1),
            workers,
        }))
    }

    fn cap(&self) -> u32 {
        self.0.config.n_cap
    }

    fn update(&self, id: u64, f: impl FnOnce(&mut JobView)) {
        if let Some(job) = self.0.jobs.lock().unwrap().get_mut(&id) {
            f(&mut job.view);
        }
    }

    fn view(&self, id: u64) -> ApiResult<JobView> {
        self.0
            .jobs
            .lock()
            .unwrap()
            .get(&id)
            .map(|j| j.view.clone())
            .ok_or_else(|| unknown_job(id))
    }
}

fn job_id(text: &str) -> ApiResult<u64> {
    text.parse()
        .map_err(|_| ApiError::new(404, "unknown_job", format!("no solve job with id {text:?}")))
}

fn unknown_job(id: u64) -> ApiError {
    ApiError::new(404, "unknown_job", format!("no solve job with id {id}"))
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/api/verify", post(verify))
        .route("/api/blocked", post(blocked))
        .route("/api/bounds", get(bounds))
        .route("/api/construct", get(construct))
        .route("/api/solve", post(start_solve))
        .route("/api/solve/{id}", get(solve_status).delete(cancel_solve))
        .fallback(|| async { ApiError::new(404, "not_found", "no such endpoint") })
        .with_state(state)
}

/// Binds `addr` and serves until Ctrl-C.
pub async fn serve(addr: SocketAddr, config: ServiceConfig) -> anyhow::Result<()> {
    use anyhow::Context;
    let listener = tokio::net::TcpListener::bind(addr)
        .await
        .with_context(|| format!("cannot listen on {addr}"))?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(AppState::new(config)))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}

fn json(status: u16, body: String) -> Response {
    let status = StatusCode::from_u16(status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
    (status, [(header::CONTENT_TYPE, "application/json")], body).into_response()
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        json(self.status, api::render(&self))
    }
}

fn reply<T: Serialize>(result: ApiResult<T>) -> Response {
    match result {
        Ok(value) => json(200, api::render(&value)),
        Err(e) => e.into_response(),
    }
}

type Params = Result<Query<HashMap<String, String>>, QueryRejection>;

fn params(q: Params) -> ApiResult<HashMap<String, String>> {
    q.map(|Query(m)| m)
        .map_err(|e| ApiError::bad_request("malformed_query", e.body_text()))
}

fn required<'a>(m: &'a HashMap<String, String>, key: &str) -> ApiResult<&'a str> {
    m.get(key)
        .map(String::as_str)
        .ok_or_else(|| ApiError::bad_request("missing_parameter", format!("missing {key}")))
}

fn parse_n(text: &str) -> ApiResult<u32> {
    text.trim()
        .parse()
        .map_err(|_| ApiError::bad_request("parse_error", format!("invalid n {text:?}")))
}

async fn verify(State(state): State<AppState>, body: Bytes) -> Response {
    reply(
        text(&body)
            .and_then(api::parse_json::<PointsRequest>)
            .and_then(|req| api::verify_request(&req, state.cap())),
    )
}

async fn blocked(State(state): State<AppState>, body: Bytes) -> Response {
    reply(
        text(&body)
            .and_then(api::parse_json::<PointsRequest>)
            .and_then(|req| api::blocked_request(&req, state.cap())),
    )
}

fn text(body: &Bytes) -> ApiResult<&str> {
    std::str::from_utf8(body).map_err(|e| ApiError::bad_request("malformed_json", e.to_string()))
}

async fn bounds(State(state): State<AppState>, q: Params) -> Response {
    reply(params(q).and_then(|m| {
        let n = parse_n(required(&m, "n")?)?;
        api::bounds_request(n, required(&m, "theta")?, state.cap())
    }))
}

async fn construct(State(state): State<AppState>, q: Params) -> Response {
    reply(params(q).and_then(|m| {
        let kind = required(&m, "kind")?.parse()?;
        let n = m.get("n").map(|s| parse_n(s)).transpose()?;
        let transpose = matches!(m.get("transpose").map(String::as_str), Some("true" | "1"));
        api::construct(
            kind,
            n,
            m.get("theta").map(String::as_str),
            transpose,
            state.cap(),
        )
    }))
}

async fn start_solve(State(state): State<AppState>, body: Bytes) -> Response {
    let parsed = text(&body)
        .and_then(api::parse_json::<SolveRequest>)
        .and_then(|req| req.config(state.cap()));
    let (dim, theta, mut cfg) = match parsed {
        Ok(v) => v,
        Err(e) => return e.into_response(),
    };
    let id = state.0.next_id.fetch_add(1, Ordering::Relaxed);
    let cancel = Arc::new(AtomicBool::new(false));
    cfg.cancel = Some(cancel.clone());
    let view = JobView {
        id,
        status: JobStatus::Queued,
        n: dim,
        theta,
        mode: cfg.mode,
        result: None,
        error: None,
    };
    state.0.jobs.lock().unwrap().insert(
        id,
        Job {
            view: view.clone(),
            cancel: cancel.clone(),
        },
    );

    let worker_state = state.clone();
    tokio::spawn(async move {
        let state = worker_state;
        let Ok(_permit) = state.0.workers.clone().acquire_owned().await else {
            return;
        };
        if cancel.load(Ordering::Relaxed) {
            state.update(id, |v| v.status = JobStatus::Cancelled);
            return;
        }
        state.update(id, |v| v.status = JobStatus::Running);
        let outcome =
            tokio::task::spawn_blocking(move || peaceful_core::solve(dim, theta, &cfg)).await;
        let cancelled = cancel.load(Ordering::Relaxed);
        state.update(id, |v| match outcome {
            Ok(Ok(report)) => {
                v.status = if cancelled {
                    JobStatus::Cancelled
                } else {
                    JobStatus::Done
                };
                v.result = Some(report);
            }
            Ok(Err(e)) => {
                v.status = JobStatus::Failed;
                v.error = Some(e.into());
            }
            Err(e) => {
                v.status = JobStatus::Failed;
                v.error = Some(ApiError::new(500, "internal", e.to_string()));
            }
        });
    });
    json(202, api::render(&view))
}

async fn solve_status(State(state): State<AppState>, Path(id): Path<String>) -> Response {
    reply(job_id(&id).and_then(|id| state.view(id)))
}

/// Requests cancellation. A queued job is cancelled at once; a running one
/// stops at its next search node and keeps its best-so-far result.
async fn cancel_solve(State(state): State<AppState>, Path(id): Path<String>) -> Response {
    let id = match job_id(&id) {
        Ok(id) => id,
        Err(e) => return e.into_response(),
    };
    let result = {
        let mut jobs = state.0.jobs.lock().unwrap();
        match jobs.get_mut(&id) {
            Some(job) => {
                job.cancel.store(true, Ordering::Relaxed);
                if job.view.status == JobStatus::Queued {
                    job.view.status = JobStatus::Cancelled;
                }
                Ok(job.view.clone())
            }
            None => Err(unknown_job(id)),
        }
    };
    reply(result)
}
