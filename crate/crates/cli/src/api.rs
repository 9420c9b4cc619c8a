//! JSON over HTTP in front of [`Service`].

use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post, put};
use axum::{Json, Router};
use reqlint_core::{AlphaProfile, Policy, SmellTable};
use serde::Deserialize;
use serde_json::json;

use crate::service::{Service, ServiceError};

pub struct ApiError(StatusCode, String);

impl From<ServiceError> for ApiError {
    fn from(e: ServiceError) -> Self {
        let status = match &e {
            ServiceError::UnknownProject(_) | ServiceError::UnknownRequirement(_) => StatusCode::NOT_FOUND,
            ServiceError::Store(_) => StatusCode::INTERNAL_SERVER_ERROR,
            _ => StatusCode::BAD_REQUEST,
        };
        ApiError(status, e.to_string())
    }
}

impl From<JsonRejection> for ApiError {
    fn from(e: JsonRejection) -> Self {
        ApiError(StatusCode::BAD_REQUEST, e.body_text())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.0, Json(json!({ "error": self.1 }))).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;
type Shared = State<Arc<Service>>;

/// Blocking service work off the async executor.
async fn run<T, F>(svc: Arc<Service>, f: F) -> ApiResult<T>
where
    F: FnOnce(&Service) -> Result<T, ServiceError> + Send + 'static,
    T: Send + 'static,
{
    tokio::task::spawn_blocking(move || f(&svc))
        .await
        .map_err(|e| ApiError(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))?
        .map_err(ApiError::from)
}

#[derive(Deserialize)]
struct NewProject {
    name: String,
    profile: AlphaProfile,
}

#[derive(Deserialize)]
struct NewRequirement {
    text: String,
}

#[derive(Deserialize)]
struct AnalyzeRequest {
    text: String,
    project_id: Option<String>,
    profile: Option<AlphaProfile>,
}

#[derive(Deserialize)]
struct LabelsRequest {
    labels: SmellTable,
    #[serde(default = "anonymous")]
    actor: String,
}

#[derive(Deserialize)]
struct ReviewRequest {
    #[serde(default = "yes")]
    reviewed: bool,
    #[serde(default = "anonymous")]
    actor: String,
}

#[derive(Deserialize)]
struct ImportQuery {
    /// Marks imported rows reviewed on behalf of this actor.
    reviewer: Option<String>,
}

#[derive(Deserialize)]
struct ReportQuery {
    policy: Option<String>,
}

fn anonymous() -> String {
    "anonymous".into()
}

fn yes() -> bool {
    true
}

pub fn router(service: Arc<Service>) -> Router {
    Router::new()
        .route("/projects", post(create_project).get(list_projects))
        .route("/projects/{id}/requirements", post(add_requirement).get(list_requirements))
        .route("/projects/{id}/import", post(import))
        .route("/projects/{id}/export", get(export))
        .route("/projects/{id}/report", get(report))
        .route("/analyze", post(analyze))
        .route("/requirements/{id}", get(requirement))
        .route("/requirements/{id}/labels", put(set_labels))
        .route("/requirements/{id}/review", post(review))
        .with_state(service)
}

async fn create_project(State(svc): Shared, body: Result<Json<NewProject>, JsonRejection>) -> ApiResult<Response> {
    let Json(body) = body?;
    let p = run(svc, move |s| s.create_project(&body.name, body.profile)).await?;
    Ok((StatusCode::CREATED, Json(p)).into_response())
}

async fn list_projects(State(svc): Shared) -> Response {
    Json(svc.projects()).into_response()
}

async fn add_requirement(
    State(svc): Shared,
    Path(id): Path<String>,
    body: Result<Json<NewRequirement>, JsonRejection>,
) -> ApiResult<Response> {
    let Json(body) = body?;
    let (r, created) = run(svc, move |s| s.add_requirement(&id, &body.text)).await?;
    let status = if created { StatusCode::CREATED } else { StatusCode::OK };
    Ok((status, Json(r)).into_response())
}

async fn list_requirements(State(svc): Shared, Path(id): Path<String>) -> ApiResult<Response> {
    Ok(Json(svc.requirements(&id)?).into_response())
}

async fn requirement(State(svc): Shared, Path(id): Path<String>) -> ApiResult<Response> {
    Ok(Json(svc.requirement(&id)?).into_response())
}

async fn analyze(State(svc): Shared, body: Result<Json<AnalyzeRequest>, JsonRejection>) -> ApiResult<Response> {
    let Json(req) = body?;
    if req.text.trim().is_empty() {
        return Err(ApiError(StatusCode::BAD_REQUEST, "requirement text is blank".into()));
    }
    let profile = match (req.project_id, req.profile) {
        (Some(id), _) => svc.project(&id)?.profile,
        (None, Some(p)) => p,
        (None, None) => return Err(ApiError(StatusCode::BAD_REQUEST, "give a project_id or a profile".into())),
    };
    let doc = run(svc, move |s| s.analyze(&req.text, &profile)).await?;
    Ok(Json(doc).into_response())
}

async fn set_labels(
    State(svc): Shared,
    Path(id): Path<String>,
    body: Result<Json<LabelsRequest>, JsonRejection>,
) -> ApiResult<Response> {
    let Json(body) = body?;
    let r = run(svc, move |s| s.set_labels(&id, body.labels, &body.actor)).await?;
    Ok(Json(r).into_response())
}

async fn review(
    State(svc): Shared,
    Path(id): Path<String>,
    body: Result<Json<ReviewRequest>, JsonRejection>,
) -> ApiResult<Response> {
    let Json(body) = body?;
    let r = run(svc, move |s| s.review(&id, body.reviewed, &body.actor)).await?;
    Ok(Json(r).into_response())
}

async fn import(State(svc): Shared, Path(id): Path<String>, Query(q): Query<ImportQuery>, body: Bytes) -> ApiResult<Response> {
    let summary = run(svc, move |s| s.import_csv(&id, &body[..], q.reviewer.as_deref())).await?;
    Ok(Json(summary).into_response())
}

async fn export(State(svc): Shared, Path(id): Path<String>) -> ApiResult<Response> {
    let buf = run(svc, move |s| {
        let mut buf = Vec::new();
        s.export_csv(&id, &mut buf)?;
        Ok(buf)
    })
    .await?;
    Ok(([(header::CONTENT_TYPE, "text/csv; charset=utf-8")], buf).into_response())
}

async fn report(State(svc): Shared, Path(id): Path<String>, Query(q): Query<ReportQuery>) -> ApiResult<Response> {
    let policy: Policy = match q.policy.as_deref() {
        None => Policy::Softened,
        Some(p) => p.parse().map_err(|e: String| ApiError(StatusCode::BAD_REQUEST, e))?,
    };
    let rep = run(svc, move |s| s.report(&id, policy)).await?;
    Ok(Json(rep).into_response())
}

/// Serves the API on `addr` until interrupted.
pub async fn serve(service: Arc<Service>, addr: std::net::SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    log::info!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(service))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
