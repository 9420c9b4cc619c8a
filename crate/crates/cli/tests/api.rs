use std::sync::Arc;

use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use reqlint::api::router;
use reqlint::service::Service;
use reqlint_core::dataset::{sample_profiles, SAMPLE_DATASET};
use reqlint_core::{PosSmellMap, SmellLexicon, SmellTable, SmellType};
use serde_json::{json, Value};
use tower::ServiceExt;

struct App {
    router: Router,
    _dir: tempfile::TempDir,
}

fn app() -> App {
    let dir = tempfile::tempdir().unwrap();
    let svc = Service::open(dir.path(), SmellLexicon::builtin_default().clone(), PosSmellMap::default()).unwrap();
    App { router: router(Arc::new(svc)), _dir: dir }
}

impl App {
    async fn send(&self, method: Method, uri: &str, body: Body, content_type: &str) -> (StatusCode, Vec<u8>) {
        let req = Request::builder().method(method).uri(uri).header("content-type", content_type).body(body).unwrap();
        let resp = self.router.clone().oneshot(req).await.unwrap();
        let status = resp.status();
        (status, resp.into_body().collect().await.unwrap().to_bytes().to_vec())
    }

    async fn json(&self, method: Method, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
        let body = body.map(|b| Body::from(b.to_string())).unwrap_or_else(Body::empty);
        let (status, bytes) = self.send(method, uri, body, "application/json").await;
        (status, serde_json::from_slice(&bytes).unwrap_or(Value::Null))
    }

    async fn project(&self, name: &str) -> String {
        let profile = serde_json::to_value(&sample_profiles()[name]).unwrap();
        let (status, p) = self.json(Method::POST, "/projects", Some(json!({ "name": name, "profile": profile }))).await;
        assert_eq!(status, StatusCode::CREATED, "{p}");
        p["id"].as_str().unwrap().to_string()
    }

    async fn import(&self, project: &str, query: &str) -> Value {
        let uri = format!("/projects/{project}/import{query}");
        let (status, bytes) = self.send(Method::POST, &uri, Body::from(SAMPLE_DATASET), "text/csv").await;
        assert_eq!(status, StatusCode::OK);
        serde_json::from_slice(&bytes).unwrap()
    }
}

const R7: &str = "The system will employ on demand asynchronous loading for faster execution of pages.";

#[tokio::test]
async fn analyze_scores_r7() {
    let app = app();
    let id = app.project("Gamma-J").await;
    let (status, doc) = app.json(Method::POST, "/analyze", Some(json!({ "text": R7, "project_id": id }))).await;
    assert_eq!(status, StatusCode::OK, "{doc}");
    assert!((doc["testability_softened"].as_f64().unwrap() - 0.61).abs() <= 0.01);
    assert!((doc["clarity"].as_f64().unwrap() - 0.6078).abs() < 1e-4);
    assert_eq!(doc["findings"].as_array().unwrap().len(), 2);
    assert!(doc["lexicon_version"].is_string());

    let profile = serde_json::to_value(&sample_profiles()["Gamma-J"]).unwrap();
    let (status, inline) = app.json(Method::POST, "/analyze", Some(json!({ "text": R7, "profile": profile }))).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(inline, doc);
}

#[tokio::test]
async fn bad_requests_and_unknown_ids() {
    let app = app();
    let id = app.project("KeePass").await;
    let cases = [
        (Method::POST, "/analyze".to_string(), Some(json!({ "text": "  ", "project_id": id }))),
        (Method::POST, "/analyze".to_string(), Some(json!({ "text": R7 }))),
        (Method::POST, "/analyze".to_string(), Some(json!({ "nope": 1 }))),
        (Method::POST, format!("/projects/{id}/requirements"), Some(json!({ "text": "" }))),
        (Method::POST, "/projects".to_string(), Some(json!({ "name": "KeePass", "profile": sample_profiles()["KeePass"] }))),
        (Method::GET, format!("/projects/{id}/report?policy=lenient"), None),
    ];
    for (method, uri, body) in cases {
        let (status, err) = app.json(method, &uri, body).await;
        assert_eq!(status, StatusCode::BAD_REQUEST, "{uri}: {err}");
        assert!(err["error"].is_string());
    }
    let missing = [
        (Method::POST, "/analyze", Some(json!({ "text": R7, "project_id": "nope" }))),
        (Method::GET, "/requirements/nope", None),
        (Method::POST, "/requirements/nope/review", Some(json!({}))),
        (Method::GET, "/projects/nope/export", None),
        (Method::GET, "/projects/nope/report", None),
        (Method::POST, "/projects/nope/requirements", Some(json!({ "text": R7 }))),
    ];
    for (method, uri, body) in missing {
        let (status, _) = app.json(method, uri, body).await;
        assert_eq!(status, StatusCode::NOT_FOUND, "{uri}");
    }
}

#[tokio::test]
async fn requirement_labels_and_review() {
    let app = app();
    let id = app.project("Gamma-J").await;
    let uri = format!("/projects/{id}/requirements");
    let (status, r) = app.json(Method::POST, &uri, Some(json!({ "text": R7 }))).await;
    assert_eq!(status, StatusCode::CREATED);
    let (status, again) = app.json(Method::POST, &uri, Some(json!({ "text": format!("  {R7} ") }))).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(again["id"], r["id"]);
    let rid = r["id"].as_str().unwrap();
    assert_eq!(r["review"], "unreviewed");

    let mut labels = SmellTable::new();
    labels.push(SmellType::Comparative, "faster");
    labels.push(SmellType::Polysemy, "pages");
    let labels = serde_json::to_value(&labels).unwrap();
    let (status, r) =
        app.json(Method::PUT, &format!("/requirements/{rid}/labels"), Some(json!({ "labels": labels, "actor": "ann" }))).await;
    assert_eq!(status, StatusCode::OK, "{r}");
    assert_eq!(r["labels"], labels);

    let mut bad = SmellTable::new();
    bad.push(SmellType::Polysemy, "elephant");
    let (status, _) = app
        .json(Method::PUT, &format!("/requirements/{rid}/labels"), Some(json!({ "labels": bad, "actor": "ann" })))
        .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);

    let (status, r) = app.json(Method::POST, &format!("/requirements/{rid}/review"), Some(json!({ "actor": "lead" }))).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(r["review"], "reviewed");
    let (_, fetched) = app.json(Method::GET, &format!("/requirements/{rid}"), None).await;
    assert_eq!(fetched, r);
    let (_, list) = app.json(Method::GET, &uri, None).await;
    assert_eq!(list.as_array().unwrap().len(), 1);
}

#[tokio::test]
async fn import_export_and_report() {
    let app = app();
    let id = app.project("KeePass").await;
    let first = app.import(&id, "?reviewer=lead").await;
    assert_eq!((first["created"].as_u64(), first["duplicates"].as_u64()), (Some(8), Some(0)));
    let second = app.import(&id, "").await;
    assert_eq!((second["created"].as_u64(), second["duplicates"].as_u64()), (Some(0), Some(8)));

    let (status, csv) = app.send(Method::GET, &format!("/projects/{id}/export"), Body::empty(), "text/csv").await;
    assert_eq!(status, StatusCode::OK);
    let other = app.project("Peering").await;
    let (status, _) = app.send(Method::POST, &format!("/projects/{other}/import"), Body::from(csv.clone()), "text/csv").await;
    assert_eq!(status, StatusCode::OK);
    let (_, csv2) = app.send(Method::GET, &format!("/projects/{other}/export"), Body::empty(), "text/csv").await;
    let body = |b: &[u8]| String::from_utf8(b.to_vec()).unwrap().replace("KeePass", "").replace("Peering", "");
    assert_eq!(body(&csv), body(&csv2));

    let (status, rep) = app.json(Method::GET, &format!("/projects/{id}/report?policy=hardened"), None).await;
    assert_eq!(status, StatusCode::OK, "{rep}");
    let hist: Vec<u64> = rep["histogram"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).collect();
    assert_eq!(hist.len(), 10);
    assert_eq!(hist.iter().sum::<u64>(), 8);
    assert_eq!(rep["reviewed"], 8);
    assert_eq!(rep["evaluation"]["per_smell"].as_array().unwrap().len(), 9);

    let (_, projects) = app.json(Method::GET, "/projects", None).await;
    assert_eq!(projects.as_array().unwrap().len(), 2);
}

#[tokio::test]
async fn report_on_empty_project_is_rejected() {
    let app = app();
    let id = app.project("CCTNS").await;
    let (status, _) = app.json(Method::GET, &format!("/projects/{id}/report"), None).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}
