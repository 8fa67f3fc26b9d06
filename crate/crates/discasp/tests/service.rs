use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

use discasp::kb::MovieKb;
use discasp::service::{router, AppState, Config};
use discasp::store::SessionStore;

fn app_with(store: SessionStore) -> axum::Router {
    router(Arc::new(AppState::new(MovieKb::bundled(), Config::default(), store).unwrap()))
}

async fn call(app: &axum::Router, method: &str, uri: &str, body: Option<&str>) -> (StatusCode, Value) {
    let mut req = Request::builder().method(method).uri(uri);
    if body.is_some() {
        req = req.header("content-type", "application/json");
    }
    let req = req.body(body.map_or(Body::empty(), |b| Body::from(b.to_string()))).unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let value = serde_json::from_slice(&bytes).unwrap_or(Value::Null);
    (status, value)
}

async fn new_session(app: &axum::Router, user: &str) -> String {
    let (status, v) = call(app, "POST", "/sessions", Some(&json!({ "user": user }).to_string())).await;
    assert_eq!(status, StatusCode::CREATED);
    v["id"].as_str().unwrap().to_string()
}

const THREE: [&str; 3] = [
    "talk_preference(john,titanic,awards)",
    "talk_preference(john,titanic,leonardo_dicaprio)",
    "talk_preference(john,titanic,trivia)",
];

#[tokio::test]
async fn titanic_conversation() {
    let app = app_with(SessionStore::in_memory());
    let id = new_session(&app, "john").await;
    let uri = format!("/sessions/{id}/utterance");
    let (status, first) = call(&app, "POST", &uri, Some(r#"{"text":"I like Titanic"}"#)).await;
    assert_eq!(status, StatusCode::OK);
    let chosen = first["chosen"].as_str().unwrap().to_string();
    assert!(THREE.contains(&chosen.as_str()));
    assert_eq!(first["rcc"]["radius"], 3);
    assert!(!first["reply"].as_str().unwrap().is_empty());
    assert!(!first["explanation"]["steps"].as_array().unwrap().is_empty());

    let (_, second) = call(&app, "POST", &uri, Some(r#"{"text":"I like Titanic","radius":3}"#)).await;
    let second_chosen = second["chosen"].as_str().unwrap();
    assert_ne!(second_chosen, chosen);
    let still_true = second["rcc"]["members"].as_array().unwrap().iter().any(|m| m["atom"] == chosen.as_str() && m["value"] == true);
    assert!(!still_true);

    let (status, state) = call(&app, "GET", &format!("/sessions/{id}"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(state["user"], "john");
    assert_eq!(state["turns"].as_array().unwrap().len(), 2);
}

#[tokio::test]
async fn radius_changes_member_count() {
    let app = app_with(SessionStore::in_memory());
    let a = new_session(&app, "john").await;
    let b = new_session(&app, "john").await;
    let (_, r3) = call(&app, "POST", &format!("/sessions/{a}/utterance"), Some(r#"{"text":"I like Titanic"}"#)).await;
    let (_, r5) = call(&app, "POST", &format!("/sessions/{b}/utterance"), Some(r#"{"text":"I like Titanic","radius":5}"#)).await;
    let count = |v: &Value| v["rcc"]["members"].as_array().unwrap().len();
    assert!(count(&r5) > count(&r3));
}

#[tokio::test]
async fn error_statuses() {
    let app = app_with(SessionStore::in_memory());
    let (status, _) = call(&app, "GET", "/sessions/does-not-exist", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    let (status, _) = call(&app, "POST", "/sessions/does-not-exist/utterance", Some(r#"{"text":"I like Titanic"}"#)).await;
    assert_eq!(status, StatusCode::NOT_FOUND);

    let id = new_session(&app, "john").await;
    let uri = format!("/sessions/{id}/utterance");
    let (status, _) = call(&app, "POST", &uri, Some("{not json")).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, _) = call(&app, "POST", &uri, Some(r#"{"words":"hi"}"#)).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, _) = call(&app, "POST", &uri, Some(r#"{"text":"I like Titanic","radius":99}"#)).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, v) = call(&app, "POST", &uri, Some(r#"{"text":"blargh"}"#)).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert!(v["reply"].as_str().unwrap().contains("Titanic"));

    let (status, _) = call(&app, "POST", "/sessions", Some(r#"{"user":"Not Valid"}"#)).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn solve_endpoint() {
    let app = app_with(SessionStore::in_memory());
    let program = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../programs/program6.lp")).unwrap();
    let body = json!({ "program": program, "query": "p" }).to_string();
    let (status, v) = call(&app, "POST", "/solve", Some(&body)).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["models"], json!([{ "true": ["j","k","m","n","o","p","q","r","s","t","w"], "false": ["u","v","x"] }]));

    let body = json!({ "program": program, "query": "p", "topic": "q", "radius": 0 }).to_string();
    let (_, v) = call(&app, "POST", "/solve", Some(&body)).await;
    assert_eq!(v["rcc"]["members"], json!([{ "atom": "q", "value": true, "distance": 0 }]));

    let body = json!({ "program": "p :- not p.", "query": "p" }).to_string();
    let (status, _) = call(&app, "POST", "/solve", Some(&body)).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    let body = json!({ "program": "p :- ", "query": "p" }).to_string();
    let (status, _) = call(&app, "POST", "/solve", Some(&body)).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn sessions_survive_restart() {
    let dir = tempfile::tempdir().unwrap();
    let app = app_with(SessionStore::on_disk(dir.path()).unwrap());
    let id = new_session(&app, "john").await;
    let (_, first) = call(&app, "POST", &format!("/sessions/{id}/utterance"), Some(r#"{"text":"I like Titanic"}"#)).await;
    drop(app);

    let app = app_with(SessionStore::on_disk(dir.path()).unwrap());
    let (status, state) = call(&app, "GET", &format!("/sessions/{id}"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(state["turns"][0]["turn"]["chosen"], first["chosen"]);
    let (_, next) = call(&app, "POST", &format!("/sessions/{id}/utterance"), Some(r#"{"text":"I like Titanic"}"#)).await;
    assert_ne!(next["chosen"], first["chosen"]);
}

#[tokio::test]
async fn child_session_declines_adult_title() {
    let app = app_with(SessionStore::in_memory());
    let id = new_session(&app, "lily").await;
    let (status, v) = call(&app, "POST", &format!("/sessions/{id}/utterance"), Some(r#"{"text":"I like Pulp Fiction"}"#)).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["kind"], "declined");
    assert!(v["rcc"].is_null());
    let (_, state) = call(&app, "GET", &format!("/sessions/{id}"), None).await;
    assert!(state["facts"].as_array().unwrap().is_empty());
}
