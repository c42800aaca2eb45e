mod common;

use akkadian::server::{router, AppState, ServerConfig};
use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

fn app() -> Router {
    let config = ServerConfig { max_segments: 24, ..ServerConfig::default() };
    router(AppState::new(&config).unwrap(), None)
}

async fn send(app: Router, req: Request<Body>) -> (StatusCode, Value) {
    let resp = app.oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    (status, serde_json::from_slice(&bytes).unwrap_or(Value::Null))
}

async fn get(app: Router, uri: &str) -> (StatusCode, Value) {
    send(app, Request::get(uri).body(Body::empty()).unwrap()).await
}

async fn post(app: Router, body: &str) -> (StatusCode, Value) {
    let req = Request::post("/api/generate")
        .header("content-type", "application/json")
        .body(Body::from(body.to_string()))
        .unwrap();
    send(app, req).await
}

fn labels(v: &Value, key: &str) -> Vec<String> {
    v[key].as_array().unwrap().iter().map(|a| a["label"].as_str().unwrap().to_string()).collect()
}

fn ascii_forms(v: &Value) -> Vec<String> {
    v["forms"].as_array().unwrap().iter().map(|a| a["normalized"]["ascii"].as_str().unwrap().to_string()).collect()
}

#[tokio::test]
async fn parse_liqbi() {
    let (status, body) = get(app(), "/api/parse?form=liqbi").await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(labels(&body, "analyses"), ["G Precative Third Weak 3 c s"]);
    assert_eq!(body["request"]["form"], "liqbi");
    assert_eq!(body["schema_version"], 1);
    assert!(body["engine_version"].is_string());
    assert!(body["elapsed_ms"].as_f64().unwrap() >= 0.0);
}

#[tokio::test]
async fn parse_convergence_reports_three() {
    let (status, body) = get(app(), "/api/parse?form=tumalli*nikkim").await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["analyses"].as_array().unwrap().len(), 3);
}

#[tokio::test]
async fn parse_without_reading_is_empty_list() {
    let (status, body) = get(app(), "/api/parse?form=xyz").await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["analyses"], json!([]));
}

#[tokio::test]
async fn parse_rejections() {
    for (uri, status, code) in [
        ("/api/parse?form=", StatusCode::BAD_REQUEST, "missing_form"),
        ("/api/parse", StatusCode::BAD_REQUEST, "missing_form"),
        ("/api/parse?form=ip1rus", StatusCode::BAD_REQUEST, "decode_error"),
        ("/api/parse?form=a**", StatusCode::BAD_REQUEST, "decode_error"),
        (
            "/api/parse?form=iprusiprusiprusiprusiprusiprus",
            StatusCode::PAYLOAD_TOO_LARGE,
            "form_too_long",
        ),
    ] {
        let (got, body) = get(app(), uri).await;
        assert_eq!(got, status, "{uri}");
        assert_eq!(body["error"], code, "{uri}");
    }
}

#[tokio::test]
async fn generate_four_preterites() {
    let (status, body) = post(app(), r#"{"radicals":["p","r","s"],"stem":"G","tense":"Preterite","png":"3cs"}"#).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(ascii_forms(&body), ["ipras", "ipres", "ipris", "iprus"]);
    let first = &body["forms"][0]["normalized"];
    assert!(first["unicode"].is_string() && first["html"].is_string());
    assert_eq!(body["request"]["radicals"], json!(["p", "r", "s"]));
}

#[tokio::test]
async fn generate_precative_includes_liqbi() {
    let (status, body) = post(app(), r#"{"radicals":["q","b","&"],"stem":"G","tense":"Precative","png":"3cs"}"#).await;
    assert_eq!(status, StatusCode::OK);
    assert!(ascii_forms(&body).contains(&"liqbi".to_string()));
}

#[tokio::test]
async fn generate_wildcards() {
    let (status, body) = post(app(), r#"{"radicals":["p","r","s"],"stem":"G","tense":"any","png":"3cs"}"#).await;
    assert_eq!(status, StatusCode::OK);
    let tenses: std::collections::BTreeSet<&str> =
        body["forms"].as_array().unwrap().iter().map(|f| f["tense"].as_str().unwrap()).collect();
    assert!(tenses.len() >= 5, "{tenses:?}");
}

#[tokio::test]
async fn generate_with_suffix() {
    let body = r#"{"radicals":["m","l","&"],"stem":"D","tense":"Preterite","png":"2fs",
        "suffix":{"ventive":true,"dative":"2fs","accusative":null,"ma":false}}"#;
    let (status, body) = post(app(), body).await;
    assert_eq!(status, StatusCode::OK);
    let labels = labels(&body, "forms");
    assert!(!labels.is_empty());
    assert!(labels.iter().all(|l| l.ends_with("Ventive 2 f s")), "{labels:?}");
}

#[tokio::test]
async fn generate_rejections() {
    for (body, status, code) in [
        (r#"{"radicals":["p","r","s"],"stem":"G","tense":"Preterite","png":"9zz"}"#, 400, "schema_violation"),
        (r#"{"radicals":["p","r"],"stem":"G"}"#, 400, "schema_violation"),
        (r#"{"radicals":["p","r","s"],"stem":"Q"}"#, 400, "schema_violation"),
        (r#"{"radicals":["p","r","s"],"colour":"red"}"#, 400, "schema_violation"),
        (r#"not json"#, 400, "schema_violation"),
        (r#"{"radicals":["p","r","s"],"png":"3ms"}"#, 400, "schema_violation"),
        (r#"{"radicals":["p","r","s"],"stem":"D","tense":"Imperative","png":"3cs"}"#, 422, "unsupported_cell"),
    ] {
        let (got, reply) = post(app(), body).await;
        assert_eq!(got.as_u16(), status, "{body}");
        assert_eq!(reply["error"], code, "{body}");
    }
}

#[tokio::test]
async fn static_fallback_serves_files() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("index.html"), "<p>console</p>").unwrap();
    let app = router(AppState::new(&ServerConfig::default()).unwrap(), Some(dir.path().to_path_buf()));
    let resp = app.oneshot(Request::get("/index.html").body(Body::empty()).unwrap()).await.unwrap();
    assert_eq!(resp.status(), StatusCode::OK);
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    assert_eq!(&bytes[..], b"<p>console</p>");
}

fn strip_elapsed(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("elapsed_ms");
    v
}

#[tokio::test(flavor = "multi_thread", worker_threads = 4)]
async fn parallel_matches_serial() {
    let app = app();
    let forms: Vec<String> = common::paradigm_rows().into_iter().map(|r| r.form).collect();
    let mut serial = Vec::new();
    for f in &forms {
        let (_, body) = get(app.clone(), &format!("/api/parse?form={}", f.replace('$', "%24").replace('\'', "%27"))).await;
        serial.push(strip_elapsed(body));
    }
    let handles: Vec<_> = forms
        .iter()
        .map(|f| {
            let app = app.clone();
            let uri = format!("/api/parse?form={}", f.replace('$', "%24").replace('\'', "%27"));
            tokio::spawn(async move { strip_elapsed(get(app, &uri).await.1) })
        })
        .collect();
    for (i, h) in handles.into_iter().enumerate() {
        assert_eq!(h.await.unwrap(), serial[i], "{}", forms[i]);
    }
    assert!(serial.iter().all(|v| !v["analyses"].as_array().unwrap().is_empty()));
}
