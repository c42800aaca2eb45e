//! Run the HTTP service. Configure with AKKAD_ADDR, AKKAD_RULES_DIR,
//! AKKAD_MAX_SEGMENTS and AKKAD_STATIC_DIR.
//!
//!     cargo run --example serve
//!     curl 'http://127.0.0.1:8080/api/parse?form=liqbi'
//!     curl -d '{"radicals":["p","r","s"],"stem":"G","tense":"Preterite","png":"3cs"}' \
//!          -H 'content-type: application/json' http://127.0.0.1:8080/api/generate

use akkadian::server::{serve, ServerConfig};

#[tokio::main]
async fn main() -> anyhow::Result<()> {
    serve(ServerConfig::from_env()?).await
}
