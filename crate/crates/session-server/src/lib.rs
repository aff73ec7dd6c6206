//! Sessions over websockets: one session per connection, JSON messages as
//! described in [`protocol`]. Optionally serves the console's static assets.

pub mod protocol;

use std::net::SocketAddr;
use std::path::PathBuf;

use axum::extract::ws::{Message, WebSocket, WebSocketUpgrade};
use axum::extract::State;
use axum::response::Response;
use axum::routing::get;
use axum::Router;
use rc_build::Caps;
use tower_http::services::ServeDir;

pub use protocol::{ClientMessage, Connection, ServerMessage, Snapshot, StepPayload, PROTOCOL_VERSION};

/// Where the message endpoint is mounted.
pub const WS_PATH: &str = "/ws";

#[derive(Clone, Debug)]
pub struct ServerConfig {
    /// Directory that relative paths in `load` are resolved against.
    pub root: PathBuf,
    /// Static console assets served at `/`.
    pub assets: Option<PathBuf>,
    pub caps: Caps,
}

impl Default for ServerConfig {
    fn default() -> Self {
        ServerConfig { root: PathBuf::from("."), assets: None, caps: Caps::default() }
    }
}

pub fn router(config: ServerConfig) -> Router {
    let assets = config.assets.clone();
    let app = Router::new().route(WS_PATH, get(upgrade)).with_state(config);
    match assets {
        Some(dir) => app.fallback_service(ServeDir::new(dir)),
        None => app,
    }
}

async fn upgrade(ws: WebSocketUpgrade, State(config): State<ServerConfig>) -> Response {
    ws.on_upgrade(move |socket| run_connection(socket, config))
}

async fn run_connection(mut socket: WebSocket, config: ServerConfig) {
    let mut conn = Connection::new(config.root, config.caps);
    while let Some(Ok(msg)) = socket.recv().await {
        let reply = match msg {
            Message::Text(text) => conn.handle_text(&text),
            Message::Binary(bytes) => match std::str::from_utf8(&bytes) {
                Ok(text) => conn.handle_text(text),
                Err(_) => ServerMessage::error(protocol::code::MALFORMED, "binary message is not UTF-8").to_json(),
            },
            Message::Close(_) => break,
            Message::Ping(_) | Message::Pong(_) => continue,
        };
        if socket.send(Message::Text(reply)).await.is_err() {
            break;
        }
    }
}

/// Serves until the process ends. Binds `addr` first so callers can report
/// a busy port.
pub async fn serve(addr: SocketAddr, config: ServerConfig) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(config)).await
}
