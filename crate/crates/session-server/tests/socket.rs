use futures::{SinkExt, StreamExt};
use serde_json::{json, Value};
use session_server::{router, ServerConfig, WS_PATH};
use tokio_tungstenite::tungstenite::Message;

#[tokio::test]
async fn websocket_round_trip_and_independent_connections() {
    let config = ServerConfig { root: testkit::fixtures_dir(), ..ServerConfig::default() };
    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
    let addr = listener.local_addr().unwrap();
    tokio::spawn(async move { axum::serve(listener, router(config)).await.unwrap() });

    let url = format!("ws://{addr}{WS_PATH}");
    let (mut first, _) = tokio_tungstenite::connect_async(&url).await.unwrap();
    let (mut second, _) = tokio_tungstenite::connect_async(&url).await.unwrap();

    async fn ask<S>(ws: &mut S, msg: Value) -> Value
    where
        S: SinkExt<Message> + StreamExt<Item = Result<Message, tokio_tungstenite::tungstenite::Error>> + Unpin,
        <S as futures::Sink<Message>>::Error: std::fmt::Debug,
    {
        ws.send(Message::Text(msg.to_string())).await.unwrap();
        let reply = ws.next().await.unwrap().unwrap();
        serde_json::from_str(reply.to_text().unwrap()).unwrap()
    }

    let load = json!({"v": 1, "type": "load", "automaton": {"path": "acd.json"}, "kind": "parity"});
    assert_eq!(ask(&mut first, load.clone()).await["type"], "ack");
    assert_eq!(ask(&mut second, load).await["type"], "ack");
    let r = ask(&mut first, json!({"v": 1, "type": "step", "letter": "INIT_SYS"})).await;
    assert_eq!(r["snapshot"]["state"], "sys");
    let r = ask(&mut second, json!({"v": 1, "type": "recommend"})).await;
    assert_eq!((r["state"].as_str(), r["any"].clone()), (Some("init"), json!(["INIT_SYS"])));
    let r = ask(&mut first, json!({"v": 1, "type": "bogus"})).await;
    assert_eq!(r["code"], 400);
    let r = ask(&mut first, json!({"v": 1, "type": "status"})).await;
    assert_eq!(r["steps"], 1);
}

#[tokio::test]
async fn serves_static_assets() {
    let dir = std::env::temp_dir().join(format!("consultrt-assets-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::write(dir.join("index.html"), "<html>console</html>").unwrap();
    let config = ServerConfig { assets: Some(dir.clone()), ..ServerConfig::default() };
    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
    let addr = listener.local_addr().unwrap();
    tokio::spawn(async move { axum::serve(listener, router(config)).await.unwrap() });
    let mut stream = tokio::net::TcpStream::connect(addr).await.unwrap();
    use tokio::io::{AsyncReadExt, AsyncWriteExt};
    stream.write_all(b"GET /index.html HTTP/1.1\r\nHost: x\r\nConnection: close\r\n\r\n").await.unwrap();
    let mut body = String::new();
    stream.read_to_string(&mut body).await.unwrap();
    assert!(body.starts_with("HTTP/1.1 200"), "{body}");
    assert!(body.contains("<html>console</html>"));
    std::fs::remove_dir_all(dir).unwrap();
}
