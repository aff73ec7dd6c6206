#![no_main]

use libfuzzer_sys::fuzz_target;
use rc_build::Caps;
use session_server::protocol::Connection;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let root = concat!(env!("CARGO_MANIFEST_DIR"), "/../fixtures");
    let mut c = Connection::new(root, Caps { cycles: 1_000, trails: 1_000 });
    // one message per line, as a client would send them
    for line in text.lines() {
        let reply = c.handle_text(line);
        let v: serde_json::Value = serde_json::from_str(&reply).expect("replies are JSON");
        assert!(v.get("type").is_some());
    }
});
