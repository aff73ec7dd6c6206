use proptest::prelude::*;
use rc_build::Caps;
use serde_json::{json, Value};
use session_server::protocol::{code, Connection};
use testkit::{fixture_text, fixtures_dir};

fn conn() -> Connection {
    Connection::new(fixtures_dir(), Caps::default())
}

fn send(c: &mut Connection, msg: Value) -> Value {
    serde_json::from_str(&c.handle_text(&msg.to_string())).unwrap()
}

fn load_acd(c: &mut Connection) {
    let r = send(c, json!({"v": 1, "type": "load", "automaton": {"path": "acd.json"}, "kind": "parity"}));
    assert_eq!(r["type"], "ack", "{r}");
}

fn snapshot_of(c: &mut Connection) -> Value {
    send(c, json!({"v": 1, "type": "status"}))
}

#[test]
fn hello_is_acknowledged() {
    let r = send(&mut conn(), json!({"v": 1, "type": "hello", "client": "test"}));
    assert_eq!(r, json!({"type": "ack", "v": 1, "of": "hello"}));
}

#[test]
fn loaded_acd_recommends_init_sys() {
    let mut c = conn();
    load_acd(&mut c);
    let r = send(&mut c, json!({"v": 1, "type": "recommend"}));
    assert_eq!(r["type"], "state_snapshot");
    assert_eq!(r["any"], json!(["INIT_SYS"]));
    assert_eq!(r["state"], "init");
    assert_eq!(r["verdict"], "pending");
}

#[test]
fn whatif_does_not_move_the_session() {
    let mut c = conn();
    load_acd(&mut c);
    let before = snapshot_of(&mut c);
    let r = send(&mut c, json!({"v": 1, "type": "whatif", "letter": "CALL"}));
    assert_eq!(r["type"], "step_report");
    assert_eq!(r["hypothetical"], true);
    assert_eq!(r["any_recommended"], false);
    assert_eq!(r["verdict_after"], "violated");
    assert_eq!(snapshot_of(&mut c), before);
}

#[test]
fn unknown_letter_is_an_error_and_changes_nothing() {
    let mut c = conn();
    load_acd(&mut c);
    let before = snapshot_of(&mut c);
    let r = send(&mut c, json!({"v": 1, "type": "step", "letter": "NOPE"}));
    assert_eq!((r["type"].as_str(), r["code"].as_u64()), (Some("error"), Some(code::INVALID as u64)));
    assert_eq!(snapshot_of(&mut c), before);
}

#[test]
fn steps_report_deviations_and_verdicts() {
    let mut c = conn();
    load_acd(&mut c);
    let r = send(&mut c, json!({"v": 1, "type": "step", "letter": "INIT_SYS"}));
    assert_eq!(r["hypothetical"], false);
    assert_eq!(r["any_recommended"], true);
    assert_eq!(r["snapshot"]["any"], json!(["INIT_DB"]));
    assert_eq!(r["snapshot"]["cyclic"], json!([]));
    let r = send(&mut c, json!({"v": 1, "type": "step", "letter": "CALL"}));
    assert_eq!(r["verdict_after"], "violated");
    assert_eq!(r["snapshot"]["violated_at"], 1);
    let r = send(&mut c, json!({"v": 1, "type": "reset"}));
    assert_eq!((r["steps"].as_u64(), r["verdict"].as_str()), (Some(0), Some("pending")));
}

#[test]
fn malformed_messages_get_errors_and_keep_the_connection() {
    let mut c = conn();
    for bad in ["not json", r#"{"type": "hello"}"#, r#"{"v": 2, "type": "hello"}"#, r#"{"v": 1, "type": "fly"}"#] {
        let r: Value = serde_json::from_str(&c.handle_text(bad)).unwrap();
        assert_eq!(r["code"], code::MALFORMED, "{bad}");
    }
    let r = send(&mut c, json!({"v": 1, "type": "recommend"}));
    assert_eq!(r["code"], code::NO_SESSION);
    load_acd(&mut c);
    assert_eq!(snapshot_of(&mut c)["type"], "state_snapshot");
}

#[test]
fn inline_automaton_and_tables() {
    let a = automata_core::Quatomaton::load(&fixture_text("fig1")).unwrap();
    let t = rc_build::build(&a, lasso_values::ValueKind::LimAvg, rc_build::Mode::Cyclic).unwrap();
    let mut c = conn();
    let msg = json!({"v": 1, "type": "load", "automaton": fixture_text("fig1"),
                     "tables": [serde_json::from_str::<Value>(&t.save(&a).unwrap()).unwrap()], "start": "q1"});
    assert_eq!(send(&mut c, msg)["type"], "ack");
    let r = snapshot_of(&mut c);
    assert_eq!(r["cyclic"], json!(["s3"]));
    assert_eq!(r["any"], Value::Null);
    assert_eq!(r["from_attachment"], true);
}

#[test]
fn bad_loads_are_reported() {
    let mut c = conn();
    let r = send(&mut c, json!({"v": 1, "type": "load", "automaton": {"path": "missing.json"}, "kind": "sup"}));
    assert_eq!(r["code"], code::NOT_FOUND);
    let r = send(&mut c, json!({"v": 1, "type": "load", "automaton": {"path": "fig1.json"}}));
    assert_eq!(r["code"], code::MALFORMED);
    let ring = fixture_text("ring");
    let ra = automata_core::Quatomaton::load(&ring).unwrap();
    let t = rc_build::build(&ra, lasso_values::ValueKind::LimAvg, rc_build::Mode::Any).unwrap();
    let r = send(&mut c, json!({"v": 1, "type": "load", "automaton": {"path": "fig1.json"},
                                "tables": [t.save(&ra).unwrap()]}));
    assert_eq!(r["code"], code::INVALID);
}

#[test]
fn oversized_automaton_is_refused() {
    let n = 12_000;
    let states: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
    let edges: Vec<Value> =
        (0..n).map(|i| json!({"from": format!("s{i}"), "letter": "a", "to": format!("s{}", (i + 1) % n)})).collect();
    let a = json!({"alphabet": ["a"], "states": states, "initial": "s0", "edges": edges});
    let r = send(&mut conn(), json!({"v": 1, "type": "load", "automaton": a, "kind": "parity"}));
    assert_eq!(r["code"], code::TOO_LARGE);
}

#[test]
fn cap_exceedance_has_its_own_code() {
    let mut c = Connection::new(fixtures_dir(), Caps { cycles: 1, trails: 1 });
    let r = send(&mut c, json!({"v": 1, "type": "load", "automaton": {"path": "fig1.json"}, "kind": "limavg"}));
    assert_eq!(r["code"], code::CAP_EXCEEDED, "{r}");
}

fn message(fixture: &str, letters: &[&str], pick: (u8, usize)) -> Value {
    let letter = letters[pick.1 % letters.len()];
    match pick.0 % 7 {
        0 => json!({"v": 1, "type": "step", "letter": letter}),
        1 | 2 => json!({"v": 1, "type": "whatif", "letter": letter}),
        3 => json!({"v": 1, "type": "recommend"}),
        4 => json!({"v": 1, "type": "status"}),
        5 => json!({"v": 1, "type": "reset"}),
        _ => json!({"v": 1, "type": "load", "automaton": {"path": format!("{fixture}.json")}, "kind": "parity"}),
    }
}

const ACD_LETTERS: [&str; 9] = ["INIT_SYS", "INIT_DB", "CNCT", "CALL", "QUE1", "QUE2", "ANS1", "ANS2", "BOGUS"];

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, ..ProptestConfig::default() })]

    #[test]
    fn whatif_never_mutates(picks in prop::collection::vec((any::<u8>(), any::<usize>()), 1..20)) {
        let mut c = conn();
        load_acd(&mut c);
        for p in picks {
            let msg = message("acd", &ACD_LETTERS, p);
            if msg["type"] == "whatif" {
                let before = snapshot_of(&mut c);
                send(&mut c, msg);
                prop_assert_eq!(snapshot_of(&mut c), before);
            } else {
                send(&mut c, msg);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn replaying_a_log_reproduces_the_replies(picks in prop::collection::vec((any::<u8>(), any::<usize>()), 1..30)) {
        let log: Vec<String> = picks.into_iter().map(|p| message("acd", &ACD_LETTERS, p).to_string()).collect();
        let run = |log: &[String]| {
            let mut c = conn();
            log.iter().map(|m| c.handle_text(m)).collect::<Vec<_>>()
        };
        prop_assert_eq!(run(&log), run(&log));
    }
}

#[test]
fn unknown_fields_are_malformed() {
    let mut c = conn();
    load_acd(&mut c);
    let before = snapshot_of(&mut c);
    for bad in [json!({"v": 1, "type": "recommend", "extra": 1}), json!({"v": 1, "type": "step", "letter": "CALL", "why": "x"})] {
        assert_eq!(send(&mut c, bad.clone())["code"], code::MALFORMED, "{bad}");
    }
    assert_eq!(snapshot_of(&mut c), before);
}
