//! Wire messages (schema version 1) and the per-connection handler.
//!
//! Every client message is a JSON object with `"v": 1` and a `"type"` tag;
//! every one of them gets exactly one reply. The handler is a plain state
//! machine so it can be tested and replayed without a socket.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use automata_core::{format_rational, Quatomaton, Rational};
use lasso_values::ValueKind;
use rc_build::{build_with_caps, BuildError, Caps, Mode, RcTable};
use serde::{Deserialize, Serialize};
use serde_json::Value as Json;
use session::{Session, SessionError, StepReport};

pub const PROTOCOL_VERSION: u32 = 1;

/// Largest automaton accepted in a `load`, in states plus edges.
pub const MAX_AUTOMATON_SIZE: usize = 20_000;

/// Error codes in `error` replies.
pub mod code {
    /// Not JSON, not a known message, or a wrong schema version.
    pub const MALFORMED: u16 = 400;
    /// A file named in `load` could not be read.
    pub const NOT_FOUND: u16 = 404;
    /// The message needs a loaded session.
    pub const NO_SESSION: u16 = 409;
    /// The automaton is larger than [`super::MAX_AUTOMATON_SIZE`].
    pub const TOO_LARGE: u16 = 413;
    /// Well-formed but invalid: bad automaton or table, unknown letter,
    /// hash mismatch.
    pub const INVALID: u16 = 422;
    /// A table construction hit its enumeration cap.
    pub const CAP_EXCEEDED: u16 = 507;
}

/// An automaton or table, inline or by path.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(untagged)]
pub enum Source {
    Path { path: String },
    Inline(Json),
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ClientMessage {
    Hello {
        #[serde(default)]
        client: Option<String>,
    },
    /// Either `tables`, or `kind` to build both tables on the spot.
    Load {
        automaton: Source,
        #[serde(default)]
        tables: Vec<Source>,
        #[serde(default)]
        kind: Option<String>,
        #[serde(default)]
        start: Option<String>,
    },
    Step {
        letter: String,
    },
    // empty braces so that unknown fields are rejected here too
    Recommend {},
    Whatif {
        letter: String,
    },
    Status {},
    Reset {},
}

#[derive(Debug, Deserialize)]
struct Envelope {
    v: u32,
    #[serde(flatten)]
    msg: Json,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Snapshot {
    pub kind: String,
    pub state: String,
    pub steps: u64,
    pub any: Option<Vec<String>>,
    pub cyclic: Option<Vec<String>>,
    /// Letters that move the run from the current state.
    pub enabled: Vec<String>,
    pub max_weight: Option<String>,
    pub min_weight: Option<String>,
    pub verdict: &'static str,
    pub first_any_deviation: Option<u64>,
    pub violated_at: Option<u64>,
    pub cyclic_streak: u64,
    pub from_attachment: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepPayload {
    pub hypothetical: bool,
    pub index: u64,
    pub letter: String,
    /// Property letter after projection; `None` when dropped.
    pub projected: Option<String>,
    pub weight: Option<String>,
    pub color: Option<&'static str>,
    pub any_recommended: Option<bool>,
    pub cyclic_recommended: Option<bool>,
    pub verdict_before: &'static str,
    pub verdict_after: &'static str,
    /// The session after the step (or as it would be, for `whatif`).
    pub snapshot: Snapshot,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ServerMessage {
    Ack {
        v: u32,
        of: &'static str,
        #[serde(skip_serializing_if = "Option::is_none")]
        alphabet: Option<Vec<String>>,
        #[serde(skip_serializing_if = "Option::is_none")]
        states: Option<Vec<String>>,
    },
    StateSnapshot {
        v: u32,
        #[serde(flatten)]
        snapshot: Snapshot,
    },
    StepReport {
        v: u32,
        #[serde(flatten)]
        report: StepPayload,
    },
    Error {
        v: u32,
        code: u16,
        text: String,
    },
}

impl ServerMessage {
    pub fn error(code: u16, text: impl Into<String>) -> Self {
        ServerMessage::Error { v: PROTOCOL_VERSION, code, text: text.into() }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("server messages serialize")
    }
}

fn rational(r: &Option<Rational>) -> Option<String> {
    r.as_ref().map(format_rational)
}

pub fn snapshot(s: &Session) -> Snapshot {
    let rec = s.recommend();
    let st = s.status();
    Snapshot {
        kind: s.kind().name().to_string(),
        state: s.state_name().to_string(),
        steps: st.steps,
        any: rec.any.map(|x| s.names(&x)),
        cyclic: rec.cyclic.map(|x| s.names(&x)),
        enabled: s.names(&s.enabled()),
        max_weight: rational(&st.max_weight),
        min_weight: rational(&st.min_weight),
        verdict: st.verdict.name(),
        first_any_deviation: st.first_any_deviation,
        violated_at: st.violated_at,
        cyclic_streak: st.cyclic_streak,
        from_attachment: st.from_attachment,
    }
}

fn step_payload(s: &Session, letter: &str, r: &StepReport, hypothetical: bool) -> StepPayload {
    StepPayload {
        hypothetical,
        index: r.index,
        letter: letter.to_string(),
        projected: r.letter.map(|l| s.automaton().letter_name(l).to_string()),
        weight: rational(&r.weight),
        color: r.color,
        any_recommended: r.any_recommended,
        cyclic_recommended: r.cyclic_recommended,
        verdict_before: r.verdict_before.name(),
        verdict_after: r.verdict_after.name(),
        snapshot: snapshot(s),
    }
}

/// State of one connection.
#[derive(Clone, Debug)]
pub struct Connection {
    root: PathBuf,
    caps: Caps,
    session: Option<Session>,
}

impl Connection {
    /// `root` resolves relative paths in `load`.
    pub fn new(root: impl Into<PathBuf>, caps: Caps) -> Self {
        Connection { root: root.into(), caps, session: None }
    }

    pub fn session(&self) -> Option<&Session> {
        self.session.as_ref()
    }

    /// Answers one raw message.
    pub fn handle_text(&mut self, text: &str) -> String {
        self.handle_raw(text).to_json()
    }

    pub fn handle_raw(&mut self, text: &str) -> ServerMessage {
        let env: Envelope = match serde_json::from_str(text) {
            Ok(e) => e,
            Err(e) => return ServerMessage::error(code::MALFORMED, format!("malformed message: {e}")),
        };
        if env.v != PROTOCOL_VERSION {
            return ServerMessage::error(code::MALFORMED, format!("unsupported schema version {}", env.v));
        }
        match serde_json::from_value::<ClientMessage>(env.msg) {
            Ok(msg) => self.handle(msg),
            Err(e) => ServerMessage::error(code::MALFORMED, format!("malformed message: {e}")),
        }
    }

    pub fn handle(&mut self, msg: ClientMessage) -> ServerMessage {
        let v = PROTOCOL_VERSION;
        match msg {
            ClientMessage::Hello { .. } => ServerMessage::Ack { v, of: "hello", alphabet: None, states: None },
            ClientMessage::Load { automaton, tables, kind, start } => match self.load(automaton, tables, kind, start) {
                Ok(s) => {
                    let a = s.automaton();
                    let ack = ServerMessage::Ack {
                        v,
                        of: "load",
                        alphabet: Some(a.alphabet().to_vec()),
                        states: Some(a.states().to_vec()),
                    };
                    self.session = Some(s);
                    ack
                }
                Err(e) => e,
            },
            ClientMessage::Step { letter } => {
                let Some(s) = self.session.as_mut() else { return no_session() };
                match s.step(&letter) {
                    Ok(r) => ServerMessage::StepReport { v, report: step_payload(s, &letter, &r, false) },
                    Err(e) => ServerMessage::error(code::INVALID, e.to_string()),
                }
            }
            ClientMessage::Whatif { letter } => {
                let Some(s) = self.session.as_ref() else { return no_session() };
                let mut probe = s.clone();
                match probe.step(&letter) {
                    Ok(r) => ServerMessage::StepReport { v, report: step_payload(&probe, &letter, &r, true) },
                    Err(e) => ServerMessage::error(code::INVALID, e.to_string()),
                }
            }
            ClientMessage::Recommend {} | ClientMessage::Status {} => match &self.session {
                Some(s) => ServerMessage::StateSnapshot { v, snapshot: snapshot(s) },
                None => no_session(),
            },
            ClientMessage::Reset {} => match self.session.as_mut() {
                Some(s) => {
                    s.reset();
                    ServerMessage::StateSnapshot { v, snapshot: snapshot(s) }
                }
                None => no_session(),
            },
        }
    }

    fn read(&self, src: Source) -> Result<String, ServerMessage> {
        match src {
            Source::Inline(Json::String(text)) => Ok(text),
            Source::Inline(value) => Ok(value.to_string()),
            Source::Path { path } => {
                let p = resolve(&self.root, &path);
                std::fs::read_to_string(&p)
                    .map_err(|e| ServerMessage::error(code::NOT_FOUND, format!("{}: {e}", p.display())))
            }
        }
    }

    fn load(
        &self,
        automaton: Source,
        tables: Vec<Source>,
        kind: Option<String>,
        start: Option<String>,
    ) -> Result<Session, ServerMessage> {
        let text = self.read(automaton)?;
        let a = Quatomaton::load(&text).map_err(|e| ServerMessage::error(code::INVALID, e.to_string()))?;
        let size = a.num_states() + a.edges().len();
        if size > MAX_AUTOMATON_SIZE {
            return Err(ServerMessage::error(
                code::TOO_LARGE,
                format!("automaton has {size} states and edges, limit {MAX_AUTOMATON_SIZE}"),
            ));
        }
        let tables = if tables.is_empty() {
            let kind: ValueKind = kind
                .ok_or_else(|| ServerMessage::error(code::MALFORMED, "load needs tables or a kind"))?
                .parse()
                .map_err(|e: String| ServerMessage::error(code::MALFORMED, e))?;
            [Mode::Any, Mode::Cyclic]
                .into_iter()
                .map(|m| build_with_caps(&a, kind, m, self.caps).map(Arc::new).map_err(build_error))
                .collect::<Result<Vec<_>, _>>()?
        } else {
            tables
                .into_iter()
                .map(|src| {
                    let text = self.read(src)?;
                    RcTable::load(&text, &a).map(Arc::new).map_err(build_error)
                })
                .collect::<Result<Vec<_>, _>>()?
        };
        Session::open(Arc::new(a), tables, start.as_deref()).map_err(session_error)
    }
}

fn resolve(root: &Path, path: &str) -> PathBuf {
    let p = Path::new(path);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        root.join(p)
    }
}

fn no_session() -> ServerMessage {
    ServerMessage::error(code::NO_SESSION, "no automaton loaded")
}

fn build_error(e: BuildError) -> ServerMessage {
    match e {
        BuildError::CapExceeded { .. } => ServerMessage::error(code::CAP_EXCEEDED, e.to_string()),
        _ => ServerMessage::error(code::INVALID, e.to_string()),
    }
}

fn session_error(e: SessionError) -> ServerMessage {
    match e {
        SessionError::Build(b) => build_error(b),
        e => ServerMessage::error(code::INVALID, e.to_string()),
    }
}
