//! Deterministic quantitative automata ("quatomata"): edges may carry exact
//! rational weights and states may carry parity ranks, with −2/−1 standing
//! for absorbing accepting/rejecting sinks.

mod automaton;
mod lasso;
pub mod rational;
mod run;
mod sinks;

pub use automaton::{Edge, EdgeId, EdgeSpec, LetterId, Quatomaton, Sink, StateId, ACCEPTING_SINK, REJECTING_SINK};
pub use lasso::{lasso_run, normalize_lasso, LassoRun, LassoWord};
pub use rational::{display_rational, format_rational, int, parse_rational, ratio, Rational};
pub use run::{run_from, run_prefix, RunTrace};
pub use sinks::normalize_dual_sinks;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutomatonError {
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("{what}: state {state:?} letter {letter:?}")]
    Nondeterministic { state: String, letter: String, what: &'static str },
    #[error("unknown state {0:?}")]
    UnknownState(String),
    #[error("unknown letter {0:?}")]
    UnknownLetter(String),
    #[error("no transition from {state:?} on {letter:?}")]
    NoTransition { state: String, letter: String },
    #[error("weights must be given on all edges or on none")]
    PartialWeights,
    #[error("ranks must be given for all states or for none")]
    PartialRanks,
    #[error("bad weight {0:?}, expected \"num/den\"")]
    BadWeight(String),
    #[error("state {0:?} has no outgoing edge")]
    DeadEnd(String),
    #[error("sink state {0:?} has outgoing edges")]
    SinkWithEdges(String),
    #[error("period must be nonempty")]
    EmptyPeriod,
}
