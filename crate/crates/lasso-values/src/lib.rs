//! Value functions on lasso words: the five limit operators, parity
//! acceptance, the spoke-penalized mean and the robustness triple.

mod color;
mod eval;
mod kind;
mod value;

pub use color::{color_of_edge, edge_color, robustness_edge_weights, score_infix, Color, ColorCounts, InfixScore, ScorePair};
pub use eval::{eval_lasso, eval_run, period_accepts, robustness_value};
pub use kind::ValueKind;
pub use value::{compare_values, RobustnessValue, Value};

use automata_core::AutomatonError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ValueError {
    #[error("{0} needs edge weights")]
    MissingWeights(ValueKind),
    #[error("{0} needs state ranks")]
    MissingRanks(ValueKind),
    #[error("cannot compare {0} with {1}")]
    CrossKind(&'static str, &'static str),
    #[error("start state is a sink")]
    StartIsSink,
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
}
