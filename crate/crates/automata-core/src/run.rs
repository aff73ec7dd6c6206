use crate::automaton::{EdgeId, LetterId, Quatomaton, StateId};
use crate::AutomatonError;

/// States visited and edges taken while reading a finite word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunTrace {
    pub states: Vec<StateId>,
    pub edges: Vec<EdgeId>,
}

impl RunTrace {
    pub fn last(&self) -> StateId {
        *self.states.last().expect("a trace holds at least the start state")
    }
}

/// Runs `u` from `start`. Fails when a letter has no transition.
pub fn run_from(a: &Quatomaton, start: StateId, u: &[LetterId]) -> Result<RunTrace, AutomatonError> {
    let mut states = Vec::with_capacity(u.len() + 1);
    let mut edges = Vec::with_capacity(u.len());
    let mut s = start;
    states.push(s);
    for &l in u {
        if l >= a.num_letters() {
            return Err(AutomatonError::UnknownLetter(format!("#{l}")));
        }
        let e = a.transition(s, l).ok_or_else(|| AutomatonError::NoTransition {
            state: a.state_name(s).into(),
            letter: a.letter_name(l).into(),
        })?;
        s = a.edge(e).to;
        edges.push(e);
        states.push(s);
    }
    Ok(RunTrace { states, edges })
}

/// Runs `u` from the initial state.
pub fn run_prefix(a: &Quatomaton, u: &[LetterId]) -> Result<RunTrace, AutomatonError> {
    run_from(a, a.initial(), u)
}
