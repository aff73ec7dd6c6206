use std::collections::HashMap;

use crate::automaton::{EdgeId, LetterId, Quatomaton, StateId};
use crate::run::run_from;
use crate::AutomatonError;

/// The ω-word `spoke · period^ω`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LassoWord {
    pub spoke: Vec<LetterId>,
    pub period: Vec<LetterId>,
}

impl LassoWord {
    pub fn new(spoke: Vec<LetterId>, period: Vec<LetterId>) -> Result<Self, AutomatonError> {
        if period.is_empty() {
            return Err(AutomatonError::EmptyPeriod);
        }
        Ok(LassoWord { spoke, period })
    }

    /// Letter at position `i` of the ω-word.
    pub fn letter_at(&self, i: usize) -> LetterId {
        if i < self.spoke.len() {
            self.spoke[i]
        } else {
            self.period[(i - self.spoke.len()) % self.period.len()]
        }
    }

    /// First `n` letters of the ω-word.
    pub fn unroll(&self, n: usize) -> Vec<LetterId> {
        (0..n).map(|i| self.letter_at(i)).collect()
    }

    /// Shortest representation of the same ω-word: the spoke tail is rotated
    /// into the period and the period is cut to its primitive root.
    pub fn minimal(&self) -> LassoWord {
        let mut spoke = self.spoke.clone();
        let mut period = self.period.clone();
        while let (Some(&s), Some(&p)) = (spoke.last(), period.last()) {
            if s != p {
                break;
            }
            spoke.pop();
            period.rotate_right(1);
        }
        let n = period.len();
        let root = (1..=n).find(|&d| n % d == 0 && (d..n).all(|i| period[i] == period[i - d])).unwrap_or(n);
        period.truncate(root);
        LassoWord { spoke, period }
    }
}

/// A lasso aligned with the automaton: after the spoke the run sits at a
/// state it returns to after each period.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LassoRun {
    pub word: LassoWord,
    pub spoke_edges: Vec<EdgeId>,
    pub period_edges: Vec<EdgeId>,
    /// State reached after the spoke.
    pub loop_state: StateId,
}

/// Aligns `w` with the run from `start`, returning the representation with
/// the shortest spoke after which the run loops.
pub fn normalize_lasso(a: &Quatomaton, w: &LassoWord, start: StateId) -> Result<LassoWord, AutomatonError> {
    Ok(lasso_run(a, w, start)?.word)
}

/// [`normalize_lasso`] together with the edges taken.
pub fn lasso_run(a: &Quatomaton, w: &LassoWord, start: StateId) -> Result<LassoRun, AutomatonError> {
    if w.period.is_empty() {
        return Err(AutomatonError::EmptyPeriod);
    }
    let m = w.minimal();
    let p = m.period.len();
    let spoke_run = run_from(a, start, &m.spoke)?;
    let mut state = spoke_run.last();
    let mut seen: HashMap<(StateId, usize), usize> = HashMap::new();
    let mut letters = Vec::new();
    let mut edges = Vec::new();
    let mut i = 0;
    loop {
        let phase = i % p;
        if let Some(&first) = seen.get(&(state, phase)) {
            let mut spoke = m.spoke.clone();
            spoke.extend_from_slice(&letters[..first]);
            let mut spoke_edges = spoke_run.edges;
            spoke_edges.extend_from_slice(&edges[..first]);
            let loop_state = if first == 0 { spoke_run.states[spoke_run.states.len() - 1] } else { a.edge(edges[first - 1]).to };
            return Ok(LassoRun {
                word: LassoWord { spoke, period: letters[first..].to_vec() },
                spoke_edges,
                period_edges: edges[first..].to_vec(),
                loop_state,
            });
        }
        seen.insert((state, phase), i);
        let l = m.period[phase];
        let e = a.transition(state, l).ok_or_else(|| AutomatonError::NoTransition {
            state: a.state_name(state).into(),
            letter: a.letter_name(l).into(),
        })?;
        letters.push(l);
        edges.push(e);
        state = a.edge(e).to;
        i += 1;
    }
}
