//! A live consultant over recommendation tables.
//!
//! A [`Session`] follows a run letter by letter, serves the any- and
//! cyclic-recommendations for the run so far and keeps a verdict. Work per
//! step does not depend on the length of the run: every table access goes
//! through an operation counter that tests can inspect.

mod advisor;
pub mod sim;

use std::cell::Cell;
use std::sync::Arc;

use automata_core::{AutomatonError, LetterId, Quatomaton, Rational, Sink, StateId};
use lasso_values::ValueKind;
use rc_build::{prepare, BuildError, LetterSet, Memory, Mode, RcTable};

pub use advisor::TableAdvisor;

#[derive(Debug, thiserror::Error)]
pub enum SessionError {
    #[error("no tables given")]
    NoTables,
    #[error("table was built for a different automaton")]
    HashMismatch,
    #[error("two {0} tables given")]
    DuplicateTable(&'static str),
    #[error("tables disagree on the value kind ({0} and {1})")]
    MixedKinds(ValueKind, ValueKind),
    #[error("no {0} table loaded")]
    MissingTable(&'static str),
    #[error("unknown state {0:?}")]
    UnknownState(String),
    #[error("letter {letter:?} has no transition from state {state:?}")]
    NoTransition { state: String, letter: String },
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error(transparent)]
    Build(#[from] BuildError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Violated,
    Pending,
    OnTrack,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Violated => "violated",
            Verdict::Pending => "pending",
            Verdict::OnTrack => "on-track",
        }
    }
}

/// Both recommendation sets; `None` when that table is not loaded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Recommendation {
    pub any: Option<LetterSet>,
    pub cyclic: Option<LetterSet>,
}

/// A logged step that left at least one recommendation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Deviation {
    pub index: u64,
    pub letter: LetterId,
    pub any: bool,
    pub cyclic: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepReport {
    pub index: u64,
    /// The property letter, or `None` when the projection dropped it.
    pub letter: Option<LetterId>,
    pub state: StateId,
    pub weight: Option<Rational>,
    /// Color name of the edge for ranked automata.
    pub color: Option<&'static str>,
    /// Whether the letter was in the pre-step set; `None` without a table
    /// or when nothing moved.
    pub any_recommended: Option<bool>,
    pub cyclic_recommended: Option<bool>,
    pub verdict_before: Verdict,
    pub verdict_after: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StatusReport {
    pub verdict: Verdict,
    pub steps: u64,
    pub first_any_deviation: Option<u64>,
    pub violated_at: Option<u64>,
    pub cyclic_streak: u64,
    pub max_weight: Option<Rational>,
    pub min_weight: Option<Rational>,
    /// The session started away from the initial state; compliance then
    /// covers only the steps since attachment.
    pub from_attachment: bool,
}

/// Live run state. Tables and automata are shared read-only.
#[derive(Clone, Debug)]
pub struct Session {
    a: Arc<Quatomaton>,
    n: Arc<Quatomaton>,
    kind: ValueKind,
    any: Option<Arc<RcTable>>,
    cyclic: Option<Arc<RcTable>>,
    start: StateId,
    state: StateId,
    any_mem: Option<Memory>,
    cyclic_mem: Option<Memory>,
    /// Set once the run entered a dual sink; later letters do not move it.
    absorbed: Option<(Sink, LetterId)>,
    steps: u64,
    max_weight: Option<Rational>,
    min_weight: Option<Rational>,
    log: Vec<Deviation>,
    first_any_deviation: Option<u64>,
    violated_at: Option<u64>,
    streak: u64,
    ops: Cell<u64>,
}

impl Session {
    /// Opens a session on `a` at `start` (default: the initial state).
    pub fn open(a: Arc<Quatomaton>, tables: Vec<Arc<RcTable>>, start: Option<&str>) -> Result<Session, SessionError> {
        let first = tables.first().ok_or(SessionError::NoTables)?;
        let kind = first.kind;
        let hash = a.hash();
        let (mut any, mut cyclic) = (None, None);
        for t in tables {
            if t.automaton_hash != hash {
                return Err(SessionError::HashMismatch);
            }
            if t.kind != kind {
                return Err(SessionError::MixedKinds(kind, t.kind));
            }
            let slot = match t.mode {
                Mode::Any => &mut any,
                Mode::Cyclic => &mut cyclic,
            };
            if slot.is_some() {
                return Err(SessionError::DuplicateTable(t.mode.name()));
            }
            *slot = Some(t);
        }
        let n = Arc::new(prepare(&a, kind)?);
        let name = start.unwrap_or_else(|| a.state_name(a.initial()));
        let state = n.state_id(name).ok_or_else(|| SessionError::UnknownState(name.into()))?;
        let mut s = Session {
            a,
            n,
            kind,
            any,
            cyclic,
            start: state,
            state,
            any_mem: None,
            cyclic_mem: None,
            absorbed: None,
            steps: 0,
            max_weight: None,
            min_weight: None,
            log: Vec::new(),
            first_any_deviation: None,
            violated_at: None,
            streak: 0,
            ops: Cell::new(0),
        };
        s.reset();
        Ok(s)
    }

    /// Back to the start state with an empty history.
    pub fn reset(&mut self) {
        self.state = self.start;
        self.any_mem = self.any.as_ref().map(|t| t.memory_at(self.start));
        self.cyclic_mem = self.cyclic.as_ref().map(|t| t.memory_at(self.start));
        self.absorbed = None;
        self.steps = 0;
        self.max_weight = None;
        self.min_weight = None;
        self.log.clear();
        self.first_any_deviation = None;
        self.violated_at = None;
        self.streak = 0;
    }

    pub fn automaton(&self) -> &Quatomaton {
        &self.a
    }

    /// The sink-normalized automaton the tables index.
    pub fn normalized(&self) -> &Quatomaton {
        &self.n
    }

    pub fn kind(&self) -> ValueKind {
        self.kind
    }

    pub fn table(&self, mode: Mode) -> Option<&RcTable> {
        match mode {
            Mode::Any => self.any.as_deref(),
            Mode::Cyclic => self.cyclic.as_deref(),
        }
    }

    /// Current state of the normalized automaton.
    pub fn state(&self) -> StateId {
        self.state
    }

    pub fn state_name(&self) -> &str {
        self.n.state_name(self.state)
    }

    pub fn start(&self) -> StateId {
        self.start
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn absorbed(&self) -> Option<Sink> {
        self.absorbed.map(|(s, _)| s)
    }

    pub fn deviations(&self) -> &[Deviation] {
        &self.log
    }

    /// Primitive operations spent in `recommend` and `step` so far.
    pub fn ops(&self) -> u64 {
        self.ops.get()
    }

    /// Letters that move the run from the current state.
    pub fn enabled(&self) -> LetterSet {
        match self.absorbed {
            Some((_, l)) => LetterSet::from([l]),
            None => self.n.out_edges(self.state).iter().map(|&e| self.n.edge(e).letter).collect(),
        }
    }

    pub fn recommend(&self) -> Recommendation {
        Recommendation { any: self.recommend_with(Mode::Any), cyclic: self.recommend_with(Mode::Cyclic) }
    }

    /// The set for one mode; an error when that table is not loaded.
    pub fn recommend_mode(&self, mode: Mode) -> Result<LetterSet, SessionError> {
        self.recommend_with(mode).ok_or(SessionError::MissingTable(mode.name()))
    }

    fn recommend_with(&self, mode: Mode) -> Option<LetterSet> {
        let (t, m) = match mode {
            Mode::Any => (self.any.as_ref()?, self.any_mem.as_ref()?),
            Mode::Cyclic => (self.cyclic.as_ref()?, self.cyclic_mem.as_ref()?),
        };
        let mut ops = 0;
        let set = match self.absorbed {
            // every continuation has the same value
            Some((_, l)) => {
                ops += 1;
                LetterSet::from([l])
            }
            None => t.recommend(m, &mut ops),
        };
        self.ops.set(self.ops.get() + ops);
        Some(set)
    }

    /// Reads one system letter.
    pub fn step(&mut self, system_letter: &str) -> Result<StepReport, SessionError> {
        let projected = self.a.project(system_letter)?;
        self.step_letter(projected)
    }

    /// Reads one property letter; `None` is a letter the projection dropped.
    pub fn step_letter(&mut self, letter: Option<LetterId>) -> Result<StepReport, SessionError> {
        let before = self.verdict();
        let index = self.steps;
        let Some(l) = letter else {
            self.steps += 1;
            return Ok(self.report(index, None, None, None, None, before));
        };
        if self.absorbed.is_some() {
            self.steps += 1;
            return Ok(self.report(index, Some(l), None, None, None, before));
        }
        let e = self.n.transition(self.state, l).ok_or_else(|| SessionError::NoTransition {
            state: self.n.state_name(self.state).into(),
            letter: self.n.letter_name(l).into(),
        })?;
        let rec = self.recommend();
        let in_any = rec.any.as_ref().map(|s| s.contains(&l));
        let in_cyclic = rec.cyclic.as_ref().map(|s| s.contains(&l));
        let live_before = !self.is_dead(self.state);

        let mut ops = 1;
        if let (Some(t), Some(m)) = (&self.any, &mut self.any_mem) {
            t.advance(&self.n, m, e, &mut ops);
        }
        if let (Some(t), Some(m)) = (&self.cyclic, &mut self.cyclic_mem) {
            t.advance(&self.n, m, e, &mut ops);
        }
        self.ops.set(self.ops.get() + ops);
        let edge = self.n.edge(e);
        self.state = edge.to;
        if let Some(sink) = edge.sink {
            self.absorbed = Some((sink, l));
        }
        if let Some(w) = &edge.weight {
            if self.max_weight.as_ref().map_or(true, |m| w > m) {
                self.max_weight = Some(w.clone());
            }
            if self.min_weight.as_ref().map_or(true, |m| w < m) {
                self.min_weight = Some(w.clone());
            }
        }
        let any_dev = in_any == Some(false);
        let cyclic_dev = in_cyclic == Some(false);
        if any_dev || cyclic_dev {
            self.log.push(Deviation { index, letter: l, any: any_dev, cyclic: cyclic_dev });
        }
        if any_dev && self.first_any_deviation.is_none() {
            self.first_any_deviation = Some(index);
        }
        self.streak = if cyclic_dev { 0 } else { self.streak + 1 };
        let lost = edge.sink == Some(Sink::Rejecting) || self.is_dead(self.state);
        if self.kind == ValueKind::ParityBool && live_before && lost && self.violated_at.is_none() {
            self.violated_at = Some(index);
        }
        self.steps += 1;
        Ok(self.report(index, Some(l), Some(e), in_any, in_cyclic, before))
    }

    fn is_dead(&self, s: StateId) -> bool {
        if self.absorbed.map(|(k, _)| k) == Some(Sink::Rejecting) {
            return true;
        }
        self.any.as_ref().or(self.cyclic.as_ref()).is_some_and(|t| t.dead[s])
    }

    fn report(
        &self,
        index: u64,
        letter: Option<LetterId>,
        edge: Option<usize>,
        any: Option<bool>,
        cyclic: Option<bool>,
        before: Verdict,
    ) -> StepReport {
        let color = edge.and_then(|e| lasso_values::edge_color(&self.n, e)).map(color_name);
        StepReport {
            index,
            letter,
            state: self.state,
            weight: edge.and_then(|e| self.n.weight(e).cloned()),
            color,
            any_recommended: any,
            cyclic_recommended: cyclic,
            verdict_before: before,
            verdict_after: self.verdict(),
        }
    }

    /// Violated after a Boolean run lost every accepting continuation;
    /// on-track while it follows the any-set and the latest steps followed
    /// the cyclic set; pending otherwise and always for quantitative kinds.
    pub fn verdict(&self) -> Verdict {
        if self.violated_at.is_some() {
            return Verdict::Violated;
        }
        if self.kind != ValueKind::ParityBool || self.steps == 0 || self.first_any_deviation.is_some() {
            return Verdict::Pending;
        }
        if self.absorbed.is_some() || self.cyclic.is_none() || self.streak > 0 {
            Verdict::OnTrack
        } else {
            Verdict::Pending
        }
    }

    pub fn status(&self) -> StatusReport {
        StatusReport {
            verdict: self.verdict(),
            steps: self.steps,
            first_any_deviation: self.first_any_deviation,
            violated_at: self.violated_at,
            cyclic_streak: self.streak,
            max_weight: self.max_weight.clone(),
            min_weight: self.min_weight.clone(),
            from_attachment: self.start != self.n.initial(),
        }
    }

    /// The table memories, enough to tell two run positions apart.
    pub(crate) fn memory_key(&self) -> (Option<&Memory>, Option<&Memory>, Option<(Sink, LetterId)>) {
        (self.any_mem.as_ref(), self.cyclic_mem.as_ref(), self.absorbed)
    }

    /// Letter names of a set, in letter order.
    pub fn names(&self, set: &LetterSet) -> Vec<String> {
        set.iter().map(|&l| self.a.letter_name(l).to_string()).collect()
    }
}

pub fn color_name(c: lasso_values::Color) -> &'static str {
    use lasso_values::Color::*;
    match c {
        White => "white",
        Green => "green",
        Yellow => "yellow",
        Red => "red",
        Black => "black",
    }
}
