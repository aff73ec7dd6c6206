//! Compiles a quantitative automaton, a value kind and a mode into a
//! per-state recommendation table that a live session can consult in
//! constant time per step.
//!
//! Tables refer to the sink-normalized automaton (see
//! [`automata_core::normalize_dual_sinks`]); [`prepare`] produces it.

mod maxlike;
mod memory;
mod minlike;
mod parity;
mod robust;
mod table;

use std::collections::BTreeSet;

use automata_core::{normalize_dual_sinks, AutomatonError, EdgeId, Quatomaton, Rational, StateId};
use graph_analysis::{compute_msccs, shortest_path_to_targets, Condensation};
use lasso_values::ValueKind;

pub use memory::{Candidate, Memory, RobustEntry, SpokeGain};
pub use table::{Breakpoint, Caps, Entry, LetterSet, Mode, RcTable, Strength, Threshold};

#[derive(Debug, thiserror::Error)]
pub enum BuildError {
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error("{0} needs edge weights")]
    MissingWeights(ValueKind),
    #[error("{0} needs state ranks")]
    MissingRanks(ValueKind),
    #[error("no table construction for {0}")]
    Unsupported(ValueKind),
    #[error("{what} exceeded the cap of {cap} ({detail})")]
    CapExceeded { what: &'static str, cap: usize, detail: String },
    #[error("table was built for a different automaton")]
    HashMismatch,
    #[error("invalid table: {0}")]
    Table(String),
}

/// The automaton a table for `kind` indexes: checked for the annotations
/// the kind needs and with dual sinks folded into flagged self-loops.
pub fn prepare(a: &Quatomaton, kind: ValueKind) -> Result<Quatomaton, BuildError> {
    if kind.needs_weights() && !a.has_weights() {
        return Err(BuildError::MissingWeights(kind));
    }
    if kind.needs_ranks() && a.ranks().is_none() {
        return Err(BuildError::MissingRanks(kind));
    }
    Ok(normalize_dual_sinks(a)?)
}

pub fn build(a: &Quatomaton, kind: ValueKind, mode: Mode) -> Result<RcTable, BuildError> {
    build_with_caps(a, kind, mode, Caps::default())
}

pub fn build_with_caps(a: &Quatomaton, kind: ValueKind, mode: Mode, caps: Caps) -> Result<RcTable, BuildError> {
    let n = prepare(a, kind)?;
    let b = match kind {
        ValueKind::LimSup => maxlike::limsup(&n, mode),
        ValueKind::Sup => maxlike::sup(&n, mode),
        ValueKind::LimInf => minlike::liminf(&n, mode),
        ValueKind::Inf => minlike::inf(&n, mode),
        ValueKind::LimAvg => maxlike::limavg(&n, mode, caps)?,
        ValueKind::ParityBool => parity::build(&n, mode),
        ValueKind::Robustness => robust::build(&n, mode, caps)?,
        ValueKind::LimAvgMinusSpoke => return Err(BuildError::Unsupported(kind)),
    };
    let states = n.num_states();
    Ok(RcTable {
        kind,
        mode,
        strength: b.strength,
        automaton_hash: a.hash(),
        threshold: b.threshold,
        entries: b.entries,
        dead: b.dead.unwrap_or_else(|| vec![false; states]),
        unattained: b.unattained.unwrap_or_else(|| vec![false; states]),
        caps,
        tracker: memory::Tracker::new(&n, b.trails).map_err(BuildError::Table)?,
    })
}

macro_rules! named_builder {
    ($(#[$m:meta])* $name:ident, $kind:expr) => {
        $(#[$m])*
        pub fn $name(a: &Quatomaton, mode: Mode) -> Result<RcTable, BuildError> {
            build(a, $kind, mode)
        }
    };
}

named_builder!(
    /// Weak: shortest paths to the heaviest reachable cycle edge.
    build_limsup, ValueKind::LimSup);
named_builder!(
    /// Weak, thresholded on the running maximum.
    build_sup, ValueKind::Sup);
named_builder!(
    /// Any weak, Cyclic strong.
    build_liminf, ValueKind::LimInf);
named_builder!(
    /// Strong, thresholded on the running minimum.
    build_inf, ValueKind::Inf);
named_builder!(
    /// Any weak (Karp), Cyclic strong (cyclic trail enumeration).
    build_limavg, ValueKind::LimAvg);
named_builder!(
    /// Weak in both modes.
    build_parity_qual, ValueKind::ParityBool);
named_builder!(
    /// Strong, exponential time.
    build_robustness, ValueKind::Robustness);

/// What a construction hands back to [`build_with_caps`].
pub(crate) struct Built {
    strength: Strength,
    threshold: Option<Threshold>,
    entries: Vec<Entry>,
    dead: Option<Vec<bool>>,
    unattained: Option<Vec<bool>>,
    /// Trails the run memory follows, closed under rotation.
    trails: Vec<Vec<EdgeId>>,
}

impl Built {
    fn simple(strength: Strength, sets: Vec<LetterSet>) -> Self {
        Built {
            strength,
            threshold: None,
            entries: sets.into_iter().map(Entry::Simple).collect(),
            dead: None,
            unattained: None,
            trails: Vec::new(),
        }
    }

    fn with_entries(self, entries: Vec<Entry>) -> Self {
        Built { entries, ..self }
    }
}

fn letters_of(a: &Quatomaton, edges: impl IntoIterator<Item = EdgeId>) -> LetterSet {
    edges.into_iter().map(|e| a.edge(e).letter).collect()
}

/// Letters of the edges leaving `s` inside its own component.
fn internal_letters(a: &Quatomaton, c: &Condensation, s: StateId) -> LetterSet {
    letters_of(a, a.out_edges(s).iter().copied().filter(|&e| c.is_internal(a, e)))
}

/// States from which some state marked in `to` is reachable.
fn reaching(a: &Quatomaton, to: &[bool]) -> Vec<bool> {
    let mut incoming: Vec<Vec<StateId>> = vec![Vec::new(); a.num_states()];
    for e in a.edges() {
        incoming[e.to].push(e.from);
    }
    let mut seen = to.to_vec();
    let mut stack: Vec<StateId> = (0..a.num_states()).filter(|&s| to[s]).collect();
    while let Some(s) = stack.pop() {
        for &p in &incoming[s] {
            if !seen[p] {
                seen[p] = true;
                stack.push(p);
            }
        }
    }
    seen
}

/// Each component gets a value and a target edge set. Every state takes the
/// best value among the components it reaches and the first letters of
/// shortest paths to targets of components attaining it.
fn toward_best_component(a: &Quatomaton, c: &Condensation, value: &[Rational], targets: &[Vec<EdgeId>]) -> (Vec<Option<Rational>>, Vec<LetterSet>) {
    let mut best: Vec<Option<Rational>> = vec![None; a.num_states()];
    for (i, m) in c.msccs.iter().enumerate() {
        let mut mark = vec![false; a.num_states()];
        for &s in &m.states {
            mark[s] = true;
        }
        for (s, r) in reaching(a, &mark).into_iter().enumerate() {
            if r && best[s].as_ref().map_or(true, |b| value[i] > *b) {
                best[s] = Some(value[i].clone());
            }
        }
    }
    let mut sets = vec![LetterSet::new(); a.num_states()];
    let levels: BTreeSet<&Rational> = value.iter().collect();
    for theta in levels {
        let mut mark = vec![false; a.edges().len()];
        for (i, ts) in targets.iter().enumerate() {
            if value[i] == *theta {
                for &e in ts {
                    mark[e] = true;
                }
            }
        }
        let paths = shortest_path_to_targets(a, &mark, None);
        for s in 0..a.num_states() {
            if best[s].as_ref() == Some(theta) {
                sets[s] = paths[s].first_letters.clone();
            }
        }
    }
    (best, sets)
}

/// Shortest-path letters inside each component toward its own targets;
/// empty outside components.
fn within_component(a: &Quatomaton, c: &Condensation, targets: &[Vec<EdgeId>]) -> Vec<LetterSet> {
    let mut sets = vec![LetterSet::new(); a.num_states()];
    for (m, ts) in c.msccs.iter().zip(targets) {
        let mut mark = vec![false; a.edges().len()];
        for &e in ts {
            mark[e] = true;
        }
        let inside: Vec<bool> = (0..a.num_states()).map(|s| m.contains(s)).collect();
        let paths = shortest_path_to_targets(a, &mark, Some(&inside));
        for &s in &m.states {
            sets[s] = paths[s].first_letters.clone();
        }
    }
    sets
}

fn weight(a: &Quatomaton, e: EdgeId) -> &Rational {
    a.weight(e).expect("weights checked")
}

fn components(a: &Quatomaton) -> Condensation {
    compute_msccs(a)
}
