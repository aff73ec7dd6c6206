//! Ground truth for the any- and cyclic-extension values of a prefix and for
//! the letters that start a preferred extension.
//!
//! Sup, Inf, LimSup, LimInf and parity are computed exactly by exploring
//! (state, summary) pairs, where the summary is the extremum a value needs.
//! LimAvg any-values are exact via simple-cycle means. The cyclic LimAvg
//! value ranges over cyclic trails, as do the periods of the spoke-penalized
//! mean and of robustness; those two kinds enumerate spokes within
//! [`OracleBounds`].

mod compliance;
mod fast;
mod mean;
mod robust;
mod setbased;
mod walk;

use std::cell::OnceCell;
use std::collections::BTreeSet;

use automata_core::{normalize_dual_sinks, AutomatonError, EdgeId, LetterId, Quatomaton, StateId};
use lasso_values::{ValueError, ValueKind};
use thiserror::Error;

pub use compliance::{check_compliance, Advisor, ComplianceReport, CyclicTail, Verdict};
pub use lasso_values::Value;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error(transparent)]
    Value(#[from] ValueError),
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error("more than {0} cyclic trails at one state")]
    TrailCap(usize),
}

/// Truncation of the unbounded suprema.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleBounds {
    pub max_spoke: usize,
    pub max_period: usize,
    pub max_trail: usize,
}

impl OracleBounds {
    /// `(2|Q|, 2|Q|, |E|)`.
    pub fn default_for(a: &Quatomaton) -> Self {
        let q = a.num_states().max(1);
        OracleBounds { max_spoke: 2 * q, max_period: 2 * q, max_trail: a.edges().len().max(1) }
    }
}

/// Largest cyclic-trail list kept per state.
pub const TRAIL_CAP: usize = 200_000;

/// An extension value and the first letters of the extensions attaining it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Answer {
    pub value: Value,
    pub letters: BTreeSet<LetterId>,
    /// Set when the reported value may not be the true supremum: a bound
    /// cut the enumeration or a longer spoke could still improve it.
    pub saturated: bool,
}

/// Oracle for one automaton and value kind. Dual sinks are normalized
/// away on construction; letters are unchanged.
pub struct Oracle {
    a: Quatomaton,
    kind: ValueKind,
    bounds: OracleBounds,
    start: StateId,
    set: OnceCell<setbased::SetOracle>,
    trails: Vec<OnceCell<Result<walk::TrailSet, OracleError>>>,
    cycle_means: OnceCell<Vec<Option<automata_core::Rational>>>,
}

impl Oracle {
    pub fn new(a: &Quatomaton, kind: ValueKind) -> Result<Self, OracleError> {
        Self::with_bounds(a, kind, OracleBounds::default_for(a))
    }

    pub fn with_bounds(a: &Quatomaton, kind: ValueKind, bounds: OracleBounds) -> Result<Self, OracleError> {
        Self::from_state(a, kind, bounds, a.initial())
    }

    /// Oracle whose prefixes are read from `start` instead of the initial state.
    pub fn from_state(a: &Quatomaton, kind: ValueKind, bounds: OracleBounds, start: StateId) -> Result<Self, OracleError> {
        if kind.needs_weights() && !a.has_weights() {
            return Err(ValueError::MissingWeights(kind).into());
        }
        if kind.needs_ranks() && a.ranks().is_none() {
            return Err(ValueError::MissingRanks(kind).into());
        }
        let (n, start) = if a.has_sink_states() {
            let n = normalize_dual_sinks(a)?;
            let s = n.state_id(a.state_name(start)).ok_or(ValueError::StartIsSink)?;
            (n, s)
        } else {
            (a.clone(), start)
        };
        let trails = (0..n.num_states()).map(|_| OnceCell::new()).collect();
        Ok(Oracle { a: n, kind, bounds, start, set: OnceCell::new(), trails, cycle_means: OnceCell::new() })
    }

    /// The automaton the oracle works on (dual sinks normalized).
    pub fn automaton(&self) -> &Quatomaton {
        &self.a
    }

    pub fn kind(&self) -> ValueKind {
        self.kind
    }

    pub fn bounds(&self) -> OracleBounds {
        self.bounds
    }

    pub fn start(&self) -> StateId {
        self.start
    }

    fn run(&self, u: &[LetterId]) -> Result<Vec<EdgeId>, OracleError> {
        Ok(automata_core::run_from(&self.a, self.start, u)?.edges)
    }

    fn end_state(&self, edges: &[EdgeId]) -> StateId {
        edges.last().map_or(self.start, |&e| self.a.edge(e).to)
    }

    fn set_oracle(&self) -> &setbased::SetOracle {
        self.set.get_or_init(|| setbased::SetOracle::new(&self.a, self.kind))
    }

    /// Cyclic trails at `s` with at most `max_trail` edges.
    fn trails_at(&self, s: StateId) -> Result<&walk::TrailSet, OracleError> {
        let r = self.trails[s].get_or_init(|| walk::cyclic_trails(&self.a, s, self.bounds.max_trail, TRAIL_CAP));
        r.as_ref().map_err(Clone::clone)
    }

    /// Best simple-cycle mean through each state.
    fn cycle_means(&self) -> &[Option<automata_core::Rational>] {
        self.cycle_means.get_or_init(|| walk::best_cycle_means(&self.a))
    }

    /// `μ⤳(u)` and `Σ⤳(u)`.
    pub fn any(&self, u: &[LetterId]) -> Result<Answer, OracleError> {
        let edges = self.run(u)?;
        match self.kind {
            k if k.is_set_based() => Ok(self.set_oracle().any(&self.a, &edges, self.end_state(&edges))),
            ValueKind::LimAvg => Ok(mean::limavg_any(self, self.end_state(&edges))),
            ValueKind::LimAvgMinusSpoke => mean::custom_any(self, &edges),
            ValueKind::Robustness => robust::any(self, &edges),
            _ => unreachable!(),
        }
    }

    /// `μ↻(u)` and `Σ↻(u)`, with the prefix condition on preferred cycles.
    pub fn cyclic(&self, u: &[LetterId]) -> Result<Answer, OracleError> {
        let edges = self.run(u)?;
        match self.kind {
            k if k.is_set_based() => Ok(self.set_oracle().cyclic(&self.a, &edges, self.end_state(&edges))),
            ValueKind::LimAvg | ValueKind::LimAvgMinusSpoke => mean::cyclic(self, &edges),
            ValueKind::Robustness => robust::cyclic(self, &edges),
            _ => unreachable!(),
        }
    }
}

pub fn oracle_mu_any(a: &Quatomaton, kind: ValueKind, u: &[LetterId], bounds: OracleBounds) -> Result<Value, OracleError> {
    Ok(Oracle::with_bounds(a, kind, bounds)?.any(u)?.value)
}

pub fn oracle_mu_cyclic(a: &Quatomaton, kind: ValueKind, u: &[LetterId], bounds: OracleBounds) -> Result<Value, OracleError> {
    Ok(Oracle::with_bounds(a, kind, bounds)?.cyclic(u)?.value)
}

pub fn oracle_sigma_any(
    a: &Quatomaton,
    kind: ValueKind,
    u: &[LetterId],
    bounds: OracleBounds,
) -> Result<BTreeSet<LetterId>, OracleError> {
    Ok(Oracle::with_bounds(a, kind, bounds)?.any(u)?.letters)
}

pub fn oracle_sigma_cyclic(
    a: &Quatomaton,
    kind: ValueKind,
    u: &[LetterId],
    bounds: OracleBounds,
) -> Result<BTreeSet<LetterId>, OracleError> {
    Ok(Oracle::with_bounds(a, kind, bounds)?.cyclic(u)?.letters)
}
