//! Exact answers for kinds whose lasso value depends only on which edges the
//! spoke and period visit: each walk is summarized by a single extremum.

use std::collections::{BTreeSet, HashSet};

use automata_core::{EdgeId, Quatomaton, Rational, StateId};
use lasso_values::{Value, ValueKind};

use crate::Answer;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Op {
    Max,
    Min,
}

impl Op {
    fn apply(self, x: i64, y: i64) -> i64 {
        match self {
            Op::Max => x.max(y),
            Op::Min => x.min(y),
        }
    }
}

pub(crate) struct SetOracle {
    kind: ValueKind,
    /// Per edge: index into `weights`, or the edge rank for parity.
    measure: Vec<i64>,
    weights: Vec<Rational>,
    op: Op,
    /// Sup and Inf also see the spoke.
    uses_prefix: bool,
    /// Summaries of all closed walks at each state.
    closed: Vec<BTreeSet<i64>>,
}

impl SetOracle {
    pub(crate) fn new(a: &Quatomaton, kind: ValueKind) -> Self {
        let mut weights: Vec<Rational> = Vec::new();
        let measure: Vec<i64> = if kind == ValueKind::ParityBool {
            (0..a.edges().len()).map(|e| a.edge_rank(e).expect("ranks checked")).collect()
        } else {
            weights = a.edges().iter().enumerate().map(|(e, _)| a.weight(e).expect("weights checked").clone()).collect();
            weights.sort();
            weights.dedup();
            (0..a.edges().len())
                .map(|e| weights.binary_search(a.weight(e).expect("weights checked")).expect("present") as i64)
                .collect()
        };
        let op = match kind {
            ValueKind::Sup | ValueKind::LimSup => Op::Max,
            _ => Op::Min,
        };
        let uses_prefix = matches!(kind, ValueKind::Sup | ValueKind::Inf);
        let mut o = SetOracle { kind, measure, weights, op, uses_prefix, closed: Vec::new() };
        o.closed = (0..a.num_states()).map(|s| o.walk_summaries(a, s, false).into_iter().map(|(_, m)| m).collect()).collect();
        o
    }

    /// Larger is better; equal keys mean equal values.
    fn key(&self, m: i64) -> i64 {
        if self.kind == ValueKind::ParityBool {
            i64::from(m.rem_euclid(2) == 0)
        } else {
            m
        }
    }

    fn value(&self, m: i64) -> Value {
        if self.kind == ValueKind::ParityBool {
            Value::Bool(m.rem_euclid(2) == 0)
        } else {
            Value::Rational(self.weights[m as usize].clone())
        }
    }

    fn fold(&self, edges: &[EdgeId]) -> Option<i64> {
        edges.iter().map(|&e| self.measure[e]).reduce(|x, y| self.op.apply(x, y))
    }

    fn join(&self, x: Option<i64>, y: i64) -> i64 {
        x.map_or(y, |x| self.op.apply(x, y))
    }

    /// (first edge, summary) of closed walks at `s`. With `first_return`
    /// the walks stop at their first return to `s`.
    fn walk_summaries(&self, a: &Quatomaton, s: StateId, first_return: bool) -> BTreeSet<(EdgeId, i64)> {
        let mut found = BTreeSet::new();
        for &e in a.out_edges(s) {
            let mut seen: HashSet<(StateId, i64)> = HashSet::new();
            let mut stack = vec![(a.edge(e).to, self.measure[e])];
            while let Some((v, m)) = stack.pop() {
                if !seen.insert((v, m)) {
                    continue;
                }
                if v == s {
                    found.insert((e, m));
                    if first_return {
                        continue;
                    }
                }
                for &f in a.out_edges(v) {
                    stack.push((a.edge(f).to, self.op.apply(m, self.measure[f])));
                }
            }
        }
        found
    }

    /// Best summary of an infinite continuation from `q` whose spoke so far
    /// has summary `pre`.
    fn best_from(&self, a: &Quatomaton, q: StateId, pre: Option<i64>) -> Option<i64> {
        let pre = if self.uses_prefix { pre } else { None };
        let mut seen: HashSet<(StateId, Option<i64>)> = HashSet::new();
        let mut stack = vec![(q, pre)];
        let mut best: Option<i64> = None;
        while let Some((v, m)) = stack.pop() {
            if !seen.insert((v, m)) {
                continue;
            }
            for &c in &self.closed[v] {
                let total = self.join(m, c);
                if best.map_or(true, |b| self.key(total) > self.key(b)) {
                    best = Some(total);
                }
            }
            for &f in a.out_edges(v) {
                let next = if self.uses_prefix { Some(self.join(m, self.measure[f])) } else { None };
                stack.push((a.edge(f).to, next));
            }
        }
        best
    }

    pub(crate) fn any(&self, a: &Quatomaton, u: &[EdgeId], q: StateId) -> Answer {
        let pre = self.fold(u);
        let per_edge: Vec<(EdgeId, i64)> = a
            .out_edges(q)
            .iter()
            .filter_map(|&e| self.best_from(a, a.edge(e).to, Some(self.join(pre, self.measure[e]))).map(|m| (e, m)))
            .collect();
        self.answer(a, &per_edge, false)
    }

    pub(crate) fn cyclic(&self, a: &Quatomaton, u: &[EdgeId], q: StateId) -> Answer {
        let pre = if self.uses_prefix { self.fold(u) } else { None };
        let mut per_edge: Vec<(EdgeId, i64)> = Vec::new();
        for (e, c) in self.walk_summaries(a, q, true) {
            let total = self.join(pre, c);
            match per_edge.last_mut() {
                Some((f, m)) if *f == e => {
                    if self.key(total) > self.key(*m) {
                        *m = total;
                    }
                }
                _ => per_edge.push((e, total)),
            }
        }
        self.answer(a, &per_edge, true)
    }

    fn answer(&self, a: &Quatomaton, per_edge: &[(EdgeId, i64)], bottom_if_empty: bool) -> Answer {
        let Some(best) = per_edge.iter().map(|&(_, m)| m).max_by_key(|&m| self.key(m)) else {
            debug_assert!(bottom_if_empty, "every state has an infinite continuation");
            return Answer { value: Value::Bottom, letters: BTreeSet::new(), saturated: false };
        };
        let letters =
            per_edge.iter().filter(|&&(_, m)| self.key(m) == self.key(best)).map(|&(e, _)| a.edge(e).letter).collect();
        Answer { value: self.value(best), letters, saturated: false }
    }
}
