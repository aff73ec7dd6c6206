//! Per-run memory of a consultant and the constant-work step.
//!
//! Simple tables need only the current state. Thresholded tables add the
//! running extremum. Robustness tables add, for every tracked trail
//! anchored at the current state, how far the run so far matches that trail
//! read backwards (modulo its length): an empty spoke in front of such a
//! trail absorbs the matching tail of the run into the period.

use std::cmp::Ordering;

use automata_core::{EdgeId, LetterId, Quatomaton, Rational, StateId};
use lasso_values::{edge_color, Color};

use crate::{Entry, LetterSet, RcTable, Threshold};

pub(crate) type Pair = (i64, i64);

/// `(white − black, green − red)` of one edge.
pub(crate) fn score(a: &Quatomaton, e: EdgeId) -> Pair {
    match edge_color(a, e).expect("ranks checked") {
        Color::White => (1, 0),
        Color::Black => (-1, 0),
        Color::Green => (0, 1),
        Color::Red => (0, -1),
        Color::Yellow => (0, 0),
    }
}

pub(crate) fn score_sum(a: &Quatomaton, edges: &[EdgeId]) -> Pair {
    edges.iter().fold((0, 0), |(w, g), &e| {
        let (x, y) = score(a, e);
        (w + x, g + y)
    })
}

/// Compares `p1 / d1` with `p2 / d2` lexicographically.
pub(crate) fn cmp_scaled((w1, g1): Pair, d1: i64, (w2, g2): Pair, d2: i64) -> Ordering {
    let c = |x: i64, y: i64| (x as i128 * d2 as i128).cmp(&(y as i128 * d1 as i128));
    c(w1, w2).then(c(g1, g2))
}

/// Best nonempty canonical spoke: its differential scaled by `len`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpokeGain {
    pub gain: Pair,
    pub len: i64,
    pub letters: LetterSet,
}

/// A trail that may follow an empty spoke. In Cyclic tables `guards` are
/// its proper prefixes returning to the anchor, each of which must do at
/// least as well; `eligible` is false when one of them has a worse period.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub trail: usize,
    pub guards: Vec<usize>,
    pub eligible: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RobustEntry {
    /// Static answer, used where a spoke cycle could raise the value
    /// without bound.
    pub fixed: Option<LetterSet>,
    pub spoke: Option<SpokeGain>,
    pub candidates: Vec<Candidate>,
}

/// Derived lookup structure over the tracked trails.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub(crate) struct Tracker {
    pub trails: Vec<Vec<EdgeId>>,
    by_anchor: Vec<Vec<usize>>,
    pos: Vec<usize>,
    /// The trail rotated to start with its last edge.
    rot: Vec<usize>,
    len: Vec<i64>,
    first: Vec<LetterId>,
    /// `tail[t][k]`: minus the differential of the last `k` edges of `t`,
    /// scaled by its length.
    tail: Vec<Vec<Pair>>,
}

impl Tracker {
    /// Fails when the trail set is not closed under rotation.
    pub(crate) fn new(a: &Quatomaton, trails: Vec<Vec<EdgeId>>) -> Result<Tracker, String> {
        let mut by_anchor = vec![Vec::new(); a.num_states()];
        let mut pos = Vec::with_capacity(trails.len());
        let mut index = std::collections::BTreeMap::new();
        for (i, t) in trails.iter().enumerate() {
            let closed = !t.is_empty() && (0..t.len()).all(|j| a.edge(t[j]).to == a.edge(t[(j + 1) % t.len()]).from);
            if !closed {
                return Err(format!("tracked trail {i} is not a closed walk"));
            }
            let anchor = a.edge(t[0]).from;
            pos.push(by_anchor[anchor].len());
            by_anchor[anchor].push(i);
            index.insert(t.clone(), i);
        }
        let mut rot = Vec::with_capacity(trails.len());
        let mut len = Vec::with_capacity(trails.len());
        let mut tail = Vec::with_capacity(trails.len());
        for (i, t) in trails.iter().enumerate() {
            let m = t.len();
            let mut r = vec![t[m - 1]];
            r.extend_from_slice(&t[..m - 1]);
            rot.push(*index.get(&r).ok_or_else(|| format!("tracked trail {i} lacks its rotation"))?);
            let total = score_sum(a, t);
            let m = m as i64;
            let mut acc = vec![(0, 0)];
            for &e in t.iter().rev().take(t.len() - 1) {
                let (x, y) = score(a, e);
                let last = *acc.last().expect("seeded");
                acc.push((last.0 - (m * x - total.0), last.1 - (m * y - total.1)));
            }
            len.push(m);
            tail.push(acc);
        }
        let first = trails.iter().map(|t| a.edge(t[0]).letter).collect();
        Ok(Tracker { trails, by_anchor, pos, rot, len, first, tail })
    }

    fn value(&self, t: usize, matches: &[usize]) -> (Pair, i64) {
        (self.tail[t][matches[self.pos[t]]], self.len[t])
    }
}

/// What a consultant remembers about the run so far.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Memory {
    pub state: StateId,
    /// Running maximum (Sup tables) or minimum (Inf tables) weight.
    pub extremum: Option<Rational>,
    matches: Vec<usize>,
}

impl RcTable {
    /// Memory of a run that starts at `s`.
    pub fn memory_at(&self, s: StateId) -> Memory {
        Memory { state: s, extremum: None, matches: vec![0; self.tracker.by_anchor.get(s).map_or(0, Vec::len)] }
    }

    /// Records edge `e` of the normalized automaton `a`, leaving the
    /// memory's state. `ops` counts primitive operations.
    pub fn advance(&self, a: &Quatomaton, m: &mut Memory, e: EdgeId, ops: &mut u64) {
        let edge = a.edge(e);
        debug_assert_eq!(edge.from, m.state);
        *ops += 1;
        if let (Some(t), Some(w)) = (self.threshold, a.weight(e)) {
            *ops += 1;
            let replace = m.extremum.as_ref().map_or(true, |x| match t {
                Threshold::Lt => w > x,
                Threshold::Le => w < x,
            });
            if replace {
                m.extremum = Some(w.clone());
            }
        }
        let tr = &self.tracker;
        if !tr.trails.is_empty() {
            let next: Vec<usize> = tr.by_anchor[edge.to]
                .iter()
                .map(|&t| {
                    *ops += 1;
                    let trail = &tr.trails[t];
                    if *trail.last().expect("nonempty") == e {
                        (1 + m.matches[tr.pos[tr.rot[t]]]) % trail.len()
                    } else {
                        0
                    }
                })
                .collect();
            m.matches = next;
        }
        m.state = edge.to;
    }

    /// Recommended letters for the remembered run.
    pub fn recommend(&self, m: &Memory, ops: &mut u64) -> LetterSet {
        match &self.entries[m.state] {
            Entry::Robust(r) => self.recommend_robust(r, m, ops),
            _ => self.lookup_counted(m.state, m.extremum.as_ref(), ops).clone(),
        }
    }

    fn recommend_robust(&self, r: &RobustEntry, m: &Memory, ops: &mut u64) -> LetterSet {
        *ops += 1;
        if let Some(f) = &r.fixed {
            return f.clone();
        }
        let tr = &self.tracker;
        let mut best: Option<(Pair, i64)> = r.spoke.as_ref().map(|s| (s.gain, s.len));
        for c in &r.candidates {
            *ops += 1;
            let v = tr.value(c.trail, &m.matches);
            if best.map_or(true, |b| cmp_scaled(v.0, v.1, b.0, b.1).is_gt()) {
                best = Some(v);
            }
        }
        let Some(best) = best else { return LetterSet::new() };
        let mut out = match &r.spoke {
            Some(s) if cmp_scaled(s.gain, s.len, best.0, best.1).is_eq() => s.letters.clone(),
            _ => LetterSet::new(),
        };
        for c in &r.candidates {
            *ops += 1 + c.guards.len() as u64;
            let v = tr.value(c.trail, &m.matches);
            let holds = |g: &usize| {
                let x = tr.value(*g, &m.matches);
                !cmp_scaled(x.0, x.1, best.0, best.1).is_lt()
            };
            if c.eligible && cmp_scaled(v.0, v.1, best.0, best.1).is_eq() && c.guards.iter().all(holds) {
                out.insert(tr.first[c.trail]);
            }
        }
        out
    }
}
