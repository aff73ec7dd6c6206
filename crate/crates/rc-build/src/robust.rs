//! Robustness: the best period is the accepting cyclic trail of greatest
//! average score reachable from a state; among spokes leading to it, the
//! one with the largest differential wins.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use automata_core::{EdgeId, Quatomaton, StateId};
use graph_analysis::{enumerate_cyclic_trails, reachable, Anchor};
use lasso_values::period_accepts;

use crate::maxlike::cap_error;
use crate::memory::{cmp_scaled, score, score_sum, Candidate, Pair, RobustEntry, SpokeGain};
use crate::{BuildError, Built, Caps, Entry, LetterSet, Mode, Strength};

#[derive(Clone, Copy, Debug)]
struct Period {
    accept: bool,
    score: (i64, i64),
    len: i64,
}

impl Period {
    fn of(a: &Quatomaton, t: &[EdgeId]) -> Self {
        Period { accept: period_accepts(a, t), score: score_sum(a, t), len: t.len() as i64 }
    }

    fn cmp(&self, o: &Period) -> Ordering {
        self.accept.cmp(&o.accept).then(cmp_scaled(self.score, self.len, o.score, o.len))
    }
}

/// The cyclic trails at one state: the best period, the trails attaining
/// it, and the greatest average of any trail.
struct AtState {
    best: Period,
    top: Vec<Vec<EdgeId>>,
    richest: Period,
}

fn trails_at(a: &Quatomaton, s: StateId, caps: Caps) -> Result<Vec<Vec<EdgeId>>, BuildError> {
    let mut out = Vec::new();
    enumerate_cyclic_trails(a, |_| true, Anchor::State(s), a.edges().len(), caps.trails, |t| out.push(t.to_vec()))
        .map_err(|err| cap_error(err, a, s))?;
    Ok(out)
}

fn summarize(a: &Quatomaton, trails: Vec<Vec<EdgeId>>) -> Option<AtState> {
    let keys: Vec<Period> = trails.iter().map(|t| Period::of(a, t)).collect();
    let best = *keys.iter().max_by(|x, y| x.cmp(y))?;
    let richest = *keys.iter().max_by(|x, y| cmp_scaled(x.score, x.len, y.score, y.len))?;
    let top = trails.into_iter().zip(&keys).filter(|(_, k)| k.cmp(&best).is_eq()).map(|(t, _)| t).collect();
    Some(AtState { best, top, richest })
}

/// Spoke length after dropping trailing edges that repeat the period
/// backwards.
fn canonical_spoke(x: &[EdgeId], period: &[EdgeId]) -> usize {
    let (n, m) = (x.len() as i64, period.len() as i64);
    let mut j = n;
    while j > 0 && x[(j - 1) as usize] == period[(j - 1 - n).rem_euclid(m) as usize] {
        j -= 1;
    }
    j as usize
}

/// A candidate before trail ids are assigned.
struct Draft {
    trail: Vec<EdgeId>,
    guards: Vec<Vec<EdgeId>>,
    eligible: bool,
}

struct DraftEntry {
    fixed: Option<LetterSet>,
    spoke: Option<SpokeGain>,
    candidates: Vec<Draft>,
}

pub(crate) fn build(a: &Quatomaton, mode: Mode, caps: Caps) -> Result<Built, BuildError> {
    let mut at = Vec::with_capacity(a.num_states());
    for s in 0..a.num_states() {
        at.push(summarize(a, trails_at(a, s, caps)?));
    }
    let mut drafts = Vec::with_capacity(a.num_states());
    let mut unattained = vec![false; a.num_states()];
    match mode {
        Mode::Any => {
            for v in 0..a.num_states() {
                let reach = reachable(a, v, |_| true);
                let here: Vec<&AtState> = (0..a.num_states()).filter(|&p| reach[p]).filter_map(|p| at[p].as_ref()).collect();
                let best = here.iter().map(|x| x.best).max_by(|x, y| x.cmp(y)).expect("every state reaches a cycle");
                unattained[v] = best.accept && here.iter().any(|x| cmp_scaled(x.richest.score, x.richest.len, best.score, best.len).is_gt());
                drafts.push(if unattained[v] {
                    DraftEntry { fixed: Some(best_spokes(a, v, &at, best, caps)?), spoke: None, candidates: Vec::new() }
                } else {
                    exact_spokes(a, v, &at, best)
                });
            }
        }
        Mode::Cyclic => {
            for (s, info) in at.iter().enumerate() {
                let mut candidates = Vec::new();
                for t in info.iter().flat_map(|i| &i.top) {
                    let guards: Vec<Vec<EdgeId>> = (1..t.len()).filter(|&i| a.edge(t[i - 1]).to == s).map(|i| t[..i].to_vec()).collect();
                    let best = info.as_ref().expect("trails exist").best;
                    let eligible = guards.iter().all(|g| Period::of(a, g).cmp(&best).is_eq());
                    candidates.push(Draft { trail: t.clone(), guards: if eligible { guards } else { Vec::new() }, eligible });
                }
                drafts.push(DraftEntry { fixed: None, spoke: None, candidates });
            }
        }
    }
    let (trails, entries) = assign_ids(a, drafts);
    Ok(Built { unattained: Some(unattained), trails, ..Built::simple(Strength::Strong, Vec::new()) }.with_entries(entries))
}

/// Closes the candidate trails under rotation, numbers them in
/// (anchor, edges) order and rewrites the entries with the numbers.
fn assign_ids(a: &Quatomaton, drafts: Vec<DraftEntry>) -> (Vec<Vec<EdgeId>>, Vec<Entry>) {
    let mut all: BTreeSet<(StateId, Vec<EdgeId>)> = BTreeSet::new();
    let mut todo: Vec<Vec<EdgeId>> = drafts.iter().flat_map(|d| &d.candidates).flat_map(|c| std::iter::once(&c.trail).chain(&c.guards)).cloned().collect();
    while let Some(t) = todo.pop() {
        if all.insert((a.edge(t[0]).from, t.clone())) {
            let mut r = vec![t[t.len() - 1]];
            r.extend_from_slice(&t[..t.len() - 1]);
            todo.push(r);
        }
    }
    let trails: Vec<Vec<EdgeId>> = all.into_iter().map(|(_, t)| t).collect();
    let id: BTreeMap<&Vec<EdgeId>, usize> = trails.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let entries = drafts
        .into_iter()
        .map(|d| {
            Entry::Robust(RobustEntry {
                fixed: d.fixed,
                spoke: d.spoke,
                candidates: d
                    .candidates
                    .iter()
                    .map(|c| Candidate { trail: id[&c.trail], guards: c.guards.iter().map(|g| id[g]).collect(), eligible: c.eligible })
                    .collect(),
            })
        })
        .collect();
    (trails, entries)
}

fn add(x: Pair, y: Pair) -> Pair {
    (x.0 + y.0, x.1 + y.1)
}

/// Optimal nonempty spokes from `v` and the empty-spoke candidates, when no
/// reachable cycle averages more than `best`. Spoke edges are weighted
/// `len · score − period sum`, which has no positive cycles, so the
/// optimum is a longest-path fixpoint over "arrived through edge e". A walk
/// may stop at a top trail unless it arrived through the trail's own last
/// edge, in which case its canonical spoke is shorter and counted from the
/// earlier stop.
fn exact_spokes(a: &Quatomaton, v: StateId, at: &[Option<AtState>], best: Period) -> DraftEntry {
    let reach = reachable(a, v, |_| true);
    let top_at = |s: StateId| at[s].as_ref().filter(|x| x.best.cmp(&best).is_eq()).map(|x| &x.top);
    let w: Vec<Pair> = (0..a.edges().len())
        .map(|e| {
            let (x, y) = score(a, e);
            (best.len * x - best.score.0, best.len * y - best.score.1)
        })
        .collect();
    let stop_after = |e: EdgeId| top_at(a.edge(e).to).is_some_and(|ts| ts.iter().any(|t| *t.last().expect("nonempty") != e));
    let live: Vec<EdgeId> = (0..a.edges().len()).filter(|&e| reach[a.edge(e).from]).collect();
    let mut h: Vec<Option<Pair>> = vec![None; a.edges().len()];
    for &e in &live {
        if stop_after(e) {
            h[e] = Some((0, 0));
        }
    }
    loop {
        let mut changed = false;
        for &e in &live {
            for &f in a.out_edges(a.edge(e).to) {
                if let Some(x) = h[f] {
                    let cand = add(w[f], x);
                    if h[e].map_or(true, |y| cand > y) {
                        h[e] = Some(cand);
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut spoke: Option<SpokeGain> = None;
    for &e in a.out_edges(v) {
        let Some(x) = h[e] else { continue };
        let gain = add(w[e], x);
        match spoke.as_ref().map(|s| gain.cmp(&s.gain)) {
            Some(Ordering::Less) => {}
            Some(Ordering::Equal) => {
                spoke.as_mut().expect("compared").letters.insert(a.edge(e).letter);
            }
            _ => spoke = Some(SpokeGain { gain, len: best.len, letters: LetterSet::from([a.edge(e).letter]) }),
        }
    }
    let candidates = top_at(v)
        .into_iter()
        .flatten()
        .map(|t| Draft { trail: t.clone(), guards: Vec::new(), eligible: true })
        .collect();
    DraftEntry { fixed: None, spoke, candidates }
}

/// First letters of the state-simple spokes from `v`, each followed by a
/// trail of period `best`, that maximize the spoke differential.
fn best_spokes(a: &Quatomaton, v: StateId, at: &[Option<AtState>], best: Period, caps: Caps) -> Result<LetterSet, BuildError> {
    struct Search<'a> {
        a: &'a Quatomaton,
        at: &'a [Option<AtState>],
        best: Period,
        on_path: Vec<bool>,
        path: Vec<EdgeId>,
        top: Option<((i64, i64), i64)>,
        letters: LetterSet,
        visited: usize,
        cap: usize,
    }

    impl Search<'_> {
        fn go(&mut self, s: StateId) -> Result<(), BuildError> {
            self.visited += 1;
            if self.visited > self.cap {
                let detail = format!("spokes from {}", self.a.state_name(s));
                return Err(BuildError::CapExceeded { what: "simple spokes", cap: self.cap, detail });
            }
            if let Some(info) = &self.at[s] {
                if info.best.cmp(&self.best).is_eq() {
                    for t in &info.top {
                        let j = canonical_spoke(&self.path, t);
                        let (sw, sg) = score_sum(self.a, &self.path[..j]);
                        let p = Period::of(self.a, t);
                        let j = j as i64;
                        // Σ (score − average) over the spoke, scaled by the period length
                        let (len, diff) = (p.len, (p.len * sw - j * p.score.0, p.len * sg - j * p.score.1));
                        let first = self.a.edge(*self.path.first().unwrap_or(&t[0])).letter;
                        let ord = self.top.map_or(Ordering::Greater, |(d, l)| cmp_scaled(diff, len, d, l));
                        if ord.is_gt() {
                            self.top = Some((diff, len));
                            self.letters.clear();
                        }
                        if !ord.is_lt() {
                            self.letters.insert(first);
                        }
                    }
                }
            }
            for &e in self.a.out_edges(s) {
                let to = self.a.edge(e).to;
                if !self.on_path[to] {
                    self.on_path[to] = true;
                    self.path.push(e);
                    self.go(to)?;
                    self.path.pop();
                    self.on_path[to] = false;
                }
            }
            Ok(())
        }
    }

    let mut on_path = vec![false; a.num_states()];
    on_path[v] = true;
    let mut search =
        Search { a, at, best, on_path, path: Vec::new(), top: None, letters: LetterSet::new(), visited: 0, cap: caps.cycles };
    search.go(v)?;
    Ok(search.letters)
}
