//! Robustness triples with integer keys.
//!
//! A triple `(a, τ_v, k(τ_u − τ_v))` is kept as the period's acceptance bit,
//! its score sums and length, and the spoke differential scaled by that
//! length, so every comparison is an exact integer cross product.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use automata_core::{ratio, EdgeId, Quatomaton, StateId};
use lasso_values::{edge_color, period_accepts, Color, RobustnessValue, ScorePair, Value};

use crate::fast::canonical_spoke;
use crate::mean::simple_spokes;
use crate::walk::{reachable, Trail};
use crate::{Answer, Oracle, OracleError};

/// `(white − black, green − red)` of one edge.
pub(crate) fn edge_score(a: &Quatomaton, e: EdgeId) -> (i64, i64) {
    match edge_color(a, e).expect("ranks checked") {
        Color::White => (1, 0),
        Color::Black => (-1, 0),
        Color::Green => (0, 1),
        Color::Red => (0, -1),
        Color::Yellow => (0, 0),
    }
}

fn frac_cmp(n1: i64, d1: i64, n2: i64, d2: i64) -> Ordering {
    (n1 as i128 * d2 as i128).cmp(&(n2 as i128 * d1 as i128))
}

/// Acceptance and average score of a period.
#[derive(Clone, Copy, Debug)]
pub(crate) struct PeriodKey {
    pub accept: bool,
    pub w: i64,
    pub g: i64,
    pub len: i64,
}

impl PeriodKey {
    pub(crate) fn of(a: &Quatomaton, period: &[EdgeId]) -> Self {
        let (w, g) = period.iter().fold((0, 0), |(w, g), &e| {
            let (x, y) = edge_score(a, e);
            (w + x, g + y)
        });
        PeriodKey { accept: period_accepts(a, period), w, g, len: period.len() as i64 }
    }

    /// Compares the averages only.
    fn cmp_avg(&self, o: &Self) -> Ordering {
        frac_cmp(self.w, self.len, o.w, o.len).then_with(|| frac_cmp(self.g, self.len, o.g, o.len))
    }
}

impl Ord for PeriodKey {
    fn cmp(&self, o: &Self) -> Ordering {
        self.accept.cmp(&o.accept).then_with(|| self.cmp_avg(o))
    }
}
impl PartialOrd for PeriodKey {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl PartialEq for PeriodKey {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for PeriodKey {}

/// A full triple; the differential is `(dw, dg) / period.len`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Key {
    pub period: PeriodKey,
    pub dw: i64,
    pub dg: i64,
}

impl Key {
    pub(crate) fn of(a: &Quatomaton, prefix: &[EdgeId], period: &[EdgeId]) -> Self {
        let p = PeriodKey::of(a, period);
        let j = canonical_spoke(prefix.len(), |i| prefix[i], period);
        let (sw, sg) = prefix[..j].iter().fold((0, 0), |(w, g), &e| {
            let (x, y) = edge_score(a, e);
            (w + x, g + y)
        });
        let j = j as i64;
        Key { period: p, dw: p.len * sw - j * p.w, dg: p.len * sg - j * p.g }
    }

    pub(crate) fn to_value(self) -> Value {
        let l = self.period.len;
        Value::Robustness(RobustnessValue {
            accept: self.period.accept,
            period_avg: ScorePair { wb: ratio(self.period.w, l), gr: ratio(self.period.g, l) },
            spoke_diff: ScorePair { wb: ratio(self.dw, l), gr: ratio(self.dg, l) },
        })
    }
}

impl Ord for Key {
    fn cmp(&self, o: &Self) -> Ordering {
        self.period
            .cmp(&o.period)
            .then_with(|| frac_cmp(self.dw, self.period.len, o.dw, o.period.len))
            .then_with(|| frac_cmp(self.dg, self.period.len, o.dg, o.period.len))
    }
}
impl PartialOrd for Key {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl PartialEq for Key {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Key {}

struct Best {
    key: Option<Key>,
    letters: BTreeSet<usize>,
}

impl Best {
    fn offer(&mut self, k: Key, letter: usize) {
        match self.key.map(|b| k.cmp(&b)) {
            Some(Ordering::Less) => {}
            Some(Ordering::Equal) => {
                self.letters.insert(letter);
            }
            _ => {
                self.key = Some(k);
                self.letters = BTreeSet::from([letter]);
            }
        }
    }
}

/// Any-extensions: periods are cyclic trails of the best acceptance and
/// average; spokes are all walks up to `max_spoke` edges, maximized edge by
/// edge. When a reachable cycle averages above
/// the best accepting period the supremum may be unattained: the answer is
/// then taken over state-simple spokes and marked saturated.
pub(crate) fn any(o: &Oracle, u: &[EdgeId]) -> Result<Answer, OracleError> {
    let a = &o.a;
    let q = o.end_state(u);
    let reach = reachable(a, q);
    let mut saturated = false;
    let mut top: Option<PeriodKey> = None;
    let mut periods: Vec<Vec<(PeriodKey, &Trail)>> = vec![Vec::new(); a.num_states()];
    for p in (0..a.num_states()).filter(|&p| reach[p]) {
        let set = o.trails_at(p)?;
        saturated |= set.cut;
        for t in &set.trails {
            if t.edges.len() > o.bounds.max_period {
                saturated = true;
                continue;
            }
            let k = PeriodKey::of(a, &t.edges);
            if top.map_or(true, |b| k > b) {
                top = Some(k);
            }
            periods[p].push((k, t));
        }
    }
    let top = top.expect("every state reaches a cycle");
    let unattained = top.accept && periods.iter().flatten().any(|(k, _)| k.cmp_avg(&top) == Ordering::Greater);
    let cands: Vec<Vec<&Trail>> =
        periods.iter().map(|ps| ps.iter().filter(|(k, _)| *k == top).map(|&(_, t)| t).collect()).collect();
    let mut best = Best { key: None, letters: BTreeSet::new() };
    let visit = |prefix: &[EdgeId], p: StateId, best: &mut Best| {
        for t in &cands[p] {
            let first = if prefix.len() > u.len() { prefix[u.len()] } else { t.edges[0] };
            best.offer(Key::of(a, prefix, &t.edges), a.edge(first).letter);
        }
    };
    if unattained {
        saturated = true;
        let mut on_path = vec![false; a.num_states()];
        on_path[q] = true;
        let mut prefix = u.to_vec();
        simple_spokes(o, q, &mut on_path, &mut prefix, u.len(), &mut |prefix, p| {
            visit(prefix, p, &mut best);
            Ok(())
        })?;
    } else {
        for t in &cands[q] {
            best.offer(Key::of(a, u, &t.edges), a.edge(t.edges[0]).letter);
        }
        let w = differentials(a, top);
        let start = u.iter().fold((0, 0), |acc, &e| add(acc, w[e]));
        let gain = spoke_gains(a, &reach, &cands, &w, o.bounds.max_spoke);
        for &e in a.out_edges(q) {
            if let Some(g) = gain[e] {
                let (dw, dg) = add(start, add(w[e], g));
                best.offer(Key { period: top, dw, dg }, a.edge(e).letter);
            }
        }
    }
    let key = best.key.expect("every state reaches a cycle");
    Ok(Answer { value: key.to_value(), letters: best.letters, saturated })
}

fn add(x: (i64, i64), y: (i64, i64)) -> (i64, i64) {
    (x.0 + y.0, x.1 + y.1)
}

/// Per-edge spoke differential in units of `top.len`.
fn differentials(a: &Quatomaton, top: PeriodKey) -> Vec<(i64, i64)> {
    (0..a.edges().len())
        .map(|e| {
            let (x, y) = edge_score(a, e);
            (top.len * x - top.w, top.len * y - top.g)
        })
        .collect()
}

/// For each edge `e`, the heaviest continuation of a spoke starting with
/// `e`, over walks of at most `max_spoke` edges that stop at a state with a
/// candidate period whose last edge differs from the spoke's last edge.
///
/// A spoke whose tail repeats its period denotes the same word as a shorter
/// canonical lasso, which is counted there (or as an empty spoke), so these
/// walks are exactly the canonical ones and the value is additive.
fn spoke_gains(
    a: &Quatomaton,
    reach: &[bool],
    cands: &[Vec<&Trail>],
    w: &[(i64, i64)],
    max_spoke: usize,
) -> Vec<Option<(i64, i64)>> {
    let stop: Vec<Option<(i64, i64)>> = (0..a.edges().len())
        .map(|e| {
            let to = a.edge(e).to;
            (reach[to] && cands[to].iter().any(|t| t.edges.last() != Some(&e))).then_some((0, 0))
        })
        .collect();
    let mut f = stop.clone();
    for _ in 1..max_spoke {
        let next: Vec<Option<(i64, i64)>> = (0..a.edges().len())
            .map(|e| {
                let mut b = stop[e];
                for &e2 in a.out_edges(a.edge(e).to) {
                    if let Some(g) = f[e2] {
                        let c = add(w[e2], g);
                        if b.map_or(true, |b| c > b) {
                            b = Some(c);
                        }
                    }
                }
                b
            })
            .collect();
        f = next;
    }
    f
}

/// Cyclic extensions: trails at the current state, evaluated with the
/// whole prefix, under the prefix condition.
pub(crate) fn cyclic(o: &Oracle, u: &[EdgeId]) -> Result<Answer, OracleError> {
    let a = &o.a;
    let q = o.end_state(u);
    let set = o.trails_at(q)?;
    let Some(top) = set.trails.iter().map(|t| PeriodKey::of(a, &t.edges)).max() else {
        return Ok(Answer { value: Value::Bottom, letters: BTreeSet::new(), saturated: set.cut });
    };
    let cands: Vec<(&Trail, Key)> = set
        .trails
        .iter()
        .filter(|t| PeriodKey::of(a, &t.edges) == top)
        .map(|t| (t, Key::of(a, u, &t.edges)))
        .collect();
    let t = cands.iter().map(|&(_, k)| k).max().expect("top is attained");
    let mut letters = BTreeSet::new();
    for (tr, k) in &cands {
        if *k == t && tr.returns.iter().all(|&r| Key::of(a, u, &tr.edges[..r]) >= t) {
            letters.insert(a.edge(tr.edges[0]).letter);
        }
    }
    Ok(Answer { value: t.to_value(), letters, saturated: set.cut })
}
