//! LimAvg and the spoke-penalized mean.

use std::collections::BTreeSet;

use automata_core::{int, EdgeId, Quatomaton, Rational, StateId};
use lasso_values::{Value, ValueKind};

use crate::fast::canonical_spoke;
use crate::walk::reachable;
use crate::{Answer, Oracle, OracleError};

fn mean(a: &Quatomaton, edges: &[EdgeId]) -> Rational {
    let sum: Rational = edges.iter().map(|&e| a.weight(e).expect("weights checked").clone()).sum();
    sum / int(edges.len() as i64)
}

/// Mean of the period minus the canonical spoke length of
/// `prefix · period^ω`.
pub(crate) fn custom_value(a: &Quatomaton, prefix: &[EdgeId], period: &[EdgeId]) -> Rational {
    let j = canonical_spoke(prefix.len(), |i| prefix[i], period);
    mean(a, period) - int(j as i64)
}

/// Exact: the best simple-cycle mean reachable after each first letter.
pub(crate) fn limavg_any(o: &Oracle, q: StateId) -> Answer {
    let a = &o.a;
    let means = o.cycle_means();
    let mut per_edge: Vec<(EdgeId, Rational)> = Vec::new();
    for &e in a.out_edges(q) {
        let seen = reachable(a, a.edge(e).to);
        let best = (0..a.num_states()).filter(|&s| seen[s]).filter_map(|s| means[s].clone()).max();
        per_edge.push((e, best.expect("every state reaches a cycle")));
    }
    let best = per_edge.iter().map(|(_, m)| m).max().expect("no dead ends").clone();
    let letters = per_edge.iter().filter(|(_, m)| *m == best).map(|&(e, _)| a.edge(e).letter).collect();
    Answer { value: Value::Rational(best), letters, saturated: false }
}

/// Cyclic trails at the current state; a preferred trail must not start
/// with a shorter returning trail of lower value.
pub(crate) fn cyclic(o: &Oracle, u: &[EdgeId]) -> Result<Answer, OracleError> {
    let a = &o.a;
    let q = o.end_state(u);
    let set = o.trails_at(q)?;
    let value = |period: &[EdgeId]| match o.kind {
        ValueKind::LimAvg => mean(a, period),
        _ => custom_value(a, u, period),
    };
    let values: Vec<Rational> = set.trails.iter().map(|t| value(&t.edges)).collect();
    let Some(best) = values.iter().max().cloned() else {
        return Ok(Answer { value: Value::Bottom, letters: BTreeSet::new(), saturated: set.cut });
    };
    let mut letters = BTreeSet::new();
    for (t, v) in set.trails.iter().zip(&values) {
        if *v == best && t.returns.iter().all(|&r| value(&t.edges[..r]) >= best) {
            letters.insert(a.edge(t.edges[0]).letter);
        }
    }
    Ok(Answer { value: Value::Rational(best), letters, saturated: set.cut })
}

/// State-simple spokes from the current state, trail periods.
pub(crate) fn custom_any(o: &Oracle, u: &[EdgeId]) -> Result<Answer, OracleError> {
    let a = &o.a;
    let q = o.end_state(u);
    let mut best: Option<Rational> = None;
    let mut letters = BTreeSet::new();
    let mut saturated = false;
    let mut on_path = vec![false; a.num_states()];
    let mut prefix = u.to_vec();
    on_path[q] = true;
    simple_spokes(o, q, &mut on_path, &mut prefix, u.len(), &mut |prefix, p| {
        let set = o.trails_at(p)?;
        saturated |= set.cut;
        for t in &set.trails {
            if t.edges.len() > o.bounds.max_period {
                saturated = true;
                continue;
            }
            let v = custom_value(a, prefix, &t.edges);
            let first = a.edge(if prefix.len() > u.len() { prefix[u.len()] } else { t.edges[0] }).letter;
            match best.as_ref().map(|b| v.cmp(b)) {
                Some(std::cmp::Ordering::Less) => {}
                Some(std::cmp::Ordering::Equal) => {
                    letters.insert(first);
                }
                _ => {
                    best = Some(v);
                    letters = BTreeSet::from([first]);
                }
            }
        }
        Ok(())
    })?;
    Ok(Answer { value: Value::Rational(best.expect("every state reaches a cycle")), letters, saturated })
}

/// Calls `visit(prefix, end)` for `prefix` = u followed by every state-simple
/// path from the current state of length ≤ `max_spoke`.
pub(crate) fn simple_spokes(
    o: &Oracle,
    v: StateId,
    on_path: &mut [bool],
    prefix: &mut Vec<EdgeId>,
    base: usize,
    visit: &mut dyn FnMut(&[EdgeId], StateId) -> Result<(), OracleError>,
) -> Result<(), OracleError> {
    visit(prefix, v)?;
    if prefix.len() - base >= o.bounds.max_spoke {
        return Ok(());
    }
    for &e in o.a.out_edges(v) {
        let w = o.a.edge(e).to;
        if on_path[w] {
            continue;
        }
        on_path[w] = true;
        prefix.push(e);
        simple_spokes(o, w, on_path, prefix, base, visit)?;
        prefix.pop();
        on_path[w] = false;
    }
    Ok(())
}
