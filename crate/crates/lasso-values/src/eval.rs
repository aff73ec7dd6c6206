use automata_core::{int, lasso_run, normalize_dual_sinks, EdgeId, LassoRun, LassoWord, Quatomaton, Rational, StateId};

use crate::color::{edge_color, ColorCounts, ScorePair};
use crate::kind::ValueKind;
use crate::value::{RobustnessValue, Value};
use crate::ValueError;

fn check_fields(a: &Quatomaton, kind: ValueKind) -> Result<(), ValueError> {
    if kind.needs_weights() && !a.has_weights() {
        return Err(ValueError::MissingWeights(kind));
    }
    if kind.needs_ranks() && a.ranks().is_none() {
        return Err(ValueError::MissingRanks(kind));
    }
    Ok(())
}

/// Normalizes dual sinks when present and maps `start` into the result.
fn prepared(a: &Quatomaton, start: StateId) -> Result<(std::borrow::Cow<'_, Quatomaton>, StateId), ValueError> {
    if !a.has_sink_states() {
        return Ok((std::borrow::Cow::Borrowed(a), start));
    }
    let n = normalize_dual_sinks(a)?;
    let s = n.state_id(a.state_name(start)).ok_or(ValueError::StartIsSink)?;
    Ok((std::borrow::Cow::Owned(n), s))
}

fn weights<'a>(a: &'a Quatomaton, edges: &'a [EdgeId]) -> impl Iterator<Item = &'a Rational> + 'a {
    edges.iter().map(move |&e| a.weight(e).expect("weights checked"))
}

/// Value of the run on `w` from `start`.
pub fn eval_lasso(a: &Quatomaton, kind: ValueKind, w: &LassoWord, start: StateId) -> Result<Value, ValueError> {
    check_fields(a, kind)?;
    let (a, start) = prepared(a, start)?;
    let run = lasso_run(&a, w, start)?;
    Ok(eval_run(&a, kind, &run))
}

/// Value of an already aligned lasso run.
pub fn eval_run(a: &Quatomaton, kind: ValueKind, run: &LassoRun) -> Value {
    let all = || weights(a, &run.spoke_edges).chain(weights(a, &run.period_edges));
    let cycle = || weights(a, &run.period_edges);
    let mean = || {
        let sum: Rational = cycle().sum();
        sum / int(run.period_edges.len() as i64)
    };
    match kind {
        ValueKind::Sup => Value::Rational(all().max().expect("nonempty period").clone()),
        ValueKind::Inf => Value::Rational(all().min().expect("nonempty period").clone()),
        ValueKind::LimSup => Value::Rational(cycle().max().expect("nonempty period").clone()),
        ValueKind::LimInf => Value::Rational(cycle().min().expect("nonempty period").clone()),
        ValueKind::LimAvg => Value::Rational(mean()),
        ValueKind::LimAvgMinusSpoke => Value::Rational(mean() - int(run.spoke_edges.len() as i64)),
        ValueKind::ParityBool => Value::Bool(period_accepts(a, &run.period_edges)),
        ValueKind::Robustness => Value::Robustness(robustness_of_run(a, run)),
    }
}

/// Parity acceptance of a period: its minimal edge rank is even.
pub fn period_accepts(a: &Quatomaton, period: &[EdgeId]) -> bool {
    let min = period.iter().map(|&e| a.edge_rank(e).expect("ranks checked")).min().expect("nonempty period");
    min.rem_euclid(2) == 0
}

fn counts(a: &Quatomaton, edges: &[EdgeId]) -> ColorCounts {
    let mut c = ColorCounts::default();
    for &e in edges {
        c.add(edge_color(a, e).expect("ranks checked"));
    }
    c
}

fn robustness_of_run(a: &Quatomaton, run: &LassoRun) -> RobustnessValue {
    let cu = counts(a, &run.spoke_edges);
    let cv = counts(a, &run.period_edges);
    let tau_v = ScorePair::averaged(&cv);
    let k = int(cu.len() as i64);
    // k·(τ_u − τ_v) = score(u) − k·τ_v, which is (0,0) for an empty spoke
    let spoke_diff = ScorePair { wb: int(cu.wb()) - &k * &tau_v.wb, gr: int(cu.gr()) - &k * &tau_v.gr };
    RobustnessValue { accept: period_accepts(a, &run.period_edges), period_avg: tau_v, spoke_diff }
}

/// Robustness triple of `w` from `start`.
pub fn robustness_value(a: &Quatomaton, w: &LassoWord, start: StateId) -> Result<RobustnessValue, ValueError> {
    match eval_lasso(a, ValueKind::Robustness, w, start)? {
        Value::Robustness(r) => Ok(r),
        _ => unreachable!("robustness kind yields a triple"),
    }
}
