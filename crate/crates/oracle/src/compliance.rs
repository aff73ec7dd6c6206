//! Compliance of a word with recommendations, and the verdict it implies.

use std::collections::BTreeSet;

use automata_core::{LassoWord, LetterId};
use lasso_values::{eval_lasso, Value, ValueKind};

use crate::{Oracle, OracleError};

/// Anything that recommends letters after a prefix.
pub trait Advisor {
    fn any_set(&self, u: &[LetterId]) -> BTreeSet<LetterId>;
    fn cyclic_set(&self, u: &[LetterId]) -> BTreeSet<LetterId>;
}

impl Advisor for Oracle {
    fn any_set(&self, u: &[LetterId]) -> BTreeSet<LetterId> {
        self.any(u).map(|a| a.letters).unwrap_or_default()
    }

    fn cyclic_set(&self, u: &[LetterId]) -> BTreeSet<LetterId> {
        self.cyclic(u).map(|a| a.letters).unwrap_or_default()
    }
}

/// How the second half of the observed window treats cyclic recommendations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CyclicTail {
    Always,
    Never,
    Mixed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Some letter left the any-recommendation.
    RejectedByDeviation,
    /// The cyclic recommendation is never followed in the tail.
    RejectedByCyclicNeglect,
    /// Any-compliant throughout and cyclic-compliant in the tail.
    Accepted,
    /// Quantitative: compliant from `from`, and the value equals the best
    /// any-extension value at `from`.
    Optimal { from: usize },
    /// Quantitative: compliant from `from` but the value falls short.
    Suboptimal { from: usize },
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplianceReport {
    pub horizon: usize,
    pub any_deviations: Vec<usize>,
    pub cyclic_deviations: Vec<usize>,
    pub first_any_deviation: Option<usize>,
    /// Index after the last any-deviation.
    pub any_compliant_from: usize,
    /// Index after the last cyclic deviation.
    pub cyclic_compliant_from: usize,
    pub cyclic_tail: CyclicTail,
    pub verdict: Verdict,
    /// Value of the whole word.
    pub value: Value,
    /// Best any-extension value at `any_compliant_from`, for quantitative kinds.
    pub best: Option<Value>,
}

/// Reads `horizon` letters of `w` against `advisor`. The tail is the second
/// half of that window; it should cover a full period of the run for the
/// cofinite checks to mean anything.
pub fn check_compliance(
    oracle: &Oracle,
    w: &LassoWord,
    advisor: &dyn Advisor,
    horizon: usize,
) -> Result<ComplianceReport, OracleError> {
    let letters = w.unroll(horizon);
    let mut any_deviations = Vec::new();
    let mut cyclic_deviations = Vec::new();
    for i in 0..horizon {
        let u = &letters[..i];
        if !advisor.any_set(u).contains(&letters[i]) {
            any_deviations.push(i);
        }
        if !advisor.cyclic_set(u).contains(&letters[i]) {
            cyclic_deviations.push(i);
        }
    }
    let tail = horizon / 2;
    let tail_devs = cyclic_deviations.iter().filter(|&&i| i >= tail).count();
    let cyclic_tail = match tail_devs {
        0 => CyclicTail::Always,
        n if n == horizon - tail => CyclicTail::Never,
        _ => CyclicTail::Mixed,
    };
    let any_compliant_from = any_deviations.last().map_or(0, |&i| i + 1);
    let cyclic_compliant_from = cyclic_deviations.last().map_or(0, |&i| i + 1);
    let value = eval_lasso(oracle.automaton(), oracle.kind(), w, oracle.start())?;
    let (verdict, best) = if oracle.kind() == ValueKind::ParityBool {
        let v = if !any_deviations.is_empty() {
            Verdict::RejectedByDeviation
        } else {
            match cyclic_tail {
                CyclicTail::Never => Verdict::RejectedByCyclicNeglect,
                CyclicTail::Always => Verdict::Accepted,
                CyclicTail::Mixed => Verdict::Undetermined,
            }
        };
        (v, None)
    } else {
        let best = oracle.any(&letters[..any_compliant_from.min(horizon)])?.value;
        let v = if any_compliant_from < tail && cyclic_tail == CyclicTail::Always {
            if value == best {
                Verdict::Optimal { from: any_compliant_from }
            } else {
                Verdict::Suboptimal { from: any_compliant_from }
            }
        } else {
            Verdict::Undetermined
        };
        (v, Some(best))
    };
    Ok(ComplianceReport {
        horizon,
        first_any_deviation: any_deviations.first().copied(),
        any_deviations,
        cyclic_deviations,
        any_compliant_from,
        cyclic_compliant_from,
        cyclic_tail,
        verdict,
        value,
        best,
    })
}
