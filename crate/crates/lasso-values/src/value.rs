use std::cmp::Ordering;
use std::fmt;

use automata_core::{display_rational, format_rational, int, Rational};
use serde_json::json;

use crate::color::ScorePair;
use crate::ValueError;

/// Robustness triple `(accept, τ_v, k·(τ_u − τ_v))`, ordered lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RobustnessValue {
    pub accept: bool,
    pub period_avg: ScorePair,
    pub spoke_diff: ScorePair,
}

impl Ord for RobustnessValue {
    fn cmp(&self, other: &Self) -> Ordering {
        self.accept
            .cmp(&other.accept)
            .then_with(|| self.period_avg.wb.cmp(&other.period_avg.wb))
            .then_with(|| self.period_avg.gr.cmp(&other.period_avg.gr))
            .then_with(|| self.spoke_diff.wb.cmp(&other.spoke_diff.wb))
            .then_with(|| self.spoke_diff.gr.cmp(&other.spoke_diff.gr))
    }
}

impl PartialOrd for RobustnessValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for RobustnessValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},({},{}),({},{}))",
            if self.accept { "T" } else { "F" },
            display_rational(&self.period_avg.wb),
            display_rational(&self.period_avg.gr),
            display_rational(&self.spoke_diff.wb),
            display_rational(&self.spoke_diff.gr)
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Value {
    Rational(Rational),
    Bool(bool),
    Robustness(RobustnessValue),
    /// No cyclic extension exists; below every other value.
    Bottom,
}

impl Value {
    pub fn int(n: i64) -> Value {
        Value::Rational(int(n))
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self, Value::Bottom)
    }

    /// Reports form: rationals as `"num/den"`, triples as nested arrays,
    /// bottom as null.
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Value::Rational(r) => json!(format_rational(r)),
            Value::Bool(b) => json!(b),
            Value::Robustness(r) => json!([
                r.accept,
                [format_rational(&r.period_avg.wb), format_rational(&r.period_avg.gr)],
                [format_rational(&r.spoke_diff.wb), format_rational(&r.spoke_diff.gr)]
            ]),
            Value::Bottom => serde_json::Value::Null,
        }
    }

    fn tag(&self) -> &'static str {
        match self {
            Value::Rational(_) => "rational",
            Value::Bool(_) => "boolean",
            Value::Robustness(_) => "robustness",
            Value::Bottom => "bottom",
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Rational(r) => f.write_str(&display_rational(r)),
            Value::Bool(b) => f.write_str(if *b { "T" } else { "F" }),
            Value::Robustness(r) => r.fmt(f),
            Value::Bottom => f.write_str("⊥"),
        }
    }
}

/// Total order within a kind; bottom lies below everything.
pub fn compare_values(x: &Value, y: &Value) -> Result<Ordering, ValueError> {
    Ok(match (x, y) {
        (Value::Bottom, Value::Bottom) => Ordering::Equal,
        (Value::Bottom, _) => Ordering::Less,
        (_, Value::Bottom) => Ordering::Greater,
        (Value::Rational(a), Value::Rational(b)) => a.cmp(b),
        (Value::Bool(a), Value::Bool(b)) => a.cmp(b),
        (Value::Robustness(a), Value::Robustness(b)) => a.cmp(b),
        _ => return Err(ValueError::CrossKind(x.tag(), y.tag())),
    })
}

impl PartialOrd for Value {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        compare_values(self, other).ok()
    }
}
