use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ValueKind {
    Sup,
    Inf,
    LimSup,
    LimInf,
    LimAvg,
    ParityBool,
    Robustness,
    /// Mean weight of the aligned period minus the aligned spoke length.
    LimAvgMinusSpoke,
}

impl ValueKind {
    pub const ALL: [ValueKind; 8] = [
        ValueKind::Sup,
        ValueKind::Inf,
        ValueKind::LimSup,
        ValueKind::LimInf,
        ValueKind::LimAvg,
        ValueKind::ParityBool,
        ValueKind::Robustness,
        ValueKind::LimAvgMinusSpoke,
    ];

    pub fn needs_weights(self) -> bool {
        !self.needs_ranks()
    }

    pub fn needs_ranks(self) -> bool {
        matches!(self, ValueKind::ParityBool | ValueKind::Robustness)
    }

    /// Sup, Inf, their limit versions and parity depend on a lasso only
    /// through the sets of edges on its spoke and period.
    pub fn is_set_based(self) -> bool {
        matches!(self, ValueKind::Sup | ValueKind::Inf | ValueKind::LimSup | ValueKind::LimInf | ValueKind::ParityBool)
    }

    pub fn name(self) -> &'static str {
        match self {
            ValueKind::Sup => "sup",
            ValueKind::Inf => "inf",
            ValueKind::LimSup => "limsup",
            ValueKind::LimInf => "liminf",
            ValueKind::LimAvg => "limavg",
            ValueKind::ParityBool => "parity",
            ValueKind::Robustness => "robustness",
            ValueKind::LimAvgMinusSpoke => "limavg-minus-spoke",
        }
    }
}

impl fmt::Display for ValueKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ValueKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "sup" => ValueKind::Sup,
            "inf" => ValueKind::Inf,
            "limsup" => ValueKind::LimSup,
            "liminf" => ValueKind::LimInf,
            "limavg" => ValueKind::LimAvg,
            "parity" | "paritybool" => ValueKind::ParityBool,
            "robustness" | "rbst" => ValueKind::Robustness,
            "limavg-minus-spoke" | "custom" => ValueKind::LimAvgMinusSpoke,
            _ => return Err(format!("unknown value kind {s:?}")),
        })
    }
}
