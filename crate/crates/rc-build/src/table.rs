//! The compiled table and its JSON document.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use automata_core::{format_rational, parse_rational, LetterId, Quatomaton, Rational, StateId};
use lasso_values::ValueKind;
use serde::{Deserialize, Serialize};

use crate::memory::{Candidate, RobustEntry, SpokeGain, Tracker};
use crate::{prepare, BuildError};

pub type LetterSet = BTreeSet<LetterId>;

/// Which recommendation set a table serves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    Any,
    Cyclic,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Any => "any",
            Mode::Cyclic => "cyclic",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "any" => Ok(Mode::Any),
            "cyclic" => Ok(Mode::Cyclic),
            _ => Err(format!("unknown mode `{s}` (expected any or cyclic)")),
        }
    }
}

/// Strong tables return the full optimal set; weak ones a nonempty subset.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strength {
    Weak,
    Strong,
}

impl Strength {
    pub fn name(self) -> &'static str {
        match self {
            Strength::Weak => "weak",
            Strength::Strong => "strong",
        }
    }
}

/// How a running extremum selects a breakpoint. `Lt` picks the first
/// breakpoint strictly above it (a running maximum, unset meaning −∞);
/// `Le` the first at or above it (a running minimum, unset meaning +∞).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Threshold {
    Lt,
    Le,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Breakpoint {
    pub threshold: Rational,
    pub letters: LetterSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Entry {
    Simple(LetterSet),
    /// Breakpoints sorted by increasing threshold; `fallback` answers when
    /// none is selected.
    Thresholded { breakpoints: Vec<Breakpoint>, fallback: LetterSet },
    /// Decided at run time from the run memory.
    Robust(RobustEntry),
}

/// Enumeration limits applied while building.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Caps {
    /// Simple paths explored per state.
    pub cycles: usize,
    /// Cyclic trails enumerated per anchor.
    pub trails: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { cycles: 100_000, trails: 200_000 }
    }
}

impl FromStr for Caps {
    type Err = String;

    /// `cycles,trails`.
    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        match parts.as_slice() {
            [c, t] => {
                let num = |x: &str| x.parse::<usize>().map_err(|_| format!("invalid cap `{x}`"));
                Ok(Caps { cycles: num(c)?, trails: num(t)? })
            }
            _ => Err(format!("caps must be `cycles,trails`, got `{s}`")),
        }
    }
}

/// A compiled recommendation table over the sink-normalized automaton.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RcTable {
    pub kind: ValueKind,
    pub mode: Mode,
    pub strength: Strength,
    /// Hash of the automaton as given to the builder, before normalization.
    pub automaton_hash: String,
    /// Set for thresholded tables.
    pub threshold: Option<Threshold>,
    /// Indexed by normalized state.
    pub entries: Vec<Entry>,
    /// States from which no accepting run exists (parity tables).
    pub dead: Vec<bool>,
    /// States whose best spoke may be improved by pumping a cycle.
    pub unattained: Vec<bool>,
    pub caps: Caps,
    pub(crate) tracker: Tracker,
}

impl RcTable {
    /// Trails followed by the run memory.
    pub fn tracked_trails(&self) -> &[Vec<automata_core::EdgeId>] {
        &self.tracker.trails
    }

    /// Letters recommended at `s` for a run that starts there, given the
    /// running extremum (`None` when no edge was taken yet).
    pub fn lookup(&self, s: StateId, extremum: Option<&Rational>) -> LetterSet {
        let mut m = self.memory_at(s);
        m.extremum = extremum.cloned();
        self.recommend(&m, &mut 0)
    }

    /// Simple and thresholded entries; `ops` counts comparisons.
    pub(crate) fn lookup_counted(&self, s: StateId, extremum: Option<&Rational>, ops: &mut u64) -> &LetterSet {
        *ops += 1;
        match &self.entries[s] {
            Entry::Robust(_) => unreachable!("robust entries need the run memory"),
            Entry::Simple(l) => l,
            Entry::Thresholded { breakpoints, fallback } => {
                let mut lo = 0;
                match extremum {
                    None if self.threshold == Some(Threshold::Le) => lo = breakpoints.len(),
                    None => {}
                    Some(x) => {
                        let mut hi = breakpoints.len();
                        // first breakpoint selected by x
                        while lo < hi {
                            *ops += 1;
                            let mid = (lo + hi) / 2;
                            let t = &breakpoints[mid].threshold;
                            let below = match self.threshold {
                                Some(Threshold::Le) => t < x,
                                _ => t <= x,
                            };
                            if below {
                                lo = mid + 1;
                            } else {
                                hi = mid;
                            }
                        }
                    }
                }
                breakpoints.get(lo).map_or(fallback, |b| &b.letters)
            }
        }
    }

    /// Largest breakpoint count of any state.
    pub fn max_breakpoints(&self) -> usize {
        self.entries
            .iter()
            .map(|e| match e {
                Entry::Simple(_) | Entry::Robust(_) => 0,
                Entry::Thresholded { breakpoints, .. } => breakpoints.len(),
            })
            .max()
            .unwrap_or(0)
    }

    /// Canonical JSON; `a` is the automaton the table was built from.
    pub fn save(&self, a: &Quatomaton) -> Result<String, BuildError> {
        let n = prepare(a, self.kind)?;
        let names = |l: &LetterSet| l.iter().map(|&x| n.letter_name(x).to_string()).collect::<Vec<_>>();
        let key = |t: &Rational| {
            let t = format_rational(t);
            match self.threshold {
                Some(Threshold::Le) => (None, Some(t)),
                _ => (Some(t), None),
            }
        };
        let table = self
            .entries
            .iter()
            .enumerate()
            .map(|(s, e)| {
                let doc = match e {
                    Entry::Simple(l) => EntryDoc::Simple(names(l)),
                    Entry::Thresholded { breakpoints, fallback } => EntryDoc::Thresholded {
                        breakpoints: breakpoints
                            .iter()
                            .map(|b| {
                                let (lt_threshold, le_threshold) = key(&b.threshold);
                                BreakpointDoc { lt_threshold, le_threshold, letters: names(&b.letters) }
                            })
                            .collect(),
                        fallback_letters: names(fallback),
                    },
                    Entry::Robust(r) => EntryDoc::Robust {
                        robust: RobustDoc {
                            fixed: r.fixed.as_ref().map(names),
                            spoke: r.spoke.as_ref().map(|g| SpokeDoc { gain: [g.gain.0, g.gain.1], len: g.len, letters: names(&g.letters) }),
                            candidates: r
                                .candidates
                                .iter()
                                .map(|c| CandidateDoc { trail: c.trail, guards: c.guards.clone(), eligible: c.eligible })
                                .collect(),
                        },
                    },
                };
                (n.state_name(s).to_string(), doc)
            })
            .collect();
        let flagged = |f: &[bool]| (0..n.num_states()).filter(|&s| f[s]).map(|s| n.state_name(s).to_string()).collect();
        let doc = TableDoc {
            v: 1,
            kind: self.kind.name().to_string(),
            mode: self.mode.name().to_string(),
            strength: self.strength.name().to_string(),
            automaton_hash: self.automaton_hash.clone(),
            threshold: self.threshold.map(|t| match t {
                Threshold::Lt => "lt".to_string(),
                Threshold::Le => "le".to_string(),
            }),
            table,
            flags: FlagsDoc { dead: flagged(&self.dead), unattained: flagged(&self.unattained) },
            caps: self.caps,
            trails: self
                .tracker
                .trails
                .iter()
                .map(|t| TrailDoc {
                    from: n.state_name(n.edge(t[0]).from).to_string(),
                    word: t.iter().map(|&e| n.letter_name(n.edge(e).letter).to_string()).collect(),
                })
                .collect(),
        };
        let mut text = serde_json::to_string_pretty(&doc).expect("table serializes");
        text.push('\n');
        Ok(text)
    }

    /// Parses a table document and checks it against `a`.
    pub fn load(text: &str, a: &Quatomaton) -> Result<RcTable, BuildError> {
        let bad = |m: String| BuildError::Table(m);
        let doc: TableDoc = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
        if doc.v != 1 {
            return Err(bad(format!("unsupported table version {}", doc.v)));
        }
        if doc.automaton_hash != a.hash() {
            return Err(BuildError::HashMismatch);
        }
        let kind: ValueKind = doc.kind.parse().map_err(bad)?;
        let mode: Mode = doc.mode.parse().map_err(bad)?;
        let strength = match doc.strength.as_str() {
            "weak" => Strength::Weak,
            "strong" => Strength::Strong,
            s => return Err(bad(format!("unknown strength `{s}`"))),
        };
        let threshold = match doc.threshold.as_deref() {
            None => None,
            Some("lt") => Some(Threshold::Lt),
            Some("le") => Some(Threshold::Le),
            Some(t) => return Err(bad(format!("unknown threshold `{t}`"))),
        };
        let n = prepare(a, kind)?;
        let letters = |names: &[String]| -> Result<LetterSet, BuildError> {
            names.iter().map(|x| n.letter_id(x).ok_or_else(|| bad(format!("unknown letter `{x}`")))).collect()
        };
        let mut entries: Vec<Option<Entry>> = vec![None; n.num_states()];
        for (state, e) in &doc.table {
            let s = n.state_id(state).ok_or_else(|| bad(format!("unknown state `{state}`")))?;
            let entry = match e {
                EntryDoc::Simple(l) => {
                    if threshold.is_some() {
                        return Err(bad(format!("state `{state}` lacks breakpoints")));
                    }
                    Entry::Simple(letters(l)?)
                }
                EntryDoc::Thresholded { breakpoints, fallback_letters } => {
                    let mut out = Vec::with_capacity(breakpoints.len());
                    for b in breakpoints {
                        let t = match (threshold, &b.lt_threshold, &b.le_threshold) {
                            (Some(Threshold::Lt), Some(t), None) | (Some(Threshold::Le), None, Some(t)) => t,
                            _ => return Err(bad(format!("breakpoint at `{state}` does not match the threshold type"))),
                        };
                        let t = parse_rational(t).ok_or_else(|| bad(format!("invalid threshold `{t}`")))?;
                        if out.last().is_some_and(|p: &Breakpoint| p.threshold >= t) {
                            return Err(bad(format!("breakpoints at `{state}` are not increasing")));
                        }
                        out.push(Breakpoint { threshold: t, letters: letters(&b.letters)? });
                    }
                    Entry::Thresholded { breakpoints: out, fallback: letters(fallback_letters)? }
                }
                EntryDoc::Robust { robust } => {
                    let known = |i: &usize| {
                        if *i < doc.trails.len() {
                            Ok(*i)
                        } else {
                            Err(bad(format!("state `{state}` refers to unknown trail {i}")))
                        }
                    };
                    Entry::Robust(RobustEntry {
                        fixed: robust.fixed.as_deref().map(letters).transpose()?,
                        spoke: match &robust.spoke {
                            None => None,
                            Some(g) if g.len > 0 => Some(SpokeGain { gain: (g.gain[0], g.gain[1]), len: g.len, letters: letters(&g.letters)? }),
                            Some(_) => return Err(bad(format!("spoke scale at `{state}` must be positive"))),
                        },
                        candidates: robust
                            .candidates
                            .iter()
                            .map(|c| {
                                Ok(Candidate {
                                    trail: known(&c.trail)?,
                                    guards: c.guards.iter().map(known).collect::<Result<_, _>>()?,
                                    eligible: c.eligible,
                                })
                            })
                            .collect::<Result<_, BuildError>>()?,
                    })
                }
            };
            entries[s] = Some(entry);
        }
        let entries = entries
            .into_iter()
            .enumerate()
            .map(|(s, e)| e.ok_or_else(|| bad(format!("no entry for state `{}`", n.state_name(s)))))
            .collect::<Result<Vec<_>, _>>()?;
        let flags = |names: &[String]| -> Result<Vec<bool>, BuildError> {
            let mut f = vec![false; n.num_states()];
            for x in names {
                f[n.state_id(x).ok_or_else(|| bad(format!("unknown state `{x}`")))?] = true;
            }
            Ok(f)
        };
        let mut trails = Vec::with_capacity(doc.trails.len());
        for t in &doc.trails {
            let mut s = n.state_id(&t.from).ok_or_else(|| bad(format!("unknown state `{}`", t.from)))?;
            let mut edges = Vec::with_capacity(t.word.len());
            for l in &t.word {
                let l = n.letter_id(l).ok_or_else(|| bad(format!("unknown letter `{l}`")))?;
                let e = n.transition(s, l).ok_or_else(|| bad(format!("trail from `{}` has no move", t.from)))?;
                edges.push(e);
                s = n.edge(e).to;
            }
            trails.push(edges);
        }
        let tracker = Tracker::new(&n, trails).map_err(bad)?;
        Ok(RcTable {
            tracker,
            kind,
            mode,
            strength,
            automaton_hash: doc.automaton_hash,
            threshold,
            entries,
            dead: flags(&doc.flags.dead)?,
            unattained: flags(&doc.flags.unattained)?,
            caps: doc.caps,
        })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableDoc {
    v: u32,
    kind: String,
    mode: String,
    strength: String,
    automaton_hash: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    threshold: Option<String>,
    table: BTreeMap<String, EntryDoc>,
    flags: FlagsDoc,
    caps: Caps,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    trails: Vec<TrailDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TrailDoc {
    from: String,
    word: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RobustDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    fixed: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    spoke: Option<SpokeDoc>,
    candidates: Vec<CandidateDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpokeDoc {
    gain: [i64; 2],
    len: i64,
    letters: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CandidateDoc {
    trail: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    guards: Vec<usize>,
    eligible: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum EntryDoc {
    Simple(Vec<String>),
    Thresholded { breakpoints: Vec<BreakpointDoc>, fallback_letters: Vec<String> },
    Robust { robust: RobustDoc },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BreakpointDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lt_threshold: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    le_threshold: Option<String>,
    letters: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FlagsDoc {
    dead: Vec<String>,
    unattained: Vec<String>,
}
