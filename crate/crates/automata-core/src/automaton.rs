use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::rational::{format_rational, parse_rational, Rational};
use crate::AutomatonError;

pub type StateId = usize;
pub type LetterId = usize;
pub type EdgeId = usize;

/// Rank of the absorbing accepting sink of a dual parity automaton.
pub const ACCEPTING_SINK: i64 = -2;
/// Rank of the absorbing rejecting sink.
pub const REJECTING_SINK: i64 = -1;

/// Marks an edge that stood for entering a −2/−1 sink before normalization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sink {
    Accepting,
    Rejecting,
}

impl Sink {
    pub fn rank(self) -> i64 {
        match self {
            Sink::Accepting => ACCEPTING_SINK,
            Sink::Rejecting => REJECTING_SINK,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Sink::Accepting => "accepting",
            Sink::Rejecting => "rejecting",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub from: StateId,
    pub letter: LetterId,
    pub to: StateId,
    pub weight: Option<Rational>,
    pub sink: Option<Sink>,
}

/// Deterministic automaton with optional edge weights and state ranks.
///
/// The transition function may be partial, but every state that is not a
/// −2/−1 sink has at least one outgoing edge, so every run extends forever.
/// Edges are kept sorted by `(from, letter)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quatomaton {
    alphabet: Vec<String>,
    states: Vec<String>,
    initial: StateId,
    edges: Vec<Edge>,
    ranks: Option<Vec<i64>>,
    projection: Option<BTreeMap<String, Option<LetterId>>>,
    delta: Vec<Vec<Option<EdgeId>>>,
    out: Vec<Vec<EdgeId>>,
    letter_index: HashMap<String, LetterId>,
    state_index: HashMap<String, StateId>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AutomatonDoc {
    alphabet: Vec<String>,
    edges: Vec<EdgeDoc>,
    initial: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    projection: Option<BTreeMap<String, Option<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ranks: Option<BTreeMap<String, i64>>,
    states: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDoc {
    from: String,
    letter: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sink: Option<String>,
    to: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weight: Option<String>,
}

/// Raw edge used by [`Quatomaton::new`].
#[derive(Clone, Debug)]
pub struct EdgeSpec {
    pub from: String,
    pub letter: String,
    pub to: String,
    pub weight: Option<Rational>,
    pub sink: Option<Sink>,
}

impl EdgeSpec {
    pub fn new(from: &str, letter: &str, to: &str) -> Self {
        EdgeSpec { from: from.into(), letter: letter.into(), to: to.into(), weight: None, sink: None }
    }

    pub fn weighted(from: &str, letter: &str, to: &str, w: Rational) -> Self {
        EdgeSpec { weight: Some(w), ..EdgeSpec::new(from, letter, to) }
    }
}

fn index_names(names: &[String], what: &str) -> Result<HashMap<String, usize>, AutomatonError> {
    let mut map = HashMap::with_capacity(names.len());
    for (i, n) in names.iter().enumerate() {
        if map.insert(n.clone(), i).is_some() {
            return Err(AutomatonError::Schema(format!("duplicate {what} name {n:?}")));
        }
    }
    Ok(map)
}

impl Quatomaton {
    /// Validates and assembles an automaton.
    pub fn new(
        alphabet: Vec<String>,
        states: Vec<String>,
        initial: &str,
        edges: Vec<EdgeSpec>,
        ranks: Option<BTreeMap<String, i64>>,
        projection: Option<BTreeMap<String, Option<String>>>,
    ) -> Result<Self, AutomatonError> {
        if states.is_empty() {
            return Err(AutomatonError::Schema("no states".into()));
        }
        let letter_index = index_names(&alphabet, "letter")?;
        let state_index = index_names(&states, "state")?;
        let state = |n: &str| state_index.get(n).copied().ok_or_else(|| AutomatonError::UnknownState(n.into()));
        let letter = |n: &str| letter_index.get(n).copied().ok_or_else(|| AutomatonError::UnknownLetter(n.into()));
        let initial = state(initial)?;

        let ranks = match ranks {
            None => None,
            Some(map) => {
                let mut out = vec![None; states.len()];
                for (name, r) in map {
                    if r < ACCEPTING_SINK {
                        return Err(AutomatonError::Schema(format!("rank {r} of {name:?} below -2")));
                    }
                    out[state(&name)?] = Some(r);
                }
                let ranks: Option<Vec<i64>> = out.into_iter().collect();
                Some(ranks.ok_or(AutomatonError::PartialRanks)?)
            }
        };

        let mut built = Vec::with_capacity(edges.len());
        for e in edges {
            built.push(Edge {
                from: state(&e.from)?,
                letter: letter(&e.letter)?,
                to: state(&e.to)?,
                weight: e.weight,
                sink: e.sink,
            });
        }
        built.sort_by_key(|e| (e.from, e.letter));
        let weighted = built.iter().filter(|e| e.weight.is_some()).count();
        if weighted != 0 && weighted != built.len() {
            return Err(AutomatonError::PartialWeights);
        }

        let mut delta = vec![vec![None; alphabet.len()]; states.len()];
        let mut out = vec![Vec::new(); states.len()];
        for (id, e) in built.iter().enumerate() {
            let slot = &mut delta[e.from][e.letter];
            if let Some(prev) = *slot {
                let prev: &Edge = &built[prev];
                let what = if prev.to == e.to { "duplicate edge" } else { "nondeterministic" };
                return Err(AutomatonError::Nondeterministic {
                    state: states[e.from].clone(),
                    letter: alphabet[e.letter].clone(),
                    what,
                });
            }
            *slot = Some(id);
            out[e.from].push(id);
        }

        for (s, name) in states.iter().enumerate() {
            let sink = matches!(ranks.as_ref().map(|r| r[s]), Some(r) if r < 0);
            if sink && !out[s].is_empty() {
                return Err(AutomatonError::SinkWithEdges(name.clone()));
            }
            if !sink && out[s].is_empty() {
                return Err(AutomatonError::DeadEnd(name.clone()));
            }
        }
        for e in &built {
            if e.sink.is_some() && e.from != e.to {
                return Err(AutomatonError::Schema("sink-flagged edge must be a self-loop".into()));
            }
        }
        if built.iter().any(|e| e.sink.is_some()) && ranks.is_none() {
            return Err(AutomatonError::Schema("sink-flagged edges need ranks".into()));
        }

        let projection = match projection {
            None => None,
            Some(map) => {
                let mut out = BTreeMap::new();
                for (sys, prop) in map {
                    let target = match prop {
                        None => None,
                        Some(p) => Some(letter(&p)?),
                    };
                    out.insert(sys, target);
                }
                Some(out)
            }
        };

        Ok(Quatomaton { alphabet, states, initial, edges: built, ranks, projection, delta, out, letter_index, state_index })
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_letters(&self) -> usize {
        self.alphabet.len()
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e]
    }

    /// Outgoing edges of `s`, sorted by letter.
    pub fn out_edges(&self, s: StateId) -> &[EdgeId] {
        &self.out[s]
    }

    pub fn transition(&self, s: StateId, letter: LetterId) -> Option<EdgeId> {
        self.delta[s][letter]
    }

    pub fn has_weights(&self) -> bool {
        self.edges.first().map_or(false, |e| e.weight.is_some())
    }

    pub fn ranks(&self) -> Option<&[i64]> {
        self.ranks.as_deref()
    }

    pub fn rank(&self, s: StateId) -> Option<i64> {
        self.ranks.as_ref().map(|r| r[s])
    }

    /// Rank an edge contributes to acceptance: the sink rank for flagged
    /// edges, otherwise the rank of its target.
    pub fn edge_rank(&self, e: EdgeId) -> Option<i64> {
        let edge = &self.edges[e];
        match edge.sink {
            Some(s) => Some(s.rank()),
            None => self.rank(edge.to),
        }
    }

    pub fn weight(&self, e: EdgeId) -> Option<&Rational> {
        self.edges[e].weight.as_ref()
    }

    /// True when some state has rank −2 or −1.
    pub fn has_sink_states(&self) -> bool {
        self.ranks.as_ref().map_or(false, |r| r.iter().any(|&r| r < 0))
    }

    pub fn letter_id(&self, name: &str) -> Option<LetterId> {
        self.letter_index.get(name).copied()
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.state_index.get(name).copied()
    }

    pub fn letter_name(&self, l: LetterId) -> &str {
        &self.alphabet[l]
    }

    pub fn state_name(&self, s: StateId) -> &str {
        &self.states[s]
    }

    pub fn projection(&self) -> Option<&BTreeMap<String, Option<LetterId>>> {
        self.projection.as_ref()
    }

    /// Maps a system letter to a property letter; `Ok(None)` means the
    /// letter is irrelevant to the property and is consumed without a move.
    pub fn project(&self, system_letter: &str) -> Result<Option<LetterId>, AutomatonError> {
        if let Some(map) = &self.projection {
            if let Some(target) = map.get(system_letter) {
                return Ok(*target);
            }
        }
        self.letter_id(system_letter)
            .map(Some)
            .ok_or_else(|| AutomatonError::UnknownLetter(system_letter.into()))
    }

    /// Parses a letter sequence separated by whitespace or commas. `ε`
    /// alone denotes the empty word.
    pub fn parse_word(&self, text: &str) -> Result<Vec<LetterId>, AutomatonError> {
        let text = text.trim();
        if text.is_empty() || text == "ε" || text == "eps" {
            return Ok(Vec::new());
        }
        text.split(|c: char| c.is_whitespace() || c == ',' || c == '.')
            .filter(|t| !t.is_empty())
            .map(|t| self.letter_id(t).ok_or_else(|| AutomatonError::UnknownLetter(t.into())))
            .collect()
    }

    pub fn format_word(&self, word: &[LetterId]) -> String {
        word.iter().map(|&l| self.letter_name(l)).collect::<Vec<_>>().join(" ")
    }

    /// Same automaton with a different initial state.
    pub fn with_initial(&self, s: StateId) -> Self {
        let mut a = self.clone();
        a.initial = s;
        a
    }

    /// Parses the canonical JSON document.
    pub fn load(document: &str) -> Result<Self, AutomatonError> {
        let doc: AutomatonDoc = serde_json::from_str(document).map_err(|e| AutomatonError::Json(e.to_string()))?;
        let mut edges = Vec::with_capacity(doc.edges.len());
        for e in doc.edges {
            let weight = match e.weight {
                None => None,
                Some(w) => Some(parse_rational(&w).ok_or(AutomatonError::BadWeight(w))?),
            };
            let sink = match e.sink.as_deref() {
                None => None,
                Some("accepting") => Some(Sink::Accepting),
                Some("rejecting") => Some(Sink::Rejecting),
                Some(other) => return Err(AutomatonError::Schema(format!("unknown sink flag {other:?}"))),
            };
            edges.push(EdgeSpec { from: e.from, letter: e.letter, to: e.to, weight, sink });
        }
        Quatomaton::new(doc.alphabet, doc.states, &doc.initial, edges, doc.ranks, doc.projection)
    }

    /// Canonical JSON: sorted keys, two-space indent, trailing newline.
    pub fn save(&self) -> String {
        let doc = AutomatonDoc {
            alphabet: self.alphabet.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeDoc {
                    from: self.states[e.from].clone(),
                    letter: self.alphabet[e.letter].clone(),
                    sink: e.sink.map(|s| s.name().to_string()),
                    to: self.states[e.to].clone(),
                    weight: e.weight.as_ref().map(format_rational),
                })
                .collect(),
            initial: self.states[self.initial].clone(),
            projection: self.projection.as_ref().map(|m| {
                m.iter().map(|(k, v)| (k.clone(), v.map(|l| self.alphabet[l].clone()))).collect()
            }),
            ranks: self
                .ranks
                .as_ref()
                .map(|r| r.iter().enumerate().map(|(s, &r)| (self.states[s].clone(), r)).collect()),
            states: self.states.clone(),
        };
        let mut text = serde_json::to_string_pretty(&doc).expect("automaton serializes");
        text.push('\n');
        text
    }

    /// Hex SHA-256 of the canonical document.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.save().as_bytes()))
    }
}
