use std::collections::BTreeMap;

use crate::automaton::{EdgeSpec, Quatomaton, Sink, ACCEPTING_SINK};
use crate::AutomatonError;

/// Replaces every edge into a −2/−1 state by a flagged self-loop on its
/// source and drops the sink states. Automata without sinks are returned
/// unchanged.
pub fn normalize_dual_sinks(a: &Quatomaton) -> Result<Quatomaton, AutomatonError> {
    if !a.has_sink_states() {
        return Ok(a.clone());
    }
    let ranks = a.ranks().expect("sinks imply ranks");
    let is_sink = |s: usize| ranks[s] < 0;
    if is_sink(a.initial()) {
        return Err(AutomatonError::Schema("initial state is a sink".into()));
    }
    let states: Vec<String> = (0..a.num_states()).filter(|&s| !is_sink(s)).map(|s| a.state_name(s).to_string()).collect();
    let mut edges = Vec::with_capacity(a.edges().len());
    for e in a.edges() {
        let from = a.state_name(e.from);
        let letter = a.letter_name(e.letter);
        let spec = if is_sink(e.to) {
            let sink = if ranks[e.to] == ACCEPTING_SINK { Sink::Accepting } else { Sink::Rejecting };
            EdgeSpec { sink: Some(sink), ..EdgeSpec::new(from, letter, from) }
        } else {
            EdgeSpec { sink: e.sink, ..EdgeSpec::new(from, letter, a.state_name(e.to)) }
        };
        edges.push(EdgeSpec { weight: e.weight.clone(), ..spec });
    }
    let rank_map: BTreeMap<String, i64> =
        (0..a.num_states()).filter(|&s| !is_sink(s)).map(|s| (a.state_name(s).to_string(), ranks[s])).collect();
    let projection = a.projection().map(|m| {
        m.iter().map(|(k, v)| (k.clone(), v.map(|l| a.letter_name(l).to_string()))).collect()
    });
    Quatomaton::new(a.alphabet().to_vec(), states, a.state_name(a.initial()), edges, Some(rank_map), projection)
}
