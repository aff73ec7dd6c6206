//! LimInf and Inf: keep the weakest edge of the continuation as heavy as
//! possible.

use std::collections::BTreeSet;

use automata_core::{EdgeId, Quatomaton, Rational, StateId};
use graph_analysis::{bottleneck_propagation, max_min_cycle_value, reachable, sccs_where, Anchor, Condensation};

use crate::{components, toward_best_component, weight, Breakpoint, Built, Entry, LetterSet, Mode, Strength, Threshold};

fn internal_to(c: &Condensation, i: usize) -> impl Fn(EdgeId) -> bool + '_ {
    move |e| c.msccs[i].edges.binary_search(&e).is_ok()
}

pub(crate) fn liminf(a: &Quatomaton, mode: Mode) -> Built {
    let c = components(a);
    let sets = match mode {
        Mode::Any => {
            // best min-weight over the cycles of each component, and the
            // edges of cycles attaining it
            let (value, targets): (Vec<Rational>, Vec<Vec<EdgeId>>) = (0..c.msccs.len())
                .map(|i| {
                    let inside = internal_to(&c, i);
                    let levels: BTreeSet<&Rational> = c.msccs[i].edges.iter().map(|&e| weight(a, e)).collect();
                    levels
                        .into_iter()
                        .rev()
                        .find_map(|theta| {
                            let sub = sccs_where(a, |e| inside(e) && weight(a, e) >= theta);
                            let edges: Vec<EdgeId> = sub.msccs.into_iter().flat_map(|m| m.edges).collect();
                            (!edges.is_empty()).then(|| (theta.clone(), edges))
                        })
                        .expect("a component has a cycle")
                })
                .unzip();
            toward_best_component(a, &c, &value, &targets).1
        }
        Mode::Cyclic => (0..a.num_states())
            .map(|s| {
                let Some(i) = c.component[s] else { return LetterSet::new() };
                let inside = internal_to(&c, i);
                let theta = max_min_cycle_value(a, &inside, Anchor::State(s)).expect("state lies on a cycle");
                let heavy = |e: EdgeId| inside(e) && *weight(a, e) >= theta;
                a.out_edges(s)
                    .iter()
                    .filter(|&&e| heavy(e) && reachable(a, a.edge(e).to, heavy)[s])
                    .map(|&e| a.edge(e).letter)
                    .collect()
            })
            .collect(),
    };
    let strength = if mode == Mode::Any { Strength::Weak } else { Strength::Strong };
    Built::simple(strength, sets)
}

/// Breakpoint `t` answers with the edges whose value is at least `t`; past
/// the largest value only the best edges remain.
fn by_edge_value(a: &Quatomaton, edges: &[(EdgeId, Rational)]) -> Entry {
    let levels: BTreeSet<&Rational> = edges.iter().map(|(_, t)| t).collect();
    let breakpoints: Vec<Breakpoint> = levels
        .iter()
        .map(|&t| Breakpoint {
            threshold: t.clone(),
            letters: edges.iter().filter(|(_, x)| x >= t).map(|&(e, _)| a.edge(e).letter).collect(),
        })
        .collect();
    let fallback = breakpoints.last().map(|b| b.letters.clone()).unwrap_or_default();
    Entry::Thresholded { breakpoints, fallback }
}

pub(crate) fn inf(a: &Quatomaton, mode: Mode) -> Built {
    let value_of: Box<dyn Fn(StateId) -> Vec<(EdgeId, Rational)>> = match mode {
        Mode::Any => {
            let b = bottleneck_propagation(a);
            Box::new(move |s| a.out_edges(s).iter().map(|&e| (e, b.theta_e[e].clone())).collect())
        }
        Mode::Cyclic => {
            let c = components(a);
            Box::new(move |s| {
                let Some(i) = c.component[s] else { return Vec::new() };
                let inside = internal_to(&c, i);
                a.out_edges(s)
                    .iter()
                    .filter(|&&e| inside(e))
                    .map(|&e| (e, max_min_cycle_value(a, &inside, Anchor::Edge(e)).expect("internal edge lies on a cycle")))
                    .collect()
            })
        }
    };
    let entries = (0..a.num_states()).map(|s| by_edge_value(a, &value_of(s))).collect();
    Built { strength: Strength::Strong, threshold: Some(Threshold::Le), entries, dead: None, unattained: None, trails: Vec::new() }
}
