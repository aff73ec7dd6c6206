//! LimSup, Sup and LimAvg: steer toward the best cycle a state can reach.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use automata_core::{int, EdgeId, Quatomaton, Rational};
use graph_analysis::{critical_edges_with, edge_weights, enumerate_cyclic_trails, max_mean_cycle_with, shortest_path_to_targets, Anchor, GraphError};

use crate::{
    components, internal_letters, reaching, toward_best_component, weight, within_component, BuildError, Built, Caps,
    Breakpoint, Entry, LetterSet, Mode, Strength, Threshold,
};

/// Heaviest internal weight of each component and its edges carrying it.
fn heaviest_internal(a: &Quatomaton, c: &graph_analysis::Condensation) -> (Vec<Rational>, Vec<Vec<EdgeId>>) {
    c.msccs
        .iter()
        .map(|m| {
            let top = m.edges.iter().map(|&e| weight(a, e)).max().expect("components have edges").clone();
            let edges = m.edges.iter().copied().filter(|&e| *weight(a, e) == top).collect();
            (top, edges)
        })
        .unzip()
}

pub(crate) fn limsup(a: &Quatomaton, mode: Mode) -> Built {
    let c = components(a);
    let (value, targets) = heaviest_internal(a, &c);
    let sets = match mode {
        Mode::Any => toward_best_component(a, &c, &value, &targets).1,
        Mode::Cyclic => within_component(a, &c, &targets),
    };
    Built::simple(Strength::Weak, sets)
}

pub(crate) fn sup(a: &Quatomaton, mode: Mode) -> Built {
    let c = components(a);
    let entries = match mode {
        Mode::Any => {
            // heaviest edge whose source is reachable
            let mut theta: Vec<Option<Rational>> = vec![None; a.num_states()];
            for e in 0..a.edges().len() {
                let mut mark = vec![false; a.num_states()];
                mark[a.edge(e).from] = true;
                for (s, r) in reaching(a, &mark).into_iter().enumerate() {
                    if r && theta[s].as_ref().map_or(true, |t| weight(a, e) > t) {
                        theta[s] = Some(weight(a, e).clone());
                    }
                }
            }
            let theta: Vec<Rational> = theta.into_iter().map(|t| t.expect("every state has an edge")).collect();
            let mut sets = vec![LetterSet::new(); a.num_states()];
            for level in theta.iter().collect::<BTreeSet<_>>() {
                let mark: Vec<bool> = (0..a.edges().len()).map(|e| weight(a, e) == level).collect();
                let paths = shortest_path_to_targets(a, &mark, None);
                for s in 0..a.num_states() {
                    if theta[s] == *level {
                        sets[s] = paths[s].first_letters.clone();
                    }
                }
            }
            (0..a.num_states())
                .map(|s| Entry::Thresholded {
                    breakpoints: vec![Breakpoint { threshold: theta[s].clone(), letters: sets[s].clone() }],
                    fallback: a.out_edges(s).iter().map(|&e| a.edge(e).letter).collect(),
                })
                .collect()
        }
        Mode::Cyclic => {
            let (value, targets) = heaviest_internal(a, &c);
            let sets = within_component(a, &c, &targets);
            (0..a.num_states())
                .map(|s| match c.component[s] {
                    Some(i) => Entry::Thresholded {
                        breakpoints: vec![Breakpoint { threshold: value[i].clone(), letters: sets[s].clone() }],
                        fallback: internal_letters(a, &c, s),
                    },
                    None => Entry::Thresholded { breakpoints: Vec::new(), fallback: LetterSet::new() },
                })
                .collect()
        }
    };
    Built { strength: Strength::Weak, threshold: Some(Threshold::Lt), entries, dead: None, unattained: None, trails: Vec::new() }
}

pub(crate) fn limavg(a: &Quatomaton, mode: Mode, caps: Caps) -> Result<Built, BuildError> {
    let c = components(a);
    let w = edge_weights(a);
    match mode {
        Mode::Any => {
            let (value, targets): (Vec<Rational>, Vec<Vec<EdgeId>>) = c
                .msccs
                .iter()
                .map(|m| {
                    let lambda = max_mean_cycle_with(a, m, &w).0;
                    let critical = critical_edges_with(a, m, &w, &lambda);
                    (lambda, critical)
                })
                .unzip();
            Ok(Built::simple(Strength::Weak, toward_best_component(a, &c, &value, &targets).1))
        }
        Mode::Cyclic => {
            let mut sets = vec![LetterSet::new(); a.num_states()];
            for m in &c.msccs {
                let inside = |e: EdgeId| m.edges.binary_search(&e).is_ok();
                for &s in &m.states {
                    let mut best: Option<Rational> = None;
                    for &e in a.out_edges(s).iter().filter(|&&e| inside(e)) {
                        let mut top: Option<Rational> = None;
                        enumerate_cyclic_trails(a, inside, Anchor::Edge(e), a.edges().len(), caps.trails, |t| {
                            let mean = t.iter().map(|&x| &w[x]).sum::<Rational>() / int(t.len() as i64);
                            if top.as_ref().map_or(true, |b| mean > *b) {
                                top = Some(mean);
                            }
                        })
                        .map_err(|err| cap_error(err, a, s))?;
                        let top = top.expect("internal edges lie on a trail");
                        match best.as_ref().map(|b| top.cmp(b)) {
                            Some(Ordering::Less) => {}
                            Some(Ordering::Equal) => {
                                sets[s].insert(a.edge(e).letter);
                            }
                            _ => {
                                best = Some(top);
                                sets[s] = LetterSet::from([a.edge(e).letter]);
                            }
                        }
                    }
                }
            }
            Ok(Built::simple(Strength::Strong, sets))
        }
    }
}

pub(crate) fn cap_error(err: GraphError, a: &Quatomaton, s: usize) -> BuildError {
    let GraphError::CapExceeded { what, cap } = err;
    BuildError::CapExceeded { what, cap, detail: format!("at state {}", a.state_name(s)) }
}
