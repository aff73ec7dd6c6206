use automata_core::{EdgeId, Quatomaton, Rational, StateId};

use crate::scc::reachable;

/// Best achievable infimum: `theta_e[e]` over infinite paths starting with
/// `e`, `theta_v[v]` over infinite paths from `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bottlenecks {
    pub theta_e: Vec<Rational>,
    pub theta_v: Vec<Rational>,
}

/// Fixpoint of θ_e ← min(w(e), θ_target), θ_v ← max of outgoing θ_e,
/// starting from θ_e = w(e).
pub fn bottleneck_propagation(a: &Quatomaton) -> Bottlenecks {
    let mut theta_e: Vec<Rational> = (0..a.edges().len()).map(|e| a.weight(e).cloned().expect("weighted")).collect();
    let best = |te: &[Rational], s: StateId| a.out_edges(s).iter().map(|&e| &te[e]).max().cloned().expect("no dead ends");
    let mut theta_v: Vec<Rational> = (0..a.num_states()).map(|s| best(&theta_e, s)).collect();
    loop {
        let mut changed = false;
        for e in 0..a.edges().len() {
            let t = &theta_v[a.edge(e).to];
            if *t < theta_e[e] {
                theta_e[e] = t.clone();
                changed = true;
            }
        }
        for (s, slot) in theta_v.iter_mut().enumerate() {
            let b = best(&theta_e, s);
            if b != *slot {
                *slot = b;
                changed = true;
            }
        }
        if !changed {
            return Bottlenecks { theta_e, theta_v };
        }
    }
}

/// Greatest θ among the weights of kept edges such that the anchor lies on
/// a cycle of kept edges all weighing at least θ. `None` when no such
/// cycle exists.
pub fn max_min_cycle_value(
    a: &Quatomaton,
    keep: impl Fn(EdgeId) -> bool,
    anchor: crate::Anchor,
) -> Option<Rational> {
    let mut levels: Vec<&Rational> = (0..a.edges().len()).filter(|&e| keep(e)).map(|e| a.weight(e).expect("weighted")).collect();
    levels.sort();
    levels.dedup();
    for theta in levels.into_iter().rev() {
        let ok = |e: EdgeId| keep(e) && a.weight(e).expect("weighted") >= theta;
        let on_cycle = match anchor {
            crate::Anchor::Edge(e) => ok(e) && reachable(a, a.edge(e).to, ok)[a.edge(e).from],
            crate::Anchor::State(s) => {
                a.out_edges(s).iter().any(|&e| ok(e) && reachable(a, a.edge(e).to, ok)[s])
            }
        };
        if on_cycle {
            return Some(theta.clone());
        }
    }
    None
}
