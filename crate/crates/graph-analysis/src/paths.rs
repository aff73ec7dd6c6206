use std::collections::{BTreeSet, VecDeque};

use automata_core::{EdgeId, LetterId, Quatomaton};

/// Distance (in edges) to the end of some target edge, and the letters of
/// all outgoing edges that begin a shortest such path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathInfo {
    pub distance: Option<usize>,
    pub first_letters: BTreeSet<LetterId>,
}

/// Backward BFS from the target edges. With `restrict`, only edges whose
/// endpoints both lie in the restricted state set are used.
pub fn shortest_path_to_targets(a: &Quatomaton, targets: &[bool], restrict: Option<&[bool]>) -> Vec<PathInfo> {
    shortest_path_over(a, targets, |e| {
        let edge = a.edge(e);
        restrict.map_or(true, |r| r[edge.from] && r[edge.to])
    })
}

/// [`shortest_path_to_targets`] over the edges accepted by `allowed`.
pub fn shortest_path_over(a: &Quatomaton, targets: &[bool], allowed: impl Fn(EdgeId) -> bool) -> Vec<PathInfo> {
    let n = a.num_states();
    let mut incoming: Vec<Vec<EdgeId>> = vec![Vec::new(); n];
    for e in 0..a.edges().len() {
        if allowed(e) {
            incoming[a.edge(e).to].push(e);
        }
    }
    let mut dist: Vec<Option<usize>> = vec![None; n];
    let mut queue = VecDeque::new();
    for e in 0..a.edges().len() {
        let s = a.edge(e).from;
        if targets[e] && allowed(e) && dist[s].is_none() {
            dist[s] = Some(1);
            queue.push_back(s);
        }
    }
    while let Some(s) = queue.pop_front() {
        let d = dist[s].expect("queued states have a distance");
        for &e in &incoming[s] {
            let p = a.edge(e).from;
            if dist[p].is_none() {
                dist[p] = Some(d + 1);
                queue.push_back(p);
            }
        }
    }
    (0..n)
        .map(|s| {
            let first_letters = match dist[s] {
                None => BTreeSet::new(),
                Some(1) => a.out_edges(s).iter().filter(|&&e| targets[e] && allowed(e)).map(|&e| a.edge(e).letter).collect(),
                Some(d) => a
                    .out_edges(s)
                    .iter()
                    .filter(|&&e| allowed(e) && dist[a.edge(e).to] == Some(d - 1))
                    .map(|&e| a.edge(e).letter)
                    .collect(),
            };
            PathInfo { distance: dist[s], first_letters }
        })
        .collect()
}
