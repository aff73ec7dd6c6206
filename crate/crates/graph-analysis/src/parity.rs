use automata_core::{EdgeId, Quatomaton};

use crate::scc::{bfs_path, sccs_where, Mscc};

/// A simple cycle inside `m` whose least edge rank is even, found by
/// repeatedly deleting the edges of an odd least rank and splitting into
/// strongly connected parts. Ranks are edge ranks, so sink-flagged edges
/// count with their sink rank.
pub fn find_accepting_cycle(a: &Quatomaton, m: &Mscc) -> Option<Vec<EdgeId>> {
    accepting_parts(a, &m.edges).into_iter().next().map(|(part, d)| {
        let e = *part.iter().find(|&&e| a.edge_rank(e) == Some(d)).expect("part holds its least rank");
        cycle_through(a, &part, e)
    })
}

/// Strongly connected edge sets reached by peeling whose least edge rank
/// is even, with that rank. Every closed walk through one of their
/// least-rank edges inside the part accepts.
pub fn accepting_parts(a: &Quatomaton, edges: &[EdgeId]) -> Vec<(Vec<EdgeId>, i64)> {
    let mut out = Vec::new();
    let mut todo = vec![edges.to_vec()];
    while let Some(part) = todo.pop() {
        let Some(d) = part.iter().map(|&e| a.edge_rank(e).expect("ranked")).min() else { continue };
        if d.rem_euclid(2) == 0 {
            out.push((part, d));
            continue;
        }
        let keep: Vec<bool> = {
            let mut k = vec![false; a.edges().len()];
            for &e in &part {
                k[e] = a.edge_rank(e) != Some(d);
            }
            k
        };
        let sub = sccs_where(a, |e| keep[e]);
        for c in sub.msccs.into_iter().rev() {
            todo.push(c.edges);
        }
    }
    out.sort();
    out
}

/// Simple cycle made of `e` and a shortest path back inside `part`.
pub fn cycle_through(a: &Quatomaton, part: &[EdgeId], e: EdgeId) -> Vec<EdgeId> {
    let edge = a.edge(e);
    let mut cycle = vec![e];
    cycle.extend(bfs_path(a, edge.to, edge.from, |x| part.binary_search(&x).is_ok()).expect("part is strongly connected"));
    cycle
}
