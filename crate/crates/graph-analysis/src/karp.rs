use automata_core::{int, EdgeId, Quatomaton, Rational, StateId};

use crate::scc::{bfs_path, sccs_where, Mscc};

/// Greatest mean over the cycles of `m` under per-edge weights `w`
/// (indexed by edge id), with one cycle attaining it.
pub fn max_mean_cycle_with(a: &Quatomaton, m: &Mscc, w: &[Rational]) -> (Rational, Vec<EdgeId>) {
    let lambda = karp(a, m, w);
    let critical = critical_edges_with(a, m, w, &lambda);
    let e = critical[0];
    let edge = a.edge(e);
    let mut cycle = vec![e];
    let back = bfs_path(a, edge.to, edge.from, |x| critical.binary_search(&x).is_ok()).expect("critical edges lie on cycles");
    cycle.extend(back);
    (lambda, cycle)
}

/// [`max_mean_cycle_with`] using the automaton's own weights.
pub fn max_mean_cycle(a: &Quatomaton, m: &Mscc) -> (Rational, Vec<EdgeId>) {
    max_mean_cycle_with(a, m, &edge_weights(a))
}

pub fn edge_weights(a: &Quatomaton) -> Vec<Rational> {
    (0..a.edges().len()).map(|e| a.weight(e).cloned().expect("weighted automaton")).collect()
}

/// Karp's characterization: λ = max_v min_k (D_n(v) − D_k(v)) / (n − k),
/// where D_k(v) is the heaviest walk of exactly k edges from a fixed source.
fn karp(a: &Quatomaton, m: &Mscc, w: &[Rational]) -> Rational {
    let n = m.states.len();
    let local = |s: StateId| m.states.binary_search(&s).expect("member");
    let mut d: Vec<Vec<Option<Rational>>> = vec![vec![None; n]; n + 1];
    d[0][0] = Some(int(0));
    for k in 1..=n {
        let (prev, cur) = d.split_at_mut(k);
        let (prev, cur) = (&prev[k - 1], &mut cur[0]);
        for &e in &m.edges {
            let edge = a.edge(e);
            if let Some(base) = &prev[local(edge.from)] {
                let cand = base + &w[e];
                let slot = &mut cur[local(edge.to)];
                if slot.as_ref().map_or(true, |x| cand > *x) {
                    *slot = Some(cand);
                }
            }
        }
    }
    let mut best: Option<Rational> = None;
    for v in 0..n {
        let Some(dn) = &d[n][v] else { continue };
        let worst = (0..n)
            .filter_map(|k| d[k][v].as_ref().map(|dk| (dn - dk) / int((n - k) as i64)))
            .min()
            .expect("D_0 or an earlier layer reaches v");
        if best.as_ref().map_or(true, |b| worst > *b) {
            best = Some(worst);
        }
    }
    best.expect("a strongly connected component with a cycle")
}

/// Edges of `m` lying on some cycle of mean exactly `lambda`, assuming no
/// cycle of `m` has a larger mean. Sorted.
pub fn critical_edges_with(a: &Quatomaton, m: &Mscc, w: &[Rational], lambda: &Rational) -> Vec<EdgeId> {
    // longest-walk potentials under w − λ; no positive cycles exist
    let n = m.states.len();
    let local = |s: StateId| m.states.binary_search(&s).expect("member");
    let mut pot: Vec<Option<Rational>> = vec![None; n];
    pot[0] = Some(int(0));
    for _ in 0..n {
        let mut changed = false;
        for &e in &m.edges {
            let edge = a.edge(e);
            if let Some(p) = &pot[local(edge.from)] {
                let cand = p + &w[e] - lambda;
                let slot = &mut pot[local(edge.to)];
                if slot.as_ref().map_or(true, |x| cand > *x) {
                    *slot = Some(cand);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let tight: Vec<bool> = (0..a.edges().len())
        .map(|e| {
            m.edges.binary_search(&e).is_ok() && {
                let edge = a.edge(e);
                let p = pot[local(edge.from)].as_ref().expect("strongly connected");
                let q = pot[local(edge.to)].as_ref().expect("strongly connected");
                p + &w[e] - lambda == *q
            }
        })
        .collect();
    // a zero-sum cycle uses only tight edges, and every cycle of tight
    // edges sums to zero
    let sub = sccs_where(a, |e| tight[e]);
    let mut out: Vec<EdgeId> = sub.msccs.iter().flat_map(|c| c.edges.iter().copied()).collect();
    out.sort_unstable();
    out
}
