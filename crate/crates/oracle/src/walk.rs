//! Small exhaustive walkers, kept independent of the builder kernels.

use automata_core::{int, EdgeId, Quatomaton, Rational, StateId};

use crate::OracleError;

/// A cyclic trail and the lengths of its proper prefixes that already
/// return to the anchor.
#[derive(Clone, Debug)]
pub(crate) struct Trail {
    pub edges: Vec<EdgeId>,
    pub returns: Vec<usize>,
}

#[derive(Clone, Debug, Default)]
pub(crate) struct TrailSet {
    pub trails: Vec<Trail>,
    /// The length bound stopped some walk that could have continued.
    pub cut: bool,
}

/// Every cyclic trail starting and ending at `s` with at most `bound` edges.
pub(crate) fn cyclic_trails(a: &Quatomaton, s: StateId, bound: usize, cap: usize) -> Result<TrailSet, OracleError> {
    struct Dfs<'a> {
        a: &'a Quatomaton,
        home: StateId,
        bound: usize,
        cap: usize,
        used: Vec<bool>,
        path: Vec<EdgeId>,
        returns: Vec<usize>,
        out: TrailSet,
    }
    impl Dfs<'_> {
        fn go(&mut self, v: StateId) -> Result<(), OracleError> {
            for &e in self.a.out_edges(v) {
                if self.used[e] {
                    continue;
                }
                if self.path.len() == self.bound {
                    self.out.cut = true;
                    return Ok(());
                }
                let w = self.a.edge(e).to;
                self.used[e] = true;
                self.path.push(e);
                if w == self.home {
                    if self.out.trails.len() >= self.cap {
                        return Err(OracleError::TrailCap(self.cap));
                    }
                    self.out.trails.push(Trail { edges: self.path.clone(), returns: self.returns.clone() });
                    self.returns.push(self.path.len());
                }
                self.go(w)?;
                if w == self.home {
                    self.returns.pop();
                }
                self.path.pop();
                self.used[e] = false;
            }
            Ok(())
        }
    }
    let mut d = Dfs {
        a,
        home: s,
        bound,
        cap,
        used: vec![false; a.edges().len()],
        path: Vec::new(),
        returns: Vec::new(),
        out: TrailSet::default(),
    };
    d.go(s)?;
    Ok(d.out)
}

/// For each state, the largest mean weight of a state-simple cycle through it.
pub(crate) fn best_cycle_means(a: &Quatomaton) -> Vec<Option<Rational>> {
    let n = a.num_states();
    let mut best: Vec<Option<Rational>> = vec![None; n];
    // each simple cycle is found once, from its smallest state
    for root in 0..n {
        let mut on_path = vec![false; n];
        let mut path: Vec<EdgeId> = Vec::new();
        fn go(
            a: &Quatomaton,
            root: StateId,
            v: StateId,
            on_path: &mut [bool],
            path: &mut Vec<EdgeId>,
            best: &mut [Option<Rational>],
        ) {
            for &e in a.out_edges(v) {
                let w = a.edge(e).to;
                if w < root {
                    continue;
                }
                path.push(e);
                if w == root {
                    let sum: Rational = path.iter().map(|&f| a.weight(f).expect("weights checked").clone()).sum();
                    let mean = sum / int(path.len() as i64);
                    for &f in path.iter() {
                        let s = a.edge(f).from;
                        if best[s].as_ref().map_or(true, |b| &mean > b) {
                            best[s] = Some(mean.clone());
                        }
                    }
                } else if !on_path[w] {
                    on_path[w] = true;
                    go(a, root, w, on_path, path, best);
                    on_path[w] = false;
                }
                path.pop();
            }
        }
        on_path[root] = true;
        go(a, root, root, &mut on_path, &mut path, &mut best);
    }
    best
}

/// States reachable from `s` (including `s`).
pub(crate) fn reachable(a: &Quatomaton, s: StateId) -> Vec<bool> {
    let mut seen = vec![false; a.num_states()];
    let mut stack = vec![s];
    seen[s] = true;
    while let Some(v) = stack.pop() {
        for &e in a.out_edges(v) {
            let w = a.edge(e).to;
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen
}
