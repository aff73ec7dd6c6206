use automata_core::{EdgeId, Quatomaton, StateId};

use crate::scc::Mscc;
use crate::GraphError;

/// Every simple cycle of `m` exactly once, as edge sequences starting at
/// their smallest state. Parallel edges give distinct cycles.
pub fn enumerate_simple_cycles(a: &Quatomaton, m: &Mscc, cap: usize) -> Result<Vec<Vec<EdgeId>>, GraphError> {
    let mut out = Vec::new();
    let inside: Vec<bool> = (0..a.edges().len()).map(|e| m.edges.binary_search(&e).is_ok()).collect();
    let n = a.num_states();
    for &s in &m.states {
        let mut search = Johnson {
            a,
            start: s,
            inside: &inside,
            blocked: vec![false; n],
            block_map: vec![Vec::new(); n],
            path: Vec::new(),
            out: &mut out,
            cap,
        };
        search.circuit(s)?;
    }
    Ok(out)
}

struct Johnson<'a> {
    a: &'a Quatomaton,
    start: StateId,
    inside: &'a [bool],
    blocked: Vec<bool>,
    block_map: Vec<Vec<StateId>>,
    path: Vec<EdgeId>,
    out: &'a mut Vec<Vec<EdgeId>>,
    cap: usize,
}

impl Johnson<'_> {
    fn usable(&self, e: EdgeId) -> bool {
        self.inside[e] && self.a.edge(e).to >= self.start
    }

    fn circuit(&mut self, v: StateId) -> Result<bool, GraphError> {
        let mut found = false;
        self.blocked[v] = true;
        for &e in self.a.out_edges(v) {
            if !self.usable(e) {
                continue;
            }
            let w = self.a.edge(e).to;
            self.path.push(e);
            if w == self.start {
                if self.out.len() >= self.cap {
                    return Err(GraphError::CapExceeded { what: "simple cycles", cap: self.cap });
                }
                self.out.push(self.path.clone());
                found = true;
            } else if !self.blocked[w] && self.circuit(w)? {
                found = true;
            }
            self.path.pop();
        }
        if found {
            self.unblock(v);
        } else {
            for &e in self.a.out_edges(v) {
                if self.usable(e) {
                    let w = self.a.edge(e).to;
                    if !self.block_map[w].contains(&v) {
                        self.block_map[w].push(v);
                    }
                }
            }
        }
        Ok(found)
    }

    fn unblock(&mut self, v: StateId) {
        let mut todo = vec![v];
        while let Some(u) = todo.pop() {
            if self.blocked[u] {
                self.blocked[u] = false;
                todo.append(&mut self.block_map[u]);
            }
        }
    }
}

/// Where a cyclic trail must start.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Anchor {
    /// Starts and ends at this state.
    State(StateId),
    /// Starts with this edge and ends at its source.
    Edge(EdgeId),
}

/// Calls `visit` on every cyclic trail through `anchor` using only edges
/// accepted by `keep` with at most `bound` edges. Trails may pass the
/// anchor several times; each edge sequence is reported once, in DFS order
/// over letter-sorted adjacency. Returns the number of trails.
pub fn enumerate_cyclic_trails(
    a: &Quatomaton,
    keep: impl Fn(EdgeId) -> bool,
    anchor: Anchor,
    bound: usize,
    cap: usize,
    mut visit: impl FnMut(&[EdgeId]),
) -> Result<usize, GraphError> {
    let mut used = vec![false; a.edges().len()];
    let mut path = Vec::new();
    let mut count = 0;
    let home = match anchor {
        Anchor::State(s) => s,
        Anchor::Edge(e) => {
            if !keep(e) || bound == 0 {
                return Ok(0);
            }
            used[e] = true;
            path.push(e);
            a.edge(e).from
        }
    };
    let at = match anchor {
        Anchor::State(s) => s,
        Anchor::Edge(e) => a.edge(e).to,
    };
    if !path.is_empty() && at == home {
        count += 1;
        visit(&path);
    }
    let mut dfs = TrailDfs { a, keep: &keep, home, bound, cap, used, path, count, visit: &mut visit };
    dfs.go(at)?;
    Ok(dfs.count)
}

struct TrailDfs<'a, K, V> {
    a: &'a Quatomaton,
    keep: &'a K,
    home: StateId,
    bound: usize,
    cap: usize,
    used: Vec<bool>,
    path: Vec<EdgeId>,
    count: usize,
    visit: &'a mut V,
}

impl<K: Fn(EdgeId) -> bool, V: FnMut(&[EdgeId])> TrailDfs<'_, K, V> {
    fn go(&mut self, v: StateId) -> Result<(), GraphError> {
        if self.path.len() >= self.bound {
            return Ok(());
        }
        for &e in self.a.out_edges(v) {
            if self.used[e] || !(self.keep)(e) {
                continue;
            }
            let w = self.a.edge(e).to;
            self.used[e] = true;
            self.path.push(e);
            if w == self.home {
                if self.count >= self.cap {
                    return Err(GraphError::CapExceeded { what: "cyclic trails", cap: self.cap });
                }
                self.count += 1;
                (self.visit)(&self.path);
            }
            self.go(w)?;
            self.path.pop();
            self.used[e] = false;
        }
        Ok(())
    }
}
