use automata_core::{EdgeId, Quatomaton, StateId};

/// A maximal strongly connected component that contains a cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mscc {
    /// Members, sorted.
    pub states: Vec<StateId>,
    /// Edges with both endpoints inside, sorted.
    pub edges: Vec<EdgeId>,
    /// No edge leaves the component.
    pub is_bottom: bool,
}

impl Mscc {
    pub fn contains(&self, s: StateId) -> bool {
        self.states.binary_search(&s).is_ok()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Condensation {
    /// Components in topological order: an edge between two components
    /// always points to a later one.
    pub msccs: Vec<Mscc>,
    /// Index into `msccs` for states lying on a cycle.
    pub component: Vec<Option<usize>>,
}

impl Condensation {
    pub fn of(&self, s: StateId) -> Option<&Mscc> {
        self.component[s].map(|i| &self.msccs[i])
    }

    /// Edge stays inside one component.
    pub fn is_internal(&self, a: &Quatomaton, e: EdgeId) -> bool {
        let edge = a.edge(e);
        matches!((self.component[edge.from], self.component[edge.to]), (Some(x), Some(y)) if x == y)
    }
}

/// Strongly connected components of the subgraph of edges accepted by
/// `keep`, restricted to components containing a cycle. Returned in
/// topological order.
pub fn sccs_where(a: &Quatomaton, keep: impl Fn(EdgeId) -> bool) -> Condensation {
    let n = a.num_states();
    let adj: Vec<Vec<EdgeId>> = (0..n).map(|s| a.out_edges(s).iter().copied().filter(|&e| keep(e)).collect()).collect();

    // iterative Tarjan
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps: Vec<Vec<StateId>> = Vec::new();
    let mut next = 0;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(StateId, usize)> = vec![(root, 0)];
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut i)) = call.last_mut() {
            if *i < adj[v].len() {
                let w = a.edge(adj[v][*i]).to;
                *i += 1;
                if index[w] == usize::MAX {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack");
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                comps.push(comp);
            }
        }
    }
    // Tarjan emits sinks first
    comps.reverse();

    let mut comp_of = vec![usize::MAX; n];
    for (i, c) in comps.iter().enumerate() {
        for &s in c {
            comp_of[s] = i;
        }
    }
    let mut msccs = Vec::new();
    let mut component = vec![None; n];
    for c in &comps {
        let id = comp_of[c[0]];
        let mut edges = Vec::new();
        let mut leaves = false;
        for &s in c {
            for &e in &adj[s] {
                if comp_of[a.edge(e).to] == id {
                    edges.push(e);
                } else {
                    leaves = true;
                }
            }
        }
        if edges.is_empty() {
            continue;
        }
        edges.sort_unstable();
        for &s in c {
            component[s] = Some(msccs.len());
        }
        msccs.push(Mscc { states: c.clone(), edges, is_bottom: !leaves });
    }
    Condensation { msccs, component }
}

/// Maximal strongly connected components of the whole automaton.
pub fn compute_msccs(a: &Quatomaton) -> Condensation {
    sccs_where(a, |_| true)
}

/// States reachable from `from` (including itself) along kept edges.
pub fn reachable(a: &Quatomaton, from: StateId, keep: impl Fn(EdgeId) -> bool) -> Vec<bool> {
    let mut seen = vec![false; a.num_states()];
    seen[from] = true;
    let mut todo = vec![from];
    while let Some(s) = todo.pop() {
        for &e in a.out_edges(s) {
            let t = a.edge(e).to;
            if keep(e) && !seen[t] {
                seen[t] = true;
                todo.push(t);
            }
        }
    }
    seen
}

/// Shortest path from `from` to `to` along kept edges, as edges.
pub fn bfs_path(a: &Quatomaton, from: StateId, to: StateId, keep: impl Fn(EdgeId) -> bool) -> Option<Vec<EdgeId>> {
    if from == to {
        return Some(Vec::new());
    }
    let mut pred: Vec<Option<EdgeId>> = vec![None; a.num_states()];
    let mut seen = vec![false; a.num_states()];
    seen[from] = true;
    let mut queue = std::collections::VecDeque::from([from]);
    while let Some(s) = queue.pop_front() {
        for &e in a.out_edges(s) {
            let t = a.edge(e).to;
            if !keep(e) || seen[t] {
                continue;
            }
            seen[t] = true;
            pred[t] = Some(e);
            if t == to {
                let mut path = Vec::new();
                let mut cur = to;
                while let Some(e) = pred[cur] {
                    path.push(e);
                    cur = a.edge(e).from;
                    if cur == from {
                        break;
                    }
                }
                path.reverse();
                return Some(path);
            }
            queue.push_back(t);
        }
    }
    None
}
