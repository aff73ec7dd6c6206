use automata_core::{int, EdgeSpec, Quatomaton};
use graph_analysis::*;
use std::collections::BTreeMap;
use testkit::fixture;

fn names(a: &Quatomaton, ids: &[usize]) -> Vec<String> {
    ids.iter().map(|&s| a.state_name(s).to_string()).collect()
}

fn letters(a: &Quatomaton, edges: &[usize]) -> String {
    a.format_word(&edges.iter().map(|&e| a.edge(e).letter).collect::<Vec<_>>())
}

fn graph(edges: &[(&str, &str, &str, i64)]) -> Quatomaton {
    let mut states: Vec<String> = Vec::new();
    let mut alphabet: Vec<String> = Vec::new();
    for (f, l, t, _) in edges {
        for s in [f, t] {
            if !states.iter().any(|x| x == s) {
                states.push(s.to_string());
            }
        }
        if !alphabet.iter().any(|x| x == l) {
            alphabet.push(l.to_string());
        }
    }
    let specs = edges.iter().map(|(f, l, t, w)| EdgeSpec::weighted(f, l, t, int(*w))).collect();
    let init = states[0].clone();
    Quatomaton::new(alphabet, states, &init, specs, None, None).unwrap()
}

#[test]
fn fig1_components() {
    let a = fixture("fig1.json");
    let c = compute_msccs(&a);
    let mut sets: Vec<(Vec<String>, bool)> = c.msccs.iter().map(|m| (names(&a, &m.states), m.is_bottom)).collect();
    sets.sort();
    let want = |v: &[&str], b| (v.iter().map(|s| s.to_string()).collect::<Vec<_>>(), b);
    assert_eq!(sets, vec![want(&["q0", "q1", "q4"], true), want(&["q2", "q3", "q5"], false), want(&["q6"], true)]);
    // topological: the component of q3 precedes both bottoms
    assert_eq!(c.component[a.state_id("q3").unwrap()], Some(0));
}

#[test]
fn dag_and_single_loop() {
    let dag = graph(&[("x", "a", "y", 0), ("y", "a", "z", 0), ("z", "b", "y", 0)]);
    // y and z form a cycle; drop it to get a DAG with a sink loop elsewhere
    assert_eq!(compute_msccs(&dag).msccs.len(), 1);
    let chain = Quatomaton::load(
        r#"{"alphabet":["a"],"states":["x","y","t"],"initial":"x","ranks":{"x":0,"y":0,"t":-2},
            "edges":[{"from":"x","letter":"a","to":"y"},{"from":"y","letter":"a","to":"t"}]}"#,
    )
    .unwrap();
    assert!(compute_msccs(&chain).msccs.is_empty());
    let one = fixture("selfloop.json");
    let c = compute_msccs(&one);
    assert_eq!(c.msccs.len(), 1);
    assert_eq!(c.msccs[0].states, vec![0]);
}

fn component_of<'a>(a: &Quatomaton, c: &'a Condensation, s: &str) -> &'a Mscc {
    c.of(a.state_id(s).unwrap()).unwrap()
}

#[test]
fn fig1_mean_cycles() {
    let a = fixture("fig1.json");
    let c = compute_msccs(&a);
    let (top, w) = max_mean_cycle(&a, component_of(&a, &c, "q0"));
    assert_eq!((top, letters(&a, &w)), (int(120), "s0".to_string()));
    let (bottom, w) = max_mean_cycle(&a, component_of(&a, &c, "q2"));
    assert_eq!(bottom, int(60));
    assert_eq!(letters(&a, &w).split(' ').count(), 2);
    let (l, _) = max_mean_cycle(&a, component_of(&a, &c, "q6"));
    assert_eq!(l, int(10));
}

#[test]
fn simple_cycles() {
    let a = fixture("fig1.json");
    let c = compute_msccs(&a);
    let mut cycles: Vec<String> = enumerate_simple_cycles(&a, component_of(&a, &c, "q0"), 100).unwrap().iter().map(|c| letters(&a, c)).collect();
    cycles.sort();
    assert_eq!(cycles, vec!["s0", "s1 s2", "s3 s4"]);
    let tri = graph(&[("x", "a", "y", 0), ("y", "a", "z", 0), ("z", "a", "x", 0)]);
    assert_eq!(enumerate_simple_cycles(&tri, &compute_msccs(&tri).msccs[0], 100).unwrap().len(), 1);
    let two = graph(&[("x", "a", "x", 0), ("x", "b", "x", 1)]);
    assert_eq!(enumerate_simple_cycles(&two, &compute_msccs(&two).msccs[0], 100).unwrap().len(), 2);
    assert!(matches!(
        enumerate_simple_cycles(&two, &compute_msccs(&two).msccs[0], 1),
        Err(GraphError::CapExceeded { .. })
    ));
}

#[test]
fn trails_through_q2() {
    let a = fixture("fig1.json");
    let c = compute_msccs(&a);
    let m = component_of(&a, &c, "q2");
    let q2 = a.state_id("q2").unwrap();
    let mut seen = Vec::new();
    enumerate_cyclic_trails(&a, |e| m.edges.contains(&e), Anchor::State(q2), 100, 1000, |t| seen.push(letters(&a, t))).unwrap();
    let mut want = vec!["s6 s7", "s9 s8", "s9 s10 s8", "s6 s7 s9 s8", "s6 s7 s9 s10 s8", "s9 s8 s6 s7", "s9 s10 s8 s6 s7"];
    want.sort();
    seen.sort();
    assert_eq!(seen, want);
    let none = enumerate_cyclic_trails(&a, |_| true, Anchor::State(a.state_id("q3").unwrap()), 0, 10, |_| {}).unwrap();
    assert_eq!(none, 0);
    let pair = graph(&[("x", "a", "y", 0), ("y", "a", "x", 0)]);
    for s in 0..2 {
        assert_eq!(enumerate_cyclic_trails(&pair, |_| true, Anchor::State(s), 10, 10, |_| {}).unwrap(), 1);
    }
}

#[test]
fn trail_anchor_without_cycle() {
    let a = graph(&[("x", "a", "y", 0), ("y", "a", "y", 0)]);
    assert_eq!(enumerate_cyclic_trails(&a, |_| true, Anchor::State(0), 10, 10, |_| {}).unwrap(), 0);
}

#[test]
fn paths_to_the_heavy_loop() {
    let a = fixture("fig1.json");
    let s0 = a.transition(a.state_id("q4").unwrap(), a.letter_id("s0").unwrap()).unwrap();
    let mut targets = vec![false; a.edges().len()];
    targets[s0] = true;
    let info = shortest_path_to_targets(&a, &targets, None);
    let q2 = &info[a.state_id("q2").unwrap()];
    assert_eq!(q2.distance, Some(3));
    let got: Vec<&str> = q2.first_letters.iter().map(|&l| a.letter_name(l)).collect();
    assert_eq!(got, vec!["s5", "s6"]);
    let q4 = &info[a.state_id("q4").unwrap()];
    assert_eq!((q4.distance, q4.first_letters.len()), (Some(1), 1));
    let q6 = &info[a.state_id("q6").unwrap()];
    assert_eq!((q6.distance, q6.first_letters.is_empty()), (None, true));
}

#[test]
fn bottlenecks() {
    let chain = graph(&[("v0", "a", "v1", 5), ("v1", "a", "v1", 3)]);
    assert_eq!(bottleneck_propagation(&chain).theta_v[0], int(3));
    let one = fixture("selfloop.json");
    assert_eq!(bottleneck_propagation(&one).theta_v[0], int(5));
    let two = graph(&[("v", "a", "x", 9), ("x", "a", "x", 4), ("v", "b", "y", 8), ("y", "a", "y", 7)]);
    assert_eq!(bottleneck_propagation(&two).theta_v[0], int(7));
}

#[test]
fn max_min_cycles() {
    let a = fixture("fig1.json");
    let c = compute_msccs(&a);
    let q2 = a.state_id("q2").unwrap();
    let inside = |e| c.is_internal(&a, e);
    assert_eq!(max_min_cycle_value(&a, inside, Anchor::State(q2)), Some(int(40)));
    let one = fixture("selfloop.json");
    assert_eq!(max_min_cycle_value(&one, |_| true, Anchor::State(0)), Some(int(5)));
    let chain = graph(&[("v0", "a", "v1", 5), ("v1", "a", "v1", 3)]);
    assert_eq!(max_min_cycle_value(&chain, |_| true, Anchor::State(0)), None);
}

fn ranked(edges: &[(&str, &str, &str)], ranks: &[(&str, i64)]) -> Quatomaton {
    let mut states: Vec<String> = ranks.iter().map(|(s, _)| s.to_string()).collect();
    states.dedup();
    let mut alphabet: Vec<String> = edges.iter().map(|(_, l, _)| l.to_string()).collect();
    alphabet.sort();
    alphabet.dedup();
    let specs = edges.iter().map(|(f, l, t)| EdgeSpec::new(f, l, t)).collect();
    let r: BTreeMap<String, i64> = ranks.iter().map(|(s, r)| (s.to_string(), *r)).collect();
    Quatomaton::new(alphabet, states.clone(), &states[0], specs, Some(r), None).unwrap()
}

#[test]
fn accepting_cycles() {
    let acd = fixture("acd.json");
    let c = compute_msccs(&acd);
    let idle = acd.state_id("idle").unwrap();
    let m = c.of(idle).unwrap();
    let cyc = find_accepting_cycle(&acd, m).unwrap();
    assert!(cyc.iter().any(|&e| acd.edge(e).to == idle));
    let sink = c.of(acd.state_id("sink").unwrap()).unwrap();
    assert_eq!(find_accepting_cycle(&acd, sink), None);
    // removing rank 1 leaves an acyclic remainder
    let odd = ranked(&[("x", "a", "y"), ("y", "a", "x")], &[("x", 1), ("y", 3)]);
    assert_eq!(find_accepting_cycle(&odd, &compute_msccs(&odd).msccs[0]), None);
    // one peeling round is not enough here: {1,3} with an inner rank-2 loop
    let deep = ranked(&[("x", "a", "y"), ("y", "a", "x"), ("y", "b", "z"), ("z", "a", "y")], &[("x", 1), ("y", 3), ("z", 2)]);
    let cyc = find_accepting_cycle(&deep, &compute_msccs(&deep).msccs[0]).unwrap();
    assert_eq!(cyc.iter().map(|&e| deep.edge_rank(e).unwrap()).min(), Some(2));
}
