//! Shared test support: checked-in fixtures and seeded random automata.

use std::collections::BTreeMap;
use std::path::PathBuf;

use automata_core::{int, EdgeSpec, Quatomaton};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

/// Text of a checked-in fixture; `name` may omit the `.json` extension.
pub fn fixture_text(name: &str) -> String {
    let file = if name.ends_with(".json") { name.to_string() } else { format!("{name}.json") };
    std::fs::read_to_string(fixtures_dir().join(file)).unwrap_or_else(|e| panic!("fixture {name}: {e}"))
}

pub fn fixture(name: &str) -> Quatomaton {
    Quatomaton::load(&fixture_text(name)).unwrap_or_else(|e| panic!("fixture {name}: {e}"))
}

#[derive(Clone, Copy, Debug)]
pub struct RandomSpec {
    pub max_states: usize,
    pub max_letters: usize,
    /// Probability that a (state, letter) pair has a transition.
    pub density: f64,
    pub max_weight: i64,
    pub max_rank: i64,
    pub weights: bool,
    pub ranks: bool,
}

impl Default for RandomSpec {
    fn default() -> Self {
        RandomSpec { max_states: 6, max_letters: 4, density: 0.5, max_weight: 9, max_rank: 3, weights: true, ranks: true }
    }
}

/// Deterministic random automaton for `seed`. Every state keeps at least
/// one outgoing edge.
pub fn random_automaton(seed: u64, spec: RandomSpec) -> Quatomaton {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=spec.max_states);
    let k = rng.gen_range(1..=spec.max_letters);
    let alphabet: Vec<String> = (0..k).map(|l| format!("l{l}")).collect();
    let states: Vec<String> = (0..n).map(|s| format!("s{s}")).collect();
    let mut edges = Vec::new();
    for s in 0..n {
        let forced = rng.gen_range(0..k);
        for l in 0..k {
            if l != forced && !rng.gen_bool(spec.density) {
                continue;
            }
            let to = rng.gen_range(0..n);
            let mut e = EdgeSpec::new(&states[s], &alphabet[l], &states[to]);
            if spec.weights {
                e.weight = Some(int(rng.gen_range(0..=spec.max_weight)));
            }
            edges.push(e);
        }
    }
    let ranks = spec.ranks.then(|| {
        states.iter().map(|s| (s.clone(), rng.gen_range(0..=spec.max_rank))).collect::<BTreeMap<_, _>>()
    });
    Quatomaton::new(alphabet, states, "s0", edges, ranks, None).expect("generated automaton is valid")
}

/// All words of length ≤ `max_len` that have a run from the initial state,
/// shortest first.
pub fn prefixes(a: &Quatomaton, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![(Vec::new(), a.initial())];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for (u, s) in frontier {
            for &e in a.out_edges(s) {
                let mut w: Vec<usize> = u.clone();
                w.push(a.edge(e).letter);
                out.push(w.clone());
                next.push((w, a.edge(e).to));
            }
        }
        frontier = next;
    }
    out
}
