use std::sync::Arc;

use automata_core::{run_prefix, Quatomaton, Rational};
use lasso_values::{Value, ValueKind};
use oracle::Oracle;
use proptest::prelude::*;
use rc_build::{build, Mode};
use session::sim::{simulate, Choice, CyclicPolicy, SimulationPolicy};
use session::{Session, Verdict};
use testkit::{prefixes, random_automaton, RandomSpec};

const TABLE_KINDS: [ValueKind; 6] =
    [ValueKind::Sup, ValueKind::Inf, ValueKind::LimSup, ValueKind::LimInf, ValueKind::LimAvg, ValueKind::ParityBool];

fn session(a: &Quatomaton, kind: ValueKind) -> Session {
    let tables = [Mode::Any, Mode::Cyclic].map(|m| Arc::new(build(a, kind, m).unwrap()));
    Session::open(Arc::new(a.clone()), tables.to_vec(), None).unwrap()
}

fn small() -> RandomSpec {
    RandomSpec { max_states: 4, max_letters: 3, ..Default::default() }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, ..ProptestConfig::default() })]

    #[test]
    fn recommendations_equal_direct_lookups(seed in any::<u64>()) {
        let a = random_automaton(seed, small());
        for kind in TABLE_KINDS {
            let s0 = session(&a, kind);
            for u in prefixes(&a, 4) {
                let mut s = s0.clone();
                for &l in &u {
                    s.step_letter(Some(l)).unwrap();
                }
                let run = run_prefix(&a, &u).unwrap();
                let weights = run.edges.iter().map(|&e| a.weight(e).unwrap().clone());
                let theta: Option<Rational> = match kind {
                    ValueKind::Sup => weights.max(),
                    ValueKind::Inf => weights.min(),
                    _ => None,
                };
                let rec = s.recommend();
                for (mode, got) in [(Mode::Any, rec.any), (Mode::Cyclic, rec.cyclic)] {
                    let want = s.table(mode).unwrap().lookup(run.last(), theta.as_ref());
                    prop_assert_eq!(got, Some(want), "{} {} {:?}", kind, mode.name(), u);
                }
            }
        }
    }

    /// The verdict turns to violated exactly when a step loses every
    /// accepting continuation.
    #[test]
    fn violated_iff_acceptance_became_impossible(seed in any::<u64>()) {
        let a = random_automaton(seed, small());
        let s0 = session(&a, ValueKind::ParityBool);
        let o = Oracle::new(&a, ValueKind::ParityBool).unwrap();
        for u in prefixes(&a, 4) {
            let mut s = s0.clone();
            for &l in &u {
                s.step_letter(Some(l)).unwrap();
            }
            let possible = |i: usize| o.any(&u[..i]).unwrap().value == Value::Bool(true);
            let lost = (0..u.len()).any(|i| possible(i) && !possible(i + 1));
            prop_assert_eq!(s.verdict() == Verdict::Violated, lost, "{:?}", u);
        }
    }

    #[test]
    fn simulation_is_deterministic_per_seed(seed in any::<u64>(), sim_seed in any::<u64>()) {
        let a = random_automaton(seed, small());
        let s = session(&a, ValueKind::LimAvg);
        let policy = SimulationPolicy { p_any: 0.7, seed: sim_seed, choice: Choice::Random, ..Default::default() };
        let r1 = simulate(&s, &policy, 5, 12, None).unwrap();
        let r2 = simulate(&s, &policy, 5, 12, None).unwrap();
        prop_assert_eq!(r1, r2);
    }

    /// Compliant runs on Boolean tables are accepted whenever acceptance
    /// is possible at all.
    #[test]
    fn compliant_parity_runs_are_accepted(seed in any::<u64>()) {
        let a = random_automaton(seed, small());
        let o = Oracle::new(&a, ValueKind::ParityBool).unwrap();
        prop_assume!(o.any(&[]).unwrap().value == Value::Bool(true));
        let s = session(&a, ValueKind::ParityBool);
        let policy = SimulationPolicy { cyclic: CyclicPolicy::From(0), seed, ..Default::default() };
        let r = simulate(&s, &policy, 10, 8, None).unwrap();
        for t in &r.trials {
            prop_assert!(t.any_deviations.is_empty());
            if t.cyclic_tail == oracle::CyclicTail::Always {
                prop_assert!(t.accepted(), "{:?}", t.word);
            }
        }
    }
}
