use automata_core::{int, run_from, LassoWord, Quatomaton, Rational};
use lasso_values::*;
use proptest::prelude::*;
use std::cmp::Ordering;
use testkit::{random_automaton, RandomSpec};

/// Lasso from state `s` built from random letter choices among enabled
/// edges, so that it always has a run.
fn walk(a: &Quatomaton, s: usize, choices: &[usize]) -> (Vec<usize>, usize) {
    let mut s = s;
    let mut word = Vec::new();
    for &c in choices {
        let out = a.out_edges(s);
        let e = out[c % out.len()];
        word.push(a.edge(e).letter);
        s = a.edge(e).to;
    }
    (word, s)
}

/// Lasso from `s`: a walk driven by `u`, then a walk driven by `v` cut at
/// its first repeated state so that the period closes a cycle.
fn lasso(a: &Quatomaton, s: usize, u: &[usize], v: &[usize]) -> LassoWord {
    let (mut spoke, mid) = walk(a, s, u);
    let mut states = vec![mid];
    let mut letters = Vec::new();
    let mut cur = mid;
    for i in 0.. {
        let out = a.out_edges(cur);
        let e = out[v[i % v.len()] % out.len()];
        letters.push(a.edge(e).letter);
        cur = a.edge(e).to;
        if let Some(j) = states.iter().position(|&x| x == cur) {
            spoke.extend_from_slice(&letters[..j]);
            return LassoWord::new(spoke, letters[j..].to_vec()).unwrap();
        }
        states.push(cur);
    }
    unreachable!()
}

/// Direct evaluation by unrolling: skip past the preperiod, then read a
/// window whose length is a multiple of every possible run period.
fn unrolled(a: &Quatomaton, kind: ValueKind, w: &LassoWord, start: usize) -> Value {
    let n = a.num_states();
    let fact: usize = (1..=n).product();
    let skip = w.spoke.len() + w.period.len() * n;
    let window = w.period.len() * fact;
    let run = run_from(a, start, &w.unroll(skip + window)).unwrap();
    let ws: Vec<Rational> = run.edges.iter().map(|&e| a.weight(e).cloned().unwrap_or(int(0))).collect();
    let tail = &ws[skip..];
    match kind {
        ValueKind::Sup => Value::Rational(ws.iter().max().unwrap().clone()),
        ValueKind::Inf => Value::Rational(ws.iter().min().unwrap().clone()),
        ValueKind::LimSup => Value::Rational(tail.iter().max().unwrap().clone()),
        ValueKind::LimInf => Value::Rational(tail.iter().min().unwrap().clone()),
        ValueKind::LimAvg => Value::Rational(tail.iter().sum::<Rational>() / int(tail.len() as i64)),
        ValueKind::ParityBool => {
            let m = run.edges[skip..].iter().map(|&e| a.edge_rank(e).unwrap()).min().unwrap();
            Value::Bool(m % 2 == 0)
        }
        _ => unreachable!(),
    }
}

fn spec() -> RandomSpec {
    RandomSpec { max_states: 5, ..RandomSpec::default() }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn matches_unrolled_evaluation(seed in 0u64..10_000, s in 0usize..5, u in proptest::collection::vec(0usize..4, 0..4), v in proptest::collection::vec(0usize..4, 1..4)) {
        let a = random_automaton(seed, spec());
        let s = s % a.num_states();
        let w = lasso(&a, s, &u, &v);
        for kind in [ValueKind::Sup, ValueKind::Inf, ValueKind::LimSup, ValueKind::LimInf, ValueKind::LimAvg, ValueKind::ParityBool] {
            prop_assert_eq!(eval_lasso(&a, kind, &w, s).unwrap(), unrolled(&a, kind, &w, s), "{}", kind);
        }
    }

    #[test]
    fn period_doubling_and_rotation(seed in 0u64..10_000, u in proptest::collection::vec(0usize..4, 0..4), v in proptest::collection::vec(0usize..4, 1..4)) {
        let a = random_automaton(seed, spec());
        let w = lasso(&a, 0, &u, &v);
        let (spoke, period) = (w.spoke.clone(), w.period.clone());
        let doubled = LassoWord::new(spoke.clone(), period.repeat(2)).unwrap();
        let mut rotated_period = period.clone();
        rotated_period.rotate_left(1);
        let mut longer = spoke.clone();
        longer.push(period[0]);
        let rotated = LassoWord::new(longer, rotated_period).unwrap();
        for kind in ValueKind::ALL {
            let base = eval_lasso(&a, kind, &w, 0).unwrap();
            prop_assert_eq!(&base, &eval_lasso(&a, kind, &doubled, 0).unwrap());
            prop_assert_eq!(&base, &eval_lasso(&a, kind, &rotated, 0).unwrap());
        }
    }

    #[test]
    fn averaged_scores_bounded(colors in proptest::collection::vec(0u8..5, 1..30)) {
        let cs: Vec<Color> = colors.iter().map(|&c| [Color::White, Color::Green, Color::Yellow, Color::Red, Color::Black][c as usize]).collect();
        let s = score_infix(&cs).unwrap();
        prop_assert_eq!(s.counts.len(), cs.len() as u64);
        for x in [&s.avgscore.wb, &s.avgscore.gr] {
            prop_assert!(*x >= int(-1) && *x <= int(1));
        }
    }
}

fn triple_strategy() -> impl Strategy<Value = Value> {
    (any::<bool>(), -2i64..3, -2i64..3, -2i64..3, -2i64..3).prop_map(|(a, p, q, r, s)| {
        Value::Robustness(RobustnessValue {
            accept: a,
            period_avg: ScorePair { wb: int(p), gr: int(q) },
            spoke_diff: ScorePair { wb: int(r), gr: int(s) },
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn comparison_is_a_total_order(x in triple_strategy(), y in triple_strategy(), z in triple_strategy()) {
        let xy = compare_values(&x, &y).unwrap();
        prop_assert_eq!(xy.reverse(), compare_values(&y, &x).unwrap());
        if xy == Ordering::Equal {
            prop_assert_eq!(&x, &y);
        }
        if xy != Ordering::Greater && compare_values(&y, &z).unwrap() != Ordering::Greater {
            prop_assert_ne!(compare_values(&x, &z).unwrap(), Ordering::Greater);
        }
        prop_assert_eq!(compare_values(&Value::Bottom, &x).unwrap(), Ordering::Less);
    }
}
