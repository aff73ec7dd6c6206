use automata_core::{int, run_prefix, Quatomaton, Rational};
use lasso_values::ValueKind;
use rc_build::{build, prepare, BuildError, Caps, Entry, LetterSet, Mode, RcTable, Strength};
use testkit::fixture;

fn letters(a: &Quatomaton, names: &[&str]) -> LetterSet {
    names.iter().map(|n| a.letter_id(n).unwrap_or_else(|| panic!("letter {n}"))).collect()
}

fn at(t: &RcTable, a: &Quatomaton, state: &str, theta: Option<Rational>) -> LetterSet {
    t.lookup(a.state_id(state).unwrap(), theta.as_ref())
}

fn fig1(kind: ValueKind, mode: Mode) -> (Quatomaton, RcTable) {
    let a = fixture("fig1");
    let t = build(&a, kind, mode).unwrap();
    (a, t)
}

#[test]
fn limsup_targets_the_heaviest_reachable_loop() {
    let (a, t) = fig1(ValueKind::LimSup, Mode::Any);
    assert_eq!(t.strength, Strength::Weak);
    assert_eq!(at(&t, &a, "q2", None), letters(&a, &["s5", "s6"]));
    let (a, t) = fig1(ValueKind::LimSup, Mode::Cyclic);
    assert_eq!(at(&t, &a, "q6", None), letters(&a, &["s12"]));
    assert_eq!(at(&t, &a, "q5", None), letters(&a, &["s7"]));
    for s in 0..a.num_states() {
        assert!(!t.lookup(s, None).contains(&a.letter_id("s11").unwrap()));
    }
}

#[test]
fn sup_switches_to_the_fallback_once_the_maximum_is_seen() {
    let (a, t) = fig1(ValueKind::Sup, Mode::Any);
    assert_eq!(t.strength, Strength::Weak);
    // s5 itself weighs 120
    assert_eq!(at(&t, &a, "q2", Some(int(30))), letters(&a, &["s5"]));
    assert_eq!(at(&t, &a, "q2", None), letters(&a, &["s5"]));
    assert_eq!(at(&t, &a, "q3", Some(int(30))), letters(&a, &["s8"]));
    assert_eq!(at(&t, &a, "q4", Some(int(120))), letters(&a, &["s0", "s4"]));
    let (a, t) = fig1(ValueKind::Sup, Mode::Cyclic);
    assert_eq!(at(&t, &a, "q5", Some(int(120))), letters(&a, &["s7"]));
    assert_eq!(at(&t, &a, "q3", Some(int(10))), letters(&a, &["s8"]));
}

#[test]
fn liminf_tables() {
    let (a, t) = fig1(ValueKind::LimInf, Mode::Cyclic);
    assert_eq!(t.strength, Strength::Strong);
    assert_eq!(at(&t, &a, "q2", None), letters(&a, &["s6"]));
    assert_eq!(at(&t, &a, "q6", None), letters(&a, &["s12"]));
    let (a, t) = fig1(ValueKind::LimInf, Mode::Any);
    assert_eq!(t.strength, Strength::Weak);
    assert_eq!(at(&t, &a, "q3", None), letters(&a, &["s8"]));
}

#[test]
fn inf_breakpoints() {
    let (a, t) = fig1(ValueKind::Inf, Mode::Any);
    assert_eq!(t.strength, Strength::Strong);
    assert_eq!(at(&t, &a, "q2", Some(int(30))), letters(&a, &["s5", "s6", "s9"]));
    assert_eq!(at(&t, &a, "q2", Some(int(200))), letters(&a, &["s5"]));
    assert_eq!(at(&t, &a, "q2", None), letters(&a, &["s5"]));
    assert_eq!(at(&t, &a, "q2", Some(int(40))), letters(&a, &["s5", "s6"]));
    let a = fixture("selfloop");
    for mode in [Mode::Any, Mode::Cyclic] {
        let t = build(&a, ValueKind::Inf, mode).unwrap();
        assert_eq!(at(&t, &a, "q", Some(int(5))), letters(&a, &["a"]));
    }
}

#[test]
fn limavg_tables() {
    let (a, t) = fig1(ValueKind::LimAvg, Mode::Cyclic);
    assert_eq!(t.strength, Strength::Strong);
    assert_eq!(at(&t, &a, "q1", None), letters(&a, &["s3"]));
    assert_eq!(at(&t, &a, "q2", None), letters(&a, &["s6"]));
    let (a, t) = fig1(ValueKind::LimAvg, Mode::Any);
    assert_eq!(at(&t, &a, "q3", None), letters(&a, &["s8"]));
}

#[test]
fn parity_tables_follow_the_call_protocol() {
    let a = fixture("acd");
    let any = build(&a, ValueKind::ParityBool, Mode::Any).unwrap();
    let cyc = build(&a, ValueKind::ParityBool, Mode::Cyclic).unwrap();
    assert_eq!(any.strength, Strength::Weak);
    let state = |u: &str| run_prefix(&a, &a.parse_word(u).unwrap()).unwrap().last();
    assert_eq!(any.lookup(state(""), None), letters(&a, &["INIT_SYS"]));
    assert_eq!(any.lookup(state("INIT_SYS"), None), letters(&a, &["INIT_DB"]));
    assert_eq!(any.lookup(state("INIT_SYS INIT_DB"), None), letters(&a, &["CNCT"]));
    assert!(cyc.lookup(state("INIT_SYS"), None).is_empty());
    let chain = "INIT_SYS INIT_DB CNCT";
    assert_eq!(cyc.lookup(state(&format!("{chain} CALL QUE1")), None), letters(&a, &["ANS1"]));
    let all: LetterSet = (0..a.num_letters()).collect();
    assert_eq!(cyc.lookup(state(chain), None), all);
    assert!(any.dead[state("CALL")]);
    assert!(!any.dead[state(chain)]);
}

#[test]
fn robustness_tables() {
    let a = fixture("aseq");
    let any = build(&a, ValueKind::Robustness, Mode::Any).unwrap();
    assert_eq!(any.strength, Strength::Strong);
    for s in ["p0", "p1", "p2", "p3"] {
        assert_eq!(at(&any, &a, s, None), letters(&a, &["a"]), "{s}");
    }
    let cyc = build(&a, ValueKind::Robustness, Mode::Cyclic).unwrap();
    assert_eq!(at(&cyc, &a, "p2", None), letters(&a, &["b"]));
    let a = fixture("ga");
    let n = prepare(&a, ValueKind::Robustness).unwrap();
    for mode in [Mode::Any, Mode::Cyclic] {
        let t = build(&a, ValueKind::Robustness, mode).unwrap();
        assert_eq!(t.lookup(n.state_id("k0").unwrap(), None), letters(&n, &["a"]));
    }
}

#[test]
fn weak_limsup_table_reaches_a_target_where_the_strong_set_can_loop() {
    let a = fixture("two_target");
    let t = build(&a, ValueKind::LimSup, Mode::Any).unwrap();
    let o = oracle::Oracle::new(&a, ValueKind::LimSup).unwrap();
    // the full optimal set allows circling v -> v1 -> v forever
    let (v, v1) = (a.state_id("v").unwrap(), a.state_id("v1").unwrap());
    let (la, lb) = (a.letter_id("a").unwrap(), a.letter_id("b").unwrap());
    assert!(o.any(&[]).unwrap().letters.contains(&la));
    assert!(o.any(&[la]).unwrap().letters.contains(&lb));
    assert_eq!(a.edge(a.transition(v1, lb).unwrap()).to, v);
    // following any table letter reaches a weight-1 edge quickly
    let mut s = a.initial();
    let mut reached = false;
    for _ in 0..2 * a.num_states() {
        let l = *t.lookup(s, None).iter().next().unwrap();
        let e = a.transition(s, l).unwrap();
        if *a.weight(e).unwrap() == int(1) {
            reached = true;
            break;
        }
        s = a.edge(e).to;
    }
    assert!(reached);
}

#[test]
fn non_mscc_states_have_empty_cyclic_sets() {
    let a = fixture("fig1");
    for kind in [ValueKind::Sup, ValueKind::Inf, ValueKind::LimSup, ValueKind::LimInf, ValueKind::LimAvg] {
        let t = build(&a, kind, Mode::Cyclic).unwrap();
        // fig1 has no transient states; every state lies on a cycle
        for s in 0..a.num_states() {
            assert!(!t.lookup(s, None).is_empty(), "{kind} {s}");
        }
    }
    let a = fixture("acd");
    let t = build(&a, ValueKind::ParityBool, Mode::Cyclic).unwrap();
    for s in ["init", "sys", "db"] {
        assert!(at(&t, &a, s, None).is_empty());
    }
}

#[test]
fn tables_round_trip_and_rebuild_byte_identically() {
    for (name, kind) in [
        ("fig1", ValueKind::Sup),
        ("fig1", ValueKind::Inf),
        ("fig1", ValueKind::LimAvg),
        ("acd", ValueKind::ParityBool),
        ("ga", ValueKind::Robustness),
    ] {
        let a = fixture(name);
        for mode in [Mode::Any, Mode::Cyclic] {
            let t = build(&a, kind, mode).unwrap();
            let text = t.save(&a).unwrap();
            assert_eq!(text, build(&a, kind, mode).unwrap().save(&a).unwrap());
            assert_eq!(RcTable::load(&text, &a).unwrap(), t);
        }
    }
}

#[test]
fn loading_against_another_automaton_fails() {
    let a = fixture("fig1");
    let text = build(&a, ValueKind::LimAvg, Mode::Any).unwrap().save(&a).unwrap();
    assert!(matches!(RcTable::load(&text, &fixture("ring")), Err(BuildError::HashMismatch)));
}

#[test]
fn builders_reject_missing_annotations() {
    assert!(matches!(build(&fixture("aseq"), ValueKind::LimAvg, Mode::Any), Err(BuildError::MissingWeights(_))));
    assert!(matches!(build(&fixture("fig1"), ValueKind::ParityBool, Mode::Any), Err(BuildError::MissingRanks(_))));
    assert!(matches!(build(&fixture("fig1"), ValueKind::LimAvgMinusSpoke, Mode::Any), Err(BuildError::Unsupported(_))));
}

#[test]
fn trail_cap_is_reported() {
    let a = fixture("fig1");
    let r = rc_build::build_with_caps(&a, ValueKind::LimAvg, Mode::Cyclic, Caps { cycles: 10, trails: 1 });
    assert!(matches!(r, Err(BuildError::CapExceeded { .. })), "{r:?}");
}

#[test]
fn thresholded_entries_are_sorted() {
    let (_, t) = fig1(ValueKind::Inf, Mode::Any);
    for e in &t.entries {
        let Entry::Thresholded { breakpoints, .. } = e else { panic!("inf tables are thresholded") };
        assert!(breakpoints.windows(2).all(|w| w[0].threshold < w[1].threshold));
    }
}

#[test]
fn caps_parse() {
    assert_eq!("5,7".parse::<Caps>().unwrap(), Caps { cycles: 5, trails: 7 });
    assert!("5".parse::<Caps>().is_err());
}
