use std::collections::BTreeSet;

use automata_core::{LassoWord, Quatomaton};
use lasso_values::{Value, ValueKind};
use oracle::{check_compliance, CyclicTail, Oracle, OracleBounds, Verdict};
use testkit::fixture;

fn word(a: &Quatomaton, s: &str) -> Vec<usize> {
    a.parse_word(s).unwrap()
}

fn letters(a: &Quatomaton, s: &str) -> BTreeSet<usize> {
    word(a, s).into_iter().collect()
}

fn from(a: &Quatomaton, kind: ValueKind, state: &str) -> Oracle {
    Oracle::from_state(a, kind, OracleBounds::default_for(a), a.state_id(state).unwrap()).unwrap()
}

#[test]
fn fig1_custom_after_s7_from_q5() {
    let a = fixture("fig1");
    let o = from(&a, ValueKind::LimAvgMinusSpoke, "q5");
    let u = word(&a, "s7");
    let any = o.any(&u).unwrap();
    assert_eq!(any.letters, letters(&a, "s5 s6"));
    // canonical spoke s7 s5 s3 (or s7 s6 s13) before (s0)^ω
    assert_eq!(any.value, Value::int(117));
    let cyc = o.cyclic(&u).unwrap();
    assert_eq!(cyc.letters, letters(&a, "s6"));
    // s7 (s6 s7)^ω is (s7 s6)^ω from q5: no spoke
    assert_eq!(cyc.value, Value::int(60));
}

#[test]
fn fig1_custom_after_entering_q6() {
    let a = fixture("fig1");
    let o = from(&a, ValueKind::LimAvgMinusSpoke, "q5");
    let any = o.any(&word(&a, "s11")).unwrap();
    assert_eq!(any.value, Value::int(10 - 1));
    assert_eq!(any.letters, letters(&a, "s12"));
}

#[test]
fn fig1_custom_cyclic_at_q1() {
    let a = fixture("fig1");
    let o = from(&a, ValueKind::LimAvgMinusSpoke, "q3");
    let cyc = o.cyclic(&word(&a, "s8 s5")).unwrap();
    assert_eq!(cyc.letters, letters(&a, "s3"));
    assert_eq!(cyc.value, Value::int(80 - 2));
}

#[test]
fn fig1_limavg() {
    let a = fixture("fig1");
    let o = Oracle::new(&a, ValueKind::LimAvg).unwrap();
    let any = o.any(&[]).unwrap();
    assert_eq!(any.value, Value::int(120));
    // looping on s10 first still leaves the 120 loop reachable
    assert_eq!(any.letters, letters(&a, "s8 s10"));
    let q1 = o.cyclic(&word(&a, "s8 s5")).unwrap();
    assert_eq!(q1.letters, letters(&a, "s3"));
    assert_eq!(q1.value, Value::int(80));
    let q2 = o.cyclic(&word(&a, "s8")).unwrap();
    assert_eq!(q2.letters, letters(&a, "s6"));
    assert_eq!(q2.value, Value::int(60));
    let q6 = o.cyclic(&word(&a, "s8 s6 s11")).unwrap();
    assert_eq!(q6.letters, letters(&a, "s12"));
}

#[test]
fn fig1_cyclic_value_moves_both_ways() {
    let a = fixture("fig1");
    let o = Oracle::new(&a, ValueKind::LimAvg).unwrap();
    let at = |s: &str| o.cyclic(&word(&a, s)).unwrap().value;
    assert!(at("") < at("s8"));
    assert!(at("s8 s5 s3") > at("s8 s5 s3 s4"));
}

#[test]
fn fig1_set_kinds() {
    let a = fixture("fig1");
    let sup = Oracle::new(&a, ValueKind::Sup).unwrap();
    assert_eq!(sup.any(&[]).unwrap().value, Value::int(120));
    // at q6 nothing better than the 90 already seen
    let s = sup.any(&word(&a, "s8 s6 s11")).unwrap();
    assert_eq!(s.value, Value::int(90));
    assert_eq!(s.letters, letters(&a, "s12"));
    let inf = Oracle::new(&a, ValueKind::Inf).unwrap();
    // s8 s5 s3 (s0)^ω keeps every weight ≥ 50
    let i = inf.any(&[]).unwrap();
    assert_eq!(i.value, Value::int(50));
    assert_eq!(i.letters, letters(&a, "s8"));
    let liminf = Oracle::new(&a, ValueKind::LimInf).unwrap();
    assert_eq!(liminf.cyclic(&word(&a, "s8")).unwrap().letters, letters(&a, "s6"));
    assert_eq!(liminf.any(&[]).unwrap().value, Value::int(120));
    let limsup = Oracle::new(&a, ValueKind::LimSup).unwrap();
    let q2 = limsup.any(&word(&a, "s8")).unwrap();
    assert_eq!(q2.value, Value::int(120));
    assert_eq!(q2.letters, letters(&a, "s5 s6 s9"));
}

#[test]
fn acd_recommendations() {
    let a = fixture("acd");
    let o = Oracle::new(&a, ValueKind::ParityBool).unwrap();
    assert_eq!(o.any(&[]).unwrap().letters, letters(&a, "INIT_SYS"));
    assert_eq!(o.any(&word(&a, "INIT_SYS")).unwrap().letters, letters(&a, "INIT_DB"));
    assert_eq!(o.any(&word(&a, "INIT_SYS INIT_DB")).unwrap().letters, letters(&a, "CNCT"));
    assert_eq!(o.cyclic(&word(&a, "INIT_SYS")).unwrap().value, Value::Bottom);
    assert!(o.cyclic(&word(&a, "INIT_SYS")).unwrap().letters.is_empty());
    let idle = word(&a, "INIT_SYS INIT_DB CNCT");
    let all: BTreeSet<usize> = (0..a.num_letters()).collect();
    assert_eq!(o.any(&idle).unwrap().letters, all);
    assert_eq!(o.cyclic(&idle).unwrap().letters, all);
    let q1 = word(&a, "INIT_SYS INIT_DB CNCT CALL QUE1");
    assert_eq!(o.cyclic(&q1).unwrap().letters, letters(&a, "ANS1"));
    let q2 = word(&a, "INIT_SYS INIT_DB CNCT CALL QUE2");
    assert_eq!(o.cyclic(&q2).unwrap().letters, letters(&a, "ANS2"));
    // after a wrong first letter nothing can be accepted
    let dead = o.any(&word(&a, "CALL")).unwrap();
    assert_eq!(dead.value, Value::Bool(false));
    assert_eq!(dead.letters, all);
}

#[test]
fn selfloop_is_trivial() {
    let a = fixture("selfloop");
    for kind in [ValueKind::Sup, ValueKind::Inf, ValueKind::LimSup, ValueKind::LimInf, ValueKind::LimAvg] {
        let o = Oracle::new(&a, kind).unwrap();
        for u in [vec![], vec![0, 0]] {
            let any = o.any(&u).unwrap();
            assert_eq!(any.value, Value::int(5), "{kind}");
            assert_eq!(any.letters, BTreeSet::from([0]));
            assert_eq!(o.cyclic(&u).unwrap().letters, BTreeSet::from([0]));
        }
    }
}

#[test]
fn robustness_fig6() {
    let seq = fixture("aseq");
    let o = Oracle::new(&seq, ValueKind::Robustness).unwrap();
    let a = letters(&seq, "a");
    for u in ["", "a", "a a", "a a a"] {
        assert_eq!(o.any(&word(&seq, u)).unwrap().letters, a, "after {u:?}");
    }
    // the rank-2 state is p2, reached by a from p3
    assert_eq!(o.cyclic(&word(&seq, "a")).unwrap().letters, letters(&seq, "b"));
    let ga = fixture("ga");
    let o = Oracle::new(&ga, ValueKind::Robustness).unwrap();
    assert_eq!(o.any(&[]).unwrap().letters, letters(&ga, "a"));
    assert_eq!(o.cyclic(&[]).unwrap().letters, letters(&ga, "a"));
    let inf = fixture("inf_a");
    let o = Oracle::new(&inf, ValueKind::Robustness).unwrap();
    assert_eq!(o.any(&[]).unwrap().letters, letters(&inf, "a"));
    assert_eq!(o.any(&word(&inf, "b")).unwrap().letters, letters(&inf, "a"));
}

#[test]
fn two_target_strong_set_allows_oscillation() {
    let a = fixture("two_target");
    let o = Oracle::new(&a, ValueKind::LimSup).unwrap();
    assert_eq!(o.any(&[]).unwrap().letters, letters(&a, "a b"));
    assert_eq!(o.any(&word(&a, "a")).unwrap().letters, letters(&a, "a b"));
    assert_eq!(o.any(&word(&a, "b")).unwrap().letters, letters(&a, "a b"));
    assert_eq!(o.any(&word(&a, "a b a b")).unwrap().value, Value::int(1));
}

fn lasso(a: &Quatomaton, spoke: &str, period: &str) -> LassoWord {
    LassoWord::new(word(a, spoke), word(a, period)).unwrap()
}

#[test]
fn acd_compliance_verdicts() {
    let a = fixture("acd");
    let o = Oracle::new(&a, ValueKind::ParityBool).unwrap();
    let bad = check_compliance(&o, &lasso(&a, "QUE1", "INIT_SYS"), &o, 20).unwrap();
    assert_eq!(bad.first_any_deviation, Some(0));
    assert_eq!(bad.verdict, Verdict::RejectedByDeviation);
    assert_eq!(bad.value, Value::Bool(false));

    let good = check_compliance(&o, &lasso(&a, "INIT_SYS INIT_DB CNCT", "CALL QUE1 ANS1"), &o, 30).unwrap();
    assert_eq!(good.first_any_deviation, None);
    assert_eq!(good.cyclic_tail, CyclicTail::Always);
    assert_eq!(good.verdict, Verdict::Accepted);
    assert_eq!(good.value, Value::Bool(true));

    let stuck = check_compliance(&o, &lasso(&a, "INIT_SYS INIT_DB CNCT CALL", "INIT_SYS"), &o, 20).unwrap();
    assert_eq!(stuck.first_any_deviation, None);
    assert_eq!(stuck.cyclic_tail, CyclicTail::Never);
    assert_eq!(stuck.verdict, Verdict::RejectedByCyclicNeglect);
    assert_eq!(stuck.value, Value::Bool(false));
}

#[test]
fn fig1_quantitative_compliance() {
    let a = fixture("fig1");
    let o = Oracle::new(&a, ValueKind::LimAvg).unwrap();
    let r = check_compliance(&o, &lasso(&a, "s8 s5 s3", "s0"), &o, 20).unwrap();
    assert_eq!(r.verdict, Verdict::Optimal { from: 0 });
    assert_eq!(r.best, Some(Value::int(120)));
    let r = check_compliance(&o, &lasso(&a, "s8 s6 s11", "s12"), &o, 20).unwrap();
    assert_eq!(r.first_any_deviation, Some(2));
    assert_eq!(r.verdict, Verdict::Optimal { from: 3 });
    assert_eq!(r.best, Some(Value::int(10)));
}

#[test]
fn missing_fields_are_rejected() {
    let a = fixture("acd");
    assert!(Oracle::new(&a, ValueKind::LimAvg).is_err());
    let f = fixture("fig1");
    assert!(Oracle::new(&f, ValueKind::Robustness).is_err());
}
