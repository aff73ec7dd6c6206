#![no_main]

use automata_core::{parse_rational, LassoWord, Quatomaton};
use lasso_values::{eval_lasso, ValueKind};
use libfuzzer_sys::fuzz_target;

const FIXTURES: [(&str, ValueKind); 3] = [
    (include_str!("../../fixtures/fig1.json"), ValueKind::LimAvgMinusSpoke),
    (include_str!("../../fixtures/acd.json"), ValueKind::ParityBool),
    (include_str!("../../fixtures/inf_a.json"), ValueKind::Robustness),
];

// Input: `spoke|period`, letters separated by spaces or commas.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let _ = parse_rational(text);
    let (spoke, period) = text.split_once('|').unwrap_or(("", text));
    for (doc, kind) in FIXTURES {
        let a = Quatomaton::load(doc).expect("fixture");
        let (Ok(u), Ok(v)) = (a.parse_word(spoke), a.parse_word(period)) else { continue };
        let Ok(w) = LassoWord::new(u, v) else { continue };
        if w.spoke.len() + w.period.len() > 256 {
            continue;
        }
        assert_eq!(a.parse_word(&a.format_word(&w.period)).expect("formatted words parse"), w.period);
        let _ = eval_lasso(&a, kind, &w, a.initial());
    }
});
