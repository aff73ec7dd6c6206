#![no_main]

use automata_core::Quatomaton;
use libfuzzer_sys::fuzz_target;
use rc_build::RcTable;

const AUTOMATA: [&str; 3] =
    [include_str!("../../fixtures/fig1.json"), include_str!("../../fixtures/acd.json"), include_str!("../../fixtures/aseq.json")];

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    for doc in AUTOMATA {
        let a = Quatomaton::load(doc).expect("fixture");
        let Ok(t) = RcTable::load(text, &a) else { continue };
        let Ok(n) = rc_build::prepare(&a, t.kind) else { continue };
        // walk a few steps along the recommendations
        let mut m = t.memory_at(n.initial());
        for _ in 0..8 {
            let set = t.recommend(&m, &mut 0);
            let Some(e) = set.iter().find_map(|&l| n.transition(m.state, l)) else { break };
            t.advance(&n, &mut m, e, &mut 0);
        }
        assert_eq!(RcTable::load(&t.save(&a).expect("save"), &a).expect("reload"), t);
    }
});
