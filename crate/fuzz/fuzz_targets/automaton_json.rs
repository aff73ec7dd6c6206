#![no_main]

use automata_core::{normalize_dual_sinks, Quatomaton};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(a) = Quatomaton::load(text) else { return };
    let saved = a.save();
    let b = Quatomaton::load(&saved).expect("saved automata load");
    assert_eq!(b.save(), saved);
    assert_eq!(a.hash(), b.hash());
    if let Ok(n) = normalize_dual_sinks(&a) {
        assert!(!n.has_sink_states());
    }
});
