#![no_main]

use exclusivity::graph::io::{read_auto, read_json, write_json};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let _ = read_auto(text);
    if let Ok(g) = read_json(text) {
        assert!(g.check_invariants());
        assert_eq!(read_json(&write_json(&g)).expect("written JSON parses"), g);
    }
});
