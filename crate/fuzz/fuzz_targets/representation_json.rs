#![no_main]

use exclusivity::graph::io::read_json;
use exclusivity::{validate_representation, OrthonormalRepresentation};
use libfuzzer_sys::fuzz_target;

// Input: a graph JSON line, then a representation JSON document.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let (graph, rep) = text.split_once('\n').unwrap_or(("", text));
    let Ok(rep) = OrthonormalRepresentation::from_json(rep) else { return };
    if let Ok(g) = read_json(graph) {
        let _ = validate_representation(&g, &rep, 1e-6);
    }
});
