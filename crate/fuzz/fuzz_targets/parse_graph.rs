#![no_main]

use libfuzzer_sys::fuzz_target;
use theta3::construct::cycle_matroid;
use theta3::format::{parse_graph, serialize_graph};

fuzz_target!(|data: &str| {
    if let Ok(g) = parse_graph(data) {
        assert_eq!(parse_graph(&serialize_graph(&g)).unwrap(), g);
        let _ = cycle_matroid(&g);
    }
});
