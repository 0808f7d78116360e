#![no_main]

use libfuzzer_sys::fuzz_target;
use theta3::format::{parse_matroid, serialize_matroid};

fuzz_target!(|data: &str| {
    // Whatever parses must survive a round trip unchanged.
    if let Ok(m) = parse_matroid(data) {
        let text = serialize_matroid(&m);
        let again = parse_matroid(&text).expect("serialized matroid reparses");
        assert_eq!(again, m);
    }
});
