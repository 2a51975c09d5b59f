#![no_main]

use libfuzzer_sys::fuzz_target;
use seba_core::spectrum::io::{parse_text, to_text};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(spec) = parse_text(s) {
        // Whatever parses must survive a write and re-read.
        let again = parse_text(&to_text(&spec)).expect("round trip");
        assert_eq!(again.len(), spec.len());
    }
});
