#![no_main]

use libfuzzer_sys::fuzz_target;
use seba_core::spectrum::io::{parse_jsonl, to_jsonl};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(spec) = parse_jsonl(s) {
        assert_eq!(parse_jsonl(&to_jsonl(&spec)).expect("round trip"), spec);
    }
});
