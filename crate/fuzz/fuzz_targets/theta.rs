#![no_main]

use libfuzzer_sys::fuzz_target;
use seba_core::secular::parse_theta;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(t) = parse_theta(s) {
            assert!(t.is_finite());
        }
    }
});
