#![no_main]

use libfuzzer_sys::fuzz_target;
use seba_cli::config::{parse_kv, parse_value, Kind};
use seba_cli::COMMANDS;

const KINDS: [Kind; 7] = [
    Kind::Float,
    Kind::Int,
    Kind::Bool,
    Kind::Text,
    Kind::FloatList,
    Kind::Pair,
    Kind::Theta,
];

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(pairs) = parse_kv(s) else {
        return;
    };
    for (k, v) in &pairs {
        for kind in KINDS {
            let _ = parse_value(k, kind, v);
        }
    }
    for c in COMMANDS {
        let _ = seba_cli::config::Params::resolve(
            &c.schema(),
            &Default::default(),
            &Default::default(),
            &pairs,
        );
    }
});
