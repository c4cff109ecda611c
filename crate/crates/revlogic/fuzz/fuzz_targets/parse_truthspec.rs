#![no_main]

use libfuzzer_sys::fuzz_target;
use revlogic::sim::TruthSpec;

fuzz_target!(|data: &[u8]| {
    // The truth-spec parser must never panic on arbitrary input.
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = TruthSpec::parse(text);
    }
});
