#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    // The .rnl parser must never panic: arbitrary input yields either a
    // circuit or a located diagnostic.
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = revlogic::rnl::parse(text);
    }
});
