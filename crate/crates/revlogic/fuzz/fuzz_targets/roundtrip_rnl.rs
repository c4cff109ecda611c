#![no_main]

use libfuzzer_sys::fuzz_target;
use revlogic::rnl;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(parsed) = rnl::parse(text) else { return };
    // Whatever the parser accepts must validate, serialize canonically,
    // and survive a reparse unchanged.
    let canonical = rnl::serialize(&parsed.circuit).expect("parsed circuits are valid");
    let reparsed = rnl::parse(&canonical).expect("canonical text parses");
    assert!(reparsed.circuit.structurally_equal(&parsed.circuit));
    assert_eq!(rnl::serialize(&reparsed.circuit).unwrap(), canonical);
});
