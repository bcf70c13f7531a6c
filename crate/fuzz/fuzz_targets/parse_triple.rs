#![no_main]

use libfuzzer_sys::fuzz_target;
use symfermat::freypipe::parse_triple;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok([a, b, c]) = parse_triple(text, 1) {
        let again = parse_triple(&format!("{a},{b},{c}"), 1).expect("printed triples parse");
        assert_eq!(again, [a, b, c]);
    }
});
