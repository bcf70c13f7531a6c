#![no_main]

use libfuzzer_sys::fuzz_target;
use symfermat::qrsolver::parse;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(expr) = parse(text) {
        let printed = expr.to_string();
        let again = parse(&printed).expect("printed expressions parse");
        assert_eq!(again.to_string(), printed);
    }
});
