#![no_main]

use libfuzzer_sys::fuzz_target;
use symfermat::curvedb::{verify, CurveDatabase};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(db) = CurveDatabase::parse(text) {
        for r in db.records() {
            let _ = r.to_string();
            let _ = verify(r);
        }
    }
});
