#![no_main]

use libfuzzer_sys::fuzz_target;
use symfermat::curvedb::CurveDatabase;
use symfermat::freypipe::ScenarioFile;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(file) = ScenarioFile::parse(text) {
        let db = CurveDatabase::embedded();
        for eq in file.equations() {
            let _ = file.scenarios(&eq.coefficients, &db);
        }
    }
});
