#![no_main]

use libfuzzer_sys::fuzz_target;
use ymh::cli::Scenario;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(s) = Scenario::parse(text) {
            let _ = s.validate();
        }
    }
});
