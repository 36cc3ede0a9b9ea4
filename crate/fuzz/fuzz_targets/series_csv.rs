#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(t) = ymh::io::read_table(data) {
        for c in &t.columns {
            assert!(t.column(c).is_some());
        }
        let _ = ymh::io::read_series_pair(data, "t", "energy");
    }
});
