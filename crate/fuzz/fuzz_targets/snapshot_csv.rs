#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = ymh::io::read_snapshot(data) {
        let mut buf = Vec::new();
        ymh::io::write_snapshot(&mut buf, &s).unwrap();
        assert_eq!(ymh::io::read_snapshot(&buf[..]).unwrap(), s);
    }
});
