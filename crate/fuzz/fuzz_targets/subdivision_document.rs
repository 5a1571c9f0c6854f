#![no_main]

use libfuzzer_sys::fuzz_target;
use tropcount::io::{parse_subdivision, subdivision_doc};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(s) = parse_subdivision(text) {
        s.validate().expect("parsed subdivisions are valid");
        let _ = s.dual_curve_connected();
        assert_eq!(parse_subdivision(&subdivision_doc(&s, None, None).to_json()).unwrap(), s);
    }
});
