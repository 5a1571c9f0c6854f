#![no_main]

use libfuzzer_sys::fuzz_target;
use tropcount::io::{parse_path, path_doc};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(path) = parse_path(text) {
        assert_eq!(parse_path(&path_doc(&path).to_json()).unwrap(), path);
    }
});
