#![no_main]

use libfuzzer_sys::fuzz_target;
use tropcount::gw::GwElement;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(x) = text.parse::<GwElement>() {
        // rendering is canonical, so it must read back to the same record
        let again: GwElement = x.to_string().parse().expect("rendered form parses");
        assert_eq!(again, x);
    }
});
