#![no_main]

use libfuzzer_sys::fuzz_target;
use tropcount::io::parse_curve;
use tropcount::render::{render_curve, RenderConfig};
use tropcount::trop_poly::check_balancing;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(curve) = parse_curve(text) {
        let balanced = check_balancing(&curve).is_balanced();
        assert_eq!(render_curve(&curve, &RenderConfig::default()).is_ok(), balanced);
    }
});
