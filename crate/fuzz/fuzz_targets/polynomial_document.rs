#![no_main]

use libfuzzer_sys::fuzz_target;
use tropcount::io::parse_polynomial;
use tropcount::trop_poly::{check_balancing, corner_locus};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(poly) = parse_polynomial(text) else { return };
    if let Ok(curve) = corner_locus(&poly) {
        curve.validate().expect("corner loci are well formed");
        assert!(check_balancing(&curve).is_balanced());
    }
});
