#![no_main]

use ipskit::mpoly::{poly_from_json, poly_to_json};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(p) = poly_from_json(s) {
        assert_eq!(poly_from_json(&poly_to_json(&p)).unwrap(), p);
    }
});
