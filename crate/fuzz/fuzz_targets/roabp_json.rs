#![no_main]

use ipskit::roabp::{roabp_from_json, roabp_to_json};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(a) = roabp_from_json(s) {
        let b = roabp_from_json(&roabp_to_json(&a)).unwrap();
        assert_eq!(b.widths(), a.widths());
        if a.size().edges <= 4096 {
            assert_eq!(b.extract_poly(), a.extract_poly());
        }
    }
});
