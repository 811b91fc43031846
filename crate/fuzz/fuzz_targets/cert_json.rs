#![no_main]

use ipskit::ipscert::{cert_from_json, cert_to_json};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(c) = cert_from_json(s) {
        assert_eq!(cert_from_json(&cert_to_json(&c)).unwrap(), c);
    }
});
