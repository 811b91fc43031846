#![no_main]

use ipskit::cnfbridge::{circuit_from_json, circuit_to_json};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(c) = circuit_from_json(s) {
        assert_eq!(circuit_from_json(&circuit_to_json(&c)).unwrap(), c);
        let _ = c.metrics();
    }
});
