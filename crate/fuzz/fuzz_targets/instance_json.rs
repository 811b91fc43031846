#![no_main]

use ipskit::instances::Instance;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(inst) = Instance::from_json_str(s) {
        assert_eq!(Instance::from_json_str(&inst.to_json_string()).unwrap(), inst);
    }
});
