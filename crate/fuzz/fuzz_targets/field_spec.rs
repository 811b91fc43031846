#![no_main]

use ipskit::ff::Field;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(f) = Field::parse(s) {
        assert_eq!(Field::parse(&f.spec()).unwrap(), f);
        if let Some(q) = f.size() {
            let e = f.elem_from_index(q / 2);
            assert_eq!(f.parse_elem(&f.format_elem(&e)).unwrap(), e);
        }
    }
});
