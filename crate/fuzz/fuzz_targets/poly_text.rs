#![no_main]

use ipskit::ff::Field;
use ipskit::mpoly::parse_poly;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Some((&sel, rest)) = data.split_first() else { return };
    let Ok(s) = std::str::from_utf8(rest) else { return };
    let field = match sel % 3 {
        0 => Field::prime(5).unwrap(),
        1 => Field::parse("2^3").unwrap(),
        _ => Field::rationals(),
    };
    if let Ok(p) = parse_poly(&field, s) {
        assert_eq!(parse_poly(&field, &p.to_string()).unwrap(), p);
    }
});
