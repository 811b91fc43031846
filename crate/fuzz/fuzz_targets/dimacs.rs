#![no_main]

use ipskit::cnfbridge::{emit_dimacs, parse_dimacs, CnfFormula};
use ipskit::mpoly::VarId;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(d) = parse_dimacs(s) {
        assert!(d.clauses.iter().flatten().all(|l| *l != 0 && l.unsigned_abs() as usize <= d.num_vars));
        let f = CnfFormula {
            q: 2,
            names: vec![VarId::Plain(1); d.num_vars],
            clauses: d.clauses.clone(),
            output_from: d.clauses.len(),
        };
        let again = parse_dimacs(&emit_dimacs(&f)).unwrap();
        assert_eq!(again.num_vars, d.num_vars);
        assert_eq!(again.clauses, d.clauses);
    }
});
