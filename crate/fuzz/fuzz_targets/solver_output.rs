#![no_main]

use ipskit::cnfbridge::{parse_solver_output, SolverVerdict};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(SolverVerdict::Sat(Some(model))) = parse_solver_output(s) {
        assert!(model.keys().all(|&k| k > 0));
    }
});
