//! Algebraic circuits over finite fields, their lowering to straight-line
//! programs, unary-bit CNF encodings, DIMACS emission and equisatisfiability
//! checks.

mod circuit;
mod cnf;
mod dimacs;
mod sat;
mod slp;
mod ubit;

use rand::Rng;
use thiserror::Error;

use crate::ff::{FfError, Field};
use crate::mpoly::{PolyError, VarId};

pub use circuit::{
    circuit_from_json, circuit_to_json, AlgCircuit, CircuitBuilder, CircuitJson, CircuitMetrics, Gate, GateJson,
};
pub use cnf::{ecnf, plain_cnf, semi_cnf, Clause, CnfFormula, Ecnf, Encoding, Lit, SemiCnf};
pub use dimacs::{
    emit_dimacs, formula_from_parts, parse_dimacs, parse_solver_output, sidecar_json, Dimacs, Sidecar, SolverVerdict,
};
pub use sat::{dpll, equisat_check, EquisatMode, EQUISAT_POINT_CAP};
pub use slp::{slp_of, BinOp, Operand, Slp, SlpEq, SlpVar};
pub use ubit::{graft, identity_suite, ubit, ubit_circuit, ubit_gate, ubit_of};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CnfError {
    #[error("circuit has a cycle")]
    Cyclic,
    #[error("gate {0} is out of range or malformed")]
    BadGate(usize),
    #[error("gate {0} has no children")]
    EmptyFanIn(usize),
    #[error("no value for input {0}")]
    MissingInput(VarId),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("UBIT index {j} outside F_{q}")]
    IndexOutOfField { j: u64, q: u64 },
    #[error("unary encodings need a prime field, got {0}")]
    NotPrimeField(String),
    #[error("enumeration of {what} exceeds the cap {cap}")]
    TooLarge { what: String, cap: u64 },
    #[error("identity check failed: {0}")]
    DivisionFails(String),
    #[error(transparent)]
    Field(#[from] FfError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A random circuit with at most `max_gates` sum/product gates over
/// `x_1..x_{max_vars}` and constants, children drawn from earlier gates.
pub fn random_circuit<R: Rng>(field: &Field, rng: &mut R, max_gates: usize, max_vars: u32) -> AlgCircuit {
    let mut b = CircuitBuilder::new(field);
    let mut pool: Vec<usize> = (1..=max_vars.max(1)).map(|i| b.input(VarId::Plain(i))).collect();
    let q = field.size().unwrap_or(5);
    pool.push(b.constant(field.elem_from_index(rng.gen_range(0..q))));
    let gates = rng.gen_range(1..=max_gates.max(1));
    let mut last = pool[0];
    for _ in 0..gates {
        let k = rng.gen_range(1..=3.min(pool.len()));
        let ch: Vec<usize> = (0..k).map(|_| pool[rng.gen_range(0..pool.len())]).collect();
        last = if rng.gen_bool(0.5) { b.add(ch) } else { b.mul(ch) };
        pool.push(last);
    }
    b.finish(last)
}
