//! Sparse multivariate polynomials over a runtime [`Field`](crate::ff::Field).

mod dense;
mod monomial;
mod poly;
mod text;
mod var;

use thiserror::Error;

use crate::ff::FfError;

pub use dense::{common_boolean_root, cube_values, scan_cube, ml_coeffs, mobius, zeta, DenseMl, DENSE_VAR_CAP};
pub use monomial::{Monomial, MonomialOrder};
pub use poly::{e_sym, e_sym_of, BoolReduction, Poly, CUBE_CAP};
pub use text::{parse_poly, poly_from_json, poly_to_json, PolyJson, TermJson, MAX_PARSED_EXPONENT};
pub use var::{BadVarName, Gadget, VarId, MAX_BLOCK_WIDTH};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("leading monomial of the zero polynomial")]
    ZeroPolynomial,
    #[error("no value assigned to {0}")]
    MissingVariable(VarId),
    #[error("{n} variables exceed the enumeration cap {cap}")]
    TooManyVariables { n: usize, cap: usize },
    #[error("degree {d} out of range for {n} variables")]
    DegreeOutOfRange { d: usize, n: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Field(#[from] FfError),
}
