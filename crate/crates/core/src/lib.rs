//! Exact-arithmetic workbench for algebraic proof complexity at desk scale.

pub mod ff;
pub mod mpoly;
pub mod linalg;
pub mod wordspec;
pub mod cnfbridge;
pub mod instances;
pub mod dims;
pub mod roabp;
pub mod ipscert;
pub mod booloracle;
