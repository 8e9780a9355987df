//! Exact determinants by Dodgson condensation.
//!
//! Entries are sparse multivariate polynomials over exact rationals, so a
//! matrix whose condensation would divide by zero can be repaired by
//! introducing fresh variables into the original matrix and evaluating the
//! final 1x1 level at a limit point. Every result can be checked against
//! the independent oracles in [`oracle`].

pub mod corpus;
pub mod engine;
pub mod error;
pub mod matrix;
pub mod oracle;
pub mod poly;
pub mod rational;
pub mod repair;
pub mod report;

pub use engine::{
    condense_once, divide_by_interior, predicted_mult_count, verify_minor_levels,
    CondensationTrace, Engine,
};
pub use error::{Error, Result};
pub use matrix::{
    contiguous_minor, interior, parse_matrix, MatrixFormat, Position, SymMatrix, Window,
};
pub use oracle::{all_minors_level, det_bareiss, det_cofactor};
pub use poly::{
    poly_eval, poly_exact_div, poly_is_zero, Binding, Monomial, Polynomial, VarAllocator, VarId,
};
pub use rational::{rat_from_decimal_string, Rational};
pub use repair::{
    auto_repair, cyclic_shift, find_interior_zeros, intermediate_replace_unsound, perturb_original,
    replace_entry_symbolic, replace_zeros_with_variables, trace_window, RepairOutcome, RepairPlan,
    Strategy, UnsoundOutcome, ZeroReport,
};
