//! Exact arithmetic for m-polynomials: the family MG(p;s) generated by a
//! square matrix G, generalizing the Krawtchouk polynomials.
//!
//! The crate provides
//!
//! * a scalar tower ([`scalar`]) of exact quadratic-extension rationals and
//!   approximate complex doubles,
//! * the index combinatorics ([`combinatorics`]) of weak compositions and
//!   margin-constrained contingency tables,
//! * two independent evaluation routes for MG(p;s) and full value tables
//!   ([`mg`]),
//! * structural gates on G ([`structure`]): generalized Hadamard,
//!   symmetric, and the signed core pattern,
//! * exhaustive orthogonality verification ([`orthogonality`]), and
//! * expansion of grid functions in the m-polynomial basis plus the
//!   univariate representation for q = 2 ([`expansion`]).

pub mod combinatorics;
pub mod error;
pub mod expansion;
pub mod matrix;
pub mod mg;
pub mod orthogonality;
pub mod scalar;
pub mod structure;

pub use combinatorics::{
    binomial, composition_count, compositions, factorial, monomial_power, multi_factorial,
    multinomial, tables, Composition, ContingencyTable,
};
pub use error::{Error, Result};
pub use expansion::{
    expand, expand_alpha, expand_beta, fit_univariate, reconstruct, ExpansionResult,
    ExpansionVariant, FitSide, GridFunction, Side,
};
pub use matrix::MatrixG;
pub use mg::{
    l_poly, mg_direct, mg_generator, mg_sum_over_p, mg_swapped, mg_table, mg_table_with_budget,
    verify_multiplication, MTable, MultiplicationReport, Violation, DEFAULT_CELL_BUDGET,
};
pub use orthogonality::{
    verify_basic, verify_core, verify_symmetric, verify_with, OrthVariant, OrthogonalityReport,
};
pub use scalar::{ApproxScalar, ExactScalar, Radicand, Scalar, ScalarContext, DEFAULT_TOL};
pub use structure::{check_core_pattern, check_hadamard, check_symmetric, StructureReport, Witness};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;
