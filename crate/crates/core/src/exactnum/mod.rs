//! Exact scalars over Q(symbols), integer normal forms and Q-linear utilities.

mod intmat;
mod poly;
mod qlin;
mod scalar;

use thiserror::Error;

pub use intmat::{
    hermite_normal_form, integer_kernel, smith_normal_form, solve_integer, Hermite, IntMatrix,
    IntSolution, Smith,
};
pub use poly::{Monomial, Poly};
pub use qlin::{
    common_table, denominator_lcm, numeric_rank, q_coords, q_linear_rank, rational_lattice_basis,
    rational_left_kernel, rational_nullspace, rational_rank, rational_rref, scalar_nullspace,
    scalar_rank, scalar_rref, scalar_solve, to_int_rows, QCoords,
};
pub use scalar::{Scalar, Symbol, SymbolTable};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NumError {
    #[error("symbol name '{0}' is not a valid identifier")]
    BadSymbol(String),
    #[error("symbol '{0}' declared twice")]
    DuplicateSymbol(String),
    #[error("unknown symbol '{0}'")]
    UnknownSymbol(String),
    #[error("scalars come from different symbol tables")]
    MixedTables,
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse scalar at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}
