//! Odd-order offset magic squares.
//!
//! A fixed arrangement of the offsets `0..s²` (the offset grid) is built for
//! any odd order `s`; adding an exact scalar `N` to every cell yields a magic
//! square with line sum `s(s²−1)/2 + sN`. The crate builds the grid two
//! independent ways, verifies arbitrary squares, and carries a brute-force
//! enumerator for order three.

pub mod cli;
pub mod construct;
pub mod numeric;
pub mod oracle;
pub mod symmetry;
pub mod verify;

pub use construct::{
    build_square_a, instantiate, magic_constant, normal_magic_constant, offset_grid,
    offset_grid_closed_form, offset_grid_rules, ConstructError, MagicSquare, OffsetGrid, Order,
    SquareA,
};
pub use numeric::{
    format_scalar, parse_scalar, NumericError, ParseScalarError, Scalar, ScalarKind,
};
pub use oracle::{enumerate_3x3, symmetry_orbit, OracleError, OracleResult};
pub use verify::{
    is_normal, verify_grid, verify_magic, verify_square, verify_structure, ShapeError,
    StructuralReport, VerificationReport,
};
