//! Exact dense linear algebra over the rationals.

pub mod elim;
pub mod matrix;
pub mod poly;
pub mod rational;

pub use elim::{in_span, inverse, kernel_basis, rank, solve_linear};
pub use matrix::{bracket, conjugate_by_exp, RatMatrix};
pub use poly::{char_poly, jordan_blocks, jordan_structure, rank_profile, rational_spectrum, Spectrum};
pub use rational::{frac, int, parse_rational, pow_i, to_fraction_string, Rational, Vector};
