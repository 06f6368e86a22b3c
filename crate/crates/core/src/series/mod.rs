//! Exact polynomials in `q`, truncated power series, and the generating
//! functions built from them.

mod hilbert;
mod hook;
mod qpoly;
mod trunc;

pub use hilbert::{
    duplication_product, for_each_trivial_multiset, hilbert_truncated, initial_series,
    koszul_inverse, koszul_inverse_direct, numerator_degree_bound, numerator_polynomial,
    numerator_truncated, rational_sum_truncated, KoszulReport, Measure,
};
pub use hook::{
    count_extensions_fast, hook_count, hook_formula, hook_formula_given, hook_formula_labelled,
    CountRoute,
};
pub use qpoly::{factorial, q_factorial, q_int, q_int_pow, q_pochhammer, QPoly};
pub use trunc::{Grading, Term, TruncSeries, MAX_ORDER, MAX_X_VARS};
