//! Finite dynamical systems attached to knots: for a knot K and coefficient
//! group Z/p^r, the space of colorings carries a shift map whose module
//! structure, orbit periods, and fixed subgroups this crate computes.
//!
//! The pipeline runs from a Wirtinger presentation or an Alexander
//! polynomial to a pair of integer matrices, restricts them over Z/p^r,
//! carves out the submodule where the shift acts invertibly, and then reads
//! off transfer-map orders, exact orbit periods, growth towers across
//! p-power levels, and covering counts. A brute-force oracle recomputes the
//! small cases from explicit state sets for cross-checking.

pub mod alexander;
pub mod coverings;
pub mod error;
pub mod matrix;
pub mod oracle;
pub mod par;
pub mod poly;
pub mod ring;
pub mod shift;
pub mod spectra;
pub mod submodule;

pub use alexander::{
    alexander_polynomial, builtin_knot, builtin_names, fox_pair, parse_wirtinger, reduce_pair,
    AlexanderPair, Crossing, Knot, KnotPresentation, PairKind, Sign,
};
pub use coverings::{classify_coverings, classify_coverings_abelian, count_surjective,
    fixed_subgroup, CoveringReport};
pub use error::{Error, Result};
pub use matrix::{IntMatrix, MatrixZpr};
pub use poly::{degree_mod_p, det_poly, IntPoly, LaurentPolyZ};
pub use ring::{divisors, factorize, is_prime, RingParams};
pub use shift::{
    compute_backward_null, compute_forward_null, compute_v, transfer_map, two_bridge_window_pair,
    verify_decomposition, Decomposition, ShiftSystem,
};
pub use spectra::{
    combine_abelian, order_of_transfer, period_set, period_tower, AbelianGroupSpec,
    CombinedSpectrum, PeriodSpectrum, PeriodTower, TowerPattern,
};
pub use submodule::{apply, kernel, preimage, solve, Submodule};
