//! Combinatorial and symbolic machinery for periods of Eisenstein series on
//! `GL(2n+m)` against `GL(n) x GL(n+m)`.
//!
//! The crate is organised bottom-up:
//!
//! * [`cuspidal_data`]: compositions of `N`, opaque representation labels with
//!   a duality involution, and the regularity / evenness classifiers.
//! * [`weyl`]: minimal double-coset representatives `{}_Q W_P` in `S_N` and the
//!   subsets `W(P;Q)`, `W(P,Q)`.
//! * [`fixed_points`]: the finite fixed-point set of a cuspidal datum on
//!   `GL(2n+m) / GL(n) x GL(n+m)`, its tangent L-function data, and the
//!   bijection with `W(P;Q_n)`.
//! * [`lfunction`]: exact symbolic expressions over Rankin-Selberg L-factors,
//!   epsilon factors and opaque local leaves, with cancellation and pole
//!   bookkeeping at `s = 1`.
//! * [`period_formula`]: assembly of the period identity as a sum over fixed
//!   points, with all vanishing rules.
//! * [`grassmannian_oracle`]: brute-force verification over finite fields of
//!   the fixed-point theory (finiteness criterion, subset bijection, tangent
//!   spaces).
//!
//! All values are immutable after construction and every operation is a pure
//! function, so everything here is safe to share across threads.

pub mod cuspidal_data;
pub mod fixed_points;
pub mod grassmannian_oracle;
pub mod lfunction;
pub mod period_formula;
pub mod weyl;

pub use cuspidal_data::{
    check_regularity, is_even, parse_datum, Composition, CuspidalDatum, DatumError, RepLabel,
};
pub use fixed_points::{
    enumerate_fix, fix_matches_weyl, has_pole_at_one, tangent_l_data, FixedPoint, Orientation,
    TangentFactor, TangentLData,
};
pub use lfunction::{
    cancel, l_hat_n_minus, n_beta, n_w, pole_order_at_one, Completion, ExprError, LExpr, LLeaf,
    NormalizationForm, Rational, RepRef,
};
pub use period_formula::{
    assemble_equal_rank, assemble_period, emit, whittaker_normalization, FormulaError,
    OutputFormat, PeriodFormula, Term, VanishingReason,
};
pub use weyl::{
    are_associate, enumerate_min_reps, inverted_roots, w_p_q, w_p_semicolon_q, BlockPermutation,
    WeylElement, WeylError,
};

/// Version tag written into every JSON document this crate emits.
pub const SCHEMA_VERSION: u64 = 1;

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
struct ReadmeDoctests;
