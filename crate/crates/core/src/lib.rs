//! Slack matrices of regular n-gons, their explicit small nonnegative
//! factorizations, and lower bounds on the nonnegative rank (equivalently,
//! on the extension complexity of the polygon).
//!
//! The pieces:
//! - [`coeffs`] / [`slack`]: the circulant slack matrix S_n and its
//!   coefficient function c_k;
//! - [`factorize`]: the recursive rank-two-correction factorization reaching
//!   the closed-form size [`factorize::upper_bound_size`], plus verification;
//! - [`extension`]: the lifted system A x + U y = b, y >= 0 a factorization
//!   induces;
//! - [`bounds`]: exact-arithmetic lower bounds (log, Sperner antichain,
//!   improved antichain, cyclic-polytope face counting) and per-n summaries;
//! - [`rectcover`]: exact rectangle covering numbers (boolean rank) of small
//!   support patterns;
//! - [`io`]: plain-text dump formats for matrices and factorizations.

pub mod bounds;
pub mod coeffs;
pub mod error;
pub mod extension;
pub mod factorize;
pub mod io;
pub mod matrix;
pub mod rectcover;
pub mod slack;

pub use bounds::{
    binomial, bounds_row, bounds_row_with_budget, faces, geometric_lower_bound,
    improved_boolean_bound, minimize_fkz, sperner_bound, trivial_log_bound, BoundsRow,
    MinFkzResult, RcbInfo, RCB_TABLE_MAX_N,
};
pub use coeffs::{slack_coefficient, CoefficientFn};
pub use error::{Error, Result};
pub use extension::{extension_from_factorization, polygon_vertices, ExtendedFormulation};
pub use factorize::{
    correction_matrix, rank_one_correction, recursive_factorize, trivial_base_factorize,
    upper_bound_size, verify_factorization, BlockSpec, CorrectionKind, Factorization,
    RankOneFactor, VerificationReport,
};
pub use io::{read_factorization, read_matrix, write_factorization, write_matrix};
pub use matrix::Matrix;
pub use rectcover::{
    maximal_rectangles, rectangle_cover_number, support_pattern, RcResult, Rectangle,
    SupportPattern, DEFAULT_NODE_BUDGET,
};
pub use slack::{slack_matrix, SlackMatrix};
