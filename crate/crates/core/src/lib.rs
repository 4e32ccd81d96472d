//! Numerical calculus for generalized functions on a scale ladder.
//!
//! A single vanishing width parameter is modeled as a finite geometric
//! ladder of scales. Delta functions, mollified fundamental-solution
//! kernels, and convolution solutions become ladder-indexed families of
//! smooth functions, and every "approximately equal" statement becomes a
//! measurable convergence property: residuals per level, a fitted order,
//! and a pass/fail verdict against a tolerance schedule.
//!
//! Modules:
//! - [`scalefield`]: ladders, mollifier profiles, delta families
//! - [`calculus`]: pairings, convolution, derivatives, differential operators
//! - [`equivalence`]: approximation relations, delta verification, standard parts
//! - [`solutions`]: fundamental-solution catalog, convolution solver, Fourier demo

pub mod calculus;
pub mod equivalence;
pub mod error;
pub mod scalefield;
pub mod solutions;

pub use calculus::{
    apply_pdo, convolve, derivative, formal_adjoint, pair, MultiIndex, PDOperator, PairSeries,
    QuadRule, QuadratureSpec,
};
pub use error::{Error, Result};
pub use scalefield::{
    make_ladder, make_mollifier, model_delta, scaled_delta, DeltaClass, Mollifier, MollifierKind,
    ScaleLadder, SmoothFamily, Smoothness,
};
