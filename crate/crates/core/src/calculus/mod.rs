//! Pairings, convolution, derivatives, and constant-coefficient operators.

pub mod convolve;
pub mod derivative;
pub mod multi_index;
pub mod pair;
pub mod pdo;
pub mod quad;

pub use convolve::convolve;
pub use derivative::{apply_pdo, derivative};
pub use multi_index::MultiIndex;
pub use pair::{pair, PairSeries};
pub use pdo::{formal_adjoint, PDOperator};
pub use quad::{QuadRule, QuadratureSpec};
