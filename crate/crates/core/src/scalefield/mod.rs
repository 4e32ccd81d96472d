//! Scale ladders, mollifiers, and the delta families built from them.

pub mod family;
pub mod ladder;
pub mod mollifier;
pub mod profile;

pub use family::{model_delta, scaled_delta, ClassicalKernel, DeltaClass, SmoothFamily};
pub use ladder::{make_ladder, ScaleLadder};
pub use mollifier::{make_mollifier, Mollifier, MollifierKind};
pub use profile::Smoothness;
