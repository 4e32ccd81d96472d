//! Approximation relations, delta verification, and standard parts.

pub mod approx;
pub mod battery;
pub mod grid;
pub mod stpart;
pub mod verdict;

pub use approx::{
    approx_ck, approx_dprime, default_grid, dprime_membership, s_modulus, verify_delta,
    ModulusTable, MEMBERSHIP_MAX_SLOPE,
};
pub use battery::{BatteryClass, BatteryDescription, TestBattery, TestMember, BATTERY_VERSION};
pub use grid::GridSpec;
pub use stpart::{standard_part, StandardFunctionSample};
pub use verdict::{ApproxVerdict, MembershipVerdict, VerdictPolicy};
