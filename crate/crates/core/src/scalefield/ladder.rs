//! Scale ladders: finite decreasing sequences of positive scales standing in
//! for a single vanishing width parameter.

use std::sync::Arc;

use crate::error::{Error, Result};

/// Smallest admissible ratio between consecutive ladder levels.
pub const MIN_LEVEL_RATIO: f64 = 1.5;
/// Largest admissible ratio between consecutive ladder levels.
pub const MAX_LEVEL_RATIO: f64 = 16.0;
/// Exponent cap guarding against underflow in `base^-k`.
pub const MAX_EXPONENT: u32 = 40;

/// A strictly decreasing finite sequence of positive scales.
///
/// Order fitting needs at least three levels, and the ratio between
/// consecutive levels must stay within `[MIN_LEVEL_RATIO, MAX_LEVEL_RATIO]`
/// so that log-log slopes are well conditioned.
#[derive(Debug, Clone)]
pub struct ScaleLadder {
    levels: Arc<[f64]>,
    base: f64,
}

impl ScaleLadder {
    /// Geometric ladder `base^-k` for `k = k_min..=k_max`.
    pub fn geometric(k_min: u32, k_max: u32, base: f64) -> Result<Self> {
        if k_min >= k_max {
            return Err(Error::InvalidLadder(format!(
                "k_min ({k_min}) must be smaller than k_max ({k_max})"
            )));
        }
        if !(base > 1.0) {
            return Err(Error::InvalidLadder(format!("base ({base}) must exceed 1")));
        }
        if k_max > MAX_EXPONENT {
            return Err(Error::InvalidLadder(format!(
                "k_max ({k_max}) exceeds the underflow guard {MAX_EXPONENT}"
            )));
        }
        let levels: Vec<f64> = (k_min..=k_max).map(|k| base.powi(-(k as i32))).collect();
        Self::from_levels(levels, base)
    }

    /// Validates an explicit level sequence.
    pub fn from_levels(levels: Vec<f64>, base: f64) -> Result<Self> {
        if levels.len() < 3 {
            return Err(Error::InvalidLadder(format!(
                "need at least 3 levels for order fitting, got {}",
                levels.len()
            )));
        }
        for window in levels.windows(2) {
            let (hi, lo) = (window[0], window[1]);
            if !(hi > 0.0 && lo > 0.0) {
                return Err(Error::InvalidLadder("levels must be positive".into()));
            }
            if lo >= hi {
                return Err(Error::InvalidLadder(
                    "levels must be strictly decreasing".into(),
                ));
            }
            let ratio = hi / lo;
            if !(MIN_LEVEL_RATIO..=MAX_LEVEL_RATIO).contains(&ratio) {
                return Err(Error::InvalidLadder(format!(
                    "level ratio {ratio} outside [{MIN_LEVEL_RATIO}, {MAX_LEVEL_RATIO}]"
                )));
            }
        }
        Ok(Self {
            levels: levels.into(),
            base,
        })
    }

    /// Default ladder `2^-4 .. 2^-10`: seven levels, fine enough for
    /// asymptotics without drowning in quadrature noise.
    pub fn default_ladder() -> Self {
        Self::geometric(4, 10, 2.0).expect("default ladder is valid")
    }

    /// The scale at `level` (level 0 is the coarsest).
    pub fn rho(&self, level: usize) -> f64 {
        self.levels[level]
    }

    /// Reciprocal scale, the large parameter `1/rho`.
    pub fn lambda(&self, level: usize) -> f64 {
        1.0 / self.levels[level]
    }

    /// Number of levels.
    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Geometric base used at construction.
    pub fn base(&self) -> f64 {
        self.base
    }

    /// All scales, coarsest first.
    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    /// Shared handle to the level slice, used by families tied to this ladder.
    pub(crate) fn shared_levels(&self) -> Arc<[f64]> {
        Arc::clone(&self.levels)
    }
}

/// Constructs a geometric scale ladder; rejects invalid ranges and bases.
pub fn make_ladder(k_min: u32, k_max: u32, base: f64) -> Result<ScaleLadder> {
    ScaleLadder::geometric(k_min, k_max, base)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_ladder_has_seven_levels() {
        let ladder = make_ladder(4, 10, 2.0).unwrap();
        assert_eq!(ladder.len(), 7);
        assert_eq!(ladder.rho(0), 2f64.powi(-4));
        assert_eq!(ladder.rho(6), 2f64.powi(-10));
    }

    #[test]
    fn minimal_three_level_ladder() {
        let ladder = make_ladder(0, 2, 2.0).unwrap();
        assert_eq!(ladder.levels(), &[1.0, 0.5, 0.25]);
    }

    #[test]
    fn rejects_inverted_range() {
        assert!(make_ladder(4, 3, 2.0).is_err());
        assert!(make_ladder(4, 4, 2.0).is_err());
    }

    #[test]
    fn rejects_bad_base() {
        assert!(make_ladder(0, 3, 1.0).is_err());
        assert!(make_ladder(0, 3, 0.5).is_err());
        // ratio outside the fit-stability window
        assert!(make_ladder(0, 3, 1.2).is_err());
        assert!(make_ladder(0, 3, 17.0).is_err());
    }

    #[test]
    fn rejects_underflow_range() {
        assert!(make_ladder(0, 41, 2.0).is_err());
    }

    #[test]
    fn lambda_is_reciprocal() {
        let ladder = make_ladder(4, 10, 2.0).unwrap();
        for k in 0..ladder.len() {
            assert_eq!(ladder.lambda(k), 1.0 / ladder.rho(k));
        }
    }
}
