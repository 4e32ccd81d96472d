//! Standard-part extraction: the scale-limit of a family on a grid, with
//! Cauchy diagnostics and the derivative-interchange check.

use serde::Serialize;

use super::grid::GridSpec;
use super::verdict::fit_growth;
use crate::calculus::{derivative, MultiIndex};
use crate::error::{Error, Result};
use crate::scalefield::SmoothFamily;

/// Absolute ceiling for the finiteness probe.
const FINITE_CAP: f64 = 1e8;
/// Growth slope beyond which a family counts as divergent.
const DIVERGENCE_SLOPE: f64 = 0.25;

/// Sampled standard part of a family.
#[derive(Debug, Clone, Serialize)]
pub struct StandardFunctionSample {
    pub grid: Vec<Vec<f64>>,
    /// Values at the finest level.
    pub values: Vec<f64>,
    /// Worst change between the two finest levels over the grid.
    pub cauchy_gap: f64,
    /// Finest-level samples of each derivative up to the requested order.
    pub derivative_samples: Vec<(String, Vec<f64>)>,
    /// Worst mismatch between finite differences of `values` and the
    /// sampled first derivatives (the interchange diagnostic).
    pub interchange_residual: f64,
    /// Spacing of the uniform sampling grid.
    pub spacing: f64,
}

/// Extracts the standard part of `f` on a uniform grid, together with
/// derivative samples up to order `k`.
///
/// The grid ignores jitter: the interchange check differentiates the value
/// grid by order-4 central differences, which needs uniform spacing.
pub fn standard_part(f: &SmoothFamily, grid: &GridSpec, k: u32) -> Result<StandardFunctionSample> {
    if !f.smoothness().allows(k) {
        return Err(Error::SmoothnessExceeded {
            requested: k as usize,
            declared: f.smoothness().to_string(),
        });
    }
    let uniform = GridSpec {
        jitter: 0.0,
        ..grid.clone()
    };
    let points = uniform.points();
    if points.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let dim = f.dim();
    let levels = f.levels();
    let rhos: Vec<f64> = (0..levels).map(|l| f.rho(l)).collect();

    // finiteness probe: per-alpha sampled magnitude must not trend upward
    let alphas = MultiIndex::all_up_to(dim, k);
    let mut deriv_families = Vec::with_capacity(alphas.len());
    for alpha in &alphas {
        deriv_families.push((alpha.clone(), derivative(f, alpha)?));
    }
    for (alpha, fam) in &deriv_families {
        let per_level: Vec<f64> = (0..levels)
            .map(|level| {
                points
                    .iter()
                    .map(|p| fam.eval(level, p).abs())
                    .fold(0.0f64, f64::max)
            })
            .collect();
        let finest = per_level[levels - 1];
        let slope = fit_growth(&rhos, &per_level);
        if finest > FINITE_CAP || (slope > DIVERGENCE_SLOPE && finest > 10.0) {
            return Err(Error::DivergentFamily {
                witness: format!(
                    "|d{alpha} {}| reaches {finest:.3e} with growth slope {slope:.2}",
                    f.label()
                ),
            });
        }
    }

    let values: Vec<f64> = points
        .iter()
        .map(|p| f.eval(levels - 1, p))
        .collect();
    let prev: Vec<f64> = points
        .iter()
        .map(|p| f.eval(levels - 2, p))
        .collect();
    let cauchy_gap = values
        .iter()
        .zip(&prev)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);

    let mut derivative_samples = Vec::new();
    for (alpha, fam) in &deriv_families {
        if alpha.is_zero() {
            continue;
        }
        let samples: Vec<f64> = points.iter().map(|p| fam.eval(levels - 1, p)).collect();
        derivative_samples.push((format!("{alpha}"), samples));
    }

    // interchange: order-4 central differences of the value grid against the
    // sampled first derivatives, on interior points
    let spacing = uniform.spacing();
    let n = uniform.points_per_axis.max(2);
    let mut interchange_residual = 0.0f64;
    if k >= 1 && n >= 5 {
        for axis in 0..dim {
            let alpha = MultiIndex::unit(dim, axis);
            let fam = &deriv_families
                .iter()
                .find(|(a, _)| *a == alpha)
                .expect("first derivatives enumerated")
                .1;
            let stride = n.pow((dim - 1 - axis) as u32);
            for (i, p) in points.iter().enumerate() {
                // interior along this axis?
                let coord = (i / stride) % n;
                if coord < 2 || coord + 2 >= n {
                    continue;
                }
                let fd = (-values[i + 2 * stride] + 8.0 * values[i + stride]
                    - 8.0 * values[i - stride]
                    + values[i - 2 * stride])
                    / (12.0 * spacing);
                let sampled = fam.eval(levels - 1, p);
                interchange_residual = interchange_residual.max((fd - sampled).abs());
            }
        }
    }

    Ok(StandardFunctionSample {
        grid: points,
        values,
        cauchy_gap,
        derivative_samples,
        interchange_residual,
        spacing,
    })
}
