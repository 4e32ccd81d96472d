//! The approximation relations: closeness of derivatives on compacts,
//! closeness of all test pairings, delta verification, and membership in
//! the distribution space.

use rayon::prelude::*;

use super::battery::{BatteryClass, TestBattery};
use super::grid::GridSpec;
use super::verdict::{fit_growth, ApproxVerdict, MembershipVerdict, VerdictPolicy};
use crate::calculus::{derivative, pair, MultiIndex, QuadratureSpec};
use crate::error::{Error, Result};
use crate::scalefield::{DeltaClass, SmoothFamily};

/// `f ~ g` in the C^k sense: all derivatives up to order `k` agree on a
/// sampled ball, with residuals decreasing down the ladder.
pub fn approx_ck(
    f: &SmoothFamily,
    g: &SmoothFamily,
    k: u32,
    grid: &GridSpec,
    policy: &VerdictPolicy,
) -> Result<ApproxVerdict> {
    if f.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            got: g.dim(),
        });
    }
    if !f.same_ladder(g) {
        return Err(Error::LadderMismatch);
    }
    for fam in [f, g] {
        if !fam.smoothness().allows(k) {
            return Err(Error::SmoothnessExceeded {
                requested: k as usize,
                declared: fam.smoothness().to_string(),
            });
        }
    }
    let points = grid.points();
    if points.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let levels = f.levels();
    let alphas = MultiIndex::all_up_to(f.dim(), k);
    let mut residuals = vec![0.0f64; levels];
    let mut witness = String::new();
    for alpha in &alphas {
        let fa = derivative(f, alpha)?;
        let ga = derivative(g, alpha)?;
        let per_level: Vec<(f64, usize)> = (0..levels)
            .into_par_iter()
            .map(|level| {
                let mut worst = 0.0f64;
                let mut at = 0usize;
                for (i, p) in points.iter().enumerate() {
                    let d = (fa.eval(level, p) - ga.eval(level, p)).abs();
                    if d > worst {
                        worst = d;
                        at = i;
                    }
                }
                (worst, at)
            })
            .collect();
        for (level, (worst, at)) in per_level.iter().enumerate() {
            if *worst > residuals[level] {
                residuals[level] = *worst;
                if level == levels - 1 {
                    witness = format!("alpha={alpha} at x={:?}", points[*at]);
                }
            }
        }
    }
    if witness.is_empty() {
        witness = "all residuals at noise floor".into();
    }
    let rhos: Vec<f64> = (0..levels).map(|k| f.rho(k)).collect();
    Ok(ApproxVerdict::from_residuals(
        &rhos,
        residuals,
        vec![0.0; levels],
        witness,
        policy,
    ))
}

/// `f ~ g` in the distributional sense: every battery pairing agrees.
pub fn approx_dprime(
    f: &SmoothFamily,
    g: &SmoothFamily,
    battery: &TestBattery,
    quad: &QuadratureSpec,
    policy: &VerdictPolicy,
) -> Result<ApproxVerdict> {
    if battery.class() != BatteryClass::CInfc {
        return Err(Error::BatteryClassMismatch {
            claim: "distributional closeness".into(),
            required: BatteryClass::CInfc.name().into(),
            got: battery.class().name().into(),
        });
    }
    let levels = f.levels();
    let per_member: Vec<Result<(String, Vec<f64>, Vec<f64>)>> = battery
        .members()
        .par_iter()
        .map(|m| {
            let pf = pair(f, &m.family, quad)?;
            let pg = pair(g, &m.family, quad)?;
            let diffs: Vec<f64> = pf
                .values
                .iter()
                .zip(&pg.values)
                .map(|(a, b)| (a - b).abs())
                .collect();
            let errs: Vec<f64> = pf
                .errors
                .iter()
                .zip(&pg.errors)
                .map(|(a, b)| a + b)
                .collect();
            Ok((m.label.clone(), diffs, errs))
        })
        .collect();
    let mut residuals = vec![0.0f64; levels];
    let mut quad_errors = vec![0.0f64; levels];
    let mut witness = String::new();
    for entry in per_member {
        let (label, diffs, errs) = entry?;
        for level in 0..levels {
            quad_errors[level] = quad_errors[level].max(errs[level]);
            if diffs[level] > residuals[level] {
                residuals[level] = diffs[level];
                if level == levels - 1 {
                    witness = label.clone();
                }
            }
        }
    }
    if witness.is_empty() {
        witness = "all pairings at noise floor".into();
    }
    let rhos: Vec<f64> = (0..levels).map(|k| f.rho(k)).collect();
    Ok(ApproxVerdict::from_residuals(
        &rhos,
        residuals,
        quad_errors,
        witness,
        policy,
    ))
}

/// Verifies a delta-function claim: every battery pairing approaches the
/// member's value at the origin.
pub fn verify_delta(
    delta: &SmoothFamily,
    battery: &TestBattery,
    quad: &QuadratureSpec,
    policy: &VerdictPolicy,
) -> Result<ApproxVerdict> {
    if let Some(claim) = delta.delta_claim() {
        let required = match claim {
            DeltaClass::Order0 => BatteryClass::C0SContinuous,
            DeltaClass::C1 => BatteryClass::C1c,
            DeltaClass::General => BatteryClass::CInfc,
        };
        if battery.class() < required {
            return Err(Error::BatteryClassMismatch {
                claim: claim.name().into(),
                required: required.name().into(),
                got: battery.class().name().into(),
            });
        }
    }
    let levels = delta.levels();
    let per_member: Vec<Result<(String, Vec<f64>, Vec<f64>)>> = battery
        .members()
        .par_iter()
        .map(|m| {
            let target = m.value_at_origin();
            let p = pair(delta, &m.family, quad)?;
            let diffs: Vec<f64> = p.values.iter().map(|v| (v - target).abs()).collect();
            Ok((m.label.clone(), diffs, p.errors))
        })
        .collect();
    let mut residuals = vec![0.0f64; levels];
    let mut quad_errors = vec![0.0f64; levels];
    let mut witness = String::new();
    for entry in per_member {
        let (label, diffs, errs) = entry?;
        for level in 0..levels {
            quad_errors[level] = quad_errors[level].max(errs[level]);
            if diffs[level] > residuals[level] {
                residuals[level] = diffs[level];
                if level == levels - 1 {
                    witness = label.clone();
                }
            }
        }
    }
    if witness.is_empty() {
        witness = "all pairings at noise floor".into();
    }
    let rhos: Vec<f64> = (0..levels).map(|k| delta.rho(k)).collect();
    Ok(ApproxVerdict::from_residuals(
        &rhos,
        residuals,
        quad_errors,
        witness,
        policy,
    ))
}

/// Maximum growth slope tolerated before a pairing ladder counts as
/// divergent.
pub const MEMBERSHIP_MAX_SLOPE: f64 = 0.1;

/// Membership in the distribution space: every battery pairing stays
/// bounded down the ladder (no divergence trend in the log-log fit).
pub fn dprime_membership(
    f: &SmoothFamily,
    battery: &TestBattery,
    quad: &QuadratureSpec,
) -> Result<MembershipVerdict> {
    if battery.class() != BatteryClass::CInfc {
        return Err(Error::BatteryClassMismatch {
            claim: "distribution-space membership".into(),
            required: BatteryClass::CInfc.name().into(),
            got: battery.class().name().into(),
        });
    }
    let rhos: Vec<f64> = (0..f.levels()).map(|k| f.rho(k)).collect();
    let per_member: Vec<Result<(String, Vec<f64>)>> = battery
        .members()
        .par_iter()
        .map(|m| {
            let p = pair(f, &m.family, quad)?;
            Ok((m.label.clone(), p.values))
        })
        .collect();
    let mut pairings = Vec::with_capacity(battery.members().len());
    let mut worst_slope = f64::NEG_INFINITY;
    let mut witness = String::new();
    for entry in per_member {
        let (label, values) = entry?;
        let slope = fit_growth(&rhos, &values);
        if slope > worst_slope {
            worst_slope = slope;
            witness = label.clone();
        }
        pairings.push((label, values));
    }
    Ok(MembershipVerdict {
        rhos,
        pairings,
        growth_slope: worst_slope,
        pass: worst_slope <= MEMBERSHIP_MAX_SLOPE,
        witness,
    })
}

/// Per-level continuity modulus table.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ModulusTable {
    pub radii: Vec<f64>,
    /// `modulus[level][radius index]`.
    pub modulus: Vec<Vec<f64>>,
    /// Fitted decay order of the finest-level modulus in the probe radius.
    pub fitted_order: f64,
    pub s_continuous: bool,
}

/// Continuity modulus across scales: worst perturbation response at the
/// given points for each probe radius.
pub fn s_modulus(f: &SmoothFamily, points: &[Vec<f64>], radii: &[f64]) -> Result<ModulusTable> {
    if points.is_empty() || radii.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let dim = f.dim();
    let levels = f.levels();
    // probe offsets: axis directions and the main diagonal, two magnitudes
    let mut dirs: Vec<Vec<f64>> = Vec::new();
    for axis in 0..dim {
        for sign in [-1.0, 1.0] {
            let mut d = vec![0.0; dim];
            d[axis] = sign;
            dirs.push(d);
        }
    }
    let diag = 1.0 / (dim as f64).sqrt();
    dirs.push(vec![diag; dim]);
    dirs.push(vec![-diag; dim]);
    let mut modulus = vec![vec![0.0f64; radii.len()]; levels];
    for level in 0..levels {
        for (ri, &r) in radii.iter().enumerate() {
            let mut worst = 0.0f64;
            for x in points {
                let fx = f.eval(level, x);
                for d in &dirs {
                    for frac in [0.5, 1.0] {
                        let y: Vec<f64> = x
                            .iter()
                            .zip(d)
                            .map(|(xi, di)| xi + frac * r * di)
                            .collect();
                        worst = worst.max((f.eval(level, &y) - fx).abs());
                    }
                }
            }
            modulus[level][ri] = worst;
        }
    }
    let finest = &modulus[levels - 1];
    let fitted_order = super::verdict::fit_order(radii, finest, &vec![0.0; radii.len()]);
    Ok(ModulusTable {
        radii: radii.to_vec(),
        modulus,
        fitted_order,
        s_continuous: fitted_order >= 0.5 || finest.iter().all(|&m| m <= 1e-13),
    })
}

/// Convenience for the default centered sampling grid used in residual
/// checks over a ball.
pub fn default_grid(dim: usize, radius: f64) -> GridSpec {
    let points = match dim {
        1 => 33,
        2 => 13,
        _ => 7,
    };
    GridSpec::centered(dim, radius, points)
}
