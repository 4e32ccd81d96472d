//! Convergence verdicts: residual ladders, fitted orders, pass/fail rules.

use serde::Serialize;

/// Pass thresholds for an approximation claim.
///
/// A claim passes when the finest-level residual is at or below
/// `tolerance_at_finest` and the fitted order certifies a genuinely
/// shrinking residual. The defaults suit order-one mechanisms observed at
/// `rho = 2^-10` with order-one constants.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct VerdictPolicy {
    pub tolerance_at_finest: f64,
    pub min_order: f64,
}

impl Default for VerdictPolicy {
    fn default() -> Self {
        VerdictPolicy {
            tolerance_at_finest: 1e-3,
            min_order: 0.5,
        }
    }
}

impl VerdictPolicy {
    pub fn with_tolerance(tolerance_at_finest: f64, min_order: f64) -> Self {
        VerdictPolicy {
            tolerance_at_finest,
            min_order,
        }
    }
}

/// Residuals below this are treated as machine noise: the order fit skips
/// them and a fully-noise ladder counts as converged.
pub const NOISE_FLOOR: f64 = 1e-13;

/// The measurable realization of an approximation statement: per-level
/// residuals, the least-squares slope of log residual against log scale,
/// and the verdict.
#[derive(Debug, Clone, Serialize)]
pub struct ApproxVerdict {
    pub rhos: Vec<f64>,
    pub residuals: Vec<f64>,
    pub quad_errors: Vec<f64>,
    pub fitted_order: f64,
    pub pass: bool,
    pub tolerance_at_finest: f64,
    pub min_order: f64,
    pub witness: String,
}

impl ApproxVerdict {
    /// Assembles a verdict from a residual ladder.
    pub fn from_residuals(
        rhos: &[f64],
        residuals: Vec<f64>,
        quad_errors: Vec<f64>,
        witness: String,
        policy: &VerdictPolicy,
    ) -> Self {
        debug_assert_eq!(rhos.len(), residuals.len());
        let fitted_order = fit_order(rhos, &residuals, &quad_errors);
        let finest = *residuals.last().expect("at least one level");
        let pass = finest <= policy.tolerance_at_finest
            && (fitted_order >= policy.min_order || finest <= NOISE_FLOOR);
        ApproxVerdict {
            rhos: rhos.to_vec(),
            residuals,
            quad_errors,
            fitted_order,
            pass,
            tolerance_at_finest: policy.tolerance_at_finest,
            min_order: policy.min_order,
            witness,
        }
    }

    pub fn finest_residual(&self) -> f64 {
        *self.residuals.last().expect("at least one level")
    }
}

/// Least-squares slope of `log residual` against `log rho`, skipping levels
/// dominated by quadrature noise. Returns infinity when everything sits at
/// the noise floor (exact agreement).
pub fn fit_order(rhos: &[f64], residuals: &[f64], quad_errors: &[f64]) -> f64 {
    let mut xs = Vec::with_capacity(rhos.len());
    let mut ys = Vec::with_capacity(rhos.len());
    for (i, (&rho, &res)) in rhos.iter().zip(residuals).enumerate() {
        let noise = quad_errors.get(i).copied().unwrap_or(0.0);
        if res <= NOISE_FLOOR.max(3.0 * noise) {
            continue;
        }
        xs.push(rho.ln());
        ys.push(res.ln());
    }
    if xs.len() < 2 {
        let finest = residuals.last().copied().unwrap_or(0.0);
        return if finest <= NOISE_FLOOR {
            f64::INFINITY
        } else {
            0.0
        };
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if sxx == 0.0 {
        return 0.0;
    }
    sxy / sxx
}

/// Boundedness verdict for the distribution-space membership test.
#[derive(Debug, Clone, Serialize)]
pub struct MembershipVerdict {
    pub rhos: Vec<f64>,
    /// Per-member pairing magnitude ladders.
    pub pairings: Vec<(String, Vec<f64>)>,
    /// Worst fitted growth slope of log |pairing| against log (1/rho).
    pub growth_slope: f64,
    pub pass: bool,
    pub witness: String,
}

/// Growth slope of `log |values|` against `log lambda = -log rho`; benign
/// oscillation around a bounded value fits a slope near zero.
pub fn fit_growth(rhos: &[f64], values: &[f64]) -> f64 {
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale <= NOISE_FLOOR {
        return 0.0;
    }
    let floor = scale * 1e-12;
    let xs: Vec<f64> = rhos.iter().map(|r| -r.ln()).collect();
    let ys: Vec<f64> = values.iter().map(|v| v.abs().max(floor).ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ladder() -> Vec<f64> {
        (4..=10).map(|k| 2f64.powi(-k)).collect()
    }

    #[test]
    fn clean_second_order_fit() {
        let rhos = ladder();
        let residuals: Vec<f64> = rhos.iter().map(|r| 0.3 * r * r).collect();
        let order = fit_order(&rhos, &residuals, &vec![0.0; 7]);
        assert!((order - 2.0).abs() < 1e-9);
    }

    #[test]
    fn zero_residuals_pass_reflexively() {
        let rhos = ladder();
        let v = ApproxVerdict::from_residuals(
            &rhos,
            vec![0.0; 7],
            vec![0.0; 7],
            "self".into(),
            &VerdictPolicy::default(),
        );
        assert!(v.pass);
        assert!(v.fitted_order.is_infinite());
    }

    #[test]
    fn diverging_residuals_fail() {
        let rhos = ladder();
        let residuals: Vec<f64> = rhos.iter().map(|r| 0.01 / r).collect();
        let v = ApproxVerdict::from_residuals(
            &rhos,
            residuals,
            vec![0.0; 7],
            "delta-vs-zero".into(),
            &VerdictPolicy::default(),
        );
        assert!(!v.pass);
        assert!(v.fitted_order < 0.0);
    }

    #[test]
    fn noise_levels_are_skipped_in_fit() {
        let rhos = ladder();
        // order-2 mechanism until it hits quadrature noise at 1e-11
        let residuals: Vec<f64> = rhos.iter().map(|r| (0.3 * r * r).max(3e-14)).collect();
        let quad_err = vec![1e-14; 7];
        let order = fit_order(&rhos, &residuals, &quad_err);
        assert!(order > 1.9, "order {order}");
    }

    #[test]
    fn bounded_oscillation_has_flat_growth() {
        let rhos = ladder();
        let values: Vec<f64> = (0..7).map(|i| 1.0 + 0.3 * ((i * 37) as f64).sin()).collect();
        let slope = fit_growth(&rhos, &values);
        assert!(slope.abs() < 0.1, "slope {slope}");
    }

    #[test]
    fn linear_growth_detected() {
        let rhos = ladder();
        let values: Vec<f64> = rhos.iter().map(|r| 0.2 / r).collect();
        let slope = fit_growth(&rhos, &values);
        assert!((slope - 1.0).abs() < 1e-9);
    }
}
