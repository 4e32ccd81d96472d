//! Operator catalog and verified fundamental-solution entries.

use std::sync::Arc;

use super::kernels::{AbsHalfKernel, HeatKernel1p1, HeavisideKernel, LogKernel2d, NewtonKernel3d};
use crate::calculus::convolve::{kernel_conv, ray_conv};
use crate::calculus::{apply_pdo, MultiIndex, PDOperator, QuadratureSpec};
use crate::equivalence::{verify_delta, ApproxVerdict, TestBattery, VerdictPolicy};
use crate::error::{Error, Result};
use crate::scalefield::profile::{ProfileNd, SmoothStepProfile};
use crate::scalefield::{model_delta, Mollifier, MollifierKind, ScaleLadder, SmoothFamily};

/// Default transport speed when the catalog name carries no parameter.
pub const DEFAULT_TRANSPORT_SPEED: f64 = 1.0;

/// Catalog operator names.
pub const CATALOG_NAMES: [&str; 6] = [
    "ddx_1d",
    "laplace_1d",
    "laplace_2d",
    "laplace_3d",
    "heat_1p1",
    "transport_1p1",
];

/// Looks up a catalog operator by name. `transport_1p1` uses the default
/// unit speed; see [`transport_operator`] for other speeds.
pub fn pdo_catalog(name: &str) -> Result<PDOperator> {
    match name {
        "ddx_1d" => PDOperator::new(1, vec![(MultiIndex::new(vec![1]), 1.0)]),
        "laplace_1d" => PDOperator::new(1, vec![(MultiIndex::new(vec![2]), 1.0)]),
        "laplace_2d" => PDOperator::new(
            2,
            vec![
                (MultiIndex::new(vec![2, 0]), 1.0),
                (MultiIndex::new(vec![0, 2]), 1.0),
            ],
        ),
        "laplace_3d" => PDOperator::new(
            3,
            vec![
                (MultiIndex::new(vec![2, 0, 0]), 1.0),
                (MultiIndex::new(vec![0, 2, 0]), 1.0),
                (MultiIndex::new(vec![0, 0, 2]), 1.0),
            ],
        ),
        // coordinates (t, x)
        "heat_1p1" => PDOperator::new(
            2,
            vec![
                (MultiIndex::new(vec![1, 0]), 1.0),
                (MultiIndex::new(vec![0, 2]), -1.0),
            ],
        ),
        "transport_1p1" => Ok(transport_operator(DEFAULT_TRANSPORT_SPEED)),
        other => Err(Error::UnknownName(format!("catalog operator '{other}'"))),
    }
}

/// `d_t + c d_x` in coordinates `(t, x)`.
pub fn transport_operator(c: f64) -> PDOperator {
    PDOperator::new(
        2,
        vec![
            (MultiIndex::new(vec![1, 0]), 1.0),
            (MultiIndex::new(vec![0, 1]), c),
        ],
    )
    .expect("transport operator is valid")
}

/// A catalog operator with its mollified fundamental solution and the
/// verdict of the defining delta test.
#[derive(Debug, Clone)]
pub struct FundamentalSolutionEntry {
    pub name: String,
    pub operator: PDOperator,
    pub kernel_label: String,
    pub singularity: String,
    pub mollified: SmoothFamily,
    pub verdict: ApproxVerdict,
    pub validity: String,
}

/// Builds the mollified fundamental solution for a catalog operator without
/// running the delta verification (the solver path).
pub fn mollified_kernel_family(
    name: &str,
    ladder: &ScaleLadder,
    psi: &Mollifier,
    quad: &QuadratureSpec,
) -> Result<(PDOperator, SmoothFamily, String, String)> {
    let operator = pdo_catalog(name)?;
    if psi.kind() != MollifierKind::Bump {
        return Err(Error::InvalidMollifier(
            "fundamental solutions are mollified with the bump profile".into(),
        ));
    }
    if psi.dimension() != operator.dim() {
        return Err(Error::DimensionMismatch {
            expected: operator.dim(),
            got: psi.dimension(),
        });
    }
    let delta = model_delta(psi, ladder)?;
    let (family, kernel_label, singularity) = match name {
        "ddx_1d" => {
            // exact closed form: the smoothed step Psi(x / rho)
            let step = SmoothStepProfile::new(psi.normalization());
            let widths: Vec<f64> = ladder.levels().to_vec();
            let amps = vec![1.0; ladder.len()];
            let mut fam = SmoothFamily::scaled(
                ladder,
                ProfileNd::Uni(Arc::new(step)),
                amps,
                widths,
                "smoothed-step".into(),
            );
            {
                use std::sync::Arc as StdArc;
                let inner = StdArc::get_mut(&mut fam.inner).unwrap();
                // plateau at 1 beyond the transition: feature is the ramp
                inner.feature_radius = ladder.levels().to_vec();
                inner.sup_bound = Some(vec![1.0; ladder.len()]);
            }
            (fam, "H".to_string(), "jump at x = 0".to_string())
        }
        "laplace_1d" => {
            let k = Arc::new(AbsHalfKernel);
            let label = k.label();
            let sing = k.singularity();
            (kernel_conv(k, delta, quad.clone()), label, sing)
        }
        "laplace_2d" => {
            let k = Arc::new(LogKernel2d);
            let label = k.label();
            let sing = k.singularity();
            (kernel_conv(k, delta, quad.clone()), label, sing)
        }
        "laplace_3d" => {
            let k = Arc::new(NewtonKernel3d);
            let label = k.label();
            let sing = k.singularity();
            (kernel_conv(k, delta, quad.clone()), label, sing)
        }
        "heat_1p1" => {
            let k = Arc::new(HeatKernel1p1);
            let label = k.label();
            let sing = k.singularity();
            (kernel_conv(k, delta, quad.clone()), label, sing)
        }
        "transport_1p1" => {
            let fam = ray_conv(
                delta,
                vec![1.0, DEFAULT_TRANSPORT_SPEED],
                quad.clone(),
            );
            (
                fam,
                "H(t) along (1,c)".to_string(),
                "mollified line measure on the characteristic ray".to_string(),
            )
        }
        other => return Err(Error::UnknownName(format!("catalog operator '{other}'"))),
    };
    Ok((operator, family, kernel_label, singularity))
}

/// The smoothed Heaviside kernel used by `ddx_1d` solves; exported for the
/// direct-path cross checks.
pub fn heaviside_kernel() -> Arc<HeavisideKernel> {
    Arc::new(HeavisideKernel)
}

/// Builds and verifies a catalog entry: `P(d) E_rho` must pass the order-0
/// delta battery. Verification failure aborts with a diagnostic.
pub fn fundamental_solution(
    name: &str,
    ladder: &ScaleLadder,
    psi: &Mollifier,
    quad: &QuadratureSpec,
    policy: &VerdictPolicy,
) -> Result<FundamentalSolutionEntry> {
    let (operator, mollified, kernel_label, singularity) =
        mollified_kernel_family(name, ladder, psi, quad)?;
    let image = apply_pdo(&operator, &mollified)?;
    let battery = TestBattery::standard(operator.dim(), ladder)?;
    let verdict = verify_delta(&image, &battery, quad, policy)?;
    if !verdict.pass {
        return Err(Error::VerificationFailed {
            name: name.to_string(),
            detail: format!(
                "P(d)E_rho failed the order-0 delta test: finest residual {:.3e} \
                 (tolerance {:.3e}), fitted order {:.2} (min {:.2}), witness {}",
                verdict.finest_residual(),
                verdict.tolerance_at_finest,
                verdict.fitted_order,
                verdict.min_order,
                verdict.witness
            ),
        });
    }
    let validity = match name {
        "ddx_1d" => "exact antiderivative of the mollifier".to_string(),
        "transport_1p1" => "mollified in both variables along the ray".to_string(),
        _ => "mollified by singularity-graded quadrature".to_string(),
    };
    Ok(FundamentalSolutionEntry {
        name: name.to_string(),
        operator,
        kernel_label,
        singularity,
        mollified,
        verdict,
        validity,
    })
}
