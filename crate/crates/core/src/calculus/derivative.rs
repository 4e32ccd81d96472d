//! Derivatives of smooth families: exact where the representation allows,
//! high-order central differences as a last resort.

use std::sync::Arc;

use super::pdo::PDOperator;
use super::MultiIndex;
use crate::error::{Error, Result};
use crate::scalefield::family::{FamilyInner, FamilyRepr, SmoothFamily};
use crate::scalefield::Smoothness;

/// Finite-difference step as a fraction of the level scale.
const FD_STEP_FRACTION: f64 = 1.0 / 32.0;
/// Evaluation radius assumed when checking for step underflow on families
/// with unbounded support.
const FD_DEFAULT_RADIUS: f64 = 8.0;

/// `d^alpha f` as a new family.
///
/// Profile-backed families (all shipped mollifiers and catalog kernels)
/// differentiate through the chain rule exactly; only opaque custom
/// evaluators fall back to order-4 central differences with step
/// `rho_k / 32`.
pub fn derivative(f: &SmoothFamily, alpha: &MultiIndex) -> Result<SmoothFamily> {
    if alpha.dim() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            got: alpha.dim(),
        });
    }
    if !f.smoothness().allows(alpha.order()) {
        return Err(Error::SmoothnessExceeded {
            requested: alpha.order() as usize,
            declared: f.smoothness().to_string(),
        });
    }
    if alpha.is_zero() {
        return Ok(f.clone());
    }
    let inner = derive_inner(f, alpha)?;
    Ok(SmoothFamily::from_inner(inner))
}

fn derive_inner(f: &SmoothFamily, alpha: &MultiIndex) -> Result<FamilyInner> {
    let order = alpha.order() as i32;
    let smoothness = match f.smoothness() {
        Smoothness::Infinite => Smoothness::Infinite,
        Smoothness::Finite(k) => Smoothness::Finite(k - alpha.order()),
    };
    let label = format!("d{alpha}[{}]", f.label());
    let levels = f.levels();
    let repr = match &f.inner.repr {
        FamilyRepr::Scaled {
            profile,
            amps,
            widths,
            center,
        } => {
            let new_profile = profile.derivative(alpha);
            let new_amps = amps
                .iter()
                .zip(widths)
                .map(|(a, w)| a / w.powi(order))
                .collect();
            FamilyRepr::Scaled {
                profile: new_profile,
                amps: new_amps,
                widths: widths.clone(),
                center: center.clone(),
            }
        }
        FamilyRepr::LinComb(terms) => {
            let mut new_terms = Vec::with_capacity(terms.len());
            for (c, fam) in terms {
                new_terms.push((*c, derivative(fam, alpha)?));
            }
            FamilyRepr::LinComb(new_terms)
        }
        FamilyRepr::Conv { left, right, quad } => {
            // put the derivative on a factor that differentiates exactly,
            // preferring the compactly supported one
            let prefer_left = matches!(
                left.inner.repr,
                FamilyRepr::Scaled { .. } | FamilyRepr::LinComb(_)
            ) && left.smoothness().allows(alpha.order());
            let prefer_right = matches!(
                right.inner.repr,
                FamilyRepr::Scaled { .. } | FamilyRepr::LinComb(_)
            ) && right.smoothness().allows(alpha.order());
            let on_left = match (prefer_left, prefer_right) {
                (true, true) => !right.s_compactly_supported() || left.s_compactly_supported(),
                (true, false) => true,
                (false, true) => false,
                (false, false) => left.smoothness().allows(alpha.order()),
            };
            if on_left {
                FamilyRepr::Conv {
                    left: derivative(left, alpha)?,
                    right: right.clone(),
                    quad: quad.clone(),
                }
            } else {
                FamilyRepr::Conv {
                    left: left.clone(),
                    right: derivative(right, alpha)?,
                    quad: quad.clone(),
                }
            }
        }
        FamilyRepr::KernelConv {
            kernel,
            density,
            quad,
        } => FamilyRepr::KernelConv {
            kernel: Arc::clone(kernel),
            density: derivative(density, alpha)?,
            quad: quad.clone(),
        },
        FamilyRepr::RayConv {
            density,
            direction,
            quad,
        } => FamilyRepr::RayConv {
            density: derivative(density, alpha)?,
            direction: direction.clone(),
            quad: quad.clone(),
        },
        FamilyRepr::Custom { eval } => {
            fd_step_check(f)?;
            let alpha = alpha.clone();
            let rhos = f.rhos();
            let eval = Arc::clone(eval);
            let stencil_alpha = alpha.clone();
            FamilyRepr::Custom {
                eval: Arc::new(move |level: usize, x: &[f64]| {
                    let h = rhos[level] * FD_STEP_FRACTION;
                    fd_eval(&eval, level, x, &stencil_alpha, h)
                }),
            }
        }
    };
    Ok(FamilyInner {
        dim: f.dim(),
        rhos: f.rhos(),
        support: (0..levels).map(|k| f.support_radius(k)).collect(),
        feature_scale: (0..levels).map(|k| f.feature_scale(k)).collect(),
        feature_radius: (0..levels).map(|k| f.feature_radius(k)).collect(),
        smoothness,
        label,
        tail: f.inner.tail.clone(),
        sup_bound: None,
        delta_claim: None,
        derivative_of: Some((f.clone(), alpha.clone())),
        repr,
    })
}

/// Step-underflow guard: the finest-level step must stay well above the
/// roundoff floor over the family's evaluation radius.
fn fd_step_check(f: &SmoothFamily) -> Result<()> {
    for level in 0..f.levels() {
        let step = f.rho(level) * FD_STEP_FRACTION;
        let radius = f
            .support_radius(level)
            .min(FD_DEFAULT_RADIUS)
            .max(1.0);
        let limit = 1e3 * f64::EPSILON * radius;
        if step < limit {
            return Err(Error::StepUnderflow {
                level,
                step,
                limit,
                radius,
            });
        }
    }
    Ok(())
}

/// Order-4 central differences composed axis by axis.
fn fd_eval(
    eval: &Arc<dyn Fn(usize, &[f64]) -> f64 + Send + Sync>,
    level: usize,
    x: &[f64],
    alpha: &MultiIndex,
    h: f64,
) -> f64 {
    // find the first axis still carrying derivatives
    let axis = match alpha.entries().iter().position(|&e| e > 0) {
        Some(a) => a,
        None => return eval(level, x),
    };
    let rest = alpha.lower(axis).expect("entry positive");
    let sample = |offset: f64| {
        let mut y = x.to_vec();
        y[axis] += offset;
        fd_eval(eval, level, &y, &rest, h)
    };
    if alpha.entry(axis) >= 2 {
        // apply one second-derivative stencil, recurse for the remainder
        let rest2 = rest.lower(axis).expect("entry >= 2");
        let sample2 = |offset: f64| {
            let mut y = x.to_vec();
            y[axis] += offset;
            fd_eval(eval, level, &y, &rest2, h)
        };
        (-sample2(2.0 * h) + 16.0 * sample2(h) - 30.0 * sample2(0.0) + 16.0 * sample2(-h)
            - sample2(-2.0 * h))
            / (12.0 * h * h)
    } else {
        (-sample(2.0 * h) + 8.0 * sample(h) - 8.0 * sample(-h) + sample(-2.0 * h)) / (12.0 * h)
    }
}

/// `P(d) f`: the pointwise sum of coefficient-weighted derivatives.
pub fn apply_pdo(p: &PDOperator, f: &SmoothFamily) -> Result<SmoothFamily> {
    if p.dim() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            got: p.dim(),
        });
    }
    if !f.smoothness().allows(p.order()) {
        return Err(Error::SmoothnessExceeded {
            requested: p.order() as usize,
            declared: f.smoothness().to_string(),
        });
    }
    let mut terms = Vec::with_capacity(p.terms().len());
    for (alpha, c) in p.terms() {
        terms.push((*c, derivative(f, alpha)?));
    }
    if terms.len() == 1 && terms[0].0 == 1.0 {
        return Ok(terms.swap_remove(0).1);
    }
    SmoothFamily::lin_comb(terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalefield::{make_ladder, make_mollifier, model_delta, MollifierKind};

    #[test]
    fn identity_multi_index_returns_same_family() {
        let ladder = make_ladder(4, 8, 2.0).unwrap();
        let bump = make_mollifier(MollifierKind::Bump, 1).unwrap();
        let delta = model_delta(&bump, &ladder).unwrap();
        let same = derivative(&delta, &MultiIndex::zero(1)).unwrap();
        let x = [0.01];
        assert_eq!(same.eval(2, &x), delta.eval(2, &x));
    }

    #[test]
    fn delta_derivative_is_odd_at_origin() {
        let ladder = make_ladder(4, 8, 2.0).unwrap();
        let bump = make_mollifier(MollifierKind::Bump, 1).unwrap();
        let delta = model_delta(&bump, &ladder).unwrap();
        let d = derivative(&delta, &MultiIndex::new(vec![1])).unwrap();
        for k in 0..ladder.len() {
            assert_eq!(d.eval(k, &[0.0]), 0.0);
            let x = 0.4 * ladder.rho(k);
            assert!((d.eval(k, &[x]) + d.eval(k, &[-x])).abs() < 1e-9 * d.eval(k, &[x]).abs());
        }
    }

    #[test]
    fn delta_derivative_scales_like_inverse_rho_squared() {
        // sup |delta_k'| grows like rho^{-d-1}
        let ladder = make_ladder(4, 8, 2.0).unwrap();
        let bump = make_mollifier(MollifierKind::Bump, 1).unwrap();
        let delta = model_delta(&bump, &ladder).unwrap();
        let d = derivative(&delta, &MultiIndex::new(vec![1])).unwrap();
        let probe = |k: usize| {
            let rho = ladder.rho(k);
            d.eval(k, &[0.5 * rho]).abs()
        };
        let ratio = probe(1) / probe(0);
        assert!((ratio - 4.0).abs() < 1e-9, "got {ratio}");
    }

    #[test]
    fn gaussian_second_derivative_matches_analytic() {
        use crate::scalefield::scaled_delta;
        let ladder = make_ladder(2, 4, 2.0).unwrap();
        let gauss = make_mollifier(MollifierKind::Gaussian, 1).unwrap();
        let fam = scaled_delta(&gauss, &ladder).unwrap();
        let d2 = derivative(&fam, &MultiIndex::new(vec![2])).unwrap();
        let norm = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
        for k in 0..ladder.len() {
            let rho = ladder.rho(k);
            let mut worst = 0.0f64;
            for i in 0..61 {
                let x = -3.0 + 0.1 * i as f64;
                let u = x / rho;
                let expect = norm / rho.powi(3) * (u * u - 1.0) * (-0.5 * u * u).exp();
                worst = worst.max((d2.eval(k, &[x]) - expect).abs() * rho.powi(3));
            }
            assert!(worst < 1e-8, "level {k}: {worst}");
        }
    }

    #[test]
    fn smoothness_cap_enforced() {
        use crate::scalefield::profile::{PolyBumpProfile, ProfileNd};
        use std::sync::Arc;
        let ladder = make_ladder(4, 6, 2.0).unwrap();
        let c1 = SmoothFamily::standard(
            &ladder,
            ProfileNd::Uni(Arc::new(PolyBumpProfile::new(2, 1.0))),
            1.0,
            1.0,
            vec![0.0],
            "c1-member",
        );
        assert!(derivative(&c1, &MultiIndex::new(vec![1])).is_ok());
        assert!(matches!(
            derivative(&c1, &MultiIndex::new(vec![2])),
            Err(Error::SmoothnessExceeded { .. })
        ));
    }

    #[test]
    fn fd_fallback_matches_analytic_on_custom_family() {
        let ladder = make_ladder(4, 6, 2.0).unwrap();
        let fam = SmoothFamily::custom(
            &ladder,
            1,
            |_level, x: &[f64]| (x[0] * 1.3).sin(),
            vec![f64::INFINITY; 3],
            vec![1.0; 3],
            Smoothness::Infinite,
            "sin(1.3x)",
        );
        let d = derivative(&fam, &MultiIndex::new(vec![1])).unwrap();
        let x = [0.37];
        let expect = 1.3 * (0.37f64 * 1.3).cos();
        assert!((d.eval(2, &x) - expect).abs() < 1e-8);
    }

    #[test]
    fn apply_identity_operator_is_noop() {
        let ladder = make_ladder(4, 8, 2.0).unwrap();
        let bump = make_mollifier(MollifierKind::Bump, 1).unwrap();
        let delta = model_delta(&bump, &ladder).unwrap();
        let p = PDOperator::identity(1);
        let out = apply_pdo(&p, &delta).unwrap();
        let x = [0.013];
        assert_eq!(out.eval(3, &x), delta.eval(3, &x));
    }
}
