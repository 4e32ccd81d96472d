//! Convolution of smooth families.

use std::sync::Arc;

use super::quad::QuadratureSpec;
use crate::error::{Error, Result};
use crate::scalefield::family::{FamilyInner, FamilyRepr, SmoothFamily};
use crate::scalefield::Smoothness;

/// `(f * g)(x) = int f(x-y) g(y) dy`; at least one factor must be compactly
/// supported at every level.
///
/// Kernel-convolution factors re-associate (`(K * h) * g = K * (h * g)`) so
/// the singular kernel stays the outermost layer and pairings keep their
/// structured fast path; the identity is classical for locally integrable
/// kernels with compact cofactors, and the commutativity tests cross-check
/// the quadrature realization.
pub fn convolve(f: &SmoothFamily, g: &SmoothFamily, quad: &QuadratureSpec) -> Result<SmoothFamily> {
    if f.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            got: g.dim(),
        });
    }
    if !f.same_ladder(g) {
        return Err(Error::LadderMismatch);
    }
    let f_compact = f.s_compactly_supported();
    let g_compact = g.s_compactly_supported();
    if !f_compact && !g_compact {
        return Err(Error::NeitherCompactlySupported);
    }
    // re-associate singular-kernel layers outward
    if let FamilyRepr::KernelConv {
        kernel, density, ..
    } = &f.inner.repr
    {
        if g_compact {
            let inner_conv = convolve(density, g, quad)?;
            return Ok(kernel_conv(Arc::clone(kernel), inner_conv, quad.clone()));
        }
    }
    if let FamilyRepr::KernelConv {
        kernel, density, ..
    } = &g.inner.repr
    {
        if f_compact {
            let inner_conv = convolve(density, f, quad)?;
            return Ok(kernel_conv(Arc::clone(kernel), inner_conv, quad.clone()));
        }
    }
    if let FamilyRepr::RayConv {
        density, direction, ..
    } = &f.inner.repr
    {
        if g_compact {
            let inner_conv = convolve(density, g, quad)?;
            return Ok(ray_conv(inner_conv, direction.clone(), quad.clone()));
        }
    }
    if let FamilyRepr::RayConv {
        density, direction, ..
    } = &g.inner.repr
    {
        if f_compact {
            let inner_conv = convolve(density, f, quad)?;
            return Ok(ray_conv(inner_conv, direction.clone(), quad.clone()));
        }
    }

    let n = f.levels();
    let support: Vec<f64> = (0..n)
        .map(|k| f.support_radius(k) + g.support_radius(k))
        .collect();
    let feature_scale: Vec<f64> = (0..n)
        .map(|k| f.feature_scale(k).max(g.feature_scale(k)))
        .collect();
    let feature_radius: Vec<f64> = (0..n)
        .map(|k| f.feature_radius(k) + g.feature_radius(k))
        .collect();
    // convolution inherits the better smoothness of the two factors
    let smoothness = match (f.smoothness(), g.smoothness()) {
        (Smoothness::Infinite, _) | (_, Smoothness::Infinite) => Smoothness::Infinite,
        (Smoothness::Finite(a), Smoothness::Finite(b)) => Smoothness::Finite(a.max(b)),
    };
    Ok(SmoothFamily::from_inner(FamilyInner {
        dim: f.dim(),
        rhos: f.rhos(),
        support,
        feature_scale,
        feature_radius,
        smoothness,
        label: format!("conv({}, {})", f.label(), g.label()),
        tail: None,
        sup_bound: None,
        delta_claim: None,
        derivative_of: None,
        repr: FamilyRepr::Conv {
            left: f.clone(),
            right: g.clone(),
            quad: quad.clone(),
        },
    }))
}

/// Wraps `K * density` with metadata describing the mollified kernel.
pub(crate) fn kernel_conv(
    kernel: Arc<dyn crate::scalefield::ClassicalKernel>,
    density: SmoothFamily,
    quad: QuadratureSpec,
) -> SmoothFamily {
    let n = density.levels();
    let feature_scale: Vec<f64> = (0..n).map(|k| density.feature_scale(k)).collect();
    let feature_radius: Vec<f64> = (0..n)
        .map(|k| density.support_radius(k) + density.feature_radius(k))
        .collect();
    let label = format!("({} * {})", kernel.label(), density.label());
    SmoothFamily::from_inner(FamilyInner {
        dim: density.dim(),
        rhos: density.rhos(),
        support: vec![f64::INFINITY; n],
        feature_scale,
        feature_radius,
        smoothness: density.smoothness(),
        label,
        tail: None,
        sup_bound: None,
        delta_claim: None,
        derivative_of: None,
        repr: FamilyRepr::KernelConv {
            kernel,
            density,
            quad,
        },
    })
}

/// Wraps `int_0^inf density(x - s dir) ds`.
pub(crate) fn ray_conv(
    density: SmoothFamily,
    direction: Vec<f64>,
    quad: QuadratureSpec,
) -> SmoothFamily {
    let n = density.levels();
    let feature_scale: Vec<f64> = (0..n).map(|k| density.feature_scale(k)).collect();
    let label = format!("ray({})", density.label());
    SmoothFamily::from_inner(FamilyInner {
        dim: density.dim(),
        rhos: density.rhos(),
        support: vec![f64::INFINITY; n],
        feature_scale,
        feature_radius: vec![f64::INFINITY; n],
        smoothness: density.smoothness(),
        label,
        tail: None,
        sup_bound: None,
        delta_claim: None,
        derivative_of: None,
        repr: FamilyRepr::RayConv {
            density,
            direction,
            quad,
        },
    })
}
