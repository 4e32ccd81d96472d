//! Pairings `int f_k g_k` with per-level quadrature error estimates.
//!
//! Kernel-convolution families are paired through Fubini: the pairing of
//! `K * h` against a test function becomes the integral of `h` against the
//! potential `y -> int K(z) phi(y+z) dz`, with derivatives moved onto the
//! test function by integration by parts whenever it is smooth enough. That
//! keeps every singular integral one-dimensional in the radial direction.

use crate::calculus::quad::{
    build_axis, integrate_nd, radial_rule, sphere_rule, QuadratureSpec,
};
use crate::calculus::MultiIndex;
use crate::error::{Error, Result};
use crate::scalefield::family::{feature_cell, FamilyRepr, SmoothFamily, MAX_DIM};
use crate::scalefield::ClassicalKernel;

/// Per-level pairing values and quadrature-error estimates.
#[derive(Debug, Clone)]
pub struct PairSeries {
    pub values: Vec<f64>,
    pub errors: Vec<f64>,
}

/// Computes `s_k = int f_k g_k` for every ladder level.
pub fn pair(f: &SmoothFamily, g: &SmoothFamily, quad: &QuadratureSpec) -> Result<PairSeries> {
    if f.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            got: g.dim(),
        });
    }
    if !f.same_ladder(g) {
        return Err(Error::LadderMismatch);
    }
    if quad.levels() != f.levels() {
        return Err(Error::InvalidArgument(format!(
            "quadrature spec has {} levels, families have {}",
            quad.levels(),
            f.levels()
        )));
    }
    let mut values = Vec::with_capacity(f.levels());
    let mut errors = Vec::with_capacity(f.levels());
    for level in 0..f.levels() {
        quad.check_resolution(level, f.feature_scale(level))?;
        quad.check_resolution(level, g.feature_scale(level))?;
        let (v, e) = pair_level(f, g, quad, level)?;
        values.push(v);
        errors.push(e);
    }
    Ok(PairSeries { values, errors })
}

pub(crate) fn pair_level(
    f: &SmoothFamily,
    g: &SmoothFamily,
    quad: &QuadratureSpec,
    level: usize,
) -> Result<(f64, f64)> {
    // distribute over linear combinations first
    if let FamilyRepr::LinComb(terms) = &f.inner.repr {
        let mut value = 0.0;
        let mut error = 0.0;
        for (c, term) in terms {
            let (v, e) = pair_level(term, g, quad, level)?;
            value += c * v;
            error += c.abs() * e;
        }
        return Ok((value, error));
    }
    if let FamilyRepr::LinComb(terms) = &g.inner.repr {
        let mut value = 0.0;
        let mut error = 0.0;
        for (c, term) in terms {
            let (v, e) = pair_level(f, term, quad, level)?;
            value += c * v;
            error += c.abs() * e;
        }
        return Ok((value, error));
    }
    // structured fast paths: flip kernel/ray convolutions against compact
    // cofactors
    let g_compact = g.support_radius(level).is_finite();
    let f_compact = f.support_radius(level).is_finite();
    if let FamilyRepr::KernelConv {
        kernel, density, ..
    } = &f.inner.repr
    {
        if g_compact && density.support_radius(level).is_finite() {
            return flip_kernel_pair(kernel.as_ref(), density, g, quad, level);
        }
    }
    if let FamilyRepr::KernelConv {
        kernel, density, ..
    } = &g.inner.repr
    {
        if f_compact && density.support_radius(level).is_finite() {
            return flip_kernel_pair(kernel.as_ref(), density, f, quad, level);
        }
    }
    if let FamilyRepr::RayConv {
        density, direction, ..
    } = &f.inner.repr
    {
        if g_compact && density.support_radius(level).is_finite() {
            return flip_ray_pair(density, direction, g, quad, level);
        }
    }
    if let FamilyRepr::RayConv {
        density, direction, ..
    } = &g.inner.repr
    {
        if f_compact && density.support_radius(level).is_finite() {
            return flip_ray_pair(density, direction, f, quad, level);
        }
    }
    plain_pair(f, g, quad, level)
}

// ---------------------------------------------------------------------------
// Plain path
// ---------------------------------------------------------------------------

fn plain_pair(
    f: &SmoothFamily,
    g: &SmoothFamily,
    quad: &QuadratureSpec,
    level: usize,
) -> Result<(f64, f64)> {
    let dim = f.dim();
    let rf = f.support_radius(level);
    let rg = g.support_radius(level);
    let mut tail_err = 0.0;
    let radius = if rf.is_finite() || rg.is_finite() {
        rf.min(rg)
    } else {
        let r = *quad
            .truncation_radius
            .get(level)
            .ok_or_else(|| Error::UnboundedIntegrand("no truncation radius given".into()))?;
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::UnboundedIntegrand(
                "invalid truncation radius".into(),
            ));
        }
        // certified tail: each factor's truncated mass times the cofactor's
        // sup bound
        let f_tail = f.tail_bound(level, r);
        let g_tail = g.tail_bound(level, r);
        let f_sup = f.sup_bound(level);
        let g_sup = g.sup_bound(level);
        match (f_tail, g_tail, f_sup, g_sup) {
            (Some(ft), Some(gt), Some(fs), Some(gs)) => {
                tail_err = ft * gs + gt * fs;
            }
            (Some(ft), None, _, Some(gs)) => {
                tail_err = ft * gs;
            }
            (None, Some(gt), Some(fs), _) => {
                tail_err = gt * fs;
            }
            _ => {
                return Err(Error::UnboundedIntegrand(
                    "neither factor certifies a truncation tail bound".into(),
                ))
            }
        }
        r
    };
    let zeros = vec![0.0; dim];
    let mut axes = Vec::with_capacity(dim);
    for axis in 0..dim {
        let mut feats = Vec::new();
        for fam in [f, g] {
            if let Some(fi) =
                crate::scalefield::family::family_features(fam, quad, level, &zeros, axis, (-radius, radius))
            {
                feats.push(fi);
            }
        }
        axes.push(build_axis(-radius, radius, quad.smooth_h(), &feats, &[]));
    }
    let (value, err) = integrate_nd(
        &mut |x: &[f64]| f.eval(level, x) * g.eval(level, x),
        &axes,
        quad.rule,
    );
    Ok((value, err + tail_err))
}

// ---------------------------------------------------------------------------
// Kernel-convolution flip
// ---------------------------------------------------------------------------

/// Walks derivative provenance down to the original family.
fn derivative_root(fam: &SmoothFamily) -> (SmoothFamily, MultiIndex) {
    let mut current = fam.clone();
    let mut alpha = MultiIndex::zero(fam.dim());
    while let Some((parent, step)) = current.derivative_provenance() {
        alpha = alpha.plus(step);
        let next = parent.clone();
        current = next;
    }
    (current, alpha)
}

/// Pairing of `(K * h)` against a compact test function `phi`:
/// `int h(y) W(y) dy` with `W(y) = int K(z) phi(y+z) dz`. When `h` is a
/// derivative `d^alpha base` and `phi` admits `alpha` derivatives, the
/// derivative moves onto `phi` and the outer density becomes `base`.
fn flip_kernel_pair(
    kernel: &dyn ClassicalKernel,
    density: &SmoothFamily,
    phi: &SmoothFamily,
    quad: &QuadratureSpec,
    level: usize,
) -> Result<(f64, f64)> {
    let dim = phi.dim();
    let (base, alpha) = derivative_root(density);
    let use_ibp = !alpha.is_zero() && phi.smoothness().allows(alpha.order());
    let (outer, eff_alpha, sign) = if use_ibp {
        let s = if alpha.order() % 2 == 0 { 1.0 } else { -1.0 };
        (base, alpha, s)
    } else {
        (density.clone(), MultiIndex::zero(dim), 1.0)
    };
    // test-function derivative evaluator
    let phi_deriv = build_deriv_evaluator(phi, &eff_alpha)?;

    let r_outer = outer.support_radius(level);
    if !r_outer.is_finite() {
        return plain_pair_fallback(kernel, density, phi, quad, level);
    }
    // potential mesh: radial x sphere around the kernel singularity, domain
    // wide enough to cover supp(phi) from any outer point
    let r_phi = phi.support_radius(level);
    let r_pot = r_outer
        + if r_phi.is_finite() {
            r_phi + phi.feature_radius(level).min(r_phi)
        } else {
            *quad
                .truncation_radius
                .get(level)
                .ok_or_else(|| Error::UnboundedIntegrand("no truncation radius".into()))?
        };
    let h_phi = feature_cell(quad, level, phi.feature_scale(level));
    let base_panels = ((r_pot / h_phi).ceil() as usize).clamp(8, 96);
    let kmesh = KernelMesh::build(kernel, dim, r_pot, base_panels, 1.0);
    let kmesh_coarse = KernelMesh::build(kernel, dim, r_pot, (base_panels / 2).max(4), 0.5);

    let potential = |y: &[f64], mesh: &KernelMesh| -> f64 {
        let mut arg = [0.0f64; MAX_DIM];
        let mut acc = 0.0;
        for (z, wk) in &mesh.nodes {
            let a = &mut arg[..dim];
            for i in 0..dim {
                a[i] = y[i] + z[i];
            }
            acc += wk * phi_deriv(level, a);
        }
        sign * acc
    };

    // outer tensor mesh over the density support
    let zeros = vec![0.0; dim];
    let mut axes = Vec::with_capacity(dim);
    for axis in 0..dim {
        let mut feats = Vec::new();
        if let Some(fi) = crate::scalefield::family::family_features(
            &outer,
            quad,
            level,
            &zeros,
            axis,
            (-r_outer, r_outer),
        ) {
            feats.push(fi);
        }
        axes.push(build_axis(-r_outer, r_outer, quad.smooth_h(), &feats, &[]));
    }
    let (value, outer_err) = integrate_nd(
        &mut |y: &[f64]| outer.eval(level, y) * potential(y, &kmesh),
        &axes,
        quad.rule,
    );
    // potential-mesh error: probe at the density center against the coarse
    // mesh, scaled by the outer absolute mass
    let probe = zeros.clone();
    let v_fine = potential(&probe, &kmesh);
    let v_coarse = potential(&probe, &kmesh_coarse);
    let (abs_mass, _) = integrate_nd(
        &mut |y: &[f64]| outer.eval(level, y).abs(),
        &axes,
        quad.rule,
    );
    let pot_err = (v_fine - v_coarse).abs() * abs_mass;
    Ok((value, outer_err + pot_err))
}

/// Falls back to the generic path, treating the kernel convolution as an
/// opaque pointwise evaluator.
fn plain_pair_fallback(
    kernel: &dyn ClassicalKernel,
    density: &SmoothFamily,
    phi: &SmoothFamily,
    quad: &QuadratureSpec,
    level: usize,
) -> Result<(f64, f64)> {
    let _ = (kernel, density);
    Err(Error::UnboundedIntegrand(format!(
        "kernel pairing against non-compact test function '{}'",
        phi.label()
    )))
}

fn build_deriv_evaluator<'a>(
    phi: &'a SmoothFamily,
    alpha: &MultiIndex,
) -> Result<Box<dyn Fn(usize, &[f64]) -> f64 + 'a>> {
    if alpha.is_zero() {
        let phi = phi.clone();
        return Ok(Box::new(move |level, x| phi.eval(level, x)));
    }
    // exact fast path
    if phi.try_eval_deriv(0, alpha, &vec![0.0; phi.dim()]).is_some() {
        let phi = phi.clone();
        let alpha = alpha.clone();
        return Ok(Box::new(move |level, x| {
            phi.try_eval_deriv(level, &alpha, x).expect("checked above")
        }));
    }
    let derived = crate::calculus::derivative(phi, alpha)?;
    Ok(Box::new(move |level, x| derived.eval(level, x)))
}

/// Cached kernel nodes: positions `z = r omega` with weights
/// `w_r w_omega r^{d-1} K(z)` folded in.
struct KernelMesh {
    nodes: Vec<([f64; MAX_DIM], f64)>,
}

impl KernelMesh {
    fn build(
        kernel: &dyn ClassicalKernel,
        dim: usize,
        r_max: f64,
        base_panels: usize,
        sphere_scale: f64,
    ) -> Self {
        let radial = radial_rule(dim, 0.0, r_max, base_panels, true);
        let res = match dim {
            1 => 1,
            2 => (6.0 * sphere_scale).round().max(2.0) as usize,
            _ => (4.0 * sphere_scale).round().max(2.0) as usize,
        };
        let sphere = sphere_rule(dim, res);
        let mut nodes = Vec::with_capacity(radial.len() * sphere.len());
        let mut z = [0.0f64; MAX_DIM];
        for (omega, w_o) in &sphere {
            for &(r, w_r) in &radial {
                let zz = &mut z[..dim];
                for i in 0..dim {
                    zz[i] = r * omega[i];
                }
                let k = kernel.eval(zz);
                if k != 0.0 {
                    let mut stored = [0.0f64; MAX_DIM];
                    stored[..dim].copy_from_slice(zz);
                    nodes.push((stored, w_o * w_r * k));
                }
            }
        }
        KernelMesh { nodes }
    }
}

// ---------------------------------------------------------------------------
// Ray-convolution flip
// ---------------------------------------------------------------------------

/// Pairing of a mollified ray `int_0^inf h(x - s dir) ds` against compact
/// `phi`: `int_0^inf [int h(w) phi(w + s dir) dw] ds`.
fn flip_ray_pair(
    density: &SmoothFamily,
    direction: &[f64],
    phi: &SmoothFamily,
    quad: &QuadratureSpec,
    level: usize,
) -> Result<(f64, f64)> {
    let dim = phi.dim();
    let r_h = density.support_radius(level);
    let r_phi = phi.support_radius(level);
    if !r_phi.is_finite() {
        return Err(Error::UnboundedIntegrand(
            "ray pairing needs a compact test function".into(),
        ));
    }
    let dir_norm = direction.iter().map(|v| v * v).sum::<f64>().sqrt();
    let s_max = (r_phi + r_h) / dir_norm + 1.0;
    // inner correlation mesh over supp h
    let zeros = vec![0.0; dim];
    let mut axes = Vec::with_capacity(dim);
    for axis in 0..dim {
        let mut feats = Vec::new();
        if let Some(fi) = crate::scalefield::family::family_features(
            density,
            quad,
            level,
            &zeros,
            axis,
            (-r_h, r_h),
        ) {
            feats.push(fi);
        }
        axes.push(build_axis(-r_h, r_h, quad.smooth_h(), &feats, &[]));
    }
    let inner = |s: f64| -> (f64, f64) {
        let mut arg = [0.0f64; MAX_DIM];
        integrate_nd(
            &mut |w: &[f64]| {
                let a = &mut arg[..dim];
                for i in 0..dim {
                    a[i] = w[i] + s * direction[i];
                }
                density.eval(level, w) * phi.eval(level, a)
            },
            &axes,
            quad.rule,
        )
    };
    // outer s-mesh: smooth scale set by phi
    let h_phi = feature_cell(quad, level, phi.feature_scale(level).min(1.0));
    let panels = ((s_max / h_phi).ceil() as usize).clamp(16, 512);
    let breaks: Vec<f64> = (0..=panels).map(|i| s_max * i as f64 / panels as f64).collect();
    let mut inner_err_acc = 0.0;
    let (value, outer_err) = crate::calculus::quad::integrate_1d(
        &mut |s: f64| {
            let (v, e) = inner(s);
            inner_err_acc = f64::max(inner_err_acc, e);
            v
        },
        &breaks,
        quad.rule,
    );
    Ok((value, outer_err + inner_err_acc * s_max))
}
