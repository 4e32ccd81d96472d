//! Ladder-indexed families of smooth functions.
//!
//! A `SmoothFamily` is one member function per ladder level, with enough
//! structure retained (profile, convolution factors, kernel densities) for
//! derivatives, supports, and pairings to stay exact or cheap.

use std::sync::Arc;

use super::mollifier::{surface_area, Mollifier, MollifierKind};
use super::profile::{ProfileNd, Smoothness};
use super::ScaleLadder;
use crate::calculus::quad::{
    build_axis, integrate_nd, radial_rule, sphere_rule, FeatureInterval, QuadRule, QuadratureSpec,
};
use crate::calculus::MultiIndex;
use crate::error::{Error, Result};

/// Maximum supported spatial dimension for families.
pub const MAX_DIM: usize = 8;

/// Strength of the delta-function claim a family was built to satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaClass {
    /// Pairs against every S-continuous compactly supported function.
    Order0,
    /// Pairs against continuously differentiable compact functions.
    C1,
    /// Pairs against smooth compact functions only.
    General,
}

impl DeltaClass {
    pub fn name(&self) -> &'static str {
        match self {
            DeltaClass::Order0 => "order-0",
            DeltaClass::C1 => "c1",
            DeltaClass::General => "general",
        }
    }
}

/// Certified bound on truncated mass, used when a pairing domain must be cut.
#[derive(Debug, Clone)]
pub(crate) enum TailBound {
    /// `int_{|x|>R} |f_k|` for gaussian-width families.
    GaussianMass { dim: usize },
    /// Oscillatory pairing tail per unit sup-norm of the cofactor.
    SincPairing,
}

impl TailBound {
    pub(crate) fn bound(&self, rho: f64, radius: f64) -> f64 {
        match self {
            TailBound::GaussianMass { dim } => {
                let t = (radius / rho).max(1.0);
                let norm = (2.0 * std::f64::consts::PI).powf(-(*dim as f64) / 2.0);
                surface_area(*dim) * norm * t.powi(*dim as i32 - 2) * (-0.5 * t * t).exp()
            }
            TailBound::SincPairing => {
                let lambda = 1.0 / rho;
                4.0 / (std::f64::consts::PI * lambda * radius)
            }
        }
    }
}

/// A classical kernel (fundamental-solution candidate) with a point
/// singularity at the origin; evaluated away from it, mollified through
/// `KernelConv` families.
pub trait ClassicalKernel: Send + Sync + std::fmt::Debug {
    fn dim(&self) -> usize;
    fn eval(&self, x: &[f64]) -> f64;
    fn label(&self) -> String;
    /// Description of the singular locus.
    fn singularity(&self) -> String;
}

#[derive(Clone)]
pub(crate) enum FamilyRepr {
    /// `amp_k * profile((x - center) / width_k)`.
    Scaled {
        profile: ProfileNd,
        amps: Vec<f64>,
        widths: Vec<f64>,
        center: Vec<f64>,
    },
    LinComb(Vec<(f64, SmoothFamily)>),
    /// Direct convolution of two families, at least one compactly supported.
    Conv {
        left: SmoothFamily,
        right: SmoothFamily,
        quad: QuadratureSpec,
    },
    /// `(kernel * density)(x)` with a singular classical kernel.
    KernelConv {
        kernel: Arc<dyn ClassicalKernel>,
        density: SmoothFamily,
        quad: QuadratureSpec,
    },
    /// `int_0^inf density(x - s dir) ds`: mollified characteristic ray.
    RayConv {
        density: SmoothFamily,
        direction: Vec<f64>,
        quad: QuadratureSpec,
    },
    Custom {
        eval: Arc<dyn Fn(usize, &[f64]) -> f64 + Send + Sync>,
    },
}

impl std::fmt::Debug for FamilyRepr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FamilyRepr::Scaled { .. } => write!(f, "Scaled"),
            FamilyRepr::LinComb(t) => write!(f, "LinComb[{}]", t.len()),
            FamilyRepr::Conv { .. } => write!(f, "Conv"),
            FamilyRepr::KernelConv { kernel, .. } => write!(f, "KernelConv[{}]", kernel.label()),
            FamilyRepr::RayConv { .. } => write!(f, "RayConv"),
            FamilyRepr::Custom { .. } => write!(f, "Custom"),
        }
    }
}

#[derive(Debug)]
pub(crate) struct FamilyInner {
    pub dim: usize,
    pub rhos: Arc<[f64]>,
    /// Per-level support radius around the origin; infinity when unbounded.
    pub support: Vec<f64>,
    /// Narrowest feature width per level (sets quadrature resolution).
    pub feature_scale: Vec<f64>,
    /// Radius of the ball holding the fine features (infinite if everywhere).
    pub feature_radius: Vec<f64>,
    pub smoothness: Smoothness,
    pub label: String,
    pub tail: Option<TailBound>,
    pub sup_bound: Option<Vec<f64>>,
    pub delta_claim: Option<DeltaClass>,
    /// Set when this family is `d^alpha` of another; lets pairings move the
    /// derivative onto the test function by integration by parts.
    pub derivative_of: Option<(SmoothFamily, MultiIndex)>,
    pub repr: FamilyRepr,
}

/// A ladder-indexed family of smooth maps `R^d -> R`.
#[derive(Debug, Clone)]
pub struct SmoothFamily {
    pub(crate) inner: Arc<FamilyInner>,
}

impl SmoothFamily {
    pub(crate) fn from_inner(inner: FamilyInner) -> Self {
        debug_assert!(inner.dim <= MAX_DIM);
        SmoothFamily {
            inner: Arc::new(inner),
        }
    }

    pub fn dim(&self) -> usize {
        self.inner.dim
    }

    pub fn levels(&self) -> usize {
        self.inner.rhos.len()
    }

    pub fn rho(&self, level: usize) -> f64 {
        self.inner.rhos[level]
    }

    pub(crate) fn rhos(&self) -> Arc<[f64]> {
        Arc::clone(&self.inner.rhos)
    }

    pub fn support_radius(&self, level: usize) -> f64 {
        self.inner.support[level]
    }

    /// True when the supports stay bounded uniformly over levels.
    pub fn s_compactly_supported(&self) -> bool {
        self.inner.support.iter().all(|r| r.is_finite())
    }

    pub fn feature_scale(&self, level: usize) -> f64 {
        self.inner.feature_scale[level]
    }

    pub fn feature_radius(&self, level: usize) -> f64 {
        self.inner.feature_radius[level]
    }

    pub fn smoothness(&self) -> Smoothness {
        self.inner.smoothness
    }

    pub fn label(&self) -> &str {
        &self.inner.label
    }

    pub fn delta_claim(&self) -> Option<DeltaClass> {
        self.inner.delta_claim
    }

    pub fn derivative_provenance(&self) -> Option<(&SmoothFamily, &MultiIndex)> {
        self.inner
            .derivative_of
            .as_ref()
            .map(|(fam, alpha)| (fam, alpha))
    }

    pub(crate) fn tail_bound(&self, level: usize, radius: f64) -> Option<f64> {
        self.inner
            .tail
            .as_ref()
            .map(|t| t.bound(self.rho(level), radius))
    }

    pub(crate) fn sup_bound(&self, level: usize) -> Option<f64> {
        self.inner.sup_bound.as_ref().map(|v| v[level])
    }

    pub fn same_ladder(&self, other: &SmoothFamily) -> bool {
        self.inner.rhos.len() == other.inner.rhos.len()
            && self
                .inner
                .rhos
                .iter()
                .zip(other.inner.rhos.iter())
                .all(|(a, b)| a == b)
    }

    /// Evaluates the level-`level` member at `x`.
    pub fn eval(&self, level: usize, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim());
        match &self.inner.repr {
            FamilyRepr::Scaled {
                profile,
                amps,
                widths,
                center,
            } => {
                let mut buf = [0.0f64; MAX_DIM];
                let u = &mut buf[..x.len()];
                for (i, ui) in u.iter_mut().enumerate() {
                    *ui = (x[i] - center[i]) / widths[level];
                }
                amps[level] * profile.value(u)
            }
            FamilyRepr::LinComb(terms) => terms
                .iter()
                .map(|(c, fam)| c * fam.eval(level, x))
                .sum(),
            FamilyRepr::Conv { left, right, quad } => conv_eval(left, right, quad, level, x),
            FamilyRepr::KernelConv {
                kernel,
                density,
                quad,
            } => kernel_conv_eval(kernel.as_ref(), density, quad, level, x),
            FamilyRepr::RayConv {
                density,
                direction,
                quad,
            } => ray_conv_eval(density, direction, quad, level, x),
            FamilyRepr::Custom { eval } => eval(level, x),
        }
    }

    /// Exact derivative evaluation where the representation allows it
    /// (profile-backed families and their linear combinations).
    pub fn try_eval_deriv(&self, level: usize, alpha: &MultiIndex, x: &[f64]) -> Option<f64> {
        if alpha.is_zero() {
            return Some(self.eval(level, x));
        }
        match &self.inner.repr {
            FamilyRepr::Scaled {
                profile,
                amps,
                widths,
                center,
            } => {
                let mut buf = [0.0f64; MAX_DIM];
                let u = &mut buf[..x.len()];
                let w = widths[level];
                for (i, ui) in u.iter_mut().enumerate() {
                    *ui = (x[i] - center[i]) / w;
                }
                Some(amps[level] * profile.deriv(alpha, u) / w.powi(alpha.order() as i32))
            }
            FamilyRepr::LinComb(terms) => {
                let mut acc = 0.0;
                for (c, fam) in terms {
                    acc += c * fam.try_eval_deriv(level, alpha, x)?;
                }
                Some(acc)
            }
            _ => None,
        }
    }

    // -- constructors ------------------------------------------------------

    /// Fixed standard function embedded at every ladder level:
    /// `amp * profile((x - center)/width)`.
    pub fn standard(
        ladder: &ScaleLadder,
        profile: ProfileNd,
        amp: f64,
        width: f64,
        center: Vec<f64>,
        label: impl Into<String>,
    ) -> Self {
        let dim = profile.dim();
        debug_assert_eq!(center.len(), dim);
        let n = ladder.len();
        let base_support = profile.support_radius();
        let support = if base_support.is_finite() {
            let c_norm = center.iter().map(|c| c * c).sum::<f64>().sqrt();
            vec![c_norm + width * base_support; n]
        } else {
            vec![f64::INFINITY; n]
        };
        let smoothness = profile.smoothness();
        let feature_radius = support.clone();
        SmoothFamily::from_inner(FamilyInner {
            dim,
            rhos: ladder.shared_levels(),
            support,
            feature_scale: vec![width; n],
            feature_radius,
            smoothness,
            label: label.into(),
            tail: None,
            sup_bound: None,
            delta_claim: None,
            derivative_of: None,
            repr: FamilyRepr::Scaled {
                profile,
                amps: vec![amp; n],
                widths: vec![width; n],
                center,
            },
        })
    }

    /// Constant family `c` at every level.
    pub fn constant(ladder: &ScaleLadder, dim: usize, c: f64) -> Self {
        use super::profile::PolyProfile;
        let profile = match dim {
            1 => ProfileNd::Uni(Arc::new(PolyProfile { coeffs: vec![c] })),
            _ => ProfileNd::Separable(
                std::iter::once(Arc::new(PolyProfile { coeffs: vec![c] }) as _)
                    .chain(
                        (1..dim).map(|_| Arc::new(PolyProfile { coeffs: vec![1.0] }) as _),
                    )
                    .collect(),
            ),
        };
        let n = ladder.len();
        let mut fam = SmoothFamily::standard(
            ladder,
            profile,
            1.0,
            1.0,
            vec![0.0; dim],
            format!("const({c})"),
        );
        Arc::get_mut(&mut fam.inner).unwrap().sup_bound = Some(vec![c.abs(); n]);
        fam
    }

    /// Level-scaled profile family `amp_k * profile(x / width_k)`.
    pub(crate) fn scaled(
        ladder: &ScaleLadder,
        profile: ProfileNd,
        amps: Vec<f64>,
        widths: Vec<f64>,
        label: String,
    ) -> Self {
        let dim = profile.dim();
        let n = ladder.len();
        debug_assert_eq!(amps.len(), n);
        debug_assert_eq!(widths.len(), n);
        let base_support = profile.support_radius();
        let support: Vec<f64> = widths
            .iter()
            .map(|w| {
                if base_support.is_finite() {
                    w * base_support
                } else {
                    f64::INFINITY
                }
            })
            .collect();
        let smoothness = profile.smoothness();
        SmoothFamily::from_inner(FamilyInner {
            dim,
            rhos: ladder.shared_levels(),
            support: support.clone(),
            feature_scale: widths.clone(),
            feature_radius: support,
            smoothness,
            label,
            tail: None,
            sup_bound: None,
            delta_claim: None,
            derivative_of: None,
            repr: FamilyRepr::Scaled {
                profile,
                amps,
                widths,
                center: vec![0.0; dim],
            },
        })
    }

    /// Linear combination of families over a common ladder.
    pub fn lin_comb(terms: Vec<(f64, SmoothFamily)>) -> Result<Self> {
        let first = terms
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty linear combination".into()))?
            .1
            .clone();
        let dim = first.dim();
        let n = first.levels();
        for (_, fam) in &terms {
            if fam.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: fam.dim(),
                });
            }
            if !fam.same_ladder(&first) {
                return Err(Error::LadderMismatch);
            }
        }
        let mut support = vec![0.0f64; n];
        let mut feature_scale = vec![f64::INFINITY; n];
        let mut feature_radius = vec![0.0f64; n];
        let mut smoothness = Smoothness::Infinite;
        for (_, fam) in &terms {
            for k in 0..n {
                support[k] = support[k].max(fam.support_radius(k));
                feature_scale[k] = feature_scale[k].min(fam.feature_scale(k));
                feature_radius[k] = feature_radius[k].max(fam.feature_radius(k));
            }
            smoothness = smoothness.min(fam.smoothness());
        }
        let label = format!(
            "lincomb({})",
            terms
                .iter()
                .map(|(c, f)| format!("{c}*{}", f.label()))
                .collect::<Vec<_>>()
                .join(" + ")
        );
        Ok(SmoothFamily::from_inner(FamilyInner {
            dim,
            rhos: first.rhos(),
            support,
            feature_scale,
            feature_radius,
            smoothness,
            label,
            tail: None,
            sup_bound: None,
            delta_claim: None,
            derivative_of: None,
            repr: FamilyRepr::LinComb(terms),
        }))
    }

    /// Scales a family by a constant.
    pub fn scaled_by(&self, c: f64) -> SmoothFamily {
        SmoothFamily::lin_comb(vec![(c, self.clone())]).expect("single term")
    }

    /// Custom evaluator with explicit metadata; used for diagnostic and
    /// negative-control families whose structure is intentionally opaque.
    #[allow(clippy::too_many_arguments)]
    pub fn custom(
        ladder: &ScaleLadder,
        dim: usize,
        eval: impl Fn(usize, &[f64]) -> f64 + Send + Sync + 'static,
        support: Vec<f64>,
        feature_scale: Vec<f64>,
        smoothness: Smoothness,
        label: impl Into<String>,
    ) -> Self {
        let feature_radius = support.clone();
        SmoothFamily::from_inner(FamilyInner {
            dim,
            rhos: ladder.shared_levels(),
            support,
            feature_scale,
            feature_radius,
            smoothness,
            label: label.into(),
            tail: None,
            sup_bound: None,
            delta_claim: None,
            derivative_of: None,
            repr: FamilyRepr::Custom {
                eval: Arc::new(eval),
            },
        })
    }
}

/// Model delta family `rho_k^{-d} psi(x / rho_k)` from a compactly supported
/// mollifier.
pub fn model_delta(psi: &Mollifier, ladder: &ScaleLadder) -> Result<SmoothFamily> {
    if psi.kind() != MollifierKind::Bump {
        return Err(Error::InvalidMollifier(format!(
            "model delta needs the compactly supported bump profile, got {}; \
             route integrable profiles through scaled_delta",
            psi.kind().name()
        )));
    }
    let d = psi.dimension();
    let amps: Vec<f64> = ladder
        .levels()
        .iter()
        .map(|rho| rho.powi(-(d as i32)))
        .collect();
    let widths: Vec<f64> = ladder.levels().to_vec();
    let mut fam = SmoothFamily::scaled(
        ladder,
        psi.profile().clone(),
        amps,
        widths,
        format!("model_delta(bump,d={d})"),
    );
    {
        let inner = Arc::get_mut(&mut fam.inner).unwrap();
        inner.delta_claim = Some(DeltaClass::Order0);
        let peak = psi.value(&vec![0.0; d]);
        inner.sup_bound = Some(
            ladder
                .levels()
                .iter()
                .map(|rho| peak * rho.powi(-(d as i32)))
                .collect(),
        );
    }
    Ok(fam)
}

/// Delta family from an integrable (gaussian) or conditionally integrable
/// (sinc) profile; same scaling law, infinite support.
pub fn scaled_delta(psi: &Mollifier, ladder: &ScaleLadder) -> Result<SmoothFamily> {
    let claim = match psi.kind() {
        MollifierKind::Gaussian => DeltaClass::Order0,
        MollifierKind::Sinc => DeltaClass::C1,
        MollifierKind::Bump => {
            return Err(Error::InvalidMollifier(
                "bump profiles build model deltas; use model_delta".into(),
            ))
        }
    };
    let d = psi.dimension();
    let amps: Vec<f64> = ladder
        .levels()
        .iter()
        .map(|rho| rho.powi(-(d as i32)))
        .collect();
    let widths: Vec<f64> = ladder.levels().to_vec();
    let mut fam = SmoothFamily::scaled(
        ladder,
        psi.profile().clone(),
        amps,
        widths,
        format!("scaled_delta({},d={d})", psi.kind().name()),
    );
    {
        let inner = Arc::get_mut(&mut fam.inner).unwrap();
        inner.delta_claim = Some(claim);
        let peak = psi.value(&vec![0.0; d]);
        inner.sup_bound = Some(
            ladder
                .levels()
                .iter()
                .map(|rho| peak * rho.powi(-(d as i32)))
                .collect(),
        );
        match psi.kind() {
            MollifierKind::Gaussian => {
                inner.tail = Some(TailBound::GaussianMass { dim: d });
                // numerically relevant width ~ 10 sigma
                inner.feature_radius = ladder.levels().iter().map(|rho| 10.0 * rho).collect();
            }
            MollifierKind::Sinc => {
                inner.tail = Some(TailBound::SincPairing);
                // oscillates everywhere: fine cells over the whole domain
                inner.feature_radius = vec![f64::INFINITY; ladder.len()];
            }
            MollifierKind::Bump => unreachable!(),
        }
    }
    Ok(fam)
}

// ---------------------------------------------------------------------------
// Evaluators for structured representations
// ---------------------------------------------------------------------------

/// Cell size for a feature of the given scale under a quadrature spec.
pub(crate) fn feature_cell(quad: &QuadratureSpec, level: usize, feature_scale: f64) -> f64 {
    let fine = quad.fine_h(level);
    let smooth = quad.smooth_h();
    if !feature_scale.is_finite() {
        return smooth;
    }
    (feature_scale / 8.0).min(smooth).max(fine)
}

/// Collects per-axis feature intervals for a family whose feature ball sits
/// at `shift` (reflected features for the moving convolution factor).
pub(crate) fn family_features(
    fam: &SmoothFamily,
    quad: &QuadratureSpec,
    level: usize,
    shift: &[f64],
    axis: usize,
    domain: (f64, f64),
) -> Option<FeatureInterval> {
    let fr = fam.feature_radius(level);
    let h = feature_cell(quad, level, fam.feature_scale(level));
    let (lo, hi) = if fr.is_finite() {
        (shift[axis] - fr, shift[axis] + fr)
    } else {
        domain
    };
    if hi < domain.0 || lo > domain.1 {
        return None;
    }
    Some(FeatureInterval {
        lo: lo.max(domain.0),
        hi: hi.min(domain.1),
        h,
    })
}

fn conv_eval(
    left: &SmoothFamily,
    right: &SmoothFamily,
    quad: &QuadratureSpec,
    level: usize,
    x: &[f64],
) -> f64 {
    // integrate over the compact factor; convolution commutes
    let (moving, fixed) = if right.support_radius(level).is_finite() {
        (left, right)
    } else {
        (right, left)
    };
    let radius = fixed.support_radius(level);
    debug_assert!(radius.is_finite(), "conv requires one compact factor");
    let dim = x.len();
    let zeros = vec![0.0; dim];
    let mut axes = Vec::with_capacity(dim);
    for axis in 0..dim {
        let domain = (-radius, radius);
        let mut feats = Vec::new();
        if let Some(f) = family_features(fixed, quad, level, &zeros, axis, domain) {
            feats.push(f);
        }
        // moving factor's features sit near y = x - (its center, at origin)
        if let Some(f) = family_features(moving, quad, level, x, axis, domain) {
            feats.push(f);
        }
        axes.push(build_axis(-radius, radius, quad.smooth_h(), &feats, &[]));
    }
    let mut diff = [0.0f64; MAX_DIM];
    let (value, _err) = integrate_nd(
        &mut |y: &[f64]| {
            let d = &mut diff[..dim];
            for i in 0..dim {
                d[i] = x[i] - y[i];
            }
            moving.eval(level, d) * fixed.eval(level, y)
        },
        &axes,
        quad.rule,
    );
    value
}

pub(crate) fn kernel_conv_eval(
    kernel: &dyn ClassicalKernel,
    density: &SmoothFamily,
    quad: &QuadratureSpec,
    level: usize,
    x: &[f64],
) -> f64 {
    let dim = x.len();
    let r_h = density.support_radius(level);
    debug_assert!(r_h.is_finite(), "kernel convolution needs compact density");
    let x_norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let r_lo = (x_norm - r_h).max(0.0);
    let r_hi = x_norm + r_h;
    if r_hi <= 0.0 {
        return 0.0;
    }
    let h_cell = feature_cell(quad, level, density.feature_scale(level));
    let base_panels = (((r_hi - r_lo) / h_cell).ceil() as usize).clamp(8, 64);
    let radial = radial_rule(dim, r_lo, r_hi, base_panels, r_lo == 0.0);
    // full sphere when the singularity ball overlaps; otherwise a cap around
    // the direction of x wide enough to cover the density support
    let directions = if x_norm <= r_h * 1.5 || dim == 1 {
        sphere_rule(dim, 4)
    } else {
        cap_rule(dim, x, (r_h / x_norm).asin().min(std::f64::consts::FRAC_PI_2))
    };
    let mut buf = [0.0f64; MAX_DIM];
    let mut z = [0.0f64; MAX_DIM];
    let mut acc = 0.0;
    for (omega, w_o) in &directions {
        for &(r, w_r) in &radial {
            let zz = &mut z[..dim];
            let arg = &mut buf[..dim];
            let mut inside = true;
            for i in 0..dim {
                zz[i] = r * omega[i];
                arg[i] = x[i] - zz[i];
            }
            // quick support cull
            let dist2: f64 = arg.iter().map(|v| v * v).sum();
            if dist2 > r_h * r_h {
                inside = false;
            }
            if inside {
                acc += w_o * w_r * kernel.eval(zz) * density.eval(level, arg);
            }
        }
    }
    acc
}

/// Spherical cap rule: directions within `theta_max` of `center`, weights
/// summing to the cap area.
fn cap_rule(dim: usize, center: &[f64], theta_max: f64) -> Vec<(Vec<f64>, f64)> {
    let norm = center.iter().map(|v| v * v).sum::<f64>().sqrt();
    let axis: Vec<f64> = center.iter().map(|v| v / norm).collect();
    let theta = (theta_max * 1.1).min(std::f64::consts::PI);
    match dim {
        1 => vec![(axis, 1.0)],
        2 => {
            let m = 24;
            let base = axis[1].atan2(axis[0]);
            let w = 2.0 * theta / m as f64;
            (0..m)
                .map(|i| {
                    let t = base - theta + (i as f64 + 0.5) * 2.0 * theta / m as f64;
                    (vec![t.cos(), t.sin()], w)
                })
                .collect()
        }
        3 => {
            // Gauss in u = cos(angle from axis) over [cos theta, 1]
            let (us, wus) = crate::calculus::quad::gauss_legendre_nodes(8);
            let u_lo = theta.cos();
            // orthonormal frame around axis
            let (e1, e2) = orthonormal_frame(&axis);
            let n_phi = 16;
            let wphi = 2.0 * std::f64::consts::PI / n_phi as f64;
            let mut out = Vec::with_capacity(us.len() * n_phi);
            for (u_ref, wu) in us.iter().zip(&wus) {
                let u = 0.5 * (1.0 - u_lo) * u_ref + 0.5 * (1.0 + u_lo);
                let wu = wu * 0.5 * (1.0 - u_lo);
                let s = (1.0 - u * u).max(0.0).sqrt();
                for j in 0..n_phi {
                    let phi = (j as f64 + 0.5) * 2.0 * std::f64::consts::PI / n_phi as f64;
                    let dir: Vec<f64> = (0..3)
                        .map(|i| u * axis[i] + s * (phi.cos() * e1[i] + phi.sin() * e2[i]))
                        .collect();
                    out.push((dir, wu * wphi));
                }
            }
            out
        }
        _ => panic!("cap rule implemented for d <= 3"),
    }
}

fn orthonormal_frame(axis: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let pick = if axis[0].abs() < 0.9 {
        [1.0, 0.0, 0.0]
    } else {
        [0.0, 1.0, 0.0]
    };
    // e1 = normalize(pick - (pick . axis) axis)
    let dot: f64 = pick.iter().zip(axis).map(|(a, b)| a * b).sum();
    let mut e1: Vec<f64> = pick
        .iter()
        .zip(axis)
        .map(|(p, a)| p - dot * a)
        .collect();
    let n1 = e1.iter().map(|v| v * v).sum::<f64>().sqrt();
    for v in &mut e1 {
        *v /= n1;
    }
    let e2 = vec![
        axis[1] * e1[2] - axis[2] * e1[1],
        axis[2] * e1[0] - axis[0] * e1[2],
        axis[0] * e1[1] - axis[1] * e1[0],
    ];
    (e1, e2)
}

fn ray_conv_eval(
    density: &SmoothFamily,
    direction: &[f64],
    quad: &QuadratureSpec,
    level: usize,
    x: &[f64],
) -> f64 {
    let dim = x.len();
    let r_h = density.support_radius(level);
    debug_assert!(r_h.is_finite());
    // |x - s dir|^2 <= r_h^2
    let a: f64 = direction.iter().map(|v| v * v).sum();
    let b: f64 = -2.0 * x.iter().zip(direction).map(|(xi, di)| xi * di).sum::<f64>();
    let c: f64 = x.iter().map(|v| v * v).sum::<f64>() - r_h * r_h;
    let disc = b * b - 4.0 * a * c;
    if disc <= 0.0 {
        return 0.0;
    }
    let sq = disc.sqrt();
    let s0 = ((-b - sq) / (2.0 * a)).max(0.0);
    let s1 = (-b + sq) / (2.0 * a);
    if s1 <= s0 {
        return 0.0;
    }
    let h_cell = feature_cell(quad, level, density.feature_scale(level));
    let panels = (((s1 - s0) / h_cell).ceil() as usize).clamp(8, 256);
    let mut arg = [0.0f64; MAX_DIM];
    let breaks: Vec<f64> = (0..=panels)
        .map(|i| s0 + (s1 - s0) * i as f64 / panels as f64)
        .collect();
    let (value, _) = crate::calculus::quad::integrate_1d(
        &mut |s: f64| {
            let ar = &mut arg[..dim];
            for i in 0..dim {
                ar[i] = x[i] - s * direction[i];
            }
            density.eval(level, ar)
        },
        &breaks,
        QuadRule::GaussLegendre,
    );
    value
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalefield::make_ladder;
    use crate::scalefield::mollifier::make_mollifier;

    const C1: f64 = 2.252_283_621_043_581;

    #[test]
    fn model_delta_requires_bump() {
        let ladder = make_ladder(4, 10, 2.0).unwrap();
        let gauss = make_mollifier(MollifierKind::Gaussian, 1).unwrap();
        assert!(model_delta(&gauss, &ladder).is_err());
        let bump = make_mollifier(MollifierKind::Bump, 1).unwrap();
        assert!(scaled_delta(&bump, &ladder).is_err());
    }

    #[test]
    fn model_delta_peak_scaling() {
        // delta_k(0) = 2^k * C1 * e^{-1}
        let ladder = make_ladder(4, 10, 2.0).unwrap();
        let bump = make_mollifier(MollifierKind::Bump, 1).unwrap();
        let delta = model_delta(&bump, &ladder).unwrap();
        for k in 0..ladder.len() {
            let expect = 2f64.powi(k as i32 + 4) * C1 * (-1.0f64).exp();
            let got = delta.eval(k, &[0.0]);
            assert!((got - expect).abs() < 1e-9 * expect, "level {k}: {got}");
        }
    }

    #[test]
    fn model_delta_support_scaling() {
        let ladder = make_ladder(4, 10, 2.0).unwrap();
        let bump = make_mollifier(MollifierKind::Bump, 1).unwrap();
        let delta = model_delta(&bump, &ladder).unwrap();
        for k in 0..ladder.len() {
            let rho = ladder.rho(k);
            assert_eq!(delta.support_radius(k), rho);
            assert_eq!(delta.eval(k, &[rho]), 0.0);
            assert_eq!(delta.eval(k, &[1.01 * rho]), 0.0);
            assert!(delta.eval(k, &[0.5 * rho]) > 0.0);
        }
    }

    #[test]
    fn delta_evaluator_symmetry() {
        let ladder = make_ladder(4, 8, 2.0).unwrap();
        let bump = make_mollifier(MollifierKind::Bump, 1).unwrap();
        let delta = model_delta(&bump, &ladder).unwrap();
        for k in 0..ladder.len() {
            for &x in &[0.1, 0.01, 0.003] {
                assert_eq!(delta.eval(k, &[x]), delta.eval(k, &[-x]));
            }
        }
    }

    #[test]
    fn gaussian_delta_peak() {
        // delta_k(0) = 2^8 / sqrt(2 pi) at rho = 2^-8
        let ladder = make_ladder(8, 10, 2.0).unwrap();
        let gauss = make_mollifier(MollifierKind::Gaussian, 1).unwrap();
        let delta = scaled_delta(&gauss, &ladder).unwrap();
        let expect = 2f64.powi(8) / (2.0 * std::f64::consts::PI).sqrt();
        assert!((delta.eval(0, &[0.0]) - expect).abs() < 1e-10 * expect);
        assert_eq!(delta.support_radius(0), f64::INFINITY);
        assert_eq!(delta.delta_claim(), Some(DeltaClass::Order0));
    }

    #[test]
    fn sinc_delta_matches_dirichlet_kernel() {
        // delta_k(x) = sin(lambda x) / (pi x), peak lambda/pi
        let ladder = make_ladder(8, 10, 2.0).unwrap();
        let sinc = make_mollifier(MollifierKind::Sinc, 1).unwrap();
        let delta = scaled_delta(&sinc, &ladder).unwrap();
        let lam = 2f64.powi(8);
        let x = 0.37;
        let expect = (lam * x).sin() / (std::f64::consts::PI * x);
        assert!((delta.eval(0, &[x]) - expect).abs() < 1e-12);
        let peak = lam / std::f64::consts::PI;
        assert!((delta.eval(0, &[0.0]) - peak).abs() < 1e-10 * peak);
        assert_eq!(delta.delta_claim(), Some(DeltaClass::C1));
    }

    #[test]
    fn peak_times_rho_d_is_level_independent() {
        let ladder = make_ladder(4, 10, 2.0).unwrap();
        for d in [1usize, 2] {
            let bump = make_mollifier(MollifierKind::Bump, d).unwrap();
            let delta = model_delta(&bump, &ladder).unwrap();
            let origin = vec![0.0; d];
            let base = delta.eval(0, &origin) * ladder.rho(0).powi(d as i32);
            for k in 1..ladder.len() {
                let v = delta.eval(k, &origin) * ladder.rho(k).powi(d as i32);
                assert!((v - base).abs() < 1e-12 * base.abs());
            }
        }
    }
}
