//! Analytic profiles: the closed-form building blocks behind smooth families.

pub mod jet;
pub mod radial;
pub mod univariate;

use std::sync::Arc;

use crate::calculus::MultiIndex;
pub use radial::{RadialG, RadialProfile};
pub use univariate::{
    AffineProfile, BumpProfile, CosineProfile, GaussProfile, PiecewiseLinearProfile,
    PolyBumpProfile, PolyProfile, ProductProfile, Profile1, ProfileRef, SincProfile,
    SmoothStepProfile,
};

/// Differentiability class of a profile or family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Smoothness {
    Finite(u32),
    Infinite,
}

impl Smoothness {
    pub fn allows(&self, order: u32) -> bool {
        match self {
            Smoothness::Finite(k) => order <= *k,
            Smoothness::Infinite => true,
        }
    }

    pub fn min(self, other: Smoothness) -> Smoothness {
        match (self, other) {
            (Smoothness::Infinite, s) | (s, Smoothness::Infinite) => s,
            (Smoothness::Finite(a), Smoothness::Finite(b)) => Smoothness::Finite(a.min(b)),
        }
    }
}

impl std::fmt::Display for Smoothness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Smoothness::Finite(k) => write!(f, "C^{k}"),
            Smoothness::Infinite => write!(f, "C^inf"),
        }
    }
}

/// A profile on R^d, evaluable with exact partial derivatives.
#[derive(Debug, Clone)]
pub enum ProfileNd {
    /// One-dimensional profile.
    Uni(ProfileRef),
    /// Tensor product of per-axis profiles.
    Separable(Vec<ProfileRef>),
    /// Radial profile `g(|x|^2)`.
    Radial(RadialProfile),
    /// Sum of profiles of equal dimension.
    Sum(Vec<(f64, ProfileNd)>),
    /// Product of a base profile with a separable modulation (per-axis factors
    /// applied on top of the base, e.g. bump * cos). Differentiation uses the
    /// Leibniz rule axis by axis.
    Modulated {
        base: Box<ProfileNd>,
        factors: Vec<ProfileRef>,
    },
    /// Deferred derivative of a profile: evaluates `d^(alpha+requested) base`.
    DerivOf {
        base: Box<ProfileNd>,
        alpha: MultiIndex,
    },
}

impl ProfileNd {
    pub fn dim(&self) -> usize {
        match self {
            ProfileNd::Uni(_) => 1,
            ProfileNd::Separable(axes) => axes.len(),
            ProfileNd::Radial(r) => r.dim(),
            ProfileNd::Sum(terms) => terms[0].1.dim(),
            ProfileNd::Modulated { base, .. } => base.dim(),
            ProfileNd::DerivOf { base, .. } => base.dim(),
        }
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        self.deriv(&MultiIndex::zero(x.len()), x)
    }

    /// Exact mixed partial `d^alpha` at `x`.
    pub fn deriv(&self, alpha: &MultiIndex, x: &[f64]) -> f64 {
        match self {
            ProfileNd::Uni(p) => p.deriv(alpha.entry(0) as usize, x[0]),
            ProfileNd::Separable(axes) => {
                let mut acc = 1.0;
                for (axis, p) in axes.iter().enumerate() {
                    acc *= p.deriv(alpha.entry(axis) as usize, x[axis]);
                    if acc == 0.0 {
                        return 0.0;
                    }
                }
                acc
            }
            ProfileNd::Radial(r) => r.derive(alpha).value(x),
            ProfileNd::Sum(terms) => terms
                .iter()
                .map(|(c, p)| c * p.deriv(alpha, x))
                .sum(),
            ProfileNd::Modulated { base, factors } => {
                // Leibniz over each axis: d^a (f * prod m_i) expands into
                // per-axis binomial sums; iterate axes one at a time.
                modulated_deriv(base, factors, alpha, x)
            }
            ProfileNd::DerivOf { base, alpha: held } => base.deriv(&held.plus(alpha), x),
        }
    }

    /// A new profile representing `d^alpha` of this one.
    pub fn derivative(&self, alpha: &MultiIndex) -> ProfileNd {
        match self {
            ProfileNd::Uni(p) => ProfileNd::Uni(Arc::new(DerivProfile {
                inner: Arc::clone(p),
                extra: alpha.entry(0) as usize,
            })),
            ProfileNd::Separable(axes) => ProfileNd::Separable(
                axes.iter()
                    .enumerate()
                    .map(|(axis, p)| {
                        Arc::new(DerivProfile {
                            inner: Arc::clone(p),
                            extra: alpha.entry(axis) as usize,
                        }) as ProfileRef
                    })
                    .collect(),
            ),
            ProfileNd::Radial(r) => ProfileNd::Radial(r.derive(alpha)),
            ProfileNd::Sum(terms) => ProfileNd::Sum(
                terms
                    .iter()
                    .map(|(c, p)| (*c, p.derivative(alpha)))
                    .collect(),
            ),
            ProfileNd::Modulated { .. } => ProfileNd::DerivOf {
                base: Box::new(self.clone()),
                alpha: alpha.clone(),
            },
            ProfileNd::DerivOf { base, alpha: held } => ProfileNd::DerivOf {
                base: base.clone(),
                alpha: held.plus(alpha),
            },
        }
    }

    /// Radius of a ball around the origin containing the support.
    pub fn support_radius(&self) -> f64 {
        match self {
            ProfileNd::Uni(p) => p.support_radius(),
            ProfileNd::Separable(axes) => {
                // support is a box; bound it by the euclidean radius
                let mut sq = 0.0;
                for p in axes {
                    let r = p.support_radius();
                    if r.is_infinite() {
                        return f64::INFINITY;
                    }
                    sq += r * r;
                }
                sq.sqrt()
            }
            ProfileNd::Radial(r) => r.support_radius(),
            ProfileNd::Sum(terms) => terms
                .iter()
                .map(|(_, p)| p.support_radius())
                .fold(0.0, f64::max),
            ProfileNd::Modulated { base, factors } => {
                let mut r = base.support_radius();
                for f in factors {
                    r = r.min(f.support_radius());
                }
                r
            }
            ProfileNd::DerivOf { base, .. } => base.support_radius(),
        }
    }

    pub fn smoothness(&self) -> Smoothness {
        match self {
            ProfileNd::Uni(p) => p.smoothness(),
            ProfileNd::Separable(axes) => axes
                .iter()
                .map(|p| p.smoothness())
                .fold(Smoothness::Infinite, Smoothness::min),
            ProfileNd::Radial(r) => r.smoothness(),
            ProfileNd::Sum(terms) => terms
                .iter()
                .map(|(_, p)| p.smoothness())
                .fold(Smoothness::Infinite, Smoothness::min),
            ProfileNd::Modulated { base, factors } => factors
                .iter()
                .map(|p| p.smoothness())
                .fold(base.smoothness(), Smoothness::min),
            ProfileNd::DerivOf { base, alpha } => match base.smoothness() {
                Smoothness::Infinite => Smoothness::Infinite,
                Smoothness::Finite(k) => Smoothness::Finite(k.saturating_sub(alpha.order())),
            },
        }
    }
}

fn modulated_deriv(base: &ProfileNd, factors: &[ProfileRef], alpha: &MultiIndex, x: &[f64]) -> f64 {
    // Expand d^alpha (base * prod_i m_i(x_i)) axis by axis via Leibniz.
    // Work over the product of per-axis splits (k_i derivatives on the
    // modulation, alpha_i - k_i on the base).
    let dim = alpha.dim();
    let mut acc = 0.0;
    let mut splits = vec![0u32; dim];
    loop {
        let mut coeff = 1.0;
        let mut mod_val = 1.0;
        for axis in 0..dim {
            let a = alpha.entry(axis);
            let k = splits[axis];
            coeff *= binomial(a, k);
            mod_val *= factors[axis].deriv(k as usize, x[axis]);
        }
        if mod_val != 0.0 {
            let base_alpha = MultiIndex::new(
                (0..dim)
                    .map(|axis| alpha.entry(axis) - splits[axis])
                    .collect(),
            );
            acc += coeff * mod_val * base.deriv(&base_alpha, x);
        }
        // odometer increment of splits within [0, alpha_i]
        let mut carry = true;
        for axis in 0..dim {
            if !carry {
                break;
            }
            if splits[axis] < alpha.entry(axis) {
                splits[axis] += 1;
                carry = false;
            } else {
                splits[axis] = 0;
            }
        }
        if carry {
            break;
        }
    }
    acc
}

fn binomial(n: u32, k: u32) -> f64 {
    let mut acc = 1.0;
    for i in 0..k {
        acc *= (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// Wrapper shifting the derivative order of a univariate profile.
#[derive(Debug)]
struct DerivProfile {
    inner: ProfileRef,
    extra: usize,
}

impl Profile1 for DerivProfile {
    fn deriv(&self, n: usize, t: f64) -> f64 {
        self.inner.deriv(n + self.extra, t)
    }

    fn support_radius(&self) -> f64 {
        self.inner.support_radius()
    }

    fn smoothness(&self) -> Smoothness {
        match self.inner.smoothness() {
            Smoothness::Infinite => Smoothness::Infinite,
            Smoothness::Finite(k) => Smoothness::Finite(k.saturating_sub(self.extra as u32)),
        }
    }
}
