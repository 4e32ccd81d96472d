//! Radial profiles `f(x) = g(|x|^2)` in any dimension.
//!
//! Mixed partials stay closed-form: differentiating a term
//! `c * x^beta * g^(m)(s)` (with `s = |x|^2`) produces terms of the same
//! shape, so a derivative is just a bigger term list with exact coefficients.

use super::jet::Jet;
use super::Smoothness;
use crate::calculus::MultiIndex;

/// The radial generator `g(s)` with exact derivatives in `s`.
#[derive(Debug, Clone)]
pub enum RadialG {
    /// `amp * exp(-1/(1-s))` for `s < 1`, zero beyond.
    Bump { amp: f64 },
    /// `amp * exp(-s/2)`.
    Gauss { amp: f64 },
}

impl RadialG {
    fn deriv_m(&self, m: usize, s: f64) -> f64 {
        match self {
            RadialG::Bump { amp } => {
                if s >= 1.0 {
                    return 0.0;
                }
                if m == 0 {
                    return amp * (-1.0 / (1.0 - s)).exp();
                }
                let sv = Jet::variable(s, m);
                let arg = Jet::constant(1.0, m).sub(&sv);
                let f = Jet::constant(-1.0, m).div(&arg).exp();
                amp * f.derivative(m)
            }
            RadialG::Gauss { amp } => amp * (-0.5f64).powi(m as i32) * (-0.5 * s).exp(),
        }
    }

    fn support_s(&self) -> f64 {
        match self {
            RadialG::Bump { .. } => 1.0,
            RadialG::Gauss { .. } => f64::INFINITY,
        }
    }
}

/// One term `coeff * x^beta * g^(m)(|x|^2)`.
#[derive(Debug, Clone)]
struct RadialTerm {
    coeff: f64,
    beta: MultiIndex,
    m: usize,
}

/// A finite sum of radial terms; closed under partial differentiation.
#[derive(Debug, Clone)]
pub struct RadialProfile {
    g: RadialG,
    dim: usize,
    terms: Vec<RadialTerm>,
}

impl RadialProfile {
    pub fn new(g: RadialG, dim: usize) -> Self {
        let terms = vec![RadialTerm {
            coeff: 1.0,
            beta: MultiIndex::zero(dim),
            m: 0,
        }];
        RadialProfile { g, dim, terms }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim);
        let s: f64 = x.iter().map(|v| v * v).sum();
        if s >= self.g.support_s() {
            return 0.0;
        }
        let mut acc = 0.0;
        for term in &self.terms {
            let mut mono = term.coeff;
            for (axis, &b) in term.beta.entries().iter().enumerate() {
                for _ in 0..b {
                    mono *= x[axis];
                }
            }
            if mono != 0.0 {
                acc += mono * self.g.deriv_m(term.m, s);
            }
        }
        acc
    }

    /// Partial derivative along one axis: term-by-term product rule.
    pub fn derive_axis(&self, axis: usize) -> RadialProfile {
        let mut terms = Vec::with_capacity(self.terms.len() * 2);
        for term in &self.terms {
            if let Some(lowered) = term.beta.lower(axis) {
                terms.push(RadialTerm {
                    coeff: term.coeff * term.beta.entry(axis) as f64,
                    beta: lowered,
                    m: term.m,
                });
            }
            terms.push(RadialTerm {
                coeff: 2.0 * term.coeff,
                beta: term.beta.bump(axis),
                m: term.m + 1,
            });
        }
        RadialProfile {
            g: self.g.clone(),
            dim: self.dim,
            terms: merge_terms(terms),
        }
    }

    pub fn derive(&self, alpha: &MultiIndex) -> RadialProfile {
        let mut out = self.clone();
        for (axis, &count) in alpha.entries().iter().enumerate() {
            for _ in 0..count {
                out = out.derive_axis(axis);
            }
        }
        out
    }

    pub fn support_radius(&self) -> f64 {
        self.g.support_s().sqrt()
    }

    pub fn smoothness(&self) -> Smoothness {
        Smoothness::Infinite
    }
}

fn merge_terms(terms: Vec<RadialTerm>) -> Vec<RadialTerm> {
    let mut merged: Vec<RadialTerm> = Vec::with_capacity(terms.len());
    for term in terms {
        if let Some(existing) = merged
            .iter_mut()
            .find(|t| t.m == term.m && t.beta == term.beta)
        {
            existing.coeff += term.coeff;
        } else {
            merged.push(term);
        }
    }
    merged.retain(|t| t.coeff != 0.0);
    merged
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_radial_matches_separable() {
        // g(s) = e^{-s/2} in 2-D equals the product of 1-D gaussians
        let p = RadialProfile::new(RadialG::Gauss { amp: 1.0 }, 2);
        let x = [0.3, -0.8];
        let expect = (-0.5 * (x[0] * x[0] + x[1] * x[1])).exp();
        assert!((p.value(&x) - expect).abs() < 1e-15);
    }

    #[test]
    fn laplacian_of_radial_gauss() {
        // For f = e^{-|x|^2/2} in 2-D: lap f = (|x|^2 - 2) f
        let p = RadialProfile::new(RadialG::Gauss { amp: 1.0 }, 2);
        let dxx = p.derive(&MultiIndex::new(vec![2, 0]));
        let dyy = p.derive(&MultiIndex::new(vec![0, 2]));
        let x = [0.7, 0.2];
        let s = x[0] * x[0] + x[1] * x[1];
        let expect = (s - 2.0) * (-0.5 * s).exp();
        let got = dxx.value(&x) + dyy.value(&x);
        assert!((got - expect).abs() < 1e-13, "{got} vs {expect}");
    }

    #[test]
    fn mixed_partial_of_bump() {
        // d^2/dxdy of g(|x|^2) = 4 x y g''(s)
        let p = RadialProfile::new(RadialG::Bump { amp: 1.0 }, 2);
        let dxy = p.derive(&MultiIndex::new(vec![1, 1]));
        let x = [0.3, 0.4];
        let s = x[0] * x[0] + x[1] * x[1];
        let g = RadialG::Bump { amp: 1.0 };
        let expect = 4.0 * x[0] * x[1] * g.deriv_m(2, s);
        assert!((dxy.value(&x) - expect).abs() < 1e-12);
    }

    #[test]
    fn bump_vanishes_outside() {
        let p = RadialProfile::new(RadialG::Bump { amp: 1.0 }, 3);
        let d = p.derive(&MultiIndex::new(vec![1, 1, 1]));
        assert_eq!(d.value(&[0.8, 0.6, 0.3]), 0.0);
    }
}
