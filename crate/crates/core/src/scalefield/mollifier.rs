//! Mollifier profiles: unit-integral kernels that generate delta families.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use super::profile::{ProfileNd, RadialG, RadialProfile, SincProfile};
use crate::error::{Error, Result};

/// Tolerance for the unit-integral self check.
pub const NORMALIZATION_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MollifierKind {
    /// Compactly supported `C_d * exp(-1/(1-|x|^2))` on the unit ball.
    Bump,
    /// `(2 pi)^{-d/2} exp(-|x|^2/2)`; integrable with finite absolute mass.
    Gaussian,
    /// `sin(x)/(pi x)`; one-dimensional, conditionally integrable.
    Sinc,
}

impl MollifierKind {
    pub fn name(&self) -> &'static str {
        match self {
            MollifierKind::Bump => "bump",
            MollifierKind::Gaussian => "gaussian",
            MollifierKind::Sinc => "sinc",
        }
    }
}

impl std::str::FromStr for MollifierKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bump" => Ok(MollifierKind::Bump),
            "gaussian" => Ok(MollifierKind::Gaussian),
            "sinc" => Ok(MollifierKind::Sinc),
            other => Err(Error::UnknownName(format!("mollifier kind '{other}'"))),
        }
    }
}

/// A fixed smooth profile with unit integral.
#[derive(Debug, Clone)]
pub struct Mollifier {
    kind: MollifierKind,
    dimension: usize,
    support_radius: f64,
    normalization: f64,
    abs_integral: f64,
    profile: ProfileNd,
}

impl Mollifier {
    pub fn new(kind: MollifierKind, dimension: usize) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidMollifier("dimension must be positive".into()));
        }
        match kind {
            MollifierKind::Bump => {
                let norm = bump_normalization(dimension);
                Ok(Mollifier {
                    kind,
                    dimension,
                    support_radius: 1.0,
                    normalization: norm,
                    abs_integral: 1.0,
                    profile: ProfileNd::Radial(RadialProfile::new(
                        RadialG::Bump { amp: norm },
                        dimension,
                    )),
                })
            }
            MollifierKind::Gaussian => {
                let norm = (2.0 * std::f64::consts::PI).powf(-(dimension as f64) / 2.0);
                Ok(Mollifier {
                    kind,
                    dimension,
                    support_radius: f64::INFINITY,
                    normalization: norm,
                    abs_integral: 1.0,
                    profile: ProfileNd::Radial(RadialProfile::new(
                        RadialG::Gauss { amp: norm },
                        dimension,
                    )),
                })
            }
            MollifierKind::Sinc => {
                if dimension != 1 {
                    return Err(Error::InvalidMollifier(
                        "sinc profile is one-dimensional only".into(),
                    ));
                }
                Ok(Mollifier {
                    kind,
                    dimension: 1,
                    support_radius: f64::INFINITY,
                    normalization: 1.0 / std::f64::consts::PI,
                    abs_integral: f64::INFINITY,
                    profile: ProfileNd::Uni(std::sync::Arc::new(SincProfile)),
                })
            }
        }
    }

    pub fn kind(&self) -> MollifierKind {
        self.kind
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn support_radius(&self) -> f64 {
        self.support_radius
    }

    /// Multiplier making the integral one (for the bump this is the cached
    /// adaptive-quadrature constant; no closed form exists).
    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    /// `int |psi|`; infinite only for the sinc profile.
    pub fn abs_integral(&self) -> f64 {
        self.abs_integral
    }

    pub fn profile(&self) -> &ProfileNd {
        &self.profile
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        self.profile.value(x)
    }

    /// Recomputes `int psi` by composite quadrature, for the unit-integral
    /// invariant check. Uses the radial reduction for bump/gaussian.
    pub fn integral_check(&self) -> f64 {
        match self.kind {
            MollifierKind::Bump => {
                let amp = self.normalization;
                let d = self.dimension;
                surface_area(d)
                    * adaptive_simpson(
                        &|r: f64| r.powi(d as i32 - 1) * amp * bump_radial(r),
                        0.0,
                        1.0,
                        1e-13,
                    )
            }
            MollifierKind::Gaussian => {
                let amp = self.normalization;
                let d = self.dimension;
                surface_area(d)
                    * adaptive_simpson(
                        &|r: f64| r.powi(d as i32 - 1) * amp * (-0.5 * r * r).exp(),
                        0.0,
                        12.0,
                        1e-13,
                    )
            }
            // Improper integral: int sin(x)/(pi x) = 1. Integrate a long
            // window and add the asymptotic tail correction 2*cos(R)/(pi*R).
            MollifierKind::Sinc => {
                let r_end = 4000.0 * std::f64::consts::PI;
                let body = 2.0 * adaptive_simpson(
                    &|x: f64| SincProfile.value(x),
                    0.0,
                    r_end,
                    1e-11,
                );
                body + 2.0 * r_end.cos() / (std::f64::consts::PI * r_end)
            }
        }
    }
}

/// Constructs a mollifier profile of the given kind and dimension.
pub fn make_mollifier(kind: MollifierKind, dimension: usize) -> Result<Mollifier> {
    Mollifier::new(kind, dimension)
}

fn bump_radial(r: f64) -> f64 {
    if r >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - r * r)).exp()
    }
}

/// Surface area of the unit sphere in R^d.
pub fn surface_area(d: usize) -> f64 {
    // 2 pi^{d/2} / Gamma(d/2)
    let half = d as f64 / 2.0;
    2.0 * std::f64::consts::PI.powf(half) / gamma_half_integer(d)
}

/// Gamma(d/2) for integer d >= 1.
fn gamma_half_integer(d: usize) -> f64 {
    let mut z = d as f64 / 2.0;
    let mut acc = 1.0;
    while z > 1.5 {
        z -= 1.0;
        acc *= z;
    }
    if (z - 1.0).abs() < 1e-12 {
        acc
    } else {
        acc * std::f64::consts::PI.sqrt()
    }
}

/// The bump normalization constant, computed once per dimension by adaptive
/// quadrature at 1e-12 and cached.
fn bump_normalization(d: usize) -> f64 {
    static CACHE: OnceLock<Mutex<HashMap<usize, f64>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("normalization cache poisoned");
    *guard.entry(d).or_insert_with(|| {
        let radial = |r: f64| r.powi(d as i32 - 1) * bump_radial(r);
        let integral = surface_area(d) * adaptive_simpson(&radial, 0.0, 1.0, 1e-13);
        1.0 / integral
    })
}

/// Adaptive Simpson with Richardson stopping estimate.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(a: f64, fa: f64, b: f64, fb: f64, fm: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(a, fa, m, fm, flm);
        let right = simpson(m, fm, b, fb, frm);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, fa, m, fm, flm, left, 0.5 * tol, depth - 1)
            + recurse(f, m, fm, b, fb, frm, right, 0.5 * tol, depth - 1)
    }
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = simpson(a, fa, b, fb, fm);
    recurse(f, a, fa, b, fb, fm, whole, tol, 48)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Frozen oracles from independent high-precision quadrature.
    const C1: f64 = 2.252_283_621_043_581;
    const C2: f64 = 2.143_565_775_792_236_6;
    const C3: f64 = 2.267_116_739_608_326_5;

    #[test]
    fn bump_normalization_matches_oracle() {
        for (d, expect) in [(1, C1), (2, C2), (3, C3)] {
            let m = make_mollifier(MollifierKind::Bump, d).unwrap();
            assert!(
                (m.normalization() - expect).abs() < 1e-10 * expect,
                "d={d}: {} vs {expect}",
                m.normalization()
            );
        }
    }

    #[test]
    fn unit_integral_within_tolerance() {
        for kind in [MollifierKind::Bump, MollifierKind::Gaussian] {
            for d in 1..=3 {
                let m = make_mollifier(kind, d).unwrap();
                let integral = m.integral_check();
                assert!(
                    (integral - 1.0).abs() < NORMALIZATION_TOL,
                    "{:?} d={d}: {integral}",
                    kind
                );
            }
        }
        let sinc = make_mollifier(MollifierKind::Sinc, 1).unwrap();
        assert!((sinc.integral_check() - 1.0).abs() < 1e-7);
    }

    #[test]
    fn gaussian_2d_metadata() {
        let m = make_mollifier(MollifierKind::Gaussian, 2).unwrap();
        assert_eq!(m.abs_integral(), 1.0);
        let expect = 1.0 / (2.0 * std::f64::consts::PI);
        assert!((m.value(&[0.0, 0.0]) - expect).abs() < 1e-15);
    }

    #[test]
    fn sinc_peak_and_rejections() {
        let m = make_mollifier(MollifierKind::Sinc, 1).unwrap();
        assert!((m.value(&[0.0]) - 1.0 / std::f64::consts::PI).abs() < 1e-15);
        assert_eq!(m.support_radius(), f64::INFINITY);
        assert!(make_mollifier(MollifierKind::Sinc, 2).is_err());
        assert!(make_mollifier(MollifierKind::Bump, 0).is_err());
    }

    #[test]
    fn bump_vanishes_outside_unit_ball() {
        let m = make_mollifier(MollifierKind::Bump, 2).unwrap();
        assert_eq!(m.value(&[0.9, 0.5]), 0.0);
        assert!(m.value(&[0.5, 0.5]) > 0.0);
    }

    #[test]
    fn surface_areas() {
        assert!((surface_area(1) - 2.0).abs() < 1e-14);
        assert!((surface_area(2) - 2.0 * std::f64::consts::PI).abs() < 1e-14);
        assert!((surface_area(3) - 4.0 * std::f64::consts::PI).abs() < 1e-13);
    }
}
