//! Univariate analytic profiles with exact derivatives of every order.

use std::fmt::Debug;
use std::sync::Arc;

use super::jet::Jet;
use super::Smoothness;

/// A smooth (or merely continuous) profile on the line with exact derivatives.
pub trait Profile1: Send + Sync + Debug {
    /// n-th derivative at `t`; `n = 0` is the value.
    fn deriv(&self, n: usize, t: f64) -> f64;

    fn value(&self, t: f64) -> f64 {
        self.deriv(0, t)
    }

    /// Radius of an interval around 0 outside which the profile vanishes.
    fn support_radius(&self) -> f64;

    fn smoothness(&self) -> Smoothness;
}

pub type ProfileRef = Arc<dyn Profile1>;

/// `amp * exp(-1/(1-t^2))` inside `|t| < 1`, zero outside.
#[derive(Debug, Clone)]
pub struct BumpProfile {
    pub amp: f64,
}

impl BumpProfile {
    pub fn unnormalized() -> Self {
        BumpProfile { amp: 1.0 }
    }

    /// Amplitude-1 variant `exp(1 - 1/(1-t^2))`, handy as a test function.
    pub fn unit_peak() -> Self {
        BumpProfile {
            amp: std::f64::consts::E,
        }
    }
}

impl Profile1 for BumpProfile {
    fn deriv(&self, n: usize, t: f64) -> f64 {
        if t.abs() >= 1.0 {
            return 0.0;
        }
        if n == 0 {
            return self.amp * (-1.0 / (1.0 - t * t)).exp();
        }
        let tv = Jet::variable(t, n);
        let arg = Jet::constant(1.0, n).sub(&tv.mul(&tv));
        let f = Jet::constant(-1.0, n).div(&arg).exp();
        self.amp * f.derivative(n)
    }

    fn support_radius(&self) -> f64 {
        1.0
    }

    fn smoothness(&self) -> Smoothness {
        Smoothness::Infinite
    }
}

/// `amp * exp(-t^2/2)`; derivatives via the Hermite recurrence.
#[derive(Debug, Clone)]
pub struct GaussProfile {
    pub amp: f64,
}

impl Profile1 for GaussProfile {
    fn deriv(&self, n: usize, t: f64) -> f64 {
        let g = self.amp * (-0.5 * t * t).exp();
        if n == 0 {
            return g;
        }
        // probabilists' Hermite: He_{k+1} = t He_k - k He_{k-1}
        let mut prev = 1.0;
        let mut cur = t;
        for k in 1..n {
            let next = t * cur - (k as f64) * prev;
            prev = cur;
            cur = next;
        }
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        sign * cur * g
    }

    fn support_radius(&self) -> f64 {
        f64::INFINITY
    }

    fn smoothness(&self) -> Smoothness {
        Smoothness::Infinite
    }
}

/// `sin(t) / (pi t)` with the removable singularity filled in.
#[derive(Debug, Clone)]
pub struct SincProfile;

impl Profile1 for SincProfile {
    fn deriv(&self, n: usize, t: f64) -> f64 {
        let inv_pi = 1.0 / std::f64::consts::PI;
        if t.abs() >= 0.5 {
            let tv = Jet::variable(t, n);
            let (s, _) = tv.sin_cos();
            return inv_pi * s.div(&tv).derivative(n);
        }
        // series: sin(t)/t = sum (-1)^k t^{2k} / (2k+1)!
        let mut acc = 0.0;
        let mut k = n.div_ceil(2);
        loop {
            let p = 2 * k;
            // coefficient of t^p is (-1)^k / (2k+1)!; differentiate n times
            let mut coeff = if k % 2 == 0 { 1.0 } else { -1.0 };
            for i in 2..=(p + 1) {
                coeff /= i as f64;
            }
            for i in 0..n {
                coeff *= (p - i) as f64;
            }
            let term = coeff * t.powi((p - n) as i32);
            acc += term;
            k += 1;
            if term.abs() < 1e-300 || 2 * k > n + 40 {
                break;
            }
        }
        inv_pi * acc
    }

    fn support_radius(&self) -> f64 {
        f64::INFINITY
    }

    fn smoothness(&self) -> Smoothness {
        Smoothness::Infinite
    }
}

/// Antiderivative of the scaled bump: 0 left of -1, plateau right of +1.
///
/// Values inside [-1, 1] come from a prefix table of panel integrals plus a
/// Gauss-Legendre tail, giving machine-accurate evaluation at panel cost.
#[derive(Debug, Clone)]
pub struct SmoothStepProfile {
    bump_amp: f64,
    prefix: Arc<Vec<f64>>,
}

const STEP_PANELS: usize = 256;

impl SmoothStepProfile {
    pub fn new(bump_amp: f64) -> Self {
        let bump = BumpProfile { amp: bump_amp };
        let h = 2.0 / STEP_PANELS as f64;
        let mut prefix = Vec::with_capacity(STEP_PANELS + 1);
        prefix.push(0.0);
        let mut acc = 0.0;
        for j in 0..STEP_PANELS {
            let a = -1.0 + j as f64 * h;
            acc += gauss8(&bump, a, a + h);
            prefix.push(acc);
        }
        SmoothStepProfile {
            bump_amp,
            prefix: Arc::new(prefix),
        }
    }

    /// The plateau value reached right of +1 (one for a normalized bump).
    pub fn plateau(&self) -> f64 {
        self.prefix[STEP_PANELS]
    }
}

/// 8-point Gauss-Legendre on [a, b].
fn gauss8(p: &BumpProfile, a: f64, b: f64) -> f64 {
    const X: [f64; 4] = [
        0.1834346424956498,
        0.5255324099163290,
        0.7966664774136267,
        0.9602898564975363,
    ];
    const W: [f64; 4] = [
        0.3626837833783620,
        0.3137066458778873,
        0.2223810344533745,
        0.1012285362903763,
    ];
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for i in 0..4 {
        acc += W[i] * (p.value(mid - half * X[i]) + p.value(mid + half * X[i]));
    }
    acc * half
}

impl Profile1 for SmoothStepProfile {
    fn deriv(&self, n: usize, t: f64) -> f64 {
        if n == 0 {
            if t <= -1.0 {
                return 0.0;
            }
            if t >= 1.0 {
                return self.plateau();
            }
            let h = 2.0 / STEP_PANELS as f64;
            let j = (((t + 1.0) / h).floor() as usize).min(STEP_PANELS - 1);
            let a = -1.0 + j as f64 * h;
            let bump = BumpProfile { amp: self.bump_amp };
            return self.prefix[j] + gauss8(&bump, a, t);
        }
        BumpProfile { amp: self.bump_amp }.deriv(n - 1, t)
    }

    fn support_radius(&self) -> f64 {
        f64::INFINITY
    }

    fn smoothness(&self) -> Smoothness {
        Smoothness::Infinite
    }
}

/// `amp * (1-t^2)^k` inside `|t| < 1`: compactly supported, C^{k-1}.
#[derive(Debug, Clone)]
pub struct PolyBumpProfile {
    coeffs: Vec<f64>,
    k: u32,
}

impl PolyBumpProfile {
    pub fn new(k: u32, amp: f64) -> Self {
        // expand amp * (1 - t^2)^k
        let mut coeffs = vec![0.0; 2 * k as usize + 1];
        let mut binom = 1.0;
        for j in 0..=k {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            coeffs[2 * j as usize] = amp * sign * binom;
            binom *= (k - j) as f64 / (j + 1) as f64;
        }
        PolyBumpProfile { coeffs, k }
    }
}

impl Profile1 for PolyBumpProfile {
    fn deriv(&self, n: usize, t: f64) -> f64 {
        if t.abs() >= 1.0 {
            return 0.0;
        }
        poly_deriv(&self.coeffs, n, t)
    }

    fn support_radius(&self) -> f64 {
        1.0
    }

    fn smoothness(&self) -> Smoothness {
        Smoothness::Finite(self.k.saturating_sub(1))
    }
}

/// Continuous piecewise-linear profile from sorted knots; zero outside.
#[derive(Debug, Clone)]
pub struct PiecewiseLinearProfile {
    knots: Vec<(f64, f64)>,
}

impl PiecewiseLinearProfile {
    pub fn new(knots: Vec<(f64, f64)>) -> Self {
        debug_assert!(knots.windows(2).all(|w| w[0].0 < w[1].0));
        PiecewiseLinearProfile { knots }
    }

    /// Symmetric triangle of the given half-width and peak height.
    pub fn triangle(radius: f64, peak: f64) -> Self {
        Self::new(vec![(-radius, 0.0), (0.0, peak), (radius, 0.0)])
    }
}

impl Profile1 for PiecewiseLinearProfile {
    fn deriv(&self, n: usize, t: f64) -> f64 {
        assert_eq!(n, 0, "piecewise-linear profile is not differentiable");
        let first = self.knots[0];
        let last = self.knots[self.knots.len() - 1];
        if t <= first.0 || t >= last.0 {
            return 0.0;
        }
        for w in self.knots.windows(2) {
            if t <= w[1].0 {
                let s = (t - w[0].0) / (w[1].0 - w[0].0);
                return w[0].1 + s * (w[1].1 - w[0].1);
            }
        }
        0.0
    }

    fn support_radius(&self) -> f64 {
        self.knots[0].0.abs().max(self.knots[self.knots.len() - 1].0.abs())
    }

    fn smoothness(&self) -> Smoothness {
        Smoothness::Finite(0)
    }
}

/// `amp * cos(freq t + phase)`.
#[derive(Debug, Clone)]
pub struct CosineProfile {
    pub amp: f64,
    pub freq: f64,
    pub phase: f64,
}

impl Profile1 for CosineProfile {
    fn deriv(&self, n: usize, t: f64) -> f64 {
        let shift = n as f64 * std::f64::consts::FRAC_PI_2;
        self.amp * self.freq.powi(n as i32) * (self.freq * t + self.phase + shift).cos()
    }

    fn support_radius(&self) -> f64 {
        f64::INFINITY
    }

    fn smoothness(&self) -> Smoothness {
        Smoothness::Infinite
    }
}

/// Plain polynomial `sum coeffs[i] t^i`.
#[derive(Debug, Clone)]
pub struct PolyProfile {
    pub coeffs: Vec<f64>,
}

impl Profile1 for PolyProfile {
    fn deriv(&self, n: usize, t: f64) -> f64 {
        poly_deriv(&self.coeffs, n, t)
    }

    fn support_radius(&self) -> f64 {
        f64::INFINITY
    }

    fn smoothness(&self) -> Smoothness {
        Smoothness::Infinite
    }
}

fn poly_deriv(coeffs: &[f64], n: usize, t: f64) -> f64 {
    let mut acc = 0.0;
    for (p, &c) in coeffs.iter().enumerate().rev() {
        if p < n || c == 0.0 {
            continue;
        }
        let mut factor = c;
        for i in 0..n {
            factor *= (p - i) as f64;
        }
        acc += factor * t.powi((p - n) as i32);
    }
    acc
}

/// `inner((t - shift) / scale)`.
#[derive(Debug, Clone)]
pub struct AffineProfile {
    pub inner: ProfileRef,
    pub scale: f64,
    pub shift: f64,
}

impl Profile1 for AffineProfile {
    fn deriv(&self, n: usize, t: f64) -> f64 {
        self.inner.deriv(n, (t - self.shift) / self.scale) / self.scale.powi(n as i32)
    }

    fn support_radius(&self) -> f64 {
        self.shift.abs() + self.scale * self.inner.support_radius()
    }

    fn smoothness(&self) -> Smoothness {
        self.inner.smoothness()
    }
}

/// Pointwise product, differentiated by the Leibniz rule.
#[derive(Debug, Clone)]
pub struct ProductProfile {
    pub a: ProfileRef,
    pub b: ProfileRef,
}

impl Profile1 for ProductProfile {
    fn deriv(&self, n: usize, t: f64) -> f64 {
        let mut acc = 0.0;
        let mut binom = 1.0;
        for k in 0..=n {
            acc += binom * self.a.deriv(k, t) * self.b.deriv(n - k, t);
            binom *= (n - k) as f64 / (k + 1) as f64;
        }
        acc
    }

    fn support_radius(&self) -> f64 {
        self.a.support_radius().min(self.b.support_radius())
    }

    fn smoothness(&self) -> Smoothness {
        self.a.smoothness().min(self.b.smoothness())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Normalization of the 1-D bump, from independent high-precision quadrature.
    const C1: f64 = 2.252_283_621_043_581;

    #[test]
    fn bump_value_and_symmetry() {
        let b = BumpProfile { amp: C1 };
        assert!((b.value(0.0) - C1 * (-1.0f64).exp()).abs() < 1e-15);
        assert_eq!(b.value(1.0), 0.0);
        assert_eq!(b.value(-1.2), 0.0);
        assert_eq!(b.value(0.37), b.value(-0.37));
    }

    #[test]
    fn bump_first_derivative_matches_closed_form() {
        // psi'(t) = psi(t) * (-2t / (1-t^2)^2)
        let b = BumpProfile { amp: 1.0 };
        for &t in &[0.0, 0.25, -0.6, 0.9] {
            let d = 1.0 - t * t;
            let expect = b.value(t) * (-2.0 * t / (d * d));
            assert!((b.deriv(1, t) - expect).abs() < 1e-12 * (1.0 + expect.abs()));
        }
    }

    #[test]
    fn gauss_second_derivative() {
        // (e^{-t^2/2})'' = (t^2 - 1) e^{-t^2/2}
        let g = GaussProfile { amp: 1.0 };
        for &t in &[0.0, 0.8, -1.7, 3.0] {
            let expect = (t * t - 1.0) * (-0.5 * t * t).exp();
            assert!((g.deriv(2, t) - expect).abs() < 1e-13);
        }
    }

    #[test]
    fn sinc_peak_and_series_matches_jets() {
        let s = SincProfile;
        assert!((s.value(0.0) - 1.0 / std::f64::consts::PI).abs() < 1e-16);
        // series region and jet region must agree where they meet
        for n in 0..4 {
            let lo = s.deriv(n, 0.499);
            let hi = s.deriv(n, 0.501);
            assert!(
                (lo - hi).abs() < 1e-8 * (1.0 + lo.abs()),
                "n={n}: {lo} vs {hi}"
            );
        }
    }

    #[test]
    fn smooth_step_frozen_values() {
        // Oracle values from independent adaptive quadrature.
        let step = SmoothStepProfile::new(C1);
        assert!((step.value(0.0) - 0.5).abs() < 1e-12);
        assert!((step.value(0.5) - 0.877_032_716_722_670_9).abs() < 1e-12);
        assert!((step.value(-0.5) - 0.122_967_283_277_329_08).abs() < 1e-12);
        assert!((step.value(0.25) - 0.702_744_645_930_114_7).abs() < 1e-12);
        assert_eq!(step.value(-1.0), 0.0);
        assert!((step.value(1.3) - 1.0).abs() < 1e-12);
        // derivative of the step is the bump
        assert!((step.deriv(1, 0.3) - BumpProfile { amp: C1 }.value(0.3)).abs() < 1e-14);
    }

    #[test]
    fn poly_bump_derivatives() {
        // (1-t^2)^2: f'(t) = -4t + 4t^3
        let p = PolyBumpProfile::new(2, 1.0);
        assert_eq!(p.value(0.0), 1.0);
        assert_eq!(p.value(1.0), 0.0);
        for &t in &[0.2, -0.7] {
            assert!((p.deriv(1, t) - (-4.0 * t + 4.0 * t * t * t)).abs() < 1e-14);
        }
        assert_eq!(p.smoothness(), Smoothness::Finite(1));
    }

    #[test]
    fn product_leibniz() {
        // bump * cos: check first derivative against manual product rule
        let a: ProfileRef = Arc::new(BumpProfile { amp: 1.0 });
        let b: ProfileRef = Arc::new(CosineProfile {
            amp: 1.0,
            freq: 3.0,
            phase: 0.0,
        });
        let p = ProductProfile {
            a: Arc::clone(&a),
            b: Arc::clone(&b),
        };
        let t = 0.4;
        let expect = a.deriv(1, t) * b.value(t) + a.value(t) * b.deriv(1, t);
        assert!((p.deriv(1, t) - expect).abs() < 1e-13);
    }
}
