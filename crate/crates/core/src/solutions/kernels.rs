//! Classical fundamental-solution kernels.
//!
//! Each kernel is locally integrable with a point singularity at the origin
//! and enters the artifact only through its mollification; the catalog
//! treats the closed forms as conjectures validated by the delta test on
//! `P(d) (E * delta_rho)`.

use crate::scalefield::ClassicalKernel;

/// Step kernel for `d/dx`: `H(x)`.
#[derive(Debug, Clone)]
pub struct HeavisideKernel;

impl ClassicalKernel for HeavisideKernel {
    fn dim(&self) -> usize {
        1
    }

    fn eval(&self, x: &[f64]) -> f64 {
        if x[0] > 0.0 {
            1.0
        } else if x[0] < 0.0 {
            0.0
        } else {
            0.5
        }
    }

    fn label(&self) -> String {
        "H".into()
    }

    fn singularity(&self) -> String {
        "jump at x = 0".into()
    }
}

/// Kernel for the 1-D second derivative: `|x| / 2`.
#[derive(Debug, Clone)]
pub struct AbsHalfKernel;

impl ClassicalKernel for AbsHalfKernel {
    fn dim(&self) -> usize {
        1
    }

    fn eval(&self, x: &[f64]) -> f64 {
        0.5 * x[0].abs()
    }

    fn label(&self) -> String {
        "|x|/2".into()
    }

    fn singularity(&self) -> String {
        "kink at x = 0".into()
    }
}

/// Logarithmic kernel for the 2-D Laplacian: `log|x| / (2 pi)`.
#[derive(Debug, Clone)]
pub struct LogKernel2d;

impl ClassicalKernel for LogKernel2d {
    fn dim(&self) -> usize {
        2
    }

    fn eval(&self, x: &[f64]) -> f64 {
        let r2 = x[0] * x[0] + x[1] * x[1];
        if r2 == 0.0 {
            return 0.0;
        }
        r2.ln() / (4.0 * std::f64::consts::PI)
    }

    fn label(&self) -> String {
        "log|x|/(2pi)".into()
    }

    fn singularity(&self) -> String {
        "logarithmic at the origin".into()
    }
}

/// Newton kernel for the 3-D Laplacian: `-1 / (4 pi |x|)`.
#[derive(Debug, Clone)]
pub struct NewtonKernel3d;

impl ClassicalKernel for NewtonKernel3d {
    fn dim(&self) -> usize {
        3
    }

    fn eval(&self, x: &[f64]) -> f64 {
        let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
        if r == 0.0 {
            return 0.0;
        }
        -1.0 / (4.0 * std::f64::consts::PI * r)
    }

    fn label(&self) -> String {
        "-1/(4pi|x|)".into()
    }

    fn singularity(&self) -> String {
        "1/r at the origin".into()
    }
}

/// Forward heat kernel in coordinates `(t, x)`:
/// `H(t) (4 pi t)^{-1/2} exp(-x^2 / 4t)`.
#[derive(Debug, Clone)]
pub struct HeatKernel1p1;

impl ClassicalKernel for HeatKernel1p1 {
    fn dim(&self) -> usize {
        2
    }

    fn eval(&self, z: &[f64]) -> f64 {
        let (t, x) = (z[0], z[1]);
        if t <= 0.0 {
            return 0.0;
        }
        (-x * x / (4.0 * t)).exp() / (4.0 * std::f64::consts::PI * t).sqrt()
    }

    fn label(&self) -> String {
        "heat(t,x)".into()
    }

    fn singularity(&self) -> String {
        "concentration at (t,x) = (0,0), zero for t < 0".into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heat_kernel_has_unit_spatial_mass() {
        // for fixed t > 0: int over x = 1
        let k = HeatKernel1p1;
        let t = 0.37;
        let n = 4000;
        let h = 40.0 / n as f64;
        let mut acc = 0.0;
        for i in 0..n {
            let x = -20.0 + (i as f64 + 0.5) * h;
            acc += k.eval(&[t, x]) * h;
        }
        assert!((acc - 1.0).abs() < 1e-10, "mass {acc}");
    }

    #[test]
    fn newton_kernel_is_radial() {
        let k = NewtonKernel3d;
        let a = k.eval(&[0.3, 0.0, 0.4]);
        let b = k.eval(&[0.0, 0.5, 0.0]);
        assert!((a - b).abs() < 1e-15);
        assert!((a + 1.0 / (2.0 * std::f64::consts::PI)).abs() < 1e-12);
    }
}
