//! Truncated Taylor-series arithmetic in one variable.
//!
//! A `Jet` tracks the Taylor coefficients of an expression at a point, so the
//! n-th derivative of any composed profile (rational, exp, trig) comes out
//! exact to roundoff instead of going through finite differences.

#[derive(Debug, Clone)]
pub struct Jet {
    /// Taylor coefficients: `c[i] = f^(i)(t0) / i!`.
    c: Vec<f64>,
}

impl Jet {
    /// The identity `t` expanded at `t0`, truncated after `order` derivatives.
    pub fn variable(t0: f64, order: usize) -> Self {
        let mut c = vec![0.0; order + 1];
        c[0] = t0;
        if order >= 1 {
            c[1] = 1.0;
        }
        Jet { c }
    }

    pub fn constant(v: f64, order: usize) -> Self {
        let mut c = vec![0.0; order + 1];
        c[0] = v;
        Jet { c }
    }

    pub fn order(&self) -> usize {
        self.c.len() - 1
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// `n!` times the n-th Taylor coefficient: the n-th derivative.
    pub fn derivative(&self, n: usize) -> f64 {
        let mut fact = 1.0;
        for i in 1..=n {
            fact *= i as f64;
        }
        self.c[n] * fact
    }

    pub fn add(&self, rhs: &Jet) -> Jet {
        let mut c = self.c.clone();
        for (a, b) in c.iter_mut().zip(&rhs.c) {
            *a += b;
        }
        Jet { c }
    }

    pub fn sub(&self, rhs: &Jet) -> Jet {
        let mut c = self.c.clone();
        for (a, b) in c.iter_mut().zip(&rhs.c) {
            *a -= b;
        }
        Jet { c }
    }

    pub fn scale(&self, s: f64) -> Jet {
        Jet {
            c: self.c.iter().map(|a| a * s).collect(),
        }
    }

    pub fn shift(&self, s: f64) -> Jet {
        let mut c = self.c.clone();
        c[0] += s;
        Jet { c }
    }

    pub fn mul(&self, rhs: &Jet) -> Jet {
        let n = self.c.len();
        let mut c = vec![0.0; n];
        for i in 0..n {
            if self.c[i] == 0.0 {
                continue;
            }
            for j in 0..n - i {
                c[i + j] += self.c[i] * rhs.c[j];
            }
        }
        Jet { c }
    }

    /// Division; requires a nonzero constant term in the divisor.
    pub fn div(&self, rhs: &Jet) -> Jet {
        let n = self.c.len();
        let b0 = rhs.c[0];
        debug_assert!(b0 != 0.0, "jet division by zero constant term");
        let mut q = vec![0.0; n];
        for k in 0..n {
            let mut acc = self.c[k];
            for j in 1..=k {
                acc -= rhs.c[j] * q[k - j];
            }
            q[k] = acc / b0;
        }
        Jet { c: q }
    }

    pub fn recip(&self) -> Jet {
        Jet::constant(1.0, self.order()).div(self)
    }

    pub fn exp(&self) -> Jet {
        let n = self.c.len();
        let mut y = vec![0.0; n];
        y[0] = self.c[0].exp();
        for k in 1..n {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += (j as f64) * self.c[j] * y[k - j];
            }
            y[k] = acc / k as f64;
        }
        Jet { c: y }
    }

    /// Sine and cosine computed together through the coupled recurrence.
    pub fn sin_cos(&self) -> (Jet, Jet) {
        let n = self.c.len();
        let mut s = vec![0.0; n];
        let mut c = vec![0.0; n];
        s[0] = self.c[0].sin();
        c[0] = self.c[0].cos();
        for k in 1..n {
            let mut acc_s = 0.0;
            let mut acc_c = 0.0;
            for j in 1..=k {
                let u = (j as f64) * self.c[j];
                acc_s += u * c[k - j];
                acc_c += u * s[k - j];
            }
            s[k] = acc_s / k as f64;
            c[k] = -acc_c / k as f64;
        }
        (Jet { c: s }, Jet { c: c })
    }

    pub fn powi(&self, mut e: u32) -> Jet {
        let mut acc = Jet::constant(1.0, self.order());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
    }

    #[test]
    fn exp_derivatives() {
        // f(t) = exp(t^2), f'(t) = 2t exp(t^2), f''(t) = (2 + 4t^2) exp(t^2)
        let t0 = 0.7;
        let t = Jet::variable(t0, 3);
        let f = t.mul(&t).exp();
        let e = (t0 * t0).exp();
        assert!(close(f.derivative(0), e, 1e-14));
        assert!(close(f.derivative(1), 2.0 * t0 * e, 1e-14));
        assert!(close(f.derivative(2), (2.0 + 4.0 * t0 * t0) * e, 1e-14));
    }

    #[test]
    fn rational_derivatives() {
        // f(t) = 1/(1 - t^2); f'(t) = 2t/(1-t^2)^2
        let t0 = 0.3;
        let t = Jet::variable(t0, 2);
        let f = Jet::constant(1.0, 2).sub(&t.mul(&t)).recip();
        let d = 1.0 - t0 * t0;
        assert!(close(f.derivative(0), 1.0 / d, 1e-14));
        assert!(close(f.derivative(1), 2.0 * t0 / (d * d), 1e-13));
    }

    #[test]
    fn sin_cos_high_order() {
        let t0 = 1.1;
        let t = Jet::variable(t0, 5);
        let (s, _) = t.sin_cos();
        // d^4/dt^4 sin = sin
        assert!(close(s.derivative(4), t0.sin(), 1e-12));
        assert!(close(s.derivative(5), t0.cos(), 1e-12));
    }
}
