//! Truncated Taylor arithmetic: a `Jet` holds `f(x₀), f'(x₀), f''(x₀)/2!, …, f⁽⁴⁾(x₀)/4!`.
//!
//! Products, reciprocals and exponentials follow the usual coefficient recurrences, so a
//! profile written once in terms of jets yields its first four derivatives exactly.

use std::ops::{Add, Mul, Neg, Sub};

pub(crate) const ORDER: usize = 4;
const N: usize = ORDER + 1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Jet(pub [f64; N]);

impl Jet {
    pub fn constant(c: f64) -> Self {
        let mut a = [0.0; N];
        a[0] = c;
        Jet(a)
    }

    /// The jet of `x ↦ (x − x₀)·slope + value` at `x₀`.
    pub fn linear(value: f64, slope: f64) -> Self {
        let mut a = [0.0; N];
        a[0] = value;
        a[1] = slope;
        Jet(a)
    }

    pub fn zero() -> Self {
        Jet([0.0; N])
    }

    /// `n`-th derivative (not the Taylor coefficient).
    pub fn derivative(&self, n: usize) -> f64 {
        const FACT: [f64; N] = [1.0, 1.0, 2.0, 6.0, 24.0];
        self.0[n] * FACT[n]
    }

    pub fn recip(self) -> Self {
        let g = self.0;
        let mut h = [0.0; N];
        h[0] = 1.0 / g[0];
        for k in 1..N {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += g[j] * h[k - j];
            }
            h[k] = -acc * h[0];
        }
        Jet(h)
    }

    pub fn exp(self) -> Self {
        let g = self.0;
        let mut h = [0.0; N];
        h[0] = g[0].exp();
        for k in 1..N {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += j as f64 * g[j] * h[k - j];
            }
            h[k] = acc / k as f64;
        }
        Jet(h)
    }

    pub fn powi(self, p: u32) -> Self {
        let mut out = Jet::constant(1.0);
        for _ in 0..p {
            out = out * self;
        }
        out
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        let mut a = self.0;
        for (x, y) in a.iter_mut().zip(o.0) {
            *x += y;
        }
        Jet(a)
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        self + (-o)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet(self.0.map(|v| -v))
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let mut c = [0.0; N];
        for i in 0..N {
            for j in 0..N - i {
                c[i + j] += self.0[i] * o.0[j];
            }
        }
        Jet(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_of_linear_matches_closed_form() {
        let x = Jet::linear(0.3, 1.0);
        let e = (x * x).exp();
        // d/dx e^{x²} = 2x e^{x²}; d² = (2 + 4x²) e^{x²}
        let v = (0.09f64).exp();
        assert!((e.derivative(1) - 0.6 * v).abs() < 1e-14);
        assert!((e.derivative(2) - (2.0 + 4.0 * 0.09) * v).abs() < 1e-13);
    }

    #[test]
    fn recip_inverts() {
        let x = Jet::linear(0.7, 1.0);
        let y = (x * x + Jet::constant(1.0)).recip() * (x * x + Jet::constant(1.0));
        assert!((y.0[0] - 1.0).abs() < 1e-15);
        for k in 1..N {
            assert!(y.0[k].abs() < 1e-14);
        }
    }
}
