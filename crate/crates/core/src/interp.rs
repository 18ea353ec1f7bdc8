//! Cubic splines (natural or periodic) on strictly increasing abscissae.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Spline {
    x: Vec<f64>,
    y: Vec<f64>,
    // second derivatives at the knots
    m: Vec<f64>,
}

impl Spline {
    fn check(x: &[f64], y: &[f64], min: usize) -> Result<()> {
        let n = x.len();
        if n < min || y.len() != n {
            return Err(Error::Parameter(format!(
                "spline needs at least {min} knots and matching columns, got {n} and {}",
                y.len()
            )));
        }
        if x.windows(2).any(|w| !(w[1] > w[0])) || x.iter().chain(y).any(|v| !v.is_finite()) {
            return Err(Error::Parameter(
                "spline abscissae must be finite and strictly increasing".into(),
            ));
        }
        Ok(())
    }

    /// Natural end conditions (zero second derivative at both ends).
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        Self::check(&x, &y, 2)?;
        let n = x.len();
        let mut m = vec![0.0; n];
        if n > 2 {
            // Thomas algorithm for the interior second derivatives.
            let mut diag = vec![0.0; n];
            let mut rhs = vec![0.0; n];
            for i in 1..n - 1 {
                let h0 = x[i] - x[i - 1];
                let h1 = x[i + 1] - x[i];
                diag[i] = 2.0 * (h0 + h1);
                rhs[i] = 6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
            }
            for i in 2..n - 1 {
                let h = x[i] - x[i - 1];
                let w = h / diag[i - 1];
                diag[i] -= w * h;
                rhs[i] -= w * rhs[i - 1];
            }
            for i in (1..n - 1).rev() {
                let upper = if i + 1 < n - 1 {
                    (x[i + 1] - x[i]) * m[i + 1]
                } else {
                    0.0
                };
                m[i] = (rhs[i] - upper) / diag[i];
            }
        }
        Ok(Spline { x, y, m })
    }

    /// Periodic end conditions: the first and last knots are one period apart and
    /// `y` must close up, `y[0] = y[n−1]` to within `1e-9·(1 + |y[0]|)`.
    pub fn periodic(x: Vec<f64>, mut y: Vec<f64>) -> Result<Self> {
        Self::check(&x, &y, 4)?;
        let n = x.len();
        if (y[n - 1] - y[0]).abs() > 1e-9 * (1.0 + y[0].abs()) {
            return Err(Error::Parameter(format!(
                "periodic data must close up, got {} at the start and {} one period later",
                y[0],
                y[n - 1]
            )));
        }
        y[n - 1] = y[0];
        // Unknowns m[0..k], m[k] = m[0]; cyclic tridiagonal system solved by Sherman-Morrison.
        let k = n - 1;
        let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
        let prev = |i: usize| (i + k - 1) % k;
        let mut sub = vec![0.0; k];
        let mut diag = vec![0.0; k];
        let mut sup = vec![0.0; k];
        let mut rhs = vec![0.0; k];
        for i in 0..k {
            let (h0, h1) = (h[prev(i)], h[i]);
            sub[i] = h0;
            sup[i] = h1;
            diag[i] = 2.0 * (h0 + h1);
            let y0 = y[prev(i)];
            rhs[i] = 6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y0) / h0);
        }
        let (alpha, beta) = (sup[k - 1], sub[0]);
        let gamma = -diag[0];
        let mut d = diag.clone();
        d[0] -= gamma;
        d[k - 1] -= alpha * beta / gamma;
        let mut u = vec![0.0; k];
        u[0] = gamma;
        u[k - 1] = alpha;
        let solve = |rhs: &[f64]| -> Vec<f64> {
            let mut c = vec![0.0; k];
            let mut z = vec![0.0; k];
            c[0] = sup[0] / d[0];
            z[0] = rhs[0] / d[0];
            for i in 1..k {
                let w = d[i] - sub[i] * c[i - 1];
                c[i] = sup[i] / w;
                z[i] = (rhs[i] - sub[i] * z[i - 1]) / w;
            }
            for i in (0..k - 1).rev() {
                z[i] -= c[i] * z[i + 1];
            }
            z
        };
        let yv = solve(&rhs);
        let q = solve(&u);
        let f = (yv[0] + beta * yv[k - 1] / gamma) / (1.0 + q[0] + beta * q[k - 1] / gamma);
        let mut m: Vec<f64> = yv.iter().zip(&q).map(|(a, b)| a - f * b).collect();
        m.push(m[0]);
        Ok(Spline { x, y, m })
    }

    pub fn range(&self) -> (f64, f64) {
        (self.x[0], self.x[self.x.len() - 1])
    }

    fn locate(&self, t: f64) -> usize {
        let i = self.x.partition_point(|&v| v <= t);
        i.clamp(1, self.x.len() - 1) - 1
    }

    /// Value and first derivative; `None` outside the knot range.
    pub fn eval(&self, t: f64) -> Option<(f64, f64)> {
        let (lo, hi) = self.range();
        if !(t >= lo && t <= hi) {
            return None;
        }
        let i = self.locate(t);
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - t) / h;
        let b = (t - self.x[i]) / h;
        let (m0, m1) = (self.m[i], self.m[i + 1]);
        let v = a * self.y[i]
            + b * self.y[i + 1]
            + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * h * h / 6.0;
        let d = (self.y[i + 1] - self.y[i]) / h
            + ((1.0 - 3.0 * a * a) * m0 + (3.0 * b * b - 1.0) * m1) * h / 6.0;
        Some((v, d))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_linear_data() {
        let x: Vec<f64> = (0..6).map(|i| i as f64 * 0.7).collect();
        let y: Vec<f64> = x.iter().map(|v| 3.0 - 2.0 * v).collect();
        let s = Spline::new(x, y).unwrap();
        let (v, d) = s.eval(1.234).unwrap();
        assert!((v - (3.0 - 2.0 * 1.234)).abs() < 1e-14);
        assert!((d + 2.0).abs() < 1e-13);
        assert!(s.eval(-0.1).is_none());
    }

    #[test]
    fn periodic_spline_has_no_end_defect() {
        let n = 64;
        let x: Vec<f64> = (0..=n)
            .map(|i| std::f64::consts::TAU * i as f64 / n as f64)
            .collect();
        let y: Vec<f64> = x.iter().map(|v| 1.0 + 0.3 * v.cos()).collect();
        let s = Spline::periodic(x, y).unwrap();
        for &t in &[0.0, 0.01, 3.0, 6.27, std::f64::consts::TAU] {
            let (v, d) = s.eval(t).unwrap();
            assert!((v - (1.0 + 0.3 * t.cos())).abs() < 1e-6, "{t}");
            assert!((d + 0.3 * t.sin()).abs() < 1e-4, "{t}");
        }
        assert!(Spline::periodic(vec![0.0, 1.0, 2.0, 3.0], vec![0.0, 1.0, 2.0, 1.0]).is_err());
    }

    #[test]
    fn converges_on_smooth_data() {
        let x: Vec<f64> = (0..=200).map(|i| i as f64 * 0.05).collect();
        let y: Vec<f64> = x.iter().map(|v| v.sin()).collect();
        let s = Spline::new(x, y).unwrap();
        let (v, _) = s.eval(4.321).unwrap();
        assert!((v - 4.321f64.sin()).abs() < 1e-6);
    }
}
