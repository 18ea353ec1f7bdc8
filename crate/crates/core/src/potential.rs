//! Half-space Green's function, the double-layer kernels on the line `x₂ = H`, and the
//! upward propagating representation
//!
//! ```text
//! u(x) = 2 ∫ S(x, y) φ(y₁) dy₁,    S(x, y) = ∂Φ(x, y)/∂y₂,    y = (y₁, H).
//! ```
//!
//! With `x̃ = x − (0, H)` and `r = |x̃|`, the radial derivative of `S` along `x̃/r` minus `ikS`
//! is the kernel `K`, so `∂u/∂r − iku = 2 ∫ K φ dy₁` without differencing two large numbers.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::path::Path;

use crate::error::{Error, Result};
use crate::interp::Spline;
use crate::quad::{integrate, Piece, QuadOptions};
use crate::specfun::h1;

type Point = [f64; 2];

const I: Complex64 = Complex64::new(0.0, 1.0);

fn dist(x: Point, y: Point) -> f64 {
    (x[0] - y[0]).hypot(x[1] - y[1])
}

fn check_k(k: f64) -> Result<()> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::Parameter(format!("wavenumber {k} must be positive")));
    }
    Ok(())
}

/// `Φ(x, y) = (i/4) H₀⁽¹⁾(k|x − y|)`.
pub fn fundamental(x: Point, y: Point, k: f64) -> Result<Complex64> {
    check_k(k)?;
    let rho = dist(x, y);
    if !(rho > 0.0) {
        return Err(Error::Domain(format!(
            "Φ is singular at coincident points {x:?}"
        )));
    }
    Ok(0.25 * I * h1(0, k * rho))
}

/// `G(x, y) = Φ(x, y) − Φ(x, y')` with `y' = (y₁, −y₂)`; vanishes on `x₂ = 0`.
pub fn green_half_space(x: Point, y: Point, k: f64) -> Result<Complex64> {
    Ok(fundamental(x, y, k)? - fundamental(x, [y[0], -y[1]], k)?)
}

/// An evaluation point `x` above the line and a point `y = (y₁, H)` on it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelPoint {
    pub x: Point,
    pub y1: f64,
    pub k: f64,
    pub height: f64,
}

impl KernelPoint {
    /// Fails unless `x₂ > H`: the kernels are only used strictly above the line.
    pub fn new(x: Point, y1: f64, k: f64, height: f64) -> Result<Self> {
        check_k(k)?;
        if !(x[1] > height) || !x[0].is_finite() || !y1.is_finite() {
            return Err(Error::Domain(format!(
                "kernel point x = {x:?} must lie strictly above x₂ = {height}"
            )));
        }
        Ok(KernelPoint { x, y1, k, height })
    }

    pub fn y(&self) -> Point {
        [self.y1, self.height]
    }

    /// `x̃ = x − (0, H)`.
    pub fn x_tilde(&self) -> Point {
        [self.x[0], self.x[1] - self.height]
    }

    /// `r = |x̃|`.
    pub fn r(&self) -> f64 {
        let t = self.x_tilde();
        t[0].hypot(t[1])
    }

    /// `|x − y|`.
    pub fn rho(&self) -> f64 {
        dist(self.x, self.y())
    }
}

/// `S(x, y) = (ik/4) ((x₂ − H)/|x − y|) H₁⁽¹⁾(k|x − y|)`.
pub fn kernel_s(p: &KernelPoint) -> Complex64 {
    let rho = p.rho();
    let d = p.x[1] - p.height;
    0.25 * I * p.k * (d / rho) * h1(1, p.k * rho)
}

/// `K(x, y) = ∂²Φ/∂r∂y₂ − ikS`:
///
/// ```text
/// (ik/4) H₁ [d/(r ρ) − 2⟨x̃, x−y⟩ d/(r ρ³)] + (ik²/4) ⟨x̃, x−y⟩ d/(r ρ²) H₀ + (k²/4)(d/ρ) H₁
/// ```
///
/// with `d = x₂ − H`, `ρ = |x − y|` and Hankel functions at `kρ`.
pub fn kernel_k(p: &KernelPoint) -> Complex64 {
    let k = p.k;
    let rho = p.rho();
    let r = p.r();
    let d = p.x[1] - p.height;
    let xt = p.x_tilde();
    let inner = xt[0] * (p.x[0] - p.y1) + xt[1] * d;
    let h0 = h1(0, k * rho);
    let h1v = h1(1, k * rho);
    0.25 * I * k * h1v * (d / (r * rho) - 2.0 * inner * d / (r * rho.powi(3)))
        + 0.25 * I * k * k * inner * d / (r * rho * rho) * h0
        + 0.25 * k * k * (d / rho) * h1v
}

/// `1 − ⟨x̃, x − y⟩/(|x̃||x − y|)`, evaluated as `|x̃/|x̃| − (x−y)/|x−y||²/2` so that small
/// values keep full relative accuracy and the result is never negative.
pub fn geometry_gap(p: &KernelPoint) -> f64 {
    let xt = p.x_tilde();
    let r = p.r();
    let rho = p.rho();
    let u = [
        xt[0] / r - (p.x[0] - p.y1) / rho,
        xt[1] / r - (p.x[1] - p.height) / rho,
    ];
    0.5 * (u[0] * u[0] + u[1] * u[1])
}

/// Declared algebraic decay `|φ(y₁)| ≤ constant · (1 + |y₁|)^{−exponent}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Decay {
    pub exponent: f64,
    pub constant: f64,
}

/// A density on the line `x₂ = H`.
pub trait LineDensity: Sync {
    fn value(&self, y1: f64) -> Complex64;
    fn decay(&self) -> Decay;

    /// Phase of the density, used only to size quadrature panels.
    fn phase(&self, _y1: f64) -> f64 {
        0.0
    }

    /// Longest panel the density's own variation allows.
    fn max_step(&self) -> f64 {
        f64::INFINITY
    }
}

/// The zero density.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ZeroDensity;

impl LineDensity for ZeroDensity {
    fn value(&self, _y1: f64) -> Complex64 {
        Complex64::new(0.0, 0.0)
    }
    fn decay(&self) -> Decay {
        Decay {
            exponent: f64::INFINITY,
            constant: 0.0,
        }
    }
}

/// Trace `y₁ ↦ Φ((y₁, H), z)` of a point source below the line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointSourceTrace {
    pub source: Point,
    pub k: f64,
    pub height: f64,
}

impl PointSourceTrace {
    pub fn new(source: Point, k: f64, height: f64) -> Result<Self> {
        check_k(k)?;
        if !(source[1] < height) {
            return Err(Error::Domain(format!(
                "source {source:?} must lie below x₂ = {height}"
            )));
        }
        Ok(PointSourceTrace { source, k, height })
    }
}

impl LineDensity for PointSourceTrace {
    fn value(&self, y1: f64) -> Complex64 {
        let rho = dist([y1, self.height], self.source);
        0.25 * I * h1(0, self.k * rho)
    }

    fn decay(&self) -> Decay {
        // |H₀(t)| ≤ √(2/(πt)) and (1 + |y₁|)/ρ ≤ (1 + |z₁|)/d + 1.
        let d = self.height - self.source[1];
        let ratio = (1.0 + self.source[0].abs()) / d + 1.0;
        Decay {
            exponent: 0.5,
            constant: 0.25 * (2.0 / (PI * self.k)).sqrt() * ratio.sqrt(),
        }
    }

    fn phase(&self, y1: f64) -> f64 {
        self.k * dist([y1, self.height], self.source)
    }
}

/// `A e^{iξy₁} e^{−(y₁−c)²/(2w²)}`: decays faster than any power.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianPlaneWave {
    pub amplitude: f64,
    pub xi: f64,
    pub center: f64,
    pub width: f64,
}

/// Power used when a super-algebraic density has to declare an algebraic rate.
const GAUSSIAN_DECLARED_POWER: f64 = 4.0;

impl GaussianPlaneWave {
    pub fn new(amplitude: f64, xi: f64, center: f64, width: f64) -> Result<Self> {
        if !(width > 0.0) {
            return Err(Error::Parameter(format!("width {width} must be positive")));
        }
        Ok(GaussianPlaneWave {
            amplitude,
            xi,
            center,
            width,
        })
    }
}

impl LineDensity for GaussianPlaneWave {
    fn value(&self, y1: f64) -> Complex64 {
        let t = (y1 - self.center) / self.width;
        Complex64::from_polar(self.amplitude * (-0.5 * t * t).exp(), self.xi * y1)
    }

    fn decay(&self) -> Decay {
        // sup over y of (1+|y|)^p e^{−(y−c)²/(2w²)}: stationary points of the log on each side.
        let p = GAUSSIAN_DECLARED_POWER;
        let w2 = self.width * self.width;
        let log_f = |y: f64| p * (1.0 + y.abs()).ln() - (y - self.center).powi(2) / (2.0 * w2);
        let mut best = log_f(0.0);
        for s in [1.0, -1.0] {
            let c = s * self.center;
            let b = 1.0 - c;
            let y = 0.5 * (-b + (b * b + 4.0 * (c + p * w2)).sqrt());
            if y > 0.0 {
                best = best.max(log_f(s * y));
            }
        }
        Decay {
            exponent: p,
            constant: self.amplitude.abs() * best.exp(),
        }
    }

    fn phase(&self, y1: f64) -> f64 {
        self.xi * y1
    }

    fn max_step(&self) -> f64 {
        0.25 * self.width
    }
}

/// A density known at samples `(y₁, re, im)`, cubic between samples and zero outside them.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledDensity {
    re: Spline,
    im: Spline,
    decay: Decay,
    spacing: f64,
}

#[derive(Debug, Deserialize)]
struct DensityRow {
    y1: f64,
    re: f64,
    im: f64,
}

impl SampledDensity {
    pub fn new(samples: &[(f64, Complex64)], decay: Decay) -> Result<Self> {
        if samples.len() < 4 {
            return Err(Error::Parameter(
                "a sampled density needs at least 4 rows".into(),
            ));
        }
        let y: Vec<f64> = samples.iter().map(|s| s.0).collect();
        let spacing = y
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min);
        let re = Spline::new(y.clone(), samples.iter().map(|s| s.1.re).collect())?;
        let im = Spline::new(y, samples.iter().map(|s| s.1.im).collect())?;
        Ok(SampledDensity {
            re,
            im,
            decay,
            spacing,
        })
    }

    /// Reads a CSV with header `y1,re,im`.
    pub fn from_csv(path: impl AsRef<Path>, decay: Decay) -> Result<Self> {
        let path = path.as_ref();
        let io = |e: csv::Error| Error::Format {
            path: path.to_path_buf(),
            message: e.to_string(),
        };
        let mut rdr = csv::Reader::from_path(path).map_err(io)?;
        let mut rows = Vec::new();
        for rec in rdr.deserialize() {
            let r: DensityRow = rec.map_err(io)?;
            rows.push((r.y1, Complex64::new(r.re, r.im)));
        }
        Self::new(&rows, decay)
    }

    pub fn range(&self) -> (f64, f64) {
        self.re.range()
    }
}

impl LineDensity for SampledDensity {
    fn value(&self, y1: f64) -> Complex64 {
        match (self.re.eval(y1), self.im.eval(y1)) {
            (Some((a, _)), Some((b, _))) => Complex64::new(a, b),
            _ => Complex64::new(0.0, 0.0),
        }
    }
    fn decay(&self) -> Decay {
        self.decay
    }
    fn max_step(&self) -> f64 {
        self.spacing
    }
}

/// Value of a truncated line integral and a bound for the neglected `|y₁| > L` part.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UprcValue {
    pub re: f64,
    pub im: f64,
    pub quadrature_error: f64,
    pub tail_bound: f64,
}

impl UprcValue {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Kernel {
    S,
    K,
    RadialDerivative,
}

/// Evaluator for `2 ∫_{−L}^{L} kernel(x, (y₁, H)) φ(y₁) dy₁`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Uprc {
    pub k: f64,
    pub height: f64,
    pub truncation: f64,
}

impl Uprc {
    pub fn new(k: f64, height: f64, truncation: f64) -> Result<Self> {
        check_k(k)?;
        if !(truncation > 0.0) {
            return Err(Error::Parameter(format!(
                "truncation {truncation} must be positive"
            )));
        }
        Ok(Uprc {
            k,
            height,
            truncation,
        })
    }

    /// `u(x)`.
    pub fn eval(&self, density: &dyn LineDensity, x: Point) -> Result<UprcValue> {
        self.integrate(density, x, Kernel::S)
    }

    /// `∂u/∂r − iku`, from the kernel `K`.
    pub fn radial_residual(&self, density: &dyn LineDensity, x: Point) -> Result<UprcValue> {
        self.integrate(density, x, Kernel::K)
    }

    /// `∂u/∂r` along `x̃/|x̃|`, from `K + ikS`.
    pub fn radial_derivative(&self, density: &dyn LineDensity, x: Point) -> Result<UprcValue> {
        self.integrate(density, x, Kernel::RadialDerivative)
    }

    /// [`Uprc::eval`], failing when the tail bound exceeds `tol`.
    pub fn eval_within(&self, density: &dyn LineDensity, x: Point, tol: f64) -> Result<UprcValue> {
        let v = self.eval(density, x)?;
        if v.tail_bound > tol {
            return Err(Error::convergence(v.value(), v.tail_bound));
        }
        Ok(v)
    }

    fn integrate(&self, density: &dyn LineDensity, x: Point, kernel: Kernel) -> Result<UprcValue> {
        let d = x[1] - self.height;
        if !(d > 0.0) {
            return Err(Error::Domain(format!(
                "x = {x:?} must lie above the line x₂ = {}",
                self.height
            )));
        }
        let r = x[0].hypot(d);
        let l = self.truncation;
        if l < 10.0 * r.sqrt() * (1.0 - 1e-12) {
            return Err(Error::Parameter(format!(
                "truncation {l} is below 10·√r = {}",
                10.0 * r.sqrt()
            )));
        }
        let (k, h) = (self.k, self.height);
        let f = move |y1: f64| {
            let p = KernelPoint {
                x,
                y1,
                k,
                height: h,
            };
            let kern = match kernel {
                Kernel::S => kernel_s(&p),
                Kernel::K => kernel_k(&p),
                Kernel::RadialDerivative => kernel_k(&p) + I * k * kernel_s(&p),
            };
            2.0 * kern * density.value(y1)
        };
        let exponent = move |y1: f64| Complex64::new(0.0, k * dist(x, [y1, h]) + density.phase(y1));
        let mut cuts = vec![-l, l];
        if x[0].abs() < l {
            cuts.insert(1, x[0]);
        }
        let pieces: Vec<Piece<'_>> = cuts
            .windows(2)
            .map(|w| Piece::new(f, exponent, w[0], w[1]))
            .collect();
        let opts = QuadOptions {
            abs_tol: 1e-13,
            rel_tol: 1e-10,
            max_step: (0.25 * d).min(0.5).min(density.max_step()),
            ..QuadOptions::default()
        };
        let q = integrate(&pieces, &opts)?;
        Ok(UprcValue {
            re: q.value.re,
            im: q.value.im,
            quadrature_error: q.error,
            tail_bound: self.tail_bound(density.decay(), x, kernel),
        })
    }

    /// Bound for `2 ∫_{|y₁|>L} |kernel| |φ|` from `|kernel| ≤ B ρ^{−q}` and the declared decay.
    fn tail_bound(&self, decay: Decay, x: Point, kernel: Kernel) -> f64 {
        if decay.constant == 0.0 {
            return 0.0;
        }
        let (k, l) = (self.k, self.truncation);
        let d = x[1] - self.height;
        let a = x[0].abs();
        let p = decay.exponent;
        if !(p >= 0.0) {
            return f64::INFINITY;
        }
        // t|H₁(t)|² decreases and t|H₀(t)|² increases to 2/π, so for t ≥ t₀ both
        // |H_n(t)| ≤ hb(t₀)/√t.
        let hb = |rho0: f64| (h1(1, k * rho0).norm() * (k * rho0).sqrt()).max((2.0 / PI).sqrt());
        let coeff = |rho0: f64| -> (f64, f64) {
            let b_s = 0.25 * k.sqrt() * d * hb(rho0);
            let b_k = hb(rho0) * (0.5 * k.powf(1.5) + 0.75 * k.sqrt() / rho0);
            match kernel {
                Kernel::S => (b_s, 1.5),
                Kernel::K => (b_k, 0.5),
                Kernel::RadialDerivative => (b_k + k * b_s / rho0, 0.5),
            }
        };
        let mut best = f64::INFINITY;
        // Route 1: ρ ≥ |y₁| − |x₁| and (1+|y₁|)^{−p} ≤ (|y₁| − |x₁|)^{−p}.
        if l > a {
            let rho0 = (l - a).max(d);
            let (b, q) = coeff(rho0);
            if q + p > 1.0 {
                best = best.min(b * (l - a).powf(1.0 - q - p) / (q + p - 1.0));
            }
        }
        // Route 2: ρ ≥ d everywhere.
        if p > 1.0 {
            let (b, q) = coeff(d);
            best = best.min(b * d.powf(-q) * (1.0 + l).powf(1.0 - p) / (p - 1.0));
        }
        // factor 2 from the representation, 2 for the two half-lines
        4.0 * decay.constant * best
    }
}

/// `u(x) = 2∫ S φ` over `|y₁| ≤ L`.
pub fn uprc_eval(
    density: &dyn LineDensity,
    x: Point,
    k: f64,
    height: f64,
    truncation: f64,
) -> Result<UprcValue> {
    Uprc::new(k, height, truncation)?.eval(density, x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gap_vanishes_for_aligned_vectors() {
        let p = KernelPoint::new([3.0, 7.0], 0.0, 1.0, 2.0).unwrap();
        assert_eq!(geometry_gap(&p), 0.0);
    }

    #[test]
    fn gaussian_decay_constant_dominates_samples() {
        let g = GaussianPlaneWave::new(1.5, 0.3, 2.0, 3.0).unwrap();
        let dec = g.decay();
        for i in -400..400 {
            let y = i as f64 * 0.1;
            let bound = dec.constant * (1.0 + y.abs()).powf(-dec.exponent);
            assert!(g.value(y).norm() <= bound * (1.0 + 1e-12), "y = {y}");
        }
    }
}
