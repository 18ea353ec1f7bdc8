//! Fields sampled on one period cell and their discrete `H¹` norms.
//!
//! Every field here is a superposition `Σ cᵢ e^{iξᵢx₁ + i√(k²−ξᵢ²)(x₂−H)}` once the α-integral
//! is discretized, so a cell is sampled by fixing the quadrature nodes for the cell's largest
//! `|x₁|` and rotating phases along each grid row.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

use super::field::{segments, sizing_exponent, ModeField};
use super::{vertical_factor, ProblemConfig};
use crate::bump::Density;
use crate::error::{Error, Result};
use crate::quad::{gk15_nodes, integrate, panels, Piece};

/// Uniform tensor grid `x₁ = x1_start + m·dx1`, `x₂ = x2_start + n·dx2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellGrid {
    pub x1_start: f64,
    pub dx1: f64,
    pub n1: usize,
    pub x2_start: f64,
    pub dx2: f64,
    pub n2: usize,
}

impl CellGrid {
    /// Cell `[2πj − π, 2πj + π] × [H, H + h]` with about `density` points per unit length.
    pub fn for_cell(config: &ProblemConfig, j: i64, density: usize) -> Result<Self> {
        if density == 0 {
            return Err(Error::Parameter("grid density must be positive".into()));
        }
        let n1 = ((TAU * density as f64).ceil() as usize).max(4) + 1;
        let n2 = ((config.standoff * density as f64).ceil() as usize).max(4) + 1;
        Ok(CellGrid {
            x1_start: TAU * j as f64 - PI,
            dx1: TAU / (n1 - 1) as f64,
            n1,
            x2_start: config.height,
            dx2: config.standoff / (n2 - 1) as f64,
            n2,
        })
    }

    pub fn x1(&self, m: usize) -> f64 {
        self.x1_start + m as f64 * self.dx1
    }

    pub fn x2(&self, n: usize) -> f64 {
        self.x2_start + n as f64 * self.dx2
    }

    fn x1_extent(&self) -> f64 {
        self.x1_start.abs().max(self.x1(self.n1 - 1).abs())
    }

    fn x2_top(&self) -> f64 {
        self.x2(self.n2 - 1)
    }
}

/// A field that can be sampled on a [`CellGrid`]; rows are indexed by `x₂`.
pub trait CellField: Sync {
    fn sample(&self, grid: &CellGrid) -> Result<Vec<Vec<Complex64>>>;
}

/// A discretized superposition of upward plane and evanescent waves.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SpectralField {
    pub height: f64,
    pub k: f64,
    /// `(ξ, cᵢ)` pairs.
    pub nodes: Vec<(f64, Complex64)>,
}

impl SpectralField {
    pub fn eval(&self, x1: f64, x2: f64) -> Complex64 {
        let y = x2 - self.height;
        self.nodes
            .iter()
            .map(|&(xi, c)| {
                c * (Complex64::new(0.0, xi * x1) + vertical_factor(xi, self.k) * y).exp()
            })
            .sum()
    }
}

impl CellField for SpectralField {
    fn sample(&self, grid: &CellGrid) -> Result<Vec<Vec<Complex64>>> {
        let mut rows = Vec::with_capacity(grid.n2);
        let start: Vec<Complex64> = self
            .nodes
            .iter()
            .map(|&(xi, _)| Complex64::from_polar(1.0, xi * grid.x1_start))
            .collect();
        let step: Vec<Complex64> = self
            .nodes
            .iter()
            .map(|&(xi, _)| Complex64::from_polar(1.0, xi * grid.dx1))
            .collect();
        for n in 0..grid.n2 {
            let y = grid.x2(n) - self.height;
            let mut z: Vec<Complex64> = self
                .nodes
                .iter()
                .zip(&start)
                .map(|(&(xi, c), s)| c * (vertical_factor(xi, self.k) * y).exp() * s)
                .collect();
            let mut row = Vec::with_capacity(grid.n1);
            for _ in 0..grid.n1 {
                row.push(z.iter().sum());
                for (zi, st) in z.iter_mut().zip(&step) {
                    *zi *= st;
                }
            }
            rows.push(row);
        }
        Ok(rows)
    }
}

impl ModeField<'_> {
    /// Quadrature nodes accurate for `|x₁| ≤ x1_max` and `H ≤ x₂ ≤ x2_max`.
    pub fn spectral(&self, x1_max: f64, x2_max: f64) -> SpectralField {
        let cfg = self.config();
        let y = (x2_max - cfg.height).max(0.0);
        let mut nodes = Vec::new();
        for seg in self.segments() {
            let exponent = |s: f64| {
                let xi = seg.alpha(s) + self.j() as f64;
                sizing_exponent(Complex64::new(0.0, xi * x1_max) + vertical_factor(xi, cfg.k) * y)
            };
            for (a, b) in panels(&exponent, seg.s0, seg.s1, 0.05) {
                for (s, w) in gk15_nodes(a, b) {
                    let (amp, xi) = self.amplitude(&seg, s);
                    nodes.push((xi, amp * w));
                }
            }
        }
        SpectralField {
            height: cfg.height,
            k: cfg.k,
            nodes,
        }
    }
}

impl CellField for ModeField<'_> {
    fn sample(&self, grid: &CellGrid) -> Result<Vec<Vec<Complex64>>> {
        self.spectral(grid.x1_extent(), grid.x2_top()).sample(grid)
    }
}

impl<T: CellField> CellField for [T] {
    fn sample(&self, grid: &CellGrid) -> Result<Vec<Vec<Complex64>>> {
        let mut total = vec![vec![Complex64::new(0.0, 0.0); grid.n1]; grid.n2];
        for f in self {
            for (row, add) in total.iter_mut().zip(f.sample(grid)?) {
                for (a, b) in row.iter_mut().zip(add) {
                    *a += b;
                }
            }
        }
        Ok(total)
    }
}

impl<T: CellField> CellField for Vec<T> {
    fn sample(&self, grid: &CellGrid) -> Result<Vec<Vec<Complex64>>> {
        self.as_slice().sample(grid)
    }
}

/// The regular part of a Bloch decomposition: `∫_Λ Σ_m F(α+m) e^{i(α+m)x₁ + …} dα`, i.e. the
/// angular-spectrum field `∫ F(ξ) e^{iξx₁ + i√(k²−ξ²)(x₂−H)} dξ` of a smooth spectrum `F`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodicField {
    pub spectrum: Density,
    pub k: f64,
    pub height: f64,
}

impl PeriodicField {
    /// Spectrum bump centred at `center` with half-width `halfwidth`.
    pub fn new(k: f64, height: f64, center: f64, halfwidth: f64) -> Self {
        PeriodicField {
            spectrum: Density::two_sided(center, halfwidth),
            k,
            height,
        }
    }

    /// `Σ_m F(α + m)`, the α-periodic density seen on one Bloch cell.
    pub fn periodized(&self, alpha: f64) -> f64 {
        let (lo, hi) = self.spectrum.support();
        let m_lo = (lo - alpha).floor() as i64;
        let m_hi = (hi - alpha).ceil() as i64;
        (m_lo..=m_hi)
            .map(|m| self.spectrum.value(alpha + m as f64))
            .sum()
    }

    fn segments(&self) -> Vec<super::field::Segment> {
        let (lo, hi) = self.spectrum.support();
        segments(lo, hi, &[-self.k, self.k])
    }

    pub fn value(&self, x: [f64; 2]) -> Result<Complex64> {
        let y = x[1] - self.height;
        let k = self.k;
        let spectrum = &self.spectrum;
        let pieces: Vec<Piece<'_>> = self
            .segments()
            .into_iter()
            .map(|seg| {
                Piece::new(
                    move |s: f64| {
                        let xi = seg.alpha(s);
                        let e = Complex64::new(0.0, xi * x[0]) + vertical_factor(xi, k) * y;
                        spectrum.value(xi) * seg.jacobian(s) * e.exp()
                    },
                    move |s: f64| {
                        let xi = seg.alpha(s);
                        sizing_exponent(Complex64::new(0.0, xi * x[0]) + vertical_factor(xi, k) * y)
                    },
                    seg.s0,
                    seg.s1,
                )
            })
            .collect();
        Ok(integrate(&pieces, &super::field::field_options())?.value)
    }

    pub fn spectral(&self, x1_max: f64, x2_max: f64) -> SpectralField {
        let y = (x2_max - self.height).max(0.0);
        let mut nodes = Vec::new();
        for seg in self.segments() {
            let exponent = |s: f64| {
                let xi = seg.alpha(s);
                sizing_exponent(Complex64::new(0.0, xi * x1_max) + vertical_factor(xi, self.k) * y)
            };
            for (a, b) in panels(&exponent, seg.s0, seg.s1, 0.05) {
                for (s, w) in gk15_nodes(a, b) {
                    let xi = seg.alpha(s);
                    nodes.push((
                        xi,
                        Complex64::new(self.spectrum.value(xi) * seg.jacobian(s) * w, 0.0),
                    ));
                }
            }
        }
        SpectralField {
            height: self.height,
            k: self.k,
            nodes,
        }
    }
}

impl CellField for PeriodicField {
    fn sample(&self, grid: &CellGrid) -> Result<Vec<Vec<Complex64>>> {
        self.spectral(grid.x1_extent(), grid.x2_top()).sample(grid)
    }
}

/// Any pointwise evaluator `(x₁, x₂) ↦ u`.
pub struct Pointwise<F>(pub F);

impl<F: Fn(f64, f64) -> Complex64 + Sync> CellField for Pointwise<F> {
    fn sample(&self, grid: &CellGrid) -> Result<Vec<Vec<Complex64>>> {
        Ok((0..grid.n2)
            .map(|n| {
                (0..grid.n1)
                    .map(|m| (self.0)(grid.x1(m), grid.x2(n)))
                    .collect()
            })
            .collect())
    }
}

/// Second-order derivative along a uniformly sampled line.
fn derivative(v: &[Complex64], h: f64) -> Vec<Complex64> {
    let n = v.len();
    (0..n)
        .map(|i| {
            if i == 0 {
                (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h)
            } else if i == n - 1 {
                (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h)
            } else {
                (v[i + 1] - v[i - 1]) / (2.0 * h)
            }
        })
        .collect()
}

fn trapezoid_weight(i: usize, n: usize) -> f64 {
    if i == 0 || i == n - 1 {
        0.5
    } else {
        1.0
    }
}

/// Discrete `H¹` norm of `field` on cell `j` of the strip `[H, H + h]`: trapezoid rule for
/// `∫ |u|² + |∇u|²` with central-difference gradients.
pub fn cell_h1_norm(
    field: &dyn CellField,
    j: i64,
    config: &ProblemConfig,
    grid_density: usize,
) -> Result<f64> {
    let grid = CellGrid::for_cell(config, j, grid_density)?;
    grid_h1_norm(field, &grid)
}

pub fn grid_h1_norm(field: &dyn CellField, grid: &CellGrid) -> Result<f64> {
    if grid.n1 < 3 || grid.n2 < 3 || !(grid.dx1 > 0.0) || !(grid.dx2 > 0.0) {
        return Err(Error::Parameter(
            "cell grid needs at least 3×3 points".into(),
        ));
    }
    let u = field.sample(grid)?;
    let d1: Vec<Vec<Complex64>> = u.iter().map(|row| derivative(row, grid.dx1)).collect();
    let mut d2 = vec![vec![Complex64::new(0.0, 0.0); grid.n1]; grid.n2];
    for m in 0..grid.n1 {
        let col: Vec<Complex64> = u.iter().map(|row| row[m]).collect();
        for (n, d) in derivative(&col, grid.dx2).into_iter().enumerate() {
            d2[n][m] = d;
        }
    }
    let mut sum = 0.0;
    for n in 0..grid.n2 {
        for m in 0..grid.n1 {
            let w = trapezoid_weight(n, grid.n2) * trapezoid_weight(m, grid.n1);
            sum += w * (u[n][m].norm_sqr() + d1[n][m].norm_sqr() + d2[n][m].norm_sqr());
        }
    }
    Ok((sum * grid.dx1 * grid.dx2).sqrt())
}
