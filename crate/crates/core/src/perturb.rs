//! A periodic surface `x₂ = ζ(x₁)` with a compactly supported perturbation `p`, and the map
//! that flattens the perturbation back onto the periodic surface:
//!
//! ```text
//! Φ_p(x) = x                                              for x₂ ≥ H₀
//! Φ_p(x) = (x₁, x₂ + ((x₂ − H₀)³ / (ζ(x₁) − H₀)³) p(x₁))   otherwise
//! ```
//!
//! On the surface the cubic factor is 1, so `Γ` is carried to `Γ_p = {x₂ = ζ + p}`. The
//! transformed Helmholtz problem has coefficients `A_p = |det J| J⁻¹J⁻ᵀ` and `c_p = |det J|`
//! with `J = ∇Φ_p`; both equal the identity outside `[−L, L] × [0, H₀]`.

use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};
use std::path::{Path, PathBuf};

use crate::bump::Density;
use crate::error::{Error, Result};
use crate::interp::Spline;

type Point = [f64; 2];

/// Step of the central differences used for tabulated profiles.
pub const TABLE_FD_STEP: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq)]
enum Curve {
    Constant(f64),
    Cosine {
        mean: f64,
        amplitude: f64,
    },
    /// `base + height · b((x − 2πm)/halfwidth)` summed over periods.
    PeriodicBumps {
        base: f64,
        height: f64,
        halfwidth: f64,
    },
    /// `amplitude · b(x/halfwidth)`.
    Bump {
        amplitude: f64,
        halfwidth: f64,
    },
    /// Tabulated; `period = Some(start)` wraps the argument into `[start, start + 2π)`, otherwise the
    /// curve is zero outside the table.
    Table {
        spline: Spline,
        period: Option<f64>,
    },
}

impl Curve {
    /// Value and first derivative.
    fn eval(&self, x: f64) -> (f64, f64) {
        match self {
            Curve::Constant(c) => (*c, 0.0),
            Curve::Cosine { mean, amplitude } => (mean + amplitude * x.cos(), -amplitude * x.sin()),
            Curve::PeriodicBumps {
                base,
                height,
                halfwidth,
            } => {
                let t = x - TAU * (x / TAU).round();
                let b = Density::two_sided(0.0, *halfwidth);
                (base + height * b.value(t), height * b.eval(t, 1))
            }
            Curve::Bump {
                amplitude,
                halfwidth,
            } => {
                let b = Density::two_sided(0.0, *halfwidth);
                (amplitude * b.value(x), amplitude * b.eval(x, 1))
            }
            Curve::Table { spline, period } => {
                let at = |t: f64| -> f64 {
                    let t = match period {
                        Some(start) => start + (t - start).rem_euclid(TAU),
                        None => t,
                    };
                    spline.eval(t).map_or(0.0, |v| v.0)
                };
                let h = TABLE_FD_STEP;
                (at(x), (at(x + h) - at(x - h)) / (2.0 * h))
            }
        }
    }
}

/// Named test geometries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    /// `ζ ≡ 1`.
    Flat,
    /// `ζ = 1 + 0.25·b` with one bump of half-width 1 per period.
    FlatWithBumps,
    /// `ζ = 1 + 0.3 cos x₁`.
    Sinusoidal,
}

impl Preset {
    pub const ALL: [Preset; 3] = [Preset::Flat, Preset::FlatWithBumps, Preset::Sinusoidal];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Flat => "flat",
            Preset::FlatWithBumps => "flat-with-bumps",
            Preset::Sinusoidal => "sinusoidal",
        }
    }
}

/// Serializable description of a [`SurfaceModel`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "kebab-case")]
pub enum SurfaceSpec {
    /// A preset profile with perturbation `amplitude · b(x₁/support)`.
    Preset {
        preset: Preset,
        amplitude: f64,
        #[serde(default = "default_support")]
        support: f64,
        #[serde(default = "default_h0")]
        h0: f64,
        #[serde(default = "default_height")]
        height: f64,
    },
    /// CSV with header `x1,zeta,p`; see [`SurfaceModel::from_csv`].
    Table { path: PathBuf, h0: f64, height: f64 },
}

fn default_support() -> f64 {
    3.0
}
fn default_h0() -> f64 {
    2.0
}
fn default_height() -> f64 {
    3.0
}

impl SurfaceSpec {
    pub fn build(&self) -> Result<SurfaceModel> {
        match self {
            SurfaceSpec::Preset {
                preset,
                amplitude,
                support,
                h0,
                height,
            } => SurfaceModel::preset(*preset, *amplitude, *support, *h0, *height),
            SurfaceSpec::Table { path, h0, height } => SurfaceModel::from_csv(path, *h0, *height),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceModel {
    zeta: Curve,
    p: Curve,
    support: f64,
    h0: f64,
    height: f64,
}

#[derive(Debug, Deserialize)]
struct SurfaceRow {
    x1: f64,
    zeta: f64,
    p: f64,
}

impl SurfaceModel {
    pub fn preset(
        preset: Preset,
        amplitude: f64,
        support: f64,
        h0: f64,
        height: f64,
    ) -> Result<Self> {
        if !(support > 0.0) {
            return Err(Error::Parameter(format!(
                "support {support} must be positive"
            )));
        }
        let zeta = match preset {
            Preset::Flat => Curve::Constant(1.0),
            Preset::FlatWithBumps => Curve::PeriodicBumps {
                base: 1.0,
                height: 0.25,
                halfwidth: 1.0,
            },
            Preset::Sinusoidal => Curve::Cosine {
                mean: 1.0,
                amplitude: 0.3,
            },
        };
        let p = Curve::Bump {
            amplitude,
            halfwidth: support,
        };
        Self::checked(zeta, p, support, h0, height)
    }

    /// Rows `(x₁, ζ, p)` on `[a, b]` with `b − a ≥ 2π`. `ζ` is taken from `[a, a + 2π]`, must
    /// close up there, and is interpolated by a periodic spline. `p` is zero outside `[a, b]`
    /// and must vanish at both ends; `L = max(|a|, |b|)`.
    pub fn from_table(rows: &[(f64, f64, f64)], h0: f64, height: f64) -> Result<Self> {
        let x: Vec<f64> = rows.iter().map(|r| r.0).collect();
        let (a, b) = match (x.first(), x.last()) {
            (Some(&a), Some(&b)) if rows.len() >= 4 => (a, b),
            _ => {
                return Err(Error::Parameter(
                    "a surface table needs at least 4 rows".into(),
                ))
            }
        };
        if b - a < TAU * (1.0 - 1e-12) {
            return Err(Error::Parameter(format!(
                "surface table spans [{a}, {b}], shorter than one period"
            )));
        }
        let (p0, p1) = (rows[0].2, rows[rows.len() - 1].2);
        if p0 != 0.0 || p1 != 0.0 {
            return Err(Error::Parameter(format!(
                "perturbation must vanish at the table ends, got {p0} and {p1}"
            )));
        }
        let period: Vec<(f64, f64)> = rows
            .iter()
            .filter(|r| r.0 <= a + TAU * (1.0 + 1e-12))
            .map(|r| (r.0, r.1))
            .collect();
        let last = period[period.len() - 1].0;
        if (last - a - TAU).abs() > 1e-9 * TAU {
            return Err(Error::Parameter(format!(
                "surface table needs a sample at x₁ = a + 2π = {}, last sample in the period is {last}",
                a + TAU
            )));
        }
        let zeta = Spline::periodic(
            period.iter().map(|r| r.0).collect(),
            period.iter().map(|r| r.1).collect(),
        )?;
        let p = Spline::new(x, rows.iter().map(|r| r.2).collect())?;
        Self::checked(
            Curve::Table {
                spline: zeta,
                period: Some(a),
            },
            Curve::Table {
                spline: p,
                period: None,
            },
            a.abs().max(b.abs()),
            h0,
            height,
        )
    }

    /// Reads a CSV with header `x1,zeta,p`.
    pub fn from_csv(path: impl AsRef<Path>, h0: f64, height: f64) -> Result<Self> {
        let path = path.as_ref();
        let fmt = |e: csv::Error| Error::Format {
            path: path.to_path_buf(),
            message: e.to_string(),
        };
        let mut rdr = csv::Reader::from_path(path).map_err(fmt)?;
        let mut rows = Vec::new();
        for rec in rdr.deserialize() {
            let r: SurfaceRow = rec.map_err(fmt)?;
            rows.push((r.x1, r.zeta, r.p));
        }
        Self::from_table(&rows, h0, height)
    }

    fn checked(zeta: Curve, p: Curve, support: f64, h0: f64, height: f64) -> Result<Self> {
        let s = SurfaceModel {
            zeta,
            p,
            support,
            h0,
            height,
        };
        if !(h0 < height) {
            return Err(Error::Parameter(format!("need H₀ = {h0} < H = {height}")));
        }
        let n = 2000;
        let mut zmin = f64::INFINITY;
        let mut top = f64::NEG_INFINITY;
        for i in 0..=n {
            let x = -PI + TAU * i as f64 / n as f64;
            let z = s.zeta(x).0;
            zmin = zmin.min(z);
            top = top.max(z);
        }
        for i in 0..=n {
            let x = -s.support + 2.0 * s.support * i as f64 / n as f64;
            top = top.max(s.zeta(x).0 + s.p(x).0);
        }
        if !(zmin > 0.0) || !(top < h0) {
            return Err(Error::Parameter(format!(
                "need 0 < inf ζ and sup(ζ, ζ + p) < H₀; got inf ζ = {zmin}, sup = {top}, H₀ = {h0}"
            )));
        }
        Ok(s)
    }

    /// `(ζ(x₁), ζ'(x₁))`.
    pub fn zeta(&self, x1: f64) -> (f64, f64) {
        self.zeta.eval(x1)
    }

    /// `(p(x₁), p'(x₁))`; exactly zero for `|x₁| ≥ L`.
    pub fn p(&self, x1: f64) -> (f64, f64) {
        if x1.abs() >= self.support {
            return (0.0, 0.0);
        }
        self.p.eval(x1)
    }

    /// `L`.
    pub fn support(&self) -> f64 {
        self.support
    }

    pub fn h0(&self) -> f64 {
        self.h0
    }

    pub fn height(&self) -> f64 {
        self.height
    }

    fn check_above(&self, x: Point) -> Result<f64> {
        let z = self.zeta(x[0]).0;
        if x[1] < z {
            return Err(Error::Domain(format!(
                "x = {x:?} lies below the surface ζ = {z}"
            )));
        }
        Ok(z)
    }

    /// Blend `q = p/(ζ − H₀)³` and its derivative in `x₁`.
    fn blend(&self, x1: f64) -> (f64, f64) {
        let (z, dz) = self.zeta(x1);
        let (p, dp) = self.p(x1);
        let g = z - self.h0;
        let g3 = g * g * g;
        (p / g3, dp / g3 - 3.0 * p * dz / (g3 * g))
    }
}

/// `Φ_p(x)`; fails below the surface.
pub fn phi_p(s: &SurfaceModel, x: Point) -> Result<Point> {
    let z = s.check_above(x)?;
    if x[1] >= s.h0 {
        return Ok(x);
    }
    // (x₂ − H₀)/(ζ − H₀) is exactly 1 on the surface, so Γ lands on Γ_p without rounding.
    let t = (x[1] - s.h0) / (z - s.h0);
    Ok([x[0], x[1] + t * t * t * s.p(x[0]).0])
}

/// `∇Φ_p(x)` as rows `[[∂₁Φ₁, ∂₂Φ₁], [∂₁Φ₂, ∂₂Φ₂]]`.
pub fn jacobian(s: &SurfaceModel, x: Point) -> Result<[[f64; 2]; 2]> {
    s.check_above(x)?;
    if x[1] >= s.h0 {
        return Ok([[1.0, 0.0], [0.0, 1.0]]);
    }
    let (q, dq) = s.blend(x[0]);
    let y = x[1] - s.h0;
    Ok([[1.0, 0.0], [y * y * y * dq, 1.0 + 3.0 * y * y * q]])
}

/// Coefficients of the flattened problem at `x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coefficients {
    pub a: [[f64; 2]; 2],
    pub c: f64,
}

impl Coefficients {
    pub const IDENTITY: Coefficients = Coefficients {
        a: [[1.0, 0.0], [0.0, 1.0]],
        c: 1.0,
    };
}

/// `(A_p, c_p)` at `x` in the strip `ζ ≤ x₂ < H`. With `J = [[1, 0], [a, b]]`,
/// `A_p = |b|·[[1, −a/b], [−a/b, (1 + a²)/b²]]` and `c_p = |b|`.
pub fn coeffs_ap_cp(s: &SurfaceModel, x: Point) -> Result<Coefficients> {
    if x[1] >= s.height {
        return Err(Error::Domain(format!(
            "x₂ = {} is at or above H = {}; coefficients live in the strip",
            x[1], s.height
        )));
    }
    let j = jacobian(s, x)?;
    let (a, b) = (j[1][0], j[1][1]);
    if !(b > 0.0) {
        return Err(Error::Degenerate {
            x1: x[0],
            x2: x[1],
            det: b,
        });
    }
    if a == 0.0 && b == 1.0 {
        return Ok(Coefficients::IDENTITY);
    }
    let r = -a / b;
    Ok(Coefficients {
        a: [[b, b * r], [b * r, (1.0 + a * a) / b]],
        c: b,
    })
}

/// Smallest `det ∇Φ_p` over an `n × n` grid of `[−L, L] × [ζ, H₀]`; `Φ_p` is injective on each
/// vertical line, hence everywhere, while this stays positive.
pub fn min_jacobian(s: &SurfaceModel, n: usize) -> f64 {
    let n = n.max(2);
    let mut worst = f64::INFINITY;
    for i in 0..n {
        let x1 = -s.support + 2.0 * s.support * i as f64 / (n - 1) as f64;
        let z = s.zeta(x1).0;
        for m in 0..n {
            let x2 = z + (s.h0 - z) * m as f64 / (n - 1) as f64;
            if let Ok(j) = jacobian(s, [x1, x2]) {
                worst = worst.min(j[1][1]);
            }
        }
    }
    worst
}
