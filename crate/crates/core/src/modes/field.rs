use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::path::Path;

use super::{classify_modes, vertical_factor, ProblemConfig, Regime, CUTOFF_TOL};
use crate::bump::{Profile, MAX_ORDER};
use crate::error::{Error, Result};
use crate::quad::{integrate, Piece, QuadOptions};

/// Singular factor `w(α − α₀)` multiplying the density.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Weight {
    Smooth,
    Sqrt,
    Abs,
    Sign,
}

impl Weight {
    /// `w(d)`, with `√d = i√(−d)` for `d < 0`.
    pub fn eval(self, d: f64) -> Complex64 {
        match self {
            Weight::Smooth => Complex64::new(1.0, 0.0),
            Weight::Sqrt if d >= 0.0 => Complex64::new(d.sqrt(), 0.0),
            Weight::Sqrt => Complex64::new(0.0, (-d).sqrt()),
            Weight::Abs => Complex64::new(d.abs(), 0.0),
            Weight::Sign => Complex64::new(
                if d > 0.0 {
                    1.0
                } else if d < 0.0 {
                    -1.0
                } else {
                    0.0
                },
                0.0,
            ),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Weight::Smooth => "smooth",
            Weight::Sqrt => "sqrt",
            Weight::Abs => "abs",
            Weight::Sign => "sign",
        }
    }
}

/// Part of `[α₀ − δ, α₀ + δ]` to integrate over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Window {
    #[default]
    Full,
    /// `[α₀ − δ, α₀]`
    Lower,
    /// `[α₀, α₀ + δ]`
    Upper,
}

/// One sub-interval of the α-window after splitting at `α₀` and at branch points.
/// With `side ≠ 0` the variable is `s ∈ [0, √(q − p)]` and `α = anchor + side·s²`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Segment {
    pub anchor: f64,
    pub side: f64,
    pub s0: f64,
    pub s1: f64,
}

impl Segment {
    #[inline]
    pub fn alpha(&self, s: f64) -> f64 {
        if self.side == 0.0 {
            s
        } else {
            self.anchor + self.side * s * s
        }
    }

    #[inline]
    pub fn jacobian(&self, s: f64) -> f64 {
        if self.side == 0.0 {
            1.0
        } else {
            2.0 * s
        }
    }
}

/// Splits `[lo, hi]` at the singular points inside it; each piece carries at most one
/// singular end, removed by the square substitution.
pub(crate) fn segments(lo: f64, hi: f64, singular: &[f64]) -> Vec<Segment> {
    let tol = 1e-14 * (1.0 + lo.abs().max(hi.abs()));
    let mut cuts: Vec<(f64, bool)> = vec![(lo, false), (hi, false)];
    for &p in singular {
        if (p - lo).abs() <= tol {
            cuts[0].1 = true;
        } else if (p - hi).abs() <= tol {
            cuts[1].1 = true;
        } else if lo < p && p < hi {
            cuts.push((p, true));
        }
    }
    cuts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out = Vec::new();
    for w in cuts.windows(2) {
        let ((p, sp), (q, sq)) = (w[0], w[1]);
        if !(q > p) {
            continue;
        }
        match (sp, sq) {
            (false, false) => out.push(Segment {
                anchor: 0.0,
                side: 0.0,
                s0: p,
                s1: q,
            }),
            (true, false) => out.push(Segment {
                anchor: p,
                side: 1.0,
                s0: 0.0,
                s1: (q - p).sqrt(),
            }),
            (false, true) => out.push(Segment {
                anchor: q,
                side: -1.0,
                s0: 0.0,
                s1: (q - p).sqrt(),
            }),
            (true, true) => {
                let m = 0.5 * (p + q);
                out.push(Segment {
                    anchor: p,
                    side: 1.0,
                    s0: 0.0,
                    s1: (m - p).sqrt(),
                });
                out.push(Segment {
                    anchor: q,
                    side: -1.0,
                    s0: 0.0,
                    s1: (q - m).sqrt(),
                });
            }
        }
    }
    out
}

// Below e^{-60} of the amplitude the integrand no longer affects any reported digit.
const NEGLIGIBLE: f64 = -60.0;

/// Exponent used for panel sizing; decay past `e^{-60}` is not resolved.
pub(crate) fn sizing_exponent(e: Complex64) -> Complex64 {
    if e.re < NEGLIGIBLE {
        Complex64::new(NEGLIGIBLE, 0.0)
    } else {
        e
    }
}

pub(crate) fn field_options() -> QuadOptions {
    QuadOptions {
        abs_tol: 1e-14,
        rel_tol: 1e-10,
        max_step: 0.05,
        ..QuadOptions::default()
    }
}

/// The field of one Fourier mode `j` of a singular Bloch component:
/// `∫ w(α − α₀) g(α) e^{i(α+j)x₁ + i√(k²−(α+j)²)(x₂−H)} dα` over the selected window.
#[derive(Clone, Copy)]
pub struct ModeField<'a> {
    config: &'a ProblemConfig,
    alpha0: f64,
    j: i64,
    weight: Weight,
    window: Window,
    density: &'a dyn Profile,
    regime: Regime,
}

impl std::fmt::Debug for ModeField<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ModeField")
            .field("alpha0", &self.alpha0)
            .field("j", &self.j)
            .field("weight", &self.weight)
            .field("window", &self.window)
            .field("regime", &self.regime)
            .finish()
    }
}

impl<'a> ModeField<'a> {
    /// Full-window field. Fails if `alpha0` is not singular for `config`, if `j` lies beyond
    /// `config.j_max`, or if the density does not vanish at the window ends.
    pub fn new(
        config: &'a ProblemConfig,
        alpha0: f64,
        j: i64,
        weight: Weight,
        density: &'a dyn Profile,
    ) -> Result<Self> {
        Self::windowed(config, alpha0, j, weight, Window::Full, density)
    }

    /// Field over one side of `α₀`; the density only has to vanish at the outer end.
    pub fn windowed(
        config: &'a ProblemConfig,
        alpha0: f64,
        j: i64,
        weight: Weight,
        window: Window,
        density: &'a dyn Profile,
    ) -> Result<Self> {
        let set = classify_modes(config, alpha0, config.j_max)?;
        let regime = set.regime(j).ok_or_else(|| {
            Error::Parameter(format!(
                "mode {j} is outside the classified range |j| ≤ {}",
                config.j_max
            ))
        })?;
        let field = ModeField {
            config,
            alpha0: set.alpha0,
            j,
            weight,
            window,
            density,
            regime,
        };
        field.check_density()?;
        Ok(field)
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn j(&self) -> i64 {
        self.j
    }

    pub fn weight(&self) -> Weight {
        self.weight
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn config(&self) -> &ProblemConfig {
        self.config
    }

    fn bounds(&self) -> (f64, f64) {
        let d = self.config.delta;
        match self.window {
            Window::Full => (self.alpha0 - d, self.alpha0 + d),
            Window::Lower => (self.alpha0 - d, self.alpha0),
            Window::Upper => (self.alpha0, self.alpha0 + d),
        }
    }

    /// The density has to vanish to order 4 at the outer ends of the window.
    fn check_density(&self) -> Result<()> {
        let d = self.config.delta;
        let mut ends = Vec::new();
        if self.window != Window::Upper {
            ends.push(self.alpha0 - d);
        }
        if self.window != Window::Lower {
            ends.push(self.alpha0 + d);
        }
        for e in ends {
            if (0..=MAX_ORDER).any(|n| self.density.eval(e, n) != 0.0) {
                return Err(Error::Parameter(format!(
                    "density does not vanish at the window end α = {e}"
                )));
            }
        }
        Ok(())
    }

    /// Integration range clipped to the density's support, split at α₀ and branch points.
    pub(crate) fn segments(&self) -> Vec<Segment> {
        let (lo, hi) = self.bounds();
        let (slo, shi) = self.density.support();
        let (lo, hi) = (lo.max(slo), hi.min(shi));
        if !(lo < hi) {
            return Vec::new();
        }
        let k = self.config.k;
        let jf = self.j as f64;
        let mut singular = vec![self.alpha0];
        for b in [k - jf, -k - jf] {
            if lo - CUTOFF_TOL <= b && b <= hi + CUTOFF_TOL && (b - self.alpha0).abs() > CUTOFF_TOL
            {
                singular.push(b);
            }
        }
        segments(lo, hi, &singular)
    }

    /// `w(α − α₀) g(α)` times the Jacobian at `s`, and `ξ = α + j`.
    #[inline]
    pub(crate) fn amplitude(&self, seg: &Segment, s: f64) -> (Complex64, f64) {
        let a = seg.alpha(s);
        let d = if seg.side != 0.0 && (seg.anchor - self.alpha0).abs() <= CUTOFF_TOL {
            // exact offset from the substitution
            seg.side * s * s
        } else {
            a - self.alpha0
        };
        let amp = self.weight.eval(d) * (self.density.value(a) * seg.jacobian(s));
        (amp, a + self.j as f64)
    }

    fn check_point(&self, x: [f64; 2]) -> Result<()> {
        let floor = self.config.height + self.config.standoff;
        if x[1] < floor - 1e-12 * floor.abs().max(1.0) {
            return Err(Error::Parameter(format!(
                "x₂ = {} is below H + h = {floor}",
                x[1]
            )));
        }
        Ok(())
    }

    /// `∫ m(ξ, i√(k²−ξ²)) w g e^{iξx₁ + i√(k²−ξ²)y} dα` for a multiplier `m`.
    fn integrate_with(
        &self,
        x: [f64; 2],
        multiplier: impl Fn(f64, Complex64) -> Complex64 + Sync + Copy,
    ) -> Result<Complex64> {
        self.check_point(x)?;
        let k = self.config.k;
        let y = x[1] - self.config.height;
        let segs = self.segments();
        let pieces: Vec<Piece<'_>> = segs
            .iter()
            .map(|seg| {
                let seg = *seg;
                let exponent = move |s: f64| {
                    let xi = seg.alpha(s) + self.j as f64;
                    sizing_exponent(Complex64::new(0.0, xi * x[0]) + vertical_factor(xi, k) * y)
                };
                Piece::new(
                    move |s: f64| {
                        let (amp, xi) = self.amplitude(&seg, s);
                        let vf = vertical_factor(xi, k);
                        let e = Complex64::new(0.0, xi * x[0]) + vf * y;
                        amp * multiplier(xi, vf) * e.exp()
                    },
                    exponent,
                    seg.s0,
                    seg.s1,
                )
            })
            .collect();
        Ok(integrate(&pieces, &field_options())?.value)
    }

    pub fn value(&self, x: [f64; 2]) -> Result<Complex64> {
        self.integrate_with(x, |_, _| Complex64::new(1.0, 0.0))
    }

    /// `∂v/∂r` about `(0, H)`, differentiating under the integral.
    pub fn radial_derivative(&self, x: [f64; 2]) -> Result<Complex64> {
        let (c, s) = self.direction(x);
        self.integrate_with(x, move |xi, vf| Complex64::new(0.0, xi * c) + vf * s)
    }

    /// `∂v/∂r − ikv` at `(0, H) + r(cos θ*, sin θ*)`, as one integral with multiplier
    /// `iξ cos θ* + i√(k²−ξ²) sin θ* − ik`.
    pub fn residual(&self, r: f64, theta_star: f64) -> Result<Complex64> {
        let x = self.config.polar_point(r, theta_star);
        let (c, s) = (theta_star.cos(), theta_star.sin());
        let k = self.config.k;
        self.integrate_with(x, move |xi, vf| Complex64::new(0.0, xi * c - k) + vf * s)
    }

    fn direction(&self, x: [f64; 2]) -> (f64, f64) {
        let (x1, y) = (x[0], x[1] - self.config.height);
        let r = x1.hypot(y);
        (x1 / r, y / r)
    }
}

pub fn synth_mode_field(field: &ModeField<'_>, x: [f64; 2]) -> Result<Complex64> {
    field.value(x)
}

pub fn radial_derivative(field: &ModeField<'_>, x: [f64; 2]) -> Result<Complex64> {
    field.radial_derivative(x)
}

pub fn radiation_residual(field: &ModeField<'_>, r: f64, theta_star: f64) -> Result<Complex64> {
    field.residual(r, theta_star)
}

/// One sample of a radiation sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub j: i64,
    pub weight: Weight,
    pub r: f64,
    pub theta_star: f64,
    pub re: f64,
    pub im: f64,
    pub magnitude: f64,
    /// `r^{3/2}|∂v/∂r − ikv|`
    pub scaled_residual: f64,
}

impl SweepRow {
    pub fn sample(field: &ModeField<'_>, r: f64, theta_star: f64) -> Result<Self> {
        let x = field.config().polar_point(r, theta_star);
        let v = field.value(x)?;
        let res = field.residual(r, theta_star)?;
        Ok(SweepRow {
            j: field.j(),
            weight: field.weight(),
            r,
            theta_star,
            re: v.re,
            im: v.im,
            magnitude: v.norm(),
            scaled_residual: r.powf(1.5) * res.norm(),
        })
    }
}

pub fn write_sweep_csv(path: &Path, rows: &[SweepRow]) -> Result<()> {
    let io = |e: csv::Error| Error::Format {
        path: path.to_path_buf(),
        message: e.to_string(),
    };
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record([
        "j",
        "weight",
        "r",
        "theta_star",
        "re",
        "im",
        "magnitude",
        "scaled_residual",
    ])
    .map_err(io)?;
    for row in rows {
        w.write_record([
            row.j.to_string(),
            row.weight.name().to_string(),
            row.r.to_string(),
            row.theta_star.to_string(),
            row.re.to_string(),
            row.im.to_string(),
            row.magnitude.to_string(),
            row.scaled_residual.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })
}
