//! Model oscillatory integrals with endpoint and interior singularities.
//!
//! | class | integral | large-`r` decay |
//! |-------|----------|-----------------|
//! | A1 | `∫₀^δ x^{-1/2} φ(x) e^{irx} dx` | `r^{-1/2}` |
//! | A2 | `∫₀^δ x^{m-1/2} φ(x) e^{irx} dx` | `r^{-1/2-m}` |
//! | A3 | `∫₀^δ x^m φ(x) e^{irx} dx` | `r^{-1-m}` |
//! | B1 | `∫₀^δ √x φ(x) e^{irx²} dx` | `r^{-3/4}` |
//! | B2 | `∫_{-a}^δ (x+a)² φ(x) e^{irx²} dx` | `r^{-1/2}` |
//! | C1 | `∫_{γ₁}^{γ₂} (x-a)^{-1/2} φ(x) e^{irx²} dx` | `a^{-1} r^{-1/2}` |
//! | C2 | `∫_{γ₁}^{γ₂} (x-a)^{1/2} φ(x) e^{irx²} dx` | `r^{-1/2}` |
//! | D1 | `∫_{γ₁}^{γ₂} \|x-a\| φ(x) e^{irx²} dx` | `r^{-1/2}` |
//! | D2 | `∫_{γ₁}^{γ₂} sgn(x-a) φ(x) e^{irx²} dx` | `r^{-1/2}` |
//!
//! For A and B1, `φ` must vanish near `δ`; for B2 near `δ`; for C and D at both `γ₁` and
//! `γ₂`. Square roots of negative numbers take the principal branch, `√(x−a) = i√(a−x)`.
//!
//! [`eval_integral`] removes square-root singularities with `x = a ± s²`, splits at kinks and
//! stationary points, and sums Gauss–Kronrod panels sized to the local oscillation.
//! [`oracle_integral`] is an independent adaptive-Simpson evaluation on a graded mesh.

mod oracle;

pub use oracle::oracle_integral;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::bump::{Profile, MAX_ORDER};
use crate::error::{Error, Result};
use crate::quad::{integrate, Piece, QuadOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum IntegralClass {
    A1,
    A2,
    A3,
    B1,
    B2,
    C1,
    C2,
    D1,
    D2,
}

impl IntegralClass {
    pub const ALL: [IntegralClass; 9] = [
        IntegralClass::A1,
        IntegralClass::A2,
        IntegralClass::A3,
        IntegralClass::B1,
        IntegralClass::B2,
        IntegralClass::C1,
        IntegralClass::C2,
        IntegralClass::D1,
        IntegralClass::D2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IntegralClass::A1 => "A1",
            IntegralClass::A2 => "A2",
            IntegralClass::A3 => "A3",
            IntegralClass::B1 => "B1",
            IntegralClass::B2 => "B2",
            IntegralClass::C1 => "C1",
            IntegralClass::C2 => "C2",
            IntegralClass::D1 => "D1",
            IntegralClass::D2 => "D2",
        }
    }

    /// Integrals on `[0, δ]` with a one-sided density.
    pub fn is_one_sided(self) -> bool {
        matches!(
            self,
            IntegralClass::A1 | IntegralClass::A2 | IntegralClass::A3 | IntegralClass::B1
        )
    }

    pub(crate) fn quadratic_phase(self) -> bool {
        !matches!(
            self,
            IntegralClass::A1 | IntegralClass::A2 | IntegralClass::A3
        )
    }

    /// Decay exponent of `|I(r)|` for a density that does not vanish at the critical points.
    /// For C1 this is the exponent of `a·I(r)`.
    pub fn expected_exponent(self, m: u32) -> f64 {
        match self {
            IntegralClass::A1 => 0.5,
            IntegralClass::A2 => 0.5 + f64::from(m),
            IntegralClass::A3 => 1.0 + f64::from(m),
            IntegralClass::B1 => 0.75,
            _ => 0.5,
        }
    }
}

impl std::fmt::Display for IntegralClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralSpec {
    pub class: IntegralClass,
    #[serde(default = "one")]
    pub r: f64,
    #[serde(default)]
    pub a: f64,
    #[serde(default = "one")]
    pub delta: f64,
    #[serde(default = "minus_half")]
    pub gamma1: f64,
    #[serde(default = "half")]
    pub gamma2: f64,
    #[serde(default)]
    pub m: u32,
}

fn one() -> f64 {
    1.0
}
fn half() -> f64 {
    0.5
}
fn minus_half() -> f64 {
    -0.5
}

impl IntegralSpec {
    /// Parameters used by the decay-table sweep; `r` is filled in per sample.
    pub fn standard(class: IntegralClass, m: u32) -> Self {
        let a = match class {
            IntegralClass::B2 => 0.5,
            IntegralClass::C1 | IntegralClass::C2 => 0.05,
            IntegralClass::D1 | IntegralClass::D2 => 0.1,
            _ => 0.0,
        };
        IntegralSpec {
            class,
            r: 1.0,
            a,
            delta: 1.0,
            gamma1: -0.5,
            gamma2: 0.5,
            m,
        }
    }

    pub fn with_r(mut self, r: f64) -> Self {
        self.r = r;
        self
    }

    /// Integration interval `[lower, upper]`.
    pub fn interval(&self) -> (f64, f64) {
        match self.class {
            c if c.is_one_sided() => (0.0, self.delta),
            IntegralClass::B2 => (-self.a, self.delta),
            _ => (self.gamma1, self.gamma2),
        }
    }

    /// Density matching [`IntegralSpec::standard`]: a plateau at the critical points that
    /// ramps to zero before the interval ends.
    pub fn standard_density(class: IntegralClass) -> crate::bump::Density {
        use crate::bump::{Density, Side};
        match class {
            c if c.is_one_sided() => Density::one_sided(0.0, 0.8, Side::Right),
            IntegralClass::B2 => Density::one_sided(0.0, 0.8, Side::Right),
            _ => Density::two_sided(0.0, 0.45),
        }
    }
}

/// Checks the parameter invariants and that `phi` vanishes (with four derivatives) where required.
pub fn validate(spec: &IntegralSpec, phi: &dyn Profile) -> Result<()> {
    if !(spec.r > 0.0) || !spec.r.is_finite() {
        return Err(Error::Parameter(format!("r = {} must be positive", spec.r)));
    }
    let vanishes = |x: f64| (0..=MAX_ORDER).all(|n| phi.eval(x, n) == 0.0);
    match spec.class {
        c if c.is_one_sided() => {
            if !(spec.delta > 0.0) {
                return Err(Error::Parameter("delta must be positive".into()));
            }
            if !vanishes(spec.delta) {
                return Err(Error::Parameter(format!(
                    "{c}: density does not vanish at delta = {}",
                    spec.delta
                )));
            }
        }
        IntegralClass::B2 => {
            if !(spec.a > 0.0) {
                return Err(Error::Parameter("B2 needs a > 0".into()));
            }
            if !(spec.delta > -spec.a) {
                return Err(Error::Parameter("B2 needs delta > -a".into()));
            }
            if !vanishes(spec.delta) {
                return Err(Error::Parameter(format!(
                    "B2: density does not vanish at delta = {}",
                    spec.delta
                )));
            }
        }
        c => {
            if !(spec.gamma1 < spec.gamma2) {
                return Err(Error::Parameter("gamma1 < gamma2 required".into()));
            }
            if !vanishes(spec.gamma1) || !vanishes(spec.gamma2) {
                return Err(Error::Parameter(format!(
                    "{c}: density does not vanish at both interval ends"
                )));
            }
        }
    }
    Ok(())
}

/// Value with the quadrature's own error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub re: f64,
    pub im: f64,
    pub error: f64,
    pub panels: usize,
}

impl Evaluation {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// The integral described by `spec` to `max(1e-10, 1e-8·|I|)`.
pub fn eval_integral(spec: &IntegralSpec, phi: &dyn Profile) -> Result<Complex64> {
    eval_integral_detailed(spec, phi).map(|e| e.value())
}

pub fn eval_integral_detailed(spec: &IntegralSpec, phi: &dyn Profile) -> Result<Evaluation> {
    validate(spec, phi)?;
    let (lo, hi) = spec.interval();
    let (slo, shi) = phi.support();
    let opts = QuadOptions {
        abs_tol: 1e-10,
        rel_tol: 1e-8,
        max_step: 0.02,
        ..QuadOptions::default()
    };
    // Outside the density's support the integrand is zero.
    let lo_eff = lo.max(slo);
    let hi_eff = hi.min(shi);
    if !(lo_eff < hi_eff) {
        return Ok(Evaluation {
            re: 0.0,
            im: 0.0,
            error: 0.0,
            panels: 0,
        });
    }
    let r = spec.r;
    let a = spec.a;
    let m = spec.m;
    let quadratic = spec.class.quadratic_phase();
    let mut pieces = Vec::new();
    match spec.class {
        IntegralClass::A1 | IntegralClass::A2 => {
            // x = s², dx = 2s ds, x^{m-1/2} dx = 2 s^{2m} ds; A1 is the m = 0 case
            let m = if spec.class == IntegralClass::A1 {
                0
            } else {
                m
            };
            substituted(
                &mut pieces,
                phi,
                r,
                quadratic,
                0.0,
                1.0,
                lo_eff,
                hi_eff,
                move |s| Complex64::new(2.0 * s.powi(2 * m as i32), 0.0),
            );
        }
        IntegralClass::B1 => {
            substituted(
                &mut pieces,
                phi,
                r,
                quadratic,
                0.0,
                1.0,
                lo_eff,
                hi_eff,
                |s| Complex64::new(2.0 * s * s, 0.0),
            );
        }
        IntegralClass::A3 => {
            direct(&mut pieces, phi, r, quadratic, lo_eff, hi_eff, move |x| {
                Complex64::new(x.powi(m as i32), 0.0)
            });
        }
        IntegralClass::B2 => {
            direct(&mut pieces, phi, r, quadratic, lo_eff, hi_eff, move |x| {
                Complex64::new((x + a) * (x + a), 0.0)
            });
        }
        IntegralClass::C1 | IntegralClass::C2 => {
            let inverse = spec.class == IntegralClass::C1;
            if hi_eff > a {
                // right of a: √(x−a) = s
                substituted(
                    &mut pieces,
                    phi,
                    r,
                    quadratic,
                    a,
                    1.0,
                    lo_eff.max(a),
                    hi_eff,
                    move |s| {
                        if inverse {
                            Complex64::new(2.0, 0.0)
                        } else {
                            Complex64::new(2.0 * s * s, 0.0)
                        }
                    },
                );
            }
            if lo_eff < a {
                // left of a: √(x−a) = i s
                substituted(
                    &mut pieces,
                    phi,
                    r,
                    quadratic,
                    a,
                    -1.0,
                    lo_eff,
                    hi_eff.min(a),
                    move |s| {
                        if inverse {
                            Complex64::new(0.0, -2.0)
                        } else {
                            Complex64::new(0.0, 2.0 * s * s)
                        }
                    },
                );
            }
        }
        IntegralClass::D1 | IntegralClass::D2 => {
            let sign = spec.class == IntegralClass::D2;
            let weight = move |x: f64| {
                if sign {
                    Complex64::new(
                        if x > a {
                            1.0
                        } else if x < a {
                            -1.0
                        } else {
                            0.0
                        },
                        0.0,
                    )
                } else {
                    Complex64::new((x - a).abs(), 0.0)
                }
            };
            if lo_eff < a {
                direct(
                    &mut pieces,
                    phi,
                    r,
                    quadratic,
                    lo_eff,
                    hi_eff.min(a),
                    weight,
                );
            }
            if hi_eff > a {
                direct(
                    &mut pieces,
                    phi,
                    r,
                    quadratic,
                    lo_eff.max(a),
                    hi_eff,
                    weight,
                );
            }
        }
    }
    let q = integrate(&pieces, &opts)?;
    Ok(Evaluation {
        re: q.value.re,
        im: q.value.im,
        error: q.error,
        panels: q.panels,
    })
}

fn phase(quadratic: bool, r: f64, x: f64) -> f64 {
    if quadratic {
        r * x * x
    } else {
        r * x
    }
}

/// `∫_{x0}^{x1} w(x) φ(x) e^{iψ(x)} dx`, split at the stationary point of a quadratic phase.
fn direct<'a>(
    pieces: &mut Vec<Piece<'a>>,
    phi: &'a dyn Profile,
    r: f64,
    quadratic: bool,
    x0: f64,
    x1: f64,
    weight: impl Fn(f64) -> Complex64 + Sync + Copy + 'a,
) {
    let mut cuts = vec![x0];
    if quadratic && x0 < 0.0 && 0.0 < x1 {
        cuts.push(0.0);
    }
    cuts.push(x1);
    for w in cuts.windows(2) {
        pieces.push(Piece::new(
            move |x| weight(x) * phi.value(x) * Complex64::from_polar(1.0, phase(quadratic, r, x)),
            move |x| Complex64::new(0.0, phase(quadratic, r, x)),
            w[0],
            w[1],
        ));
    }
}

/// Same integral after `x = a + side·s²`; `kernel(s)` already contains the Jacobian `2s` and
/// the singular weight. Split where `x(s)` crosses the stationary point 0.
#[allow(clippy::too_many_arguments)]
fn substituted<'a>(
    pieces: &mut Vec<Piece<'a>>,
    phi: &'a dyn Profile,
    r: f64,
    quadratic: bool,
    a: f64,
    side: f64,
    x0: f64,
    x1: f64,
    kernel: impl Fn(f64) -> Complex64 + Sync + Copy + 'a,
) {
    let s_of = |x: f64| (side * (x - a)).max(0.0).sqrt();
    let (mut s0, mut s1) = (s_of(x0), s_of(x1));
    if s0 > s1 {
        std::mem::swap(&mut s0, &mut s1);
    }
    let x_of = move |s: f64| a + side * s * s;
    let mut cuts = vec![s0];
    if quadratic {
        let s_zero = -side * a;
        if s_zero > 0.0 {
            let sz = s_zero.sqrt();
            if s0 < sz && sz < s1 {
                cuts.push(sz);
            }
        }
    }
    cuts.push(s1);
    for w in cuts.windows(2) {
        pieces.push(Piece::new(
            move |s| {
                let x = x_of(s);
                kernel(s) * phi.value(x) * Complex64::from_polar(1.0, phase(quadratic, r, x))
            },
            move |s| Complex64::new(0.0, phase(quadratic, r, x_of(s))),
            w[0],
            w[1],
        ));
    }
}

/// One row of an `r`-sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub class: IntegralClass,
    pub r: f64,
    pub a: f64,
    pub re: f64,
    pub im: f64,
    pub magnitude: f64,
}

/// Writes sweep rows as CSV with columns `class, r, a, re, im, magnitude`.
pub fn write_sweep_csv(path: &Path, rows: &[SweepRow]) -> Result<()> {
    let io = |e: csv::Error| Error::Format {
        path: path.to_path_buf(),
        message: e.to_string(),
    };
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    for row in rows {
        w.serialize(row).map_err(io)?;
    }
    w.flush().map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })
}
