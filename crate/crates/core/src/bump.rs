//! Smooth test densities with exact compact support.
//!
//! The two-sided profile is
//!
//! ```text
//! b(u) = exp(1 − 1/(1 − u²)),   |u| < 1,   u = (x − center)/halfwidth,
//! ```
//!
//! and zero elsewhere, so `b(0) = 1`. The one-sided profile is the smooth step
//! `f(1−v)/(f(1−v) + f(v))` with `f(t) = e^{−1/t}`: it equals 1 on the inner side of `center`,
//! falls to 0 at `center ± halfwidth` and is flat to all orders at both ends of the ramp.
//! Derivatives up to order 4 come from truncated Taylor arithmetic.

use serde::{Deserialize, Serialize};

use crate::jet::{Jet, ORDER};

/// Largest supported derivative order.
pub const MAX_ORDER: usize = ORDER;

// exp(-700) is far below anything the quadratures can see; treat it as exact zero.
const UNDERFLOW: f64 = -700.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DensityKind {
    TwoSidedBump,
    OneSidedBump,
    Zero,
    PowerLawModulated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Density {
    pub kind: DensityKind,
    pub center: f64,
    pub halfwidth: f64,
    pub side: Side,
    #[serde(default)]
    pub modulation_power: u32,
}

/// Anything that can stand in for a real density: a value with four derivatives and a
/// support interval (possibly unbounded on one side).
pub trait Profile: Sync {
    fn eval(&self, x: f64, order: usize) -> f64;
    fn support(&self) -> (f64, f64);

    fn value(&self, x: f64) -> f64 {
        self.eval(x, 0)
    }
}

impl Density {
    pub fn two_sided(center: f64, halfwidth: f64) -> Self {
        Density {
            kind: DensityKind::TwoSidedBump,
            center,
            halfwidth,
            side: Side::Both,
            modulation_power: 0,
        }
    }

    /// Plateau of height 1 on the inner side of `center`, ramping to 0 over `halfwidth`
    /// towards `side`.
    pub fn one_sided(center: f64, halfwidth: f64, side: Side) -> Self {
        assert!(side != Side::Both, "one-sided density needs a side");
        Density {
            kind: DensityKind::OneSidedBump,
            center,
            halfwidth,
            side,
            modulation_power: 0,
        }
    }

    pub fn zero() -> Self {
        Density {
            kind: DensityKind::Zero,
            center: 0.0,
            halfwidth: 1.0,
            side: Side::Both,
            modulation_power: 0,
        }
    }

    /// Two-sided bump times `(x − center)^power`.
    pub fn modulated(center: f64, halfwidth: f64, power: u32) -> Self {
        Density {
            kind: DensityKind::PowerLawModulated,
            center,
            halfwidth,
            side: Side::Both,
            modulation_power: power,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.kind == DensityKind::Zero
    }

    /// Value or derivative of order `order ≤ 4` at `x`.
    pub fn eval(&self, x: f64, order: usize) -> f64 {
        assert!(
            order <= MAX_ORDER,
            "derivative order {order} exceeds {MAX_ORDER}"
        );
        if order == 0 {
            return self.value(x);
        }
        self.jet(x).derivative(order)
    }

    /// Order-0 value without Taylor arithmetic; agrees with the jet path to rounding.
    pub fn value(&self, x: f64) -> f64 {
        let (c, w) = (self.center, self.halfwidth);
        match self.kind {
            DensityKind::Zero => 0.0,
            DensityKind::TwoSidedBump => bump_value((x - c) / w),
            DensityKind::PowerLawModulated => {
                let b = bump_value((x - c) / w);
                if b == 0.0 {
                    0.0
                } else {
                    b * (x - c).powi(self.modulation_power as i32)
                }
            }
            DensityKind::OneSidedBump => match self.side {
                Side::Left => step_value((c - x) / w),
                _ => step_value((x - c) / w),
            },
        }
    }

    /// Closed support, with infinite ends for the plateau side of a one-sided density.
    pub fn support(&self) -> (f64, f64) {
        let (c, w) = (self.center, self.halfwidth);
        match (self.kind, self.side) {
            (DensityKind::Zero, _) => (0.0, 0.0),
            (DensityKind::OneSidedBump, Side::Right) => (f64::NEG_INFINITY, c + w),
            (DensityKind::OneSidedBump, Side::Left) => (c - w, f64::INFINITY),
            _ => (c - w, c + w),
        }
    }

    pub(crate) fn jet(&self, x: f64) -> Jet {
        let (c, w) = (self.center, self.halfwidth);
        match self.kind {
            DensityKind::Zero => Jet::zero(),
            DensityKind::TwoSidedBump => bump_jet((x - c) / w, 1.0 / w),
            DensityKind::PowerLawModulated => {
                let b = bump_jet((x - c) / w, 1.0 / w);
                if b == Jet::zero() {
                    b
                } else {
                    b * Jet::linear(x - c, 1.0).powi(self.modulation_power)
                }
            }
            DensityKind::OneSidedBump => match self.side {
                Side::Left => step_jet((c - x) / w, -1.0 / w),
                _ => step_jet((x - c) / w, 1.0 / w),
            },
        }
    }
}

impl Profile for Density {
    fn eval(&self, x: f64, order: usize) -> f64 {
        Density::eval(self, x, order)
    }
    fn value(&self, x: f64) -> f64 {
        Density::value(self, x)
    }
    fn support(&self) -> (f64, f64) {
        Density::support(self)
    }
}

/// `exp(1 − 1/(1−u²))` as a jet in `x`, where `du/dx = slope`.
fn bump_jet(u: f64, slope: f64) -> Jet {
    if u.abs() >= 1.0 {
        return Jet::zero();
    }
    let one_minus = 1.0 - u * u;
    if 1.0 - 1.0 / one_minus < UNDERFLOW {
        return Jet::zero();
    }
    let uj = Jet::linear(u, slope);
    let q = (Jet::constant(1.0) - uj * uj).recip();
    (Jet::constant(1.0) - q).exp()
}

fn bump_value(u: f64) -> f64 {
    if u.abs() >= 1.0 {
        return 0.0;
    }
    let g = 1.0 - 1.0 / (1.0 - u * u);
    if g < UNDERFLOW {
        0.0
    } else {
        g.exp()
    }
}

fn step_value(v: f64) -> f64 {
    if v <= 0.0 {
        return 1.0;
    }
    if v >= 1.0 {
        return 0.0;
    }
    let ea = -1.0 / (1.0 - v);
    let eb = -1.0 / v;
    if ea < UNDERFLOW {
        return 0.0;
    }
    if eb < UNDERFLOW {
        return 1.0;
    }
    // f(1−v)/(f(1−v)+f(v)) = 1/(1 + e^{eb−ea})
    1.0 / (1.0 + (eb - ea).exp())
}

/// `e^{−1/t}` as a jet, zero once it underflows.
fn flat_exp(t: Jet) -> Jet {
    if t.0[0] <= 0.0 || -1.0 / t.0[0] < UNDERFLOW {
        return Jet::zero();
    }
    (-t.recip()).exp()
}

/// Smooth step: 1 for `v ≤ 0`, 0 for `v ≥ 1`, `dv/dx = slope`.
fn step_jet(v: f64, slope: f64) -> Jet {
    if v <= 0.0 {
        return Jet::constant(1.0);
    }
    if v >= 1.0 {
        return Jet::zero();
    }
    let vj = Jet::linear(v, slope);
    let a = flat_exp(Jet::constant(1.0) - vj);
    let b = flat_exp(vj);
    if a == Jet::zero() {
        return Jet::zero();
    }
    if b == Jet::zero() {
        return Jet::constant(1.0);
    }
    a * (a + b).recip()
}

/// A finite linear combination `Σ cᵢ φᵢ`, used to test linearity of integrals in the density.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Superposition {
    pub terms: Vec<(f64, Density)>,
}

impl Superposition {
    pub fn new(terms: Vec<(f64, Density)>) -> Self {
        Superposition { terms }
    }
}

impl Profile for Superposition {
    fn eval(&self, x: f64, order: usize) -> f64 {
        self.terms.iter().map(|(c, d)| c * d.eval(x, order)).sum()
    }

    fn support(&self) -> (f64, f64) {
        self.terms
            .iter()
            .filter(|(c, d)| *c != 0.0 && !d.is_zero())
            .map(|(_, d)| d.support())
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), (c, d)| {
                (a.min(c), b.max(d))
            })
    }
}
