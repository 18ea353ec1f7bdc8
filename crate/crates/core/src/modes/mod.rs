//! Quasi-periodic fields above a periodic surface.
//!
//! For a wavenumber `k` the Bloch parameter `α₀` is singular when some `α₀ + j` sits at
//! `±k`. Around such a point the Bloch transform of the scattered field carries a
//! `√(α − α₀)` or `|α − α₀|` factor, and each Fourier mode `j` of it produces a field
//!
//! ```text
//! v(x) = ∫ w(α − α₀) g(α) e^{i(α+j)x₁ + i√(k² − (α+j)²)(x₂ − H)} dα
//! ```
//!
//! over the window `[α₀ − δ, α₀ + δ]`. Modes split into three regimes: propagating
//! (`|α₀ + j| < k`), cutoff (`= k`) and evanescent (`> k`). The vertical factor always takes
//! the decaying branch, `i√(k² − ξ²) = −√(ξ² − k²)` for `|ξ| > k`.

mod cell;
mod field;

pub use cell::{
    cell_h1_norm, grid_h1_norm, CellField, CellGrid, PeriodicField, Pointwise, SpectralField,
};
pub use field::{
    radial_derivative, radiation_residual, synth_mode_field, write_sweep_csv, ModeField, SweepRow,
    Weight, Window,
};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::fbt::LambdaKind;

/// Tolerance for deciding `|α₀ + j| = k`.
pub const CUTOFF_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Case {
    /// `2k` is not an integer.
    #[serde(rename = "I")]
    I,
    /// `k` is an integer.
    #[serde(rename = "II-integer")]
    IIInteger,
    /// `k − 1/2` is an integer.
    #[serde(rename = "II-half")]
    IIHalf,
}

impl Case {
    pub fn of(k: f64) -> Case {
        let two_k = 2.0 * k;
        if (two_k - two_k.round()).abs() > CUTOFF_TOL {
            Case::I
        } else if (two_k.round() as i64) % 2 == 0 {
            Case::IIInteger
        } else {
            Case::IIHalf
        }
    }
}

/// Wavenumber, reference heights and the singular windows derived from them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ConfigRepr")]
pub struct ProblemConfig {
    pub k: f64,
    /// Height `H` of the line above the surface where the upward expansions start.
    pub height: f64,
    /// Standoff `h > 0`; fields are evaluated at `x₂ ≥ H + h`.
    pub standoff: f64,
    pub case: Case,
    pub singular_set: Vec<f64>,
    pub lambda_kind: LambdaKind,
    /// Half-width of the window around each singular `α₀`.
    pub delta: f64,
    /// Angular margin: propagating windows stay inside `(δ₀, π − δ₀)`.
    pub delta0: f64,
    /// Mode truncation for classification.
    pub j_max: i64,
}

#[derive(Deserialize)]
struct ConfigRepr {
    k: f64,
    #[serde(default)]
    height: f64,
    #[serde(default = "default_standoff")]
    standoff: f64,
    delta: f64,
    #[serde(default = "default_delta0")]
    delta0: f64,
    #[serde(default)]
    j_max: Option<i64>,
    #[serde(default)]
    case: Option<Case>,
    #[serde(default)]
    singular_set: Option<Vec<f64>>,
    #[serde(default)]
    lambda_kind: Option<LambdaKind>,
}

fn default_standoff() -> f64 {
    1.0
}
fn default_delta0() -> f64 {
    0.05
}

impl TryFrom<ConfigRepr> for ProblemConfig {
    type Error = Error;

    fn try_from(r: ConfigRepr) -> Result<Self> {
        let mut c = ProblemConfig::new(r.k, r.height, r.standoff, r.delta)?;
        c.delta0 = r.delta0;
        if let Some(j) = r.j_max {
            c = c.with_j_max(j)?;
        }
        if r.case.is_some_and(|case| case != c.case) {
            return Err(Error::Parameter(format!(
                "case {:?} does not match k = {}",
                r.case.unwrap(),
                r.k
            )));
        }
        if let Some(set) = r.singular_set {
            let same = set.len() == c.singular_set.len()
                && set
                    .iter()
                    .zip(&c.singular_set)
                    .all(|(a, b)| (a - b).abs() <= CUTOFF_TOL);
            if !same {
                return Err(Error::Parameter(format!(
                    "singular set {set:?} does not match k = {}",
                    r.k
                )));
            }
        }
        if r.lambda_kind.is_some_and(|l| l != c.lambda_kind) {
            return Err(Error::Parameter("lambda_kind does not match k".into()));
        }
        Ok(c)
    }
}

impl ProblemConfig {
    /// Derives the case, singular set and α-interval from `k`, and checks that every window
    /// `[α₀ − δ, α₀ + δ]` lies in the closed interval.
    pub fn new(k: f64, height: f64, standoff: f64, delta: f64) -> Result<Self> {
        if !(k > 0.0) || !k.is_finite() {
            return Err(Error::Parameter(format!("k = {k} must be positive")));
        }
        if !(standoff > 0.0) {
            return Err(Error::Parameter("standoff must be positive".into()));
        }
        if !(delta > 0.0) {
            return Err(Error::Parameter("delta must be positive".into()));
        }
        let case = Case::of(k);
        let (singular_set, lambda_kind) = match case {
            Case::I => {
                let kappa = k - k.round();
                (vec![-kappa.abs(), kappa.abs()], LambdaKind::Centered)
            }
            Case::IIInteger => (vec![0.0], LambdaKind::Centered),
            Case::IIHalf => (vec![0.5], LambdaKind::Shifted),
        };
        let (lo, hi) = match lambda_kind {
            LambdaKind::Centered => (-0.5, 0.5),
            LambdaKind::Shifted => (0.0, 1.0),
        };
        for a in &singular_set {
            if a - delta < lo - CUTOFF_TOL || a + delta > hi + CUTOFF_TOL {
                return Err(Error::Parameter(format!(
                    "window [{}, {}] leaves [{lo}, {hi}]",
                    a - delta,
                    a + delta
                )));
            }
        }
        Ok(ProblemConfig {
            k,
            height,
            standoff,
            case,
            singular_set,
            lambda_kind,
            delta,
            delta0: default_delta0(),
            j_max: k.ceil() as i64 + 2,
        })
    }

    pub fn with_j_max(mut self, j_max: i64) -> Result<Self> {
        check_j_max(self.k, j_max)?;
        self.j_max = j_max;
        Ok(self)
    }

    pub fn with_delta0(mut self, delta0: f64) -> Self {
        self.delta0 = delta0;
        self
    }

    /// The member of the singular set equal to `alpha0`, if any.
    pub fn singular_point(&self, alpha0: f64) -> Result<f64> {
        self.singular_set
            .iter()
            .copied()
            .find(|a| (a - alpha0).abs() <= CUTOFF_TOL)
            .ok_or_else(|| {
                Error::Parameter(format!(
                    "α₀ = {alpha0} is not in the singular set {:?}",
                    self.singular_set
                ))
            })
    }

    /// Observation point `(0, H) + r(cos θ*, sin θ*)`.
    pub fn polar_point(&self, r: f64, theta_star: f64) -> [f64; 2] {
        [r * theta_star.cos(), self.height + r * theta_star.sin()]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Propagating,
    Cutoff,
    Evanescent,
}

/// Partition of `−j_max..=j_max` by the sign of `|α₀ + j| − k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeSet {
    pub j_minus: Vec<i64>,
    pub j_zero: Vec<i64>,
    pub j_plus_truncated: Vec<i64>,
    pub j_max: i64,
    pub alpha0: f64,
}

impl ModeSet {
    pub fn regime(&self, j: i64) -> Option<Regime> {
        if self.j_minus.contains(&j) {
            Some(Regime::Propagating)
        } else if self.j_zero.contains(&j) {
            Some(Regime::Cutoff)
        } else if self.j_plus_truncated.contains(&j) {
            Some(Regime::Evanescent)
        } else {
            None
        }
    }
}

/// `j_max ≥ ceil(k) + 1`: with `|α₀| ≤ 1/2` both `±j_max` are then evanescent.
fn check_j_max(k: f64, j_max: i64) -> Result<()> {
    if j_max < k.ceil() as i64 + 1 {
        return Err(Error::Parameter(format!(
            "j_max = {j_max} is below ceil(k) + 1"
        )));
    }
    Ok(())
}

pub fn classify_modes(config: &ProblemConfig, alpha0: f64, j_max: i64) -> Result<ModeSet> {
    let alpha0 = config.singular_point(alpha0)?;
    check_j_max(config.k, j_max)?;
    let mut set = ModeSet {
        j_minus: Vec::new(),
        j_zero: Vec::new(),
        j_plus_truncated: Vec::new(),
        j_max,
        alpha0,
    };
    for j in -j_max..=j_max {
        let gap = (alpha0 + j as f64).abs() - config.k;
        if gap.abs() <= CUTOFF_TOL {
            set.j_zero.push(j);
        } else if gap < 0.0 {
            set.j_minus.push(j);
        } else {
            set.j_plus_truncated.push(j);
        }
    }
    Ok(set)
}

/// `i√(k² − ξ²)` on the decaying branch.
#[inline]
pub fn vertical_factor(xi: f64, k: f64) -> Complex64 {
    let d = k * k - xi * xi;
    if d >= 0.0 {
        Complex64::new(0.0, d.sqrt())
    } else {
        Complex64::new(-(-d).sqrt(), 0.0)
    }
}

/// Angles of a propagating mode seen from `(0, H)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PropagatingGeometry {
    /// `arccos((α₀ + j)/k)`
    pub theta0: f64,
    /// `arccos((α₀ + δ + j)/k)`
    pub beta1: f64,
    /// `arccos((α₀ − δ + j)/k)`
    pub beta2: f64,
    pub theta_star: f64,
    pub r: f64,
}

impl PropagatingGeometry {
    pub fn new(
        config: &ProblemConfig,
        alpha0: f64,
        j: i64,
        theta_star: f64,
        r: f64,
    ) -> Result<Self> {
        let alpha0 = config.singular_point(alpha0)?;
        let c = alpha0 + j as f64;
        let (k, d) = (config.k, config.delta);
        if !(c.abs() < k - d) {
            return Err(Error::Parameter(format!(
                "mode {j} is not propagating across the whole window"
            )));
        }
        if !(theta_star > 0.0 && theta_star < PI) {
            return Err(Error::Parameter(format!("θ* = {theta_star} not in (0, π)")));
        }
        let g = PropagatingGeometry {
            theta0: (c / k).acos(),
            beta1: ((c + d) / k).acos(),
            beta2: ((c - d) / k).acos(),
            theta_star,
            r,
        };
        if !(config.delta0 < g.beta1 && g.beta1 < g.beta2 && g.beta2 < PI - config.delta0) {
            return Err(Error::Parameter(format!(
                "angular window [{}, {}] violates the margin δ₀ = {}",
                g.beta1, g.beta2, config.delta0
            )));
        }
        Ok(g)
    }

    /// Whether the observation direction lies inside the beam `[β₁, β₂]`.
    pub fn in_beam(&self) -> bool {
        (self.beta1..=self.beta2).contains(&self.theta_star)
    }
}

/// A single-α Rayleigh expansion `Σ_j ŵ_j e^{i(α+j)x₁ + i√(k²−(α+j)²)(x₂−H)}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RayleighField {
    pub alpha: f64,
    #[serde(with = "coefficient_map")]
    pub coefficients: BTreeMap<i64, Complex64>,
    pub k: f64,
    pub height: f64,
}

impl RayleighField {
    pub fn new(alpha: f64, k: f64, height: f64) -> Self {
        RayleighField {
            alpha,
            coefficients: BTreeMap::new(),
            k,
            height,
        }
    }

    pub fn with(mut self, j: i64, c: Complex64) -> Self {
        self.coefficients.insert(j, c);
        self
    }

    /// Value at `(x₁, x₂)`, meant for `x₂ ≥ H`.
    pub fn eval(&self, x1: f64, x2: f64) -> Complex64 {
        let y = x2 - self.height;
        self.coefficients
            .iter()
            .map(|(&j, &c)| {
                let xi = self.alpha + j as f64;
                c * (Complex64::new(0.0, xi * x1) + vertical_factor(xi, self.k) * y).exp()
            })
            .sum()
    }

    /// `e^{i2πα}`, the factor picked up per period in `x₁`.
    pub fn bloch_factor(&self) -> Complex64 {
        Complex64::from_polar(1.0, TAU * self.alpha)
    }
}

pub fn rayleigh_eval(field: &RayleighField, x: [f64; 2]) -> Complex64 {
    field.eval(x[0], x[1])
}

mod coefficient_map {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};
    use std::collections::BTreeMap;

    pub fn serialize<S: Serializer>(m: &BTreeMap<i64, Complex64>, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<(i64, [f64; 2])> = m.iter().map(|(j, z)| (*j, [z.re, z.im])).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<BTreeMap<i64, Complex64>, D::Error> {
        let v = Vec::<(i64, [f64; 2])>::deserialize(d)?;
        Ok(v.into_iter()
            .map(|(j, [re, im])| (j, Complex64::new(re, im)))
            .collect())
    }
}
