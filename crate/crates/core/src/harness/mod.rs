//! Verification campaigns: each kind runs a family of sweeps, fits or measures the result and
//! turns it into pass/fail/indeterminate checks collected in a [`Report`].
//!
//! Campaigns are plain data (JSON config files map onto [`Campaign`] field for field) and
//! [`run_campaign`] is deterministic for a fixed campaign: sweeps run in parallel but results are
//! assembled in grid order, and random samples come from a seeded ChaCha stream.

mod campaigns;
pub mod oracles;
mod real;

use std::collections::BTreeMap;
use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::decayfit::{log_grid, DecayFit};
use crate::error::{Error, Result};
use crate::modes::ProblemConfig;
use crate::oscint::IntegralSpec;
use crate::perturb::SurfaceSpec;

pub use real::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CampaignKind {
    IntegralTable,
    Radiation,
    PartA,
    Fb,
    Kernels,
    Perturb,
    Specfun,
}

impl CampaignKind {
    pub const ALL: [CampaignKind; 7] = [
        CampaignKind::IntegralTable,
        CampaignKind::Radiation,
        CampaignKind::PartA,
        CampaignKind::Fb,
        CampaignKind::Kernels,
        CampaignKind::Perturb,
        CampaignKind::Specfun,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CampaignKind::IntegralTable => "integral-table",
            CampaignKind::Radiation => "radiation",
            CampaignKind::PartA => "part-a",
            CampaignKind::Fb => "fb",
            CampaignKind::Kernels => "kernels",
            CampaignKind::Perturb => "perturb",
            CampaignKind::Specfun => "specfun",
        }
    }

    /// Whether the campaign fits decays in `r` (and so needs an `r_grid` over two decades).
    pub fn sweeps_r(self) -> bool {
        matches!(
            self,
            CampaignKind::IntegralTable | CampaignKind::Radiation | CampaignKind::Kernels
        )
    }

    fn default_r_grid(self) -> Vec<f64> {
        match self {
            CampaignKind::IntegralTable => log_grid(1e2, 1e6, 13),
            CampaignKind::Radiation => vec![1e1, 1e2, 1e3, 1e4],
            CampaignKind::Kernels => log_grid(1e2, 1e4, 13),
            _ => Vec::new(),
        }
    }
}

/// Problem parameters for a campaign. Which variant applies depends on the kind: integral
/// tables take an [`IntegralSpec`] template, perturbation campaigns a surface, and the field
/// campaigns a [`ProblemConfig`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CampaignConfig {
    Integral(IntegralSpec),
    Surface(SurfaceSpec),
    Problem(ProblemConfig),
}

/// A sampled layer density read from CSV (`y1,re,im`) with its declared decay.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityFile {
    pub path: PathBuf,
    /// `|φ(y₁)| ≤ constant·(1 + |y₁|)^{-exponent}`.
    pub exponent: f64,
    pub constant: f64,
}

/// Pass thresholds. Every field has a default, so a config only lists what it overrides.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Decay-table exponents.
    pub exponent: f64,
    /// Largest allowed max/min ratio of a scaled quantity across the `r` grid.
    pub ratio: f64,
    /// Cell-norm decay exponents.
    pub cell_exponent: f64,
    /// Lower bound for the smooth-density cell-norm exponent.
    pub smooth_exponent_min: f64,
    pub kernel_exponent: f64,
    /// Floquet-Bloch round trip, quasi-periodicity and Parseval errors.
    pub fb: f64,
    /// Green's representation against the direct field.
    pub green: f64,
    pub fresnel: f64,
    pub hankel_relative: f64,
    pub wronskian: f64,
    pub generalized_fresnel: f64,
    /// Largest perturbation amplitude for the Jacobian positivity sweep.
    pub jacobian_amplitude: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            exponent: 0.1,
            ratio: 3.0,
            cell_exponent: 0.15,
            smooth_exponent_min: 4.0,
            kernel_exponent: 0.15,
            fb: 1e-12,
            green: 1e-6,
            fresnel: 1e-10,
            hankel_relative: 2e-2,
            wronskian: 1e-9,
            generalized_fresnel: 1e-8,
            jacobian_amplitude: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Campaign {
    pub name: String,
    pub kind: CampaignKind,
    #[serde(default)]
    pub config: Option<CampaignConfig>,
    /// Defaults per kind when absent.
    #[serde(default)]
    pub r_grid: Option<Vec<f64>>,
    /// Observation angles θ* in `(0, π)`; defaults to `jπ/16`, `j = 1..15`.
    #[serde(default)]
    pub theta_grid: Option<Vec<f64>>,
    /// Cell indices for the cell-norm campaign; defaults to 13 log-spaced integers in `[4, 256]`.
    #[serde(default)]
    pub j_grid: Option<Vec<i64>>,
    #[serde(default)]
    pub density: Option<DensityFile>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub seed: u64,
}

impl Campaign {
    /// The default campaign of a kind.
    pub fn new(kind: CampaignKind) -> Self {
        Campaign {
            name: kind.name().to_string(),
            kind,
            config: None,
            r_grid: None,
            theta_grid: None,
            j_grid: None,
            density: None,
            tolerances: Tolerances::default(),
            seed: 0,
        }
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let c: Campaign = serde_json::from_str(&text).map_err(|e| Error::Format {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        c.validate()?;
        Ok(c)
    }

    pub fn r_grid(&self) -> Vec<f64> {
        self.r_grid
            .clone()
            .unwrap_or_else(|| self.kind.default_r_grid())
    }

    pub fn theta_grid(&self) -> Vec<f64> {
        self.theta_grid.clone().unwrap_or_else(|| {
            (1..16)
                .map(|j| j as f64 * std::f64::consts::PI / 16.0)
                .collect()
        })
    }

    pub fn j_grid(&self) -> Vec<i64> {
        self.j_grid.clone().unwrap_or_else(|| {
            let mut j: Vec<i64> = log_grid(4.0, 256.0, 13)
                .into_iter()
                .map(|v| v.round() as i64)
                .collect();
            j.dedup();
            j
        })
    }

    /// Checks the grids: `r` strictly increasing over at least two decades for kinds that fit
    /// decays in `r`, angles inside `(0, π)`, cell indices positive and increasing.
    pub fn validate(&self) -> Result<()> {
        if self.kind.sweeps_r() {
            let r = self.r_grid();
            if r.len() < 3 || r.windows(2).any(|w| !(w[1] > w[0])) || !(r[0] > 0.0) {
                return Err(Error::Parameter(
                    "r_grid must hold at least 3 strictly increasing positive values".into(),
                ));
            }
            if r[r.len() - 1] / r[0] < 100.0 * (1.0 - 1e-12) {
                return Err(Error::Parameter(format!(
                    "r_grid [{}, {}] spans less than two decades",
                    r[0],
                    r[r.len() - 1]
                )));
            }
        }
        let theta = self.theta_grid();
        if theta.is_empty()
            || theta
                .iter()
                .any(|t| !(*t > 0.0 && *t < std::f64::consts::PI))
        {
            return Err(Error::Parameter(
                "theta_grid values must lie in (0, π)".into(),
            ));
        }
        let j = self.j_grid();
        if j.len() < 3 || j[0] < 1 || j.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Parameter(
                "j_grid must hold at least 3 increasing positive cell indices".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// The numerics did not deliver a trustworthy number (non-convergence, no usable samples).
    Indeterminate,
}

/// How `measured` is compared with `expected` and `tolerance`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Comparison {
    /// `|measured − expected| ≤ tolerance`
    Within,
    /// `measured ≤ expected + tolerance`
    AtMost,
    /// `measured ≥ expected − tolerance`
    AtLeast,
    /// `measured > expected`
    Above,
}

impl Comparison {
    pub fn holds(self, measured: f64, expected: f64, tolerance: f64) -> bool {
        match self {
            Comparison::Within => (measured - expected).abs() <= tolerance,
            Comparison::AtMost => measured <= expected + tolerance,
            Comparison::AtLeast => measured >= expected - tolerance,
            Comparison::Above => measured > expected,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Fitted {
    Decay(DecayFit),
    Scalar(Real),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    /// Unique within a report, `/`-separated from general to specific.
    pub id: String,
    /// The property being checked, in words.
    pub claim_anchor: String,
    pub fitted: Option<Fitted>,
    /// The number actually compared; for fits this is the exponent named in `note`.
    pub measured: Option<Real>,
    pub expected: f64,
    pub tolerance: f64,
    pub comparison: Comparison,
    pub verdict: Verdict,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub note: String,
}

/// One point of a sweep behind a check, for replotting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub check: String,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub seed: u64,
    /// Seconds since the Unix epoch; the only field that differs between identical runs.
    pub timestamp: u64,
    pub version: String,
    pub r_grid: Vec<f64>,
    pub theta_grid: Vec<f64>,
    /// Other grid sizes and sample counts, by name.
    pub grid: BTreeMap<String, u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub campaign: String,
    pub kind: CampaignKind,
    pub checks: Vec<Check>,
    pub samples: Vec<Sample>,
    pub environment: Environment,
}

impl Report {
    pub fn empty(campaign: &Campaign) -> Self {
        Report {
            campaign: campaign.name.clone(),
            kind: campaign.kind,
            checks: Vec::new(),
            samples: Vec::new(),
            environment: Environment {
                seed: campaign.seed,
                timestamp: now(),
                version: env!("CARGO_PKG_VERSION").to_string(),
                r_grid: if campaign.kind.sweeps_r() {
                    campaign.r_grid()
                } else {
                    Vec::new()
                },
                theta_grid: campaign.theta_grid(),
                grid: BTreeMap::new(),
            },
        }
    }

    /// Fail if any check fails, else indeterminate if any is, else pass.
    pub fn verdict(&self) -> Verdict {
        overall(self.checks.iter().map(|c| c.verdict))
    }

    pub fn count(&self, v: Verdict) -> usize {
        self.checks.iter().filter(|c| c.verdict == v).count()
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|e| Error::Format {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }
}

pub fn overall(verdicts: impl IntoIterator<Item = Verdict>) -> Verdict {
    let mut any_indeterminate = false;
    for v in verdicts {
        match v {
            Verdict::Fail => return Verdict::Fail,
            Verdict::Indeterminate => any_indeterminate = true,
            Verdict::Pass => {}
        }
    }
    if any_indeterminate {
        Verdict::Indeterminate
    } else {
        Verdict::Pass
    }
}

fn now() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map_or(0, |d| d.as_secs())
}

/// What a successful measurement produced.
pub(crate) struct Outcome {
    pub measured: f64,
    pub fitted: Option<Fitted>,
    pub note: String,
}

impl Outcome {
    pub fn scalar(measured: f64) -> Self {
        Outcome {
            measured,
            fitted: Some(Fitted::Scalar(Real(measured))),
            note: String::new(),
        }
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }
}

/// Specification of a check before its measurement is known.
pub(crate) struct Claim {
    pub id: String,
    pub anchor: String,
    pub comparison: Comparison,
    pub expected: f64,
    pub tolerance: f64,
}

impl Claim {
    pub fn new(id: impl Into<String>, anchor: impl Into<String>) -> Self {
        Claim {
            id: id.into(),
            anchor: anchor.into(),
            comparison: Comparison::Within,
            expected: 0.0,
            tolerance: 0.0,
        }
    }

    pub fn within(mut self, expected: f64, tolerance: f64) -> Self {
        (self.comparison, self.expected, self.tolerance) =
            (Comparison::Within, expected, tolerance);
        self
    }

    pub fn at_most(mut self, bound: f64) -> Self {
        (self.comparison, self.expected, self.tolerance) = (Comparison::AtMost, bound, 0.0);
        self
    }

    pub fn at_least(mut self, bound: f64) -> Self {
        (self.comparison, self.expected, self.tolerance) = (Comparison::AtLeast, bound, 0.0);
        self
    }

    pub fn above(mut self, bound: f64) -> Self {
        (self.comparison, self.expected, self.tolerance) = (Comparison::Above, bound, 0.0);
        self
    }

    /// Non-convergence and empty fits are indeterminate; any other error is a failure.
    pub fn judge(self, outcome: Result<Outcome>) -> Check {
        let (measured, fitted, note, verdict) = match outcome {
            Ok(o) => {
                let ok = o.measured.is_finite()
                    && self
                        .comparison
                        .holds(o.measured, self.expected, self.tolerance);
                let v = if ok { Verdict::Pass } else { Verdict::Fail };
                (Some(Real(o.measured)), o.fitted, o.note, v)
            }
            Err(e @ (Error::Convergence { .. } | Error::InsufficientData { .. })) => {
                (None, None, e.to_string(), Verdict::Indeterminate)
            }
            Err(e) => (None, None, e.to_string(), Verdict::Fail),
        };
        Check {
            id: self.id,
            claim_anchor: self.anchor,
            fitted,
            measured,
            expected: self.expected,
            tolerance: self.tolerance,
            comparison: self.comparison,
            pass: verdict == Verdict::Pass,
            verdict,
            note,
        }
    }
}

/// Runs every sweep of the campaign. Errors only for an invalid campaign; numerical trouble in
/// a sweep is recorded on the affected check.
pub fn run_campaign(c: &Campaign) -> Result<Report> {
    c.validate()?;
    let mut rep = Report::empty(c);
    match c.kind {
        CampaignKind::IntegralTable => campaigns::integral_table(c, &mut rep)?,
        CampaignKind::Radiation => campaigns::radiation(c, &mut rep)?,
        CampaignKind::PartA => campaigns::part_a(c, &mut rep)?,
        CampaignKind::Fb => campaigns::fb(c, &mut rep)?,
        CampaignKind::Kernels => campaigns::kernels(c, &mut rep)?,
        CampaignKind::Perturb => campaigns::perturb(c, &mut rep)?,
        CampaignKind::Specfun => campaigns::specfun(c, &mut rep)?,
    }
    Ok(rep)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Json,
    Csv,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    row: &'static str,
    id: &'a str,
    claim_anchor: &'a str,
    comparison: Option<Comparison>,
    expected: Option<f64>,
    tolerance: Option<f64>,
    measured: Option<String>,
    verdict: Option<Verdict>,
    x: Option<f64>,
    y: Option<f64>,
    note: &'a str,
}

/// Writes the report. JSON holds everything; CSV has one `check` row per check followed by one
/// `sample` row per sweep sample.
pub fn emit_report(rep: &Report, format: ReportFormat, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    write_report(rep, format, std::io::BufWriter::new(file), path)
}

/// [`emit_report`] to any writer; `label` names the destination in errors.
pub fn write_report<W: Write>(
    rep: &Report,
    format: ReportFormat,
    mut out: W,
    label: &Path,
) -> Result<()> {
    let io = |source: std::io::Error| Error::Io {
        path: label.to_path_buf(),
        source,
    };
    let format_err = |message: String| Error::Format {
        path: label.to_path_buf(),
        message,
    };
    match format {
        ReportFormat::Json => {
            serde_json::to_writer_pretty(&mut out, rep).map_err(|e| format_err(e.to_string()))?;
            out.write_all(b"\n").map_err(io)?;
            out.flush().map_err(io)
        }
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            let csv_err = |e: csv::Error| format_err(e.to_string());
            for c in &rep.checks {
                w.serialize(CsvRow {
                    row: "check",
                    id: &c.id,
                    claim_anchor: &c.claim_anchor,
                    comparison: Some(c.comparison),
                    expected: Some(c.expected),
                    tolerance: Some(c.tolerance),
                    measured: c.measured.map(|m| m.to_string()),
                    verdict: Some(c.verdict),
                    x: None,
                    y: None,
                    note: &c.note,
                })
                .map_err(csv_err)?;
            }
            for s in &rep.samples {
                w.serialize(CsvRow {
                    row: "sample",
                    id: &s.check,
                    claim_anchor: "",
                    comparison: None,
                    expected: None,
                    tolerance: None,
                    measured: None,
                    verdict: None,
                    x: Some(s.x),
                    y: Some(s.y),
                    note: "",
                })
                .map_err(csv_err)?;
            }
            w.flush().map_err(io)
        }
    }
}
