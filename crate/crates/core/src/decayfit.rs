//! Power-law fits `|F(r)| ≈ C r^{-p}` on log–log axes.
//!
//! Two numbers come out of every fit. The least-squares exponent uses every sample above
//! [`NOISE_FLOOR`]; the envelope exponent uses only the largest sample in each decade
//! (decades counted from the smallest `r`). Oscillating magnitudes such as
//! `|c₁ + c₂e^{iψ(r)}| r^{-p}` bias the former but not the latter, and the decay bounds being
//! tested are bounds on the supremum, so [`DecayFit::headline`] prefers the envelope.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Magnitudes below this are treated as quadrature noise and dropped.
pub const NOISE_FLOOR: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub exponent: f64,
    pub log_constant: f64,
    pub max_residual: f64,
    pub n_samples: usize,
    pub dropped: usize,
    pub envelope: Option<EnvelopeFit>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeFit {
    pub exponent: f64,
    pub log_constant: f64,
    pub points: usize,
}

impl DecayFit {
    /// Envelope exponent when at least two decades are populated, otherwise the plain fit.
    pub fn headline(&self) -> f64 {
        self.envelope.map_or(self.exponent, |e| e.exponent)
    }
}

/// Fits `log|F| = log C − p log r` to `(r, |F|)` samples.
pub fn fit_decay(samples: &[(f64, f64)]) -> Result<DecayFit> {
    let usable: Vec<(f64, f64)> = samples
        .iter()
        .filter(|(r, m)| *r > 0.0 && m.is_finite() && *m >= NOISE_FLOOR)
        .map(|&(r, m)| (r.ln(), m.ln()))
        .collect();
    if usable.len() < 3 {
        return Err(Error::InsufficientData {
            usable: usable.len(),
        });
    }
    let (slope, intercept) = least_squares(&usable);
    let max_residual = usable
        .iter()
        .map(|(x, y)| (y - (intercept + slope * x)).abs())
        .fold(0.0, f64::max);

    let x_min = usable.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let mut bins: Vec<(i64, f64, f64)> = Vec::new();
    for &(x, y) in &usable {
        let bin = ((x - x_min) / std::f64::consts::LN_10 + 1e-9).floor() as i64;
        match bins.iter_mut().find(|b| b.0 == bin) {
            Some(b) if y > b.2 => {
                b.1 = x;
                b.2 = y;
            }
            Some(_) => {}
            None => bins.push((bin, x, y)),
        }
    }
    let envelope = if bins.len() >= 2 {
        let pts: Vec<(f64, f64)> = bins.iter().map(|b| (b.1, b.2)).collect();
        let (s, c) = least_squares(&pts);
        Some(EnvelopeFit {
            exponent: -s,
            log_constant: c,
            points: pts.len(),
        })
    } else {
        None
    };

    Ok(DecayFit {
        exponent: -slope,
        log_constant: intercept,
        max_residual,
        n_samples: samples.len(),
        dropped: samples.len() - usable.len(),
        envelope,
    })
}

fn least_squares(pts: &[(f64, f64)]) -> (f64, f64) {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    (slope, my - slope * mx)
}

/// `n` points from `lo` to `hi`, equally spaced in `log r`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2 && lo > 0.0 && hi > lo);
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| {
            if i == 0 {
                lo
            } else if i == n - 1 {
                hi
            } else {
                (a + (b - a) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}
