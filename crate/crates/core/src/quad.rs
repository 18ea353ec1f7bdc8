//! Composite Gauss–Kronrod (7/15) quadrature on panels sized by the local oscillation.
//!
//! The integrand is written as `f(s) ≈ amplitude(s)·e^{E(s)}`; panels are grown or shrunk
//! until `|E(s+h) − E(s)| ≤ π/4`, i.e. at most an eighth of a period per panel. Callers split
//! the interval at stationary points so that `E` is monotone on every piece.

use num_complex::Complex64;
use std::f64::consts::FRAC_PI_4;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One Gauss–Kronrod 15-point panel: `(Kronrod value, |Kronrod − Gauss|)`.
#[inline]
pub(crate) fn gk15<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    conditioning: f64,
) -> QuadResult {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    let mut abs = fc.norm() * WGK[7];
    for i in 0..7 {
        let dx = h * XGK[i];
        let (fl, fr) = (f(c - dx), f(c + dx));
        let s = fl + fr;
        k += s * WGK[i];
        abs += (fl.norm() + fr.norm()) * WGK[i];
        if i % 2 == 1 {
            g += s * WG[i / 2];
        }
    }
    QuadResult {
        value: k * h,
        error: ((k - g) * h).norm(),
        panels: 1,
        roundoff: 50.0 * f64::EPSILON * conditioning * abs * h.abs(),
    }
}

/// The 15 Kronrod nodes and weights mapped to `[a, b]`.
pub(crate) fn gk15_nodes(a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    (0..15).map(move |i| {
        if i == 7 {
            (c, WGK[7] * h)
        } else if i < 7 {
            (c - h * XGK[i], WGK[i] * h)
        } else {
            (c + h * XGK[14 - i], WGK[14 - i] * h)
        }
    })
}

/// Panel boundaries on `[a, b]` with `|E(end) − E(start)| ≤ π/4` and length `≤ max_step`.
pub(crate) fn panels(
    exponent: &dyn Fn(f64) -> Complex64,
    a: f64,
    b: f64,
    max_step: f64,
) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let len = b - a;
    if !(len > 0.0) {
        return out;
    }
    let mut s = a;
    let mut e_s = exponent(s);
    let mut h = max_step.min(len);
    while s < b {
        h = (2.0 * h).min(max_step).min(b - s);
        let mut e_next = exponent(s + h);
        while (e_next - e_s).norm() > FRAC_PI_4 && h > 1e-15 * len {
            h *= 0.5;
            e_next = exponent(s + h);
        }
        let end = if b - (s + h) < 1e-14 * len { b } else { s + h };
        out.push((s, end));
        s = end;
        e_s = exponent(s);
    }
    out
}

/// Tolerance and cost limits for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub(crate) struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Upper bound on a panel length regardless of oscillation (resolves the amplitude).
    pub max_step: f64,
    /// Maximum number of panels across both passes.
    pub budget: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            abs_tol: 1e-10,
            rel_tol: 1e-8,
            max_step: 0.05,
            budget: 40_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct QuadResult {
    pub value: Complex64,
    pub error: f64,
    pub panels: usize,
    /// Rounding level `50ε(1 + |E|)∫|f|`, where `E` is the exponent: a phase of size `|E|` is
    /// only known to `ε|E|`. Error estimates below it carry no information.
    pub roundoff: f64,
}

impl std::ops::AddAssign for QuadResult {
    fn add_assign(&mut self, o: Self) {
        self.value += o.value;
        self.error += o.error;
        self.panels += o.panels;
        self.roundoff += o.roundoff;
    }
}

/// One piece of a split integral: integrand, exponent and interval.
pub(crate) struct Piece<'a> {
    pub f: Box<dyn Fn(f64) -> Complex64 + Sync + 'a>,
    pub exponent: Box<dyn Fn(f64) -> Complex64 + Sync + 'a>,
    pub a: f64,
    pub b: f64,
}

impl<'a> Piece<'a> {
    pub fn new(
        f: impl Fn(f64) -> Complex64 + Sync + 'a,
        exponent: impl Fn(f64) -> Complex64 + Sync + 'a,
        a: f64,
        b: f64,
    ) -> Self {
        Piece {
            f: Box::new(f),
            exponent: Box::new(exponent),
            a,
            b,
        }
    }
}

fn walk(
    p: &Piece<'_>,
    opts: &QuadOptions,
    local_tol: Option<f64>,
    budget: &mut usize,
) -> QuadResult {
    let mut out = QuadResult::default();
    let (a, b) = (p.a.min(p.b), p.a.max(p.b));
    let sign = if p.b < p.a { -1.0 } else { 1.0 };
    let len = b - a;
    if len == 0.0 {
        return out;
    }
    let mut s = a;
    let mut e_s = (p.exponent)(s);
    let mut h = opts.max_step.min(len);
    while s < b {
        if *budget == 0 {
            out.error = f64::INFINITY;
            break;
        }
        h = (2.0 * h).min(opts.max_step).min(b - s);
        let mut e_next = (p.exponent)(s + h);
        while (e_next - e_s).norm() > FRAC_PI_4 && h > 1e-15 * len {
            h *= 0.5;
            e_next = (p.exponent)(s + h);
        }
        let end = if b - (s + h) < 1e-14 * len { b } else { s + h };
        let cond = 1.0 + e_s.norm().max(e_next.norm());
        let part = match local_tol {
            None => gk15(&p.f, s, end, cond),
            Some(t) => refine(&p.f, s, end, t * (end - s) / len, cond, 0),
        };
        *budget = budget.saturating_sub(part.panels);
        out += part;
        s = end;
        e_s = (p.exponent)(s);
    }
    out.value *= sign;
    out
}

fn refine<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    cond: f64,
    depth: u32,
) -> QuadResult {
    let q = gk15(f, a, b, cond);
    if q.error <= tol.max(q.roundoff) || depth >= 16 {
        return q;
    }
    let m = 0.5 * (a + b);
    let mut l = refine(f, a, m, 0.5 * tol, cond, depth + 1);
    l += refine(f, m, b, 0.5 * tol, cond, depth + 1);
    l
}

/// Integrates a sum of pieces to `max(abs_tol, rel_tol·|I|)`.
///
/// A first pass uses one panel per oscillation step; if the summed error estimate misses the
/// target, a second pass bisects panels until each meets its share of the tolerance.
pub(crate) fn integrate(pieces: &[Piece<'_>], opts: &QuadOptions) -> Result<QuadResult> {
    let mut budget = opts.budget;
    let mut total = QuadResult::default();
    for p in pieces {
        total += walk(p, opts, None, &mut budget);
    }
    let target = |r: &QuadResult| {
        opts.abs_tol
            .max(opts.rel_tol * r.value.norm())
            .max(r.roundoff)
    };
    if total.error <= target(&total) {
        return Ok(total);
    }
    if budget > 0 {
        let goal = target(&total);
        let span: f64 = pieces
            .iter()
            .map(|p| (p.b - p.a).abs())
            .sum::<f64>()
            .max(1e-300);
        let mut second = QuadResult::default();
        for p in pieces {
            let share = goal * (p.b - p.a).abs() / span;
            second += walk(p, opts, Some(share), &mut budget);
        }
        second.panels += total.panels;
        if second.error <= target(&second) {
            return Ok(second);
        }
        total = second;
    }
    Err(Error::convergence(total.value, total.error))
}
