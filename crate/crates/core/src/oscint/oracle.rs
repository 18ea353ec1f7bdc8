//! Brute-force reference values: integrand evaluated as written, adaptive Simpson with a
//! Richardson correction, and a geometric mesh (ratio 1/2) toward square-root singularities.

use num_complex::Complex64;

use super::{validate, IntegralClass, IntegralSpec};
use crate::bump::Profile;
use crate::error::{Error, Result};

const MAX_DEPTH: u32 = 40;
// Levels of the graded mesh; the last cell [0, len·2^-GRADING] is dropped (≈ 1e-12 for 1/√x).
const GRADING: i32 = 80;

/// Reference value of the integral to roughly `tol`, independent of [`super::eval_integral`].
pub fn oracle_integral(spec: &IntegralSpec, phi: &dyn Profile, tol: f64) -> Result<Complex64> {
    validate(spec, phi)?;
    let tol = tol.max(1e-12);
    let s = *spec;
    // The integrand is written in the offset `t = x − base`. With `base = a` the singular
    // weights see `t` itself rather than a rounded `x − a`, so grading can go below ulp(a).
    // `side` fixes sgn(x − a) on a piece so the kink endpoint x = a takes the piece's sign.
    let integrand = move |side: f64, base: f64| {
        move |t: f64| -> Complex64 {
            let a = s.a;
            let x = base + t;
            let xa = if base == a { t } else { x - a };
            let w = match s.class {
                IntegralClass::A1 => Complex64::new(x.powf(-0.5), 0.0),
                IntegralClass::A2 => Complex64::new(x.powf(f64::from(s.m) - 0.5), 0.0),
                IntegralClass::A3 => Complex64::new(x.powi(s.m as i32), 0.0),
                IntegralClass::B1 => Complex64::new(x.sqrt(), 0.0),
                IntegralClass::B2 => Complex64::new((x + a).powi(2), 0.0),
                IntegralClass::C1 => Complex64::new(xa, 0.0).sqrt().inv(),
                IntegralClass::C2 => Complex64::new(xa, 0.0).sqrt(),
                IntegralClass::D1 => Complex64::new(xa.abs(), 0.0),
                IntegralClass::D2 => Complex64::new(side, 0.0),
            };
            let ph = if s.class.quadratic_phase() {
                s.r * x * x
            } else {
                s.r * x
            };
            w * phi.value(x) * Complex64::new(ph.cos(), ph.sin())
        }
    };
    let f = integrand(0.0, 0.0);

    let (lo, hi) = spec.interval();
    let mut total = Complex64::new(0.0, 0.0);
    match spec.class {
        IntegralClass::A1 | IntegralClass::A2 | IntegralClass::B1 => {
            total += graded(&f, 0.0, lo, hi, spec, tol)?;
        }
        IntegralClass::A3 | IntegralClass::B2 => {
            total += plain(&f, 0.0, lo, hi, spec, tol)?;
        }
        IntegralClass::C1 | IntegralClass::C2 => {
            let a = spec.a.clamp(lo, hi);
            let g = integrand(0.0, a);
            if a > lo {
                // graded integrates from a outward, i.e. ∫_a^{lo}
                total -= graded(&g, a, 0.0, lo - a, spec, tol * 0.5)?;
            }
            if a < hi {
                total += graded(&g, a, 0.0, hi - a, spec, tol * 0.5)?;
            }
        }
        IntegralClass::D1 | IntegralClass::D2 => {
            let a = spec.a.clamp(lo, hi);
            if a > lo {
                total += plain(&integrand(-1.0, 0.0), 0.0, lo, a, spec, tol * 0.5)?;
            }
            if a < hi {
                total += plain(&integrand(1.0, 0.0), 0.0, a, hi, spec, tol * 0.5)?;
            }
        }
    }
    Ok(total)
}

/// Integral from the singular point `s0` to `end` (either direction) on cells
/// `[s0 + d/2^{n+1}, s0 + d/2^n]`, `d = end − s0`. Points are offsets from `base`.
fn graded<F: Fn(f64) -> Complex64>(
    f: &F,
    base: f64,
    s0: f64,
    end: f64,
    spec: &IntegralSpec,
    tol: f64,
) -> Result<Complex64> {
    let d = end - s0;
    let mut sum = Complex64::new(0.0, 0.0);
    for n in 0..GRADING {
        let outer = s0 + d * 0.5f64.powi(n);
        let inner = s0 + d * 0.5f64.powi(n + 1);
        // ∫_{s0}^{end} = Σ ∫_{inner}^{outer}
        sum += plain(f, base, inner, outer, spec, tol / f64::from(GRADING))?;
    }
    Ok(sum)
}

/// Uniform pre-split into cells with phase change below one radian, then adaptive Simpson.
/// `a` and `b` are offsets from `base`.
fn plain<F: Fn(f64) -> Complex64>(
    f: &F,
    base: f64,
    a: f64,
    b: f64,
    spec: &IntegralSpec,
    tol: f64,
) -> Result<Complex64> {
    let len = (b - a).abs();
    if len == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let rate = if spec.class.quadratic_phase() {
        2.0 * spec.r * (base + a).abs().max((base + b).abs())
    } else {
        spec.r
    };
    let cells = ((rate * len).ceil() as usize).max(4);
    let h = (b - a) / cells as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    for i in 0..cells {
        let x0 = a + h * i as f64;
        let x1 = if i + 1 == cells { b } else { x0 + h };
        let xm = 0.5 * (x0 + x1);
        let (f0, fm, f1) = (f(x0), f(xm), f(x1));
        let whole = (x1 - x0) / 6.0 * (f0 + 4.0 * fm + f1);
        sum += simpson(f, x0, x1, f0, fm, f1, whole, tol / cells as f64, MAX_DEPTH)?;
    }
    Ok(sum)
}

#[allow(clippy::too_many_arguments)]
fn simpson<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    fa: Complex64,
    fm: Complex64,
    fb: Complex64,
    whole: Complex64,
    tol: f64,
    depth: u32,
) -> Result<Complex64> {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let diff = left + right - whole;
    if diff.norm() <= 15.0 * tol {
        return Ok(left + right + diff / 15.0);
    }
    if depth == 0 {
        return Err(Error::convergence(left + right, diff.norm()));
    }
    let l = simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?;
    let r = simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?;
    Ok(l + r)
}
