//! Reference values computed by routes independent of the functions they check.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::quad::gk15;

/// Composite 15-point Gauss–Kronrod rule on `n` equal panels of `[a, b]`.
fn composite<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, n: usize) -> Complex64 {
    let h = (b - a) / n as f64;
    (0..n)
        .map(|i| gk15(&f, a + i as f64 * h, a + (i + 1) as f64 * h, 1.0).value)
        .sum()
}

/// `C(t) + iS(t) = ∫₀ᵗ e^{iz²} dz` by quadrature on panels short enough that the phase turns
/// by at most `0.05·2|t|` radians per panel.
pub fn fresnel_quadrature(t: f64) -> Complex64 {
    if t == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let n = ((t.abs() / 0.05).ceil() as usize).max(1);
    composite(|z| Complex64::new(0.0, z * z).exp(), 0.0, t, n)
}

/// `∫₀^∞ x^power e^{ixⁿ} dx` by rotating the contour to `x = s·e^{iπ/(2n)}`, where the integrand
/// becomes `s^power e^{−sⁿ}`, and integrating that by quadrature after `s = u²`.
pub fn generalized_fresnel_contour(power: f64, n: u32) -> Complex64 {
    let nf = f64::from(n);
    let u_max = 50f64.powf(1.0 / (2.0 * nf));
    let panels = ((u_max / 0.01).ceil() as usize).max(100);
    let radial = composite(
        |u| {
            let s = u * u;
            Complex64::new(2.0 * u * s.powf(power) * (-s.powf(nf)).exp(), 0.0)
        },
        0.0,
        u_max,
        panels,
    );
    radial * Complex64::from_polar(1.0, PI * (power + 1.0) / (2.0 * nf))
}

/// Leading large-argument term `√(2/(πt)) e^{i(t − nπ/2 − π/4)}`.
pub fn hankel_leading_term(order: u8, t: f64) -> Complex64 {
    Complex64::from_polar(
        (2.0 / (PI * t)).sqrt(),
        t - f64::from(order) * PI / 2.0 - PI / 4.0,
    )
}
