use std::f64::consts::PI;

use num_complex::Complex64;
use periodic_radiation::potential::*;
use periodic_radiation::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Forty terms of the ascending series for `J₀` and `Y₀`.
fn j0_y0_series(x: f64) -> (f64, f64) {
    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
    let q = x * x / 4.0;
    let (mut term, mut harmonic, mut j0, mut tail) = (1.0, 0.0, 1.0, 0.0);
    for k in 1..40 {
        let kf = k as f64;
        term *= -q / (kf * kf);
        harmonic += 1.0 / kf;
        j0 += term;
        tail -= term * harmonic;
    }
    (j0, 2.0 / PI * (((x / 2.0).ln() + EULER_GAMMA) * j0 + tail))
}

fn kp(x: [f64; 2], y1: f64, k: f64, h: f64) -> KernelPoint {
    KernelPoint::new(x, y1, k, h).unwrap()
}

#[test]
fn fundamental_at_unit_argument() {
    let k = 2.5;
    let phi = fundamental([0.1, 0.2], [0.1 + 0.6 / k, 0.2 + 0.8 / k], k).unwrap();
    let (j0, y0) = j0_y0_series(1.0);
    let expect = Complex64::new(0.0, 0.25) * Complex64::new(j0, y0);
    assert!((phi - expect).norm() <= 1e-10);
}

#[test]
fn fundamental_is_symmetric_and_singular_on_diagonal() {
    let (x, y) = ([1.0, -2.0], [-0.5, 3.3]);
    assert_eq!(
        fundamental(x, y, 1.7).unwrap(),
        fundamental(y, x, 1.7).unwrap()
    );
    assert!(matches!(fundamental(x, x, 1.0), Err(Error::Domain(_))));
    assert!(matches!(fundamental(x, y, 0.0), Err(Error::Parameter(_))));
}

#[test]
fn fundamental_solves_helmholtz_at_second_order() {
    let (k, y) = (1.0, [0.0, 0.0]);
    let x = [3.0 * 0.6, 3.0 * 0.8];
    let f = |a: f64, b: f64| fundamental([a, b], y, k).unwrap();
    let res = |h: f64| {
        let lap = (f(x[0] + h, x[1]) + f(x[0] - h, x[1]) + f(x[0], x[1] + h) + f(x[0], x[1] - h)
            - 4.0 * f(x[0], x[1]))
            / (h * h);
        (lap + k * k * f(x[0], x[1])).norm()
    };
    let ratio = res(0.1) / res(0.05);
    assert!((ratio - 4.0).abs() <= 0.8, "ratio {ratio}");
}

#[test]
fn half_space_green_function() {
    let k = 1.3;
    let y = [0.4, 1.1];
    for &x1 in &[-3.0, 0.0, 2.5] {
        assert_eq!(
            green_half_space([x1, 0.0], y, k).unwrap(),
            Complex64::new(0.0, 0.0)
        );
    }
    assert_eq!(
        green_half_space([1.0, 2.0], [0.3, 0.0], k).unwrap(),
        Complex64::new(0.0, 0.0)
    );
    let x = [2.0, 0.7];
    let direct = 0.25
        * Complex64::i()
        * periodic_radiation::specfun::hankel1(0, k * 1.6f64.hypot(0.4))
            .unwrap()
            .value()
        - 0.25
            * Complex64::i()
            * periodic_radiation::specfun::hankel1(0, k * 1.6f64.hypot(1.8))
                .unwrap()
                .value();
    assert!((green_half_space(x, y, k).unwrap() - direct).norm() <= 1e-15);
}

#[test]
fn kernel_s_is_the_y2_derivative() {
    let (k, h) = (1.0, 2.0);
    for &(x, y1) in &[([0.5, 3.0], 0.1), ([4.0, 2.5], -1.0), ([-20.0, 12.0], 3.0)] {
        let e = 1e-6;
        let fd = (fundamental(x, [y1, h + e], k).unwrap()
            - fundamental(x, [y1, h - e], k).unwrap())
            / (2.0 * e);
        let s = kernel_s(&kp(x, y1, k, h));
        assert!((fd - s).norm() <= 1e-6 * s.norm(), "{fd} vs {s}");
    }
}

#[test]
fn kernel_k_plus_iks_is_the_radial_derivative_of_s() {
    let (k, h) = (1.3, 0.5);
    for &(x, y1) in &[([3.0, 4.0], 0.5), ([-10.0, 6.0], 2.0), ([40.0, 30.5], -7.0)] {
        let p = kp(x, y1, k, h);
        let r = p.r();
        let dir = [p.x_tilde()[0] / r, p.x_tilde()[1] / r];
        let t = 1e-4 * r;
        let s_at = |tt: f64| kernel_s(&kp([x[0] + tt * dir[0], x[1] + tt * dir[1]], y1, k, h));
        let fd = (s_at(t) - s_at(-t)) / (2.0 * t);
        let route = kernel_k(&p) + Complex64::new(0.0, k) * kernel_s(&p);
        assert!(
            (fd - route).norm() <= 1e-5 * route.norm(),
            "{fd} vs {route}"
        );
    }
}

#[test]
fn kernel_point_on_the_line_is_rejected() {
    assert!(matches!(
        KernelPoint::new([1.0, 2.0], 0.0, 1.0, 2.0),
        Err(Error::Domain(_))
    ));
    assert!(matches!(
        KernelPoint::new([1.0, 1.0], 0.0, 1.0, 2.0),
        Err(Error::Domain(_))
    ));
}

#[test]
fn gap_cases() {
    let p = kp([5.0, 9.0], 0.0, 1.0, 1.0);
    assert_eq!(geometry_gap(&p), 0.0);
    let r = 1e4;
    for &theta in &[0.01, 0.5, PI / 2.0, 2.9] {
        for &y1 in &[-90.0, 90.0] {
            let p = kp(
                [r * f64::cos(theta), 1.0 + r * f64::sin(theta)],
                y1,
                1.0,
                1.0,
            );
            let g = geometry_gap(&p);
            assert!((0.0..4.0 / r).contains(&g), "θ = {theta}, y₁ = {y1}: {g}");
        }
    }
}

#[test]
fn gap_matches_inner_product_form() {
    let p = kp([3.0, 5.0], 1.2, 1.0, 1.0);
    let xt = p.x_tilde();
    let xy = [p.x[0] - p.y1, p.x[1] - p.height];
    let cos = (xt[0] * xy[0] + xt[1] * xy[1]) / (p.r() * p.rho());
    assert!((geometry_gap(&p) - (1.0 - cos)).abs() <= 1e-15);
}

#[test]
fn gap_audit_random_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let (h, standoff) = (0.0, 1.0);
    for _ in 0..1000 {
        let r = 10f64.powf(rng.random_range(2.0..6.0));
        let lo = (standoff / r).asin();
        let theta = rng.random_range(lo..PI - lo);
        let y1 = rng.random_range(-1.0..1.0) * r.sqrt() * 0.999;
        let p = kp([r * theta.cos(), h + r * theta.sin()], y1, 1.0, h);
        let g = geometry_gap(&p);
        assert!(
            g >= 0.0 && g < 4.0 / r,
            "r = {r}, θ = {theta}, y₁ = {y1}: {g}"
        );
    }
}

#[test]
fn zero_density_gives_zero() {
    let v = uprc_eval(&ZeroDensity, [1.0, 3.0], 1.0, 0.0, 100.0).unwrap();
    assert_eq!(v.value(), Complex64::new(0.0, 0.0));
    assert_eq!(v.tail_bound, 0.0);
}

#[test]
fn truncation_rule() {
    let u = Uprc::new(1.0, 0.0, 50.0).unwrap();
    let g = GaussianPlaneWave::new(1.0, 0.0, 0.0, 2.0).unwrap();
    // r = 100 needs L ≥ 100.
    assert!(matches!(u.eval(&g, [0.0, 100.0]), Err(Error::Parameter(_))));
    assert!(u.eval(&g, [0.0, 20.0]).is_ok());
    assert!(matches!(u.eval(&g, [0.0, -1.0]), Err(Error::Domain(_))));
}

#[test]
fn greens_representation_reproduces_a_point_source() {
    let (k, h) = (1.0, 2.0);
    let z = [0.3, h - 0.5];
    let trace = PointSourceTrace::new(z, k, h).unwrap();
    let u = Uprc::new(k, h, 1e3).unwrap();
    for &x in &[[-5.0, h + 0.6], [0.0, h + 3.0], [4.0, h + 1.5]] {
        let v = u.eval(&trace, x).unwrap();
        let exact = fundamental(x, z, k).unwrap();
        assert!(
            (v.value() - exact).norm() <= 1e-6,
            "{x:?}: {} vs {exact}",
            v.value()
        );
    }
    assert!(PointSourceTrace::new([0.0, h + 0.1], k, h).is_err());
}

#[test]
fn tail_bound_covers_the_truncated_part() {
    let g = GaussianPlaneWave::new(1.0, 0.4, 5.0, 8.0).unwrap();
    let x = [3.0, 4.0];
    let short = Uprc::new(1.0, 0.0, 30.0).unwrap().eval(&g, x).unwrap();
    let long = Uprc::new(1.0, 0.0, 200.0).unwrap().eval(&g, x).unwrap();
    let diff = (short.value() - long.value()).norm();
    assert!(
        diff <= short.tail_bound + long.tail_bound + 1e-10,
        "{diff} vs {}",
        short.tail_bound
    );
    assert!(long.tail_bound < short.tail_bound);
    let u = Uprc::new(1.0, 0.0, 30.0).unwrap();
    assert!(matches!(
        u.eval_within(&g, x, short.tail_bound * 0.5),
        Err(Error::Convergence { .. })
    ));
    assert!(u.eval_within(&g, x, short.tail_bound * 2.0).is_ok());
}

#[test]
fn radial_derivative_and_residual_are_consistent() {
    let g = GaussianPlaneWave::new(1.0, 0.3, 0.0, 3.0).unwrap();
    let (k, h) = (1.0, 0.0);
    let u = Uprc::new(k, h, 400.0).unwrap();
    let (r, theta) = (40.0, 1.0);
    let at = |rr: f64| {
        u.eval(&g, [rr * f64::cos(theta), h + rr * f64::sin(theta)])
            .unwrap()
            .value()
    };
    let x = [r * f64::cos(theta), h + r * f64::sin(theta)];
    let t = 1e-4 * r;
    let fd = (at(r + t) - at(r - t)) / (2.0 * t);
    let d = u.radial_derivative(&g, x).unwrap().value();
    assert!((fd - d).norm() <= 1e-5 * d.norm(), "{fd} vs {d}");
    let res = u.radial_residual(&g, x).unwrap().value();
    let combined = d - Complex64::new(0.0, k) * at(r);
    assert!((res - combined).norm() <= 1e-8 * d.norm());
}

#[test]
fn sampled_density_from_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("trace.csv");
    let mut text = String::from("y1,re,im\n");
    let f = |y: f64| Complex64::new((-y * y / 50.0).exp(), 0.5 * (-y * y / 50.0).exp() * y.sin());
    for i in -200..=200 {
        let y = f64::from(i) * 0.1;
        let v = f(y);
        text.push_str(&format!("{y},{},{}\n", v.re, v.im));
    }
    std::fs::write(&path, text).unwrap();
    let decay = Decay {
        exponent: 2.0,
        constant: 10.0,
    };
    let d = SampledDensity::from_csv(&path, decay).unwrap();
    assert_eq!(d.range(), (-20.0, 20.0));
    assert_eq!(d.decay(), decay);
    for &y in &[-12.3, 0.05, 7.77] {
        assert!((d.value(y) - f(y)).norm() <= 1e-4, "y = {y}");
    }
    assert_eq!(d.value(25.0), Complex64::new(0.0, 0.0));
    std::fs::write(&path, "y1,re,im\n0,1,0\n1,1,0\n").unwrap();
    assert!(matches!(
        SampledDensity::from_csv(&path, decay),
        Err(Error::Parameter(_))
    ));
    std::fs::write(&path, "y1,re\n0,1\n").unwrap();
    assert!(SampledDensity::from_csv(&path, decay).is_err());
}

#[test]
fn gaussian_declares_algebraic_decay() {
    let g = GaussianPlaneWave::new(2.0, 0.0, -3.0, 1.5).unwrap();
    let dec = g.decay();
    assert_eq!(dec.exponent, 4.0);
    for i in -300..300 {
        let y = f64::from(i) * 0.07;
        assert!(g.value(y).norm() <= dec.constant * (1.0 + y.abs()).powf(-4.0) * (1.0 + 1e-12));
    }
    assert!(GaussianPlaneWave::new(1.0, 0.0, 0.0, 0.0).is_err());
}
