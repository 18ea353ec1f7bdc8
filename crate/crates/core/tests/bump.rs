use periodic_radiation::bump::{Density, DensityKind, Profile, Side, Superposition, MAX_ORDER};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn central(d: &Density, x: f64, order: usize, h: f64) -> f64 {
    (d.eval(x + h, order) - d.eval(x - h, order)) / (2.0 * h)
}

fn densities() -> Vec<Density> {
    vec![
        Density::two_sided(0.0, 1.0),
        Density::two_sided(0.4, 0.7),
        Density::modulated(0.2, 0.9, 3),
        Density::one_sided(0.0, 1.0, Side::Right),
        Density::one_sided(0.5, 0.8, Side::Left),
    ]
}

#[test]
fn peak_is_one() {
    assert_eq!(Density::two_sided(0.0, 1.0).eval(0.0, 0), 1.0);
    assert_eq!(Density::two_sided(-3.0, 0.2).eval(-3.0, 0), 1.0);
}

#[test]
fn exactly_zero_outside_support() {
    for d in densities() {
        let (a, b) = d.support();
        for order in 0..=MAX_ORDER {
            for dx in [0.0, 1e-12, 0.1, 5.0] {
                if a.is_finite() {
                    assert_eq!(
                        d.eval(a - dx, order).to_bits(),
                        0f64.to_bits(),
                        "{d:?} left"
                    );
                }
                if b.is_finite() {
                    assert_eq!(
                        d.eval(b + dx, order).to_bits(),
                        0f64.to_bits(),
                        "{d:?} right"
                    );
                }
            }
        }
    }
    let z = Density::zero();
    assert!((-5..=5).all(|i| z.eval(f64::from(i) * 0.3, 2) == 0.0));
}

#[test]
fn first_derivative_at_point_three() {
    let d = Density::two_sided(0.0, 1.0);
    let h = 1e-5;
    let fd = (d.eval(0.3 + h, 0) - d.eval(0.3 - h, 0)) / (2.0 * h);
    assert!((d.eval(0.3, 1) - fd).abs() <= 1e-7);
}

#[test]
fn first_derivative_closed_form() {
    // b'(x) = −2x/(1−x²)² · b(x) for the unit bump.
    let d = Density::two_sided(0.0, 1.0);
    for &x in &[-0.9, -0.4, 0.1, 0.55, 0.8] {
        let q = 1.0 - x * x;
        let exact = -2.0 * x / (q * q) * d.eval(x, 0);
        assert!((d.eval(x, 1) - exact).abs() <= 1e-13 * (1.0 + exact.abs()));
    }
}

#[test]
fn derivatives_agree_with_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for d in densities() {
        let (lo, hi) = match d.kind {
            DensityKind::OneSidedBump if d.side == Side::Right => {
                (d.center, d.center + d.halfwidth)
            }
            DensityKind::OneSidedBump => (d.center - d.halfwidth, d.center),
            _ => (d.center - d.halfwidth, d.center + d.halfwidth),
        };
        // Stay away from the endpoints, where the derivatives are tiny and steep.
        let margin = 0.1 * (hi - lo);
        for _ in 0..100 {
            let x = rng.random_range(lo + margin..hi - margin);
            for n in 1..=MAX_ORDER {
                let exact = d.eval(x, n);
                let fd = central(&d, x, n - 1, 1e-5);
                let rel = (exact - fd).abs() / (1.0 + exact.abs());
                assert!(rel <= 1e-6, "{d:?} order {n} at {x}: {exact} vs {fd}");
            }
        }
    }
}

#[test]
fn one_sided_plateau_and_flat_end() {
    let d = Density::one_sided(0.0, 1.0, Side::Right);
    assert_eq!(d.eval(-10.0, 0), 1.0);
    assert_eq!(d.eval(-0.5, 0), 1.0);
    for order in 1..=MAX_ORDER {
        assert_eq!(d.eval(-0.5, order), 0.0);
        assert!(d.eval(0.999, order).abs() < 1e-100);
    }
    assert_eq!(d.support(), (f64::NEG_INFINITY, 1.0));
    let l = Density::one_sided(0.0, 1.0, Side::Left);
    assert!((l.eval(-0.3, 0) - d.eval(0.3, 0)).abs() < 1e-15);
    assert!((l.eval(-0.3, 1) + d.eval(0.3, 1)).abs() < 1e-13);
}

#[test]
#[should_panic]
fn one_sided_needs_a_side() {
    let _ = Density::one_sided(0.0, 1.0, Side::Both);
}

#[test]
#[should_panic]
fn order_above_four_panics() {
    let _ = Density::two_sided(0.0, 1.0).eval(0.0, MAX_ORDER + 1);
}

#[test]
fn modulation_multiplies_by_power() {
    let base = Density::two_sided(0.5, 1.0);
    let m = Density::modulated(0.5, 1.0, 2);
    for &x in &[-0.2, 0.3, 0.5, 1.1] {
        let t = x - 0.5;
        assert!((m.eval(x, 0) - t * t * base.eval(x, 0)).abs() < 1e-15);
        let d1 = 2.0 * t * base.eval(x, 0) + t * t * base.eval(x, 1);
        assert!((m.eval(x, 1) - d1).abs() < 1e-13);
    }
}

#[test]
fn superposition_is_linear() {
    let a = Density::two_sided(0.0, 1.0);
    let b = Density::modulated(0.5, 0.5, 1);
    let s = Superposition::new(vec![(2.0, a), (-0.5, b)]);
    for &x in &[-0.7, 0.2, 0.6, 0.95] {
        for order in 0..=2 {
            let expect = 2.0 * a.eval(x, order) - 0.5 * b.eval(x, order);
            assert!((Profile::eval(&s, x, order) - expect).abs() < 1e-14);
        }
    }
    assert_eq!(s.support(), (-1.0, 1.0));
}

#[test]
fn json_round_trip_uses_declared_field_names() {
    let d = Density::modulated(0.25, 0.5, 2);
    let text = serde_json::to_string(&d).unwrap();
    for key in [
        "\"kind\":\"power-law-modulated\"",
        "\"center\"",
        "\"halfwidth\"",
        "\"side\":\"both\"",
        "\"modulation_power\":2",
    ] {
        assert!(text.contains(key), "{text}");
    }
    let back: Density = serde_json::from_str(&text).unwrap();
    assert_eq!(back, d);
    let parsed: Density = serde_json::from_str(
        r#"{"kind":"one-sided-bump","center":1,"halfwidth":0.5,"side":"left"}"#,
    )
    .unwrap();
    assert_eq!(parsed, Density::one_sided(1.0, 0.5, Side::Left));
}

proptest! {
    #[test]
    fn bump_is_bounded_and_even(u in -1.5f64..1.5) {
        let d = Density::two_sided(0.0, 1.0);
        let v = d.eval(u, 0);
        prop_assert!((0.0..=1.0).contains(&v));
        prop_assert_eq!(v, d.eval(-u, 0));
    }

    #[test]
    fn smooth_step_is_monotone(x in -0.5f64..1.5, dx in 0.0f64..0.5) {
        let d = Density::one_sided(0.0, 1.0, Side::Right);
        prop_assert!(d.eval(x + dx, 0) <= d.eval(x, 0));
    }
}
