use std::f64::consts::TAU;

use num_complex::Complex64;
use periodic_radiation::fbt::{
    fb_inverse, fb_transform, min_alpha_points, BlochArray, CellArray, LambdaKind,
};
use periodic_radiation::Error;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const KINDS: [LambdaKind; 2] = [LambdaKind::Centered, LambdaKind::Shifted];

fn random_cells(rng: &mut ChaCha8Rng, count: usize, grid: usize) -> CellArray {
    let mut data = CellArray::new(grid).unwrap();
    while data.nonzero_cells() < count {
        let j = rng.random_range(-8..=8);
        let samples = (0..grid)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        data.insert(j, samples).unwrap();
    }
    data
}

/// Drops cells whose samples are all below `tol`, the trapezoid rule's rounding residue.
fn prune(data: &CellArray, tol: f64) -> CellArray {
    let mut out = CellArray::new(data.grid_size()).unwrap();
    for (j, v) in data.cells() {
        if v.iter().any(|z| z.norm() > tol) {
            out.insert(j, v.to_vec()).unwrap();
        }
    }
    out
}

fn bloch_diff(a: &BlochArray, b: &BlochArray) -> f64 {
    a.values
        .iter()
        .flatten()
        .zip(b.values.iter().flatten())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

#[test]
fn single_cell_is_constant_in_alpha() {
    let data = CellArray::from_fn(16, [0], |x| Complex64::new(x.cos(), x.sin() * 0.5)).unwrap();
    let b = fb_transform(&data, 7, LambdaKind::Centered).unwrap();
    let cell0 = data.get(0).unwrap();
    for row in &b.values {
        assert_eq!(row.as_slice(), cell0);
    }
}

#[test]
fn shifting_cells_right_multiplies_by_phase() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let data = random_cells(&mut rng, 4, 8);
    let shifted = data.translate(1);
    let n = min_alpha_points(&shifted);
    for kind in KINDS {
        let b = fb_transform(&data, n, kind).unwrap();
        let bs = fb_transform(&shifted, n, kind).unwrap();
        for (i, &alpha) in b.alpha_grid.iter().enumerate() {
            let phase = Complex64::from_polar(1.0, TAU * alpha);
            for (z, zs) in b.values[i].iter().zip(&bs.values[i]) {
                assert!((z * phase - zs).norm() <= 1e-12);
            }
            let ext = b.quasi_periodic_extension(i, 1);
            assert!(ext
                .iter()
                .zip(&bs.values[i])
                .all(|(e, s)| (e - s).norm() <= 1e-12));
        }
    }
}

#[test]
fn sampled_function_is_quasi_periodic_in_x() {
    // f vanishes for |x| ≥ 14, inside cells −2..=2, so cells −4..=4 hold all of f and of f(· + 2π).
    let f = |x: f64| {
        let u = x / 14.0;
        if u.abs() < 1.0 {
            Complex64::new((1.0 - 1.0 / (1.0 - u * u)).exp(), 0.3 * x.sin())
        } else {
            Complex64::new(0.0, 0.0)
        }
    };
    let data = CellArray::from_fn(12, -4..=4, f).unwrap();
    let moved = CellArray::from_fn(12, -4..=4, |x| f(x + TAU)).unwrap();
    let n = min_alpha_points(&data).max(min_alpha_points(&moved));
    for kind in KINDS {
        let b = fb_transform(&data, n, kind).unwrap();
        let bm = fb_transform(&moved, n, kind).unwrap();
        for i in 0..n {
            let expect = b.quasi_periodic_extension(i, -1);
            let err = expect
                .iter()
                .zip(&bm.values[i])
                .map(|(e, v)| (e - v).norm())
                .fold(0.0, f64::max);
            assert!(err <= 1e-12, "{kind:?} row {i}: {err}");
        }
    }
}

#[test]
fn round_trip_five_random_cells() {
    for kind in KINDS {
        for seed in 0..10 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let data = random_cells(&mut rng, 5, 32);
            let b = fb_transform(&data, min_alpha_points(&data), kind).unwrap();
            let back = fb_inverse(&b).unwrap();
            assert!(data.max_diff(&back) <= 1e-12, "{kind:?} seed {seed}");
        }
    }
}

#[test]
fn round_trip_starting_from_bloch_values() {
    // ψ(α, x_m) = Σ_{j=-2}^{2} c_{jm} e^{i2παj} on 9 α-points: resolved, so transform∘inverse = id
    // once the rounding residue in the other cells is dropped.
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let coeffs: Vec<Vec<Complex64>> = (0..5)
        .map(|_| {
            (0..6)
                .map(|_| Complex64::new(rng.random(), rng.random()))
                .collect()
        })
        .collect();
    for kind in KINDS {
        let psi = BlochArray::from_fn(11, 6, kind, |alpha, m| {
            (0..5)
                .map(|i| coeffs[i][m] * Complex64::from_polar(1.0, TAU * alpha * (i as f64 - 2.0)))
                .sum()
        });
        let cells = prune(&fb_inverse(&psi).unwrap(), 1e-13);
        assert_eq!(cells.nonzero_cells(), 5);
        let again = fb_transform(&cells, psi.alpha_grid.len(), kind).unwrap();
        assert!(bloch_diff(&psi, &again) <= 1e-12, "{kind:?}");
    }
}

#[test]
fn alpha_independent_values_recover_cell_zero() {
    let f: Vec<Complex64> = (0..10).map(|m| Complex64::new(m as f64, -0.5)).collect();
    for kind in KINDS {
        let b = BlochArray::from_fn(9, 10, kind, |_, m| f[m]);
        let cells = fb_inverse(&b).unwrap();
        for (j, v) in cells.cells() {
            let expect = if j == 0 {
                f.clone()
            } else {
                vec![Complex64::new(0.0, 0.0); 10]
            };
            let err = v
                .iter()
                .zip(&expect)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            assert!(err <= 1e-13, "{kind:?} cell {j}: {err}");
        }
    }
}

#[test]
fn unit_phase_recovers_cell_plus_one() {
    // The inverse kernel is the conjugate of the forward one, so e^{i2πα}f sits in cell +1.
    let f: Vec<Complex64> = (0..4).map(|m| Complex64::new(1.0, m as f64)).collect();
    for kind in KINDS {
        let b = BlochArray::from_fn(7, 4, kind, |a, m| {
            f[m] * Complex64::from_polar(1.0, TAU * a)
        });
        let cells = fb_inverse(&b).unwrap();
        let pruned = prune(&cells, 1e-13);
        assert_eq!(pruned.nonzero_cells(), 1);
        let one = pruned.get(1).unwrap();
        assert!(one.iter().zip(&f).all(|(a, b)| (a - b).norm() <= 1e-13));
    }
}

#[test]
fn parseval() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for kind in KINDS {
        let data = random_cells(&mut rng, 6, 20);
        let b = fb_transform(&data, 2 * 8 + 1, kind).unwrap();
        let (e, mean) = (data.energy(), b.mean_energy());
        assert!((e - mean).abs() <= 1e-12 * e, "{e} vs {mean}");
    }
}

#[test]
fn undersampled_grid_is_rejected() {
    let data = CellArray::from_fn(4, [-1, 0, 1], |_| Complex64::new(1.0, 0.0)).unwrap();
    assert_eq!(min_alpha_points(&data), 7);
    assert!(matches!(
        fb_transform(&data, 6, LambdaKind::Centered),
        Err(Error::Parameter(_))
    ));
    assert!(fb_transform(&data, 7, LambdaKind::Centered).is_ok());
}

#[test]
fn ragged_bloch_array_is_rejected() {
    let mut b = BlochArray::from_fn(5, 3, LambdaKind::Centered, |_, _| Complex64::new(1.0, 0.0));
    b.values[2].pop();
    assert!(matches!(fb_inverse(&b), Err(Error::Parameter(_))));
    assert!(CellArray::new(4)
        .unwrap()
        .insert(0, vec![Complex64::new(0.0, 0.0); 3])
        .is_err());
}

#[test]
fn lambda_grids() {
    let c = LambdaKind::Centered.grid(4);
    assert_eq!(c, vec![-0.25, 0.0, 0.25, 0.5]);
    let s = LambdaKind::Shifted.grid(4);
    assert_eq!(s, vec![0.25, 0.5, 0.75, 1.0]);
    assert_eq!(LambdaKind::Centered.wrap(-0.5), 0.5);
    assert_eq!(LambdaKind::Shifted.wrap(2.0), 1.0);
    assert!((LambdaKind::Centered.wrap(1.3) - 0.3).abs() < 1e-15);
}

#[test]
fn json_uses_re_im_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let data = random_cells(&mut rng, 3, 4);
    let text = serde_json::to_string(&data).unwrap();
    let back: CellArray = serde_json::from_str(&text).unwrap();
    assert_eq!(back, data);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let first = &v["cells"][0]["samples"][0];
    assert!(first.is_array() && first.as_array().unwrap().len() == 2);

    let b = fb_transform(&data, 17, LambdaKind::Shifted).unwrap();
    let text = serde_json::to_string(&b).unwrap();
    let back: BlochArray = serde_json::from_str(&text).unwrap();
    assert_eq!(back, b);
    assert!(text.contains("\"lambda_kind\":\"shifted\""));
    assert!(serde_json::from_str::<CellArray>(
        r#"{"grid_size":2,"cells":[{"j":0,"samples":[[1,0]]}]}"#
    )
    .is_err());
}

proptest! {
    #[test]
    fn round_trip_property(seed in any::<u64>(), count in 1usize..6, extra in 0usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data = random_cells(&mut rng, count, 6);
        let kind = if seed % 2 == 0 { LambdaKind::Centered } else { LambdaKind::Shifted };
        let b = fb_transform(&data, min_alpha_points(&data) + extra, kind).unwrap();
        prop_assert!(data.max_diff(&fb_inverse(&b).unwrap()) <= 1e-12);
        prop_assert!((data.energy() - b.mean_energy()).abs() <= 1e-12 * data.energy());
    }

    #[test]
    fn values_are_one_periodic_in_alpha(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data = random_cells(&mut rng, 3, 4);
        let n = min_alpha_points(&data);
        let c = fb_transform(&data, 2 * n, LambdaKind::Centered).unwrap();
        let s = fb_transform(&data, 2 * n, LambdaKind::Shifted).unwrap();
        // Both grids contain α = 1/2; the shifted grid also holds 1 ≡ 0.
        let ic = c.alpha_grid.iter().position(|&a| a == 0.5).unwrap();
        let is = s.alpha_grid.iter().position(|&a| a == 0.5).unwrap();
        prop_assert_eq!(&c.values[ic], &s.values[is]);
        let i0 = c.alpha_grid.iter().position(|&a| a == 0.0).unwrap();
        let i1 = s.alpha_grid.len() - 1;
        for (a, b) in c.values[i0].iter().zip(&s.values[i1]) {
            prop_assert!((a - b).norm() <= 1e-12);
        }
    }
}
