use std::f64::consts::PI;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::oracles::{fresnel_quadrature, generalized_fresnel_contour, hankel_leading_term};
use super::{Campaign, CampaignConfig, Check, Claim, Fitted, Outcome, Report, Sample};
use crate::bump::{Density, Side};
use crate::decayfit::fit_decay;
use crate::error::{Error, Result};
use crate::fbt::{fb_inverse, fb_transform, min_alpha_points, CellArray, LambdaKind};
use crate::modes::{
    cell_h1_norm, classify_modes, ModeField, PeriodicField, ProblemConfig, Weight, Window,
};
use crate::oscint::{eval_integral, IntegralClass, IntegralSpec};
use crate::perturb::{
    coeffs_ap_cp, min_jacobian, phi_p, Coefficients, Preset, SurfaceModel, SurfaceSpec,
};
use crate::potential::{
    fundamental, geometry_gap, kernel_k, kernel_s, Decay, GaussianPlaneWave, KernelPoint,
    LineDensity, PointSourceTrace, SampledDensity, Uprc,
};
use crate::specfun::{bessel_jy, fresnel, generalized_fresnel, generalized_fresnel_sqrt, hankel1};

type Judged = (Check, Vec<Sample>);

fn push(rep: &mut Report, results: Vec<Judged>) {
    for (check, samples) in results {
        rep.checks.push(check);
        rep.samples.extend(samples);
    }
}

fn samples(id: &str, points: &[(f64, f64)]) -> Vec<Sample> {
    points
        .iter()
        .map(|&(x, y)| Sample {
            check: id.to_string(),
            x,
            y,
        })
        .collect()
}

fn wrong_config(kind: &str, want: &str) -> Error {
    Error::Parameter(format!("{kind} campaigns take a {want} config"))
}

/// Largest singular point: `κ` in Case I, `0` or `1/2` in Case II.
fn reference_alpha(cfg: &ProblemConfig) -> f64 {
    cfg.singular_set
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max)
}

const TABLE: [(IntegralClass, u32); 10] = [
    (IntegralClass::A1, 0),
    (IntegralClass::A2, 1),
    (IntegralClass::A3, 0),
    (IntegralClass::A3, 1),
    (IntegralClass::B1, 0),
    (IntegralClass::B2, 0),
    (IntegralClass::C1, 0),
    (IntegralClass::C2, 0),
    (IntegralClass::D1, 0),
    (IntegralClass::D2, 0),
];

pub(super) fn integral_table(c: &Campaign, rep: &mut Report) -> Result<()> {
    let specs: Vec<IntegralSpec> = match &c.config {
        None => TABLE
            .iter()
            .map(|&(cl, m)| IntegralSpec::standard(cl, m))
            .collect(),
        Some(CampaignConfig::Integral(t)) => vec![*t],
        Some(_) => return Err(wrong_config("integral-table", "IntegralSpec")),
    };
    let rs = c.r_grid();
    let tol = c.tolerances.exponent;
    let results = specs
        .par_iter()
        .map(|spec| {
            let phi = IntegralSpec::standard_density(spec.class);
            let id = format!("integral-table/{}/m={}", spec.class, spec.m);
            let expected = spec.class.expected_exponent(spec.m);
            // C1 carries a factor a⁻¹ in its bound; scaling by a keeps the constant O(1).
            let scale = if spec.class == IntegralClass::C1 {
                spec.a
            } else {
                1.0
            };
            let points: Result<Vec<(f64, f64)>> = rs
                .par_iter()
                .map(|&r| eval_integral(&spec.with_r(r), &phi).map(|v| (r, scale * v.norm())))
                .collect();
            let s = points.as_ref().map(|p| samples(&id, p)).unwrap_or_default();
            let outcome = points.and_then(|p| fit_decay(&p)).map(|f| Outcome {
                measured: f.headline(),
                fitted: Some(Fitted::Decay(f)),
                note: "envelope exponent".into(),
            });
            let anchor = format!(
                "oscillatory integral {} (m = {}) decays like r^-{expected}",
                spec.class, spec.m
            );
            (
                Claim::new(id, anchor).within(expected, tol).judge(outcome),
                s,
            )
        })
        .collect();
    push(rep, results);
    rep.environment
        .grid
        .insert("integrals".into(), specs.len() as u64);
    Ok(())
}

struct RegimeCase {
    label: &'static str,
    j: i64,
    window: Window,
    density: Density,
}

/// One representative mode per regime: the first propagating mode, both sides of every cutoff
/// mode, and the evanescent mode closest to cutoff.
fn regime_cases(cfg: &ProblemConfig, alpha0: f64) -> Result<Vec<RegimeCase>> {
    let set = classify_modes(cfg, alpha0, cfg.j_max)?;
    let hw = 0.999 * cfg.delta;
    let two = Density::two_sided(alpha0, hw);
    let side = |w: Window| match w {
        Window::Lower => Density::one_sided(alpha0, hw, Side::Left),
        _ => Density::one_sided(alpha0, hw, Side::Right),
    };
    let mut out = Vec::new();
    if let Some(&j) = set.j_minus.first() {
        out.push(RegimeCase {
            label: "J-",
            j,
            window: Window::Full,
            density: two,
        });
    }
    for &j in &set.j_zero {
        // At α₀ + j = +k the modes above α₀ are evanescent; at −k those below are.
        let (prop, evan) = if alpha0 + j as f64 > 0.0 {
            (Window::Lower, Window::Upper)
        } else {
            (Window::Upper, Window::Lower)
        };
        out.push(RegimeCase {
            label: "J0-propagating",
            j,
            window: prop,
            density: side(prop),
        });
        out.push(RegimeCase {
            label: "J0-evanescent",
            j,
            window: evan,
            density: side(evan),
        });
    }
    let nearest = set.j_plus_truncated.iter().copied().min_by(|a, b| {
        (alpha0 + *a as f64)
            .abs()
            .total_cmp(&(alpha0 + *b as f64).abs())
    });
    if let Some(j) = nearest {
        out.push(RegimeCase {
            label: "J+",
            j,
            window: Window::Full,
            density: two,
        });
    }
    Ok(out)
}

fn decade_ratio(values: &[f64]) -> (f64, String) {
    let max = values.iter().copied().fold(0.0, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let first = values[0];
    let last = values[values.len() - 1];
    let ratio = if min > 0.0 { max / min } else { f64::INFINITY };
    (
        ratio,
        format!(
            "max/first = {:.4}, last/first = {:.4e}",
            max / first,
            last / first
        ),
    )
}

pub(super) fn radiation(c: &Campaign, rep: &mut Report) -> Result<()> {
    let configs: Vec<ProblemConfig> = match &c.config {
        None => vec![
            ProblemConfig::new(2f64.sqrt(), 0.0, 1.0, 0.08)?,
            ProblemConfig::new(1.0, 0.0, 1.0, 0.4)?,
            ProblemConfig::new(0.5, 0.0, 1.0, 0.4)?,
        ],
        Some(CampaignConfig::Problem(p)) => vec![p.clone()],
        Some(_) => return Err(wrong_config("radiation", "ProblemConfig")),
    };
    let rs = c.r_grid();
    let thetas = c.theta_grid();
    let bound = c.tolerances.ratio;

    let mut jobs = Vec::new();
    for cfg in &configs {
        let alpha0 = reference_alpha(cfg);
        for case in regime_cases(cfg, alpha0)? {
            for w in [Weight::Sqrt, Weight::Abs] {
                jobs.push((
                    cfg,
                    alpha0,
                    w,
                    case.label,
                    case.j,
                    case.window,
                    case.density,
                ));
            }
        }
    }
    let results: Vec<Vec<Judged>> = jobs
        .par_iter()
        .map(|&(cfg, alpha0, w, label, j, window, ref density)| {
            let base = format!("radiation/k={:.4}/{}/{label}/j={j}", cfg.k, w.name());
            let metrics: Result<Vec<(f64, f64)>> =
                ModeField::windowed(cfg, alpha0, j, w, window, density).and_then(|f| {
                    rs.par_iter()
                        .map(|&r| {
                            let (mut v, mut res) = (0.0f64, 0.0f64);
                            for &th in &thetas {
                                v = v.max(r.sqrt() * f.value(cfg.polar_point(r, th))?.norm());
                                res = res.max(r.powf(1.5) * f.residual(r, th)?.norm());
                            }
                            Ok((v, res))
                        })
                        .collect()
                });
            let mut out = Vec::new();
            for (which, anchor, pick) in [
                (
                    "field",
                    "r^(1/2)|v| stays bounded across decades of r",
                    0usize,
                ),
                (
                    "residual",
                    "r^(3/2)|dv/dr - ikv| stays bounded across decades of r",
                    1,
                ),
            ] {
                let id = format!("{base}/{which}");
                let series = metrics.as_ref().map(|m| {
                    m.iter()
                        .map(|p| if pick == 0 { p.0 } else { p.1 })
                        .collect::<Vec<f64>>()
                });
                let s = series
                    .as_ref()
                    .map(|v| {
                        let pts: Vec<(f64, f64)> =
                            rs.iter().copied().zip(v.iter().copied()).collect();
                        samples(&id, &pts)
                    })
                    .unwrap_or_default();
                let outcome = match &series {
                    Ok(v) => {
                        let (ratio, note) = decade_ratio(v);
                        Ok(Outcome::scalar(ratio).note(format!("max/min over the r grid; {note}")))
                    }
                    Err(e) => Err(e.clone_lossy()),
                };
                out.push((Claim::new(id, anchor).at_most(bound).judge(outcome), s));
            }
            out
        })
        .collect();
    push(rep, results.into_iter().flatten().collect());
    rep.environment
        .grid
        .insert("regime_cases".into(), jobs.len() as u64 / 2);
    Ok(())
}

pub(super) fn part_a(c: &Campaign, rep: &mut Report) -> Result<()> {
    let cfg = match &c.config {
        // δ = 1/2 is the widest window inside Λ around α₀ = 0.
        None => ProblemConfig::new(1.0, 0.0, 1.0, 0.5)?,
        Some(CampaignConfig::Problem(p)) => p.clone(),
        Some(_) => return Err(wrong_config("part-a", "ProblemConfig")),
    };
    const GRID_DENSITY: usize = 16;
    let alpha0 = reference_alpha(&cfg);
    let density = Density::two_sided(alpha0, 0.999 * cfg.delta);
    let js = c.j_grid();
    let tol = c.tolerances.cell_exponent;

    let norms = |field: &dyn crate::modes::CellField| -> Result<Vec<(f64, f64)>> {
        js.par_iter()
            .map(|&j| {
                let plus = cell_h1_norm(field, j, &cfg, GRID_DENSITY)?;
                let minus = cell_h1_norm(field, -j, &cfg, GRID_DENSITY)?;
                Ok((1.0 + j as f64, plus.max(minus)))
            })
            .collect()
    };
    let judge = |id: &str, claim: Claim, pts: Result<Vec<(f64, f64)>>| -> Judged {
        let s = pts.as_ref().map(|p| samples(id, p)).unwrap_or_default();
        let outcome = pts.and_then(|p| fit_decay(&p)).map(|f| Outcome {
            measured: f.exponent,
            fitted: Some(Fitted::Decay(f)),
            note: "least-squares exponent against 1+|j|, max over ±j".into(),
        });
        (claim.judge(outcome), s)
    };

    let mut results = Vec::new();
    for (w, expected, kind) in [(Weight::Sqrt, 1.5, "u1"), (Weight::Abs, 2.0, "u2")] {
        let id = format!("part-a/{kind}/{}", w.name());
        let fields: Result<Vec<ModeField<'_>>> = (-1..=1)
            .map(|m| ModeField::new(&cfg, alpha0, m, w, &density))
            .collect();
        let pts = fields.and_then(|f| norms(&f));
        let anchor = format!(
            "cell H1 norms of the {}-weighted field decay like (1+|j|)^-{expected}",
            w.name()
        );
        results.push(judge(
            &id,
            Claim::new(id.clone(), anchor).within(expected, tol),
            pts,
        ));
    }
    let smooth = PeriodicField::new(cfg.k, cfg.height, alpha0, 0.9);
    let id = "part-a/u0/smooth".to_string();
    results.push(judge(
        &id,
        Claim::new(
            id.clone(),
            "cell H1 norms of the smooth-density field decay at least like (1+|j|)^-4",
        )
        .at_least(c.tolerances.smooth_exponent_min),
        norms(&smooth),
    ));
    push(rep, results);
    rep.environment
        .grid
        .insert("cell_grid_density".into(), GRID_DENSITY as u64);
    rep.environment
        .grid
        .insert("j_points".into(), js.len() as u64);
    Ok(())
}

const FB_SEEDS: u64 = 10;
const FB_CELLS: usize = 5;
const FB_GRID: usize = 32;
const FB_INDEX: i64 = 8;

struct FbErrors {
    round_trip: f64,
    quasi_periodicity: f64,
    parseval: f64,
}

fn random_cells(rng: &mut ChaCha8Rng) -> Result<CellArray> {
    let mut idx: Vec<i64> = (-FB_INDEX..=FB_INDEX).collect();
    idx.shuffle(rng);
    let mut data = CellArray::new(FB_GRID)?;
    for &j in &idx[..FB_CELLS] {
        let v = (0..FB_GRID)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        data.insert(j, v)?;
    }
    Ok(data)
}

fn fb_errors(seed: u64, kind: LambdaKind) -> Result<FbErrors> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = random_cells(&mut rng)?;
    let shifted = data.translate(1);
    let n = min_alpha_points(&data).max(min_alpha_points(&shifted));

    let bloch = fb_transform(&data, n, kind)?;
    let back = fb_inverse(&bloch)?;
    let round_trip = data.max_diff(&back);

    let moved = fb_transform(&shifted, n, kind)?;
    let quasi_periodicity = (0..n)
        .flat_map(|i| {
            let expect = bloch.quasi_periodic_extension(i, 1);
            moved.values[i]
                .iter()
                .zip(expect)
                .map(|(a, b)| (a - b).norm())
                .collect::<Vec<_>>()
        })
        .fold(0.0, f64::max);

    let e = data.energy();
    let parseval = (e - bloch.mean_energy()).abs() / e;
    Ok(FbErrors {
        round_trip,
        quasi_periodicity,
        parseval,
    })
}

pub(super) fn fb(c: &Campaign, rep: &mut Report) -> Result<()> {
    let tol = c.tolerances.fb;
    let runs: Vec<(u64, Result<FbErrors>)> = (0..FB_SEEDS)
        .into_par_iter()
        .map(|i| {
            let seed = c.seed.wrapping_add(i);
            let kind = if i % 2 == 0 {
                LambdaKind::Centered
            } else {
                LambdaKind::Shifted
            };
            (seed, fb_errors(seed, kind))
        })
        .collect();
    type Pick = fn(&FbErrors) -> f64;
    let checks: [(&str, &str, Pick); 3] = [
        (
            "round-trip",
            "inverse transform reproduces the cell data",
            |e| e.round_trip,
        ),
        (
            "quasi-periodicity",
            "moving the data one cell right multiplies the transform by e^(i2πα)",
            |e| e.quasi_periodicity,
        ),
        (
            "parseval",
            "cell sum of |φ|² equals the α-mean of the transformed energy",
            |e| e.parseval,
        ),
    ];
    let mut results = Vec::new();
    for (name, anchor, get) in checks {
        let id = format!("fb/{name}");
        let mut worst = 0.0f64;
        let mut pts = Vec::new();
        let mut failure = None;
        for (seed, r) in &runs {
            match r {
                Ok(e) => {
                    worst = worst.max(get(e));
                    pts.push((*seed as f64, get(e)));
                }
                Err(e) => failure = Some(e.clone_lossy()),
            }
        }
        let outcome = match failure {
            Some(e) => Err(e),
            None => Ok(Outcome::scalar(worst).note(format!(
                "max over {FB_SEEDS} seeds of random {FB_CELLS}-cell data"
            ))),
        };
        results.push((
            Claim::new(id.clone(), anchor).at_most(tol).judge(outcome),
            samples(&id, &pts),
        ));
    }
    push(rep, results);
    rep.environment.grid.insert("fb_seeds".into(), FB_SEEDS);
    rep.environment
        .grid
        .insert("fb_grid_size".into(), FB_GRID as u64);
    Ok(())
}

const GAP_SAMPLES: usize = 10_000;
const GREEN_POINTS: usize = 20;

pub(super) fn kernels(c: &Campaign, rep: &mut Report) -> Result<()> {
    let cfg = match &c.config {
        None => ProblemConfig::new(1.0, 2.0, 0.5, 0.25)?,
        Some(CampaignConfig::Problem(p)) => p.clone(),
        Some(_) => return Err(wrong_config("kernels", "ProblemConfig")),
    };
    let (k, height, h) = (cfg.k, cfg.height, cfg.standoff);
    let rs = c.r_grid();
    let thetas = c.theta_grid();
    let tol = c.tolerances.kernel_exponent;
    let mut results: Vec<Judged> = Vec::new();

    // Kernel magnitudes against |x − y| along the ray θ = 1.
    type KernelFn = fn(&KernelPoint) -> Complex64;
    let sweeps: [(&str, &str, f64, bool, KernelFn); 3] = [
        (
            "S/general",
            "S(x,y) decays like |x-y|^-1/2 in general position",
            0.5,
            false,
            kernel_s,
        ),
        (
            "K/general",
            "K(x,y) decays like |x-y|^-1/2 in general position",
            0.5,
            false,
            kernel_k,
        ),
        (
            "K/near-axis",
            "K(x,y) decays like |x-y|^-3/2 when |y1| < sqrt|x|",
            1.5,
            true,
            kernel_k,
        ),
    ];
    for (name, anchor, expected, near, kernel) in sweeps {
        let id = format!("kernels/{name}");
        let pts: Result<Vec<(f64, f64)>> = rs
            .par_iter()
            .map(|&r| {
                let x = [r * 1f64.cos(), height + r * 1f64.sin()];
                let y1 = if near { 0.5 } else { -r };
                let p = KernelPoint::new(x, y1, k, height)?;
                Ok((p.rho(), kernel(&p).norm()))
            })
            .collect();
        let s = pts.as_ref().map(|p| samples(&id, p)).unwrap_or_default();
        let outcome = pts.and_then(|p| fit_decay(&p)).map(|f| Outcome {
            measured: f.headline(),
            fitted: Some(Fitted::Decay(f)),
            note: "envelope exponent".into(),
        });
        results.push((
            Claim::new(id, anchor).within(expected, tol).judge(outcome),
            s,
        ));
    }

    // Angle between x̃ and x − y on random samples of the near-axis regime.
    let gap_audit = || -> Result<Outcome> {
        let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
        let mut violations = 0u64;
        let mut worst = 0.0f64;
        for _ in 0..GAP_SAMPLES {
            let r = 10f64.powf(rng.random_range(2.0..6.0));
            let t0 = (h / r).asin();
            let th = rng.random_range(t0..PI - t0);
            let y1 = rng.random_range(-r.sqrt()..r.sqrt());
            let p = KernelPoint::new([r * th.cos(), height + r * th.sin()], y1, k, height)?;
            let g = geometry_gap(&p);
            let bound = 4.0 / p.r();
            if !(g >= 0.0 && g < bound) {
                violations += 1;
            }
            worst = worst.max(g / bound);
        }
        Ok(Outcome::scalar(violations as f64).note(format!(
            "{GAP_SAMPLES} samples, largest gap/(4/r) = {worst:.4}"
        )))
    };
    results.push((
        Claim::new(
            "kernels/angle-gap",
            "0 <= 1 - cos∠(x̃, x-y) < 4/r whenever |y1| < sqrt(r)",
        )
        .at_most(0.0)
        .judge(gap_audit()),
        Vec::new(),
    ));

    // Representation of a point source below the line by its own trace.
    let green = || -> Result<Outcome> {
        let z = [0.3, height - 0.5];
        let trace = PointSourceTrace::new(z, k, height)?;
        let uprc = Uprc::new(k, height, 1e3)?;
        let errs: Result<Vec<(f64, f64, f64)>> = (0..GREEN_POINTS)
            .into_par_iter()
            .map(|i| {
                let x = [-5.0 + 0.6 * i as f64, height + h + 0.25 * i as f64];
                let v = uprc.eval(&trace, x)?;
                Ok((
                    (v.value() - fundamental(x, z, k)?).norm(),
                    v.quadrature_error,
                    v.tail_bound,
                ))
            })
            .collect();
        let errs = errs?;
        let worst = errs.iter().map(|e| e.0).fold(0.0, f64::max);
        let tail = errs.iter().map(|e| e.2).fold(0.0, f64::max);
        Ok(Outcome::scalar(worst).note(format!(
            "{GREEN_POINTS} points, truncation 1e3, largest tail bound {tail:.2e}"
        )))
    };
    results.push((
        Claim::new("kernels/green-representation", "the layer potential of a point-source trace reproduces the source field above the line")
            .at_most(c.tolerances.green)
            .judge(green()),
        Vec::new(),
    ));

    // Radiation of a layer potential with a rapidly decaying density.
    let density: Box<dyn LineDensity> = match &c.density {
        Some(d) => Box::new(SampledDensity::from_csv(
            &d.path,
            Decay {
                exponent: d.exponent,
                constant: d.constant,
            },
        )?),
        None => Box::new(GaussianPlaneWave::new(1.0, 0.3, 0.0, 3.0)?),
    };
    let density = density.as_ref();
    let metrics: Result<Vec<(f64, f64)>> = rs
        .par_iter()
        .map(|&r| {
            let uprc = Uprc::new(k, height, (10.0 * r.sqrt()).max(200.0))?;
            let (mut u, mut res) = (0.0f64, 0.0f64);
            for &th in &thetas {
                let x = [r * th.cos(), height + r * th.sin()];
                u = u.max(r.sqrt() * uprc.eval(density, x)?.value().norm());
                res = res.max(r.powf(1.5) * uprc.radial_residual(density, x)?.value().norm());
            }
            Ok((u, res))
        })
        .collect();
    for (which, anchor, pick) in [
        (
            "field",
            "r^(1/2)|u| of the layer potential stays bounded across decades of r",
            0usize,
        ),
        (
            "residual",
            "r^(3/2)|du/dr - iku| of the layer potential stays bounded across decades of r",
            1,
        ),
    ] {
        let id = format!("kernels/layer-radiation/{which}");
        let series = metrics.as_ref().map(|m| {
            m.iter()
                .map(|p| if pick == 0 { p.0 } else { p.1 })
                .collect::<Vec<f64>>()
        });
        let s = series
            .as_ref()
            .map(|v| {
                samples(
                    &id,
                    &rs.iter()
                        .copied()
                        .zip(v.iter().copied())
                        .collect::<Vec<_>>(),
                )
            })
            .unwrap_or_default();
        let outcome = match series {
            Ok(v) => {
                let (ratio, note) = decade_ratio(&v);
                Ok(Outcome::scalar(ratio).note(format!("max/min over the r grid; {note}")))
            }
            Err(e) => Err(e.clone_lossy()),
        };
        results.push((
            Claim::new(id, anchor)
                .at_most(c.tolerances.ratio)
                .judge(outcome),
            s,
        ));
    }

    push(rep, results);
    rep.environment
        .grid
        .insert("gap_samples".into(), GAP_SAMPLES as u64);
    rep.environment
        .grid
        .insert("green_points".into(), GREEN_POINTS as u64);
    Ok(())
}

/// Points of the strip `ζ ≤ x₂ < H` on an `n × n` grid over `x₁ ∈ [a, b]`.
fn strip_points(s: &SurfaceModel, a: f64, b: f64, n: usize) -> Vec<[f64; 2]> {
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        let x1 = a + (b - a) * i as f64 / (n - 1) as f64;
        let z = s.zeta(x1).0;
        for m in 0..n {
            out.push([x1, z + (s.height() - z) * m as f64 / n as f64]);
        }
    }
    out
}

fn perturb_checks(name: &str, s: &SurfaceModel) -> Vec<Judged> {
    let l = s.support();
    let base = format!("perturb/{name}");
    let mut out = Vec::new();

    // Off the support, and above H₀ everywhere.
    let identity = || -> Result<Outcome> {
        let mut pts = strip_points(s, -l - 10.0, -l, 41);
        pts.extend(strip_points(s, l, l + 10.0, 41));
        for i in 0..81 {
            let x1 = -l + 2.0 * l * i as f64 / 80.0;
            for m in 0..10 {
                pts.push([x1, s.h0() + (s.height() - s.h0()) * m as f64 / 10.0]);
            }
        }
        let mut bad = 0u64;
        for x in &pts {
            if coeffs_ap_cp(s, *x)? != Coefficients::IDENTITY {
                bad += 1;
            }
        }
        Ok(Outcome::scalar(bad as f64)
            .note(format!("{} sample points, exact comparison", pts.len())))
    };
    out.push((
        Claim::new(
            format!("{base}/identity-outside"),
            "(A_p, c_p) = (I, 1) outside [-L, L] x [0, H0]",
        )
        .at_most(0.0)
        .judge(identity()),
        Vec::new(),
    ));

    out.push((
        Claim::new(
            format!("{base}/jacobian-positive"),
            "det of the flattening map's Jacobian is positive on the support",
        )
        .above(0.0)
        .judge(Ok(
            Outcome::scalar(min_jacobian(s, 201)).note("minimum over a 201 x 201 grid")
        )),
        Vec::new(),
    ));

    let boundary = || -> Result<Outcome> {
        let mut worst = 0.0f64;
        for i in 0..=400 {
            let x1 = -l - 1.0 + (2.0 * l + 2.0) * i as f64 / 400.0;
            let z = s.zeta(x1).0;
            let y = phi_p(s, [x1, z])?;
            worst = worst
                .max((y[0] - x1).abs())
                .max((y[1] - (z + s.p(x1).0)).abs());
        }
        Ok(Outcome::scalar(worst).note("401 surface samples"))
    };
    out.push((
        Claim::new(
            format!("{base}/boundary-mapping"),
            "the flattening map sends (x1, ζ) to (x1, ζ + p)",
        )
        .at_most(0.0)
        .judge(boundary()),
        Vec::new(),
    ));

    let spd = || -> Result<Outcome> {
        let mut worst = f64::INFINITY;
        for x in strip_points(s, -l, l, 81) {
            let a = coeffs_ap_cp(s, x)?.a;
            if a[0][1] != a[1][0] {
                return Ok(Outcome::scalar(f64::NEG_INFINITY).note(format!("asymmetric at {x:?}")));
            }
            let tr = a[0][0] + a[1][1];
            let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
            let lo = 0.5 * (tr - (tr * tr - 4.0 * det).max(0.0).sqrt());
            worst = worst.min(lo);
        }
        Ok(Outcome::scalar(worst).note("smallest eigenvalue of A_p over an 81 x 81 grid"))
    };
    out.push((
        Claim::new(
            format!("{base}/coefficients-spd"),
            "A_p is symmetric positive definite",
        )
        .above(0.0)
        .judge(spd()),
        Vec::new(),
    ));
    out
}

pub(super) fn perturb(c: &Campaign, rep: &mut Report) -> Result<()> {
    let surfaces: Vec<(String, Result<SurfaceModel>)> = match &c.config {
        None => Preset::ALL
            .iter()
            .map(|&p| {
                let amp = c.tolerances.jacobian_amplitude;
                (
                    p.name().to_string(),
                    SurfaceModel::preset(p, amp, 3.0, 2.0, 3.0),
                )
            })
            .collect(),
        Some(CampaignConfig::Surface(spec)) => {
            let name = match spec {
                SurfaceSpec::Preset { preset, .. } => preset.name().to_string(),
                SurfaceSpec::Table { .. } => "table".to_string(),
            };
            vec![(name, spec.build())]
        }
        Some(_) => return Err(wrong_config("perturb", "surface")),
    };
    let mut results = Vec::new();
    for (name, s) in &surfaces {
        match s {
            Ok(s) => results.extend(perturb_checks(name, s)),
            Err(e) => results.push((
                Claim::new(format!("perturb/{name}/surface"), "surface model is valid")
                    .at_most(0.0)
                    .judge(Err(e.clone_lossy())),
                Vec::new(),
            )),
        }
    }
    push(rep, results);
    Ok(())
}

pub(super) fn specfun(c: &Campaign, rep: &mut Report) -> Result<()> {
    let t = &c.tolerances;
    let mut results: Vec<Judged> = Vec::new();

    let ts: Vec<f64> = (0..=200).map(|i| i as f64 * 0.05).collect();
    let errs: Result<Vec<(f64, f64)>> = ts
        .par_iter()
        .map(|&x| {
            let f = fresnel(x)?;
            let o = fresnel_quadrature(x);
            Ok((x, (f.c - o.re).abs().max((f.s - o.im).abs())))
        })
        .collect();
    let id = "specfun/fresnel";
    let s = errs.as_ref().map(|p| samples(id, p)).unwrap_or_default();
    let outcome = errs.map(|e| {
        Outcome::scalar(e.iter().map(|p| p.1).fold(0.0, f64::max))
            .note("201 points on [0, 10] against quadrature")
    });
    results.push((
        Claim::new(
            id,
            "Fresnel integrals match quadrature of the defining integrals",
        )
        .at_most(t.fresnel)
        .judge(outcome),
        s,
    ));

    for order in [0u8, 1] {
        let outcome = hankel1(order, 100.0).map(|h| {
            let lead = hankel_leading_term(order, 100.0);
            Outcome::scalar((h.value() - lead).norm() / lead.norm())
                .note("relative error at t = 100")
        });
        results.push((
            Claim::new(
                format!("specfun/hankel-asymptotic/order={order}"),
                format!("H_{order}(t) approaches its leading large-argument term"),
            )
            .at_most(t.hankel_relative)
            .judge(outcome),
            Vec::new(),
        ));
    }

    let ts: Vec<f64> = (0..200).map(|i| 0.5 + 49.5 * i as f64 / 199.0).collect();
    let errs: Result<Vec<(f64, f64)>> = ts
        .iter()
        .map(|&x| {
            let (j0, y0) = bessel_jy(0, x)?;
            let (j1, y1) = bessel_jy(1, x)?;
            let exact = -2.0 / (PI * x);
            Ok((x, ((j0 * y1 - j1 * y0) - exact).abs() / exact.abs()))
        })
        .collect();
    let id = "specfun/wronskian";
    let s = errs.as_ref().map(|p| samples(id, p)).unwrap_or_default();
    let outcome = errs.map(|e| {
        Outcome::scalar(e.iter().map(|p| p.1).fold(0.0, f64::max))
            .note("relative error, 200 points on [0.5, 50]")
    });
    results.push((
        Claim::new(id, "J0 Y1 - J1 Y0 = -2/(πt)")
            .at_most(t.wronskian)
            .judge(outcome),
        s,
    ));

    let cases: [(f64, u32); 6] = [(0.0, 1), (0.0, 2), (1.0, 2), (0.5, 2), (2.0, 3), (3.0, 4)];
    let errs: Result<Vec<(f64, f64)>> = cases
        .iter()
        .enumerate()
        .map(|(i, &(p, n))| {
            let v = if p == 0.5 {
                generalized_fresnel_sqrt(n)?
            } else {
                generalized_fresnel(p as u32, n)?
            };
            Ok((i as f64, (v - generalized_fresnel_contour(p, n)).norm()))
        })
        .collect();
    let id = "specfun/generalized-fresnel";
    let s = errs.as_ref().map(|p| samples(id, p)).unwrap_or_default();
    let outcome = errs.map(|e| {
        Outcome::scalar(e.iter().map(|p| p.1).fold(0.0, f64::max))
            .note("(power, n) in (0,1) (0,2) (1,2) (1/2,2) (2,3) (3,4) against rotated-contour quadrature")
    });
    results.push((
        Claim::new(
            id,
            "closed form of ∫ x^m e^(ix^n) dx matches contour quadrature",
        )
        .at_most(t.generalized_fresnel)
        .judge(outcome),
        s,
    ));

    push(rep, results);
    Ok(())
}
