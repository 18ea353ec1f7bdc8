//! Acceptance gate: every campaign at its pinned tolerances and grids, one PASS/FAIL line per
//! criterion.
//!
//! The gate asserts that each criterion's outcome equals its expected state. `radiation-bounds`
//! is expected red: scaled mode fields for the cutoff and evanescent regimes are not bounded
//! over r ∈ [10, 10⁴] (ratios 10³ to ∞; see the README's known-failures section). If it turns
//! green, the gate fails so the expectation gets updated.

use std::time::Instant;

use periodic_radiation::decayfit::log_grid;
use periodic_radiation::harness::*;

struct Outcome {
    name: &'static str,
    pass: bool,
    detail: String,
}

fn pinned(kind: CampaignKind) -> Campaign {
    let mut c = Campaign::new(kind);
    c.tolerances = Tolerances {
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
    };
    c
}

fn timed(c: &Campaign) -> (Report, f64) {
    let t = Instant::now();
    let rep = run_campaign(c).expect("campaign runs");
    (rep, t.elapsed().as_secs_f64())
}

/// Pass when the selected checks number `expected` and all pass (and `extra` holds).
fn judge(
    name: &'static str,
    rep: &Report,
    prefix: &str,
    expected: usize,
    extra: Option<(bool, String)>,
) -> Outcome {
    let sel: Vec<&Check> = rep
        .checks
        .iter()
        .filter(|c| c.id.starts_with(prefix))
        .collect();
    let passed = sel.iter().filter(|c| c.verdict == Verdict::Pass).count();
    let mut detail = format!("{passed}/{} checks", sel.len());
    let mut pass = sel.len() == expected && passed == expected;
    if sel.len() != expected {
        detail += &format!(" (expected {expected})");
    }
    if let Some((ok, why)) = extra {
        pass &= ok;
        detail += &format!(", {why}");
    }
    let failed: Vec<String> = sel
        .iter()
        .filter(|c| c.verdict != Verdict::Pass)
        .take(4)
        .map(|c| {
            format!(
                "{} = {}",
                c.id,
                c.measured.map_or("-".into(), |m| format!("{:.3e}", m.0))
            )
        })
        .collect();
    if !failed.is_empty() {
        detail += &format!("; e.g. {}", failed.join(", "));
    }
    Outcome { name, pass, detail }
}

fn grid(rep: &Report, key: &str) -> u64 {
    rep.environment.grid.get(key).copied().unwrap_or(0)
}

#[test]
fn acceptance_gate() {
    let mut out = Vec::new();

    let mut c = pinned(CampaignKind::IntegralTable);
    c.r_grid = Some(log_grid(1e2, 1e6, 13));
    let (rep, secs) = timed(&c);
    out.push(judge(
        "decay-table",
        &rep,
        "integral-table/",
        10,
        Some((secs <= 120.0, format!("{secs:.1} s of 120"))),
    ));

    let mut c = pinned(CampaignKind::Radiation);
    c.r_grid = Some(vec![1e1, 1e2, 1e3, 1e4]);
    let (rep, secs) = timed(&c);
    // sqrt and abs × (k = √2: J-, J+; k = 1: J-, two cutoff modes × both sides, J+; k = 1/2: same
    // without J-) × field and residual.
    out.push(judge(
        "radiation-bounds",
        &rep,
        "radiation/",
        60,
        Some((secs <= 300.0, format!("{secs:.1} s of 300"))),
    ));

    let c = pinned(CampaignKind::PartA);
    let (rep, _) = timed(&c);
    let js = c.j_grid();
    let span = js[0] == 4 && js[js.len() - 1] == 256;
    out.push(judge(
        "cell-norm-decay",
        &rep,
        "part-a/",
        3,
        Some((span, format!("j ∈ [{}, {}]", js[0], js[js.len() - 1]))),
    ));

    let (rep, _) = timed(&pinned(CampaignKind::Fb));
    let seeds = grid(&rep, "fb_seeds");
    out.push(judge(
        "floquet-bloch",
        &rep,
        "fb/",
        3,
        Some((seeds == 10, format!("{seeds} seeds"))),
    ));

    let mut c = pinned(CampaignKind::Kernels);
    c.r_grid = Some(log_grid(1e2, 1e4, 13));
    let (rep, _) = timed(&c);
    let samples = grid(&rep, "gap_samples");
    let mut k = judge("kernel-asymptotics", &rep, "kernels/", 0, None);
    let (kernel_ids, gap) = (
        [
            "kernels/S/general",
            "kernels/K/general",
            "kernels/K/near-axis",
        ],
        "kernels/angle-gap",
    );
    let sel: Vec<&Check> = rep
        .checks
        .iter()
        .filter(|c| kernel_ids.contains(&c.id.as_str()) || c.id == gap)
        .collect();
    k.pass = sel.len() == 4 && sel.iter().all(|c| c.pass) && samples == 10_000;
    k.detail = format!(
        "{}/4 checks, {samples} gap samples; {}",
        sel.iter().filter(|c| c.pass).count(),
        sel.iter()
            .map(|c| format!(
                "{} = {}",
                c.id,
                c.measured.map_or("-".into(), |m| format!("{:.4}", m.0))
            ))
            .collect::<Vec<_>>()
            .join(", ")
    );
    out.push(k);
    out.push(judge(
        "layer-radiation",
        &rep,
        "kernels/layer-radiation/",
        2,
        None,
    ));
    let points = grid(&rep, "green_points");
    out.push(judge(
        "green-representation",
        &rep,
        "kernels/green-representation",
        1,
        Some((points == 20, format!("{points} points"))),
    ));

    let (rep, _) = timed(&pinned(CampaignKind::Specfun));
    out.push(judge("special-functions", &rep, "specfun/", 5, None));

    let (rep, _) = timed(&pinned(CampaignKind::Perturb));
    out.push(judge("perturbation-map", &rep, "perturb/", 12, None));

    let expected_red = ["radiation-bounds"];
    let mut mismatched = Vec::new();
    for o in &out {
        println!(
            "{} {:<22} {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.name,
            o.detail
        );
        if o.pass == expected_red.contains(&o.name) {
            mismatched.push(o.name);
        }
    }
    assert_eq!(out.len(), 9);
    assert!(
        mismatched.is_empty(),
        "criteria not in their expected state: {mismatched:?}"
    );
}
