//! One PASS/FAIL line per acceptance criterion, with indented diagnostics.
//!
//! The process exits non-zero only if a computation errors out, or on any
//! FAIL when `LRTI_ACCEPTANCE_STRICT=1` is set.

mod common;

use std::time::Instant;

use lrti::ed::{compare_global, compare_local};
use lrti::{
    build_dispersion, destagger, edge_points, epsilon_range, epsilon_scan, extrema_ridges_with, fit_power_law,
    gx_field, lambda2_field, magnetization_field, max_group_velocity, renyi_from_lambda, revival_time, time_grid,
    Field64, GlobalQuench, ModelParams, QuenchPath, RidgeOptions, RidgeSet, Window,
};
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

type Outcome = Result<(bool, Vec<String>), lrti::Error>;

fn window() -> Window<f64> {
    Window::new(8.0, 204.8).unwrap()
}

fn ridges(field: &Field64) -> Option<RidgeSet<f64>> {
    extrema_ridges_with(field, &RidgeOptions { window: window(), ..Default::default() }).ok()
}

fn scan_beta(field: &Field64, lo: f64, hi: f64, n: usize, win: Window<f64>) -> Result<(f64, f64), lrti::Error> {
    let s = epsilon_scan(field, &epsilon_range(lo, hi, n)?, win)?;
    Ok((s.beta_mean, s.beta_spread))
}

/// `J` quench from `(h/J)_i = 50` to `J_f = 1` at fixed field.
fn j_quench(alpha: f64, n: usize, h: f64) -> Result<GlobalQuench<f64>, lrti::Error> {
    GlobalQuench::new(alpha, n, (h / 50.0, h), (1.0, h), QuenchPath::PaperJQuench)
}

fn criterion_1() -> Outcome {
    let mut ok = true;
    let mut notes = vec![];
    let t = time_grid(350.0, 0.1)?;
    for alpha in [1.3, 1.5, 1.7] {
        let q = j_quench(alpha, 512, 2.0)?;
        let r: Vec<usize> = (8..=256).collect();
        let d = destagger(&gx_field(&q, &r, &t)?);
        let (beta_ce, spread) = scan_beta(&d.magnitude, 0.01, 0.12, 12, window())?;
        let beta_m = ridges(&d.magnitude).and_then(|s| s.beta_mean());
        let even_ce = scan_beta(&d.even, 0.01, 0.12, 12, window()).map(|b| b.0).ok();
        let ce_ok = (beta_ce - (3.0 - alpha)).abs() <= 0.10;
        let m_ok = beta_m.is_some_and(|b| (b - 1.0).abs() <= 0.07);
        ok &= ce_ok && m_ok;
        notes.push(format!(
            "α = {alpha}: β_CE = {beta_ce:.3} (spread {spread:.3}, target {:.2}) {}; β_m = {} (target 1) {}; even-sublattice β_CE = {}",
            3.0 - alpha,
            mark(ce_ok),
            fmt_opt(beta_m),
            mark(m_ok),
            fmt_opt(even_ce),
        ));
    }
    let q = j_quench(1.5, 4096, 2.0)?;
    let r: Vec<usize> = (8..=256).collect();
    let f = gx_field(&q, &r, &t)?;
    let (big, _) = scan_beta(&destagger(&f).magnitude, 0.01, 0.12, 12, window())?;
    notes.push(format!("diagnostic: α = 1.5 at N = 4096 gives β_CE = {big:.3}"));
    Ok((ok, notes))
}

fn criterion_2() -> Outcome {
    let q = j_quench(3.0, 512, 2.0)?;
    let table = build_dispersion(&q.post())?;
    let g = max_group_velocity(&table)?;
    let t_rev = revival_time(&table);
    let t = time_grid(t_rev.min(350.0), 0.1)?;
    let r: Vec<usize> = (8..=256).collect();
    let f = gx_field(&q, &r, &t)?;
    let scan = epsilon_scan(&f, &epsilon_range(0.01, 0.04, 4)?, window())?;
    let v_ce = scan.velocity_mean();
    let v_m = ridges(&f).and_then(|s| s.velocity_mean());
    let ce_ratio = v_ce / (2.0 * g.vg_max);
    let m_ratio = v_m.map(|v| v / (2.0 * g.vphi_star.abs()));
    let ce_ok = (ce_ratio - 1.0).abs() <= 0.05;
    let m_ok = m_ratio.is_some_and(|x| (x - 1.0).abs() <= 0.05);
    Ok((
        ce_ok && m_ok,
        vec![
            format!("k* = {:.4}, V_g(k*) = {:.4}, V_φ(k*) = {:.4}, t_max = t_rev = {t_rev:.1}", g.k_star, g.vg_max, g.vphi_star),
            format!("V_CE = {v_ce:.4} = {ce_ratio:.4} × 2V_g {}", mark(ce_ok)),
            format!("V_m = {} = {} × 2|V_φ| {}", fmt_opt(v_m), fmt_opt(m_ratio), mark(m_ok)),
        ],
    ))
}

fn criterion_3() -> Outcome {
    let mut ok = true;
    let mut notes = vec![];
    let t = time_grid(350.0, 0.1)?;
    for alpha in [1.5, 1.8] {
        let p = ModelParams::new(1.0, 50.0, alpha, 512)?;
        let r: Vec<usize> = (8..=256).collect();
        let f = magnetization_field(&p, &r, &t)?;
        let (beta_se, spread) = scan_beta(&f, 0.01, 0.12, 12, window())?;
        let beta_m = ridges(&f).and_then(|s| s.beta_mean());
        let se_ok = (beta_se - (3.0 - alpha)).abs() <= 0.10;
        let matches: Vec<&str> = [("α - 1", alpha - 1.0), ("2 - α", 2.0 - alpha)]
            .iter()
            .filter(|(_, target)| beta_m.is_some_and(|b| (b - target).abs() <= 0.10))
            .map(|(name, _)| *name)
            .collect();
        ok &= se_ok && !matches.is_empty();
        notes.push(format!(
            "α = {alpha}: β_SE = {beta_se:.3} (spread {spread:.3}, target {:.2}) {}; β_m = {} matches [{}]",
            3.0 - alpha,
            mark(se_ok),
            fmt_opt(beta_m),
            matches.join(", "),
        ));
        let big = ModelParams::new(1.0, 50.0, alpha, 8192)?;
        let (b, _) = scan_beta(&magnetization_field(&big, &r, &t)?, 0.01, 0.12, 12, window())?;
        notes.push(format!("diagnostic: N = 8192 gives β_SE = {b:.3}"));
    }
    Ok((ok, notes))
}

fn criterion_4() -> Outcome {
    let p = ModelParams::new(1.0, 50.0, 3.0, 512)?;
    let g = max_group_velocity(&build_dispersion(&p)?)?;
    let t = time_grid(350.0, 0.1)?;
    let r: Vec<usize> = (8..=256).collect();
    let f = magnetization_field(&p, &r, &t)?;
    let scan = epsilon_scan(&f, &epsilon_range(0.01, 0.12, 12)?, window())?;
    let ratio = scan.velocity_mean() / g.vg_max;
    let v_ok = (ratio - 1.0).abs() <= 0.05;
    // a ridge counts as the edge itself if it never leaves the ε = 0.01 front by more than one oscillation
    let front = edge_points(&f, 0.01)?;
    let stray = ridges(&f).map_or(0, |s| {
        s.ridges
            .iter()
            .filter(|ridge| {
                ridge.points.iter().any(|p| front.iter().find(|e| e.r == p.r).is_none_or(|e| (p.t - e.t).abs() > 2.0))
            })
            .count()
    });
    Ok((
        v_ok && stray == 0,
        vec![
            format!("V_SE = {:.4} = {ratio:.4} × V_g(k*) {}", scan.velocity_mean(), mark(v_ok)),
            format!("ridges away from the edge: {stray} {}", mark(stray == 0)),
        ],
    ))
}

fn entropy_betas(alpha: f64, n: usize, r_max: usize) -> Result<Vec<(f64, f64, f64)>, lrti::Error> {
    let p = ModelParams::new(1.0, 50.0, alpha, n)?;
    let r: Vec<usize> = (1..=r_max).collect();
    let t = time_grid(350.0, 0.1)?;
    let l2 = lambda2_field(&p, &r, &t, false)?;
    [0.5, 1.0, 2.0]
        .iter()
        .map(|&order| {
            let s = renyi_from_lambda(order, &l2)?;
            let (b, spread) = scan_beta(&s, 0.2, 0.8, 7, window())?;
            Ok((order, b, spread))
        })
        .collect()
}

fn criterion_5() -> Outcome {
    let mut ok = true;
    let mut notes = vec![];
    for alpha in [2.5, 1.5] {
        for (order, b, spread) in entropy_betas(alpha, 512, 256)? {
            let good = (b - 1.0).abs() <= 0.05;
            ok &= good;
            notes.push(format!("α = {alpha}, n = {order}: β_EE = {b:.3} (spread {spread:.3}) {}", mark(good)));
        }
    }
    let p = ModelParams::new(1.0, 50.0, 1.8, 96)?;
    let r: Vec<usize> = (1..=48).collect();
    let s = renyi_from_lambda(1.0, &lambda2_field(&p, &r, &time_grid(350.0, 0.1)?, false)?)?;
    let small = fit_power_law(&edge_points(&s, 0.5)?, Window::default_for(&s))?;
    let small_ok = (0.85..=0.95).contains(&small.beta);
    ok &= small_ok;
    notes.push(format!("N = 96, α = 1.8, ε = 0.5: β_EE = {:.3} (target [0.85, 0.95]) {}", small.beta, mark(small_ok)));
    let big: Vec<String> =
        entropy_betas(1.5, 2048, 256)?.iter().map(|(o, b, _)| format!("n = {o}: {b:.3}")).collect();
    notes.push(format!("diagnostic: α = 1.5 at N = 2048 gives {}", big.join(", ")));
    Ok((ok, notes))
}

fn criterion_6() -> Outcome {
    let mut ok = true;
    let mut notes = vec![];
    let t = time_grid(350.0, 0.1)?;
    for alpha in [1.5, 2.5] {
        let p = ModelParams::new(1.0, 50.0, alpha, 512)?;
        let l2 = lambda2_field(&p, &[1, 2, 3, 4], &t, false)?;
        for order in [0.5, 1.0, 2.0] {
            let s = renyi_from_lambda(order, &l2)?;
            let last = s.row(t.len() - 1).to_vec();
            let good = last.iter().all(|v| (0.62..=0.70).contains(v));
            ok &= good;
            let vals: Vec<String> = last.iter().map(|v| format!("{v:.4}")).collect();
            notes.push(format!("α = {alpha}, n = {order}: S(R = 1..4, t_max) = [{}] {}", vals.join(", "), mark(good)));
        }
    }
    Ok((ok, notes))
}

fn slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

fn log_lambda2(field: &Field64, keep: impl Fn(f64, usize, f64) -> bool) -> Vec<(f64, f64)> {
    let mut out = vec![];
    for (it, &t) in field.t_grid.iter().enumerate() {
        for (ir, &r) in field.r_grid.iter().enumerate() {
            let v = field.values[[it, ir]];
            if v > 0.0 && keep(t, r, v) {
                out.push(((t / r as f64).ln(), v.ln()));
            }
        }
    }
    out
}

fn criterion_7() -> Outcome {
    let p = ModelParams::new(1.0, 50.0, 1.5, 512)?;
    let t = time_grid(350.0, 0.1)?;
    let r: Vec<usize> = (20..=100).collect();
    let l2 = lambda2_field(&p, &r, &t, false)?;
    let s = slope(&log_lambda2(&l2, |t, _, _| t >= 100.0));
    let good = (s / 2.0 - 1.0).abs() <= 0.15;
    let range = l2.values.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &v| (lo.min(v), hi.max(v)));

    let big = ModelParams::new(1.0, 50.0, 1.5, 8192)?;
    let far: Vec<usize> = (200..=2000).step_by(50).collect();
    let l2_far = lambda2_field(&big, &far, &time_grid(350.0, 1.0)?, false)?;
    let s_far = slope(&log_lambda2(&l2_far, |t, _, v| t >= 10.0 && v < 1e-2));
    Ok((
        good,
        vec![
            format!("slope in t ∈ [100, 350], R ∈ [20, 100]: {s:.3} (target 2 ± 15%) {}", mark(good)),
            format!("λ₂ over that window spans [{:.3}, {:.3}], near its saturation value 1/2", range.0, range.1),
            format!("diagnostic: slope where λ₂ < 1e-2 (N = 8192, R ∈ [200, 2000]) is {s_far:.3}"),
        ],
    ))
}

fn criterion_8() -> Outcome {
    let times: Vec<f64> = (1..=20).map(|i| 0.1 * i as f64).collect();
    let seps: Vec<usize> = (1..=6).collect();
    let g = compare_global(1.7, 12, (1.0, 50.0), (1.0, 45.0), &times, &seps)?;
    let gx_ok = g.gx_rel_err <= 0.05;
    let gz_ok = g.gz_rel_err <= 0.10;
    let p = ModelParams::new(1.0, 50.0, 1.7, 12)?;
    let local_times: Vec<f64> = (1..=20).map(|i| 0.25 * i as f64).collect();
    let l = compare_local(&p, &local_times, &seps)?;
    let l3_ok = l.lambda3_max < 1e-3;
    let s_ok = l.s1_max_diff < 0.05;
    let weak = compare_global(1.7, 12, (0.03, 50.0), (0.03, 45.0), &times, &seps)?;
    Ok((
        gx_ok && gz_ok && l3_ok && s_ok,
        vec![
            format!("global, N = 12, h 50 → 45, t ≤ 2: G_x rel. error {:.4} {}, G_z rel. error {:.4} {}", g.gx_rel_err, mark(gx_ok), g.gz_rel_err, mark(gz_ok)),
            format!("local, t ≤ 5: max λ₃ = {:.2e} {}, max |ΔS₁| = {:.4} {}", l.lambda3_max, mark(l3_ok), l.s1_max_diff, mark(s_ok)),
            format!("diagnostic: at J = 0.03 the global errors are G_x {:.4}, G_z {:.4}", weak.gx_rel_err, weak.gz_rel_err),
        ],
    ))
}

fn criterion_9() -> Outcome {
    let mut ok = true;
    let mut notes = vec![];
    for (name, check) in common::CHECKS {
        let rng = TestRng::deterministic_rng(RngAlgorithm::ChaCha);
        let mut runner = TestRunner::new_with_rng(Config { cases: 50, failure_persistence: None, ..Config::default() }, rng);
        let result = runner.run(&common::draws(), |d| check(&d).map_err(proptest::test_runner::TestCaseError::fail));
        let good = result.is_ok();
        ok &= good;
        notes.push(match result {
            Ok(()) => format!("{name}: 50 draws {}", mark(true)),
            Err(e) => format!("{name}: {e} {}", mark(false)),
        });
    }
    match common::polarized_ground_state(1.7, 10) {
        Ok(overlap) => {
            let good = overlap > 0.999;
            ok &= good;
            notes.push(format!("ED ground state overlap with all-up at h/J = 50: {overlap:.6} {}", mark(good)));
        }
        Err(e) => {
            ok = false;
            notes.push(format!("ED ground state failed: {e}"));
        }
    }
    Ok((ok, notes))
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "MISS"
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "none".into(), |v| format!("{v:.3}"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("global quench, quasi-local exponents", criterion_1),
        ("global quench, local-regime velocities", criterion_2),
        ("local quench, spin edge and maxima", criterion_3),
        ("local quench, local regime", criterion_4),
        ("entanglement edge is ballistic", criterion_5),
        ("entropy saturates near log 2", criterion_6),
        ("λ₂ asymptotic scaling", criterion_7),
        ("exact-diagonalization oracle", criterion_8),
        ("invariant suite", criterion_9),
    ];
    let mut failed = 0;
    let mut errored = false;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        match run() {
            Ok((ok, notes)) => {
                failed += usize::from(!ok);
                println!("criterion {}: {} {name} ({:.1}s)", i + 1, if ok { "PASS" } else { "FAIL" }, start.elapsed().as_secs_f64());
                for note in notes {
                    println!("    {note}");
                }
            }
            Err(e) => {
                errored = true;
                println!("criterion {}: FAIL {name}: error {e}", i + 1);
            }
        }
    }
    println!("acceptance: {} of 9 criteria pass", 9 - failed - usize::from(errored));
    let strict = std::env::var("LRTI_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    if errored || (strict && failed > 0) {
        std::process::exit(1);
    }
}
