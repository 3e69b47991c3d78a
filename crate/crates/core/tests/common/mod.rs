//! Checks shared by the property tests and the acceptance report.
#![allow(dead_code)]

use std::f64::consts::{LN_2, PI};

use lrti::ed::{ground_state, EdModel, Hamiltonian};
use lrti::{
    build_dispersion, edge_points, fit_power_law, gx_field, gz_field, kernel_palpha, lambda2_field,
    magnetization_field, renyi_entropy, time_grid, weight_fk, Boundary, EdgePoint, EntanglementSpectrum, GlobalQuench,
    KernelMode, ModelParams, QuenchPath, Window,
};
use proptest::prelude::*;

/// One randomized parameter set.
#[derive(Debug, Clone, Copy)]
pub struct Draw {
    pub alpha: f64,
    pub j: f64,
    pub j_pre: f64,
    pub h: f64,
    pub h_pre: f64,
    pub n: usize,
    pub k_frac: f64,
    pub fit_a: f64,
    pub fit_beta: f64,
}

/// `h ≥ 2.5 > 2 max|J| · |P(π)|/2` keeps every draw in the polarized phase.
pub fn draws() -> impl Strategy<Value = Draw> {
    (1.1f64..4.0, 0.2f64..1.0, 0.0f64..1.0, 2.5f64..20.0, 2.5f64..20.0, 8usize..=96, 0.0f64..1.0, 0.1f64..10.0, 0.5f64..2.5)
        .prop_map(|(alpha, j, j_pre, h, h_pre, half, k_frac, fit_a, fit_beta)| Draw {
            alpha,
            j,
            j_pre,
            h,
            h_pre,
            n: 2 * half,
            k_frac,
            fit_a,
            fit_beta,
        })
}

pub type Check = fn(&Draw) -> Result<(), String>;

pub const CHECKS: &[(&str, Check)] = &[
    ("bogoliubov normalization", bogoliubov),
    ("ring vs infinite kernel", ring_converges),
    ("fields vanish at t = 0", fields_vanish_at_zero),
    ("fast transform vs k-sum", fast_transform),
    ("Parseval conservation", parseval),
    ("λ₁ + λ₂ = 1, S_n ∈ [0, log 2]", entanglement_bounds),
    ("Rényi n → 1 limit", renyi_limit),
    ("noiseless fit exact", noiseless_fit),
    ("ε-monotone arrivals", epsilon_monotone),
];

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn params(d: &Draw) -> ModelParams<f64> {
    ModelParams::new(d.j, d.h, d.alpha, d.n).unwrap()
}

pub fn bogoliubov(d: &Draw) -> Result<(), String> {
    let p = params(d);
    let t = build_dispersion(&p).map_err(|e| e.to_string())?;
    for i in 0..t.len() {
        let norm = t.u[i] * t.u[i] - t.v[i] * t.v[i] - 1.0;
        ensure(norm.abs() < 1e-12, || format!("u² - v² - 1 = {norm:e} at k = {}", t.k[i]))?;
        let closed = 2.0 * (d.h * (d.h + d.j * t.p_alpha[i])).sqrt();
        let rel = (t.energy[i] - closed).abs() / closed;
        ensure(rel < 1e-12, || format!("energy mismatch {rel:e} at k = {}", t.k[i]))?;
    }
    Ok(())
}

/// The minimal-image ring drops `Σ_{d > N/2} 2 cos(kd)/d^α`, which the
/// Abel bound caps at `2 (N/2)^{-α} / sin(k/2)`; below `α ≈ 1.7` that
/// exceeds `1e-4` near `k = 2π/512`, so the flat tolerance applies above.
pub fn ring_converges(d: &Draw) -> Result<(), String> {
    let alpha = 1.3 + (d.alpha - 1.1) * (4.0 - 1.3) / 2.9;
    let k_min = 2.0 * PI / 512.0;
    let k = k_min + d.k_frac * (PI - k_min);
    let ring = kernel_palpha(k, alpha, KernelMode::FiniteRing, 8192).map_err(|e| e.to_string())?;
    let inf = kernel_palpha(k, alpha, KernelMode::InfiniteChain, 8192).map_err(|e| e.to_string())?;
    let diff = (ring - inf).abs();
    let tail = 2.0 * 4096f64.powf(-alpha) / (k / 2.0).sin();
    let tol = if alpha >= 1.7 { 1e-4f64.min(tail) } else { tail };
    ensure(diff <= tol, || format!("|P_ring - P_inf| = {diff:e} > {tol:e} at α = {alpha}, k = {k}"))
}

fn quench(d: &Draw) -> GlobalQuench<f64> {
    GlobalQuench::new(d.alpha, d.n, (d.j_pre, d.h_pre), (d.j, d.h), QuenchPath::GenericBogoliubov).unwrap()
}

pub fn fields_vanish_at_zero(d: &Draw) -> Result<(), String> {
    let q = quench(d);
    let r: Vec<usize> = (0..=d.n / 2).collect();
    let t = [0.0, 0.5];
    let gx = gx_field(&q, &r, &t).map_err(|e| e.to_string())?;
    let gz = gz_field(&q, &r, &t).map_err(|e| e.to_string())?;
    ensure(gx.row(0).iter().chain(gz.row(0).iter()).all(|&v| v == 0.0), || "nonzero field at t = 0".into())
}

pub fn fast_transform(d: &Draw) -> Result<(), String> {
    let q = GlobalQuench::new(d.alpha, d.n, (d.j_pre, d.h), (d.j, d.h), QuenchPath::PaperJQuench).unwrap();
    let table = build_dispersion(&q.post()).map_err(|e| e.to_string())?;
    let f: Vec<f64> = table.k.iter().map(|&k| weight_fk(k, &q).unwrap()).collect();
    let r: Vec<usize> = (0..=d.n / 2).collect();
    let t = [0.0, 0.7, 3.1, 11.0];
    let gx = gx_field(&q, &r, &t).map_err(|e| e.to_string())?;
    let nf = d.n as f64;
    for (it, &tt) in t.iter().enumerate() {
        for (ir, &rr) in r.iter().enumerate() {
            let brute: f64 = (0..d.n)
                .map(|i| f[i] * (table.k[i] * rr as f64).cos() * (1.0 - (2.0 * table.energy[i] * tt).cos()))
                .sum::<f64>()
                / nf;
            let diff = (brute - gx.values[[it, ir]]).abs();
            ensure(diff < 1e-10, || format!("|FFT - brute| = {diff:e} at R = {rr}, t = {tt}"))?;
        }
    }
    Ok(())
}

pub fn parseval(d: &Draw) -> Result<(), String> {
    let p = params(d);
    let half = d.n / 2;
    let r: Vec<usize> = (0..=half).collect();
    let t = time_grid(20.0, 2.5).unwrap();
    let m = magnetization_field(&p, &r, &t).map_err(|e| e.to_string())?;
    let total = |it: usize| -> f64 {
        let row = m.row(it);
        row[0] + row[half] + 2.0 * (1..half).map(|i| row[i]).sum::<f64>()
    };
    let t0 = total(0);
    for it in 1..t.len() {
        let drift = (total(it) - t0).abs();
        ensure(drift < 1e-10, || format!("excitation number drifts by {drift:e} at t = {}", t[it]))?;
    }
    Ok(())
}

pub fn entanglement_bounds(d: &Draw) -> Result<(), String> {
    let p = params(d);
    let r: Vec<usize> = (1..=d.n / 2).collect();
    let t = time_grid(30.0, 1.5).unwrap();
    let l2 = lambda2_field(&p, &r, &t, false).map_err(|e| e.to_string())?;
    for &l in l2.values.iter() {
        let spec = EntanglementSpectrum::new(l, 1, &[0.5, 1.0, 2.0, 3.0]).map_err(|e| e.to_string())?;
        ensure((spec.lambda1 + spec.lambda2 - 1.0).abs() < 1e-14, || format!("λ₁ + λ₂ = {}", spec.lambda1 + spec.lambda2))?;
        for (n, s) in spec.renyi {
            ensure((-1e-14..=LN_2 + 1e-14).contains(&s), || format!("S_{n} = {s} outside [0, log 2]"))?;
        }
    }
    Ok(())
}

pub fn renyi_limit(d: &Draw) -> Result<(), String> {
    let l = 0.5 * d.k_frac;
    let s1 = renyi_entropy(1.0, l).unwrap();
    for n in [1.0 - 1e-6, 1.0 + 1e-6] {
        let sn = renyi_entropy(n, l).unwrap();
        ensure((sn - s1).abs() < 1e-6, || format!("S_{n} = {sn} vs S_1 = {s1} at λ₂ = {l}"))?;
    }
    Ok(())
}

pub fn noiseless_fit(d: &Draw) -> Result<(), String> {
    let pts: Vec<EdgePoint<f64>> =
        (1..=60).map(|r| EdgePoint { r: r as f64, t: d.fit_a * (r as f64).powf(d.fit_beta) }).collect();
    let fit = fit_power_law(&pts, Window::all()).map_err(|e| e.to_string())?;
    ensure((fit.beta - d.fit_beta).abs() < 1e-12, || format!("β = {} vs {}", fit.beta, d.fit_beta))?;
    ensure((fit.a - d.fit_a).abs() < 1e-12 * d.fit_a, || format!("a = {} vs {}", fit.a, d.fit_a))
}

pub fn epsilon_monotone(d: &Draw) -> Result<(), String> {
    let q = quench(d);
    let r: Vec<usize> = (1..=d.n / 2).collect();
    let t = time_grid(40.0, 0.1).unwrap();
    let gx = gx_field(&q, &r, &t).map_err(|e| e.to_string())?;
    let eps = [0.02, 0.05, 0.1, 0.2, 0.4];
    let arrivals: Vec<Vec<EdgePoint<f64>>> = eps.iter().map(|&e| edge_points(&gx, e).unwrap_or_default()).collect();
    for w in arrivals.windows(2) {
        for hi in &w[1] {
            if let Some(lo) = w[0].iter().find(|p| p.r == hi.r) {
                ensure(hi.t >= lo.t, || format!("arrival at R = {} moves earlier: {} < {}", hi.r, hi.t, lo.t))?;
            } else {
                return Err(format!("R = {} crosses a larger threshold but not a smaller one", hi.r));
            }
        }
    }
    Ok(())
}

/// Ground state of a strongly polarized chain is close to all-up.
pub fn polarized_ground_state(alpha: f64, n: usize) -> Result<f64, String> {
    let h = Hamiltonian::new(EdModel::new(1.0, 50.0, alpha, n, Boundary::Periodic).map_err(|e| e.to_string())?);
    let gs = ground_state(&h).map_err(|e| e.to_string())?;
    Ok(gs.state.amplitudes[0].norm_sqr())
}
