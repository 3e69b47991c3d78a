use rayon::prelude::*;
use serde::Serialize;

use super::kernel::{kernel_derivatives, KernelDerivatives};
use super::params::{momentum_grid, ModelParams, Regime};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Spin-wave quantities on the quasi-momentum grid `k_n = -π + 2πn/N`.
///
/// `a` and `b` are the coefficients of the quadratic boson Hamiltonian
/// `Σ_k 𝒜_k a†_k a_k + ℬ_k (a_k a_{-k} + h.c.) / 2`, so that
/// `E_k = sqrt(𝒜_k² - ℬ_k²) = 2 sqrt(h [h + J P_α(k)])`.
#[derive(Debug, Clone, Serialize)]
pub struct DispersionTable<T> {
    pub params: ModelParams<T>,
    pub k: Vec<T>,
    pub p_alpha: Vec<T>,
    pub a: Vec<T>,
    pub b: Vec<T>,
    pub energy: Vec<T>,
    /// Group velocity `∂_k E_k`.
    pub vg: Vec<T>,
    /// `∂²_k E_k`, used by the stationary-phase evaluation.
    pub curvature: Vec<T>,
    /// Phase velocity `E_k / k`; `None` at `k = 0`.
    pub vphi: Vec<Option<T>>,
    pub u: Vec<T>,
    pub v: Vec<T>,
}

/// Spin-wave quantities at a single, not necessarily grid, momentum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumPoint<T> {
    pub k: T,
    pub p_alpha: T,
    pub energy: T,
    pub vg: T,
    pub curvature: T,
}

/// Location and value of the largest group velocity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GroupVelocityMax<T> {
    /// Negative for `J > 0`: `V_g` peaks on the `k < 0` half zone.
    pub k_star: T,
    pub vg_max: T,
    /// `E(k*) / k*`, negative alongside `k_star`.
    pub vphi_star: T,
}

impl<T: Real> DispersionTable<T> {
    pub fn len(&self) -> usize {
        self.k.len()
    }

    pub fn is_empty(&self) -> bool {
        self.k.is_empty()
    }

    /// Grid index of `k = 0`.
    pub fn zero_index(&self) -> usize {
        self.k.len() / 2
    }

    pub fn gap(&self) -> T {
        self.energy.iter().copied().fold(T::infinity(), T::min)
    }
}

/// Evaluates the spectrum at `k` for the given parameters.
pub fn spectrum_point<T: Real>(params: &ModelParams<T>, k: T) -> Result<SpectrumPoint<T>> {
    let d = kernel_derivatives(k, params.alpha, params.kernel, params.n)?;
    let point = assemble(params, k, d)?;
    Ok(SpectrumPoint { k, p_alpha: d.value, energy: point.energy, vg: point.vg, curvature: point.curvature })
}

struct Local<T> {
    energy: T,
    vg: T,
    curvature: T,
}

fn assemble<T: Real>(params: &ModelParams<T>, k: T, d: KernelDerivatives<T>) -> Result<Local<T>> {
    let (j, h) = (params.j, params.h);
    let two = T::lit(2.0);
    let e2 = h * (h + j * d.value);
    if e2 < T::zero() {
        return Err(Error::StabilityViolation { k: k.to_f64_lossy(), value: e2.to_f64_lossy() });
    }
    let energy = two * e2.sqrt();
    // E E' = 2hJP' and E'^2 + E E'' = 2hJP''
    let (vg, curvature) = if energy > T::zero() {
        let vg = two * h * j * d.first / energy;
        (vg, (two * h * j * d.second - vg * vg) / energy)
    } else {
        (T::zero(), T::zero())
    };
    Ok(Local { energy, vg, curvature })
}

/// Tabulates the spectrum, velocities and Bogoliubov coefficients.
///
/// Fails with `StabilityViolation` if `h (h + J P_α(k)) < 0` anywhere on
/// the grid; a vanishing gap only logs a warning.
pub fn build_dispersion<T: Real>(params: &ModelParams<T>) -> Result<DispersionTable<T>> {
    params.validate()?;
    let k: Vec<T> = momentum_grid(params.n);
    let derivs: Vec<KernelDerivatives<T>> = k
        .par_iter()
        .map(|&q| kernel_derivatives(q, params.alpha, params.kernel, params.n))
        .collect::<Result<_>>()?;

    let n = k.len();
    let two = T::lit(2.0);
    let mut table = DispersionTable {
        params: *params,
        k: k.clone(),
        p_alpha: Vec::with_capacity(n),
        a: Vec::with_capacity(n),
        b: Vec::with_capacity(n),
        energy: Vec::with_capacity(n),
        vg: Vec::with_capacity(n),
        curvature: Vec::with_capacity(n),
        vphi: Vec::with_capacity(n),
        u: Vec::with_capacity(n),
        v: Vec::with_capacity(n),
    };
    for (&q, d) in k.iter().zip(&derivs) {
        let local = assemble(params, q, *d)?;
        let b = params.j * d.value;
        let a = b + two * params.h;
        let ratio = if local.energy > T::zero() { a.abs() / local.energy } else { T::infinity() };
        let u = sign(a) * ((ratio + T::one()) / two).sqrt();
        let v = sign(b) * ((ratio - T::one()).max(T::zero()) / two).sqrt();
        table.p_alpha.push(d.value);
        table.a.push(a);
        table.b.push(b);
        table.energy.push(local.energy);
        table.vg.push(local.vg);
        table.curvature.push(local.curvature);
        table.vphi.push(if q == T::zero() { None } else { Some(local.energy / q) });
        table.u.push(u);
        table.v.push(v);
    }
    let gap = table.gap();
    if gap < T::lit(1e-12) {
        log::warn!("GapClosure: min_k E_k = {gap:e}; Bogoliubov coefficients are singular");
    }
    Ok(table)
}

fn sign<T: Real>(x: T) -> T {
    if x < T::zero() {
        -T::one()
    } else {
        T::one()
    }
}

/// Largest group velocity on the grid, refined by a three-point parabola.
///
/// Only defined in the local regime; for `α < 2` the velocity diverges
/// as `k → 0`.
pub fn max_group_velocity<T: Real>(table: &DispersionTable<T>) -> Result<GroupVelocityMax<T>> {
    let alpha = table.params.alpha;
    if Regime::of(alpha) != Regime::Local {
        return Err(Error::DivergentVelocity { alpha: alpha.to_f64_lossy() });
    }
    let n = table.len();
    let mut best = 0;
    for i in 1..n {
        if table.vg[i] > table.vg[best] {
            best = i;
        }
    }
    let f0 = table.vg[best];
    let fm = table.vg[(best + n - 1) % n];
    let fp = table.vg[(best + 1) % n];
    let dk = T::lit(2.0) * T::PI() / T::from_usize_lossy(n);
    let denom = fm - T::lit(2.0) * f0 + fp;
    let (k_star, vg_max) = if denom < T::zero() {
        let delta = ((fm - fp) / (T::lit(2.0) * denom)).max(-T::lit(0.5)).min(T::lit(0.5));
        (table.k[best] + delta * dk, f0 - (fm - fp) * delta / T::lit(4.0))
    } else {
        (table.k[best], f0)
    };
    let vphi_star = if k_star == T::zero() {
        T::zero()
    } else {
        spectrum_point(&table.params, k_star)?.energy / k_star
    };
    Ok(GroupVelocityMax { k_star, vg_max, vphi_star })
}
