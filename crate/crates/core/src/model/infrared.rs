use rayon::prelude::*;
use serde::Serialize;

use super::kernel::kernel_palpha;
use super::params::{KernelMode, ModelParams, Regime};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::special::riemann_zeta;

/// Small-`k` description of the quasi-local spectrum,
/// `P_α(k) ≈ P_α(0) + P'_α |k|^z` with `z = α - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InfraredExpansion<T> {
    /// Gap `2 sqrt(h [h + J P_α(0)])`.
    pub delta: T,
    /// `sqrt(h / [h + J P_α(0)]) J |P'_α|`.
    pub c: T,
    pub z: T,
    pub p0: T,
    pub p_prime: T,
    /// Amplitude exponent of the observable; zero for `G_x`.
    pub nu: T,
    pub a_z: T,
    pub gamma: T,
    pub chi: T,
    pub kappa: T,
    pub xi_z: T,
}

const FIT_POINTS: usize = 50;
const FIT_K_MIN: f64 = 1e-4;
const FIT_K_MAX: f64 = 1e-2;
const MAX_RESIDUAL: f64 = 1e-2;

/// Infrared parameters of the thermodynamic-limit kernel.
///
/// `P'_α` is the least-squares slope of `P_α(k) - P_α(0)` against
/// `k^{α-1}` over 50 log-spaced momenta in `[1e-4, 1e-2]`; the fit goes
/// through the origin. The kernel mode in `params` is ignored.
pub fn infrared_expansion<T: Real>(params: &ModelParams<T>) -> Result<InfraredExpansion<T>> {
    params.validate()?;
    let alpha = params.alpha;
    let (one, two) = (T::one(), T::lit(2.0));
    if Regime::of(alpha) != Regime::QuasiLocal {
        return Err(Error::RegimeViolation { alpha: alpha.to_f64_lossy() });
    }
    let z = alpha - one;
    let p0 = two * riemann_zeta(alpha)?;

    let ks: Vec<T> = (0..FIT_POINTS)
        .map(|i| {
            let frac = i as f64 / (FIT_POINTS - 1) as f64;
            T::lit(FIT_K_MIN * (FIT_K_MAX / FIT_K_MIN).powf(frac))
        })
        .collect();
    let ys: Vec<T> = ks
        .par_iter()
        .map(|&k| kernel_palpha(k, alpha, KernelMode::InfiniteChain, 0).map(|p| p - p0))
        .collect::<Result<_>>()?;
    let xs: Vec<T> = ks.iter().map(|&k| k.powf(z)).collect();
    let sxx: T = xs.iter().map(|&x| x * x).sum();
    let sxy: T = xs.iter().zip(&ys).map(|(&x, &y)| x * y).sum();
    let p_prime = sxy / sxx;
    let ss_res: T = xs.iter().zip(&ys).map(|(&x, &y)| (y - p_prime * x).powi(2)).sum();
    let ss_tot: T = ys.iter().map(|&y| y * y).sum();
    let residual = (ss_res / ss_tot).sqrt();
    if !(residual <= T::lit(MAX_RESIDUAL)) {
        return Err(Error::RegressionIllConditioned { residual: residual.to_f64_lossy() });
    }

    let (j, h) = (params.j, params.h);
    let e2 = h * (h + j * p0);
    if !(e2 > T::zero()) {
        return Err(Error::StabilityViolation { k: 0.0, value: e2.to_f64_lossy() });
    }
    let delta = two * e2.sqrt();
    let c = (h / (h + j * p0)).sqrt() * j * p_prime.abs();
    let nu = T::zero();
    let half = T::lit(0.5);
    let a_z = two * c * (two * c * z).powf(z / (one - z)) * (one - z);
    let gamma = (nu + half) / (one - z);
    let chi = (nu + (two - z) / two) / (one - z);
    let kappa = (alpha - T::lit(3.0)) / (alpha - two);
    let xi_z = (c * z).powf(one / (one - z)) * (one + c.powf(z + one) * z.powf(z));
    Ok(InfraredExpansion { delta, c, z, p0, p_prime, nu, a_z, gamma, chi, kappa, xi_z })
}
