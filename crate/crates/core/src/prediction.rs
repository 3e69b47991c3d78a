//! Propagation laws expected from the spin-wave analysis.

use serde::Serialize;

use crate::error::Result;
use crate::model::{build_dispersion, max_group_velocity, ModelParams, Regime};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QuenchKind {
    Global,
    Local,
}

/// Expected exponents `β` of `t ∼ R^β` and, in the local regime, front
/// velocities (magnitudes).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PredictionSet<T> {
    pub alpha: T,
    pub regime: Regime,
    pub quench: QuenchKind,
    /// Correlation edge (global) or spin edge (local).
    pub beta_edge: T,
    /// Exponent of the extrema ridges.
    pub beta_m: Option<T>,
    /// Competing ridge exponent where two derivations disagree.
    pub beta_m_alt: Option<T>,
    pub beta_ee: Option<T>,
    pub v_edge: Option<T>,
    pub v_m: Option<T>,
    /// True where the ridges are expected to cancel rather than propagate.
    pub maxima_cancel: bool,
}

/// Global quench with post-quench parameters `params`:
/// `β_CE = 3 - α`, `β_m = 1` for `α < 2`; ballistic with
/// `V_CE = 2 V_g(k*)`, `V_m = 2 |V_φ(k*)|` otherwise.
pub fn predict_global<T: Real>(params: &ModelParams<T>) -> Result<PredictionSet<T>> {
    params.validate()?;
    let alpha = params.alpha;
    let two = T::lit(2.0);
    let base = PredictionSet {
        alpha,
        regime: params.regime(),
        quench: QuenchKind::Global,
        beta_edge: T::lit(3.0) - alpha,
        beta_m: Some(T::one()),
        beta_m_alt: None,
        beta_ee: None,
        v_edge: None,
        v_m: None,
        maxima_cancel: false,
    };
    match params.regime() {
        Regime::QuasiLocal => Ok(base),
        Regime::Local => {
            let vmax = max_group_velocity(&build_dispersion(params)?)?;
            Ok(PredictionSet {
                beta_edge: T::one(),
                v_edge: Some(two * vmax.vg_max),
                v_m: Some(two * vmax.vphi_star.abs()),
                ..base
            })
        }
    }
}

/// Local spin flip: `β_SE = 3 - α` with ridge exponent `α - 1` (and the
/// alternative `2 - α`) for `α < 2`; a ballistic spin edge at
/// `V_SE = V_g(k*)` with cancelling maxima otherwise. `β_EE = 1` always.
pub fn predict_local<T: Real>(params: &ModelParams<T>) -> Result<PredictionSet<T>> {
    params.validate()?;
    let alpha = params.alpha;
    let base = PredictionSet {
        alpha,
        regime: params.regime(),
        quench: QuenchKind::Local,
        beta_edge: T::lit(3.0) - alpha,
        beta_m: Some(alpha - T::one()),
        beta_m_alt: Some(T::lit(2.0) - alpha),
        beta_ee: Some(T::one()),
        v_edge: None,
        v_m: None,
        maxima_cancel: false,
    };
    match params.regime() {
        Regime::QuasiLocal => Ok(base),
        Regime::Local => {
            let vmax = max_group_velocity(&build_dispersion(params)?)?;
            Ok(PredictionSet {
                beta_edge: T::one(),
                beta_m: None,
                beta_m_alt: None,
                v_edge: Some(vmax.vg_max),
                maxima_cancel: true,
                ..base
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quasi_local_exponents() {
        let p = ModelParams::new(1.0, 2.0, 1.7, 64).unwrap();
        let g = predict_global(&p).unwrap();
        assert!((g.beta_edge - 1.3f64).abs() < 1e-12);
        assert_eq!(g.beta_m, Some(1.0));
        let l = predict_local(&ModelParams::new(1.0, 50.0, 1.8, 64).unwrap()).unwrap();
        assert!((l.beta_edge - 1.2f64).abs() < 1e-12);
        assert_eq!(l.beta_ee, Some(1.0));
    }

    #[test]
    fn continuity_at_regime_boundary() {
        let g = predict_global(&ModelParams::new(1.0, 3.0, 2.0, 256).unwrap()).unwrap();
        assert_eq!(g.beta_edge, 1.0f64);
    }

    #[test]
    fn local_regime_velocities() {
        let p = ModelParams::<f64>::new(1.0, 2.0, 3.0, 512).unwrap();
        let g = predict_global(&p).unwrap();
        let (vce, vm) = (g.v_edge.unwrap(), g.v_m.unwrap());
        assert!(vce > 0.0 && vm > 0.0 && (vce - vm).abs() > 1e-3);
        let l = predict_local(&ModelParams { h: 50.0, ..p }).unwrap();
        let vmax = max_group_velocity(&build_dispersion(&ModelParams { h: 50.0, ..p }).unwrap()).unwrap();
        assert!((l.v_edge.unwrap() - vmax.vg_max).abs() < 1e-15);
        assert!(l.maxima_cancel);
    }
}
