//! Quench dynamics of the long-range transverse Ising chain
//!
//! `H = Σ_{R<R'} J/|R-R'|^α σ^x_R σ^x_{R'} - h Σ_R σ^z_R`
//!
//! in the `z`-polarized phase, treated with linear spin-wave theory, plus
//! the tools needed to read causal structure off the resulting space-time
//! fields and a small exact-diagonalization oracle to check them.
//!
//! Spin-wave code is generic over [`Real`] (`f32` or `f64`); the aliases at
//! the bottom of this file fix the scalar to `f64`. The exact solver in
//! [`ed`] is `f64` only.
//!
//! ```
//! use lrti::{build_dispersion, ModelParams};
//!
//! let p = ModelParams::<f64>::new(1.0, 2.0, 3.0, 256).unwrap();
//! let table = build_dispersion(&p).unwrap();
//! assert!(table.gap() > 0.0);
//! ```

pub mod ed;
pub mod edge;
pub mod error;
pub mod field;
pub mod fourier;
pub mod model;
pub mod prediction;
pub mod quench_global;
pub mod quench_local;
pub mod scalar;
pub mod special;

pub use edge::{
    destagger, edge_points, epsilon_range, epsilon_scan, extrema_ridges, extrema_ridges_with, fit_edge, fit_linear,
    fit_power_law, Destaggered, EdgeFit, EdgePoint, EpsilonScan, LinearFit, Ridge, RidgeOptions, RidgeSet, Window,
};
pub use error::{Error, ErrorCategory, Result};
pub use field::{time_grid, Observable, SpaceTimeField};
pub use model::{
    build_dispersion, infrared_expansion, kernel_derivatives, kernel_palpha, max_group_velocity, momentum_grid,
    spectrum_point, Boundary, DispersionTable, GroupVelocityMax, InfraredExpansion, KernelMode, ModelParams, Regime,
};
pub use prediction::{predict_global, predict_local, PredictionSet, QuenchKind};
pub use quench_global::{
    gx_field, gx_stationary_phase, gz_field, revival_time, weight_fk, GlobalQuench, QuenchPath, StationaryPhase,
};
pub use quench_local::{
    lambda2_asymptotic, lambda2_field, magnetization_field, magnetization_field_with, renyi_entropy, renyi_field,
    renyi_from_lambda, renyi_of_spectrum, EntanglementSpectrum, Lambda2Asymptotic, LocalQuenchState, MagnetizationTerms,
};
pub use scalar::Real;
pub use special::{hurwitz_zeta, riemann_zeta};

pub type ModelParams64 = ModelParams<f64>;
pub type DispersionTable64 = DispersionTable<f64>;
pub type InfraredExpansion64 = InfraredExpansion<f64>;
pub type GlobalQuench64 = GlobalQuench<f64>;
pub type Field64 = SpaceTimeField<f64>;
pub type EdgeFit64 = EdgeFit<f64>;
pub type PredictionSet64 = PredictionSet<f64>;

pub type ModelParams32 = ModelParams<f32>;
pub type DispersionTable32 = DispersionTable<f32>;
pub type Field32 = SpaceTimeField<f32>;
