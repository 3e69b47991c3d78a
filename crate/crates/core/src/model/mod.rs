//! Model definition, long-range Fourier kernel, spin-wave dispersion and
//! its infrared expansion.

mod dispersion;
mod infrared;
mod kernel;
mod params;

pub use dispersion::{build_dispersion, max_group_velocity, spectrum_point, DispersionTable, GroupVelocityMax, SpectrumPoint};
pub use infrared::{infrared_expansion, InfraredExpansion};
pub use kernel::{kernel_derivatives, kernel_palpha, KernelDerivatives};
pub use params::{momentum_grid, Boundary, KernelMode, ModelParams, Regime};
