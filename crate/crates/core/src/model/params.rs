use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// How the long-range Fourier kernel is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelMode {
    /// Minimal-image sum over the `N`-site ring.
    FiniteRing,
    /// Thermodynamic-limit series `2 Σ_{r≥1} cos(kr) / r^α`.
    InfiniteChain,
}

/// Boundary condition; only the exact-diagonalization oracle reads it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    Periodic,
    Open,
}

/// Dynamical regime set by the interaction exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `1 < α < 2`: bounded energies, group velocity divergent at `k → 0`.
    QuasiLocal,
    /// `α ≥ 2`: bounded energies and velocities.
    Local,
}

impl KernelMode {
    pub fn as_str(self) -> &'static str {
        match self {
            KernelMode::FiniteRing => "finite_ring",
            KernelMode::InfiniteChain => "infinite_chain",
        }
    }
}

impl std::str::FromStr for KernelMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "finite_ring" => Ok(KernelMode::FiniteRing),
            "infinite_chain" => Ok(KernelMode::InfiniteChain),
            _ => Err(Error::invalid("kernel", format!("expected finite_ring or infinite_chain, got `{s}`"))),
        }
    }
}

impl Boundary {
    pub fn as_str(self) -> &'static str {
        match self {
            Boundary::Periodic => "periodic",
            Boundary::Open => "open",
        }
    }
}

impl std::str::FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "periodic" => Ok(Boundary::Periodic),
            "open" => Ok(Boundary::Open),
            _ => Err(Error::invalid("boundary", format!("expected periodic or open, got `{s}`"))),
        }
    }
}

impl Regime {
    pub fn of<T: Real>(alpha: T) -> Regime {
        if alpha < T::lit(2.0) {
            Regime::QuasiLocal
        } else {
            Regime::Local
        }
    }
}

/// Parameters of the long-range transverse Ising chain
///
/// ```text
/// H = Σ_{R<R'} J / |R - R'|^α σ^x_R σ^x_{R'} - h Σ_R σ^z_R
/// ```
///
/// whose linear spin-wave spectrum is `E_k = 2 sqrt(h [h + J P_α(k)])`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams<T> {
    /// Exchange coupling `J ≥ 0`.
    pub j: T,
    /// Transverse field `h ≥ 0`.
    pub h: T,
    /// Interaction exponent, `α > 1`.
    pub alpha: T,
    /// Number of sites, even and at least 4.
    pub n: usize,
    pub kernel: KernelMode,
    pub boundary: Boundary,
}

impl<T: Real> ModelParams<T> {
    /// Finite-ring kernel with periodic boundaries.
    pub fn new(j: T, h: T, alpha: T, n: usize) -> Result<Self> {
        let params = ModelParams {
            j,
            h,
            alpha,
            n,
            kernel: KernelMode::FiniteRing,
            boundary: Boundary::Periodic,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn with_kernel(mut self, kernel: KernelMode) -> Self {
        self.kernel = kernel;
        self
    }

    pub fn with_boundary(mut self, boundary: Boundary) -> Self {
        self.boundary = boundary;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.j.is_finite() && self.j >= T::zero()) {
            return Err(Error::invalid("J", format!("must be finite and non-negative, got {}", self.j)));
        }
        if !(self.h.is_finite() && self.h >= T::zero()) {
            return Err(Error::invalid("h", format!("must be finite and non-negative, got {}", self.h)));
        }
        if !self.alpha.is_finite() {
            return Err(Error::invalid("alpha", "must be finite"));
        }
        if self.alpha <= T::one() {
            return Err(Error::invalid(
                "alpha",
                format!("alpha = {} <= 1 lies in the instantaneous regime, which is not supported", self.alpha),
            ));
        }
        if self.n < 4 || self.n % 2 != 0 {
            return Err(Error::invalid("N", format!("must be even and >= 4, got {}", self.n)));
        }
        Ok(())
    }

    pub fn regime(&self) -> Regime {
        Regime::of(self.alpha)
    }

    /// Quasi-momenta `k_n = -π + 2πn/N`, `n = 0..N`.
    pub fn momenta(&self) -> Vec<T> {
        momentum_grid(self.n)
    }
}

/// Quasi-momentum grid `k_n = π (2n - N) / N`; the `k = 0` entry at
/// `n = N/2` is exactly zero.
pub fn momentum_grid<T: Real>(n: usize) -> Vec<T> {
    let nf = T::from_usize_lossy(n);
    (0..n)
        .map(|i| {
            let num = 2.0 * i as f64 - n as f64;
            T::PI() * T::lit(num) / nf
        })
        .collect()
}
