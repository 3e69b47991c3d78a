//! Exact dynamics of the spin chain for small `N`, used as an oracle for
//! the spin-wave formulas.
//!
//! States live in the `σ^z` product basis: bit `r` of a basis index is the
//! spin at site `r`, with 0 meaning up. Everything here is `f64`.

mod compare;
mod hamiltonian;
mod krylov;
mod observables;

pub use compare::{compare_global, compare_local, GlobalComparison, LocalComparison};
pub use hamiltonian::{EdModel, Hamiltonian, MAX_SITES};
pub use krylov::{ground_state, krylov_evolve, DenseSpectrum, Evolver, GroundState, DENSE_MAX_SITES};
pub use observables::{block_spectrum, local_quench_state, observables, EdObservables};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A normalized many-body state.
#[derive(Debug, Clone, PartialEq)]
pub struct EdState {
    pub n: usize,
    pub amplitudes: Vec<Complex64>,
}

impl EdState {
    /// Normalizes `amplitudes`, which must have length `2^n`.
    pub fn from_amplitudes(n: usize, mut amplitudes: Vec<Complex64>) -> Result<Self> {
        if n == 0 || n > MAX_SITES {
            return Err(Error::SizeLimit { n, max: MAX_SITES });
        }
        if amplitudes.len() != 1 << n {
            return Err(Error::invalid("amplitudes", format!("expected length 2^{n}, got {}", amplitudes.len())));
        }
        let norm = norm(&amplitudes);
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::invalid("amplitudes", "state has zero or non-finite norm"));
        }
        amplitudes.iter_mut().for_each(|a| *a /= norm);
        Ok(EdState { n, amplitudes })
    }

    /// Product state with the given basis index.
    pub fn basis(n: usize, index: usize) -> Result<Self> {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        *amps.get_mut(index).ok_or_else(|| Error::invalid("index", "outside the Hilbert space"))? = Complex64::new(1.0, 0.0);
        EdState::from_amplitudes(n, amps)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> f64 {
        norm(&self.amplitudes)
    }

    pub fn overlap(&self, other: &EdState) -> Complex64 {
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum()
    }
}

pub(crate) fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}
