use num_complex::Complex64;
use rayon::prelude::*;

use super::EdState;
use crate::error::{Error, Result};
use crate::model::{Boundary, ModelParams};

/// Largest chain the oracle accepts.
pub const MAX_SITES: usize = 14;

/// Parameters of `H = Σ_{R<R'} J / d^α σ^x_R σ^x_{R'} - h Σ_R σ^z_R`.
///
/// Unlike [`ModelParams`] any `2 <= N <= 14` is allowed; `d` is the
/// minimal-image distance on periodic chains.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdModel {
    pub j: f64,
    pub h: f64,
    pub alpha: f64,
    pub n: usize,
    pub boundary: Boundary,
}

impl EdModel {
    pub fn new(j: f64, h: f64, alpha: f64, n: usize, boundary: Boundary) -> Result<Self> {
        if n > MAX_SITES {
            return Err(Error::SizeLimit { n, max: MAX_SITES });
        }
        if n < 2 {
            return Err(Error::invalid("N", format!("need at least 2 sites, got {n}")));
        }
        if !(j.is_finite() && j >= 0.0 && h.is_finite() && h >= 0.0) {
            return Err(Error::invalid("J/h", "couplings must be finite and non-negative"));
        }
        if !(alpha.is_finite() && alpha > 1.0) {
            return Err(Error::invalid("alpha", format!("must exceed 1, got {alpha}")));
        }
        Ok(EdModel { j, h, alpha, n, boundary })
    }

    pub fn from_params(p: &ModelParams<f64>) -> Result<Self> {
        EdModel::new(p.j, p.h, p.alpha, p.n, p.boundary)
    }

    /// Coupling between sites `a` and `b`.
    pub fn coupling(&self, a: usize, b: usize) -> f64 {
        let mut d = a.abs_diff(b);
        if self.boundary == Boundary::Periodic {
            d = d.min(self.n - d);
        }
        self.j / (d as f64).powf(self.alpha)
    }
}

/// Matrix-free Hamiltonian: a diagonal field term plus one bit-flip pair
/// per bond.
#[derive(Debug, Clone)]
pub struct Hamiltonian {
    pub model: EdModel,
    diag: Vec<f64>,
    bonds: Vec<(usize, f64)>,
}

impl Hamiltonian {
    pub fn new(model: EdModel) -> Self {
        let n = model.n;
        let diag = (0..1usize << n).map(|s| -model.h * (n as f64 - 2.0 * s.count_ones() as f64)).collect();
        let mut bonds = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                let amp = model.coupling(a, b);
                if amp != 0.0 {
                    bonds.push(((1 << a) | (1 << b), amp));
                }
            }
        }
        Hamiltonian { model, diag, bonds }
    }

    pub fn build(params: &ModelParams<f64>) -> Result<Self> {
        Ok(Hamiltonian::new(EdModel::from_params(params)?))
    }

    pub fn n(&self) -> usize {
        self.model.n
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// `out = H v`.
    pub fn apply(&self, v: &[Complex64], out: &mut [Complex64]) {
        out.par_iter_mut().with_min_len(256).enumerate().for_each(|(s, o)| {
            let mut acc = v[s] * self.diag[s];
            for &(mask, amp) in &self.bonds {
                acc += v[s ^ mask] * amp;
            }
            *o = acc;
        });
    }

    /// Real version of [`Hamiltonian::apply`]; `H` has real entries.
    pub fn apply_real(&self, v: &[f64], out: &mut [f64]) {
        out.par_iter_mut().with_min_len(256).enumerate().for_each(|(s, o)| {
            let mut acc = v[s] * self.diag[s];
            for &(mask, amp) in &self.bonds {
                acc += v[s ^ mask] * amp;
            }
            *o = acc;
        });
    }

    pub fn to_dense(&self) -> nalgebra::DMatrix<f64> {
        let dim = self.dim();
        let mut m = nalgebra::DMatrix::zeros(dim, dim);
        for s in 0..dim {
            m[(s, s)] = self.diag[s];
            for &(mask, amp) in &self.bonds {
                m[(s ^ mask, s)] += amp;
            }
        }
        m
    }

    pub fn energy(&self, state: &EdState) -> f64 {
        let mut hv = vec![Complex64::new(0.0, 0.0); self.dim()];
        self.apply(&state.amplitudes, &mut hv);
        state.amplitudes.iter().zip(&hv).map(|(a, b)| (a.conj() * b).re).sum()
    }
}
