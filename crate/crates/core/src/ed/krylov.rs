use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use super::hamiltonian::Hamiltonian;
use super::{norm, EdState};
use crate::error::{Error, Result};

/// Chains up to this size use a full eigendecomposition; larger ones use
/// Lanczos and Krylov propagation.
pub const DENSE_MAX_SITES: usize = 10;

const LANCZOS_MAX: usize = 400;
const LANCZOS_TOL: f64 = 1e-11;
const KRYLOV_DIM: usize = 30;
const KRYLOV_TOL: f64 = 1e-9;
const KRYLOV_MAX_STEPS: usize = 1_000_000;

#[derive(Debug, Clone)]
pub struct GroundState {
    pub energy: f64,
    pub state: EdState,
    pub iterations: usize,
    pub residual: f64,
}

/// Ground state by dense diagonalization (`N ≤ DENSE_MAX_SITES`) or by
/// Lanczos with full reorthogonalization.
pub fn ground_state(h: &Hamiltonian) -> Result<GroundState> {
    if h.n() <= DENSE_MAX_SITES {
        DenseSpectrum::new(h).ground_state()
    } else {
        lanczos_ground(h)
    }
}

/// Fixes the global phase: the largest component is real positive.
fn canonical_sign(v: &mut [f64]) {
    let pivot = v.iter().copied().fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
    if pivot < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

fn to_state(n: usize, v: &[f64]) -> Result<EdState> {
    EdState::from_amplitudes(n, v.iter().map(|&x| Complex64::new(x, 0.0)).collect())
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn tridiagonal(alpha: &[f64], beta: &[f64]) -> SymmetricEigen<f64, nalgebra::Dyn> {
    let m = alpha.len();
    let mut t = DMatrix::zeros(m, m);
    for i in 0..m {
        t[(i, i)] = alpha[i];
        if i + 1 < m {
            t[(i, i + 1)] = beta[i];
            t[(i + 1, i)] = beta[i];
        }
    }
    t.symmetric_eigen()
}

fn lanczos_ground(h: &Hamiltonian) -> Result<GroundState> {
    let dim = h.dim();
    // deterministic start vector with weight in every parity sector
    let mut v: Vec<f64> = (0..dim).map(|s| 1.0 + 0.5 * ((s as f64 + 1.0) * 0.754_877_666).fract()).collect();
    let nv = dot(&v, &v).sqrt();
    v.iter_mut().for_each(|x| *x /= nv);
    let mut basis: Vec<Vec<f64>> = vec![v];
    let (mut alpha, mut beta) = (Vec::new(), Vec::new());
    let mut w = vec![0.0; dim];
    let max_iter = LANCZOS_MAX.min(dim);
    let mut residual = f64::INFINITY;
    for j in 0..max_iter {
        h.apply_real(&basis[j], &mut w);
        let a = dot(&basis[j], &w);
        alpha.push(a);
        for _ in 0..2 {
            for b in &basis {
                let c = dot(b, &w);
                w.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
        }
        let b = dot(&w, &w).sqrt();
        let check = b < 1e-14 || j + 1 == max_iter || (j >= 10 && j % 5 == 0);
        if !check {
            beta.push(b);
            basis.push(w.iter().map(|x| x / b).collect());
            continue;
        }
        let eig = tridiagonal(&alpha, &beta);
        let imin = eig.eigenvalues.imin();
        let theta = eig.eigenvalues[imin];
        residual = b * eig.eigenvectors[(j, imin)].abs();
        let converged = residual < LANCZOS_TOL * theta.abs().max(1.0) || b < 1e-14;
        if converged || j + 1 == max_iter {
            if !converged && residual > 1e-8 * theta.abs().max(1.0) {
                return Err(Error::ConvergenceFailure { method: "lanczos", iterations: j + 1, residual });
            }
            let mut psi = vec![0.0; dim];
            for (i, bv) in basis.iter().enumerate() {
                let c = eig.eigenvectors[(i, imin)];
                psi.iter_mut().zip(bv).for_each(|(x, y)| *x += c * y);
            }
            canonical_sign(&mut psi);
            return Ok(GroundState { energy: theta, state: to_state(h.n(), &psi)?, iterations: j + 1, residual });
        }
        beta.push(b);
        basis.push(w.iter().map(|x| x / b).collect());
    }
    Err(Error::ConvergenceFailure { method: "lanczos", iterations: max_iter, residual })
}

/// Full eigendecomposition of `H`.
pub struct DenseSpectrum {
    pub energies: DVector<f64>,
    pub vectors: DMatrix<f64>,
    n: usize,
}

impl DenseSpectrum {
    pub fn new(h: &Hamiltonian) -> Self {
        let eig = h.to_dense().symmetric_eigen();
        DenseSpectrum { energies: eig.eigenvalues, vectors: eig.eigenvectors, n: h.n() }
    }

    pub fn ground_state(&self) -> Result<GroundState> {
        let imin = self.energies.imin();
        let mut psi: Vec<f64> = self.vectors.column(imin).iter().copied().collect();
        canonical_sign(&mut psi);
        Ok(GroundState { energy: self.energies[imin], state: to_state(self.n, &psi)?, iterations: 0, residual: 0.0 })
    }

    /// `e^{-iHt} ψ` from the spectral decomposition.
    pub fn evolve(&self, state: &EdState, t: f64) -> EdState {
        let re = DVector::from_iterator(state.dim(), state.amplitudes.iter().map(|a| a.re));
        let im = DVector::from_iterator(state.dim(), state.amplitudes.iter().map(|a| a.im));
        let (cr, ci) = (self.vectors.tr_mul(&re), self.vectors.tr_mul(&im));
        let mut rot_re = DVector::zeros(state.dim());
        let mut rot_im = DVector::zeros(state.dim());
        for i in 0..state.dim() {
            let c = Complex64::new(cr[i], ci[i]) * Complex64::from_polar(1.0, -self.energies[i] * t);
            rot_re[i] = c.re;
            rot_im[i] = c.im;
        }
        let (out_re, out_im) = (&self.vectors * rot_re, &self.vectors * rot_im);
        let amplitudes = out_re.iter().zip(out_im.iter()).map(|(&r, &i)| Complex64::new(r, i)).collect();
        EdState { n: state.n, amplitudes }
    }
}

/// Time evolution with the method matched to the chain size.
pub enum Evolver<'a> {
    Spectral(DenseSpectrum),
    Krylov(&'a Hamiltonian),
}

impl<'a> Evolver<'a> {
    pub fn new(h: &'a Hamiltonian) -> Self {
        if h.n() <= DENSE_MAX_SITES {
            Evolver::Spectral(DenseSpectrum::new(h))
        } else {
            Evolver::Krylov(h)
        }
    }

    pub fn evolve(&self, state: &EdState, t: f64) -> Result<EdState> {
        match self {
            Evolver::Spectral(s) => Ok(s.evolve(state, t)),
            Evolver::Krylov(h) => krylov_evolve(h, state, t, KRYLOV_TOL),
        }
    }
}

/// `e^{-iHt} ψ` by Lanczos propagation with adaptive steps.
///
/// Each step builds a Krylov space of dimension up to 30 and takes the
/// longest `τ` (halving from the remaining time) whose error estimate
/// `β_m |[e^{-iTτ} e₁]_m|` is below `tol`.
pub fn krylov_evolve(h: &Hamiltonian, state: &EdState, t: f64, tol: f64) -> Result<EdState> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::invalid("t", "evolution time must be finite and non-negative"));
    }
    let dim = h.dim();
    let zero = Complex64::new(0.0, 0.0);
    let mut psi = state.amplitudes.clone();
    let mut remaining = t;
    let mut steps = 0;
    let mut w = vec![zero; dim];
    while remaining > 0.0 {
        steps += 1;
        if steps > KRYLOV_MAX_STEPS {
            return Err(Error::ConvergenceFailure { method: "krylov", iterations: steps, residual: remaining });
        }
        let scale = norm(&psi);
        let mut basis: Vec<Vec<Complex64>> = vec![psi.iter().map(|a| a / scale).collect()];
        let (mut alpha, mut beta) = (Vec::new(), Vec::new());
        let mut tail = 0.0;
        for j in 0..KRYLOV_DIM.min(dim) {
            h.apply(&basis[j], &mut w);
            let a: f64 = basis[j].iter().zip(&w).map(|(x, y)| (x.conj() * y).re).sum();
            alpha.push(a);
            for _ in 0..2 {
                for b in &basis {
                    let c: Complex64 = b.iter().zip(&w).map(|(x, y)| x.conj() * y).sum();
                    w.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
                }
            }
            let b = norm(&w);
            if b < 1e-13 || j + 1 == KRYLOV_DIM.min(dim) {
                tail = if b < 1e-13 { 0.0 } else { b };
                break;
            }
            beta.push(b);
            basis.push(w.iter().map(|x| x / b).collect());
        }
        let m = alpha.len();
        let eig = tridiagonal(&alpha, &beta);
        let propagate = |tau: f64| -> Vec<Complex64> {
            (0..m)
                .map(|r| {
                    (0..m)
                        .map(|i| {
                            let q = eig.eigenvectors[(0, i)] * eig.eigenvectors[(r, i)];
                            Complex64::from_polar(q, -eig.eigenvalues[i] * tau)
                        })
                        .sum()
                })
                .collect()
        };
        let mut tau = remaining;
        let mut coeffs = propagate(tau);
        while tail * coeffs[m - 1].norm() > tol {
            tau *= 0.5;
            if tau < 1e-14 * t.max(1.0) {
                return Err(Error::ConvergenceFailure { method: "krylov", iterations: steps, residual: tail });
            }
            coeffs = propagate(tau);
        }
        psi.iter_mut().for_each(|x| *x = zero);
        for (c, b) in coeffs.iter().zip(&basis) {
            let c = c * scale;
            psi.iter_mut().zip(b).for_each(|(x, y)| *x += c * y);
        }
        remaining -= tau;
    }
    Ok(EdState { n: state.n, amplitudes: psi })
}
