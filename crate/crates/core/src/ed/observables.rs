use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{norm, EdState};
use crate::error::{Error, Result};

/// Single-site magnetization and connected two-point functions, in spin
/// units `S = σ/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct EdObservables {
    /// `⟨S^z_r⟩` for every site.
    pub sz: Vec<f64>,
    /// Connected `⟨S^x_a S^x_{a+R}⟩` averaged over `a` (indices mod `N`),
    /// `R = 0..=N/2`.
    pub gx0: Vec<f64>,
    /// Connected `⟨S^z_a S^z_{a+R}⟩`, same convention.
    pub gz0: Vec<f64>,
}

fn bit(s: usize, r: usize) -> f64 {
    if s >> r & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `⟨S^x_a⟩`.
pub fn sx(state: &EdState, a: usize) -> f64 {
    let m = 1 << a;
    0.5 * state.amplitudes.iter().enumerate().map(|(s, x)| (x.conj() * state.amplitudes[s ^ m]).re).sum::<f64>()
}

/// `⟨S^z_a⟩`.
pub fn sz(state: &EdState, a: usize) -> f64 {
    0.5 * state.amplitudes.iter().enumerate().map(|(s, x)| x.norm_sqr() * bit(s, a)).sum::<f64>()
}

/// `⟨S^x_a S^x_b⟩`.
pub fn sxsx(state: &EdState, a: usize, b: usize) -> f64 {
    if a == b {
        return 0.25;
    }
    let m = (1 << a) | (1 << b);
    0.25 * state.amplitudes.iter().enumerate().map(|(s, x)| (x.conj() * state.amplitudes[s ^ m]).re).sum::<f64>()
}

/// `⟨S^z_a S^z_b⟩`.
pub fn szsz(state: &EdState, a: usize, b: usize) -> f64 {
    0.25 * state.amplitudes.iter().enumerate().map(|(s, x)| x.norm_sqr() * bit(s, a) * bit(s, b)).sum::<f64>()
}

/// Translation-averaged observables; meaningful for periodic chains.
pub fn observables(state: &EdState) -> EdObservables {
    let n = state.n;
    let mz: Vec<f64> = (0..n).map(|a| sz(state, a)).collect();
    let mx: Vec<f64> = (0..n).map(|a| sx(state, a)).collect();
    let mut gx0 = vec![0.0; n / 2 + 1];
    let mut gz0 = vec![0.0; n / 2 + 1];
    for r in 0..=n / 2 {
        for a in 0..n {
            let b = (a + r) % n;
            gx0[r] += sxsx(state, a, b) - mx[a] * mx[b];
            gz0[r] += szsz(state, a, b) - mz[a] * mz[b];
        }
        gx0[r] /= n as f64;
        gz0[r] /= n as f64;
    }
    EdObservables { sz: mz, gx0, gz0 }
}

/// Applies `S^-` (up → down) at `site` and renormalizes.
pub fn local_quench_state(gs: &EdState, site: usize) -> Result<EdState> {
    if site >= gs.n {
        return Err(Error::invalid("site", format!("site {site} outside a chain of {}", gs.n)));
    }
    let m = 1 << site;
    let mut out = vec![Complex64::new(0.0, 0.0); gs.dim()];
    for (s, &x) in gs.amplitudes.iter().enumerate() {
        if s & m == 0 {
            out[s | m] = x;
        }
    }
    let nrm = norm(&out);
    if nrm < 1e-12 {
        return Err(Error::AnnihilatedState { norm: nrm });
    }
    EdState::from_amplitudes(gs.n, out)
}

/// Eigenvalues of `ρ_A = Tr_B |ψ⟩⟨ψ|`, sorted descending, `2^|A|` of them.
///
/// The partial trace is taken on the smaller side of the cut; the
/// spectrum is padded with zeros when that side is `B`.
pub fn block_spectrum(state: &EdState, block: &[usize]) -> Result<Vec<f64>> {
    let n = state.n;
    let mut in_a = vec![false; n];
    for &r in block {
        if r >= n || in_a[r] {
            return Err(Error::invalid("block", format!("sites must be distinct and below {n}")));
        }
        in_a[r] = true;
    }
    let a_sites: Vec<usize> = block.to_vec();
    let b_sites: Vec<usize> = (0..n).filter(|&r| !in_a[r]).collect();
    let (da, db) = (1usize << a_sites.len(), 1usize << b_sites.len());
    let pack = |s: usize, sites: &[usize]| sites.iter().enumerate().fold(0usize, |acc, (i, &r)| acc | ((s >> r & 1) << i));
    let mut m = DMatrix::<Complex64>::zeros(da, db);
    for (s, &x) in state.amplitudes.iter().enumerate() {
        m[(pack(s, &a_sites), pack(s, &b_sites))] = x;
    }
    let rho = if da <= db { &m * m.adjoint() } else { m.adjoint() * &m };
    let mut values: Vec<f64> = rho.symmetric_eigen().eigenvalues.iter().copied().collect();
    values.resize(da, 0.0);
    values.sort_by(|x, y| y.total_cmp(x));
    Ok(values)
}
