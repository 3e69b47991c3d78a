//! Side-by-side exact and spin-wave dynamics on the same periodic ring.

use super::hamiltonian::{EdModel, Hamiltonian};
use super::krylov::{ground_state, Evolver};
use super::observables::{block_spectrum, local_quench_state, observables};
use crate::error::{Error, Result};
use crate::model::{Boundary, ModelParams};
use crate::quench_global::{gx_field, gz_field, GlobalQuench, QuenchPath};
use crate::quench_local::{lambda2_field, renyi_entropy, renyi_of_spectrum};

/// Connected correlators from both methods, indexed `[time][separation]`.
#[derive(Debug, Clone)]
pub struct GlobalComparison {
    pub times: Vec<f64>,
    pub separations: Vec<usize>,
    pub gx_ed: Vec<Vec<f64>>,
    pub gx_lswt: Vec<Vec<f64>>,
    pub gz_ed: Vec<Vec<f64>>,
    pub gz_lswt: Vec<Vec<f64>>,
    /// `max |ED - LSWT| / max |ED|` over the whole table.
    pub gx_rel_err: f64,
    pub gz_rel_err: f64,
}

fn relative_sup(ed: &[Vec<f64>], other: &[Vec<f64>]) -> f64 {
    let scale = ed.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    let diff = ed.iter().flatten().zip(other.iter().flatten()).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    diff / scale
}

fn check_times(times: &[f64]) -> Result<()> {
    if times.is_empty() || times.windows(2).any(|w| !(w[0] < w[1])) || !(times[0] >= 0.0) {
        return Err(Error::invalid("times", "must be nonempty, non-negative and increasing"));
    }
    Ok(())
}

/// Global quench `(J_i, h_i) → (J_f, h_f)` from the exact pre-quench
/// ground state, against the spin-wave fields on an `N`-site ring.
pub fn compare_global(
    alpha: f64,
    n: usize,
    pre: (f64, f64),
    post: (f64, f64),
    times: &[f64],
    separations: &[usize],
) -> Result<GlobalComparison> {
    check_times(times)?;
    let quench = GlobalQuench::new(alpha, n, pre, post, QuenchPath::GenericBogoliubov)?;
    let gx = gx_field(&quench, separations, times)?;
    let gz = gz_field(&quench, separations, times)?;

    let h_pre = Hamiltonian::new(EdModel::new(pre.0, pre.1, alpha, n, Boundary::Periodic)?);
    let h_post = Hamiltonian::new(EdModel::new(post.0, post.1, alpha, n, Boundary::Periodic)?);
    let gs = ground_state(&h_pre)?.state;
    let initial = observables(&gs);
    let evolver = Evolver::new(&h_post);
    let (mut gx_ed, mut gz_ed) = (Vec::new(), Vec::new());
    let mut state = gs;
    let mut now = 0.0;
    for &t in times {
        state = evolver.evolve(&state, t - now)?;
        now = t;
        let obs = observables(&state);
        gx_ed.push(separations.iter().map(|&r| obs.gx0[r] - initial.gx0[r]).collect::<Vec<_>>());
        gz_ed.push(separations.iter().map(|&r| obs.gz0[r] - initial.gz0[r]).collect::<Vec<_>>());
    }
    let rows = |f: &crate::field::SpaceTimeField<f64>| -> Vec<Vec<f64>> { f.values.outer_iter().map(|r| r.to_vec()).collect() };
    let (gx_lswt, gz_lswt) = (rows(&gx), rows(&gz));
    Ok(GlobalComparison {
        gx_rel_err: relative_sup(&gx_ed, &gx_lswt),
        gz_rel_err: relative_sup(&gz_ed, &gz_lswt),
        times: times.to_vec(),
        separations: separations.to_vec(),
        gx_ed,
        gx_lswt,
        gz_ed,
        gz_lswt,
    })
}

/// Block entanglement after a central spin flip, indexed `[time][cut]`.
#[derive(Debug, Clone)]
pub struct LocalComparison {
    pub times: Vec<f64>,
    pub cuts: Vec<usize>,
    /// Largest third Schmidt weight seen at any time and cut.
    pub lambda3_max: f64,
    pub s1_ed: Vec<Vec<f64>>,
    pub s1_lswt: Vec<Vec<f64>>,
    pub s1_max_diff: f64,
}

/// Flips site 0 of the exact ground state and follows the von Neumann
/// entropy of the blocks `{R, …, N/2}`.
pub fn compare_local(params: &ModelParams<f64>, times: &[f64], cuts: &[usize]) -> Result<LocalComparison> {
    check_times(times)?;
    let n = params.n;
    let lambda = lambda2_field(params, cuts, times, false)?;
    let h = Hamiltonian::new(EdModel::new(params.j, params.h, params.alpha, n, Boundary::Periodic)?);
    let gs = ground_state(&h)?.state;
    let mut state = local_quench_state(&gs, 0)?;
    let evolver = Evolver::new(&h);
    let mut now = 0.0;
    let (mut s1_ed, mut s1_lswt) = (Vec::new(), Vec::new());
    let mut lambda3_max = 0.0f64;
    for (it, &t) in times.iter().enumerate() {
        state = evolver.evolve(&state, t - now)?;
        now = t;
        let mut ed_row = Vec::with_capacity(cuts.len());
        let mut lswt_row = Vec::with_capacity(cuts.len());
        for (ic, &r) in cuts.iter().enumerate() {
            let block: Vec<usize> = (r..=n / 2).collect();
            let spec = block_spectrum(&state, &block)?;
            lambda3_max = lambda3_max.max(spec.get(2).copied().unwrap_or(0.0));
            ed_row.push(renyi_of_spectrum(1.0, &spec)?);
            lswt_row.push(renyi_entropy(1.0, lambda.values[[it, ic]])?);
        }
        s1_ed.push(ed_row);
        s1_lswt.push(lswt_row);
    }
    let s1_max_diff =
        s1_ed.iter().flatten().zip(s1_lswt.iter().flatten()).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    Ok(LocalComparison { times: times.to_vec(), cuts: cuts.to_vec(), lambda3_max, s1_ed, s1_lswt, s1_max_diff })
}
