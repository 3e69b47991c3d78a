//! Dynamics after flipping the central spin of the spin-wave vacuum.
//!
//! The initial state is `Ñ Σ_k u_k b†_k |0_b⟩` with
//! `Ñ = (Σ_k u_k²)^{-1/2}`: a single quasiparticle wave packet, so the
//! magnetization is a sum of two squared momentum integrals and a block
//! density matrix has rank two.

use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{stack_rows, Observable, SpaceTimeField};
use crate::fourier::MomentumSum;
use crate::model::{build_dispersion, DispersionTable, InfraredExpansion, ModelParams};
use crate::scalar::Real;
use crate::special::hurwitz_zeta;

/// The post-flip single-quasiparticle state.
#[derive(Debug, Clone)]
pub struct LocalQuenchState<T> {
    pub params: ModelParams<T>,
    pub table: DispersionTable<T>,
    pub u: Vec<T>,
    /// `Ñ = (Σ_k u_k²)^{-1/2}`.
    pub norm: T,
    /// Distances are measured from this site, which is relabelled 0.
    pub flip_site: usize,
}

impl<T: Real> LocalQuenchState<T> {
    pub fn new(params: &ModelParams<T>) -> Result<Self> {
        let table = build_dispersion(params)?;
        let u = table.u.clone();
        let norm = T::one() / u.iter().map(|&x| x * x).sum::<T>().sqrt();
        Ok(LocalQuenchState { params: *params, table, u, norm, flip_site: 0 })
    }

    /// `F₁ = u_k²` and `F₂ = u_k v_k`.
    pub fn amplitudes(&self) -> (Vec<T>, Vec<T>) {
        let f1 = self.u.iter().map(|&u| u * u).collect();
        let f2 = self.u.iter().zip(&self.table.v).map(|(&u, &v)| u * v).collect();
        (f1, f2)
    }

    fn describe(&self, field: SpaceTimeField<T>) -> SpaceTimeField<T> {
        let p = &self.params;
        field
            .with_meta("alpha", p.alpha)
            .with_meta("J", p.j)
            .with_meta("h", p.h)
            .with_meta("N", p.n)
            .with_meta("kernel", p.kernel.as_str())
    }
}

/// Which terms of the magnetization are kept.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MagnetizationTerms {
    Both,
    /// Drops the anomalous `F₂` term, as in the large-field limit.
    FirstOnly,
}

fn check_times<T: Real>(t_grid: &[T]) -> Result<()> {
    if t_grid.is_empty() || t_grid.iter().any(|&t| !(t >= T::zero() && t.is_finite())) {
        return Err(Error::invalid("t_grid", "times must be nonempty, finite and non-negative"));
    }
    Ok(())
}

/// `1/2 - ⟨S^z_R(t)⟩` above its vacuum value, both terms kept.
pub fn magnetization_field<T: Real>(params: &ModelParams<T>, r_grid: &[usize], t_grid: &[T]) -> Result<SpaceTimeField<T>> {
    magnetization_field_with(params, r_grid, t_grid, MagnetizationTerms::Both)
}

/// `Ñ² N (|T₁|² + |T₂|²)` with `T_j(R, t) = (1/N) Σ_k F_j(k) e^{i(E_k t + kR)}`.
pub fn magnetization_field_with<T: Real>(
    params: &ModelParams<T>,
    r_grid: &[usize],
    t_grid: &[T],
    terms: MagnetizationTerms,
) -> Result<SpaceTimeField<T>> {
    check_times(t_grid)?;
    let n = params.n;
    if r_grid.is_empty() || r_grid.iter().any(|&r| r > n / 2) {
        return Err(Error::invalid("r_grid", format!("distances must be nonempty and within [0, {}]", n / 2)));
    }
    let state = LocalQuenchState::new(params)?;
    let (f1, f2) = state.amplitudes();
    let energy = &state.table.energy;
    let fft = MomentumSum::new(n);
    let nf = T::from_usize_lossy(n);
    let scale = state.norm * state.norm / nf;
    let zero = Complex::new(T::zero(), T::zero());
    let rows: Vec<Vec<T>> = t_grid
        .par_iter()
        .map_init(
            || (vec![zero; n], vec![zero; n], fft.scratch()),
            |(a, b, scratch), &t| {
                for i in 0..n {
                    let (s, c) = (energy[i] * t).sin_cos();
                    a[i] = Complex::new(c, s) * f1[i];
                    b[i] = Complex::new(c, s) * f2[i];
                }
                fft.apply(a, scratch);
                if terms == MagnetizationTerms::Both {
                    fft.apply(b, scratch);
                }
                r_grid
                    .iter()
                    .map(|&r| {
                        let second = if terms == MagnetizationTerms::Both { b[r].norm_sqr() } else { T::zero() };
                        scale * (a[r].norm_sqr() + second)
                    })
                    .collect()
            },
        )
        .collect();
    let values = stack_rows(rows, r_grid.len());
    let field = SpaceTimeField::new(Observable::SzLocal, r_grid.to_vec(), t_grid.to_vec(), values)?;
    Ok(state.describe(field).with_meta("terms", if terms == MagnetizationTerms::Both { "both" } else { "first_only" }))
}

/// Weight of the quasiparticle inside the block `A = [R, N/2]`.
///
/// The site amplitudes are `ψ_m = Ñ N^{-1/2} Σ_k w_k e^{i(E_k t + mk)}`
/// on sites `m ∈ (-N/2, N/2]`, with `w_k = u_k` or `w_k = 1`
/// (`approx_uk`); `λ₂` is normalized by `Σ_m |ψ_m|²` so `λ₁ + λ₂ = 1`
/// holds in both cases.
pub fn lambda2_field<T: Real>(params: &ModelParams<T>, r_grid: &[usize], t_grid: &[T], approx_uk: bool) -> Result<SpaceTimeField<T>> {
    check_times(t_grid)?;
    let n = params.n;
    let half = n / 2;
    if r_grid.is_empty() {
        return Err(Error::invalid("r_grid", "must be nonempty"));
    }
    if let Some(&r) = r_grid.iter().find(|&&r| r < 1 || r > half) {
        return Err(Error::CutOutOfRange { r, max: half });
    }
    let state = LocalQuenchState::new(params)?;
    let energy = &state.table.energy;
    let w: Vec<T> = if approx_uk { vec![T::one(); n] } else { state.u.clone() };
    let fft = MomentumSum::new(n);
    let zero = Complex::new(T::zero(), T::zero());
    let rows: Vec<Vec<T>> = t_grid
        .par_iter()
        .map_init(
            || (vec![zero; n], vec![T::zero(); half + 2], fft.scratch()),
            |(buf, suffix, scratch), &t| {
                for i in 0..n {
                    let (s, c) = (energy[i] * t).sin_cos();
                    buf[i] = Complex::new(c, s) * w[i];
                }
                fft.apply(buf, scratch);
                let total: T = buf.iter().map(|x| x.norm_sqr()).sum();
                suffix[half + 1] = T::zero();
                for m in (1..=half).rev() {
                    suffix[m] = suffix[m + 1] + buf[m].norm_sqr();
                }
                r_grid.iter().map(|&r| (suffix[r] / total).min(T::one())).collect()
            },
        )
        .collect();
    let values = stack_rows(rows, r_grid.len());
    let field = SpaceTimeField::new(Observable::Lambda2, r_grid.to_vec(), t_grid.to_vec(), values)?;
    Ok(state.describe(field).with_meta("approx_uk", approx_uk).with_meta("block", "A = [R, N/2]"))
}

/// `S_n` of the rank-two spectrum `{1 - λ₂, λ₂}`; `n = 1` is von Neumann.
pub fn renyi_entropy<T: Real>(order: T, lambda2: T) -> Result<T> {
    if !(order > T::zero() && order.is_finite()) {
        return Err(Error::invalid("order", format!("Rényi order must be positive and finite, got {order}")));
    }
    if !(lambda2 >= T::zero() && lambda2 <= T::one()) {
        return Err(Error::invalid("lambda2", format!("eigenvalue {lambda2} outside [0, 1]")));
    }
    let lambda1 = T::one() - lambda2;
    if order == T::one() {
        let xlogx = |x: T| if x > T::zero() { x * x.ln() } else { T::zero() };
        return Ok(-(xlogx(lambda1) + xlogx(lambda2)));
    }
    Ok((lambda1.powf(order) + lambda2.powf(order)).ln() / (T::one() - order))
}

/// Rényi entropy of general eigenvalues `λ_i` (e.g. an exact block spectrum).
pub fn renyi_of_spectrum<T: Real>(order: T, spectrum: &[T]) -> Result<T> {
    if !(order > T::zero() && order.is_finite()) {
        return Err(Error::invalid("order", format!("Rényi order must be positive and finite, got {order}")));
    }
    let probs = spectrum.iter().map(|&x| x.max(T::zero()));
    if order == T::one() {
        return Ok(-probs.filter(|&x| x > T::zero()).map(|x| x * x.ln()).sum::<T>());
    }
    Ok(probs.map(|x| x.powf(order)).sum::<T>().ln() / (T::one() - order))
}

/// Block spectrum with the Rényi entropies of the requested orders.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntanglementSpectrum<T> {
    pub lambda1: T,
    pub lambda2: T,
    /// `(n, S_n)` pairs in the order requested.
    pub renyi: Vec<(T, T)>,
    /// Left boundary `R` of the block `[R, N/2]`.
    pub cut: usize,
}

impl<T: Real> EntanglementSpectrum<T> {
    pub fn new(lambda2: T, cut: usize, orders: &[T]) -> Result<Self> {
        let renyi = orders.iter().map(|&n| renyi_entropy(n, lambda2).map(|s| (n, s))).collect::<Result<_>>()?;
        Ok(EntanglementSpectrum { lambda1: T::one() - lambda2, lambda2, renyi, cut })
    }
}

/// `S_n` on every point of a `λ₂` field.
pub fn renyi_from_lambda<T: Real>(order: T, lambda2: &SpaceTimeField<T>) -> Result<SpaceTimeField<T>> {
    if lambda2.observable != Observable::Lambda2 {
        return Err(Error::InvalidField(format!("expected a lambda2 field, got {}", lambda2.observable)));
    }
    renyi_entropy(order, T::lit(0.5))?;
    let mut out = lambda2.map(Observable::Renyi(order.to_f64_lossy()), |l| {
        renyi_entropy(order, l.max(T::zero()).min(T::one())).unwrap_or(T::nan())
    });
    out.meta.insert("order".into(), order.to_string());
    out.validate()?;
    Ok(out)
}

/// `S_n(R, t)` of the exact (`w_k = u_k`) block spectrum.
pub fn renyi_field<T: Real>(order: T, params: &ModelParams<T>, r_grid: &[usize], t_grid: &[T]) -> Result<SpaceTimeField<T>> {
    renyi_from_lambda(order, &lambda2_field(params, r_grid, t_grid, false)?)
}

/// Infrared forms of `λ₂`; only ratios are meaningful.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lambda2Asymptotic<T> {
    /// `(t/R)^{1/(1-z)} / (κ - 1)`.
    pub leading: T,
    /// `t^{1/(1-z)} ζ(κ, R)`.
    pub full: T,
    /// `2π (cz)^κ / |cz(z - 1)|`, to be multiplied by `Ñ²`.
    pub prefactor: T,
}

pub fn lambda2_asymptotic<T: Real>(r: T, t: T, expansion: &InfraredExpansion<T>) -> Result<Lambda2Asymptotic<T>> {
    let z = expansion.z;
    if !(z > T::zero() && z < T::one()) {
        return Err(Error::RegimeViolation { alpha: (z + T::one()).to_f64_lossy() });
    }
    if !(r > T::zero() && t >= T::zero()) {
        return Err(Error::invalid("R", "needs R > 0 and t >= 0"));
    }
    let one = T::one();
    let power = one / (one - z);
    let kappa = expansion.kappa;
    let cz = expansion.c * z;
    Ok(Lambda2Asymptotic {
        leading: (t / r).powf(power) / (kappa - one),
        full: t.powf(power) * hurwitz_zeta(kappa, r)?,
        prefactor: T::lit(2.0) * T::PI() * cz.powf(kappa) / (cz * (z - one)).abs(),
    })
}
