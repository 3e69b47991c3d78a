//! Connected correlations after a sudden change of `(J, h)` across the
//! whole chain, in linear spin-wave theory.
//!
//! Each mode `k` is an oscillator `H_k = (h + J P_k)/2 · x x† + h/2 · p p†`
//! in the quadratures `x = a + a†`, `p = i(a† - a)`. Its ground state has
//! `⟨x x†⟩ = Q_k = sqrt(h / (h + J P_k)) = 2h / E_k`, and the post-quench
//! dynamics rotates `(x, p)` at frequency `E_k^f`. Correlators are in
//! spin units `S = σ/2` and use `G(R, t) = G⁰(R, t) - G⁰(R, 0)`.

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{stack_rows, Observable, SpaceTimeField};
use crate::fourier::MomentumSum;
use crate::model::{build_dispersion, kernel_palpha, spectrum_point, Boundary, DispersionTable, KernelMode, ModelParams};
use crate::scalar::Real;

/// How the per-mode quench weight is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuenchPath {
    /// Closed-form weight for a change of `J` at fixed `h`.
    PaperJQuench,
    /// Weight from the mismatch of pre- and post-quench quadrature
    /// widths; covers `h` quenches and reduces to the closed form when
    /// only `J` changes.
    GenericBogoliubov,
}

impl QuenchPath {
    pub fn as_str(self) -> &'static str {
        match self {
            QuenchPath::PaperJQuench => "paper_j_quench",
            QuenchPath::GenericBogoliubov => "generic_bogoliubov",
        }
    }
}

impl std::str::FromStr for QuenchPath {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper_j_quench" => Ok(QuenchPath::PaperJQuench),
            "generic_bogoliubov" => Ok(QuenchPath::GenericBogoliubov),
            _ => Err(Error::invalid("path", format!("expected paper_j_quench or generic_bogoliubov, got `{s}`"))),
        }
    }
}

/// A global quench `(J_i, h_i) → (J_f, h_f)` at fixed `α` and `N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GlobalQuench<T> {
    pub alpha: T,
    pub n: usize,
    pub j_i: T,
    pub h_i: T,
    pub j_f: T,
    pub h_f: T,
    pub path: QuenchPath,
    pub kernel: KernelMode,
}

impl<T: Real> GlobalQuench<T> {
    /// Finite-ring kernel. Spectral stability is checked when fields
    /// are built.
    pub fn new(alpha: T, n: usize, pre: (T, T), post: (T, T), path: QuenchPath) -> Result<Self> {
        let q = GlobalQuench {
            alpha,
            n,
            j_i: pre.0,
            h_i: pre.1,
            j_f: post.0,
            h_f: post.1,
            path,
            kernel: KernelMode::FiniteRing,
        };
        q.validate()?;
        Ok(q)
    }

    pub fn with_kernel(mut self, kernel: KernelMode) -> Self {
        self.kernel = kernel;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.pre().validate()?;
        self.post().validate()?;
        if !(self.h_i > T::zero() && self.h_f > T::zero()) {
            return Err(Error::invalid("h", "quench weights need h > 0 before and after the quench"));
        }
        if self.path == QuenchPath::PaperJQuench && self.h_i != self.h_f {
            return Err(Error::invalid("path", "paper_j_quench requires h_i = h_f; use generic_bogoliubov"));
        }
        Ok(())
    }

    pub fn pre(&self) -> ModelParams<T> {
        self.params(self.j_i, self.h_i)
    }

    pub fn post(&self) -> ModelParams<T> {
        self.params(self.j_f, self.h_f)
    }

    fn params(&self, j: T, h: T) -> ModelParams<T> {
        ModelParams { j, h, alpha: self.alpha, n: self.n, kernel: self.kernel, boundary: Boundary::Periodic }
    }

    fn describe(&self, field: SpaceTimeField<T>) -> SpaceTimeField<T> {
        field
            .with_meta("alpha", self.alpha)
            .with_meta("N", self.n)
            .with_meta("J_i", self.j_i)
            .with_meta("h_i", self.h_i)
            .with_meta("J_f", self.j_f)
            .with_meta("h_f", self.h_f)
            .with_meta("path", self.path.as_str())
            .with_meta("kernel", self.kernel.as_str())
    }
}

/// Closed-form weight of mode `k` for a `J` quench,
/// `F(k) = h (J_i - J_f) P / (8 [h + J_f P] sqrt(h [h + J_i P]))`.
pub fn weight_fk<T: Real>(k: T, quench: &GlobalQuench<T>) -> Result<T> {
    quench.validate()?;
    if quench.path != QuenchPath::PaperJQuench {
        return Err(Error::invalid("path", "the closed-form weight is defined for paper_j_quench only"));
    }
    let p = kernel_palpha(k, quench.alpha, quench.kernel, quench.n)?;
    j_quench_weight(quench, k, p)
}

fn j_quench_weight<T: Real>(q: &GlobalQuench<T>, k: T, p: T) -> Result<T> {
    let h = q.h_f;
    let pre = h * (h + q.j_i * p);
    let post = h + q.j_f * p;
    if !(pre > T::zero()) || !(h * post > T::zero()) {
        let value = if pre > T::zero() { h * post } else { pre };
        return Err(Error::StabilityViolation { k: k.to_f64_lossy(), value: value.to_f64_lossy() });
    }
    Ok(h * (q.j_i - q.j_f) * p / (T::lit(8.0) * post * pre.sqrt()))
}

/// Quadrature width `⟨x x†⟩` of the ground state with gap `energy`.
fn width<T: Real>(h: T, energy: T, k: T) -> Result<T> {
    if !(energy > T::zero()) {
        return Err(Error::StabilityViolation { k: k.to_f64_lossy(), value: 0.0 });
    }
    Ok(T::lit(2.0) * h / energy)
}

/// Per-mode data for a quench on the momentum grid.
struct Modes<T> {
    post: DispersionTable<T>,
    /// Pre-quench widths `Q_i`.
    q: Vec<T>,
    /// Post-quench widths `Q_f`.
    r: Vec<T>,
    weight: Vec<T>,
}

fn modes<T: Real>(quench: &GlobalQuench<T>) -> Result<Modes<T>> {
    quench.validate()?;
    let pre = build_dispersion(&quench.pre())?;
    let post = build_dispersion(&quench.post())?;
    let mut q = Vec::with_capacity(quench.n);
    let mut r = Vec::with_capacity(quench.n);
    let mut weight = Vec::with_capacity(quench.n);
    for i in 0..quench.n {
        let k = post.k[i];
        let qi = width(quench.h_i, pre.energy[i], k)?;
        let rf = width(quench.h_f, post.energy[i], k)?;
        let w = match quench.path {
            QuenchPath::PaperJQuench => j_quench_weight(quench, k, pre.p_alpha[i])?,
            QuenchPath::GenericBogoliubov => (rf * rf - qi * qi) / (T::lit(8.0) * qi),
        };
        q.push(qi);
        r.push(rf);
        weight.push(w);
    }
    Ok(Modes { post, q, r, weight })
}

fn check_grids<T: Real>(n: usize, r_grid: &[usize], t_grid: &[T]) -> Result<()> {
    if r_grid.is_empty() || t_grid.is_empty() {
        return Err(Error::invalid("grid", "distance and time grids must be nonempty"));
    }
    if let Some(&r) = r_grid.iter().find(|&&r| r > n / 2) {
        return Err(Error::invalid("r_grid", format!("distance {r} exceeds N/2 = {}", n / 2)));
    }
    if t_grid.iter().any(|&t| !(t >= T::zero() && t.is_finite())) {
        return Err(Error::invalid("t_grid", "times must be finite and non-negative"));
    }
    Ok(())
}

/// Wrap-around time `N / (2 max|V_g|)`; infinite for a flat band.
pub fn revival_time<T: Real>(table: &DispersionTable<T>) -> T {
    let vmax = table.vg.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    T::from_usize_lossy(table.len()) / (T::lit(2.0) * vmax)
}

fn finish<T: Real>(
    quench: &GlobalQuench<T>,
    table: &DispersionTable<T>,
    observable: Observable,
    r_grid: &[usize],
    t_grid: &[T],
    rows: Vec<Vec<T>>,
) -> Result<SpaceTimeField<T>> {
    let values = stack_rows(rows, r_grid.len());
    let field = SpaceTimeField::new(observable, r_grid.to_vec(), t_grid.to_vec(), values)?;
    let t_rev = revival_time(table);
    let t_max = t_grid[t_grid.len() - 1];
    let mut field = quench.describe(field).with_meta("t_rev", t_rev).with_meta("units", "S = sigma/2, G(R,0) = 0");
    if t_max > t_rev {
        log::warn!("t_max = {t_max} exceeds the revival time {t_rev}; finite-size echoes enter the field");
        field = field.with_meta("past_revival", true);
    }
    Ok(field)
}

/// `G_x(R, t) = (1/N) Σ_k F(k) cos(kR) [1 - cos(2 E_k^f t)]`, one inverse
/// FFT per time slice.
pub fn gx_field<T: Real>(quench: &GlobalQuench<T>, r_grid: &[usize], t_grid: &[T]) -> Result<SpaceTimeField<T>> {
    check_grids(quench.n, r_grid, t_grid)?;
    let m = modes(quench)?;
    let n = quench.n;
    let nf = T::from_usize_lossy(n);
    let fft = MomentumSum::new(n);
    let two = T::lit(2.0);
    let rows: Vec<Vec<T>> = t_grid
        .par_iter()
        .map_init(
            || (vec![Complex::new(T::zero(), T::zero()); n], fft.scratch()),
            |(buf, scratch), &t| {
                for i in 0..n {
                    let osc = T::one() - (two * m.post.energy[i] * t).cos();
                    buf[i] = Complex::new(m.weight[i] * osc, T::zero());
                }
                fft.apply(buf, scratch);
                r_grid.iter().map(|&r| buf[r].re / nf).collect()
            },
        )
        .collect();
    finish(quench, &m.post, Observable::Gx, r_grid, t_grid, rows)
}

/// Connected `⟨S^z_R S^z_0⟩` from Wick's theorem,
/// `G_z⁰ = C(R)² + |M(R)|² + δ_{R0} C(0)` with `C = ⟨a†_R a_0⟩`,
/// `M = ⟨a_R a_0⟩`.
pub fn gz_field<T: Real>(quench: &GlobalQuench<T>, r_grid: &[usize], t_grid: &[T]) -> Result<SpaceTimeField<T>> {
    check_grids(quench.n, r_grid, t_grid)?;
    let m = modes(quench)?;
    let n = quench.n;
    let fft = MomentumSum::new(n);
    let correlator = |t: T, normal: &mut Vec<Complex<T>>, anomalous: &mut Vec<Complex<T>>, scratch: &mut Vec<Complex<T>>| {
        let (quarter, half, two) = (T::lit(0.25), T::lit(0.5), T::lit(2.0));
        for i in 0..n {
            let (s, c) = (m.post.energy[i] * t).sin_cos();
            let (q, r) = (m.q[i], m.r[i]);
            let xx = c * c * q + r * r * s * s / q;
            let pp = c * c / q + s * s * q / (r * r);
            normal[i] = Complex::new((xx + pp - two) * quarter, T::zero());
            anomalous[i] = Complex::new((xx - pp) * quarter, half * c * s * (r / q - q / r));
        }
        fft.apply(normal, scratch);
        fft.apply(anomalous, scratch);
        let nf = T::from_usize_lossy(n);
        let c0 = normal[0].re / nf;
        r_grid
            .iter()
            .map(|&r| {
                let cr = normal[r].re / nf;
                let mr = anomalous[r] / nf;
                let contact = if r == 0 { c0 } else { T::zero() };
                cr * cr + mr.norm_sqr() + contact
            })
            .collect::<Vec<T>>()
    };
    let zero = Complex::new(T::zero(), T::zero());
    let initial = correlator(T::zero(), &mut vec![zero; n], &mut vec![zero; n], &mut fft.scratch());
    let rows: Vec<Vec<T>> = t_grid
        .par_iter()
        .map_init(
            || (vec![zero; n], vec![zero; n], fft.scratch()),
            |(a, b, scratch), &t| {
                if t == T::zero() {
                    return vec![T::zero(); r_grid.len()];
                }
                let g = correlator(t, a, b, scratch);
                g.iter().zip(&initial).map(|(&x, &x0)| x - x0).collect()
            },
        )
        .collect();
    finish(quench, &m.post, Observable::Gz, r_grid, t_grid, rows)
}

/// Time-independent part `g(R) = (1/N) Σ_k F(k) cos(kR)` of `G_x`.
pub fn gx_static_offset<T: Real>(quench: &GlobalQuench<T>, r_grid: &[usize]) -> Result<Vec<T>> {
    check_grids(quench.n, r_grid, &[T::zero()])?;
    let m = modes(quench)?;
    let buf: Vec<Complex<T>> = m.weight.iter().map(|&w| Complex::new(w, T::zero())).collect();
    let s = MomentumSum::new(quench.n).sum(&buf);
    let nf = T::from_usize_lossy(quench.n);
    Ok(r_grid.iter().map(|&r| s[r].re / nf).collect())
}

const SCAN_POINTS: usize = 4096;
const BISECTIONS: usize = 80;

/// Stationary-phase evaluation of the oscillating part of `G_x` along
/// rays of fixed `R/t`.
///
/// Stationary momenta solve `2 V_g(k) = R/t` on `(-π, 0)`; they are
/// bracketed on a fixed scan of the post-quench spectrum and refined by
/// bisection.
pub struct StationaryPhase<T> {
    quench: GlobalQuench<T>,
    scan_k: Vec<T>,
    scan_vg: Vec<T>,
    vg_max: T,
}

impl<T: Real> StationaryPhase<T> {
    pub fn new(quench: &GlobalQuench<T>) -> Result<Self> {
        quench.validate()?;
        let post = quench.post();
        let pi = T::PI();
        let scan_k: Vec<T> = (0..SCAN_POINTS)
            .map(|i| -pi + pi * T::from_usize_lossy(i) / T::from_usize_lossy(SCAN_POINTS))
            .collect();
        let scan_vg: Vec<T> =
            scan_k.par_iter().map(|&k| spectrum_point(&post, k).map(|p| p.vg)).collect::<Result<_>>()?;
        let vg_max = scan_vg.iter().copied().fold(T::neg_infinity(), T::max);
        Ok(StationaryPhase { quench: *quench, scan_k, scan_vg, vg_max })
    }

    /// Largest group velocity seen on the scan.
    pub fn vg_max(&self) -> T {
        self.vg_max
    }

    /// All `k ∈ (-π, 0)` with `2 V_g(k) = ratio`.
    pub fn points(&self, ratio: T) -> Result<Vec<T>> {
        let target = ratio / T::lit(2.0);
        let post = self.quench.post();
        let f = |k: T| spectrum_point(&post, k).map(|p| p.vg - target);
        let mut roots = Vec::new();
        for i in 0..self.scan_k.len() - 1 {
            let (fa, fb) = (self.scan_vg[i] - target, self.scan_vg[i + 1] - target);
            if fa == T::zero() {
                roots.push(self.scan_k[i]);
                continue;
            }
            if (fa < T::zero()) == (fb < T::zero()) || fb == T::zero() {
                continue;
            }
            let (mut lo, mut hi, mut flo) = (self.scan_k[i], self.scan_k[i + 1], fa);
            for _ in 0..BISECTIONS {
                let mid = (lo + hi) / T::lit(2.0);
                if mid <= lo || mid >= hi {
                    break;
                }
                let fm = f(mid)?;
                if (fm < T::zero()) == (flo < T::zero()) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            roots.push((lo + hi) / T::lit(2.0));
        }
        if roots.is_empty() {
            return Err(Error::NoStationaryPoint {
                ratio: ratio.to_f64_lossy(),
                limit: (T::lit(2.0) * self.vg_max).to_f64_lossy(),
            });
        }
        Ok(roots)
    }

    /// Quench weight at an arbitrary momentum.
    pub fn weight(&self, k: T) -> Result<T> {
        let q = &self.quench;
        match q.path {
            QuenchPath::PaperJQuench => weight_fk(k, q),
            QuenchPath::GenericBogoliubov => {
                let qi = width(q.h_i, spectrum_point(&q.pre(), k)?.energy, k)?;
                let rf = width(q.h_f, spectrum_point(&q.post(), k)?.energy, k)?;
                Ok((rf * rf - qi * qi) / (T::lit(8.0) * qi))
            }
        }
    }

    /// `G_x(R, t) - g(R) ≈ -(1/2π) Σ_sp F √(π / (t |E''|)) cos(k R - 2 E t - sgn(E'') π/4)`.
    pub fn gx(&self, r: T, t: T) -> Result<T> {
        if !(t > T::zero()) {
            return Err(Error::invalid("t", "stationary phase needs t > 0"));
        }
        let post = self.quench.post();
        let pi = T::PI();
        let quarter_pi = pi / T::lit(4.0);
        let mut total = T::zero();
        for k in self.points(r / t)? {
            let p = spectrum_point(&post, k)?;
            let amp = self.weight(k)? * (pi / (t * p.curvature.abs())).sqrt();
            let phase = k * r - T::lit(2.0) * p.energy * t - p.curvature.signum() * quarter_pi;
            total = total + amp * phase.cos();
        }
        Ok(-total / (T::lit(2.0) * pi))
    }
}

/// One-shot stationary-phase value; builds the scan on every call.
pub fn gx_stationary_phase<T: Real>(r: T, t: T, quench: &GlobalQuench<T>) -> Result<T> {
    StationaryPhase::new(quench)?.gx(r, t)
}
