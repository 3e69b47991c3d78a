//! Fourier transform of the algebraic coupling, `P_α(k) = Σ_{r≠0} e^{ikr} / |r|^α`.

use num_complex::Complex;

use super::params::KernelMode;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::special::riemann_zeta;

/// `P_α` and its first two momentum derivatives at one quasi-momentum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelDerivatives<T> {
    pub value: T,
    pub first: T,
    pub second: T,
}

/// Evaluates `P_α(k)`.
///
/// `FiniteRing` sums the minimal-image distances `r = 1..=N/2` with
/// weight `2 cos(kr) / r^α` (the antipodal `r = N/2` term once).
/// `InfiniteChain` evaluates `2 Σ_{r≥1} cos(kr) / r^α`: `2ζ(α)` at `k = 0`,
/// otherwise a compensated partial sum whose oscillatory remainder is
/// resummed in closed form (see [`polylog_tail`]).
pub fn kernel_palpha<T: Real>(k: T, alpha: T, mode: KernelMode, n: usize) -> Result<T> {
    check_inputs(k, alpha, mode, n)?;
    match mode {
        KernelMode::FiniteRing => Ok(ring_sums(k, alpha, n, false).value),
        KernelMode::InfiniteChain => {
            if k == T::zero() {
                Ok(T::lit(2.0) * riemann_zeta(alpha)?)
            } else {
                Ok(T::lit(2.0) * lattice_polylog(alpha, k).re)
            }
        }
    }
}

/// `P_α(k)`, `∂_k P_α(k)` and `∂²_k P_α(k)` from the term-wise
/// differentiated series.
///
/// At `k = 0` on the infinite chain the first derivative is zero by
/// parity and the second is `-2ζ(α - 2)`, or `-∞` when `α ≤ 3`.
pub fn kernel_derivatives<T: Real>(k: T, alpha: T, mode: KernelMode, n: usize) -> Result<KernelDerivatives<T>> {
    check_inputs(k, alpha, mode, n)?;
    let two = T::lit(2.0);
    match mode {
        KernelMode::FiniteRing => Ok(ring_sums(k, alpha, n, true)),
        KernelMode::InfiniteChain if k == T::zero() => {
            let second = if alpha > T::lit(3.0) {
                -two * riemann_zeta(alpha - two)?
            } else {
                T::neg_infinity()
            };
            Ok(KernelDerivatives { value: two * riemann_zeta(alpha)?, first: T::zero(), second })
        }
        KernelMode::InfiniteChain => {
            let s0 = lattice_polylog(alpha, k);
            let s1 = lattice_polylog(alpha - T::one(), k);
            let s2 = lattice_polylog(alpha - two, k);
            Ok(KernelDerivatives { value: two * s0.re, first: -two * s1.im, second: -two * s2.re })
        }
    }
}

fn check_inputs<T: Real>(k: T, alpha: T, mode: KernelMode, n: usize) -> Result<()> {
    if !k.is_finite() {
        return Err(Error::invalid("k", "quasi-momentum must be finite"));
    }
    if !(alpha.is_finite() && alpha > T::one()) {
        return Err(Error::invalid("alpha", format!("kernel diverges at k = 0 for alpha = {alpha} <= 1")));
    }
    if mode == KernelMode::FiniteRing && (n < 4 || n % 2 != 0) {
        return Err(Error::invalid("N", format!("finite ring needs even N >= 4, got {n}")));
    }
    Ok(())
}

fn ring_sums<T: Real>(k: T, alpha: T, n: usize, derivatives: bool) -> KernelDerivatives<T> {
    let half = n / 2;
    let two = T::lit(2.0);
    let (mut p, mut dp, mut d2p) = (T::zero(), T::zero(), T::zero());
    for r in 1..=half {
        let rf = T::from_usize_lossy(r);
        let weight = if r == half { T::one() } else { two };
        let amp = weight * rf.powf(-alpha);
        let (sin, cos) = (k * rf).sin_cos();
        p = p + amp * cos;
        if derivatives {
            dp = dp - amp * rf * sin;
            d2p = d2p - amp * rf * rf * cos;
        }
    }
    KernelDerivatives { value: p, first: dp, second: d2p }
}

/// Number of leading terms summed explicitly for `Σ_{r≥1} e^{ikr} r^{-s}`.
///
/// The remainder expansion converges like `(|s| + j) / (|k| M)`, so `M`
/// scales as `1/|k|`.
fn truncation<T: Real>(s: T, k: T) -> usize {
    let m = (T::lit(4.0) * (s.abs() + T::lit(32.0)) / k.abs()).ceil().to_f64_lossy();
    m.clamp(64.0, 1e9) as usize
}

/// `Σ_{r≥1} e^{ikr} r^{-s}` for `k ≠ 0` (any real `s`, analytically
/// continued for `s ≤ 1`).
fn lattice_polylog<T: Real>(s: T, k: T) -> Complex<T> {
    const ANCHOR: usize = 64;
    let m = truncation(s, k);
    let step = Complex::new(k.cos(), k.sin());
    let mut re = Kahan::new();
    let mut im = Kahan::new();
    let mut z = step;
    for r in 1..m {
        if r % ANCHOR == 0 {
            let (sin, cos) = (k * T::from_usize_lossy(r)).sin_cos();
            z = Complex::new(cos, sin);
        }
        let g = T::from_usize_lossy(r).powf(-s);
        re.add(z.re * g);
        im.add(z.im * g);
        z = z * step;
    }
    let head = Complex::new(re.sum(), im.sum());
    head + polylog_tail(s, k, m)
}

/// Remainder `Σ_{r≥M} z^r g(r)` with `z = e^{ik}`, `g(r) = r^{-s}`.
///
/// Writing the shift as `e^{D}` gives `Σ_{r≥0} z^{M+r} g(M+r) =
/// z^M [1 - z e^{D}]^{-1} g(M) = z^M Σ_j w_j g^{(j)}(M)` with
/// `w_0 = 1/(1-z)` and `w_j = z/(1-z) Σ_{i=1..j} w_{j-i} / i!`. The
/// series is asymptotic; it is cut at its smallest term.
fn polylog_tail<T: Real>(s: T, k: T, m: usize) -> Complex<T> {
    const MAX_TERMS: usize = 80;
    let one = Complex::new(T::one(), T::zero());
    let z = Complex::new(k.cos(), k.sin());
    let mf = T::from_usize_lossy(m);
    let (sin_m, cos_m) = (k * mf).sin_cos();
    let z_m = Complex::new(cos_m, sin_m);

    let ratio = z / (one - z);
    let mut w: Vec<Complex<T>> = Vec::with_capacity(MAX_TERMS);
    w.push(one / (one - z));
    let mut inv_fact = vec![T::one()];
    // g^{(j)}(M) = (-1)^j s(s+1)…(s+j-1) M^{-s-j}
    let mut deriv = mf.powf(-s);
    let mut terms = vec![w[0] * deriv];
    for j in 1..MAX_TERMS {
        let jf = T::from_usize_lossy(j);
        inv_fact.push(inv_fact[j - 1] / jf);
        let mut acc = Complex::new(T::zero(), T::zero());
        for i in 1..=j {
            acc = acc + w[j - i] * inv_fact[i];
        }
        w.push(ratio * acc);
        deriv = -deriv * (s + jf - T::one()) / mf;
        terms.push(w[j] * deriv);
        if terms[j].norm() <= T::epsilon() * terms[0].norm() && terms[j - 1].norm() <= T::epsilon() * terms[0].norm() {
            break;
        }
    }
    // Odd or even coefficients can vanish (z = -1), so the cut uses the
    // envelope of consecutive pairs rather than single terms.
    let envelope = |j: usize| {
        let next = terms.get(j + 1).map_or(T::zero(), |t| t.norm());
        terms[j].norm().max(next)
    };
    let mut total = terms[0];
    for j in 1..terms.len() {
        if envelope(j) > envelope(j - 1) {
            break;
        }
        total = total + terms[j];
    }
    z_m * total
}

struct Kahan<T> {
    sum: T,
    carry: T,
}

impl<T: Real> Kahan<T> {
    fn new() -> Self {
        Kahan { sum: T::zero(), carry: T::zero() }
    }

    fn add(&mut self, x: T) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    fn sum(&self) -> T {
        self.sum
    }
}
