//! Hurwitz zeta function by direct summation plus an Euler–Maclaurin tail.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// `B_{2j} / (2j)!` for j = 1..=13.
const BERNOULLI_OVER_FACTORIAL: [f64; 13] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30_240.0,
    -1.0 / 1_209_600.0,
    1.0 / 47_900_160.0,
    -691.0 / 1_307_674_368_000.0,
    1.0 / 74_724_249_600.0,
    -3617.0 / 10_670_622_842_880_000.0,
    43867.0 / 5_109_094_217_170_944_000.0,
    -174_611.0 / 802_857_662_698_291_200_000.0,
    77683.0 / 14_101_100_039_391_805_440_000.0,
    -236_364_091.0 / 1_693_824_136_731_743_669_452_800_000.0,
    657_931.0 / 186_134_520_519_971_831_808_000_000.0,
];

/// Hurwitz zeta `ζ(s, q) = Σ_{m≥0} (m + q)^{-s}` for `s > 1`, `q > 0`.
///
/// The first `M` terms are summed explicitly, with `M` chosen so that
/// `q + M ≥ max(12, s)`; the remainder is the Euler–Maclaurin tail
///
/// ```text
/// a^{1-s}/(s-1) + a^{-s}/2 + Σ_j B_{2j}/(2j)! · s(s+1)…(s+2j-2) · a^{1-s-2j},   a = q + M
/// ```
///
/// truncated once the Bernoulli terms fall below machine precision. The
/// relative error is below `1e-13` in `f64` across the domain.
pub fn hurwitz_zeta<T: Real>(s: T, q: T) -> Result<T> {
    if !(s.is_finite() && s > T::one()) {
        return Err(Error::DomainError(format!("hurwitz_zeta needs s > 1, got s = {s}")));
    }
    if !(q.is_finite() && q > T::zero()) {
        return Err(Error::DomainError(format!("hurwitz_zeta needs q > 0, got q = {q}")));
    }
    let threshold = T::lit(12.0).max(s);
    let mut terms = 0usize;
    while q + T::from_usize_lossy(terms) < threshold {
        terms += 1;
    }
    let a = q + T::from_usize_lossy(terms);

    // smallest terms first
    let mut head = T::zero();
    for m in (0..terms).rev() {
        head = head + (q + T::from_usize_lossy(m)).powf(-s);
    }

    let a_pow = a.powf(-s);
    let mut tail = a * a_pow / (s - T::one()) + a_pow / T::lit(2.0);
    // rising factorial s(s+1)…(s+2j-2) times a^{1-s-2j}
    let mut factor = s * a_pow / a;
    let a2 = a * a;
    for (j, coeff) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        let term = T::lit(*coeff) * factor;
        tail = tail + term;
        if term.abs() <= T::epsilon() * tail.abs() {
            break;
        }
        let two_j = T::from_usize_lossy(2 * (j + 1));
        factor = factor * (s + two_j - T::one()) * (s + two_j) / a2;
    }
    Ok(head + tail)
}

/// Riemann zeta `ζ(s) = ζ(s, 1)` for `s > 1`.
pub fn riemann_zeta<T: Real>(s: T) -> Result<T> {
    hurwitz_zeta(s, T::one())
}
