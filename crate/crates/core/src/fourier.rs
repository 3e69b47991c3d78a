//! Momentum sums `Σ_n f_n e^{i k_n R}` for every `R` at once.
//!
//! On the grid `k_n = 2πn/N - π` the phase factorizes as
//! `e^{2πinR/N} (-1)^R`, so one inverse FFT gives the sum for all
//! `R = 0..N`. Distances `R > N/2` are the negative separations `R - N`.

use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::scalar::Real;

/// Planned transform for one grid size; cheap to share across threads.
#[derive(Clone)]
pub struct MomentumSum<T: Real> {
    n: usize,
    fft: Arc<dyn Fft<T>>,
}

impl<T: Real> MomentumSum<T> {
    pub fn new(n: usize) -> Self {
        let fft = FftPlanner::new().plan_fft_inverse(n);
        MomentumSum { n, fft }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Scratch buffer sized for [`MomentumSum::apply`].
    pub fn scratch(&self) -> Vec<Complex<T>> {
        vec![Complex::new(T::zero(), T::zero()); self.fft.get_inplace_scratch_len()]
    }

    /// Replaces `buf[n] = f_n` by `buf[R] = Σ_n f_n e^{i k_n R}`.
    pub fn apply(&self, buf: &mut [Complex<T>], scratch: &mut [Complex<T>]) {
        assert_eq!(buf.len(), self.n, "buffer length must match the grid");
        self.fft.process_with_scratch(buf, scratch);
        for x in buf.iter_mut().skip(1).step_by(2) {
            *x = -*x;
        }
    }

    /// Allocating convenience wrapper around [`MomentumSum::apply`].
    pub fn sum(&self, f: &[Complex<T>]) -> Vec<Complex<T>> {
        let mut buf = f.to_vec();
        let mut scratch = self.scratch();
        self.apply(&mut buf, &mut scratch);
        buf
    }
}

/// Reference `O(N)` evaluation of one separation; used to validate the
/// transform.
pub fn direct_sum<T: Real>(k: &[T], f: &[Complex<T>], r: i64) -> Complex<T> {
    let rf = T::lit(r as f64);
    k.iter().zip(f).fold(Complex::new(T::zero(), T::zero()), |acc, (&q, &x)| {
        let (sin, cos) = (q * rf).sin_cos();
        acc + x * Complex::new(cos, sin)
    })
}

/// Position of separation `r` (possibly negative) in the transform output.
pub fn separation_index(r: i64, n: usize) -> usize {
    r.rem_euclid(n as i64) as usize
}
