//! Unitary DFT pair.
//!
//! The inverse transform is the matrix `F_N` with entries
//! `exp(j2πmn/N)/√N`; the forward transform is its conjugate transpose.
//! Both preserve the ℓ₂ norm, so no scale factors appear elsewhere.

use std::cell::RefCell;

use num_complex::Complex64;
use rustfft::FftPlanner;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn transform(input: &[Complex64], inverse: bool) -> Vec<Complex64> {
    let n = input.len();
    if n == 0 {
        return Vec::new();
    }
    let fft = PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(n)
        } else {
            p.plan_fft_forward(n)
        }
    });
    let mut buf = input.to_vec();
    fft.process(&mut buf);
    let scale = 1.0 / (n as f64).sqrt();
    for x in buf.iter_mut() {
        *x *= scale;
    }
    buf
}

/// Frequency → time: `F_N · x`.
pub fn idft(freq: &[Complex64]) -> Vec<Complex64> {
    transform(freq, true)
}

/// Time → frequency: `F_Nᴴ · x`.
pub fn dft(time: &[Complex64]) -> Vec<Complex64> {
    transform(time, false)
}

/// Unnormalized frequency response `H_k = Σ_l h_l exp(-j2πkl/N)` of a tap
/// vector on an `n`-point grid. With the unitary pair above, circular
/// convolution by `h` becomes multiplication by `H_k`.
pub fn frequency_response(taps: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut padded = vec![Complex64::new(0.0, 0.0); n];
    for (dst, &t) in padded.iter_mut().zip(taps) {
        *dst = t;
    }
    let scale = (n as f64).sqrt();
    dft(&padded).into_iter().map(|x| x * scale).collect()
}

pub(crate) fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum()
}

pub(crate) fn norm(v: &[Complex64]) -> f64 {
    norm_sqr(v).sqrt()
}
