//! Discrete Fourier transform under one fixed convention.
//!
//! Forward: `X_k = Σ_{n=0}^{N-1} x_n e^{-j2πnk/N}` (no scaling).
//! Inverse: `x_n = (1/N) Σ_{k=0}^{N-1} X_k e^{+j2πnk/N}`.
//!
//! With this pairing `idft(dft(x)) == x` and Parseval reads
//! `Σ_k |X_k|² = N · Σ_n |x_n|²`.  The heavy lifting is delegated to a
//! cached FFT plan per length and thread; the convention (and the `1/N`
//! placement) is owned here.

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::cell::RefCell;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Forward transform, `X_k = Σ_n x_n e^{-j2πnk/N}`.
pub fn dft(x: &[Complex64]) -> Vec<Complex64> {
    let mut buf = x.to_vec();
    if buf.len() > 1 {
        PLANNER.with(|p| {
            let fft = p.borrow_mut().plan_fft_forward(buf.len());
            fft.process(&mut buf);
        });
    }
    buf
}

/// Inverse transform, `x_n = (1/N) Σ_k X_k e^{+j2πnk/N}`.
pub fn idft(x: &[Complex64]) -> Vec<Complex64> {
    let mut buf = x.to_vec();
    if buf.len() > 1 {
        PLANNER.with(|p| {
            let fft = p.borrow_mut().plan_fft_inverse(buf.len());
            fft.process(&mut buf);
        });
        let scale = 1.0 / buf.len() as f64;
        for v in &mut buf {
            *v *= scale;
        }
    }
    buf
}
