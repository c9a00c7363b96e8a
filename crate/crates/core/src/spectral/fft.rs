use std::cell::RefCell;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

pub fn forward_plan(len: usize) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft_forward(len))
}

pub fn inverse_plan(len: usize) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(len))
}

/// In-place unnormalised forward FFT, `X_k = sum_j x_j e^{-2 pi i jk/n}`.
pub fn fft(buf: &mut [Complex64]) {
    forward_plan(buf.len()).process(buf);
}

/// In-place inverse FFT including the `1/n` factor.
pub fn ifft(buf: &mut [Complex64]) {
    let n = buf.len();
    inverse_plan(n).process(buf);
    let s = 1.0 / n as f64;
    buf.iter_mut().for_each(|z| *z *= s);
}

/// Angular frequencies matching FFT bin order for `n` samples spaced `d`.
pub fn angular_frequencies(n: usize, d: f64) -> Vec<f64> {
    let base = 2.0 * std::f64::consts::PI / (n as f64 * d);
    (0..n)
        .map(|k| {
            let k = if k <= n / 2 { k as f64 } else { k as f64 - n as f64 };
            k * base
        })
        .collect()
}
