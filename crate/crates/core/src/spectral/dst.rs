//! Type-I discrete sine transform on a uniform grid with both endpoints.
//!
//! For a grid with `M = n_points - 1` intervals, the coefficients are
//! `c_n = (2/M) sum_{j=1}^{M-1} f_j sin(n pi j / M)`, `n = 1..M-1`, the
//! trapezoid rule for `2 int f sin(n pi x) dx` on the unit interval.
//! Endpoint samples do not enter: every basis function vanishes there.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::fft;
use super::grid::{ComplexSamples, Grid1D};

/// Coefficients `c_1..c_N` in the basis `sin(n pi (x - a)/L)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SineSpectrum {
    pub coeffs: Vec<Complex64>,
}

impl SineSpectrum {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        Self { coeffs }
    }

    pub fn n_modes(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient of mode `n` (1-based); zero beyond the stored range.
    pub fn coeff(&self, n: usize) -> Complex64 {
        if n == 0 || n > self.coeffs.len() {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[n - 1]
        }
    }

    /// `(1/2) sum |c_n|^2`, the squared L² norm on the unit interval.
    pub fn parseval_norm_sqr(&self) -> f64 {
        0.5 * self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>()
    }
}

/// `S_n = sum_{j=1}^{M-1} v_{j-1} sin(pi j n / M)` for `n = 1..M-1`, where
/// `v` has length `M - 1`.
pub(crate) fn dst1(v: &[Complex64]) -> Vec<Complex64> {
    let m = v.len() + 1;
    if m < 2 {
        return Vec::new();
    }
    let zero = Complex64::new(0.0, 0.0);
    let mut buf = vec![zero; 2 * m];
    for (j, &x) in v.iter().enumerate() {
        buf[j + 1] = x;
        buf[2 * m - 1 - j] = -x;
    }
    fft::fft(&mut buf);
    let half_i = Complex64::new(0.0, 0.5);
    buf[1..m].iter().map(|&y| y * half_i).collect()
}

pub fn dst_forward(f: &ComplexSamples) -> SineSpectrum {
    let vals = f.values();
    let m = vals.len() - 1;
    let scale = 2.0 / m as f64;
    let mut c = dst1(&vals[1..m]);
    c.iter_mut().for_each(|z| *z *= scale);
    SineSpectrum { coeffs: c }
}

/// Evaluates `sum_n c_n sin(n pi (x_j - a)/L)` at every node of `grid`.
///
/// Modes beyond the grid's resolvable range are folded back exactly using
/// the periodicity of `sin(pi j n / M)` in `n`.
pub fn dst_inverse(spec: &SineSpectrum, grid: &Grid1D) -> ComplexSamples {
    let m = grid.n_points() - 1;
    let zero = Complex64::new(0.0, 0.0);
    let mut folded = vec![zero; m.saturating_sub(1)];
    for (i, &c) in spec.coeffs.iter().enumerate() {
        let r = (i + 1) % (2 * m);
        if r == 0 || r == m {
            continue;
        }
        if r < m {
            folded[r - 1] += c;
        } else {
            folded[2 * m - r - 1] -= c;
        }
    }
    let inner = dst1(&folded);
    let mut values = Vec::with_capacity(m + 1);
    values.push(zero);
    values.extend(inner);
    values.push(zero);
    ComplexSamples::new(*grid, values).expect("length matches grid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn single_mode_is_detected() {
        let g = Grid1D::unit(65).unwrap();
        let f = ComplexSamples::from_fn(g, |x| c((3.0 * PI * x).sin()));
        let s = dst_forward(&f);
        for (n, z) in s.coeffs.iter().enumerate() {
            let expect = if n + 1 == 3 { 1.0 } else { 0.0 };
            assert!((z - c(expect)).norm() < 1e-13, "mode {}", n + 1);
        }
    }

    #[test]
    fn zero_spectrum_is_zero_function() {
        let g = Grid1D::unit(17).unwrap();
        let f = dst_inverse(&SineSpectrum::new(vec![c(0.0); 15]), &g);
        assert!(f.values().iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn parabola_coefficients() {
        let g = Grid1D::unit(4097).unwrap();
        let f = ComplexSamples::from_fn(g, |x| c(x * (1.0 - x)));
        let s = dst_forward(&f);
        for n in 1..=5usize {
            let expect = if n % 2 == 1 { 8.0 / (n as f64 * PI).powi(3) } else { 0.0 };
            assert!((s.coeff(n) - c(expect)).norm() < 1e-6, "n = {n}");
        }
    }

    #[test]
    fn folding_matches_direct_sum() {
        let g = Grid1D::unit(9).unwrap();
        let coeffs: Vec<Complex64> = (1..=40).map(|n| Complex64::new(1.0 / n as f64, (n as f64).cos())).collect();
        let spec = SineSpectrum::new(coeffs.clone());
        let f = dst_inverse(&spec, &g);
        for (j, x) in g.nodes().into_iter().enumerate() {
            let direct: Complex64 = coeffs
                .iter()
                .enumerate()
                .map(|(i, &cn)| cn * ((i + 1) as f64 * PI * x).sin())
                .sum();
            assert!((f.values()[j] - direct).norm() < 1e-12);
        }
    }
}
