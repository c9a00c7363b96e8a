//! Fourth-order finite differences on uniform grids.

use num_complex::Complex64;

/// First derivative: centered in the interior, one-sided near the ends.
/// Requires at least 5 samples.
pub fn derivative4(v: &[Complex64], h: f64) -> Vec<Complex64> {
    let n = v.len();
    assert!(n >= 5, "fourth-order stencil needs 5 points");
    let s = 1.0 / (12.0 * h);
    let mut d = vec![Complex64::new(0.0, 0.0); n];
    d[0] = (-25.0 * v[0] + 48.0 * v[1] - 36.0 * v[2] + 16.0 * v[3] - 3.0 * v[4]) * s;
    d[1] = (-3.0 * v[0] - 10.0 * v[1] + 18.0 * v[2] - 6.0 * v[3] + v[4]) * s;
    for j in 2..n - 2 {
        d[j] = (v[j - 2] - 8.0 * v[j - 1] + 8.0 * v[j + 1] - v[j + 2]) * s;
    }
    d[n - 2] = (3.0 * v[n - 1] + 10.0 * v[n - 2] - 18.0 * v[n - 3] + 6.0 * v[n - 4] - v[n - 5]) * s;
    d[n - 1] = (25.0 * v[n - 1] - 48.0 * v[n - 2] + 36.0 * v[n - 3] - 16.0 * v[n - 4] + 3.0 * v[n - 5]) * s;
    d
}

/// Real-valued version of [`derivative4`].
pub fn derivative4_real(v: &[f64], h: f64) -> Vec<f64> {
    let c: Vec<Complex64> = v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    derivative4(&c, h).into_iter().map(|z| z.re).collect()
}

/// Second derivative at the left end, third-order one-sided stencil.
pub fn second_derivative_left(v: &[Complex64], h: f64) -> Complex64 {
    (35.0 * v[0] - 104.0 * v[1] + 114.0 * v[2] - 56.0 * v[3] + 11.0 * v[4]) / (12.0 * h * h)
}

/// Second derivative at the right end, third-order one-sided stencil.
pub fn second_derivative_right(v: &[Complex64], h: f64) -> Complex64 {
    let n = v.len();
    (35.0 * v[n - 1] - 104.0 * v[n - 2] + 114.0 * v[n - 3] - 56.0 * v[n - 4] + 11.0 * v[n - 5]) / (12.0 * h * h)
}
