use num_complex::Complex64;

use super::fft;
use super::grid::{BoundaryTrace, ComplexSamples, Grid1D, SpaceTimeField};
use crate::error::{invalid, Annotated, Result, Warning};

pub const DEFAULT_PADDING: usize = 8;

/// Composite trapezoid rule for uniformly spaced samples.
pub fn trapezoid(w: &[f64], h: f64) -> f64 {
    match w.len() {
        0 | 1 => 0.0,
        n => h * (0.5 * (w[0] + w[n - 1]) + w[1..n - 1].iter().sum::<f64>()),
    }
}

pub fn trapezoid_complex(w: &[Complex64], h: f64) -> Complex64 {
    match w.len() {
        0 | 1 => Complex64::new(0.0, 0.0),
        n => (w[0] + w[n - 1]) * (0.5 * h) + w[1..n - 1].iter().sum::<Complex64>() * h,
    }
}

/// Running trapezoid integral, starting at zero.
pub fn cumulative_trapezoid(w: &[f64], h: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(w.len());
    let mut acc = 0.0;
    for k in 0..w.len() {
        if k > 0 {
            acc += 0.5 * h * (w[k - 1] + w[k]);
        }
        out.push(acc);
    }
    out
}

/// `H^s(R)` norm of the zero-extension of `h`.
///
/// The samples are zero-padded to a power of two at least `DEFAULT_PADDING`
/// times their length and the norm is
/// `(dt/L) sum_k (1 + xi_k^2)^s |H_k|^2`, with `H` the FFT. For `s = 0` this
/// is exactly the discrete L² norm `dt sum_j |h_j|^2`.
pub fn sobolev_norm_time(h: &BoundaryTrace, s: f64) -> Result<f64> {
    Ok(sobolev_norm_time_padded(h, s, DEFAULT_PADDING)?.value)
}

/// As [`sobolev_norm_time`] with an explicit padding factor; warns when the
/// zero-extension jumps at an endpoint and `s >= 1/2`.
pub fn sobolev_norm_time_padded(h: &BoundaryTrace, s: f64, pad: usize) -> Result<Annotated<f64>> {
    let value = sobolev_norm_samples(h.samples(), h.dt(), s, pad)?;
    let mut warnings = Vec::new();
    if s >= 0.5 {
        let scale = h.max_abs().max(f64::MIN_POSITIVE);
        for (t, z) in [(0.0, h.samples()[0]), (h.t_final(), h.samples()[h.len() - 1])] {
            if z.norm() > 1e-8 * scale {
                warnings.push(Warning::NonzeroEndpoint { t, value: z.norm() });
            }
        }
    }
    Ok(Annotated { value, warnings })
}

/// Zero-extension `H^s` norm of raw samples spaced `dt`.
pub fn sobolev_norm_samples(h: &[Complex64], dt: f64, s: f64, pad: usize) -> Result<f64> {
    if h.len() < 8 {
        return invalid(format!("H^s norm needs at least 8 samples, got {}", h.len()));
    }
    if !(s >= 0.0) || !(dt > 0.0) || pad == 0 {
        return invalid(format!("bad H^s parameters: s = {s}, dt = {dt}, pad = {pad}"));
    }
    let l = (pad * h.len()).next_power_of_two();
    let mut buf = vec![Complex64::new(0.0, 0.0); l];
    buf[..h.len()].copy_from_slice(h);
    fft::fft(&mut buf);
    let xi = fft::angular_frequencies(l, dt);
    let sum: f64 = buf
        .iter()
        .zip(&xi)
        .map(|(z, &w)| (1.0 + w * w).powf(s) * z.norm_sqr())
        .sum();
    Ok((dt / l as f64 * sum).sqrt())
}

/// `L^q_t L^r_x` norm by trapezoid quadrature; infinite exponents mean sup.
pub fn mixed_norm(u: &SpaceTimeField, q: f64, r: f64) -> Result<f64> {
    if !(q >= 1.0 && r >= 1.0) {
        return invalid(format!("mixed norm exponents must lie in [1, inf], got q = {q}, r = {r}"));
    }
    let dx = u.space().spacing();
    let inner: Vec<f64> = u.rows().map(|row| lebesgue(row, dx, r)).collect();
    let dt = u.time().spacing();
    Ok(if q.is_infinite() {
        inner.iter().fold(0.0, |m: f64, &v| m.max(v))
    } else {
        let w: Vec<f64> = inner.iter().map(|v| v.powf(q)).collect();
        trapezoid(&w, dt).powf(1.0 / q)
    })
}

/// `L^r` norm of uniform samples by the trapezoid rule.
pub fn lebesgue(v: &[Complex64], h: f64, r: f64) -> f64 {
    if r.is_infinite() {
        v.iter().fold(0.0, |m, z| m.max(z.norm()))
    } else {
        let w: Vec<f64> = v.iter().map(|z| z.norm().powf(r)).collect();
        trapezoid(&w, h).powf(1.0 / r)
    }
}

/// Odd reflection of samples on `[a, a + L]` to `[a - L, a + L]` about `a`.
/// The value at the reflection point is set to zero.
pub fn odd_extension(f: &ComplexSamples) -> ComplexSamples {
    let g = f.grid();
    let n = g.n_points();
    let grid = Grid1D::new(g.origin() - g.extent(), 2.0 * g.extent(), 2 * n - 1).expect("valid grid");
    let v = f.values();
    let mut values = Vec::with_capacity(2 * n - 1);
    values.extend(v[1..].iter().rev().map(|z| -z));
    values.push(Complex64::new(0.0, 0.0));
    values.extend_from_slice(&v[1..]);
    ComplexSamples::new(grid, values).expect("length matches")
}
