use num_complex::Complex64;

use super::line::TruncatedLine;
use crate::error::{invalid, Result};
use crate::spectral::{smooth_step, ComplexSamples, SobolevIndex};

/// Reflection weights: `phi*(-y) = 6 phi(y) - 8 phi(2y) + 3 phi(3y)`.
///
/// They solve `sum a_j (-m_j)^k = 1` for `k = 0, 1, 2` with `m = (1, 2, 3)`,
/// so `phi*` is `C^2` across the origin. The stretched samples `phi(m y)`
/// fall on grid nodes, so no interpolation is needed.
pub const REFLECTION: [(usize, f64); 3] = [(1, 6.0), (2, -8.0), (3, 3.0)];

/// Window on the negative half: 1 on `[0, x_max/4]`, 0 beyond `x_max/2`.
fn window(y: f64, x_max: f64) -> f64 {
    1.0 - smooth_step((y - 0.25 * x_max) / (0.25 * x_max))
}

/// Extends samples on `[0, x_max - dx]` to the periodic line whose
/// non-negative half is that grid.
///
/// The restriction of the result to the non-negative half equals `phi`
/// exactly; data beyond the sampled range are taken as zero.
pub fn extend(phi: &ComplexSamples, s: SobolevIndex) -> Result<ComplexSamples> {
    if s.value() >= 2.5 {
        return invalid(format!("extension is only bounded for s < 5/2, got s = {}", s.value()));
    }
    let line = TruncatedLine::for_half_grid(phi.grid())?;
    Ok(extend_on(phi.values(), &line))
}

/// Raw extension of half-line values onto `line`.
pub fn extend_on(half: &[Complex64], line: &TruncatedLine) -> ComplexSamples {
    let n = line.n();
    let z0 = line.zero_index();
    let dx = line.dx();
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    v[z0..].copy_from_slice(&half[..n - z0]);
    for m in 1..=z0 {
        let w = window(m as f64 * dx, line.x_max());
        if w == 0.0 {
            continue;
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for &(stretch, a) in &REFLECTION {
            if let Some(&val) = half.get(stretch * m) {
                acc += val * a;
            }
        }
        v[z0 - m] = acc * w;
    }
    ComplexSamples::new(*line.grid(), v).expect("length")
}

/// Odd extension `phi*(-y) = -phi(y)`, windowed like [`extend_on`].
///
/// Only continuous when `phi(0) = 0`; used for the odd-data reduction.
pub fn extend_odd_on(half: &[Complex64], line: &TruncatedLine) -> ComplexSamples {
    let n = line.n();
    let z0 = line.zero_index();
    let dx = line.dx();
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    v[z0..].copy_from_slice(&half[..n - z0]);
    for m in 1..=z0 {
        if let Some(&val) = half.get(m) {
            v[z0 - m] = -val * window(m as f64 * dx, line.x_max());
        }
    }
    ComplexSamples::new(*line.grid(), v).expect("length")
}
