//! Grids, transforms, extensions and norms shared by every solver.

mod dst;
pub mod fd;
pub mod fft;
pub mod filon;
mod grid;
mod index;
mod norms;
pub mod quad;

pub use dst::{dst_forward, dst_inverse, SineSpectrum};
pub use grid::{BoundaryTrace, ComplexSamples, Grid1D, SpaceTimeField};
pub use index::{AdmissiblePair, SobolevIndex};
pub use norms::{
    cumulative_trapezoid, lebesgue, mixed_norm, odd_extension, sobolev_norm_samples, sobolev_norm_time,
    sobolev_norm_time_padded, trapezoid, trapezoid_complex, DEFAULT_PADDING,
};

/// Smooth monotone step: 0 for `u <= 0`, 1 for `u >= 1`, `C^infinity`.
pub fn smooth_step(u: f64) -> f64 {
    if u <= 0.0 {
        0.0
    } else if u >= 1.0 {
        1.0
    } else {
        let a = (-1.0 / u).exp();
        let b = (-1.0 / (1.0 - u)).exp();
        a / (a + b)
    }
}
