//! Half-line boundary operator evaluated on a space-time grid.
//!
//! The solution with zero initial data and Dirichlet data `b` is
//! `u(x,t) = (1/2pi) int e^{lambda t + r(lambda) x} b~(lambda) d omega`
//! along `lambda = gamma + i omega`, with `r(lambda) = -sqrt(-i lambda)`
//! (the root with `Re r < 0`). Sampling `omega` on an FFT grid turns this
//! into one inverse FFT per spatial node. The damping `gamma` suppresses the
//! periodic images of the data by `e^{-gamma P}`, `P` the FFT period; the data
//! are tapered to zero after `T` so the zero-padding adds no jump, which by
//! causality leaves `u` on `[0, T]` unaffected. At `x = 0` the samples of `b`
//! are reproduced exactly.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::spectral::fft::{self, angular_frequencies};
use crate::spectral::{smooth_step, Grid1D, SpaceTimeField};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryOperatorOptions {
    /// FFT length as a multiple of the tapered data length.
    pub oversample: usize,
    /// `gamma P`, the damping exponent across one FFT period.
    pub damping: f64,
    /// Taper length after `T`, as a fraction of the data length.
    pub taper: f64,
}

impl Default for BoundaryOperatorOptions {
    fn default() -> Self {
        Self { oversample: 4, damping: 25.0, taper: 0.25 }
    }
}

/// Precomputed transform for data on a fixed time grid.
#[derive(Debug, Clone)]
pub struct BoundaryOperator {
    nt: usize,
    len: usize,
    gamma: f64,
    dt: f64,
    taper_steps: usize,
    roots: Vec<Complex64>,
    /// Root for the opposite sign of the Nyquist bin (averaged).
    nyquist_alt: Complex64,
}

impl BoundaryOperator {
    pub fn new(times: &Grid1D, opts: BoundaryOperatorOptions) -> Self {
        let nt = times.n_points();
        let dt = times.spacing();
        let taper_steps = ((opts.taper * (nt - 1) as f64).ceil() as usize).max(8);
        let len = (opts.oversample.max(2) * (nt + taper_steps)).next_power_of_two();
        let period = len as f64 * dt;
        let gamma = opts.damping / period;
        let root = |w: f64| -(Complex64::new(0.0, -1.0) * Complex64::new(gamma, w)).sqrt();
        let roots: Vec<Complex64> = angular_frequencies(len, dt).into_iter().map(root).collect();
        let nyquist_alt = root(-(roots.len() as f64) * std::f64::consts::PI / period);
        Self { nt, len, gamma, dt, taper_steps, roots, nyquist_alt }
    }

    fn damped_spectrum(&self, b: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(b.len(), self.nt, "data must live on the operator's time grid");
        let mut g = vec![Complex64::new(0.0, 0.0); self.len];
        let n = self.nt - 1;
        // Continue past T with the local quadratic Taylor polynomial so the
        // tapered data stay C^2 at T; a kink there spoils the last few steps.
        let (d1, d2) = if self.nt >= 4 {
            (
                (b[n] * 3.0 - b[n - 1] * 4.0 + b[n - 2]) * 0.5,
                b[n] * 2.0 - b[n - 1] * 5.0 + b[n - 2] * 4.0 - b[n - 3],
            )
        } else {
            (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))
        };
        for (m, gm) in g.iter_mut().enumerate().take(self.nt + self.taper_steps) {
            let v = if m < self.nt {
                b[m]
            } else {
                let k = (m - n) as f64;
                let u = k / (self.taper_steps + 1) as f64;
                (b[n] + d1 * k + d2 * (0.5 * k * k)) * (1.0 - smooth_step(u))
            };
            *gm = v * (-self.gamma * m as f64 * self.dt).exp();
        }
        fft::fft(&mut g);
        g
    }

    fn column(&self, spec: &[Complex64], x: f64) -> Vec<Complex64> {
        let half = self.len / 2;
        let mut buf: Vec<Complex64> = spec
            .iter()
            .zip(&self.roots)
            .enumerate()
            .map(|(k, (&s, &r))| {
                if k == half {
                    s * 0.5 * ((r * x).exp() + (self.nyquist_alt * x).exp())
                } else {
                    s * (r * x).exp()
                }
            })
            .collect();
        fft::ifft(&mut buf);
        buf.truncate(self.nt);
        for (m, v) in buf.iter_mut().enumerate() {
            *v *= (self.gamma * m as f64 * self.dt).exp();
        }
        // Away from the boundary the field starts from rest; the FFT only
        // approximates this through the corner of the data at t = 0.
        if x > 0.0 {
            buf[0] = Complex64::new(0.0, 0.0);
        }
        buf
    }

    /// Field on `space x times` for boundary samples `b`.
    pub fn apply(&self, b: &[Complex64], space: &Grid1D, times: &Grid1D) -> SpaceTimeField {
        let spec = self.damped_spectrum(b);
        let cols: Vec<Vec<Complex64>> = space.nodes().par_iter().map(|&x| self.column(&spec, x)).collect();
        let nx = space.n_points();
        let mut data = vec![Complex64::new(0.0, 0.0); nx * self.nt];
        for (j, c) in cols.iter().enumerate() {
            for (k, &v) in c.iter().enumerate() {
                data[k * nx + j] = v;
            }
        }
        SpaceTimeField::new(*space, *times, data).expect("shapes")
    }

    /// Time series at a single position.
    pub fn apply_at(&self, b: &[Complex64], x: f64) -> Vec<Complex64> {
        self.column(&self.damped_spectrum(b), x)
    }
}
