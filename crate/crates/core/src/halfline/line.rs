//! Free Schrodinger flow on a periodic truncation of the real line.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{invalid, Annotated, Result, Warning};
use crate::spectral::fft::{self, angular_frequencies};
use crate::spectral::filon::{row_slopes, ModalDuhamel};
use crate::spectral::{ComplexSamples, Grid1D, SpaceTimeField};

/// Mass fraction near the edges above which a warning is raised.
pub const TRUNCATION_WARN_FRACTION: f64 = 1e-6;

/// Periodic grid `x_j = -x_max + j dx`, `j = 0..n`, `dx = 2 x_max / n`.
/// The node `j = n/2` is `x = 0`; `x_max` itself coincides with `-x_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedLine {
    x_max: f64,
    grid: Grid1D,
}

impl TruncatedLine {
    pub fn new(x_max: f64, n: usize) -> Result<Self> {
        if n < 8 || n % 2 != 0 {
            return invalid(format!("line grid needs an even number of points >= 8, got {n}"));
        }
        if !(x_max > 0.0 && x_max.is_finite()) {
            return invalid(format!("x_max must be positive, got {x_max}"));
        }
        let dx = 2.0 * x_max / n as f64;
        Ok(Self { x_max, grid: Grid1D::new(-x_max, 2.0 * x_max - dx, n)? })
    }

    /// The line whose non-negative half is `half` (`[0, x_max - dx]`).
    pub fn for_half_grid(half: &Grid1D) -> Result<Self> {
        if half.origin().abs() > 1e-12 {
            return invalid("half-line grid must start at x = 0");
        }
        let dx = half.spacing();
        Self::new(half.end() + dx, 2 * half.n_points())
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn n(&self) -> usize {
        self.grid.n_points()
    }

    pub fn dx(&self) -> f64 {
        self.grid.spacing()
    }

    pub fn zero_index(&self) -> usize {
        self.n() / 2
    }

    /// Non-negative half `[0, x_max - dx]`.
    pub fn half_grid(&self) -> Grid1D {
        Grid1D::new(0.0, self.x_max - self.dx(), self.n() / 2).expect("valid")
    }

    pub fn frequencies(&self) -> Vec<f64> {
        angular_frequencies(self.n(), self.dx())
    }

    /// Restriction of line samples to the non-negative half.
    pub fn restrict(&self, v: &[Complex64]) -> Vec<Complex64> {
        v[self.zero_index()..].to_vec()
    }
}

/// Fraction of `sum |v|^2` within five cells of either end of the array.
pub fn edge_mass_fraction(v: &[Complex64]) -> f64 {
    let total: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    if total == 0.0 {
        return 0.0;
    }
    let n = v.len();
    let k = 5.min(n / 2);
    let edge: f64 = v[..k].iter().chain(&v[n - k..]).map(|z| z.norm_sqr()).sum();
    edge / total
}

fn propagate(spec: &[Complex64], xi: &[f64], t: f64) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> =
        spec.iter().zip(xi).map(|(&c, &k)| c * Complex64::from_polar(1.0, -k * k * t)).collect();
    fft::ifft(&mut buf);
    buf
}

/// `e^{i t d_xx} psi`: multiplies the FFT spectrum by `e^{-i xi^2 t}`.
pub fn free_propagator_line(psi: &ComplexSamples, t: f64) -> Annotated<ComplexSamples> {
    let xi = angular_frequencies(psi.len(), psi.grid().spacing());
    let mut spec = psi.values().to_vec();
    fft::fft(&mut spec);
    let v = propagate(&spec, &xi, t);
    let frac = edge_mass_fraction(&v).max(edge_mass_fraction(psi.values()));
    let mut warnings = Vec::new();
    if frac > TRUNCATION_WARN_FRACTION {
        warnings.push(Warning::NearTruncation { fraction: frac });
    }
    Annotated { value: ComplexSamples::new(*psi.grid(), v).expect("length"), warnings }
}

/// Free evolution of `psi` at every node of `times`.
pub fn free_field_line(psi: &ComplexSamples, times: &Grid1D) -> Annotated<SpaceTimeField> {
    let xi = angular_frequencies(psi.len(), psi.grid().spacing());
    let mut spec = psi.values().to_vec();
    fft::fft(&mut spec);
    let rows: Vec<Vec<Complex64>> = times.nodes().par_iter().map(|&t| propagate(&spec, &xi, t)).collect();
    let frac = rows.iter().map(|r| edge_mass_fraction(r)).fold(0.0, f64::max);
    let field = SpaceTimeField::from_snapshots(*psi.grid(), *times, rows).expect("shapes");
    let mut warnings = Vec::new();
    if frac > TRUNCATION_WARN_FRACTION {
        warnings.push(Warning::NearTruncation { fraction: frac });
    }
    Annotated { value: field, warnings }
}

/// `-i int_0^t e^{i (t - tau) d_xx} f(tau) dtau` on the periodic line, with
/// each Fourier mode integrated exactly against the cubic Hermite interpolant of `f`.
pub fn line_duhamel_field(f: &SpaceTimeField) -> SpaceTimeField {
    let n = f.nx();
    let xi = angular_frequencies(n, f.space().spacing());
    let omega: Vec<f64> = xi.iter().map(|k| k * k).collect();
    let spectra: Vec<Vec<Complex64>> = f
        .rows()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|r| {
            let mut b = r.to_vec();
            fft::fft(&mut b);
            b
        })
        .collect();
    let dt = f.time().spacing();
    let slopes = row_slopes(&spectra, dt);
    let md = ModalDuhamel::new(&omega, dt);
    let mut state = vec![Complex64::new(0.0, 0.0); n];
    let mut states = Vec::with_capacity(f.nt());
    states.push(state.clone());
    for k in 0..f.nt() - 1 {
        md.step(&mut state, &spectra[k], &spectra[k + 1], &slopes[k], &slopes[k + 1]);
        states.push(state.clone());
    }
    let minus_i = Complex64::new(0.0, -1.0);
    let rows: Vec<Vec<Complex64>> = states
        .into_par_iter()
        .map(|mut s| {
            s.iter_mut().for_each(|z| *z *= minus_i);
            fft::ifft(&mut s);
            s
        })
        .collect();
    SpaceTimeField::from_snapshots(*f.space(), *f.time(), rows).expect("shapes")
}
