//! Laplace-transform symbol of boundary data and the pointwise boundary
//! operators `W_{b,1}`, `W_{b,2}`.
//!
//! With `h~(lambda) = int_0^T e^{-lambda tau} h(tau) dtau` the half-line
//! solution of `i u_t + u_xx = 0`, `u(x,0) = 0`, `u(0,t) = h(t)` is
//! `wb1 + wb2`, where in the variable `omega = beta^2`
//!
//! `wb1(x,t) = (1/2pi) int_0^inf e^{-i omega t + i sqrt(omega) x} h~(-i omega) d omega`,
//! `wb2(x,t) = (1/2pi) int_0^inf e^{ i omega t - sqrt(omega) |x|} h~( i omega) d omega`.
//!
//! At `x = 0` the two pieces together are the Fourier inversion of `h`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::spectral::filon::{filon_integral, filon_nonuniform};
use crate::spectral::BoundaryTrace;

/// Default relative mass allowed in the last decile of the frequency grid.
pub const DEFAULT_BANDWIDTH_TOL: f64 = 1e-3;

/// Values `h~(-i beta^2)` and `h~(i beta^2)` on a grid of `beta` nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct LaplaceBoundarySymbol {
    pub beta_grid: Vec<f64>,
    pub minus_branch: Vec<Complex64>,
    pub plus_branch: Vec<Complex64>,
}

/// Frequency grid uniform in `omega = beta^2`.
#[derive(Debug, Clone, Copy)]
pub struct BetaGridSpec {
    /// Nodes per `2 pi / T` period of the symbol's oscillation in omega.
    pub per_period: usize,
    /// Cut-off as a multiple of the sampling frequency `2 pi / dt`.
    pub bands: f64,
}

impl Default for BetaGridSpec {
    fn default() -> Self {
        Self { per_period: 64, bands: 4.0 }
    }
}

impl BetaGridSpec {
    /// Grid for data on `[0, t_final]` sampled every `dt`.
    pub fn nodes(&self, t_final: f64, dt: f64) -> Vec<f64> {
        let d_omega = 2.0 * PI / (t_final * self.per_period as f64);
        let omega_max = self.bands * 2.0 * PI / dt;
        let n = (omega_max / d_omega).ceil() as usize;
        (0..=n).map(|k| (k as f64 * d_omega).sqrt()).collect()
    }

    pub fn refined(&self) -> Self {
        Self { per_period: 2 * self.per_period, bands: 2.0 * self.bands }
    }
}

/// Evaluates the symbol of the zero-extended piecewise-linear `h`.
pub fn laplace_symbol(h: &BoundaryTrace, beta_grid: &[f64]) -> Result<LaplaceBoundarySymbol> {
    if beta_grid.windows(2).any(|w| !(w[1] > w[0])) || beta_grid.first().is_some_and(|&b| b < 0.0) {
        return invalid("beta grid must be non-negative and strictly increasing");
    }
    let t = h.t_final();
    let vals: Vec<(Complex64, Complex64)> = beta_grid
        .par_iter()
        .map(|&b| {
            let w = b * b;
            (filon_integral(h.samples(), h.dt(), w, t), filon_integral(h.samples(), h.dt(), -w, t))
        })
        .collect();
    let (minus_branch, plus_branch) = vals.into_iter().unzip();
    Ok(LaplaceBoundarySymbol { beta_grid: beta_grid.to_vec(), minus_branch, plus_branch })
}

impl LaplaceBoundarySymbol {
    fn omegas(&self) -> Vec<f64> {
        self.beta_grid.iter().map(|b| b * b).collect()
    }

    /// Fails when the last decile of the grid carries more than `tol` of the
    /// symbol's total mass.
    pub fn check_bandwidth(&self, tol: f64) -> Result<()> {
        let om = self.omegas();
        let n = om.len();
        if n < 10 {
            return invalid("beta grid too short");
        }
        let cut = om[n - 1] * 0.9;
        let mut total = 0.0;
        let mut tail = 0.0;
        for k in 0..n - 1 {
            let d = om[k + 1] - om[k];
            let m = 0.5 * d
                * (self.minus_branch[k].norm()
                    + self.minus_branch[k + 1].norm()
                    + self.plus_branch[k].norm()
                    + self.plus_branch[k + 1].norm());
            total += m;
            if om[k] >= cut {
                tail += m;
            }
        }
        if total > 0.0 && tail / total > tol {
            return Err(Error::Bandwidth { fraction: tail / total, tol });
        }
        Ok(())
    }

    /// `W_{b,1} h (x, t)`.
    pub fn wb1(&self, x: f64, t: f64) -> Complex64 {
        let om = self.omegas();
        let amp: Vec<Complex64> = self
            .beta_grid
            .iter()
            .zip(&self.minus_branch)
            .map(|(&b, &hm)| hm * Complex64::from_polar(1.0, b * x))
            .collect();
        filon_nonuniform(&om, &amp, -t) / (2.0 * PI)
    }

    /// `W_{b,2} h (x, t)`, using `|x|`.
    pub fn wb2(&self, x: f64, t: f64) -> Complex64 {
        let om = self.omegas();
        let amp: Vec<Complex64> =
            self.beta_grid.iter().zip(&self.plus_branch).map(|(&b, &hp)| hp * (-b * x.abs()).exp()).collect();
        filon_nonuniform(&om, &amp, t) / (2.0 * PI)
    }

    /// Modulus bound `(1/2pi) int |h~(i omega)| e^{-sqrt(omega) |x|} d omega`
    /// for `|wb2(x, .)|`, non-increasing in `|x|`.
    pub fn wb2_bound(&self, x: f64) -> f64 {
        let om = self.omegas();
        let a: Vec<f64> =
            self.beta_grid.iter().zip(&self.plus_branch).map(|(&b, hp)| hp.norm() * (-b * x.abs()).exp()).collect();
        let mut s = 0.0;
        for k in 0..om.len() - 1 {
            s += 0.5 * (om[k + 1] - om[k]) * (a[k] + a[k + 1]);
        }
        s / (2.0 * PI)
    }
}

/// `wb1(h, x, t)` on the default grid, checking bandwidth.
pub fn wb1(h: &BoundaryTrace, x: f64, t: f64) -> Result<Complex64> {
    let sym = default_symbol(h)?;
    Ok(sym.wb1(x, t))
}

/// `wb2(h, x, t)` on the default grid, checking bandwidth.
pub fn wb2(h: &BoundaryTrace, x: f64, t: f64) -> Result<Complex64> {
    let sym = default_symbol(h)?;
    Ok(sym.wb2(x, t))
}

pub fn default_symbol(h: &BoundaryTrace) -> Result<LaplaceBoundarySymbol> {
    let grid = BetaGridSpec::default().nodes(h.t_final(), h.dt());
    let sym = laplace_symbol(h, &grid)?;
    sym.check_bandwidth(DEFAULT_BANDWIDTH_TOL)?;
    Ok(sym)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_data_gives_zero_symbol() {
        let h = BoundaryTrace::zeros(21, 1.0).unwrap();
        let s = laplace_symbol(&h, &[0.0, 0.5, 1.0]).unwrap();
        assert!(s.minus_branch.iter().chain(&s.plus_branch).all(|z| z.norm() == 0.0));
        assert_eq!(s.wb1(0.3, 0.5), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn exponential_closed_form() {
        let a = -0.7;
        let t_end = 1.5;
        let h = BoundaryTrace::from_fn(30001, t_end, |t| Complex64::new((a * t).exp(), 0.0)).unwrap();
        let betas = [0.3, 1.0, 2.5, 4.0];
        let s = laplace_symbol(&h, &betas).unwrap();
        for (k, &b) in betas.iter().enumerate() {
            for (lam, got) in [(Complex64::new(0.0, -b * b), s.minus_branch[k]), (Complex64::new(0.0, b * b), s.plus_branch[k])] {
                let exact = (((a - lam) * t_end).exp() - 1.0) / (a - lam);
                assert!((got - exact).norm() < 1e-8, "beta {b}");
            }
        }
    }

    #[test]
    fn unsorted_grid_rejected() {
        let h = BoundaryTrace::zeros(21, 1.0).unwrap();
        assert!(laplace_symbol(&h, &[1.0, 0.5]).is_err());
    }
}
