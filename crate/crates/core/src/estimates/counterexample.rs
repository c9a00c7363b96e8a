//! Sharpness family for the interval boundary operator in `L^2`.
//!
//! Data `h_k(t) = sum_{0 < |m| <= k} |m|^-beta e^{-i pi^2 (m^2+1) t}` on one
//! period `(0, 2/pi)`. Writing `h = sum_j c_j e^{-i pi^2 j t}` with
//! `c_j = 2 m^-beta` at `j = m^2 + 1`, the sine coefficient of `W_h h` is
//! `(2n/pi) sum_j c_j (e^{-i pi^2 j t} - e^{-i pi^2 n^2 t}) / (n^2 - j)`.
//! No `j` is a square, so the exponentials are orthogonal over the period and
//!
//! `||u||^2 = (4/pi^3) sum_n n^2 [ sum_j c_j^2/(n^2-j)^2 + (sum_j c_j/(n^2-j))^2 ]`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::BoundaryTrace;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleSpec {
    alpha: f64,
    beta: f64,
    k_list: Vec<usize>,
    #[serde(default)]
    control: bool,
}

fn check_k_list(k_list: &[usize]) -> Result<()> {
    if k_list.is_empty() || k_list[0] == 0 || k_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidSpec(format!("k_list must be increasing positive integers, got {k_list:?}")));
    }
    Ok(())
}

impl CounterexampleSpec {
    /// Requires `0 <= alpha < 1/2` and `2 alpha + 1/2 < beta < 3/2`.
    pub fn new(alpha: f64, beta: f64, k_list: Vec<usize>) -> Result<Self> {
        if !(0.0..0.5).contains(&alpha) {
            return Err(Error::InvalidSpec(format!("alpha must lie in [0, 1/2), got {alpha}")));
        }
        if !(2.0 * alpha + 0.5 < beta && beta < 1.5) {
            return Err(Error::InvalidSpec(format!(
                "beta must satisfy 2 alpha + 1/2 < beta < 3/2, i.e. {} < beta < 1.5; got {beta}",
                2.0 * alpha + 0.5
            )));
        }
        check_k_list(&k_list)?;
        Ok(Self { alpha, beta, k_list, control: false })
    }

    /// Same family measured in a norm outside the window (e.g. `alpha = 1/2`).
    pub fn control(alpha: f64, beta: f64, k_list: Vec<usize>) -> Result<Self> {
        if !(alpha >= 0.0 && alpha.is_finite() && beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidSpec(format!("control run needs alpha >= 0, beta > 0; got {alpha}, {beta}")));
        }
        check_k_list(&k_list)?;
        Ok(Self { alpha, beta, k_list, control: true })
    }

    /// Re-checks the invariants, e.g. after deserialisation.
    pub fn validated(self) -> Result<Self> {
        if self.control {
            Self::control(self.alpha, self.beta, self.k_list)
        } else {
            Self::new(self.alpha, self.beta, self.k_list)
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn k_list(&self) -> &[usize] {
        &self.k_list
    }

    pub fn is_control(&self) -> bool {
        self.control
    }

    /// `(j, c_j)` for `h_k`.
    pub fn coefficients(&self, k: usize) -> Vec<(u64, f64)> {
        (1..=k as u64)
            .map(|m| {
                let j = m * m + 1;
                let r = (j as f64).sqrt().round() as u64;
                assert!(r * r != j, "frequency {j} is a perfect square");
                (j, 2.0 * (m as f64).powf(-self.beta))
            })
            .collect()
    }

    /// `h_k` sampled at `n_samples` points of `[0, 2/pi]`.
    pub fn boundary_trace(&self, k: usize, n_samples: usize) -> Result<BoundaryTrace> {
        let c = self.coefficients(k);
        BoundaryTrace::from_fn(n_samples, period(), |t| {
            c.iter().map(|&(j, cj)| Complex64::from_polar(cj, -PI * PI * j as f64 * t)).sum()
        })
    }
}

/// Period `2/pi` of the family, used as the time horizon.
pub fn period() -> f64 {
    2.0 / PI
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CounterexampleRow {
    pub k: usize,
    /// `||u_{h_k}||^2` over `(0,1) x (0, 2/pi)`.
    pub u_norm_sq: f64,
    /// `||h_k||^2_{H^alpha}` (periodic Fourier norm on the period).
    pub h_norm_sq: f64,
    /// `R_k = u_norm_sq / h_norm_sq`.
    pub ratio: f64,
    /// `sum_{n <= k} n^2 pi^2 n^-2beta`, which diverges for `beta < 3/2`.
    pub lower_bound: f64,
    /// Bound on the error of the `u` series after its analytic tail.
    pub tail_bound: f64,
}

/// `sum_{n > N} n^-s` by Euler-Maclaurin.
fn zeta_tail(s: f64, n: f64) -> f64 {
    n.powf(1.0 - s) / (s - 1.0) - 0.5 * n.powf(-s) + s / 12.0 * n.powf(-s - 1.0)
}

/// `||u||^2` by the exact double series. Terms up to `N = 64 (k + 1)` are
/// summed directly, the rest through the large-`n` expansion in `j / n^2`.
fn u_norm_sq(c: &[(u64, f64)]) -> (f64, f64) {
    let k = c.len();
    let big_n = 64 * (k + 1);
    let direct: f64 = (1..=big_n)
        .into_par_iter()
        .map(|n| {
            let n2 = (n * n) as f64;
            let (mut s2, mut s1) = (0.0, 0.0);
            for &(j, cj) in c {
                let d = n2 - j as f64;
                s2 += cj * cj / (d * d);
                s1 += cj / d;
            }
            n2 * (s2 + s1 * s1)
        })
        .collect::<Vec<_>>()
        .iter()
        .sum();
    // n^2 [..] = n^-2 (A0 + B0^2) + n^-4 (2 A1 + 2 B0 B1) + n^-6 (3 A2 + B1^2 + 2 B0 B2) + ...
    let moment = |p: i32, sq: bool| c.iter().map(|&(j, cj)| (if sq { cj * cj } else { cj }) * (j as f64).powi(p)).sum::<f64>();
    let (a0, a1, a2) = (moment(0, true), moment(1, true), moment(2, true));
    let (b0, b1, b2) = (moment(0, false), moment(1, false), moment(2, false));
    let nf = big_n as f64;
    let tail = (a0 + b0 * b0) * zeta_tail(2.0, nf)
        + (2.0 * a1 + 2.0 * b0 * b1) * zeta_tail(4.0, nf)
        + (3.0 * a2 + b1 * b1 + 2.0 * b0 * b2) * zeta_tail(6.0, nf);
    let jmax = c.last().map_or(1.0, |&(j, _)| j as f64);
    // Next order is smaller than the last retained one by about j_max / N^2.
    let bound = (3.0 * a2 + b1 * b1 + 2.0 * b0 * b2).abs() * zeta_tail(6.0, nf) * 4.0 * jmax / (nf * nf)
        + 1e-15 * direct;
    let scale = 4.0 / PI.powi(3);
    (scale * (direct + tail), scale * bound)
}

/// Periodic `H^alpha` norm squared on `(0, 2/pi)`.
fn h_norm_sq(c: &[(u64, f64)], alpha: f64) -> f64 {
    period() * c.iter().map(|&(j, cj)| (1.0 + (PI * PI * j as f64).powi(2)).powf(alpha) * cj * cj).sum::<f64>()
}

/// `R_k` and the lower bound for every `k` in `k_list`.
pub fn counterexample_norm_series(spec: &CounterexampleSpec) -> Result<Vec<CounterexampleRow>> {
    let spec = spec.clone().validated()?;
    Ok(spec
        .k_list()
        .iter()
        .map(|&k| {
            let c = spec.coefficients(k);
            let (u, tail_bound) = u_norm_sq(&c);
            let h = h_norm_sq(&c, spec.alpha());
            let lower_bound = (1..=k).map(|n| PI * PI * (n as f64).powf(2.0 - 2.0 * spec.beta())).sum();
            CounterexampleRow { k, u_norm_sq: u, h_norm_sq: h, ratio: u / h, lower_bound, tail_bound }
        })
        .collect())
}
