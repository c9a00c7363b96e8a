//! Numerical check of the weighted Hilbert-sum bound
//! `sum_n |int_0^inf f(mu) (1 - psi(n^2 - mu^2)) / (mu - n) dmu|^2 <= C int_0^inf (mu + 1) |f|^2`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::quad::integrate;

/// Even `C^infinity` cut-off: 1 on `[-1/2, 1/2]`, 0 outside `[-1, 1]`,
/// built from `exp(-1/u)` and strictly decreasing in between.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CutoffPsi {
    inner_radius: f64,
    outer_radius: f64,
}

impl Default for CutoffPsi {
    fn default() -> Self {
        Self { inner_radius: 0.5, outer_radius: 1.0 }
    }
}

impl CutoffPsi {
    pub fn inner_radius(&self) -> f64 {
        self.inner_radius
    }

    pub fn outer_radius(&self) -> f64 {
        self.outer_radius
    }

    pub fn eval(&self, x: f64) -> f64 {
        let y = (x.abs() - self.inner_radius) / (self.outer_radius - self.inner_radius);
        if y <= 0.0 {
            1.0
        } else if y >= 1.0 {
            0.0
        } else {
            let a = (-1.0 / (1.0 - y)).exp();
            let b = (-1.0 / y).exp();
            a / (a + b)
        }
    }

    /// Checks the profile on `n` points of `[-3/2, 3/2]`.
    pub fn check_profile(&self, n: usize) -> Result<()> {
        let xs: Vec<f64> = (0..n).map(|i| -1.5 + 3.0 * i as f64 / (n - 1) as f64).collect();
        for &x in &xs {
            let v = self.eval(x);
            let ok = (v - self.eval(-x)).abs() == 0.0
                && (x.abs() > self.inner_radius || v == 1.0)
                && (x.abs() < self.outer_radius || v == 0.0)
                && (0.0..=1.0).contains(&v);
            if !ok {
                return Err(Error::InvalidSpec(format!("cut-off profile fails at x = {x}: psi = {v}")));
            }
        }
        let inside: Vec<f64> =
            xs.iter().copied().filter(|x| *x > self.inner_radius && *x < self.outer_radius).map(|x| self.eval(x)).collect();
        // Away from the ends the values must drop at every step; next to
        // them they may round to exactly 0 or 1.
        if inside.windows(2).any(|w| w[1] > w[0] || (w[1] == w[0] && w[0] > 0.0 && w[0] < 1.0)) {
            return Err(Error::InvalidSpec("cut-off profile is not strictly decreasing on (1/2, 1)".into()));
        }
        Ok(())
    }
}

/// Test functions on `mu >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "family")]
pub enum LemmaFamily {
    Zero,
    /// `e^-mu`.
    Exponential,
    /// `(1 + i mu)^-2`, the transform of `t e^-t` on the half-line.
    Rational,
    /// Narrow bumps just past the cut-off region next to each of the first
    /// `bands` integers, where `1/(mu - n)` is largest.
    BandConcentrated { bands: usize },
}

impl LemmaFamily {
    pub fn eval(&self, mu: f64) -> Complex64 {
        match *self {
            LemmaFamily::Zero => Complex64::new(0.0, 0.0),
            LemmaFamily::Exponential => Complex64::new((-mu).exp(), 0.0),
            LemmaFamily::Rational => {
                let d = Complex64::new(1.0, mu);
                1.0 / (d * d)
            }
            LemmaFamily::BandConcentrated { bands } => {
                let mut acc = 0.0;
                let lo = (mu - 1.0).floor().max(1.0) as usize;
                for n in lo..=(lo + 2).min(bands) {
                    let nf = n as f64;
                    let z = (mu - nf - 0.6 / nf) * nf / 0.3;
                    acc += (-z * z).exp();
                }
                Complex64::new(acc, 0.0)
            }
        }
    }

    /// Beyond this point the family is below double precision.
    fn support_end(&self) -> Option<f64> {
        match *self {
            LemmaFamily::Zero => Some(0.0),
            LemmaFamily::BandConcentrated { bands } => Some(bands as f64 + 2.0),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LemmaA1Options {
    /// Terms `n = 1..=n_terms` summed directly.
    pub n_terms: usize,
    /// Upper end of the `mu` integrals.
    pub mu_max: f64,
    /// Gauss-Legendre panels per unit length (per unit of `log |mu - n|`
    /// next to `n`).
    pub panel_density: usize,
    /// Relative size of the neglected `int_{mu_max}^inf (mu+1)|f|^2`
    /// above which the check refuses.
    pub truncation_tol: f64,
}

impl Default for LemmaA1Options {
    fn default() -> Self {
        Self { n_terms: 128, mu_max: 64.0, panel_density: 16, truncation_tol: 1e-3 }
    }
}

impl LemmaA1Options {
    /// Every truncation parameter doubled.
    pub fn refined(&self) -> Self {
        Self { n_terms: 2 * self.n_terms, mu_max: 2.0 * self.mu_max, panel_density: 2 * self.panel_density, ..*self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LemmaA1Report {
    /// Left sum including the estimated tail `n > n_terms`.
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs / rhs`, or 0 when both vanish.
    pub ratio: f64,
    pub tail_estimate: f64,
}

fn panels(len: f64, density: usize) -> usize {
    ((len * density as f64).ceil() as usize).max(1)
}

/// `int_0^{mu_max} f(mu) (1 - psi(n^2 - mu^2)) / (mu - n) dmu`.
///
/// Next to `n` the substitution `mu = n +- e^v` turns the kernel into
/// `dv`, so the integrand stays bounded however close the cut-off edge is.
fn term(f: &(impl Fn(f64) -> Complex64 + Sync), psi: &CutoffPsi, n: usize, mu_max: f64, density: usize) -> Complex64 {
    let nf = n as f64;
    let cut = |mu: f64| 1.0 - psi.eval(nf * nf - mu * mu);
    let plain = |a: f64, b: f64| -> Complex64 {
        if b <= a {
            return Complex64::new(0.0, 0.0);
        }
        integrate(a, b, panels(b - a, density), |mu| f(mu) * (cut(mu) / (mu - nf)))
    };
    // mu = n + sign e^v over mu in [a, b] on one side of n; dmu/(mu - n) = dv
    // with the orientation reversed on the left.
    let graded = |a: f64, b: f64, sign: f64| -> Complex64 {
        let (da, db) = ((a - nf).abs(), (b - nf).abs());
        let (lo, hi) = (da.min(db).ln(), da.max(db).ln());
        if hi <= lo {
            return Complex64::new(0.0, 0.0);
        }
        integrate(lo, hi, panels(hi - lo, density), |v| {
            let mu = nf + sign * v.exp();
            f(mu) * cut(mu)
        }) * sign
    };
    let (ri, ro) = (psi.inner_radius(), psi.outer_radius());
    // Right of n: cut-off vanishes below sqrt(n^2 + ri), is active up to sqrt(n^2 + ro).
    let r0 = (nf * nf + ri).sqrt().min(mu_max);
    let r1 = (nf * nf + ro).sqrt().min(mu_max);
    let r2 = (nf + 1.0).min(mu_max);
    let mut acc = graded(r0, r1, 1.0) + graded(r1, r2, 1.0) + plain(r2, mu_max);
    // Left of n.
    let l0 = (nf * nf - ri).max(0.0).sqrt().min(mu_max);
    let l1 = (nf * nf - ro).max(0.0).sqrt().min(mu_max);
    let l2 = (nf - 1.0).max(0.0).min(l1);
    acc += graded(l1, l0, -1.0) + graded(l2, l1, -1.0) + plain(0.0, l2);
    acc
}

/// Evaluates both sides of the bound for the given `f`.
pub fn lemma_a1_check_fn(
    f: impl Fn(f64) -> Complex64 + Sync,
    psi: &CutoffPsi,
    opts: &LemmaA1Options,
) -> Result<LemmaA1Report> {
    if opts.n_terms == 0 || !(opts.mu_max > 1.0) || opts.panel_density == 0 {
        return Err(Error::InvalidInput(format!("bad truncation parameters {opts:?}")));
    }
    let dens = opts.panel_density;
    let weight = |mu: f64| (mu + 1.0) * f(mu).norm_sqr();
    let rhs = integrate(0.0, opts.mu_max, panels(opts.mu_max, dens), weight);
    let edge = weight(opts.mu_max) * opts.mu_max;
    if edge > opts.truncation_tol * rhs && edge > 0.0 {
        return Err(Error::Truncation(format!(
            "f has not decayed at mu_max = {}: (mu+1)|f|^2 mu = {edge:.3e} vs rhs {rhs:.3e}",
            opts.mu_max
        )));
    }
    let head: Vec<f64> = (1..=opts.n_terms)
        .into_par_iter()
        .map(|n| term(&f, psi, n, opts.mu_max, dens).norm_sqr())
        .collect();
    let head_sum: f64 = head.iter().sum();
    // Far terms: 1/(mu - n) = -(1/n) sum_j (mu/n)^j away from the support.
    let moments: Vec<Complex64> = (0..4)
        .map(|j| integrate(0.0, opts.mu_max, panels(opts.mu_max, dens), |mu| f(mu) * mu.powi(j)))
        .collect();
    let n0 = opts.n_terms + 1;
    let n1 = 64 * n0;
    let far = |n: usize| {
        let nf = n as f64;
        let s: Complex64 = moments.iter().enumerate().map(|(j, m)| m / nf.powi(j as i32)).sum();
        s.norm_sqr() / (nf * nf)
    };
    let mut tail: f64 = (n0..n1).map(far).sum();
    tail += moments[0].norm_sqr() / n1 as f64;
    let lhs = head_sum + tail;
    let ratio = if rhs == 0.0 { 0.0 } else { lhs / rhs };
    Ok(LemmaA1Report { lhs, rhs, ratio, tail_estimate: tail })
}

/// [`lemma_a1_check_fn`] for a named family.
pub fn lemma_a1_check(f: &LemmaFamily, psi: &CutoffPsi, opts: &LemmaA1Options) -> Result<LemmaA1Report> {
    if let Some(end) = f.support_end() {
        if opts.n_terms as f64 <= end + 1.0 || opts.mu_max <= end {
            return Err(Error::Truncation(format!("family is supported up to mu = {end}; raise n_terms and mu_max")));
        }
    }
    let f = *f;
    lemma_a1_check_fn(move |mu| f.eval(mu), psi, opts)
}
