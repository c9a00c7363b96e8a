//! Mass, energy and their boundary-flux balances.
//!
//! For `i u_t + u_xx + lambda |u|^{p-2} u = 0` on `(a, b)`:
//!
//! `d/dt int |u|^2 = -2 Im(conj(u) u_x) |_a^b`,
//! `d/dt int (|u_x|^2 - (2 lambda / p) |u|^p) = 2 Re(u_x conj(u_t)) |_a^b`.
//!
//! On the half-line the far end is dropped. Boundary values of `u` and
//! `u_t` are the Dirichlet data and their time derivative.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::nonlinear::BoundaryData;
use crate::spectral::fd::derivative4;
use crate::spectral::{cumulative_trapezoid, trapezoid, trapezoid_complex, ComplexSamples, SpaceTimeField};

#[derive(Debug, Clone, PartialEq)]
pub struct BalanceReport {
    pub i_series: Vec<f64>,
    pub ii_series: Vec<f64>,
    /// `int_0^t` of the boundary flux.
    pub flux_integral: Vec<f64>,
    /// Change of the balanced quantity minus the accumulated flux.
    pub residual: Vec<f64>,
}

impl BalanceReport {
    pub fn max_abs_residual(&self) -> f64 {
        self.residual.iter().fold(0.0, |m, r| m.max(r.abs()))
    }
}

fn row_mass_energy(row: &[Complex64], dx: f64, p: f64, lambda: f64) -> (f64, f64) {
    let d = derivative4(row, dx);
    let m: Vec<f64> = row.iter().map(|z| z.norm_sqr()).collect();
    let e: Vec<f64> = row.iter().zip(&d).map(|(z, dz)| dz.norm_sqr() - 2.0 * lambda / p * z.norm().powf(p)).collect();
    (trapezoid(&m, dx), trapezoid(&e, dx))
}

/// `I(t) = int |u|^2`, `II(t) = int |u_x|^2 - (2 lambda / p) |u|^p`.
pub fn mass_energy(u: &SpaceTimeField, p: f64, lambda: f64) -> (Vec<f64>, Vec<f64>) {
    let dx = u.space().spacing();
    let rows: Vec<&[Complex64]> = u.rows().collect();
    rows.par_iter().map(|r| row_mass_energy(r, dx, p, lambda)).unzip()
}

/// Centered differences in time, second-order one-sided at the ends.
fn time_derivative(v: &[Complex64], dt: f64) -> Vec<Complex64> {
    let n = v.len();
    if n < 3 {
        let d = (v[n - 1] - v[0]) / dt;
        return vec![d; n];
    }
    let mut d = Vec::with_capacity(n);
    d.push((v[0] * -3.0 + v[1] * 4.0 - v[2]) / (2.0 * dt));
    for k in 1..n - 1 {
        d.push((v[k + 1] - v[k - 1]) / (2.0 * dt));
    }
    d.push((v[n - 1] * 3.0 - v[n - 2] * 4.0 + v[n - 3]) / (2.0 * dt));
    d
}

struct Ends {
    /// `(u, u_x, u_t)` at the left end per time node.
    left: Vec<(Complex64, Complex64, Complex64)>,
    right: Option<Vec<(Complex64, Complex64, Complex64)>>,
}

fn ends(u: &SpaceTimeField, boundary: &BoundaryData) -> Result<Ends> {
    let nt = u.nt();
    let dx = u.space().spacing();
    let dt = u.time().spacing();
    let check = |n: usize| {
        if n != nt {
            return invalid(format!("boundary data has {n} samples, field has {nt} time nodes"));
        }
        Ok(())
    };
    let ux: Vec<(Complex64, Complex64)> = u
        .rows()
        .map(|r| {
            let d = derivative4(r, dx);
            (d[0], d[d.len() - 1])
        })
        .collect();
    let side = |h: &[Complex64], right: bool| {
        let ht = time_derivative(h, dt);
        (0..nt).map(|k| (h[k], if right { ux[k].1 } else { ux[k].0 }, ht[k])).collect::<Vec<_>>()
    };
    Ok(match boundary {
        BoundaryData::HalfLine(h) => {
            check(h.len())?;
            Ends { left: side(h.samples(), false), right: None }
        }
        BoundaryData::Interval(bc) => {
            check(bc.h1().len())?;
            Ends { left: side(bc.h1().samples(), false), right: Some(side(bc.h2().samples(), true)) }
        }
    })
}

fn balance(
    u: &SpaceTimeField,
    boundary: &BoundaryData,
    p: f64,
    lambda: f64,
    flux_at: impl Fn((Complex64, Complex64, Complex64)) -> f64,
    energy: bool,
) -> Result<BalanceReport> {
    let (i_series, ii_series) = mass_energy(u, p, lambda);
    let e = ends(u, boundary)?;
    let flux: Vec<f64> = (0..u.nt())
        .map(|k| {
            let right = e.right.as_ref().map_or(0.0, |r| flux_at(r[k]));
            right - flux_at(e.left[k])
        })
        .collect();
    let flux_integral = cumulative_trapezoid(&flux, u.time().spacing());
    let q = if energy { &ii_series } else { &i_series };
    let residual = q.iter().zip(&flux_integral).map(|(v, f)| (v - q[0]) - f).collect();
    Ok(BalanceReport { i_series, ii_series, flux_integral, residual })
}

/// Mass balance: `I(t) - I(0) - int_0^t I'`, with the flux
/// `-2 Im(conj(h) u_x)` evaluated at both ends.
pub fn mass_balance_residual(u: &SpaceTimeField, boundary: &BoundaryData, p: f64, lambda: f64) -> Result<BalanceReport> {
    balance(u, boundary, p, lambda, |(h, ux, _)| -2.0 * (h.conj() * ux).im, false)
}

/// Energy balance with the flux `2 Re(u_x conj(h'))`.
pub fn energy_balance_residual(
    u: &SpaceTimeField,
    boundary: &BoundaryData,
    p: f64,
    lambda: f64,
) -> Result<BalanceReport> {
    balance(u, boundary, p, lambda, |(_, ux, ht)| 2.0 * (ux * ht.conj()).re, true)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiplierReport {
    pub lhs: Vec<Complex64>,
    pub rhs: Vec<Complex64>,
    /// `|lhs - rhs|` per time node.
    pub residual: Vec<f64>,
    /// Largest modulus among the individual terms, for relative use.
    pub scale: f64,
}

/// Both sides of the multiplier identity integrated over the spatial domain:
///
/// `int eta (|u_x|^2 + (2 lambda/p)|u|^p)_x
///   = -i d/dt int eta u conj(u_x) + [i eta u conj(u_t) - eta_x u conj(u_x)]
///     + int eta_xx u conj(u_x) + eta_x |u_x|^2 - lambda eta_x |u|^p`.
///
/// `u_t` at the ends and the time derivative use second-order differences.
pub fn multiplier_identity_residual(
    u: &SpaceTimeField,
    eta: &ComplexSamples,
    p: f64,
    lambda: f64,
) -> Result<MultiplierReport> {
    if eta.len() != u.nx() {
        return invalid("eta must live on the field's spatial grid");
    }
    let dx = u.space().spacing();
    let dt = u.time().spacing();
    let i = Complex64::new(0.0, 1.0);
    let e = eta.values();
    let ex = derivative4(e, dx);
    let exx = derivative4(&ex, dx);
    let n = u.nx();
    let rows: Vec<&[Complex64]> = u.rows().collect();
    struct Row {
        lhs: Complex64,
        moment: Complex64,
        bulk: Complex64,
        ends_x: Complex64,
        scale: f64,
    }
    let per: Vec<Row> = rows
        .par_iter()
        .map(|r| {
            let d = derivative4(r, dx);
            let en: Vec<Complex64> = r
                .iter()
                .zip(&d)
                .map(|(z, dz)| Complex64::new(dz.norm_sqr() + 2.0 * lambda / p * z.norm().powf(p), 0.0))
                .collect();
            let enx = derivative4(&en, dx);
            let lhs_w: Vec<Complex64> = e.iter().zip(&enx).map(|(a, b)| a * b).collect();
            let mom: Vec<Complex64> = (0..n).map(|j| e[j] * r[j] * d[j].conj()).collect();
            let t1: Vec<Complex64> = (0..n).map(|j| exx[j] * r[j] * d[j].conj()).collect();
            let t2: Vec<Complex64> = (0..n).map(|j| ex[j] * d[j].norm_sqr()).collect();
            let t3: Vec<Complex64> = (0..n).map(|j| ex[j] * (lambda * r[j].norm().powf(p))).collect();
            let (b1, b2, b3) = (trapezoid_complex(&t1, dx), trapezoid_complex(&t2, dx), trapezoid_complex(&t3, dx));
            let ends_x = -(ex[n - 1] * r[n - 1] * d[n - 1].conj() - ex[0] * r[0] * d[0].conj());
            let lhs = trapezoid_complex(&lhs_w, dx);
            let scale = [lhs.norm(), b1.norm(), b2.norm(), b3.norm(), ends_x.norm()].into_iter().fold(0.0, f64::max);
            Row { lhs, moment: trapezoid_complex(&mom, dx), bulk: b1 + b2 - b3, ends_x, scale }
        })
        .collect();
    let moments: Vec<Complex64> = per.iter().map(|r| r.moment).collect();
    let dmom = time_derivative(&moments, dt);
    let left = time_derivative(&u.column(0), dt);
    let right = time_derivative(&u.column(n - 1), dt);
    let mut lhs = Vec::with_capacity(u.nt());
    let mut rhs = Vec::with_capacity(u.nt());
    let mut scale: f64 = 0.0;
    for (k, row) in per.iter().enumerate() {
        let bt = i * (e[n - 1] * u.at(n - 1, k) * right[k].conj() - e[0] * u.at(0, k) * left[k].conj());
        let r = -i * dmom[k] + bt + row.ends_x + row.bulk;
        scale = scale.max(row.scale).max(dmom[k].norm()).max(bt.norm());
        lhs.push(row.lhs);
        rhs.push(r);
    }
    let residual = lhs.iter().zip(&rhs).map(|(a, b)| (a - b).norm()).collect();
    Ok(MultiplierReport { lhs, rhs, residual, scale })
}
