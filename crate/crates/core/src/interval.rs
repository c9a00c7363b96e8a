//! Linear solution operators on the unit interval: the sine-series group,
//! its Duhamel integral and the Dirichlet boundary operator.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{invalid, Annotated, Error, Result, Warning};
use crate::spectral::filon::{hermite_eval, hermite_integral, hermite_weights, row_slopes, sample_slopes, ModalDuhamel};
use crate::spectral::{dst_forward, dst_inverse, BoundaryTrace, ComplexSamples, Grid1D, SineSpectrum, SpaceTimeField};

/// Default tolerance for the modal tail check of the boundary operator.
pub const DEFAULT_TAIL_TOL: f64 = 1e-10;

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// Number of sine modes resolved by a grid: `n_points - 2`.
pub fn mode_count(grid: &Grid1D) -> usize {
    grid.n_points() - 2
}

/// Modal frequencies `(n pi)^2`, `n = 1..=n_modes`.
pub fn mode_frequencies(n_modes: usize) -> Vec<f64> {
    (1..=n_modes).map(|n| (n as f64 * PI).powi(2)).collect()
}

fn check_unit(grid: &Grid1D) -> Result<()> {
    if grid.origin().abs() > 1e-12 || (grid.extent() - 1.0).abs() > 1e-12 {
        return invalid(format!(
            "interval operators act on [0, 1]; got [{}, {}]",
            grid.origin(),
            grid.end()
        ));
    }
    if grid.n_points() < 3 {
        return invalid("interval grid needs at least 3 points");
    }
    Ok(())
}

/// Modal state of the free interval flow.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalLinearState {
    pub spectrum: SineSpectrum,
    pub t: f64,
}

impl IntervalLinearState {
    pub fn from_samples(phi: &ComplexSamples) -> Self {
        Self { spectrum: dst_forward(phi), t: 0.0 }
    }

    /// Advances by `dt`; each mode rotates by `e^{-i (n pi)^2 dt}`.
    pub fn evolve(&mut self, dt: f64) {
        for (i, c) in self.spectrum.coeffs.iter_mut().enumerate() {
            let w = ((i + 1) as f64 * PI).powi(2);
            *c *= Complex64::from_polar(1.0, -w * dt);
        }
        self.t += dt;
    }

    pub fn samples(&self, grid: &Grid1D) -> ComplexSamples {
        dst_inverse(&self.spectrum, grid)
    }
}

/// `W_0(t) phi = sum c_n e^{-i (n pi)^2 t} sin(n pi x)` on the grid of `phi`.
pub fn w0_group(phi: &ComplexSamples, t: f64) -> ComplexSamples {
    let mut st = IntervalLinearState::from_samples(phi);
    st.evolve(t);
    st.samples(phi.grid())
}

/// `W_0(t_k) phi` at every node of `times`.
pub fn w0_group_field(phi: &ComplexSamples, times: &Grid1D) -> SpaceTimeField {
    let spec = dst_forward(phi);
    let grid = *phi.grid();
    let rows: Vec<Vec<Complex64>> = times
        .nodes()
        .par_iter()
        .map(|&t| {
            let coeffs = spec
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| c * Complex64::from_polar(1.0, -((i + 1) as f64 * PI).powi(2) * t))
                .collect();
            dst_inverse(&SineSpectrum::new(coeffs), &grid).into_values()
        })
        .collect();
    SpaceTimeField::from_snapshots(grid, *times, rows).expect("shapes match")
}

fn forcing_spectra(f: &SpaceTimeField) -> Vec<Vec<Complex64>> {
    let grid = *f.space();
    (0..f.nt())
        .into_par_iter()
        .map(|k| dst_forward(&ComplexSamples::new(grid, f.snapshot(k).to_vec()).expect("row length")).coeffs)
        .collect()
}

/// `-i int_0^{t_k} W_0(t_k - tau) f(tau) dtau` at every time node of `f`.
///
/// Each mode is integrated exactly against the cubic Hermite interpolant of
/// its forcing coefficient in time.
pub fn w0_duhamel_field(f: &SpaceTimeField) -> Result<SpaceTimeField> {
    check_unit(f.space())?;
    let grid = *f.space();
    let modes = mode_count(&grid);
    let spectra = forcing_spectra(f);
    let dt = f.time().spacing();
    let slopes = row_slopes(&spectra, dt);
    let md = ModalDuhamel::new(&mode_frequencies(modes), dt);
    let mut state = vec![zero(); modes];
    let mut coeff_rows = Vec::with_capacity(f.nt());
    coeff_rows.push(state.clone());
    for k in 0..f.nt() - 1 {
        md.step(&mut state, &spectra[k], &spectra[k + 1], &slopes[k], &slopes[k + 1]);
        coeff_rows.push(state.clone());
    }
    let minus_i = Complex64::new(0.0, -1.0);
    let rows: Vec<Vec<Complex64>> = coeff_rows
        .into_par_iter()
        .map(|c| {
            let spec = SineSpectrum::new(c.into_iter().map(|z| z * minus_i).collect());
            dst_inverse(&spec, &grid).into_values()
        })
        .collect();
    SpaceTimeField::from_snapshots(grid, *f.time(), rows)
}

/// `-i int_0^t W_0(t - tau) f(tau) dtau` at a single time `t` within the
/// time grid of `f` (not necessarily a node).
pub fn w0_duhamel(f: &SpaceTimeField, t: f64) -> Result<ComplexSamples> {
    check_unit(f.space())?;
    let tg = f.time();
    if t < tg.origin() - 1e-12 || t > tg.end() + 1e-12 {
        return invalid(format!("t = {t} lies outside the forcing time grid [{}, {}]", tg.origin(), tg.end()));
    }
    let grid = *f.space();
    let modes = mode_count(&grid);
    let omega = mode_frequencies(modes);
    let spectra = forcing_spectra(f);
    let dt = tg.spacing();
    let slopes = row_slopes(&spectra, dt);
    let s = (t - tg.origin()) / dt;
    let full = ((s * (1.0 + 1e-12)).floor() as usize).min(f.nt() - 1);
    let md = ModalDuhamel::new(&omega, dt);
    let mut state = vec![zero(); modes];
    for k in 0..full {
        md.step(&mut state, &spectra[k], &spectra[k + 1], &slopes[k], &slopes[k + 1]);
    }
    let rem = t - tg.origin() - full as f64 * dt;
    if rem > 1e-12 * dt && full + 1 < f.nt() {
        // Restrict the segment cubic to [t_full, t] and integrate that.
        let pair = |n: usize| {
            let h = [spectra[full][n], spectra[full + 1][n]];
            let d = [slopes[full][n], slopes[full + 1][n]];
            hermite_eval(&h, &d, dt, rem)
        };
        for n in 0..modes {
            let (fb, db) = pair(n);
            let (fa, da) = (spectra[full][n], slopes[full][n]);
            let w = hermite_weights(omega[n] * rem);
            let r = Complex64::from_polar(1.0, -omega[n] * rem);
            state[n] = r * state[n] + r * rem * (w.a * fa + w.b * fb + (w.da * da + w.db * db) * rem);
        }
    }
    let minus_i = Complex64::new(0.0, -1.0);
    let spec = SineSpectrum::new(state.into_iter().map(|z| z * minus_i).collect());
    Ok(dst_inverse(&spec, &grid))
}

/// `int_0^t e^{i (n pi)^2 tau} h(tau) dtau` for the cubic Hermite
/// interpolant of `h`, with node derivatives from fourth-order differences.
pub fn mode_time_integral(h: &BoundaryTrace, n: usize, t: f64) -> Complex64 {
    let w = (n as f64 * PI).powi(2);
    hermite_integral(h.samples(), &sample_slopes(h.samples(), h.dt()), h.dt(), w, t)
}

/// Options for the boundary operator.
#[derive(Debug, Clone, Copy)]
pub struct WhOptions {
    pub tail_tol: f64,
    /// Refuse data with `h(0) != 0`.
    pub require_zero_start: bool,
}

impl Default for WhOptions {
    fn default() -> Self {
        Self { tail_tol: DEFAULT_TAIL_TOL, require_zero_start: true }
    }
}

/// Boundary operator `W_h h` at every time node of `h`.
///
/// The series `sum 2 i n pi e^{-i (n pi)^2 t} I_n(t) sin(n pi x)` converges
/// only like `1/n` because of the boundary value; it is evaluated in the
/// equivalent resummed form `(1 - x) h(t) + sum r_n(t) sin(n pi x)` with
/// `r_n = 2 i n pi e^{-i (n pi)^2 t} I_n(t) - 2 h(t)/(n pi)`, using
/// `1 - x = sum 2 sin(n pi x)/(n pi)`. The next term of the large-`n`
/// expansion, `2 i h'(t)/(n pi)^3` with `h'` the derivative of the Hermite
/// interpolant, is removed the same way through
/// `x (x-1)(x-2)/6 = sum 2 sin(n pi x)/(n pi)^3`, leaving coefficients that
/// decay like `1/n^5` plus the start-up term `h'(0)/n^3`. With `reflect`, the field is mirrored
/// `x -> 1 - x` (data imposed at `x = 1`).
pub fn wh_field(
    h: &BoundaryTrace,
    grid: &Grid1D,
    reflect: bool,
    opts: WhOptions,
) -> Result<Annotated<SpaceTimeField>> {
    check_unit(grid)?;
    let hs = h.samples();
    let scale = h.max_abs();
    if opts.require_zero_start && hs[0].norm() > 1e-10 * scale.max(1.0) {
        return invalid(format!(
            "boundary operator needs h(0) = 0, got |h(0)| = {:.3e}; lift the data first",
            hs[0].norm()
        ));
    }
    let modes = mode_count(grid);
    let omega = mode_frequencies(modes);
    let dt = h.dt();
    let nt = h.len();
    // A_n(t_k) = e^{-i w_n t_k} I_n(t_k), same recursion for every mode.
    let mut slopes = sample_slopes(hs, dt);
    let coeff_rows: Vec<Vec<Complex64>> = {
        let md = ModalDuhamel::new(&omega, dt);
        let mut a = vec![zero(); modes];
        let mut rows = Vec::with_capacity(nt);
        rows.push(resum(&a, hs[0], zero()));
        for k in 0..nt - 1 {
            md.step_uniform(&mut a, hs[k], hs[k + 1], slopes[k], slopes[k + 1]);
            rows.push(resum(&a, hs[k + 1], slopes[k + 1]));
        }
        rows
    };
    // The field vanishes at t = 0; no slope term there.
    slopes[0] = zero();
    let mut worst = 0.0f64;
    let mut worst_pair = (0.0, 0.0);
    for (k, r) in coeff_rows.iter().enumerate() {
        let partial: f64 = r.iter().map(|z| z.norm()).sum::<f64>() + hs[k].norm();
        let last = r.last().map_or(0.0, |z| z.norm());
        if partial > 0.0 && last / partial > worst {
            worst = last / partial;
            worst_pair = (last, partial);
        }
    }
    let xs = grid.nodes();
    let g = *grid;
    let rows: Vec<Vec<Complex64>> = coeff_rows
        .into_par_iter()
        .zip(hs.par_iter().zip(slopes.par_iter()))
        .map(|(c, (&hk, &sk))| {
            let mut v = dst_inverse(&SineSpectrum::new(c), &g).into_values();
            for (vj, &x) in v.iter_mut().zip(&xs) {
                *vj += lift_profile(hk, sk, x);
            }
            if reflect {
                v.reverse();
            }
            v
        })
        .collect();
    let field = SpaceTimeField::from_snapshots(g, h.time_grid(), rows)?;
    let mut warnings = Vec::new();
    if worst > opts.tail_tol {
        warnings.push(Warning::TailNotConverged { last_term: worst_pair.0, partial_sum: worst_pair.1 });
    }
    Ok(Annotated { value: field, warnings })
}

fn resum(a: &[Complex64], h: Complex64, slope: Complex64) -> Vec<Complex64> {
    a.iter()
        .enumerate()
        .map(|(i, &an)| {
            let npi = (i + 1) as f64 * PI;
            Complex64::new(0.0, 2.0 * npi) * an - h * (2.0 / npi) - slope * Complex64::new(0.0, 2.0 / npi.powi(3))
        })
        .collect()
}

/// `(1 - x) h + i h' x (x-1)(x-2)/6`, the part of the field removed from the
/// modal coefficients.
fn lift_profile(h: Complex64, slope: Complex64, x: f64) -> Complex64 {
    h * (1.0 - x) + Complex64::new(0.0, x * (x - 1.0) * (x - 2.0) / 6.0) * slope
}

/// Boundary operator at a single time `t` (a node of `h` or between nodes).
pub fn wh_boundary(h: &BoundaryTrace, grid: &Grid1D, t: f64, reflect: bool) -> Result<Annotated<ComplexSamples>> {
    if t < 0.0 || t > h.t_final() * (1.0 + 1e-12) {
        return invalid(format!("t = {t} outside the boundary trace horizon {}", h.t_final()));
    }
    check_unit(grid)?;
    if h.samples()[0].norm() > 1e-10 * h.max_abs().max(1.0) {
        return invalid("boundary operator needs h(0) = 0; lift the data first");
    }
    let modes = mode_count(grid);
    let t = t.min(h.t_final());
    let dh = sample_slopes(h.samples(), h.dt());
    let (ht, slope) = hermite_eval(h.samples(), &dh, h.dt(), t);
    let slope = if t > 0.0 { slope } else { zero() };
    let coeffs: Vec<Complex64> = (1..=modes)
        .map(|n| {
            let npi = n as f64 * PI;
            let i_n = hermite_integral(h.samples(), &dh, h.dt(), npi * npi, t);
            Complex64::new(0.0, 2.0 * npi) * Complex64::from_polar(1.0, -npi * npi * t) * i_n
                - ht * (2.0 / npi)
                - slope * Complex64::new(0.0, 2.0 / npi.powi(3))
        })
        .collect();
    let partial: f64 = coeffs.iter().map(|z| z.norm()).sum::<f64>() + ht.norm();
    let last = coeffs.last().map_or(0.0, |z| z.norm());
    let mut v = dst_inverse(&SineSpectrum::new(coeffs), grid).into_values();
    for (vj, x) in v.iter_mut().zip(grid.nodes()) {
        *vj += lift_profile(ht, slope, x);
    }
    if reflect {
        v.reverse();
    }
    let mut warnings = Vec::new();
    if partial > 0.0 && last / partial > DEFAULT_TAIL_TOL {
        warnings.push(Warning::TailNotConverged { last_term: last, partial_sum: partial });
    }
    Ok(Annotated { value: ComplexSamples::new(*grid, v)?, warnings })
}

/// Dirichlet data at both ends of the interval on a shared time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryPairSpec {
    h1: BoundaryTrace,
    h2: BoundaryTrace,
}

impl BoundaryPairSpec {
    pub fn new(h1: BoundaryTrace, h2: BoundaryTrace) -> Result<Self> {
        if h1.len() != h2.len() || (h1.t_final() - h2.t_final()).abs() > 1e-12 * h1.t_final() {
            return invalid("h1 and h2 must share one time grid");
        }
        Ok(Self { h1, h2 })
    }

    pub fn homogeneous(n_samples: usize, t_final: f64) -> Result<Self> {
        let z = BoundaryTrace::zeros(n_samples, t_final)?;
        Ok(Self { h1: z.clone(), h2: z })
    }

    pub fn h1(&self) -> &BoundaryTrace {
        &self.h1
    }

    pub fn h2(&self) -> &BoundaryTrace {
        &self.h2
    }

    pub fn time_grid(&self) -> Grid1D {
        self.h1.time_grid()
    }

    pub fn window(&self, k0: usize, k1: usize) -> Result<Self> {
        Ok(Self { h1: self.h1.window(k0, k1)?, h2: self.h2.window(k0, k1)? })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct LinearIntervalOptions {
    /// Refuse data violating the zeroth-order corner conditions.
    pub enforce_compatibility: bool,
    /// Absolute corner tolerance, relative to `max(1, |data|)`.
    pub compat_tol: f64,
    pub tail_tol: f64,
}

impl Default for LinearIntervalOptions {
    fn default() -> Self {
        Self { enforce_compatibility: true, compat_tol: 1e-8, tail_tol: DEFAULT_TAIL_TOL }
    }
}

/// Corner mismatches `|phi(0) - h1(0)|`, `|phi(1) - h2(0)|`.
pub fn corner_residuals(phi: &ComplexSamples, bc: &BoundaryPairSpec) -> [f64; 2] {
    let v = phi.values();
    [(v[0] - bc.h1.samples()[0]).norm(), (v[v.len() - 1] - bc.h2.samples()[0]).norm()]
}

/// Solves `i u_t + u_xx = f` on `(0,1)` with `u(0) = phi`, `u(0,t) = h1`,
/// `u(1,t) = h2` at every time node of the boundary data.
///
/// The data are lifted by the time-independent corner profile
/// `l(x) = (1-x) h1(0) + x h2(0)`, which solves the free equation exactly:
/// `u = l + W_0(t)(phi - l) + W_h(h1 - h1(0)) + W_h^refl(h2 - h2(0)) + Duhamel(f)`.
pub fn solve_linear_interval(
    phi: &ComplexSamples,
    bc: &BoundaryPairSpec,
    f: Option<&SpaceTimeField>,
    opts: LinearIntervalOptions,
) -> Result<Annotated<SpaceTimeField>> {
    let grid = *phi.grid();
    check_unit(&grid)?;
    let times = bc.time_grid();
    if let Some(f) = f {
        if f.nx() != grid.n_points() || f.nt() != times.n_points() {
            return invalid("forcing field must live on the solution grid");
        }
    }
    if opts.enforce_compatibility {
        let res = corner_residuals(phi, bc);
        let scale = 1.0f64.max(phi.max_abs()).max(bc.h1.max_abs()).max(bc.h2.max_abs());
        let mut bad = Vec::new();
        if res[0] > opts.compat_tol * scale {
            bad.push(format!("phi(0) - h1(0) = {:.3e} (needs h1(0) = phi(0))", res[0]));
        }
        if res[1] > opts.compat_tol * scale {
            bad.push(format!("phi(1) - h2(0) = {:.3e} (needs h2(0) = phi(1))", res[1]));
        }
        if !bad.is_empty() {
            return Err(Error::Compatibility(bad));
        }
    }
    let a = bc.h1.samples()[0];
    let b = bc.h2.samples()[0];
    let lift = |x: f64| a * (1.0 - x) + b * x;
    let mut rest = phi.clone();
    for (v, x) in rest.values_mut().iter_mut().zip(grid.nodes()) {
        *v -= lift(x);
    }
    let mut u = w0_group_field(&rest, &times);
    let wopts = WhOptions { tail_tol: opts.tail_tol, require_zero_start: true };
    let w1 = wh_field(&bc.h1.minus_initial(), &grid, false, wopts)?;
    let w2 = wh_field(&bc.h2.minus_initial(), &grid, true, wopts)?;
    u.add_assign(&w1.value)?;
    u.add_assign(&w2.value)?;
    if let Some(f) = f {
        let f = SpaceTimeField::new(grid, times, f.data().to_vec())?;
        u.add_assign(&w0_duhamel_field(&f)?)?;
    }
    let xs = grid.nodes();
    for row in u.rows_mut() {
        for (v, &x) in row.iter_mut().zip(&xs) {
            *v += lift(x);
        }
    }
    let mut warnings = w1.warnings;
    warnings.extend(w2.warnings);
    Ok(Annotated { value: u, warnings })
}
