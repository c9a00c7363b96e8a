use num_complex::Complex64;
use rayon::prelude::*;

use super::{check_compatibility, nonlinear_point, BoundaryData, IbvpSpec};
use crate::error::{Annotated, Error, Result, Warning};
use crate::halfline::{HalfLineOptions, HalfLineWorkspace};
use crate::interval::{solve_linear_interval, w0_duhamel_field, LinearIntervalOptions};
use crate::spectral::fd::derivative4;
use crate::spectral::fft::{self, angular_frequencies};
use crate::spectral::{trapezoid, ComplexSamples, Grid1D, SpaceTimeField};

#[derive(Debug, Clone, Copy)]
pub struct SolverConfig {
    /// Stop when the sup-in-time L² change between iterates drops below this.
    pub picard_tol: f64,
    pub picard_max_iter: usize,
    /// Continuation window length.
    pub window_t: f64,
    /// Smallest window tried after repeated halving.
    pub window_floor: f64,
    pub halfline: HalfLineOptions,
    pub interval: LinearIntervalOptions,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            picard_tol: 1e-8,
            picard_max_iter: 50,
            window_t: 0.1,
            window_floor: 1e-4,
            halfline: HalfLineOptions::default(),
            interval: LinearIntervalOptions::default(),
        }
    }
}

/// Norm time series of a solution.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Diagnostics {
    pub times: Vec<f64>,
    pub l2: Vec<f64>,
    pub h1: Vec<f64>,
    /// `H^s` norm of the even reflection of each snapshot (a proxy).
    pub hs: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct SolutionRecord {
    pub field: SpaceTimeField,
    pub iterations_per_window: Vec<usize>,
    /// Start time of every accepted window.
    pub window_starts: Vec<f64>,
    /// Picard residuals of all accepted windows, in order.
    pub residual_history: Vec<f64>,
    /// `(t, ||u(t)||_{H^1})` at window boundaries.
    pub window_h1: Vec<(f64, f64)>,
    pub diagnostics: Diagnostics,
    pub warnings: Vec<Warning>,
}

enum Propagator {
    Interval { opts: LinearIntervalOptions },
    HalfLine(HalfLineWorkspace),
}

impl Propagator {
    fn new(spec: &IbvpSpec, times: &Grid1D, cfg: &SolverConfig) -> Result<Self> {
        Ok(match spec.boundary {
            BoundaryData::Interval(_) => Propagator::Interval { opts: cfg.interval },
            BoundaryData::HalfLine(_) => {
                Propagator::HalfLine(HalfLineWorkspace::new(spec.phi.grid(), times, cfg.halfline)?)
            }
        })
    }

    fn linear(&self, phi: &ComplexSamples, bd: &BoundaryData) -> Result<Annotated<SpaceTimeField>> {
        match (self, bd) {
            (Propagator::Interval { opts }, BoundaryData::Interval(bc)) => {
                let o = LinearIntervalOptions { enforce_compatibility: false, ..*opts };
                solve_linear_interval(phi, bc, None, o)
            }
            (Propagator::HalfLine(ws), BoundaryData::HalfLine(h)) => Ok(ws.linear_part(phi.values(), h.samples())),
            _ => unreachable!("propagator built for the problem's domain"),
        }
    }

    fn duhamel(&self, f: &SpaceTimeField) -> Result<SpaceTimeField> {
        match self {
            Propagator::Interval { .. } => w0_duhamel_field(f),
            Propagator::HalfLine(ws) => Ok(ws.forced_part(f)),
        }
    }
}

fn forcing(u: &SpaceTimeField, p: f64, lambda: f64) -> SpaceTimeField {
    u.map(|z| -nonlinear_point(z, p, lambda))
}

struct WindowResult {
    field: SpaceTimeField,
    residuals: Vec<f64>,
    warnings: Vec<Warning>,
}

fn picard_window(
    spec: &IbvpSpec,
    phi: &ComplexSamples,
    bd: &BoundaryData,
    cfg: &SolverConfig,
) -> Result<WindowResult> {
    let times = bd.time_grid();
    let prop = Propagator::new(spec, &times, cfg)?;
    let lin = prop.linear(phi, bd)?;
    let mut u = lin.value.clone();
    let mut residuals = Vec::new();
    for _ in 0..cfg.picard_max_iter {
        let mut next = prop.duhamel(&forcing(&u, spec.p, spec.lambda))?;
        next.add_assign(&lin.value)?;
        let r = next.sup_l2_distance(&u)?;
        residuals.push(r);
        u = next;
        if !r.is_finite() {
            break;
        }
        if r < cfg.picard_tol {
            return Ok(WindowResult { field: u, residuals, warnings: lin.warnings });
        }
    }
    Err(Error::NonConvergence {
        iterations: residuals.len(),
        residual: residuals.last().copied().unwrap_or(f64::NAN),
    })
}

fn check_start(spec: &IbvpSpec, cfg: &SolverConfig) -> Result<()> {
    let enforce = match spec.boundary {
        BoundaryData::Interval(_) => cfg.interval.enforce_compatibility,
        BoundaryData::HalfLine(_) => cfg.halfline.enforce_compatibility,
    };
    if enforce && spec.s.value() > 0.5 {
        let scale = 1.0f64.max(spec.phi.max_abs());
        let tol = match spec.boundary {
            BoundaryData::Interval(_) => cfg.interval.compat_tol,
            BoundaryData::HalfLine(_) => cfg.halfline.compat_tol,
        };
        check_compatibility(spec, 0, tol * scale)?.into_result()?;
    }
    Ok(())
}

/// Solves the problem on its whole time horizon as one Picard window.
pub fn picard_solve(spec: &IbvpSpec, cfg: &SolverConfig) -> Result<SolutionRecord> {
    spec.gate().require_local()?;
    check_start(spec, cfg)?;
    let w = picard_window(spec, &spec.phi, &spec.boundary, cfg)?;
    let diagnostics = diagnostics(&w.field, spec.s.value());
    let h1_end = *diagnostics.h1.last().expect("non-empty");
    Ok(SolutionRecord {
        iterations_per_window: vec![w.residuals.len()],
        window_starts: vec![0.0],
        window_h1: vec![(0.0, diagnostics.h1[0]), (spec.t_final(), h1_end)],
        residual_history: w.residuals,
        field: w.field,
        diagnostics,
        warnings: w.warnings,
    })
}

/// Solves on consecutive windows of length `window_t`, each started from the
/// previous window's final snapshot. A window that fails to converge is
/// halved until `window_floor`.
pub fn continue_globally(spec: &IbvpSpec, cfg: &SolverConfig) -> Result<SolutionRecord> {
    spec.gate().require_global()?;
    check_start(spec, cfg)?;
    let times = spec.boundary.time_grid();
    let dt = times.spacing();
    let nt = times.n_points();
    let nominal = ((cfg.window_t / dt).round() as usize).max(1);
    let mut rows: Vec<Vec<Complex64>> = vec![spec.phi.values().to_vec()];
    let mut phi = spec.phi.clone();
    let mut k0 = 0;
    let mut steps = nominal;
    let mut record = SolutionRecord {
        field: SpaceTimeField::zeros(*spec.phi.grid(), times),
        iterations_per_window: Vec::new(),
        window_starts: Vec::new(),
        residual_history: Vec::new(),
        window_h1: vec![(0.0, h1_norm(spec.phi.values(), spec.phi.grid().spacing()))],
        diagnostics: Diagnostics::default(),
        warnings: Vec::new(),
    };
    while k0 < nt - 1 {
        let k1 = (k0 + steps).min(nt - 1);
        let bd = spec.boundary.window(k0, k1)?;
        match picard_window(spec, &phi, &bd, cfg) {
            Ok(w) => {
                record.iterations_per_window.push(w.residuals.len());
                record.window_starts.push(times.node(k0));
                record.residual_history.extend(w.residuals);
                for wn in w.warnings {
                    if !record.warnings.contains(&wn) {
                        record.warnings.push(wn);
                    }
                }
                let last = w.field.snapshot(w.field.nt() - 1).to_vec();
                rows.extend(w.field.rows().skip(1).map(|r| r.to_vec()));
                record.window_h1.push((times.node(k1), h1_norm(&last, phi.grid().spacing())));
                phi = ComplexSamples::new(*phi.grid(), last)?;
                k0 = k1;
                steps = nominal;
            }
            Err(Error::NonConvergence { residual, .. }) => {
                if steps == 1 || (steps / 2) as f64 * dt < cfg.window_floor {
                    return Err(Error::WindowFloor { t: times.node(k0), floor: cfg.window_floor, residual });
                }
                steps /= 2;
            }
            Err(e) => return Err(e),
        }
    }
    record.field = SpaceTimeField::from_snapshots(*spec.phi.grid(), times, rows)?;
    record.diagnostics = diagnostics(&record.field, spec.s.value());
    Ok(record)
}

/// `sup_t ||Phi(u) - u||_{L^2}` for the Picard map over the whole horizon.
pub fn fixed_point_residual(spec: &IbvpSpec, u: &SpaceTimeField, cfg: &SolverConfig) -> Result<f64> {
    let times = spec.boundary.time_grid();
    let prop = Propagator::new(spec, &times, cfg)?;
    let mut next = prop.duhamel(&forcing(u, spec.p, spec.lambda))?;
    next.add_assign(&prop.linear(&spec.phi, &spec.boundary)?.value)?;
    next.sup_l2_distance(u)
}

fn l2_sqr(v: &[Complex64], dx: f64) -> f64 {
    let w: Vec<f64> = v.iter().map(|z| z.norm_sqr()).collect();
    trapezoid(&w, dx)
}

pub(crate) fn h1_norm(v: &[Complex64], dx: f64) -> f64 {
    let d = derivative4(v, dx);
    (l2_sqr(v, dx) + l2_sqr(&d, dx)).sqrt()
}

/// `H^s` norm of the even reflection, halved back to one copy.
fn hs_proxy(v: &[Complex64], dx: f64, s: f64) -> f64 {
    let n = v.len();
    let mut e: Vec<Complex64> = v.to_vec();
    e.extend(v[1..n - 1].iter().rev());
    let m = e.len();
    fft::fft(&mut e);
    let xi = angular_frequencies(m, dx);
    let sum: f64 = e.iter().zip(&xi).map(|(c, k)| (1.0 + k * k).powf(s) * c.norm_sqr()).sum();
    (0.5 * dx * sum / m as f64).sqrt()
}

pub(crate) fn diagnostics(u: &SpaceTimeField, s: f64) -> Diagnostics {
    let dx = u.space().spacing();
    let rows: Vec<&[Complex64]> = u.rows().collect();
    let per: Vec<(f64, f64, f64)> =
        rows.par_iter().map(|r| (l2_sqr(r, dx).sqrt(), h1_norm(r, dx), hs_proxy(r, dx, s))).collect();
    Diagnostics {
        times: u.time().nodes(),
        l2: per.iter().map(|x| x.0).collect(),
        h1: per.iter().map(|x| x.1).collect(),
        hs: per.iter().map(|x| x.2).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::BoundaryPairSpec;
    use crate::spectral::SobolevIndex;
    use std::f64::consts::PI;

    fn small_interval(lambda: f64, nt: usize) -> IbvpSpec {
        let g = Grid1D::unit(129).unwrap();
        let phi = ComplexSamples::from_fn(g, |x| Complex64::new(0.1 * (PI * x).sin(), 0.0));
        let bc = BoundaryPairSpec::homogeneous(nt, 0.1).unwrap();
        IbvpSpec::new(SobolevIndex::new(1.0).unwrap(), 4.0, lambda, phi, BoundaryData::Interval(bc)).unwrap()
    }

    #[test]
    fn tiny_lambda_needs_one_iteration() {
        let spec = small_interval(1e-14, 101);
        let rec = picard_solve(&spec, &SolverConfig::default()).unwrap();
        assert_eq!(rec.iterations_per_window, vec![1]);
        let bc = match &spec.boundary {
            BoundaryData::Interval(bc) => bc.clone(),
            _ => unreachable!(),
        };
        let lin = solve_linear_interval(&spec.phi, &bc, None, LinearIntervalOptions::default()).unwrap().value;
        assert!(rec.field.max_abs_diff(&lin).unwrap() < 1e-12);
    }

    #[test]
    fn contraction_is_geometric() {
        let rec = picard_solve(&small_interval(1.0, 101), &SolverConfig::default()).unwrap();
        let r = &rec.residual_history;
        assert!(r.len() <= 20);
        for k in 2..r.len() {
            assert!(r[k] < 0.9 * r[k - 1], "{r:?}");
        }
    }

    #[test]
    fn hs_proxy_of_sine_mode() {
        let g = Grid1D::unit(257).unwrap();
        let v: Vec<Complex64> = g.nodes().iter().map(|&x| Complex64::new((PI * x).cos(), 0.0)).collect();
        let s = 1.0;
        let exact = (0.5 * (1.0 + PI * PI)).sqrt();
        assert!((hs_proxy(&v, g.spacing(), s) - exact).abs() < 1e-10);
    }

    #[test]
    fn windows_reproduce_single_solve() {
        let spec = small_interval(-1.0, 101);
        let one = picard_solve(&spec, &SolverConfig::default()).unwrap();
        let cfg = SolverConfig { window_t: 0.02, ..SolverConfig::default() };
        let spec1 = IbvpSpec { s: SobolevIndex::new(1.0).unwrap(), ..spec };
        let many = continue_globally(&spec1, &cfg).unwrap();
        assert_eq!(many.iterations_per_window.len(), 5);
        assert!(many.field.max_abs_diff(&one.field).unwrap() < 1e-9);
    }
}
