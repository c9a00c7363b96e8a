//! Picard solvers for the nonlinear problems on both domains.

mod gate;
mod picard;

pub use gate::{gate, Domain, GateReport, LocalRegime};
pub use picard::{
    continue_globally, fixed_point_residual, picard_solve, Diagnostics, SolutionRecord, SolverConfig,
};

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::interval::BoundaryPairSpec;
use crate::spectral::fd::{second_derivative_left, second_derivative_right};
use crate::spectral::{BoundaryTrace, ComplexSamples, Grid1D, SobolevIndex};

/// `lambda |u|^{p-2} u`, taken as 0 at `u = 0`.
pub fn nonlinearity(u: &[Complex64], p: f64, lambda: f64) -> Vec<Complex64> {
    u.iter().map(|&z| nonlinear_point(z, p, lambda)).collect()
}

#[inline]
pub(crate) fn nonlinear_point(z: Complex64, p: f64, lambda: f64) -> Complex64 {
    let m = z.norm();
    if m == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let w = if p == 4.0 { m * m } else if p == 3.0 { m } else { m.powf(p - 2.0) };
    z * (lambda * w)
}

/// Dirichlet data for either domain.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundaryData {
    HalfLine(BoundaryTrace),
    Interval(BoundaryPairSpec),
}

impl BoundaryData {
    pub fn domain(&self) -> Domain {
        match self {
            BoundaryData::HalfLine(_) => Domain::HalfLine,
            BoundaryData::Interval(_) => Domain::Interval,
        }
    }

    pub fn time_grid(&self) -> Grid1D {
        match self {
            BoundaryData::HalfLine(h) => h.time_grid(),
            BoundaryData::Interval(bc) => bc.time_grid(),
        }
    }

    pub(crate) fn window(&self, k0: usize, k1: usize) -> Result<Self> {
        Ok(match self {
            BoundaryData::HalfLine(h) => BoundaryData::HalfLine(h.window(k0, k1)?),
            BoundaryData::Interval(bc) => BoundaryData::Interval(bc.window(k0, k1)?),
        })
    }
}

/// A nonlinear initial-boundary-value problem.
#[derive(Debug, Clone, PartialEq)]
pub struct IbvpSpec {
    pub s: SobolevIndex,
    pub p: f64,
    pub lambda: f64,
    pub phi: ComplexSamples,
    pub boundary: BoundaryData,
}

impl IbvpSpec {
    pub fn new(s: SobolevIndex, p: f64, lambda: f64, phi: ComplexSamples, boundary: BoundaryData) -> Result<Self> {
        if !(p >= 3.0 && p.is_finite()) {
            return invalid(format!("p must satisfy p >= 3, got {p}"));
        }
        if !(lambda != 0.0 && lambda.is_finite()) {
            return invalid(format!("lambda must be a non-zero real number, got {lambda}"));
        }
        let g = phi.grid();
        match boundary {
            BoundaryData::Interval(_) => {
                if g.origin().abs() > 1e-12 || (g.extent() - 1.0).abs() > 1e-12 {
                    return invalid("interval problems live on [0, 1]");
                }
            }
            BoundaryData::HalfLine(_) => {
                if g.origin().abs() > 1e-12 {
                    return invalid("half-line grid must start at x = 0");
                }
            }
        }
        Ok(Self { s, p, lambda, phi, boundary })
    }

    pub fn domain(&self) -> Domain {
        self.boundary.domain()
    }

    pub fn t_final(&self) -> f64 {
        self.boundary.time_grid().extent()
    }

    pub fn gate(&self) -> GateReport {
        gate(self.domain(), self.s.value(), self.p, self.lambda)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompatibilityReport {
    pub order: u8,
    /// Named corner residuals.
    pub residuals: Vec<(String, f64)>,
    pub tol: f64,
}

impl CompatibilityReport {
    pub fn pass(&self) -> bool {
        self.residuals.iter().all(|(_, r)| *r <= self.tol)
    }

    pub fn into_result(self) -> Result<()> {
        if self.pass() {
            return Ok(());
        }
        Err(Error::Compatibility(
            self.residuals
                .iter()
                .filter(|(_, r)| *r > self.tol)
                .map(|(n, r)| format!("{n} = {r:.3e} exceeds {:.1e}", self.tol))
                .collect(),
        ))
    }
}

/// Corner compatibility residuals of order 0 (`h(0) = phi(0)`) or 1
/// (`i h'(0) + phi''(0) + lambda |phi(0)|^{p-2} phi(0) = 0`).
pub fn check_compatibility(spec: &IbvpSpec, order: u8, tol: f64) -> Result<CompatibilityReport> {
    if order > 1 {
        return invalid(format!("compatibility order must be 0 or 1, got {order}"));
    }
    let v = spec.phi.values();
    let dx = spec.phi.grid().spacing();
    let i = Complex64::new(0.0, 1.0);
    let first = |h: &BoundaryTrace, phi0: Complex64, phi_xx: Complex64| {
        let dh = h.derivative()[0];
        (i * dh + phi_xx + nonlinear_point(phi0, spec.p, spec.lambda)).norm()
    };
    let mut residuals = Vec::new();
    match &spec.boundary {
        BoundaryData::HalfLine(h) => {
            if order == 0 {
                residuals.push(("h(0) - phi(0)".into(), (h.samples()[0] - v[0]).norm()));
            } else {
                residuals.push(("i h'(0) + phi''(0) + N(phi(0))".into(), first(h, v[0], second_derivative_left(v, dx))));
            }
        }
        BoundaryData::Interval(bc) => {
            let last = v[v.len() - 1];
            if order == 0 {
                residuals.push(("h1(0) - phi(0)".into(), (bc.h1().samples()[0] - v[0]).norm()));
                residuals.push(("h2(0) - phi(1)".into(), (bc.h2().samples()[0] - last).norm()));
            } else {
                residuals.push((
                    "i h1'(0) + phi''(0) + N(phi(0))".into(),
                    first(bc.h1(), v[0], second_derivative_left(v, dx)),
                ));
                residuals.push((
                    "i h2'(0) + phi''(1) + N(phi(1))".into(),
                    first(bc.h2(), last, second_derivative_right(v, dx)),
                ));
            }
        }
    }
    Ok(CompatibilityReport { order, residuals, tol })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pointwise_values() {
        let z = Complex64::new(0.0, 0.0);
        assert_eq!(nonlinearity(&[z], 4.0, 1.0)[0], z);
        assert_eq!(nonlinearity(&[Complex64::new(0.0, 2.0)], 4.0, 1.0)[0], Complex64::new(0.0, 8.0));
        assert_eq!(nonlinearity(&[Complex64::new(3.0, 0.0)], 3.0, -1.0)[0], Complex64::new(-9.0, 0.0));
        let w = nonlinearity(&[Complex64::new(3.0, 4.0)], 3.5, 2.0)[0];
        assert!((w - Complex64::new(3.0, 4.0) * 2.0 * 5f64.powf(1.5)).norm() < 1e-12);
    }

    #[test]
    fn first_order_compatibility_detector() {
        let g = Grid1D::new(0.0, 10.0, 1001).unwrap();
        let phi = ComplexSamples::from_fn(g, |x| Complex64::new(1.0 + x * x, 0.0));
        let lambda = 0.7;
        // i c + phi''(0) + lambda = 0 with phi''(0) = 2.
        let c = Complex64::new(0.0, 1.0) * (2.0 + lambda);
        let h = BoundaryTrace::from_fn(101, 1.0, |t| 1.0 + c * t).unwrap();
        let spec = IbvpSpec::new(SobolevIndex::new(2.0).unwrap(), 4.0, lambda, phi, BoundaryData::HalfLine(h)).unwrap();
        let r = check_compatibility(&spec, 1, 1e-10).unwrap();
        assert!(r.pass(), "{:?}", r.residuals);
        assert!(check_compatibility(&spec, 0, 1e-12).unwrap().pass());
    }

    #[test]
    fn interval_sine_is_compatible() {
        let g = Grid1D::unit(65).unwrap();
        let phi = ComplexSamples::from_fn(g, |x| Complex64::new((std::f64::consts::PI * x).sin(), 0.0));
        let bc = BoundaryPairSpec::homogeneous(11, 0.1).unwrap();
        let spec = IbvpSpec::new(SobolevIndex::new(1.0).unwrap(), 4.0, 1.0, phi, BoundaryData::Interval(bc)).unwrap();
        let r = check_compatibility(&spec, 0, 1e-12).unwrap();
        assert!(r.residuals.iter().all(|(_, v)| *v < 1e-15));
    }
}
