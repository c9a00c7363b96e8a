use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;

use super::faddeeva::faddeeva;
use crate::error::{invalid, Result};
use crate::spectral::quad;

/// `K_t(x, y) = (1/pi) int_0^inf e^{i b^2 t - b|x| - i y b} db`.
///
/// Closed form for `t > 0`: `e^{i pi/4}/(2 sqrt(pi t)) w(i u)` with
/// `u = (|x| + i y) e^{i pi/4}/(2 sqrt t)`; for `t < 0`,
/// `K_t(x, y) = conj(K_{|t|}(x, -y))`.
pub fn kernel_kt(x: f64, y: f64, t: f64) -> Result<Complex64> {
    if t == 0.0 || !t.is_finite() {
        return invalid(format!("kernel needs finite t != 0, got {t}"));
    }
    if t < 0.0 {
        return Ok(kernel_kt(x, -y, -t)?.conj());
    }
    let rot = Complex64::from_polar(1.0, FRAC_PI_4);
    let u = Complex64::new(x.abs(), y) * rot / (2.0 * t.sqrt());
    Ok(rot / (2.0 * (PI * t).sqrt()) * faddeeva(Complex64::new(0.0, 1.0) * u))
}

/// Same kernel by quadrature along the rotated ray `b = e^{i pi/4} r`:
/// `(e^{i pi/4}/(pi sqrt t)) int_0^inf e^{-s^2 - c s} ds`, `c = 2u`.
///
/// Accurate only while `Re c` is not strongly negative (the integrand then
/// grows like `e^{(Re c)^2/4}` before decaying); returns `None` there.
pub fn kernel_kt_contour(x: f64, y: f64, t: f64, panels: usize) -> Result<Option<Complex64>> {
    if t == 0.0 || !t.is_finite() {
        return invalid(format!("kernel needs finite t != 0, got {t}"));
    }
    if t < 0.0 {
        return Ok(kernel_kt_contour(x, -y, -t, panels)?.map(|z| z.conj()));
    }
    let rot = Complex64::from_polar(1.0, FRAC_PI_4);
    let c = Complex64::new(x.abs(), y) * rot / t.sqrt();
    if c.re < 0.0 && 0.25 * c.re * c.re > 5.0 {
        return Ok(None);
    }
    let upper = (-0.5 * c.re).max(0.0) + 7.0;
    let v = quad::integrate(0.0, upper, panels, |s: f64| (-(s * s) - c * s).exp());
    Ok(Some(rot / (PI * t.sqrt()) * v))
}

/// Log-spaced sample box for the kernel bound.
#[derive(Debug, Clone, Copy)]
pub struct KernelBox {
    pub xy_max: f64,
    pub xy_min: f64,
    pub t_min: f64,
    pub t_max: f64,
    /// Points per decade in each coordinate.
    pub per_decade: usize,
}

impl Default for KernelBox {
    fn default() -> Self {
        Self { xy_max: 10.0, xy_min: 1e-3, t_min: 1e-2, t_max: 10.0, per_decade: 8 }
    }
}

fn log_nodes(lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
    let decades = (hi / lo).log10();
    let n = (decades * per_decade as f64).ceil() as usize;
    (0..=n).map(|k| lo * (hi / lo).powf(k as f64 / n as f64)).collect()
}

/// `sup sqrt(t) |K_t(x, y)|` over the box (with `x, y = 0` included).
pub fn kernel_sup(bx: &KernelBox) -> f64 {
    let mut xy = vec![0.0];
    xy.extend(log_nodes(bx.xy_min, bx.xy_max, bx.per_decade));
    let ts = log_nodes(bx.t_min, bx.t_max, bx.per_decade);
    let mut best = 0.0f64;
    for &t in &ts {
        for &x in &xy {
            for &y in &xy {
                let k = kernel_kt(x, y, t).expect("t > 0");
                best = best.max(t.sqrt() * k.norm());
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn origin_value() {
        for &t in &[0.01, 1.0, 7.0] {
            let k = kernel_kt(0.0, 0.0, t).unwrap();
            let exact = Complex64::from_polar(1.0 / (2.0 * (PI * t).sqrt()), FRAC_PI_4);
            assert!((k - exact).norm() < 1e-12 * exact.norm());
        }
        assert!(kernel_kt(1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn modulus_bound_for_large_x() {
        for &x in &[5.0, 20.0, 100.0] {
            for &t in &[0.1, 1.0, 10.0] {
                assert!(kernel_kt(x, 0.0, t).unwrap().norm() <= 1.0 / (PI * x) + 1e-14);
            }
        }
    }

    #[test]
    fn closed_form_matches_contour_quadrature() {
        for &(x, y, t) in &[(0.5, 0.2, 1.0), (2.0, -1.0, 0.3), (0.1, 1.0, 2.0), (3.0, 3.0, 0.05), (0.0, 0.7, 0.5)] {
            let a = kernel_kt(x, y, t).unwrap();
            let b = kernel_kt_contour(x, y, t, 400).unwrap().expect("well conditioned");
            assert!((a - b).norm() < 1e-9 * a.norm().max(1e-3), "({x}, {y}, {t})");
            let a = kernel_kt(x, y, -t).unwrap();
            let b = kernel_kt_contour(x, y, -t, 400).unwrap().unwrap();
            assert!((a - b).norm() < 1e-9 * a.norm().max(1e-3));
        }
    }

    #[test]
    fn parabolic_scaling() {
        for &(x, y, t) in &[(0.3, 0.4, 0.25), (2.0, 5.0, 4.0), (1.0, -2.0, 0.01)] {
            let lhs = kernel_kt(x, y, t).unwrap().norm();
            let rhs = kernel_kt(x / t.sqrt(), y / t.sqrt(), 1.0).unwrap().norm() / t.sqrt();
            assert!((lhs - rhs).abs() < 1e-12 * rhs);
        }
    }
}
