//! Exact integration of `e^{i w tau}` against piecewise-linear and
//! piecewise-cubic (Hermite) amplitudes.

use num_complex::Complex64;

/// Weights for `int_0^1 e^{i theta s} [(1-s) a + s b] ds = w0 a + w1 b`.
#[derive(Debug, Clone, Copy)]
pub struct FilonWeights {
    pub w0: Complex64,
    pub w1: Complex64,
}

pub fn filon_weights(theta: f64) -> FilonWeights {
    let (e0, e1) = if theta.abs() < 0.25 {
        // Power series avoids the cancellation in the closed forms.
        let z = Complex64::new(0.0, theta);
        let mut e0 = Complex64::new(0.0, 0.0);
        let mut e1 = Complex64::new(0.0, 0.0);
        let mut zk = Complex64::new(1.0, 0.0);
        let mut fact = 1.0;
        for k in 0..16 {
            let kf = k as f64;
            e0 += zk / (fact * (kf + 1.0));
            e1 += zk / (fact * (kf + 2.0));
            fact *= kf + 1.0;
            zk *= z;
        }
        (e0, e1)
    } else {
        let it = Complex64::new(0.0, theta);
        let e = Complex64::from_polar(1.0, theta);
        let e0 = (e - 1.0) / it;
        let e1 = e / it + (e - 1.0) / (theta * theta);
        (e0, e1)
    };
    FilonWeights { w0: e0 - e1, w1: e1 }
}

/// `int_0^t e^{i w tau} h(tau) d tau` for the piecewise-linear interpolant of
/// samples `h` spaced `dt` from `tau = 0`; `t` may fall between nodes.
pub fn filon_integral(h: &[Complex64], dt: f64, omega: f64, t: f64) -> Complex64 {
    let zero = Complex64::new(0.0, 0.0);
    if t <= 0.0 || h.len() < 2 {
        return zero;
    }
    let t = t.min(dt * (h.len() - 1) as f64);
    let full = ((t / dt) * (1.0 + 1e-12)).floor() as usize;
    let full = full.min(h.len() - 1);
    let w = filon_weights(omega * dt);
    let step = Complex64::from_polar(1.0, omega * dt);
    let mut phase = Complex64::new(1.0, 0.0);
    let mut acc = zero;
    for k in 0..full {
        acc += phase * (w.w0 * h[k] + w.w1 * h[k + 1]);
        phase *= step;
    }
    acc *= dt;
    let rem = t - full as f64 * dt;
    if rem > 1e-14 * dt && full + 1 < h.len() {
        let theta = rem / dt;
        let b = h[full] * (1.0 - theta) + h[full + 1] * theta;
        let wr = filon_weights(omega * rem);
        let p = Complex64::from_polar(1.0, omega * full as f64 * dt);
        acc += p * rem * (wr.w0 * h[full] + wr.w1 * b);
    }
    acc
}

/// Weights for `int_0^1 e^{i theta s} p(s) ds` with `p` the cubic taking
/// values `a`, `b` and derivatives `da`, `db` at `s = 0, 1`.
#[derive(Debug, Clone, Copy)]
pub struct HermiteWeights {
    pub a: Complex64,
    pub b: Complex64,
    pub da: Complex64,
    pub db: Complex64,
}

/// `int_0^1 s^j e^{i theta s} ds` for `j = 0..=3`.
fn moments(theta: f64) -> [Complex64; 4] {
    let z = Complex64::new(0.0, theta);
    let mut m = [Complex64::new(0.0, 0.0); 4];
    if theta.abs() < 1.0 {
        let mut zk = Complex64::new(1.0, 0.0);
        let mut fact = 1.0;
        for k in 0..24 {
            let kf = k as f64;
            for (j, mj) in m.iter_mut().enumerate() {
                *mj += zk / (fact * (kf + j as f64 + 1.0));
            }
            fact *= kf + 1.0;
            zk *= z;
        }
    } else {
        let e = Complex64::from_polar(1.0, theta);
        m[0] = (e - 1.0) / z;
        for j in 1..4 {
            m[j] = (e - m[j - 1] * j as f64) / z;
        }
    }
    m
}

pub fn hermite_weights(theta: f64) -> HermiteWeights {
    let [m0, m1, m2, m3] = moments(theta);
    HermiteWeights { a: m0 - m2 * 3.0 + m3 * 2.0, b: m2 * 3.0 - m3 * 2.0, da: m1 - m2 * 2.0 + m3, db: m3 - m2 }
}

/// Derivative estimates at the samples: fourth-order differences when
/// there are at least 5 samples, lower order otherwise.
pub fn sample_slopes(h: &[Complex64], dt: f64) -> Vec<Complex64> {
    let n = h.len();
    match n {
        0 => Vec::new(),
        1 => vec![Complex64::new(0.0, 0.0)],
        2 => vec![(h[1] - h[0]) / dt; 2],
        3 | 4 => {
            let mut d = vec![(h[0] * -3.0 + h[1] * 4.0 - h[2]) / (2.0 * dt)];
            for k in 1..n - 1 {
                d.push((h[k + 1] - h[k - 1]) / (2.0 * dt));
            }
            d.push((h[n - 1] * 3.0 - h[n - 2] * 4.0 + h[n - 3]) / (2.0 * dt));
            d
        }
        _ => super::fd::derivative4(h, dt),
    }
}

/// Value and derivative at `t` of the cubic Hermite interpolant.
pub fn hermite_eval(h: &[Complex64], dh: &[Complex64], dt: f64, t: f64) -> (Complex64, Complex64) {
    let last = h.len() - 1;
    if last == 0 {
        return (h[0], dh[0]);
    }
    let k = ((t / dt).floor().max(0.0) as usize).min(last - 1);
    let s = (t / dt - k as f64).clamp(0.0, 1.0);
    let (a, b, da, db) = (h[k], h[k + 1], dh[k] * dt, dh[k + 1] * dt);
    let c2 = (b - a) * 3.0 - da * 2.0 - db;
    let c3 = (a - b) * 2.0 + da + db;
    let v = a + da * s + c2 * (s * s) + c3 * (s * s * s);
    let d = (da + c2 * (2.0 * s) + c3 * (3.0 * s * s)) / dt;
    (v, d)
}

/// `int_0^t e^{i w tau} h(tau) d tau` for the cubic Hermite interpolant of
/// samples `h` with derivatives `dh`; `t` may fall between nodes.
pub fn hermite_integral(h: &[Complex64], dh: &[Complex64], dt: f64, omega: f64, t: f64) -> Complex64 {
    let zero = Complex64::new(0.0, 0.0);
    if t <= 0.0 || h.len() < 2 {
        return zero;
    }
    let t = t.min(dt * (h.len() - 1) as f64);
    let full = (((t / dt) * (1.0 + 1e-12)).floor() as usize).min(h.len() - 1);
    let w = hermite_weights(omega * dt);
    let step = Complex64::from_polar(1.0, omega * dt);
    let mut phase = Complex64::new(1.0, 0.0);
    let mut acc = zero;
    for k in 0..full {
        acc += phase * (w.a * h[k] + w.b * h[k + 1] + (w.da * dh[k] + w.db * dh[k + 1]) * dt);
        phase *= step;
    }
    acc *= dt;
    let rem = t - full as f64 * dt;
    if rem > 1e-14 * dt && full + 1 < h.len() {
        // Moments of the segment cubic over [0, rho] in its own variable.
        let rho = rem / dt;
        let [m0, m1, m2, m3] = moments(omega * rem);
        let mom = |j: usize, mj: Complex64| mj * rho.powi(j as i32 + 1);
        let (q0, q1, q2, q3) = (mom(0, m0), mom(1, m1), mom(2, m2), mom(3, m3));
        let (a, b, da, db) = (h[full], h[full + 1], dh[full] * dt, dh[full + 1] * dt);
        // p(s) = a + da s + c2 s^2 + c3 s^3
        let c2 = (b - a) * 3.0 - da * 2.0 - db;
        let c3 = (a - b) * 2.0 + da + db;
        let seg = a * q0 + da * q1 + c2 * q2 + c3 * q3;
        acc += Complex64::from_polar(dt, omega * full as f64 * dt) * seg;
    }
    acc
}

/// Filon integral over a non-uniform grid of nodes `x` with values `a`:
/// `int e^{i c x} a(x) dx` for piecewise-linear `a`.
pub fn filon_nonuniform(x: &[f64], a: &[Complex64], c: f64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..x.len().saturating_sub(1) {
        let h = x[k + 1] - x[k];
        if h <= 0.0 {
            continue;
        }
        let w = filon_weights(c * h);
        acc += Complex64::from_polar(h, c * x[k]) * (w.w0 * a[k] + w.w1 * a[k + 1]);
    }
    acc
}

/// Per-mode Duhamel recursion. For modal frequencies `omega_n` it advances
/// `D(t+dt) = e^{-i omega dt} D(t) + int_t^{t+dt} e^{-i omega (t+dt-tau)} f(tau) dtau`,
/// exact for cubic Hermite `f` with the given time derivatives.
#[derive(Debug, Clone)]
pub struct ModalDuhamel {
    rot: Vec<Complex64>,
    w: Vec<HermiteWeights>,
    dt: f64,
}

impl ModalDuhamel {
    pub fn new(omega: &[f64], dt: f64) -> Self {
        let mut rot = Vec::with_capacity(omega.len());
        let mut w = Vec::with_capacity(omega.len());
        for &om in omega {
            let theta = om * dt;
            let r = Complex64::from_polar(1.0, -theta);
            let hw = hermite_weights(theta);
            let k = r * dt;
            rot.push(r);
            w.push(HermiteWeights { a: k * hw.a, b: k * hw.b, da: k * hw.da * dt, db: k * hw.db * dt });
        }
        Self { rot, w, dt }
    }

    pub fn len(&self) -> usize {
        self.rot.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rot.is_empty()
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// One step with values `f0`, `f1` and time derivatives `d0`, `d1`.
    pub fn step(&self, state: &mut [Complex64], f0: &[Complex64], f1: &[Complex64], d0: &[Complex64], d1: &[Complex64]) {
        for n in 0..self.rot.len() {
            let w = &self.w[n];
            state[n] = self.rot[n] * state[n] + w.a * f0[n] + w.b * f1[n] + w.da * d0[n] + w.db * d1[n];
        }
    }

    /// As [`ModalDuhamel::step`] with the same forcing for every mode.
    pub fn step_uniform(&self, state: &mut [Complex64], f0: Complex64, f1: Complex64, d0: Complex64, d1: Complex64) {
        for n in 0..self.rot.len() {
            let w = &self.w[n];
            state[n] = self.rot[n] * state[n] + w.a * f0 + w.b * f1 + w.da * d0 + w.db * d1;
        }
    }
}

/// Time derivatives of a sequence of modal rows, mode by mode, with the
/// same stencils as [`sample_slopes`].
pub fn row_slopes(rows: &[Vec<Complex64>], dt: f64) -> Vec<Vec<Complex64>> {
    let nt = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    let mut out = vec![vec![Complex64::new(0.0, 0.0); m]; nt];
    let mut col = vec![Complex64::new(0.0, 0.0); nt];
    for n in 0..m {
        for k in 0..nt {
            col[k] = rows[k][n];
        }
        for (k, d) in sample_slopes(&col, dt).into_iter().enumerate() {
            out[k][n] = d;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(theta: f64) -> (Complex64, Complex64) {
        let n = 200_000;
        let mut w0 = Complex64::new(0.0, 0.0);
        let mut w1 = Complex64::new(0.0, 0.0);
        for k in 0..n {
            let s = (k as f64 + 0.5) / n as f64;
            let e = Complex64::from_polar(1.0 / n as f64, theta * s);
            w0 += e * (1.0 - s);
            w1 += e * s;
        }
        (w0, w1)
    }

    #[test]
    fn weights_match_midpoint_rule() {
        for &theta in &[0.0, 1e-6, 0.1, 0.24, 0.26, 1.0, 7.5, -3.0, 40.0] {
            let w = filon_weights(theta);
            let (b0, b1) = brute(theta);
            assert!((w.w0 - b0).norm() < 1e-9, "theta {theta}");
            assert!((w.w1 - b1).norm() < 1e-9, "theta {theta}");
        }
    }

    #[test]
    fn integral_exact_for_linear_amplitude() {
        let dt = 0.1;
        let h: Vec<Complex64> = (0..11).map(|k| Complex64::new(k as f64 * dt, 0.0)).collect();
        let om = 13.0;
        for &t in &[1.0, 0.55, 0.1] {
            let exact = {
                let it = Complex64::new(0.0, om);
                let e = (it * t).exp();
                e * t / it - (e - 1.0) / (it * it)
            };
            assert!((filon_integral(&h, dt, om, t) - exact).norm() < 1e-12, "t {t}");
        }
    }

    #[test]
    fn hermite_weights_match_midpoint_rule() {
        let n = 200_000;
        for &theta in &[0.0, 0.3, 0.99, 1.01, 6.0, -20.0, 300.0] {
            let w = hermite_weights(theta);
            let mut b = [Complex64::new(0.0, 0.0); 4];
            for k in 0..n {
                let s = (k as f64 + 0.5) / n as f64;
                let e = Complex64::from_polar(1.0 / n as f64, theta * s);
                let basis = [1.0 - 3.0 * s * s + 2.0 * s * s * s, 3.0 * s * s - 2.0 * s * s * s, s - 2.0 * s * s + s * s * s, s * s * s - s * s];
                for j in 0..4 {
                    b[j] += e * basis[j];
                }
            }
            for (got, want) in [w.a, w.b, w.da, w.db].iter().zip(&b) {
                assert!((got - want).norm() < 1e-9, "theta {theta}");
            }
        }
    }

    #[test]
    fn hermite_integral_exact_for_cubics() {
        let dt = 0.1;
        let f = |t: f64| Complex64::new(t * t * t - 0.5 * t, 2.0 * t * t);
        let df = |t: f64| Complex64::new(3.0 * t * t - 0.5, 4.0 * t);
        let h: Vec<Complex64> = (0..11).map(|k| f(k as f64 * dt)).collect();
        let dh: Vec<Complex64> = (0..11).map(|k| df(k as f64 * dt)).collect();
        let om = 37.0;
        for &t in &[1.0, 0.55, 0.03] {
            let m = 400_000;
            let mut exact = Complex64::new(0.0, 0.0);
            for k in 0..m {
                let s = (k as f64 + 0.5) * t / m as f64;
                exact += Complex64::from_polar(t / m as f64, om * s) * f(s);
            }
            assert!((hermite_integral(&h, &dh, dt, om, t) - exact).norm() < 1e-9, "t {t}");
        }
    }

    #[test]
    fn modal_duhamel_constant_forcing() {
        let om = [0.0, 2.0, 50.0];
        let dt = 0.01;
        let md = ModalDuhamel::new(&om, dt);
        let one = vec![Complex64::new(1.0, 0.0); 3];
        let zero = vec![Complex64::new(0.0, 0.0); 3];
        let mut d = vec![Complex64::new(0.0, 0.0); 3];
        for _ in 0..100 {
            md.step(&mut d, &one, &one, &zero, &zero);
        }
        for (n, &w) in om.iter().enumerate() {
            let exact = if w == 0.0 {
                Complex64::new(1.0, 0.0)
            } else {
                (1.0 - Complex64::from_polar(1.0, -w)) / Complex64::new(0.0, w)
            };
            assert!((d[n] - exact).norm() < 1e-12);
        }
    }
}
