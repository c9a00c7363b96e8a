//! Independent time steppers used as reference solutions.

use num_complex::Complex64;
use rustfft::FftPlanner;

/// Solves `a_i x_{i-1} + b_i x_i + c_i x_{i+1} = d_i` (Thomas algorithm).
pub fn thomas(a: &[Complex64], b: &[Complex64], c: &[Complex64], d: &[Complex64]) -> Vec<Complex64> {
    let n = d.len();
    let mut cp = vec![Complex64::new(0.0, 0.0); n];
    let mut dp = vec![Complex64::new(0.0, 0.0); n];
    cp[0] = c[0] / b[0];
    dp[0] = d[0] / b[0];
    for i in 1..n {
        let m = b[i] - a[i] * cp[i - 1];
        cp[i] = c[i] / m;
        dp[i] = (d[i] - a[i] * dp[i - 1]) / m;
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    x[n - 1] = dp[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = dp[i] - cp[i] * x[i + 1];
    }
    x
}

fn nonlin(z: Complex64, p: f64, lambda: f64) -> Complex64 {
    let m = z.norm();
    if m == 0.0 {
        z
    } else {
        z * (lambda * m.powf(p - 2.0))
    }
}

/// Crank-Nicolson (implicit midpoint) for `i u_t + u_xx + lambda |u|^{p-2} u = 0`
/// on `[0, 1]` with Dirichlet data `h1`, `h2`; the midpoint nonlinearity is
/// resolved by fixed-point sweeps. Returns `u` at every `steps`-th time.
pub fn crank_nicolson_interval(
    phi: &[Complex64],
    h1: impl Fn(f64) -> Complex64,
    h2: impl Fn(f64) -> Complex64,
    p: f64,
    lambda: f64,
    t_final: f64,
    n_steps: usize,
) -> Vec<Complex64> {
    let nx = phi.len();
    let dx = 1.0 / (nx - 1) as f64;
    let dt = t_final / n_steps as f64;
    let i = Complex64::new(0.0, 1.0);
    let r = i * dt / (2.0 * dx * dx);
    let m = nx - 2;
    let a = vec![-r; m];
    let b = vec![Complex64::new(1.0, 0.0) + r * 2.0; m];
    let c = vec![-r; m];
    let mut u = phi.to_vec();
    for k in 0..n_steps {
        let t1 = (k + 1) as f64 * dt;
        let (l1, r1) = (h1(t1), h2(t1));
        // Explicit half of the Laplacian.
        let mut rhs0 = vec![Complex64::new(0.0, 0.0); m];
        for j in 1..nx - 1 {
            rhs0[j - 1] = u[j] + r * (u[j - 1] - u[j] * 2.0 + u[j + 1]);
        }
        rhs0[0] += r * l1;
        rhs0[m - 1] += r * r1;
        let mut next = u.clone();
        next[0] = l1;
        next[nx - 1] = r1;
        for _ in 0..50 {
            let mut rhs = rhs0.clone();
            for j in 1..nx - 1 {
                let mid = (u[j] + next[j]) * 0.5;
                rhs[j - 1] += i * dt * nonlin(mid, p, lambda);
            }
            let sol = thomas(&a, &b, &c, &rhs);
            let change = sol.iter().zip(&next[1..nx - 1]).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
            next[1..nx - 1].copy_from_slice(&sol);
            if change < 1e-15 {
                break;
            }
        }
        u = next;
    }
    u
}

/// Strang splitting on the periodic line `[-x_max, x_max)` with `n` nodes;
/// returns the solution at `t_final`.
pub fn split_step_line(psi: &[Complex64], x_max: f64, p: f64, lambda: f64, t_final: f64, n_steps: usize) -> Vec<Complex64> {
    let n = psi.len();
    let dx = 2.0 * x_max / n as f64;
    let dt = t_final / n_steps as f64;
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(n);
    let inv = planner.plan_fft_inverse(n);
    let xi: Vec<f64> = (0..n)
        .map(|k| {
            let kk = if k <= n / 2 { k as f64 } else { k as f64 - n as f64 };
            2.0 * std::f64::consts::PI * kk / (n as f64 * dx)
        })
        .collect();
    let half_kick = |u: &mut [Complex64], tau: f64| {
        for z in u.iter_mut() {
            let m = z.norm();
            if m > 0.0 {
                *z *= Complex64::from_polar(1.0, lambda * m.powf(p - 2.0) * tau);
            }
        }
    };
    let mut u = psi.to_vec();
    for _ in 0..n_steps {
        half_kick(&mut u, 0.5 * dt);
        fwd.process(&mut u);
        for (z, &k) in u.iter_mut().zip(&xi) {
            *z *= Complex64::from_polar(1.0 / n as f64, -k * k * dt);
        }
        inv.process(&mut u);
        half_kick(&mut u, 0.5 * dt);
    }
    u
}
