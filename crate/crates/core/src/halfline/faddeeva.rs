//! Faddeeva function `w(z) = e^{-z^2} erfc(-i z)`.
//!
//! Weideman's rational expansion (SIAM J. Numer. Anal. 31, 1994) in the
//! upper half-plane, reflected to the lower half-plane through
//! `w(z) = 2 e^{-z^2} - w(-z)`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

const N: usize = 40;

struct Expansion {
    l: f64,
    a: [f64; N],
}

fn expansion() -> &'static Expansion {
    static E: OnceLock<Expansion> = OnceLock::new();
    E.get_or_init(|| {
        let m = 2 * N;
        let l = (N as f64 / 2f64.sqrt()).sqrt();
        let mut a = [0.0; N];
        for (i, an) in a.iter_mut().enumerate() {
            let n = (i + 1) as f64;
            let mut s = 0.0;
            for k in -(m as i64) + 1..m as i64 {
                let theta = k as f64 * PI / m as f64;
                let t = l * (0.5 * theta).tan();
                let f = (-t * t).exp() * (l * l + t * t);
                s += f * (n * theta).cos();
            }
            *an = s / (2 * m) as f64;
        }
        Expansion { l, a }
    })
}

fn upper(z: Complex64) -> Complex64 {
    let e = expansion();
    let iz = Complex64::new(0.0, 1.0) * z;
    let den = e.l - iz;
    let zz = (e.l + iz) / den;
    let mut p = Complex64::new(0.0, 0.0);
    for &an in e.a.iter().rev() {
        p = p * zz + an;
    }
    2.0 * p / (den * den) + 1.0 / (PI.sqrt() * den)
}

pub fn faddeeva(z: Complex64) -> Complex64 {
    if z.im >= 0.0 {
        upper(z)
    } else {
        2.0 * (-z * z).exp() - upper(-z)
    }
}
