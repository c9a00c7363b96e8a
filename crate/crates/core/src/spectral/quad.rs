//! Composite Gauss-Legendre quadrature.

const GL8_X: [f64; 4] = [0.183_434_642_495_649_8, 0.525_532_409_916_329, 0.796_666_477_413_626_7, 0.960_289_856_497_536_3];
const GL8_W: [f64; 4] = [0.362_683_783_378_362, 0.313_706_645_877_887_3, 0.222_381_034_453_374_5, 0.101_228_536_290_376_3];

/// Nodes and weights of the 8-point rule on `[a, b]`.
pub fn gauss_legendre_8(a: f64, b: f64) -> [(f64, f64); 8] {
    let c = 0.5 * (a + b);
    let r = 0.5 * (b - a);
    let mut out = [(0.0, 0.0); 8];
    for i in 0..4 {
        out[2 * i] = (c - r * GL8_X[i], r * GL8_W[i]);
        out[2 * i + 1] = (c + r * GL8_X[i], r * GL8_W[i]);
    }
    out
}

/// `int_a^b f` with `panels` equal 8-point panels.
pub fn integrate<T>(a: f64, b: f64, panels: usize, f: impl Fn(f64) -> T) -> T
where
    T: std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T> + Default,
{
    let h = (b - a) / panels as f64;
    let mut acc = T::default();
    for p in 0..panels {
        let lo = a + p as f64 * h;
        for (x, w) in gauss_legendre_8(lo, lo + h) {
            acc = acc + f(x) * w;
        }
    }
    acc
}
