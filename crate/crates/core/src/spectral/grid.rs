use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Uniform grid on `[origin, origin + extent]` with both endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    origin: f64,
    extent: f64,
    n_points: usize,
}

impl Grid1D {
    pub fn new(origin: f64, extent: f64, n_points: usize) -> Result<Self> {
        if n_points < 2 {
            return invalid(format!("grid needs at least 2 points, got {n_points}"));
        }
        if !(extent > 0.0 && extent.is_finite() && origin.is_finite()) {
            return invalid(format!("grid extent must be positive and finite, got {extent}"));
        }
        Ok(Self { origin, extent, n_points })
    }

    /// The unit interval `[0, 1]`.
    pub fn unit(n_points: usize) -> Result<Self> {
        Self::new(0.0, 1.0, n_points)
    }

    pub fn origin(&self) -> f64 {
        self.origin
    }

    pub fn extent(&self) -> f64 {
        self.extent
    }

    pub fn end(&self) -> f64 {
        self.origin + self.extent
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn spacing(&self) -> f64 {
        self.extent / (self.n_points - 1) as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        if j + 1 == self.n_points {
            self.end()
        } else {
            self.origin + j as f64 * self.spacing()
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n_points).map(|j| self.node(j)).collect()
    }

    /// Index of the node closest to `x`.
    pub fn nearest(&self, x: f64) -> usize {
        let j = ((x - self.origin) / self.spacing()).round();
        j.clamp(0.0, (self.n_points - 1) as f64) as usize
    }

    /// Index of `x` if it coincides with a node up to a relative tolerance.
    pub fn index_of(&self, x: f64) -> Option<usize> {
        let j = self.nearest(x);
        let tol = 1e-9 * self.spacing();
        ((self.node(j) - x).abs() <= tol).then_some(j)
    }
}

/// Complex samples of a function on a [`Grid1D`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexSamples {
    grid: Grid1D,
    values: Vec<Complex64>,
}

impl ComplexSamples {
    pub fn new(grid: Grid1D, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.n_points() {
            return invalid(format!(
                "{} values supplied for a grid of {} points",
                values.len(),
                grid.n_points()
            ));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: Grid1D, f: impl Fn(f64) -> Complex64) -> Self {
        let values = grid.nodes().into_iter().map(f).collect();
        Self { grid, values }
    }

    pub fn zeros(grid: Grid1D) -> Self {
        Self { grid, values: vec![Complex64::new(0.0, 0.0); grid.n_points()] }
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Trapezoid-rule L² norm.
    pub fn l2_norm(&self) -> f64 {
        let w: Vec<f64> = self.values.iter().map(|z| z.norm_sqr()).collect();
        super::trapezoid(&w, self.grid.spacing()).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, z| m.max(z.norm()))
    }
}

/// Samples `u(x_j, t_k)` stored time-major: row `k` is the snapshot at `t_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceTimeField {
    space: Grid1D,
    time: Grid1D,
    data: Vec<Complex64>,
}

impl SpaceTimeField {
    pub fn zeros(space: Grid1D, time: Grid1D) -> Self {
        let n = space.n_points() * time.n_points();
        Self { space, time, data: vec![Complex64::new(0.0, 0.0); n] }
    }

    pub fn new(space: Grid1D, time: Grid1D, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != space.n_points() * time.n_points() {
            return invalid("field data length does not match its grids");
        }
        Ok(Self { space, time, data })
    }

    pub fn from_fn(space: Grid1D, time: Grid1D, f: impl Fn(f64, f64) -> Complex64) -> Self {
        let xs = space.nodes();
        let mut data = Vec::with_capacity(xs.len() * time.n_points());
        for t in time.nodes() {
            data.extend(xs.iter().map(|&x| f(x, t)));
        }
        Self { space, time, data }
    }

    /// Builds a field from one snapshot per time node.
    pub fn from_snapshots(space: Grid1D, time: Grid1D, rows: Vec<Vec<Complex64>>) -> Result<Self> {
        if rows.len() != time.n_points() || rows.iter().any(|r| r.len() != space.n_points()) {
            return invalid("snapshot shapes do not match the grids");
        }
        Ok(Self { space, time, data: rows.concat() })
    }

    pub fn space(&self) -> &Grid1D {
        &self.space
    }

    pub fn time(&self) -> &Grid1D {
        &self.time
    }

    pub fn nx(&self) -> usize {
        self.space.n_points()
    }

    pub fn nt(&self) -> usize {
        self.time.n_points()
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn snapshot(&self, k: usize) -> &[Complex64] {
        let nx = self.nx();
        &self.data[k * nx..(k + 1) * nx]
    }

    pub fn snapshot_mut(&mut self, k: usize) -> &mut [Complex64] {
        let nx = self.nx();
        &mut self.data[k * nx..(k + 1) * nx]
    }

    pub fn snapshot_samples(&self, k: usize) -> ComplexSamples {
        ComplexSamples { grid: self.space, values: self.snapshot(k).to_vec() }
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Complex64]> {
        self.data.chunks(self.nx())
    }

    pub fn rows_mut(&mut self) -> impl Iterator<Item = &mut [Complex64]> {
        let nx = self.nx();
        self.data.chunks_mut(nx)
    }

    /// Time series at spatial node `j`.
    pub fn column(&self, j: usize) -> Vec<Complex64> {
        self.rows().map(|r| r[j]).collect()
    }

    pub fn at(&self, j: usize, k: usize) -> Complex64 {
        self.data[k * self.nx() + j]
    }

    /// `self + other` on identical grids.
    pub fn add(&self, other: &SpaceTimeField) -> Result<SpaceTimeField> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(Self { space: self.space, time: self.time, data })
    }

    pub fn add_assign(&mut self, other: &SpaceTimeField) -> Result<()> {
        self.check_same_shape(other)?;
        self.data.iter_mut().zip(&other.data).for_each(|(a, b)| *a += b);
        Ok(())
    }

    pub fn scale(&mut self, c: Complex64) {
        self.data.iter_mut().for_each(|z| *z *= c);
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> SpaceTimeField {
        Self { space: self.space, time: self.time, data: self.data.iter().map(|&z| f(z)).collect() }
    }

    /// Sup over time nodes of the trapezoid L² distance between snapshots.
    pub fn sup_l2_distance(&self, other: &SpaceTimeField) -> Result<f64> {
        self.check_same_shape(other)?;
        let dx = self.space.spacing();
        Ok(self
            .rows()
            .zip(other.rows())
            .map(|(a, b)| {
                let w: Vec<f64> = a.iter().zip(b).map(|(p, q)| (p - q).norm_sqr()).collect();
                super::trapezoid(&w, dx).sqrt()
            })
            .fold(0.0, f64::max))
    }

    pub fn max_abs_diff(&self, other: &SpaceTimeField) -> Result<f64> {
        self.check_same_shape(other)?;
        Ok(self.data.iter().zip(&other.data).fold(0.0, |m, (a, b)| m.max((a - b).norm())))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    fn check_same_shape(&self, other: &SpaceTimeField) -> Result<()> {
        if self.nx() != other.nx() || self.nt() != other.nt() {
            return invalid("fields live on different grids");
        }
        Ok(())
    }
}

/// Dirichlet data `h(t_k)` on a uniform grid over `[0, T]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryTrace {
    samples: Vec<Complex64>,
    t_final: f64,
}

impl BoundaryTrace {
    pub fn new(samples: Vec<Complex64>, t_final: f64) -> Result<Self> {
        if samples.len() < 2 {
            return invalid("boundary trace needs at least 2 samples");
        }
        if !(t_final > 0.0 && t_final.is_finite()) {
            return invalid(format!("boundary trace horizon must be positive, got {t_final}"));
        }
        if samples.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return invalid("boundary trace contains non-finite samples");
        }
        Ok(Self { samples, t_final })
    }

    /// Samples `f` at `n_samples` uniform nodes of `[0, t_final]`.
    pub fn from_fn(n_samples: usize, t_final: f64, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let grid = Grid1D::new(0.0, t_final, n_samples)?;
        Self::new(grid.nodes().into_iter().map(f).collect(), t_final)
    }

    pub fn zeros(n_samples: usize, t_final: f64) -> Result<Self> {
        Self::new(vec![Complex64::new(0.0, 0.0); n_samples], t_final)
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn t_final(&self) -> f64 {
        self.t_final
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn dt(&self) -> f64 {
        self.t_final / (self.samples.len() - 1) as f64
    }

    pub fn time_grid(&self) -> Grid1D {
        Grid1D { origin: 0.0, extent: self.t_final, n_points: self.samples.len() }
    }

    /// Piecewise-linear interpolant, zero outside `[0, T]`.
    pub fn value_at(&self, t: f64) -> Complex64 {
        if t < 0.0 || t > self.t_final {
            return Complex64::new(0.0, 0.0);
        }
        let s = t / self.dt();
        let k = (s.floor() as usize).min(self.samples.len() - 2);
        let theta = s - k as f64;
        self.samples[k] * (1.0 - theta) + self.samples[k + 1] * theta
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> BoundaryTrace {
        Self { samples: self.samples.iter().map(|&z| f(z)).collect(), t_final: self.t_final }
    }

    /// `h - h(0)`.
    pub fn minus_initial(&self) -> BoundaryTrace {
        let h0 = self.samples[0];
        self.map(|z| z - h0)
    }

    /// Samples `k0..=k1` as a trace on `[0, (k1 - k0) dt]`.
    pub fn window(&self, k0: usize, k1: usize) -> Result<BoundaryTrace> {
        if k1 <= k0 || k1 >= self.samples.len() {
            return invalid(format!("window {k0}..={k1} outside trace of {} samples", self.len()));
        }
        Self::new(self.samples[k0..=k1].to_vec(), (k1 - k0) as f64 * self.dt())
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// Second-order finite-difference derivative at every node.
    pub fn derivative(&self) -> Vec<Complex64> {
        let h = &self.samples;
        let n = h.len();
        let dt = self.dt();
        if n == 2 {
            let d = (h[1] - h[0]) / dt;
            return vec![d, d];
        }
        let mut d = Vec::with_capacity(n);
        d.push((-3.0 * h[0] + 4.0 * h[1] - h[2]) / (2.0 * dt));
        for k in 1..n - 1 {
            d.push((h[k + 1] - h[k - 1]) / (2.0 * dt));
        }
        d.push((3.0 * h[n - 1] - 4.0 * h[n - 2] + h[n - 3]) / (2.0 * dt));
        d
    }
}
