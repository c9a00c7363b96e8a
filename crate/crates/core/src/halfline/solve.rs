use num_complex::Complex64;
use rayon::prelude::*;

use super::boundary::{BoundaryOperator, BoundaryOperatorOptions};
use super::extend::{extend_odd_on, extend_on};
use super::line::{free_field_line, line_duhamel_field, TruncatedLine};
use crate::error::{invalid, Annotated, Error, Result};
use crate::spectral::{BoundaryTrace, ComplexSamples, Grid1D, SobolevIndex, SpaceTimeField};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfLineOptions {
    pub boundary: BoundaryOperatorOptions,
    /// Refuse data with `phi(0) != h(0)`.
    pub enforce_compatibility: bool,
    pub compat_tol: f64,
    pub extension: ExtensionKind,
}

/// How data on the half-line are continued to the negative axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExtensionKind {
    /// `C^2` reflection, bounded on `H^s` for `s < 5/2`.
    #[default]
    Reflection,
    /// `phi*(-y) = -phi(y)`. With `h = 0` and odd data the boundary
    /// correction vanishes and the solve reduces to the whole-line flow.
    Odd,
}

impl Default for HalfLineOptions {
    fn default() -> Self {
        Self { boundary: BoundaryOperatorOptions::default(), enforce_compatibility: true, compat_tol: 1e-8, extension: ExtensionKind::Reflection }
    }
}

/// Grids and precomputed transforms for repeated half-line solves.
///
/// Solutions live on `[0, x_max - dx] x [0, T]`; the whole-line pieces are
/// computed on the periodic line `[-x_max, x_max)`.
#[derive(Debug, Clone)]
pub struct HalfLineWorkspace {
    line: TruncatedLine,
    half: Grid1D,
    times: Grid1D,
    op: BoundaryOperator,
    opts: HalfLineOptions,
}

impl HalfLineWorkspace {
    pub fn new(half: &Grid1D, times: &Grid1D, opts: HalfLineOptions) -> Result<Self> {
        let line = TruncatedLine::for_half_grid(half)?;
        Ok(Self { line, half: *half, times: *times, op: BoundaryOperator::new(times, opts.boundary), opts })
    }

    pub fn line(&self) -> &TruncatedLine {
        &self.line
    }

    pub fn half_grid(&self) -> &Grid1D {
        &self.half
    }

    pub fn times(&self) -> &Grid1D {
        &self.times
    }

    fn restrict(&self, f: &SpaceTimeField) -> SpaceTimeField {
        let rows = f.rows().map(|r| self.line.restrict(r)).collect();
        SpaceTimeField::from_snapshots(self.half, self.times, rows).expect("shapes")
    }

    fn extend(&self, half: &[Complex64]) -> ComplexSamples {
        match self.opts.extension {
            ExtensionKind::Reflection => extend_on(half, &self.line),
            ExtensionKind::Odd => extend_odd_on(half, &self.line),
        }
    }

    fn trace(&self, f: &SpaceTimeField) -> Vec<Complex64> {
        f.column(self.line.zero_index())
    }

    /// Boundary correction with data `b` on the solution's time grid.
    pub fn boundary_field(&self, b: &[Complex64]) -> SpaceTimeField {
        self.op.apply(b, &self.half, &self.times)
    }

    /// Solution with initial data `phi`, boundary data `h` and no forcing.
    pub fn linear_part(&self, phi: &[Complex64], h: &[Complex64]) -> Annotated<SpaceTimeField> {
        let ext = self.extend(phi);
        let free = free_field_line(&ext, &self.times);
        let g = self.trace(&free.value);
        let b: Vec<Complex64> = h.iter().zip(&g).map(|(a, c)| a - c).collect();
        let mut u = self.restrict(&free.value);
        u.add_assign(&self.boundary_field(&b)).expect("shapes");
        Annotated { value: u, warnings: free.warnings }
    }

    /// Solution of `i u_t + u_xx = f`, zero initial and boundary data.
    pub fn forced_part(&self, f: &SpaceTimeField) -> SpaceTimeField {
        let rows: Vec<Vec<Complex64>> =
            f.rows().collect::<Vec<_>>().par_iter().map(|r| self.extend(r).into_values()).collect();
        let fstar = SpaceTimeField::from_snapshots(*self.line.grid(), self.times, rows).expect("shapes");
        let d = line_duhamel_field(&fstar);
        let p = self.trace(&d);
        let b: Vec<Complex64> = p.iter().map(|z| -z).collect();
        let mut u = self.restrict(&d);
        u.add_assign(&self.boundary_field(&b)).expect("shapes");
        u
    }

    pub fn check_compatibility(&self, phi0: Complex64, h0: Complex64) -> Result<()> {
        let scale = 1.0f64.max(phi0.norm()).max(h0.norm());
        if self.opts.enforce_compatibility && (phi0 - h0).norm() > self.opts.compat_tol * scale {
            return Err(Error::Compatibility(vec![format!(
                "phi(0) - h(0) = {:.3e} (needs h(0) = phi(0))",
                (phi0 - h0).norm()
            )]));
        }
        Ok(())
    }
}

/// Solves `i u_t + u_xx = f` on the half-line with `u(x,0) = phi`,
/// `u(0,t) = h(t)`.
///
/// `phi` lives on `[0, x_max - dx]`; the solution is returned on that grid at
/// every time node of `h`. The representation is
/// `u = W(t) phi* + Duhamel(f*) + W_b(h - g - p)` with `phi*`, `f*` the
/// reflection extensions and `g`, `p` the traces at `x = 0` of the two
/// whole-line terms.
pub fn solve_linear_halfline(
    phi: &ComplexSamples,
    h: &BoundaryTrace,
    f: Option<&SpaceTimeField>,
    s: SobolevIndex,
    opts: HalfLineOptions,
) -> Result<Annotated<SpaceTimeField>> {
    if s.value() >= 2.5 {
        return invalid(format!("half-line solver needs s < 5/2, got {}", s.value()));
    }
    let times = h.time_grid();
    let ws = HalfLineWorkspace::new(phi.grid(), &times, opts)?;
    if s.value() > 0.5 {
        ws.check_compatibility(phi.values()[0], h.samples()[0])?;
    }
    let mut u = ws.linear_part(phi.values(), h.samples());
    if let Some(f) = f {
        if f.nx() != phi.len() || f.nt() != times.n_points() {
            return invalid("forcing field must live on the solution grid");
        }
        u.value.add_assign(&ws.forced_part(f))?;
    }
    Ok(u)
}
