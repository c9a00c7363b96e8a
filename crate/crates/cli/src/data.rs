//! Sampling of data presets and CSV sample files.

use std::f64::consts::PI;
use std::path::Path;

use nlsbvp::estimates::CounterexampleSpec;
use nlsbvp::spectral::{smooth_step, BoundaryTrace, ComplexSamples, Grid1D};
use nlsbvp::Complex64;

use crate::config::DataSpec;
use crate::error::CliError;

fn preset(spec: &DataSpec, v: f64) -> Complex64 {
    match *spec {
        DataSpec::Zero => Complex64::new(0.0, 0.0),
        DataSpec::Gaussian { amplitude, center, width, wavenumber } => {
            Complex64::from_polar(amplitude * (-((v - center) / width).powi(2)).exp(), wavenumber * v)
        }
        DataSpec::SineMode { amplitude, mode } => Complex64::new(amplitude * (mode as f64 * PI * v).sin(), 0.0),
        DataSpec::SmoothedStep { amplitude, start, ramp } => Complex64::new(amplitude * smooth_step((v - start) / ramp), 0.0),
        DataSpec::A2Series { .. } | DataSpec::Csv { .. } => unreachable!("not a closed-form preset"),
    }
}

/// Reads `coordinate, re, im` rows (after a header) and checks the
/// coordinates against `nodes`.
fn read_csv(path: &Path, nodes: &[f64]) -> Result<Vec<Complex64>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let mut out = Vec::with_capacity(nodes.len());
    for (i, line) in text.lines().skip(1).filter(|l| !l.trim().is_empty()).enumerate() {
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        let parse = |s: &str| {
            s.parse::<f64>().map_err(|_| CliError::Config(format!("{}: row {}: `{s}` is not a number", path.display(), i + 2)))
        };
        if cols.len() != 3 {
            return Err(CliError::Config(format!("{}: row {} needs 3 columns", path.display(), i + 2)));
        }
        let (x, re, im) = (parse(cols[0])?, parse(cols[1])?, parse(cols[2])?);
        match nodes.get(i) {
            Some(&node) if (x - node).abs() <= 1e-9 * (1.0 + node.abs()) => out.push(Complex64::new(re, im)),
            Some(&node) => {
                return Err(CliError::Config(format!(
                    "{}: row {} has coordinate {x}, grid node is {node}",
                    path.display(),
                    i + 2
                )))
            }
            None => break,
        }
    }
    if out.len() != nodes.len() {
        return Err(CliError::Config(format!(
            "{}: {} samples for a grid of {} nodes",
            path.display(),
            out.len(),
            nodes.len()
        )));
    }
    Ok(out)
}

/// Initial data on `grid`.
pub fn sample_space(spec: &DataSpec, grid: Grid1D, base: &Path) -> Result<ComplexSamples, CliError> {
    match spec {
        DataSpec::Csv { path } => Ok(ComplexSamples::new(grid, read_csv(&base.join(path), &grid.nodes())?)?),
        DataSpec::A2Series { .. } => Err(CliError::Config("A2-series is boundary data".into())),
        _ => Ok(ComplexSamples::from_fn(grid, |x| preset(spec, x))),
    }
}

/// Boundary data at `nt` nodes of `[0, t_final]`.
pub fn sample_time(spec: &DataSpec, nt: usize, t_final: f64, base: &Path) -> Result<BoundaryTrace, CliError> {
    match spec {
        DataSpec::Csv { path } => {
            let grid = Grid1D::new(0.0, t_final, nt)?;
            Ok(BoundaryTrace::new(read_csv(&base.join(path), &grid.nodes())?, t_final)?)
        }
        DataSpec::A2Series { k, beta } => {
            // Coefficients only; the window on (alpha, beta) belongs to the counterexample command.
            let family = CounterexampleSpec::control(0.0, *beta, vec![*k])?;
            let c = family.coefficients(*k);
            Ok(BoundaryTrace::from_fn(nt, t_final, |t| {
                c.iter().map(|&(j, cj)| Complex64::from_polar(cj, -PI * PI * j as f64 * t)).sum()
            })?)
        }
        _ => Ok(BoundaryTrace::from_fn(nt, t_final, |t| preset(spec, t))?),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets() {
        let g = Grid1D::unit(5).unwrap();
        let s = sample_space(&DataSpec::SineMode { amplitude: 2.0, mode: 1 }, g, Path::new(".")).unwrap();
        assert!((s.values()[2].re - 2.0).abs() < 1e-15);
        let h = sample_time(&DataSpec::SmoothedStep { amplitude: 1.0, start: 0.0, ramp: 0.5 }, 11, 1.0, Path::new("."))
            .unwrap();
        assert_eq!(h.samples()[0].norm(), 0.0);
        assert_eq!(h.samples()[10].re, 1.0);
    }

    #[test]
    fn a2_series_matches_the_family() {
        let h = sample_time(&DataSpec::A2Series { k: 3, beta: 1.2 }, 101, 2.0 / PI, Path::new(".")).unwrap();
        let family = CounterexampleSpec::new(0.3, 1.2, vec![3]).unwrap().boundary_trace(3, 101).unwrap();
        assert_eq!(h.samples(), family.samples());
    }

    #[test]
    fn csv_samples_must_sit_on_the_grid() {
        let dir = tempfile::tempdir().unwrap();
        let g = Grid1D::unit(3).unwrap();
        std::fs::write(dir.path().join("phi.csv"), "x,re,im\n0,0,0\n0.5,1,2\n1,0,0\n").unwrap();
        let s = sample_space(&DataSpec::Csv { path: "phi.csv".into() }, g, dir.path()).unwrap();
        assert_eq!(s.values()[1], Complex64::new(1.0, 2.0));
        std::fs::write(dir.path().join("bad.csv"), "x,re,im\n0,0,0\n0.4,1,2\n1,0,0\n").unwrap();
        assert!(matches!(sample_space(&DataSpec::Csv { path: "bad.csv".into() }, g, dir.path()), Err(CliError::Config(_))));
        assert!(matches!(sample_space(&DataSpec::Csv { path: "none.csv".into() }, g, dir.path()), Err(CliError::Io(_))));
    }
}
