//! Ratio probes `||L data||_A / ||data||_B` over seeded random ensembles.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Warning};
use crate::halfline::{free_field_line, HalfLineOptions, HalfLineWorkspace, TruncatedLine};
use crate::interval::{wh_field, WhOptions};
use crate::spectral::fd::derivative4;
use crate::spectral::{
    lebesgue, mixed_norm, smooth_step, sobolev_norm_samples, AdmissiblePair, BoundaryTrace, ComplexSamples, Grid1D,
    SpaceTimeField, DEFAULT_PADDING,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProbeOperator {
    /// Half-line boundary operator, zero initial data.
    Wb,
    /// Interval boundary operator with data at `x = 0`.
    Wh,
    /// Time traces of the free flow on the line.
    FreeLineTrace,
    /// Space-time norms of the free flow on the line.
    FreeLineStrichartz,
    /// `d_x^s W_h h`, with `s = 2 alpha - 1`.
    WhDerivative,
}

pub const OPERATOR_NAMES: [&str; 5] = ["wb", "wh", "free-line-trace", "free-line-strichartz", "wh-derivative"];

impl fmt::Display for ProbeOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = match self {
            ProbeOperator::Wb => 0,
            ProbeOperator::Wh => 1,
            ProbeOperator::FreeLineTrace => 2,
            ProbeOperator::FreeLineStrichartz => 3,
            ProbeOperator::WhDerivative => 4,
        };
        f.write_str(OPERATOR_NAMES[i])
    }
}

impl FromStr for ProbeOperator {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim() {
            "wb" => ProbeOperator::Wb,
            "wh" => ProbeOperator::Wh,
            "free-line-trace" => ProbeOperator::FreeLineTrace,
            "free-line-strichartz" => ProbeOperator::FreeLineStrichartz,
            "wh-derivative" => ProbeOperator::WhDerivative,
            other => {
                return Err(Error::Registry(format!(
                    "unknown operator '{other}'; expected one of {}",
                    OPERATOR_NAMES.join(", ")
                )))
            }
        })
    }
}

/// Norms in the registry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum NormDescriptor {
    /// `L^2(R^+ x (0,T))`, on the computational half-line.
    L2HalfStrip,
    /// `L^r((0,1) x (0,T))`.
    Omega(f64),
    /// `sup_t L^2_x`.
    SupTL2,
    /// `sup_x H^s_t(0,T)`.
    SupXHt(f64),
    /// `L^q_t L^r_x`.
    Mixed { q: f64, r: f64 },
    /// `H^alpha(0,T)` of boundary data, `alpha` taken from the probe.
    HAlpha,
    /// `L^2(R)` of initial data.
    L2Line,
}

pub const NORM_FORMS: [&str; 7] =
    ["L2(R+ x (0,T))", "L<r>(Omega_T)", "sup_t L2", "sup_x H^<s>_t", "L^<q>_t L^<r>_x", "H^alpha", "L2(R)"];

fn fmt_exp(x: f64) -> String {
    if x.is_infinite() {
        "inf".into()
    } else {
        format!("{x}")
    }
}

fn parse_exp(s: &str) -> Option<f64> {
    if s == "inf" {
        return Some(f64::INFINITY);
    }
    if let Some((a, b)) = s.split_once('/') {
        return Some(a.parse::<f64>().ok()? / b.parse::<f64>().ok()?);
    }
    s.parse().ok()
}

impl fmt::Display for NormDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            NormDescriptor::L2HalfStrip => f.write_str("L2(R+ x (0,T))"),
            NormDescriptor::Omega(r) => write!(f, "L{}(Omega_T)", fmt_exp(r)),
            NormDescriptor::SupTL2 => f.write_str("sup_t L2"),
            NormDescriptor::SupXHt(s) => write!(f, "sup_x H^{s}_t"),
            NormDescriptor::Mixed { q, r } => write!(f, "L^{}_t L^{}_x", fmt_exp(q), fmt_exp(r)),
            NormDescriptor::HAlpha => f.write_str("H^alpha"),
            NormDescriptor::L2Line => f.write_str("L2(R)"),
        }
    }
}

impl FromStr for NormDescriptor {
    type Err = Error;
    fn from_str(text: &str) -> Result<Self> {
        let s: String = text
            .replace('ℝ', "R")
            .replace('⁺', "+")
            .replace('×', "x")
            .replace('Ω', "Omega")
            .replace('²', "2")
            .replace('⁴', "4")
            .replace('α', "alpha")
            .chars()
            .filter(|c| !c.is_whitespace() && *c != '{' && *c != '}')
            .collect();
        let bad = || {
            Error::Registry(format!("unknown norm descriptor '{text}'; expected one of {}", NORM_FORMS.join(", ")))
        };
        let d = match s.as_str() {
            "L2(R+x(0,T))" => NormDescriptor::L2HalfStrip,
            "sup_tL2" => NormDescriptor::SupTL2,
            "H^alpha" => NormDescriptor::HAlpha,
            "L2" | "L2(R)" => NormDescriptor::L2Line,
            _ => {
                if let Some(mid) = s.strip_prefix('L').and_then(|r| r.strip_suffix("(Omega_T)")) {
                    NormDescriptor::Omega(parse_exp(mid.trim_start_matches('^')).ok_or_else(bad)?)
                } else if let Some(mid) = s.strip_prefix("sup_xH^").and_then(|r| r.strip_suffix("_t")) {
                    NormDescriptor::SupXHt(parse_exp(mid).ok_or_else(bad)?)
                } else if let Some((a, b)) = s.strip_suffix("_x").and_then(|r| r.split_once("_tL")) {
                    let q = parse_exp(a.trim_start_matches('L').trim_start_matches('^')).ok_or_else(bad)?;
                    let r = parse_exp(b.trim_start_matches('^')).ok_or_else(bad)?;
                    NormDescriptor::Mixed { q, r }
                } else {
                    return Err(bad());
                }
            }
        };
        Ok(d)
    }
}

impl TryFrom<String> for NormDescriptor {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<NormDescriptor> for String {
    fn from(d: NormDescriptor) -> String {
        d.to_string()
    }
}

/// How random data are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnsembleKind {
    /// Gaussian coefficients on every frequency `2 pi m / T`, `|m| <= bandwidth`
    /// (for line data: `xi = m`).
    #[default]
    Dense,
    /// Gaussian coefficients on the resonant frequencies `pi^2 (n^2 + 1)`,
    /// `1 <= n <= bandwidth`, of the interval operator.
    Lattice,
}

fn default_bandwidth() -> usize {
    8
}

fn default_t_final() -> f64 {
    1.0
}

/// An inequality `||L data||_lhs <= C ||data||_rhs` to be ratio-tested.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateProbe {
    pub operator: ProbeOperator,
    pub lhs_norm: NormDescriptor,
    pub rhs_norm: NormDescriptor,
    pub alpha: f64,
    pub ensemble_size: usize,
    pub seed: u64,
    #[serde(default = "default_bandwidth")]
    pub bandwidth: usize,
    #[serde(default)]
    pub ensemble: EnsembleKind,
    #[serde(default = "default_t_final")]
    pub t_final: f64,
}

impl EstimateProbe {
    /// A probe with bandwidth 8, dense ensemble and `T = 1`.
    pub fn new(
        operator: ProbeOperator,
        lhs_norm: NormDescriptor,
        rhs_norm: NormDescriptor,
        alpha: f64,
        ensemble_size: usize,
        seed: u64,
    ) -> Result<Self> {
        let p = Self {
            operator,
            lhs_norm,
            rhs_norm,
            alpha,
            ensemble_size,
            seed,
            bandwidth: default_bandwidth(),
            ensemble: EnsembleKind::Dense,
            t_final: default_t_final(),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_bandwidth(mut self, bandwidth: usize) -> Self {
        self.bandwidth = bandwidth;
        self
    }

    pub fn with_ensemble(mut self, kind: EnsembleKind) -> Self {
        self.ensemble = kind;
        self
    }

    pub fn with_t_final(mut self, t: f64) -> Self {
        self.t_final = t;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.ensemble_size < 10 {
            return Err(Error::InvalidSpec(format!("ensemble_size must be >= 10, got {}", self.ensemble_size)));
        }
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return Err(Error::InvalidSpec(format!("alpha must be finite and >= 0, got {}", self.alpha)));
        }
        if self.bandwidth == 0 || !(self.t_final > 0.0 && self.t_final.is_finite()) {
            return Err(Error::InvalidSpec(format!(
                "bandwidth must be >= 1 and t_final > 0, got {} and {}",
                self.bandwidth, self.t_final
            )));
        }
        check_registry(self.operator, self.lhs_norm, self.rhs_norm, self.alpha)
    }

    fn time_data(&self) -> bool {
        matches!(self.operator, ProbeOperator::Wb | ProbeOperator::Wh | ProbeOperator::WhDerivative)
    }
}

fn derivative_order(alpha: f64) -> Option<usize> {
    let s = 2.0 * alpha - 1.0;
    [1usize, 2].into_iter().find(|&k| (s - k as f64).abs() < 1e-9)
}

fn check_registry(op: ProbeOperator, lhs: NormDescriptor, rhs: NormDescriptor, alpha: f64) -> Result<()> {
    use NormDescriptor::*;
    let admissible = |q: f64, r: f64| AdmissiblePair::new(q, r).is_ok();
    let ok = match op {
        ProbeOperator::Wb => {
            rhs == HAlpha
                && match lhs {
                    L2HalfStrip | SupXHt(_) => true,
                    Mixed { q, r } => admissible(q, r),
                    _ => false,
                }
        }
        ProbeOperator::Wh => rhs == HAlpha && (matches!(lhs, Omega(r) if r == 2.0 || r == 4.0) || lhs == SupTL2),
        ProbeOperator::WhDerivative => {
            if derivative_order(alpha).is_none() {
                return Err(Error::Registry(format!(
                    "wh-derivative measures d_x^s with s = 2 alpha - 1 in {{1, 2}}; got alpha = {alpha}"
                )));
            }
            rhs == HAlpha && (lhs == Omega(4.0) || lhs == SupTL2)
        }
        ProbeOperator::FreeLineTrace => rhs == L2Line && matches!(lhs, SupXHt(s) if s >= 0.0),
        ProbeOperator::FreeLineStrichartz => rhs == L2Line && matches!(lhs, Mixed { q, r } if admissible(q, r)),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Registry(format!("no registered probe ({op}, {lhs}, {rhs})")))
    }
}

/// One member of an ensemble.
#[derive(Debug, Clone, PartialEq)]
pub enum ProbeData {
    /// Boundary data on `[0, T]`.
    Time(BoundaryTrace),
    /// Initial data on a truncated line.
    Line(ComplexSamples),
}

impl ProbeData {
    pub fn scaled(&self, c: Complex64) -> Self {
        match self {
            ProbeData::Time(h) => ProbeData::Time(h.map(|z| z * c)),
            ProbeData::Line(p) => {
                ProbeData::Line(ComplexSamples::new(*p.grid(), p.values().iter().map(|z| z * c).collect()).expect("len"))
            }
        }
    }
}

/// Discretisation chosen from the bandwidth.
#[derive(Debug, Clone, Copy)]
struct Layout {
    nt: usize,
    /// Wave number resolved in space.
    xi_max: f64,
}

fn layout(probe: &EstimateProbe) -> Layout {
    let m = probe.bandwidth as f64;
    let t = probe.t_final;
    let omega_max = if probe.time_data() {
        match probe.ensemble {
            EnsembleKind::Dense => 2.0 * PI * m / t,
            EnsembleKind::Lattice => PI * PI * (m * m + 1.0),
        }
    } else {
        (m + 3.0).powi(2)
    };
    // 16 samples per period of the fastest oscillation.
    let nt = ((16.0 * omega_max * t / (2.0 * PI)).ceil() as usize).max(256) + 1;
    Layout { nt, xi_max: omega_max.sqrt() }
}

fn complex_normal(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Vanishes with all derivatives at both ends of `[0, t]`.
fn envelope(s: f64, t: f64) -> f64 {
    let r = t / 8.0;
    smooth_step(s / r) * smooth_step((t - s) / r)
}

const LINE_WIDTH: f64 = 2.0;

fn line_for(probe: &EstimateProbe, lay: &Layout) -> Result<TruncatedLine> {
    let x_max = 4.0 * LINE_WIDTH + 2.5 * lay.xi_max * probe.t_final;
    let n = ((2.0 * x_max * 2.0 * lay.xi_max / PI).ceil() as usize).next_power_of_two().max(64);
    TruncatedLine::new(x_max, n)
}

/// The seeded ensemble of a probe; member `i` uses ChaCha stream `i`.
pub fn generate_ensemble(probe: &EstimateProbe) -> Result<Vec<ProbeData>> {
    probe.validate()?;
    let lay = layout(probe);
    let m = probe.bandwidth as i64;
    let t = probe.t_final;
    let line = if probe.time_data() { None } else { Some(line_for(probe, &lay)?) };
    (0..probe.ensemble_size)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(probe.seed);
            rng.set_stream(i as u64);
            if let Some(line) = &line {
                let coeffs: Vec<(f64, Complex64)> = (-m..=m).map(|k| (k as f64, complex_normal(&mut rng))).collect();
                let phi = ComplexSamples::from_fn(*line.grid(), |x| {
                    let s: Complex64 = coeffs.iter().map(|&(k, g)| g * Complex64::from_polar(1.0, k * x)).sum();
                    s * (-0.5 * (x / LINE_WIDTH).powi(2)).exp()
                });
                return Ok(ProbeData::Line(phi));
            }
            let freqs: Vec<(f64, Complex64)> = match probe.ensemble {
                EnsembleKind::Dense => {
                    (-m..=m).map(|k| (2.0 * PI * k as f64 / t, complex_normal(&mut rng))).collect()
                }
                EnsembleKind::Lattice => (1..=m)
                    .map(|n| (-PI * PI * ((n * n + 1) as f64), complex_normal(&mut rng)))
                    .collect(),
            };
            let h = BoundaryTrace::from_fn(lay.nt, t, |s| {
                let v: Complex64 = freqs.iter().map(|&(w, g)| g * Complex64::from_polar(1.0, w * s)).sum();
                v * envelope(s, t)
            })?;
            Ok(ProbeData::Time(h))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbeSample {
    pub id: usize,
    pub rhs: f64,
    pub lhs: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeReport {
    pub samples: Vec<ProbeSample>,
    pub max_ratio: f64,
    pub median_ratio: f64,
    /// Largest near-truncation fraction seen, when any was flagged.
    pub warnings: Vec<Warning>,
}

fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len();
    if n % 2 == 1 {
        s[n / 2]
    } else {
        0.5 * (s[n / 2 - 1] + s[n / 2])
    }
}

/// Columns sampled for `sup_x` norms.
const MAX_SUP_COLUMNS: usize = 256;

fn sup_x_time_norm(u: &SpaceTimeField, cols: std::ops::Range<usize>, s: f64) -> Result<f64> {
    let dt = u.time().spacing();
    let stride = cols.len().div_ceil(MAX_SUP_COLUMNS).max(1);
    let cols: Vec<usize> = cols.step_by(stride).collect();
    let norms: Result<Vec<f64>> =
        cols.par_iter().map(|&j| sobolev_norm_samples(&u.column(j), dt, s, DEFAULT_PADDING)).collect();
    Ok(norms?.into_iter().fold(0.0, f64::max))
}

fn field_norm(u: &SpaceTimeField, d: NormDescriptor, inner_cols: std::ops::Range<usize>) -> Result<f64> {
    match d {
        NormDescriptor::L2HalfStrip => mixed_norm(u, 2.0, 2.0),
        NormDescriptor::Omega(r) => mixed_norm(u, r, r),
        NormDescriptor::SupTL2 => mixed_norm(u, f64::INFINITY, 2.0),
        NormDescriptor::Mixed { q, r } => mixed_norm(u, q, r),
        NormDescriptor::SupXHt(s) => sup_x_time_norm(u, inner_cols, s),
        NormDescriptor::HAlpha | NormDescriptor::L2Line => {
            Err(Error::Registry(format!("'{d}' is a data norm, not a solution norm")))
        }
    }
}

fn x_derivative(u: &SpaceTimeField, order: usize) -> Result<SpaceTimeField> {
    let dx = u.space().spacing();
    let rows = u
        .rows()
        .map(|r| (0..order).fold(r.to_vec(), |v, _| derivative4(&v, dx)))
        .collect();
    SpaceTimeField::from_snapshots(*u.space(), *u.time(), rows)
}

struct Evaluator {
    probe: EstimateProbe,
    interval_grid: Grid1D,
    half: Option<HalfLineWorkspace>,
}

impl Evaluator {
    fn new(probe: &EstimateProbe, lay: &Layout, times: &Grid1D) -> Result<Self> {
        // Interval modes up to a few times the resonant one.
        let nx = ((4.0 * lay.xi_max / PI).ceil() as usize).next_power_of_two().max(128) + 1;
        let half = if probe.operator == ProbeOperator::Wb {
            let x_end = 2.0 + 2.5 * lay.xi_max * probe.t_final;
            let dx = PI / (3.0 * lay.xi_max);
            let n = (x_end / dx).ceil() as usize;
            let grid = Grid1D::new(0.0, dx * (n - 1) as f64, n)?;
            Some(HalfLineWorkspace::new(&grid, times, HalfLineOptions::default())?)
        } else {
            None
        };
        Ok(Self { probe: probe.clone(), interval_grid: Grid1D::unit(nx)?, half })
    }

    fn sample(&self, data: &ProbeData) -> Result<(f64, f64, Vec<Warning>)> {
        let p = &self.probe;
        match (data, p.operator) {
            (ProbeData::Time(h), ProbeOperator::Wh | ProbeOperator::WhDerivative | ProbeOperator::Wb) => {
                let rhs = sobolev_norm_samples(h.samples(), h.dt(), p.alpha, DEFAULT_PADDING)?;
                let (u, warnings) = match &self.half {
                    Some(ws) => (ws.boundary_field(h.samples()), Vec::new()),
                    None => {
                        let a = wh_field(h, &self.interval_grid, false, WhOptions::default())?;
                        (a.value, a.warnings)
                    }
                };
                let u = match p.operator {
                    ProbeOperator::WhDerivative => x_derivative(&u, derivative_order(p.alpha).expect("registry"))?,
                    _ => u,
                };
                let nx = u.nx();
                Ok((rhs, field_norm(&u, p.lhs_norm, 0..nx)?, warnings))
            }
            (ProbeData::Line(phi), ProbeOperator::FreeLineTrace | ProbeOperator::FreeLineStrichartz) => {
                let rhs = lebesgue(phi.values(), phi.grid().spacing(), 2.0);
                let times = Grid1D::new(0.0, p.t_final, layout(p).nt)?;
                let a = free_field_line(phi, &times);
                let n = phi.len();
                Ok((rhs, field_norm(&a.value, p.lhs_norm, n / 4..3 * n / 4)?, a.warnings))
            }
            _ => Err(Error::InvalidEnsemble(format!("data kind does not match operator {}", p.operator))),
        }
    }
}

/// Ratios over a given ensemble.
pub fn probe_ratio_with(probe: &EstimateProbe, ensemble: &[ProbeData]) -> Result<ProbeReport> {
    probe.validate()?;
    if ensemble.is_empty() {
        return Err(Error::InvalidEnsemble("empty ensemble".into()));
    }
    let lay = layout(probe);
    let times = match &ensemble[0] {
        ProbeData::Time(h) => h.time_grid(),
        ProbeData::Line(_) => Grid1D::new(0.0, probe.t_final, lay.nt)?,
    };
    let ev = Evaluator::new(probe, &lay, &times)?;
    let results: Vec<Result<(f64, f64, Vec<Warning>)>> = ensemble.par_iter().map(|d| ev.sample(d)).collect();
    let mut samples = Vec::with_capacity(ensemble.len());
    let mut worst: Option<Warning> = None;
    for (id, r) in results.into_iter().enumerate() {
        let (rhs, lhs, warnings) = r?;
        if !(rhs > 0.0) {
            return Err(Error::InvalidEnsemble(format!("member {id} has zero data norm; the ratio is undefined")));
        }
        for w in warnings {
            if let Warning::NearTruncation { fraction } = w {
                let prev = match worst {
                    Some(Warning::NearTruncation { fraction: f }) => f,
                    _ => 0.0,
                };
                if fraction > prev {
                    worst = Some(w);
                }
            }
        }
        samples.push(ProbeSample { id, rhs, lhs, ratio: lhs / rhs });
    }
    let ratios: Vec<f64> = samples.iter().map(|s| s.ratio).collect();
    Ok(ProbeReport {
        max_ratio: ratios.iter().copied().fold(0.0, f64::max),
        median_ratio: median(&ratios),
        samples,
        warnings: worst.into_iter().collect(),
    })
}

/// Draws the probe's ensemble and measures the ratio distribution.
pub fn probe_ratio(probe: &EstimateProbe) -> Result<ProbeReport> {
    let ens = generate_ensemble(probe)?;
    probe_ratio_with(probe, &ens)
}
