//! Command execution and artifact writing.

use std::path::Path;

use nlsbvp::estimates::{counterexample_norm_series, probe_ratio};
use nlsbvp::halfline::{ExtensionKind, TruncatedLine};
use nlsbvp::interval::BoundaryPairSpec;
use nlsbvp::invariants::{energy_balance_residual, mass_balance_residual, multiplier_identity_residual};
use nlsbvp::nonlinear::{continue_globally, picard_solve, BoundaryData, Domain, IbvpSpec, SolutionRecord, SolverConfig};
use nlsbvp::spectral::{sobolev_norm_samples, sobolev_norm_time, ComplexSamples, Grid1D, SobolevIndex, DEFAULT_PADDING};
use nlsbvp::Complex64;
use toml::Value;

use crate::config::{emit, Command, Extension, Format, ProblemSection, RunConfig};
use crate::data::{sample_space, sample_time};
use crate::error::CliError;
use crate::output::{json_document, write_file, Cell, Table};

/// Tables and summary values produced by one command.
#[derive(Debug, Clone, Default)]
pub struct RunOutcome {
    pub tables: Vec<Table>,
    pub summary: toml::Table,
    pub warnings: Vec<String>,
}

impl RunOutcome {
    fn note(&mut self, key: &str, v: impl Into<Value>) {
        self.summary.insert(key.into(), v.into());
    }
}

/// The nonlinear problem and solver settings described by `[problem]`.
pub fn build_problem(p: &ProblemSection, cfg: &RunConfig, base: &Path) -> Result<(IbvpSpec, SolverConfig), CliError> {
    let nx = p.nx.expect("normalised config");
    let (phi, boundary) = match p.domain {
        Domain::Interval => {
            let phi = sample_space(&p.phi, Grid1D::unit(nx)?, base)?;
            let bc = BoundaryPairSpec::new(
                sample_time(&p.h1, p.nt, p.t_final, base)?,
                sample_time(&p.h2, p.nt, p.t_final, base)?,
            )?;
            (phi, BoundaryData::Interval(bc))
        }
        Domain::HalfLine => {
            let line = TruncatedLine::new(p.x_max.expect("normalised config"), 2 * nx)?;
            let phi = sample_space(&p.phi, line.half_grid(), base)?;
            (phi, BoundaryData::HalfLine(sample_time(&p.h1, p.nt, p.t_final, base)?))
        }
    };
    let spec = IbvpSpec::new(SobolevIndex::new(p.s)?, p.p, p.lambda, phi, boundary)?;
    let mut solver = SolverConfig {
        picard_tol: cfg.solver.picard_tol,
        picard_max_iter: cfg.solver.picard_max_iter,
        window_t: cfg.solver.window_t,
        window_floor: cfg.solver.window_floor,
        ..SolverConfig::default()
    };
    solver.halfline.enforce_compatibility = cfg.solver.enforce_compatibility;
    solver.interval.enforce_compatibility = cfg.solver.enforce_compatibility;
    solver.halfline.extension = match p.extension {
        Extension::Reflection => ExtensionKind::Reflection,
        Extension::Odd => ExtensionKind::Odd,
    };
    Ok((spec, solver))
}

fn solve(cfg: &RunConfig, base: &Path) -> Result<(IbvpSpec, SolutionRecord), CliError> {
    let p = cfg.problem.as_ref().expect("validated");
    let (spec, solver) = build_problem(p, cfg, base)?;
    let rec = if cfg.solver.global { continue_globally(&spec, &solver)? } else { picard_solve(&spec, &solver)? };
    Ok((spec, rec))
}

fn solve_tables(rec: &SolutionRecord, out: &mut RunOutcome) {
    let u = &rec.field;
    let mut field = Table::new("field", &["x", "t", "re_u", "im_u"]);
    for k in 0..u.nt() {
        let t = u.time().node(k);
        for (j, z) in u.snapshot(k).iter().enumerate() {
            field.push(vec![u.space().node(j).into(), t.into(), z.re.into(), z.im.into()]);
        }
    }
    let d = &rec.diagnostics;
    let mut diag = Table::new("diagnostics", &["t", "l2", "h1", "hs"]);
    for i in 0..d.times.len() {
        diag.push(vec![d.times[i].into(), d.l2[i].into(), d.h1[i].into(), d.hs[i].into()]);
    }
    let mut picard = Table::new("picard", &["window", "t_start", "iteration", "residual"]);
    let mut it = rec.residual_history.iter();
    for (w, (&n, &t0)) in rec.iterations_per_window.iter().zip(&rec.window_starts).enumerate() {
        for i in 0..n {
            let r = *it.next().expect("one residual per iteration");
            picard.push(vec![w.into(), t0.into(), (i + 1).into(), r.into()]);
        }
    }
    out.tables.extend([field, diag, picard]);
    out.note("windows", rec.iterations_per_window.len() as i64);
    out.note("iterations", rec.iterations_per_window.iter().sum::<usize>() as i64);
    out.note("max_abs_u", u.max_abs());
    out.warnings.extend(rec.warnings.iter().map(|w| w.to_string()));
}

fn verify(cfg: &RunConfig, base: &Path, out: &mut RunOutcome) -> Result<(), CliError> {
    let (spec, rec) = solve(cfg, base)?;
    let u = &rec.field;
    let mass = mass_balance_residual(u, &spec.boundary, spec.p, spec.lambda)?;
    let energy = energy_balance_residual(u, &spec.boundary, spec.p, spec.lambda)?;
    let multiplier = match spec.domain() {
        Domain::Interval => {
            let eta = ComplexSamples::from_fn(*u.space(), |x| Complex64::new(x - 0.5, 0.0));
            Some(multiplier_identity_residual(u, &eta, spec.p, spec.lambda)?)
        }
        Domain::HalfLine => None,
    };
    let mut cols = vec![
        "t",
        "mass",
        "mass_flux_integral",
        "mass_residual",
        "energy",
        "energy_flux_integral",
        "energy_residual",
    ];
    if multiplier.is_some() {
        cols.push("multiplier_residual");
    }
    let mut t = Table::new("identities", &cols);
    for k in 0..u.nt() {
        let mut row: Vec<Cell> = vec![
            u.time().node(k).into(),
            mass.i_series[k].into(),
            mass.flux_integral[k].into(),
            mass.residual[k].into(),
            energy.ii_series[k].into(),
            energy.flux_integral[k].into(),
            energy.residual[k].into(),
        ];
        if let Some(m) = &multiplier {
            row.push(m.residual[k].into());
        }
        t.push(row);
    }
    let peak = |v: &[f64]| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    out.note("mass_residual_rel", mass.max_abs_residual() / peak(&mass.i_series).max(f64::MIN_POSITIVE));
    out.note("energy_residual_rel", energy.max_abs_residual() / (1.0 + peak(&energy.ii_series)));
    if let Some(m) = &multiplier {
        out.note("multiplier_residual_rel", peak(&m.residual) / m.scale.max(f64::MIN_POSITIVE));
    }
    out.note("iterations", rec.iterations_per_window.iter().sum::<usize>() as i64);
    out.warnings.extend(rec.warnings.iter().map(|w| w.to_string()));
    out.tables.push(t);
    Ok(())
}

fn norms(cfg: &RunConfig, base: &Path, out: &mut RunOutcome) -> Result<(), CliError> {
    let p = cfg.problem.as_ref().expect("validated");
    let (spec, _) = build_problem(p, cfg, base)?;
    let mut t = Table::new("norms", &["datum", "s", "value"]);
    let s_values = &cfg.norms.as_ref().expect("validated").s_values;
    let phi = &spec.phi;
    let traces = match &spec.boundary {
        BoundaryData::Interval(bc) => vec![("h1", bc.h1().clone()), ("h2", bc.h2().clone())],
        BoundaryData::HalfLine(h) => vec![("h1", h.clone())],
    };
    for &s in s_values {
        let v = sobolev_norm_samples(phi.values(), phi.grid().spacing(), s, DEFAULT_PADDING)?;
        t.push(vec!["phi".into(), s.into(), v.into()]);
    }
    // Boundary data are natural at index (2s + 1)/4.
    let mut trace_s = s_values.clone();
    trace_s.push((2.0 * p.s + 1.0) / 4.0);
    for (name, h) in &traces {
        for &s in &trace_s {
            t.push(vec![(*name).into(), s.into(), sobolev_norm_time(h, s)?.into()]);
        }
    }
    out.note("trace_index", (2.0 * p.s + 1.0) / 4.0);
    out.tables.push(t);
    Ok(())
}

fn probe(cfg: &RunConfig, out: &mut RunOutcome) -> Result<(), CliError> {
    let probe = cfg.probe.as_ref().expect("validated");
    let report = probe_ratio(probe)?;
    let mut t = Table::new("probe", &["sample_id", "rhs", "lhs", "ratio"]);
    for s in &report.samples {
        t.push(vec![s.id.into(), s.rhs.into(), s.lhs.into(), s.ratio.into()]);
    }
    out.note("max_ratio", report.max_ratio);
    out.note("median_ratio", report.median_ratio);
    out.note("max_over_median", report.max_ratio / report.median_ratio);
    out.warnings.extend(report.warnings.iter().map(|w| w.to_string()));
    out.tables.push(t);
    Ok(())
}

fn counterexample(cfg: &RunConfig, out: &mut RunOutcome) -> Result<(), CliError> {
    let spec = cfg.counterexample.as_ref().expect("validated");
    let rows = counterexample_norm_series(spec)?;
    let mut t = Table::new("counterexample", &["k", "R_k", "lower_bound_k", "u_norm_sq", "h_norm_sq", "tail_bound"]);
    for r in &rows {
        t.push(vec![r.k.into(), r.ratio.into(), r.lower_bound.into(), r.u_norm_sq.into(), r.h_norm_sq.into(), r.tail_bound.into()]);
    }
    out.note("increasing", rows.windows(2).all(|w| w[1].ratio > w[0].ratio));
    if let (Some(a), Some(b)) = (rows.first(), rows.last()) {
        out.note("growth", b.ratio / a.ratio);
    }
    out.tables.push(t);
    Ok(())
}

/// Runs the configured command without touching the disk (except for data files).
pub fn execute(cfg: &RunConfig, base: &Path) -> Result<RunOutcome, CliError> {
    let mut out = RunOutcome::default();
    match cfg.command {
        Command::Solve => {
            let (_, rec) = solve(cfg, base)?;
            solve_tables(&rec, &mut out);
        }
        Command::VerifyIdentities => verify(cfg, base, &mut out)?,
        Command::Norms => norms(cfg, base, &mut out)?,
        Command::Probe => probe(cfg, &mut out)?,
        Command::Counterexample => counterexample(cfg, &mut out)?,
    }
    Ok(out)
}

fn manifest(cfg: &RunConfig, result: &Result<RunOutcome, CliError>, outputs: &[String]) -> toml::Table {
    let mut m = toml::Table::new();
    m.insert("tool".into(), "nlsbvp".into());
    m.insert("cli_version".into(), env!("CARGO_PKG_VERSION").into());
    m.insert("core_version".into(), nlsbvp::VERSION.into());
    m.insert("command".into(), cfg.command.to_string().into());
    m.insert("seed".into(), Value::Integer(cfg.seed as i64));
    match result {
        Ok(o) => {
            m.insert("status".into(), "ok".into());
            m.insert("exit_code".into(), 0.into());
            m.insert("warnings".into(), Value::Array(o.warnings.iter().map(|w| w.clone().into()).collect()));
            m.insert("summary".into(), Value::Table(o.summary.clone()));
        }
        Err(e) => {
            m.insert("status".into(), "error".into());
            m.insert("exit_code".into(), (e.exit_code() as i64).into());
            m.insert("error".into(), e.to_string().into());
        }
    }
    m.insert("outputs".into(), Value::Array(outputs.iter().map(|o| o.clone().into()).collect()));
    m
}

fn write_artifacts(cfg: &RunConfig, result: &Result<RunOutcome, CliError>) -> Result<(), CliError> {
    let dir = Path::new(&cfg.output_dir);
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let tables: &[Table] = result.as_ref().map(|o| o.tables.as_slice()).unwrap_or(&[]);
    let mut outputs = vec!["manifest.toml".to_string()];
    for f in &cfg.formats {
        match f {
            Format::Csv => outputs.extend(tables.iter().map(|t| format!("{}.csv", t.name))),
            Format::Json => outputs.push("results.json".into()),
        }
    }
    let m = manifest(cfg, result, &outputs);
    for f in &cfg.formats {
        match f {
            Format::Csv => {
                for t in tables {
                    write_file(dir, &format!("{}.csv", t.name), &t.to_csv())?;
                }
            }
            Format::Json => {
                let doc = json_document(tables, &m);
                let text = serde_json::to_string_pretty(&doc).map_err(|e| CliError::Io(e.to_string()))?;
                write_file(dir, "results.json", &(text + "\n"))?;
            }
        }
    }
    let mut wrapper = toml::Table::new();
    wrapper.insert("manifest".into(), Value::Table(m));
    let text = format!("{}\n{}", emit(cfg), toml::to_string(&wrapper).expect("manifest serialises"));
    write_file(dir, "manifest.toml", &text)
}

/// Executes `cfg`, writes every artifact and returns the process exit code.
pub fn run(cfg: &RunConfig, base: &Path) -> i32 {
    let result = execute(cfg, base);
    if let Err(e) = write_artifacts(cfg, &result) {
        eprintln!("error: {e}");
        return e.exit_code();
    }
    match result {
        Ok(_) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
