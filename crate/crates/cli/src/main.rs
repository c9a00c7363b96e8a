use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use nlsbvp_cli::config::Format;
use nlsbvp_cli::{parse_config, run, CliError, RunConfig};

/// Solvers and verification runs for Schrodinger boundary-value problems.
#[derive(Debug, Parser)]
#[command(name = "nlsbvp", version)]
struct Args {
    /// TOML run configuration (a previous run's manifest.toml also works).
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `output_dir`.
    #[arg(long)]
    output: Option<String>,
    /// Seed; overrides `seed` and the probe seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Output format; overrides `formats`.
    #[arg(long)]
    format: Option<Format>,
}

fn load(args: &Args) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| CliError::Io(format!("{}: {e}", args.config.display())))?;
    let mut cfg = parse_config(&text)?;
    if let Some(o) = &args.output {
        cfg.output_dir = o.clone();
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
        if let Some(p) = cfg.probe.as_mut() {
            p.seed = s;
        }
    }
    if let Some(f) = args.format {
        cfg.formats = vec![f];
    }
    Ok(cfg)
}

/// Records a failure that happened before a configuration was available.
fn early_manifest(dir: &str, e: &CliError) {
    let mut m = toml::Table::new();
    m.insert("status".into(), "error".into());
    m.insert("exit_code".into(), (e.exit_code() as i64).into());
    m.insert("error".into(), e.to_string().into());
    let mut w = toml::Table::new();
    w.insert("manifest".into(), toml::Value::Table(m));
    if std::fs::create_dir_all(dir).is_ok() {
        let _ = std::fs::write(Path::new(dir).join("manifest.toml"), toml::to_string(&w).unwrap_or_default());
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    if let Some(n) = args.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot start {n} threads: {e}");
            return ExitCode::from(2);
        }
    }
    let cfg = match load(&args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            if let Some(dir) = &args.output {
                early_manifest(dir, &e);
            }
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let base = args.config.parent().map(Path::to_path_buf).unwrap_or_default();
    ExitCode::from(run(&cfg, &base) as u8)
}
