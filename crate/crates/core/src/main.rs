use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ncdirac::cli::{cmd_estimate, cmd_orbit, cmd_spectrum, cmd_verify, CommandOutput, Format, RunConfig};
use ncdirac::nc_model::Units;

/// Dirac particle in a uniform magnetic field on noncommutative phase space.
///
/// Settings are resolved as built-in defaults, then the `--config` file,
/// then command-line flags.
#[derive(Parser, Debug)]
#[command(name = "ncdirac", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Overrides,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Exact check of every commutator identity.
    Verify,
    /// Truncated-Fock spectrum next to the closed form.
    Spectrum,
    /// Classical-limit orbit samples and frequency report.
    Orbit,
    /// Frequency-shift estimates for an electron.
    Estimate,
}

#[derive(Args, Debug, Default)]
struct Overrides {
    /// JSON run configuration.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<String>,
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,
    #[arg(long, global = true, value_enum)]
    units: Option<UnitsArg>,
    #[arg(long, global = true)]
    n_max: Option<u64>,
    /// Fock truncation `trunc_N`.
    #[arg(long, global = true)]
    trunc: Option<usize>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    b0: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    mu: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    nu: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    nu0: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    eta: Option<f64>,
    /// Orbit quantum number.
    #[arg(long, global = true)]
    n: Option<u64>,
    /// Orbit length in periods `t_periods`.
    #[arg(long, global = true)]
    periods: Option<f64>,
    /// `samples_per_period`.
    #[arg(long, global = true)]
    samples: Option<usize>,
}

#[derive(clap::ValueEnum, Debug, Clone, Copy)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(clap::ValueEnum, Debug, Clone, Copy)]
enum UnitsArg {
    Si,
    Natural,
}

fn load_config(o: &Overrides) -> Result<RunConfig, String> {
    let mut cfg = match &o.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            RunConfig::from_json(&text).map_err(|e| format!("{}: {e}", path.display()))?
        }
        None => RunConfig::default(),
    };
    if let Some(v) = &o.out {
        cfg.output_path = Some(v.clone());
    }
    if let Some(v) = o.format {
        cfg.format = Some(match v {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        });
    }
    if let Some(v) = o.units {
        cfg.units = Some(match v {
            UnitsArg::Si => Units::Si,
            UnitsArg::Natural => Units::Natural,
        });
    }
    if let Some(v) = o.n_max {
        cfg.n_max = v;
    }
    if let Some(v) = o.trunc {
        cfg.trunc_n = v;
    }
    if let Some(v) = o.b0 {
        cfg.params.b0 = v;
    }
    if let Some(v) = o.mu {
        cfg.params.mu = v;
    }
    if let Some(v) = o.nu {
        cfg.params.nu = v;
    }
    if let Some(v) = o.nu0 {
        cfg.params.nu0 = v;
    }
    if let Some(v) = o.eta {
        cfg.eta = v;
    }
    if let Some(v) = o.n {
        cfg.n = v;
    }
    if let Some(v) = o.periods {
        cfg.t_periods = v;
    }
    if let Some(v) = o.samples {
        cfg.samples_per_period = v;
    }
    Ok(cfg)
}

/// Writes `bytes` to a sibling temp file, then renames it over `path`.
fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn emit(out: &CommandOutput, path: Option<&str>) -> std::io::Result<()> {
    match path {
        Some(p) => {
            if out.exit_code != 0 {
                return Ok(());
            }
            let report_path = out.report.as_ref().map(|r| (format!("{p}.report.json"), r));
            write_atomic(Path::new(p), &out.body)?;
            if let Some((rp, r)) = report_path {
                write_atomic(Path::new(&rp), r)?;
            }
        }
        None => {
            std::io::stdout().lock().write_all(&out.body)?;
            if let Some(r) = &out.report {
                std::io::stderr().lock().write_all(r)?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match load_config(&cli.opts) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("config error: {msg}");
            return ExitCode::from(2);
        }
    };
    let out = match cli.command {
        Command::Verify => cmd_verify(&cfg),
        Command::Spectrum => cmd_spectrum(&cfg),
        Command::Orbit => cmd_orbit(&cfg),
        Command::Estimate => cmd_estimate(&cfg),
    };
    if let Err(e) = emit(&out, cfg.output_path.as_deref()) {
        eprintln!("cannot write output: {e}");
        return ExitCode::from(2);
    }
    if let Some(msg) = &out.message {
        eprintln!("{msg}");
    }
    ExitCode::from(out.exit_code as u8)
}
