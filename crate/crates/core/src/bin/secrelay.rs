use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use secrelay::analytic::{scheme_report, Scheme};
use secrelay::cli::{
    emit_report, parse_config_with, parse_params, preset, run_sweep, Overrides, ReportFormat,
    SweepSpec, SweepVariable, THREADS_ENV,
};
use secrelay::decision::{find_switching_point, optimal_relay_power};
use secrelay::montecarlo::estimate;
use secrelay::params::from_decibel;
use secrelay::{Error, Result, SystemParams};

#[derive(Parser)]
#[command(name = "secrelay", version, about = "Secrecy outage analysis for large-array AF/DF relay links")]
struct Cli {
    /// Master seed for Monte Carlo runs (overrides the config file).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Monte Carlo trial count (overrides the config file).
    #[arg(long, global = true)]
    trials: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form report for both schemes at one operating point.
    Point(PointArgs),
    /// Run a parameter sweep and write a CSV or JSON table.
    Sweep {
        #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
        config: Option<PathBuf>,
        /// Built-in figure setup (fig2..fig7, fig3b).
        #[arg(long)]
        preset: Option<String>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "csv")]
        format: ReportFormat,
    },
    /// Relay power maximizing the secrecy outage capacity over the config's
    /// relay-power-db grid bounds.
    Optimize {
        #[arg(long)]
        config: PathBuf,
    },
    /// AF/DF switching points over the config's power grid bounds.
    Switch {
        #[arg(long)]
        config: PathBuf,
    },
    /// Print the config document(s) of a built-in preset.
    Preset { name: String },
}

#[derive(clap::Args)]
struct PointArgs {
    /// Read link parameters from a config file; flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    p_s_db: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    p_r_db: Option<f64>,
    #[arg(long)]
    alpha_sr: Option<f64>,
    #[arg(long)]
    alpha_rd: Option<f64>,
    #[arg(long)]
    alpha_re: Option<f64>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    n_r: Option<u32>,
    #[arg(long)]
    w_hz: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(Error::Io)
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json values serialize"));
}

fn point(args: &PointArgs, overrides: Overrides) -> Result<()> {
    let mut p = match &args.config {
        Some(path) => parse_params(&read(path)?)?,
        None => SystemParams::default(),
    };
    if let Some(db) = args.p_s_db {
        p.p_s = from_decibel(db)?;
    }
    if let Some(db) = args.p_r_db {
        p.p_r = from_decibel(db)?;
    }
    p.alpha_sr = args.alpha_sr.unwrap_or(p.alpha_sr);
    p.alpha_rd = args.alpha_rd.unwrap_or(p.alpha_rd);
    p.alpha_re = args.alpha_re.unwrap_or(p.alpha_re);
    p.rho = args.rho.unwrap_or(p.rho);
    p.n_r = args.n_r.unwrap_or(p.n_r);
    p.w_hz = args.w_hz.unwrap_or(p.w_hz);
    p.epsilon = args.epsilon.unwrap_or(p.epsilon);
    let p = p.validate()?;

    let reports: Vec<_> = Scheme::ALL.iter().map(|&s| scheme_report(&p, s)).collect();
    let mut out = json!({ "params": p, "reports": reports });
    if let Some(seed) = overrides.seed {
        let trials = overrides.trials.unwrap_or(secrelay::cli::presets::DEFAULT_TRIALS);
        let mut mc = Vec::new();
        for s in Scheme::ALL {
            let o = estimate(s, &p, trials, seed)?;
            mc.push(json!({ "scheme": s, "c_soc": o.c_soc, "p0": o.p0 }));
        }
        out["monte_carlo"] = json!(mc);
    }
    print_json(&out);
    Ok(())
}

/// `out.csv` + `eps0.01` -> `out-eps0.01.csv`
fn labelled_path(out: &Path, label: &str) -> PathBuf {
    if label.is_empty() {
        return out.to_path_buf();
    }
    let stem = out.file_stem().map(|s| s.to_string_lossy()).unwrap_or_default();
    let name = match out.extension() {
        Some(ext) => format!("{stem}-{label}.{}", ext.to_string_lossy()),
        None => format!("{stem}-{label}"),
    };
    out.with_file_name(name)
}

fn sweep_one(spec: &SweepSpec, out: &Path, format: ReportFormat) -> Result<()> {
    let rows = run_sweep(spec)?;
    let n = emit_report(&rows, format, out)?;
    eprintln!("wrote {} rows ({n} bytes) to {}", rows.len(), out.display());
    Ok(())
}

fn power_bracket(spec: &SweepSpec, allowed: &[SweepVariable]) -> Result<(f64, f64)> {
    if !allowed.contains(&spec.variable) {
        let names: Vec<_> = allowed.iter().map(|v| v.name()).collect();
        return Err(Error::Config {
            path: "variable".into(),
            message: format!("this command needs variable in {{{}}}, got {}", names.join(", "), spec.variable),
        });
    }
    let (lo, hi) = spec.bracket();
    if lo >= hi {
        return Err(Error::Config {
            path: "grid".into(),
            message: "grid must span an interval (at least two points)".into(),
        });
    }
    Ok((lo, hi))
}

fn run(cli: Cli) -> Result<()> {
    let overrides = Overrides {
        seed: cli.seed,
        trials: cli.trials,
    };
    match &cli.command {
        Command::Point(args) => point(args, overrides),
        Command::Sweep { config, preset: name, out, format } => {
            if let Some(path) = config {
                let spec = parse_config_with(&read(path)?, overrides)?;
                return sweep_one(&spec, out, *format);
            }
            let name = name.as_deref().expect("clap enforces --config or --preset");
            for run in preset(name)? {
                let spec = run.spec(overrides)?;
                sweep_one(&spec, &labelled_path(out, &run.label), *format)?;
            }
            Ok(())
        }
        Command::Optimize { config } => {
            let spec = parse_config_with(&read(config)?, overrides)?;
            let (lo, hi) = power_bracket(&spec, &[SweepVariable::RelayPowerDb])?;
            let mut out = Vec::new();
            for &s in &spec.schemes {
                out.push(optimal_relay_power(&spec.base, lo, hi, s)?);
            }
            print_json(&json!(out));
            Ok(())
        }
        Command::Switch { config } => {
            let spec = parse_config_with(&read(config)?, overrides)?;
            let allowed = [SweepVariable::SourcePowerDb, SweepVariable::RelayPowerDb];
            let (lo, hi) = power_bracket(&spec, &allowed)?;
            let axis = spec.variable.power_axis().expect("power variable checked above");
            let crossings = find_switching_point(&spec.base, axis, lo, hi)?;
            print_json(&json!({ "axis": axis, "lo_db": lo, "hi_db": hi, "crossings_db": crossings }));
            Ok(())
        }
        Command::Preset { name } => {
            for run in preset(name)? {
                if !run.label.is_empty() {
                    println!("// {}", run.label);
                }
                println!("{}", serde_json::to_string_pretty(&run.document).expect("json serializes"));
            }
            Ok(())
        }
    }
}

fn thread_pool() -> std::result::Result<rayon::ThreadPool, String> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| format!("{THREADS_ENV} must be a positive integer, got `{v}`"))?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = match thread_pool() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match pool.install(|| run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
