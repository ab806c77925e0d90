use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use lambda_wqed::{presets, run_scenario, ConfigError, ScenarioConfig};

#[derive(Debug, Parser)]
#[command(name = "lambda-wqed", version, about = "Transmission, band widths and two-photon spectra of Λ-atom waveguide lattices")]
struct Args {
    /// Built-in scenario to run (see --list-presets).
    #[arg(long)]
    preset: Option<String>,
    /// TOML scenario file; its keys override the preset's.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory [default: out/<preset> or out].
    #[arg(long)]
    out: Option<PathBuf>,
    /// Points on the detuning grid.
    #[arg(long)]
    grid_points: Option<usize>,
    /// Worker threads for the sweeps.
    #[arg(long)]
    threads: Option<usize>,
    /// Also write SVG line charts next to each CSV.
    #[arg(long)]
    plots: bool,
    /// Also write the single-excitation Hamiltonian as h1.csv.
    #[arg(long)]
    dump_h1: bool,
    /// Print the built-in scenarios and exit.
    #[arg(long)]
    list_presets: bool,
}

fn resolve(args: &Args) -> Result<ScenarioConfig, ConfigError> {
    let text = match &args.config {
        Some(path) => Some(
            std::fs::read_to_string(path).map_err(|e| ConfigError::new("--config", format!("{}: {e}", path.display())))?,
        ),
        None => None,
    };
    if text.is_none() && args.preset.is_none() {
        return Err(ConfigError::new("", "give --preset or --config (see --list-presets)"));
    }
    let mut config = ScenarioConfig::resolve(text.as_deref(), args.preset.as_deref())?;
    if let Some(n) = args.grid_points {
        config.grid.points = n;
    }
    if let Some(n) = args.threads {
        config.threads = Some(n);
    }
    if let Some(out) = &args.out {
        config.out = Some(out.clone());
    }
    config.plots |= args.plots;
    config.dump_h1 |= args.dump_h1;
    Ok(config)
}

fn main() -> ExitCode {
    let args = Args::parse();
    if args.list_presets {
        for p in presets::all() {
            println!("{:<8} {}", p.name, p.description);
        }
        return ExitCode::SUCCESS;
    }
    let config = match resolve(&args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(2);
        }
    };
    let out = config.out.clone().unwrap_or_else(|| match &config.preset {
        Some(name) => PathBuf::from("out").join(name),
        None => PathBuf::from("out"),
    });
    match run_scenario(&config, &out) {
        Ok(report) => {
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            println!("wrote {} files to {}", report.files.len(), out.display());
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
