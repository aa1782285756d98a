//! Thin command-line front end over the sweep engine.
//!
//! Exit codes: 0 on success, 1 on validation failure (or a computation
//! error), 2 on configuration errors (bad files, unknown presets or labels,
//! malformed configs).

use clap::{Parser, Subcommand};
use ris_uowc_secrecy::error::Error;
use ris_uowc_secrecy::mc::estimate_metrics;
use ris_uowc_secrecy::sweep::{
    figure_preset, run_sweep, validate_sweep, SweepConfig, ToleranceProfile, PRESET_NAMES,
};
use ris_uowc_secrecy::water::{WaterTable, WATER_TABLE_ENV};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "uowc-secrecy",
    about = "Secrecy-metric sweeps for a RIS-aided dual-hop RF / underwater-optical link",
    long_about = format!(
        "Secrecy-metric sweeps for a RIS-aided dual-hop RF / underwater-optical link.\n\n\
         Turbulence parameters resolve against the bundled water-condition table; set the \
         {WATER_TABLE_ENV} environment variable to override it with a transcribed table."
    )
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a sweep config and write its CSV to the configured output path.
    Sweep {
        /// TOML sweep configuration.
        config: PathBuf,
    },
    /// Emit a canned figure-reproduction config (fig2..fig13) as TOML.
    Preset {
        /// Preset name, fig2..fig13.
        name: String,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cross-validate closed form vs quadrature vs Monte-Carlo on a config.
    Validate {
        /// TOML sweep configuration.
        config: PathBuf,
        /// Tolerance profile: default | strict | loose.
        #[arg(long, default_value = "default")]
        profile: String,
    },
    /// Run the Monte-Carlo oracle once at the config's template point.
    Mc {
        /// TOML sweep configuration (only the scenario template is used).
        config: PathBuf,
    },
}

const EXIT_VALIDATION: u8 = 1;
const EXIT_CONFIG: u8 = 2;

fn load_config(path: &PathBuf) -> Result<SweepConfig, u8> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        EXIT_CONFIG
    })?;
    toml::from_str(&text).map_err(|e| {
        eprintln!("error: cannot parse {}: {e}", path.display());
        EXIT_CONFIG
    })
}

fn load_table() -> Result<WaterTable, u8> {
    WaterTable::load_default().map_err(|e| {
        eprintln!("error: water-condition table: {e}");
        EXIT_CONFIG
    })
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Config { .. }
        | Error::UnknownPreset(_)
        | Error::UnknownWaterCondition(_)
        | Error::TableParse(_)
        | Error::Io(_) => EXIT_CONFIG,
        _ => EXIT_VALIDATION,
    }
}

fn warn_placeholder(placeholder: bool) {
    if placeholder {
        eprintln!(
            "warning: turbulence parameters are placeholder fits, not the published laboratory \
             table; numbers are for plumbing checks only (override with {WATER_TABLE_ENV})"
        );
    }
}

fn run() -> Result<(), u8> {
    let cli = Cli::parse();
    match cli.command {
        Command::Sweep { config } => {
            let cfg = load_config(&config)?;
            let table = load_table()?;
            let result = run_sweep(&cfg, &table).map_err(|e| {
                eprintln!("error: {e}");
                exit_code_for(&e)
            })?;
            warn_placeholder(result.placeholder_water);
            match &cfg.output {
                Some(path) => {
                    std::fs::write(path, result.to_csv()).map_err(|e| {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        EXIT_VALIDATION
                    })?;
                    eprintln!("wrote {} rows to {}", result.rows.len(), path.display());
                }
                None => print!("{}", result.to_csv()),
            }
            Ok(())
        }
        Command::Preset { name, out } => {
            let cfg = figure_preset(&name).map_err(|e| {
                eprintln!("error: {e} (known presets: {})", PRESET_NAMES.join(", "));
                EXIT_CONFIG
            })?;
            let text = toml::to_string_pretty(&cfg).map_err(|e| {
                eprintln!("error: cannot serialize preset: {e}");
                EXIT_VALIDATION
            })?;
            match out {
                Some(path) => {
                    std::fs::write(&path, text).map_err(|e| {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        EXIT_VALIDATION
                    })?;
                    eprintln!("wrote preset {name} to {}", path.display());
                }
                None => print!("{text}"),
            }
            Ok(())
        }
        Command::Validate { config, profile } => {
            let cfg = load_config(&config)?;
            let table = load_table()?;
            let profile: ToleranceProfile = profile.parse().map_err(|e| {
                eprintln!("error: {e}");
                EXIT_CONFIG
            })?;
            let report = validate_sweep(&cfg, &table, profile).map_err(|e| {
                eprintln!("error: {e}");
                exit_code_for(&e)
            })?;
            warn_placeholder(report.placeholder_water);
            print!("{}", report.to_csv());
            if report.passed() {
                eprintln!("validation passed ({} rows)", report.rows.len());
                Ok(())
            } else {
                let failed = report.rows.iter().filter(|r| r.status.starts_with("fail")).count();
                eprintln!("validation FAILED ({failed} of {} rows)", report.rows.len());
                Err(EXIT_VALIDATION)
            }
        }
        Command::Mc { config } => {
            let cfg = load_config(&config)?;
            let table = load_table()?;
            cfg.validate(&table).map_err(|e| {
                eprintln!("error: {e}");
                exit_code_for(&e)
            })?;
            warn_placeholder(!table.authoritative);
            let resolved = cfg.scenario.resolve(&table).map_err(|e| {
                eprintln!("error: {e}");
                EXIT_CONFIG
            })?;
            let scenario = ris_uowc_secrecy::mc::ScenarioConfig {
                relay_link: resolved.relay,
                eve_link: resolved.eve,
                uowc_link: resolved.uowc,
                scenario: resolved.scenario,
                epsilon0_bits: resolved.epsilon0_bits,
                samples: cfg.mc_samples,
                seed: cfg.seed,
                sampling: cfg.mc_sampling,
            };
            let m = estimate_metrics(&scenario).map_err(|e| {
                eprintln!("error: {e}");
                exit_code_for(&e)
            })?;
            println!("metric,value,stderr,samples");
            for (name, est) in [
                ("asc_nats", &m.asc_nats),
                ("sop_exact", &m.sop_exact),
                ("sop_lower", &m.sop_lower),
                ("spsc", &m.spsc),
            ] {
                println!(
                    "{name},{:.6e},{:.3e},{}",
                    est.value,
                    est.std_error.unwrap_or(f64::NAN),
                    cfg.mc_samples
                );
            }
            println!("harmonic_sop_exact,{:.6e},,", m.harmonic_sop_exact);
            println!("harmonic_sop_lower,{:.6e},,", m.harmonic_sop_lower);
            println!("min_vs_harmonic_gap,{:.6e},,", m.min_vs_harmonic_gap);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(code) => ExitCode::from(code),
    }
}
