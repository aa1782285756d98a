//! Run a built-in figure preset as a small sweep and print the CSV.
//!
//! Presets transcribe the validation-suite figure configurations; this
//! example trims the grid and sample count so it finishes in seconds. The
//! bundled water table holds placeholder turbulence fits, so the
//! `allow_placeholder_water` opt-in is set explicitly here.

use ris_uowc_secrecy::sweep::{figure_preset, run_sweep, PRESET_NAMES};
use ris_uowc_secrecy::water::WaterTable;

fn main() -> ris_uowc_secrecy::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "fig8".to_string());
    let mut cfg = figure_preset(&name)?;
    cfg.axis.points = 5;
    cfg.mc_samples = 50_000;
    cfg.allow_placeholder_water = true;

    let table = WaterTable::load_default()?;
    let result = run_sweep(&cfg, &table)?;
    if result.placeholder_water {
        eprintln!("note: placeholder turbulence fits; curves are shape-only");
    }
    print!("{}", result.to_csv());
    eprintln!("\navailable presets: {}", PRESET_NAMES.join(", "));
    Ok(())
}
