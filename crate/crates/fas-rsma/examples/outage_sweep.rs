//! Outage probability versus average transmit SNR.
//!
//! Sweeps the bundled standalone-user scenario with reduced Monte-Carlo
//! effort, printing analytic, asymptotic, and MC estimates per point. The
//! analytic FAS-RSMA column crosses 1e-6 between 56 and 60 dB.
//!
//! ```bash
//! cargo run --release --example outage_sweep
//! ```

use std::path::Path;

use fas_rsma::scenario::load_scenario;
use fas_rsma::sim::{run_sweep, McSettings, Scheme, SweepSettings};

fn main() -> fas_rsma::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios/single_user_u2.scenario");
    let scenario = load_scenario(&path)?;
    let cfg = scenario.system_config()?;

    let settings = SweepSettings {
        mvt: scenario.mvt_settings()?,
        mc: McSettings { samples: 200_000, ..scenario.mc_settings()? },
    };
    let grid: Vec<f64> = (10..=60).step_by(5).map(f64::from).collect();
    let rows = run_sweep(&cfg, &[Scheme::FasRsma, Scheme::TasRsma], &grid, &settings)?;

    println!(
        "{:<10} {:>6} {:>14} {:>14} {:>14} {:>8}",
        "scheme", "snr dB", "analytic", "asymptotic", "mc", "flags"
    );
    for r in rows {
        println!(
            "{:<10} {:>6} {:>14} {:>14} {:>14} {:>8}",
            r.scheme.as_str(),
            r.snr_db,
            r.analytic.map(|v| format!("{v:.4e}")).unwrap_or_default(),
            r.asymptotic.map(|v| format!("{v:.4e}")).unwrap_or_default(),
            r.mc_estimate.map(|v| format!("{v:.4e}")).unwrap_or_default(),
            r.flags.join("|"),
        );
    }
    Ok(())
}
