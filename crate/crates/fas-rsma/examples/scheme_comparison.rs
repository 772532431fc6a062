//! FAS/TAS x RSMA/NOMA benchmark comparison on the two-user downlink.
//!
//! Runs all four schemes at a few SNR points over the bundled two-user
//! scenario. User 2's RSMA rows report OP = 1 with a threshold_infeasible
//! flag: its private-stage SINR ceiling (share ratio 0.075/0.225 = 1/3)
//! sits below the 0 dB threshold, which `fas-rsma validate` also reports.
//!
//! ```bash
//! cargo run --release --example scheme_comparison
//! ```

use std::path::Path;

use fas_rsma::scenario::load_scenario;
use fas_rsma::sim::{run_sweep, McSettings, Scheme, SweepSettings};

fn main() -> fas_rsma::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios/two_user_downlink.scenario");
    let scenario = load_scenario(&path)?;
    let cfg = scenario.system_config()?;

    let settings = SweepSettings {
        mvt: scenario.mvt_settings()?,
        mc: McSettings { samples: 400_000, ..scenario.mc_settings()? },
    };
    let rows = run_sweep(&cfg, &Scheme::ALL, &[40.0, 46.0, 52.0], &settings)?;

    println!(
        "{:<10} {:>4} {:>6} {:>13} {:>13} {:>24}",
        "scheme", "user", "snr dB", "analytic", "mc", "flags"
    );
    for r in rows {
        println!(
            "{:<10} {:>4} {:>6} {:>13} {:>13} {:>24}",
            r.scheme.as_str(),
            r.user + 1,
            r.snr_db,
            r.analytic.map(|v| format!("{v:.4e}")).unwrap_or_default(),
            r.mc_estimate.map(|v| format!("{v:.4e}")).unwrap_or_default(),
            r.flags.join("|"),
        );
    }
    Ok(())
}
