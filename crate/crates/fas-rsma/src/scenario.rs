//! Scenario files, sweep orchestration, and deterministic tabular output.
//!
//! A scenario is a strict TOML document (unknown keys rejected) describing
//! the system geometry, per-user antenna grids and power shares, the
//! scheme list, the SNR grid, and the evaluator/Monte-Carlo controls.
//! Running a scenario writes one flat CSV table plus a JSON manifest; the
//! pair is byte-identical for identical (scenario, seed) inputs.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::channel::{build_correlation_matrix, PortGrid, DEFAULT_JITTER_LADDER};
use crate::error::{Error, Result};
use crate::numerics::MvtSettings;
use crate::rsma::{db_to_linear, effective_threshold, SystemConfig, UserConfig};
use crate::sim::{run_sweep, McSettings, OutageResult, Scheme, SweepSettings};

/// Output-table column order (fixed by contract).
pub const TABLE_COLUMNS: [&str; 11] = [
    "scheme",
    "user",
    "snr_db",
    "analytic_op",
    "analytic_stderr",
    "asymptotic_op",
    "mc_op",
    "mc_ci_lo",
    "mc_ci_hi",
    "samples",
    "flags",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub system: SystemSection,
    #[serde(rename = "user")]
    pub users: Vec<UserSection>,
    pub sweep: SweepSection,
    #[serde(default)]
    pub qmc: QmcSection,
    #[serde(default)]
    pub monte_carlo: McSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSection {
    pub bs_position: [f64; 3],
    /// Path-loss exponent (> 2).
    pub beta: f64,
    /// Common-stream power share.
    pub alpha_c: f64,
    /// Mean fading gain (path loss excluded).
    #[serde(default = "default_mean_gain")]
    pub mean_gain: f64,
}

fn default_mean_gain() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UserSection {
    pub position: [f64; 3],
    /// Ports per dimension.
    pub n: [u32; 2],
    /// Aperture per dimension, wavelengths.
    pub w: [f64; 2],
    /// Copula degrees of freedom.
    pub nu: f64,
    /// Private power share.
    pub alpha_p: f64,
    /// SINR thresholds, dB.
    pub gamma_th_c_db: f64,
    pub gamma_th_p_db: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    /// Any of: fas_rsma, tas_rsma, fas_noma, tas_noma.
    pub schemes: Vec<String>,
    pub snr_db: SnrGrid,
}

/// Inclusive dB grid `start, start+step, ..., stop`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SnrGrid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl SnrGrid {
    pub fn points(&self) -> Vec<f64> {
        let mut out = Vec::new();
        let n = ((self.stop - self.start) / self.step).round() as i64;
        for i in 0..=n.max(0) {
            let v = self.start + i as f64 * self.step;
            if v <= self.stop + 1e-9 {
                out.push(v);
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QmcSection {
    pub points_per_shift: u32,
    pub shifts: u32,
    pub error_target: f64,
    pub jitter: f64,
    pub seed: u64,
}

impl Default for QmcSection {
    fn default() -> Self {
        let d = MvtSettings::default();
        Self {
            points_per_shift: d.qmc_points,
            shifts: d.shifts,
            error_target: d.error_target,
            jitter: d.jitter,
            seed: d.seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct McSection {
    pub samples: u64,
    pub batch: u64,
    pub seed: u64,
}

impl Default for McSection {
    fn default() -> Self {
        let d = McSettings::default();
        Self { samples: d.samples, batch: d.batch, seed: d.seed }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub directory: String,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self { directory: "out".to_string() }
    }
}

impl Scenario {
    /// Full invariant validation; failures name the offending key.
    pub fn validate(&self) -> Result<()> {
        if self.users.is_empty() {
            return Err(Error::Validation("user: at least one [[user]] block is required".into()));
        }
        for (i, u) in self.users.iter().enumerate() {
            if u.n[0] == 0 || u.n[1] == 0 {
                return Err(Error::Validation(format!("user[{i}].n: port counts must be >= 1")));
            }
            if u.w[0] < 0.0 || u.w[1] < 0.0 {
                return Err(Error::Validation(format!("user[{i}].w: apertures must be >= 0")));
            }
            if u.nu.is_nan() || u.nu <= 0.0 {
                return Err(Error::Validation(format!("user[{i}].nu: must be > 0")));
            }
            if u.alpha_p.is_nan() || u.alpha_p <= 0.0 {
                return Err(Error::Validation(format!("user[{i}].alpha_p: must be > 0")));
            }
        }
        if self.sweep.schemes.is_empty() {
            return Err(Error::Validation("sweep.schemes: must be non-empty".into()));
        }
        for s in &self.sweep.schemes {
            Scheme::parse(s).map_err(|_| {
                Error::Validation(format!("sweep.schemes: unknown scheme '{s}'"))
            })?;
        }
        let g = &self.sweep.snr_db;
        if g.step.is_nan() || g.step <= 0.0 || g.stop < g.start {
            return Err(Error::Validation(format!(
                "sweep.snr_db: need step > 0 and stop >= start (got start={}, stop={}, step={})",
                g.start, g.stop, g.step
            )));
        }
        self.mvt_settings().map_err(|e| Error::Validation(format!("qmc: {e}")))?;
        self.mc_settings().map_err(|e| Error::Validation(format!("monte_carlo: {e}")))?;
        // re-validate every system-level invariant (power sum, beta, ...)
        self.system_config()?.validate()
    }

    pub fn system_config(&self) -> Result<SystemConfig> {
        let users = self
            .users
            .iter()
            .map(|u| {
                Ok(UserConfig {
                    position: u.position,
                    grid: PortGrid::new(u.n[0], u.n[1], u.w[0], u.w[1])?,
                    nu: u.nu,
                    alpha_p: u.alpha_p,
                    threshold_common: db_to_linear(u.gamma_th_c_db),
                    threshold_private: db_to_linear(u.gamma_th_p_db),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SystemConfig {
            bs_position: self.system.bs_position,
            path_loss_exponent: self.system.beta,
            alpha_c: self.system.alpha_c,
            mean_gain: self.system.mean_gain,
            users,
        })
    }

    pub fn schemes(&self) -> Result<Vec<Scheme>> {
        self.sweep.schemes.iter().map(|s| Scheme::parse(s)).collect()
    }

    pub fn mvt_settings(&self) -> Result<MvtSettings> {
        MvtSettings::new(
            self.qmc.points_per_shift,
            self.qmc.shifts,
            self.qmc.error_target,
            self.qmc.jitter,
            self.qmc.seed,
        )
    }

    pub fn mc_settings(&self) -> Result<McSettings> {
        McSettings::new(self.monte_carlo.samples, self.monte_carlo.seed, self.monte_carlo.batch)
    }

    /// Canonical TOML serialization (round-trips through [`load_scenario`]).
    pub fn to_toml(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Overrides both the QMC and Monte-Carlo seeds from one master seed.
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.qmc.seed = crate::numerics::mix_seed(seed, 1);
        self.monte_carlo.seed = crate::numerics::mix_seed(seed, 2);
        self
    }
}

/// Parses and validates a scenario file.
pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario> {
    let text = std::fs::read_to_string(path.as_ref())?;
    parse_scenario(&text)
}

/// Parses and validates scenario text.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let scenario: Scenario = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    scenario.validate()?;
    Ok(scenario)
}

/// Significant-digit decimal formatting (9 digits) used for every
/// probability column; plain shortest round-trip formatting for grid
/// values. Both are platform-independent and byte-stable.
fn fmt_sig9(x: f64) -> String {
    if x == 0.0 {
        return "0.00000000e0".to_string();
    }
    format!("{x:.8e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_sig9).unwrap_or_default()
}

/// Renders the result table as CSV (UTF-8, LF, header row mandatory).
pub fn render_table(rows: &[OutageResult]) -> String {
    let mut out = String::new();
    out.push_str(&TABLE_COLUMNS.join(","));
    out.push('\n');
    for r in rows {
        let flags = r.flags.join("|");
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.scheme.as_str(),
            r.user + 1,
            r.snr_db,
            fmt_opt(r.analytic),
            fmt_opt(r.analytic_stderr),
            fmt_opt(r.asymptotic),
            fmt_opt(r.mc_estimate),
            fmt_opt(r.mc_ci95.map(|c| c.0)),
            fmt_opt(r.mc_ci95.map(|c| c.1)),
            r.samples,
            flags,
        );
    }
    out
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    version: &'static str,
    scenario: &'a Scenario,
}

/// Outcome of a scenario run.
#[derive(Debug)]
pub struct RunOutcome {
    pub data_path: PathBuf,
    pub manifest_path: PathBuf,
    pub rows: usize,
    /// True when at least one point carries an `error:` flag.
    pub partial: bool,
}

/// Runs the sweep and writes `results.csv` + `manifest.json` into the
/// output directory. Byte-identical for identical (scenario, seed).
pub fn run(scenario: &Scenario, out_dir: Option<&Path>) -> Result<RunOutcome> {
    scenario.validate()?;
    let cfg = scenario.system_config()?;
    let settings = SweepSettings { mvt: scenario.mvt_settings()?, mc: scenario.mc_settings()? };
    let schemes = scenario.schemes()?;
    let grid = scenario.sweep.snr_db.points();
    let rows = run_sweep(&cfg, &schemes, &grid, &settings)?;
    let partial = rows.iter().any(|r| r.flags.iter().any(|f| f.starts_with("error:")));

    let dir = out_dir
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from(&scenario.output.directory));
    std::fs::create_dir_all(&dir)?;
    let data_path = dir.join("results.csv");
    let manifest_path = dir.join("manifest.json");
    std::fs::write(&data_path, render_table(&rows))?;
    let manifest = Manifest { version: env!("CARGO_PKG_VERSION"), scenario };
    let mut json = serde_json::to_string_pretty(&manifest).map_err(|e| Error::Parse(e.to_string()))?;
    json.push('\n');
    std::fs::write(&manifest_path, json)?;
    Ok(RunOutcome { data_path, manifest_path, rows: rows.len(), partial })
}

/// One finding of a dry-run validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReportItem {
    /// Informational note.
    Note(String),
    /// Definite problem with the scenario physics.
    Problem(String),
}

/// Dry-run report: threshold feasibility at the sweep endpoints,
/// correlation-matrix conditioning, and a crude runtime estimate.
#[derive(Debug)]
pub struct ValidationReport {
    pub items: Vec<ReportItem>,
    pub estimated_runtime_sec: f64,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        !self.items.iter().any(|i| matches!(i, ReportItem::Problem(_)))
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for item in &self.items {
            match item {
                ReportItem::Note(s) => writeln!(f, "note:    {s}")?,
                ReportItem::Problem(s) => writeln!(f, "problem: {s}")?,
            }
        }
        writeln!(f, "estimated runtime: {:.1} s", self.estimated_runtime_sec)?;
        writeln!(
            f,
            "verdict: {}",
            if self.is_clean() { "clean" } else { "problems found" }
        )
    }
}

/// Dry-run check of a parsed scenario.
pub fn validate_report(scenario: &Scenario) -> Result<ValidationReport> {
    scenario.validate()?;
    let cfg = scenario.system_config()?;
    let mut items = Vec::new();
    let max_snr = scenario.sweep.snr_db.stop;

    for (i, user) in cfg.users.iter().enumerate() {
        let th = effective_threshold(&cfg, i, max_snr)?;
        // both stage denominators are SNR-independent: infeasibility at the
        // top of the sweep means infeasibility everywhere
        if th.common.is_none() {
            items.push(ReportItem::Problem(format!(
                "user {}: common threshold infeasible at all SNR (ceiling alpha_c/(1-alpha_c) = {:.4} below threshold)",
                i + 1,
                cfg.alpha_c / (1.0 - cfg.alpha_c)
            )));
        }
        if th.private.is_none() {
            let other = cfg.other_private_share(i);
            items.push(ReportItem::Problem(format!(
                "user {}: private threshold infeasible at all SNR (ceiling alpha_p/interference = {:.4} below threshold)",
                i + 1,
                if other > 0.0 { user.alpha_p / other } else { f64::INFINITY }
            )));
        }
        let sigma = build_correlation_matrix(&user.grid, DEFAULT_JITTER_LADDER)?;
        if sigma.applied_jitter() > 0.0 {
            items.push(ReportItem::Note(format!(
                "user {}: correlation matrix needed diagonal jitter {:.1e} (tightly packed ports)",
                i + 1,
                sigma.applied_jitter()
            )));
        }
        let gain = sigma.gain_correlation()?;
        if gain.applied_jitter() > 0.0 {
            items.push(ReportItem::Note(format!(
                "user {}: gain-correlation matrix needed diagonal jitter {:.1e}",
                i + 1,
                gain.applied_jitter()
            )));
        }
    }

    // crude runtime estimate: time one representative CDF evaluation and
    // one Monte-Carlo block, then scale by the sweep size
    let schemes = scenario.schemes()?;
    let grid_len = scenario.sweep.snr_db.points().len();
    let mvt = scenario.mvt_settings()?;
    let mc = scenario.mc_settings()?;
    let rsma_points: usize = schemes.iter().filter(|s| s.is_rsma()).count() * cfg.users.len() * grid_len;
    let mc_points: usize = schemes.len() * cfg.users.len() * grid_len;

    let t0 = std::time::Instant::now();
    let _ = crate::rsma::outage_probability(&cfg, 0, max_snr.max(30.0), &mvt);
    let per_analytic = t0.elapsed().as_secs_f64();
    let t1 = std::time::Instant::now();
    let probe_mc = McSettings { samples: 10_000, ..mc.clone() };
    let _ = crate::sim::mc_outage_copula(&cfg, 0, max_snr.max(30.0), &probe_mc);
    let per_sample = t1.elapsed().as_secs_f64() / probe_mc.samples as f64;
    let estimated = rsma_points as f64 * 2.0 * per_analytic
        + mc_points as f64 * mc.samples as f64 * per_sample;

    Ok(ValidationReport { items, estimated_runtime_sec: estimated })
}
