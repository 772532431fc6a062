//! Monte-Carlo validation engines (copula-sampled and physical-channel)
//! and benchmark schemes: FAS/TAS receivers under RSMA and two-user NOMA.
//!
//! Every engine partitions work into deterministic blocks seeded by
//! `mix(seed, block index)`, so estimates are bit-identical for any batch
//! scheduling. Hit counts are integers and sum exactly regardless of
//! parallel reduction order.

use rayon::prelude::*;

use crate::channel::{build_correlation_matrix, RayleighGainSampler, DEFAULT_JITTER_LADDER};
use crate::copula::CopulaSampler;
use crate::error::{Error, Result};
use crate::numerics::{mix_seed, MvtSettings};
use crate::rsma::{
    asymptotic_with_link, db_to_linear, effective_threshold, outage_with_link, path_loss,
    SystemConfig, UserLink,
};

/// z for a two-sided 95% interval.
const Z95: f64 = 1.959963984540054;

/// Monte-Carlo estimates below this hit count carry the
/// `insufficient_samples` flag instead of pretending to resolve the
/// rare-event regime.
const MIN_RELIABLE_HITS: u64 = 10;

/// Monte-Carlo controls.
#[derive(Debug, Clone, PartialEq)]
pub struct McSettings {
    /// Total samples per estimate (>= 1000 for anything reported).
    pub samples: u64,
    /// Seed; estimates are bit-identical given (samples, seed, batch).
    pub seed: u64,
    /// Samples per deterministic block.
    pub batch: u64,
}

impl McSettings {
    pub fn new(samples: u64, seed: u64, batch: u64) -> Result<Self> {
        if samples < 1000 {
            return Err(Error::domain(format!("McSettings: samples={samples} < 1000")));
        }
        if batch == 0 {
            return Err(Error::domain("McSettings: batch must be positive"));
        }
        Ok(Self { samples, seed, batch })
    }
}

impl Default for McSettings {
    fn default() -> Self {
        Self { samples: 1_000_000, seed: 7, batch: 65_536 }
    }
}

/// The four benchmark schemes, in canonical output order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Scheme {
    FasRsma,
    TasRsma,
    FasNoma,
    TasNoma,
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [Scheme::FasRsma, Scheme::TasRsma, Scheme::FasNoma, Scheme::TasNoma];

    pub fn as_str(&self) -> &'static str {
        match self {
            Scheme::FasRsma => "fas_rsma",
            Scheme::TasRsma => "tas_rsma",
            Scheme::FasNoma => "fas_noma",
            Scheme::TasNoma => "tas_noma",
        }
    }

    pub fn parse(s: &str) -> Result<Scheme> {
        match s.trim().replace('-', "_").to_ascii_lowercase().as_str() {
            "fas_rsma" => Ok(Scheme::FasRsma),
            "tas_rsma" => Ok(Scheme::TasRsma),
            "fas_noma" => Ok(Scheme::FasNoma),
            "tas_noma" => Ok(Scheme::TasNoma),
            other => Err(Error::Parse(format!("unknown scheme '{other}'"))),
        }
    }

    pub fn is_rsma(&self) -> bool {
        matches!(self, Scheme::FasRsma | Scheme::TasRsma)
    }

    pub fn is_fas(&self) -> bool {
        matches!(self, Scheme::FasRsma | Scheme::FasNoma)
    }
}

/// One evaluated (scheme, user, SNR) point.
#[derive(Debug, Clone, PartialEq)]
pub struct OutageResult {
    pub scheme: Scheme,
    /// 0-based user index.
    pub user: usize,
    pub snr_db: f64,
    /// Analytic OP (RSMA schemes only: no closed form exists for NOMA).
    pub analytic: Option<f64>,
    pub analytic_stderr: Option<f64>,
    /// High-SNR asymptote, absent where its domain guard rejects.
    pub asymptotic: Option<f64>,
    pub mc_estimate: Option<f64>,
    /// Wilson 95% interval bracketing the estimate.
    pub mc_ci95: Option<(f64, f64)>,
    pub samples: u64,
    pub flags: Vec<String>,
}

impl OutageResult {
    fn empty(scheme: Scheme, user: usize, snr_db: f64) -> Self {
        Self {
            scheme,
            user,
            snr_db,
            analytic: None,
            analytic_stderr: None,
            asymptotic: None,
            mc_estimate: None,
            mc_ci95: None,
            samples: 0,
            flags: Vec::new(),
        }
    }
}

/// Wilson 95% confidence interval for a binomial proportion; well behaved
/// at the 0 and 1 boundaries.
pub fn wilson_ci95(hits: u64, n: u64) -> (f64, f64) {
    let n = n as f64;
    let p = hits as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

fn batch_sizes(mc: &McSettings) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut remaining = mc.samples;
    let mut idx = 0u64;
    while remaining > 0 {
        let size = remaining.min(mc.batch);
        out.push((idx, size));
        remaining -= size;
        idx += 1;
    }
    out
}

fn finish_mc(scheme: Scheme, user: usize, snr_db: f64, hits: u64, mc: &McSettings) -> OutageResult {
    let estimate = hits as f64 / mc.samples as f64;
    let mut flags = Vec::new();
    if hits < MIN_RELIABLE_HITS {
        flags.push("insufficient_samples".to_string());
    }
    OutageResult {
        scheme,
        user,
        snr_db,
        analytic: None,
        analytic_stderr: None,
        asymptotic: None,
        mc_estimate: Some(estimate),
        mc_ci95: Some(wilson_ci95(hits, mc.samples)),
        samples: mc.samples,
        flags,
    }
}

/// Copula-sampled Monte-Carlo outage estimate: samples the user's gain
/// copula, maps to exponential gains, takes the best port, and counts
/// `max <= effective threshold`. This is the sampling counterpart of the
/// analytic expression and validates the CDF machinery end to end.
pub fn mc_outage_copula(
    cfg: &SystemConfig,
    user_index: usize,
    snr_db: f64,
    mc: &McSettings,
) -> Result<OutageResult> {
    cfg.validate()?;
    let threshold = effective_threshold(cfg, user_index, snr_db)?.value();
    let Some(threshold) = threshold else {
        // the outage event is certain: every sample would land below the
        // (infinite) threshold
        let mut r = finish_mc(Scheme::FasRsma, user_index, snr_db, mc.samples, mc);
        r.flags = vec!["threshold_infeasible".to_string()];
        return Ok(r);
    };
    let link = UserLink::new(cfg, user_index)?;
    let mean_gain = cfg.mean_gain;
    let hits: u64 = batch_sizes(mc)
        .into_par_iter()
        .map(|(idx, size)| {
            let mut sampler =
                CopulaSampler::new(&link.copula, mix_seed(mc.seed, idx)).expect("validated spec");
            let mut h = 0u64;
            for _ in 0..size {
                let u = sampler.sample();
                let max_gain = u
                    .iter()
                    .map(|&ui| -mean_gain * (-ui.min(1.0 - 1e-16)).ln_1p())
                    .fold(f64::NEG_INFINITY, f64::max);
                if max_gain <= threshold {
                    h += 1;
                }
            }
            h
        })
        .sum();
    Ok(finish_mc(Scheme::FasRsma, user_index, snr_db, hits, mc))
}

/// Physical-channel Monte-Carlo outage estimate: correlated complex
/// Gaussian fields with the Jakes correlation drive the same max/threshold
/// test. Estimates the true-model OP, against which the copula analysis is
/// an approximation.
pub fn mc_outage_physical(
    cfg: &SystemConfig,
    user_index: usize,
    snr_db: f64,
    mc: &McSettings,
) -> Result<OutageResult> {
    cfg.validate()?;
    let threshold = effective_threshold(cfg, user_index, snr_db)?.value();
    let Some(threshold) = threshold else {
        let mut r = finish_mc(Scheme::FasRsma, user_index, snr_db, mc.samples, mc);
        r.flags = vec!["threshold_infeasible".to_string()];
        return Ok(r);
    };
    let user = &cfg.users[user_index];
    let sigma = build_correlation_matrix(&user.grid, DEFAULT_JITTER_LADDER)?;
    let hits: u64 = batch_sizes(mc)
        .into_par_iter()
        .map(|(idx, size)| {
            let mut sampler =
                RayleighGainSampler::new(&sigma, cfg.mean_gain, mix_seed(mc.seed, idx))
                    .expect("validated matrix");
            let mut h = 0u64;
            for _ in 0..size {
                let r = sampler.sample();
                let max_gain = r.gains.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                if max_gain <= threshold {
                    h += 1;
                }
            }
            h
        })
        .sum();
    Ok(finish_mc(Scheme::FasRsma, user_index, snr_db, hits, mc))
}

/// Two-user power-domain NOMA benchmark with SIC at the stronger user
/// (larger path-loss gain). Power shares are the private shares
/// renormalized to sum to 1; each user's message threshold is its private
/// SINR threshold. `fas` selects best-port reception; otherwise the user
/// is reduced to a single fixed port.
pub fn mc_outage_noma(
    cfg: &SystemConfig,
    user_index: usize,
    snr_db: f64,
    mc: &McSettings,
    fas: bool,
) -> Result<OutageResult> {
    cfg.validate()?;
    if cfg.users.len() != 2 {
        return Err(Error::Unsupported(format!(
            "NOMA benchmark is defined for K=2 users, got {}",
            cfg.users.len()
        )));
    }
    if user_index > 1 {
        return Err(Error::domain(format!("user index {user_index} out of range")));
    }
    let cfg_eval =
        if fas { cfg.clone() } else { cfg.with_single_port_user(user_index) };

    let l0 = path_loss(&cfg_eval, 0)?;
    let l1 = path_loss(&cfg_eval, 1)?;
    // stronger user = larger path-loss gain; ties resolve to user 0
    let strong = if l1 > l0 { 1 } else { 0 };
    let weak = 1 - strong;
    let total_private: f64 = cfg_eval.users.iter().map(|u| u.alpha_p).sum();
    let share_weak = cfg_eval.users[weak].alpha_p / total_private;
    let share_strong = cfg_eval.users[strong].alpha_p / total_private;
    let snr = db_to_linear(snr_db);
    let l = path_loss(&cfg_eval, user_index)?;
    let th_weak_msg = cfg_eval.users[weak].threshold_private;
    let th_own = cfg_eval.users[user_index].threshold_private;

    // reduce both decode stages to gain thresholds; None = always outage
    let stage_threshold = |num_share: f64, int_share: f64, th: f64| -> Option<f64> {
        let denom = num_share - int_share * th;
        (denom > 0.0).then(|| th / (snr * l * denom))
    };
    let gain_threshold: Option<f64> = if user_index == weak {
        // weak user decodes its own message, strong user's signal as noise
        stage_threshold(share_weak, share_strong, th_own)
    } else {
        // strong user: first the weak message (SIC), then its own post-SIC
        let sic = stage_threshold(share_weak, share_strong, th_weak_msg);
        let own = Some(th_own / (snr * l * share_strong));
        match (sic, own) {
            (Some(a), Some(b)) => Some(a.max(b)),
            _ => None,
        }
    };

    let scheme = if fas { Scheme::FasNoma } else { Scheme::TasNoma };
    let Some(threshold) = gain_threshold else {
        let mut r = finish_mc(scheme, user_index, snr_db, mc.samples, mc);
        r.flags = vec!["threshold_infeasible".to_string()];
        return Ok(r);
    };

    let link = UserLink::new(&cfg_eval, user_index)?;
    let mean_gain = cfg_eval.mean_gain;
    let hits: u64 = batch_sizes(mc)
        .into_par_iter()
        .map(|(idx, size)| {
            let mut sampler =
                CopulaSampler::new(&link.copula, mix_seed(mc.seed, idx)).expect("validated spec");
            let mut h = 0u64;
            for _ in 0..size {
                let u = sampler.sample();
                let max_gain = u
                    .iter()
                    .map(|&ui| -mean_gain * (-ui.min(1.0 - 1e-16)).ln_1p())
                    .fold(f64::NEG_INFINITY, f64::max);
                if max_gain <= threshold {
                    h += 1;
                }
            }
            h
        })
        .sum();
    Ok(finish_mc(scheme, user_index, snr_db, hits, mc))
}

/// Settings bundle for a sweep.
#[derive(Debug, Clone, Default)]
pub struct SweepSettings {
    pub mvt: MvtSettings,
    pub mc: McSettings,
}

/// Evaluates analytic (where defined), asymptotic (where valid), and
/// Monte-Carlo estimates for every (scheme, user, SNR) triple. Rows come
/// out sorted by (scheme canonical order, user, snr). Per-point failures
/// carry an `error:` flag instead of aborting the sweep.
pub fn run_sweep(
    cfg: &SystemConfig,
    schemes: &[Scheme],
    snr_grid_db: &[f64],
    settings: &SweepSettings,
) -> Result<Vec<OutageResult>> {
    cfg.validate()?;
    if snr_grid_db.is_empty() {
        return Err(Error::domain("empty SNR grid"));
    }
    let mut active: Vec<Scheme> =
        Scheme::ALL.iter().filter(|s| schemes.contains(s)).cloned().collect();
    active.dedup();
    let mut snrs = snr_grid_db.to_vec();
    snrs.sort_by(f64::total_cmp);

    let mut results = Vec::new();
    for &scheme in &active {
        for user in 0..cfg.users.len() {
            // precompute the link once per (scheme, user)
            let cfg_eval = if scheme.is_fas() { cfg.clone() } else { cfg.with_single_port_user(user) };
            let link = UserLink::new(&cfg_eval, user);
            for (snr_idx, &snr_db) in snrs.iter().enumerate() {
                let mc = McSettings {
                    seed: mix_seed(
                        settings.mc.seed,
                        (scheme as u64) << 32 | (user as u64) << 16 | snr_idx as u64,
                    ),
                    ..settings.mc.clone()
                };
                let point = evaluate_point(&cfg_eval, scheme, user, snr_db, &link, &settings.mvt, &mc);
                results.push(point);
            }
        }
    }
    Ok(results)
}

fn evaluate_point(
    cfg_eval: &SystemConfig,
    scheme: Scheme,
    user: usize,
    snr_db: f64,
    link: &Result<UserLink>,
    mvt: &MvtSettings,
    mc: &McSettings,
) -> OutageResult {
    let mut out = OutageResult::empty(scheme, user, snr_db);
    let link = match link {
        Ok(l) => l,
        Err(e) => {
            out.flags.push(format!("error:{e}"));
            return out;
        }
    };
    if scheme.is_rsma() {
        match outage_with_link(cfg_eval, link, snr_db, mvt) {
            Ok(r) => {
                out.analytic = Some(r.value);
                out.analytic_stderr = Some(r.std_error);
            }
            Err(e) => out.flags.push(format!("error:{e}")),
        }
        match asymptotic_with_link(cfg_eval, link, snr_db, mvt) {
            Ok(r) => out.asymptotic = Some(r.value),
            Err(_) => out.flags.push("asymptote_invalid".to_string()),
        }
        match mc_outage_copula(cfg_eval, user, snr_db, mc) {
            Ok(r) => {
                out.mc_estimate = r.mc_estimate;
                out.mc_ci95 = r.mc_ci95;
                out.samples = r.samples;
                out.flags.extend(r.flags);
            }
            Err(e) => out.flags.push(format!("error:{e}")),
        }
    } else {
        match mc_outage_noma(cfg_eval, user, snr_db, mc, scheme.is_fas()) {
            Ok(r) => {
                out.mc_estimate = r.mc_estimate;
                out.mc_ci95 = r.mc_ci95;
                out.samples = r.samples;
                out.flags.extend(r.flags);
            }
            Err(e) => out.flags.push(format!("error:{e}")),
        }
    }
    out
}
