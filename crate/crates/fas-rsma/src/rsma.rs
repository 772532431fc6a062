//! RSMA downlink system model: geometry and path loss, two-stage SINRs,
//! effective outage thresholds, exact outage probability and its high-SNR
//! asymptote.
//!
//! Each user decodes the common stream first (private streams as noise),
//! then its own private stream (other users' private streams as noise).
//! Both stages share the best-port gain, so the outage event collapses to
//! `g <= max(common, private)` effective gain thresholds; an effective
//! threshold with a non-positive denominator means the stage's SINR ceiling
//! sits below the threshold and outage is certain at every SNR.
//!
//! Average SNR is accepted in dB at these interfaces (matching sweep axes)
//! and converted to linear exactly once. The mean fading gain excludes path
//! loss, which appears explicitly in the threshold transforms.

use crate::channel::{build_correlation_matrix, PortGrid, DEFAULT_JITTER_LADDER};
use crate::copula::{common_marginal_cdf, CopulaSpec};
use crate::error::{Error, Result};
use crate::numerics::{MvtResult, MvtSettings};

pub fn db_to_linear(db: f64) -> f64 {
    10.0_f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Per-user configuration: geometry, fluid-antenna grid, copula degrees of
/// freedom, private power share, and linear SINR thresholds.
#[derive(Debug, Clone, PartialEq)]
pub struct UserConfig {
    pub position: [f64; 3],
    pub grid: PortGrid,
    /// Copula degrees of freedom for this user's port dependence.
    pub nu: f64,
    /// Private power share alpha_p (> 0).
    pub alpha_p: f64,
    /// Linear SINR threshold of the common stage (> 0).
    pub threshold_common: f64,
    /// Linear SINR threshold of the private stage (> 0).
    pub threshold_private: f64,
}

impl UserConfig {
    fn validate(&self, idx: usize) -> Result<()> {
        if self.alpha_p.is_nan() || self.alpha_p <= 0.0 {
            return Err(Error::Validation(format!("user[{idx}].alpha_p must be > 0")));
        }
        if !(self.threshold_common.is_finite() && self.threshold_common > 0.0)
            || !(self.threshold_private.is_finite() && self.threshold_private > 0.0)
        {
            return Err(Error::Validation(format!("user[{idx}] thresholds must be > 0")));
        }
        if self.nu.is_nan() || self.nu <= 0.0 {
            return Err(Error::Validation(format!("user[{idx}].nu must be > 0")));
        }
        Ok(())
    }
}

/// System-wide configuration: BS position, path-loss exponent, common power
/// share, mean fading gain, and the user list.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    pub bs_position: [f64; 3],
    /// Path-loss exponent beta (> 2).
    pub path_loss_exponent: f64,
    /// Common-stream power share alpha_c in (0, 1).
    pub alpha_c: f64,
    /// Mean fading gain (path loss excluded), > 0.
    pub mean_gain: f64,
    pub users: Vec<UserConfig>,
}

impl SystemConfig {
    /// Re-validates every invariant; names the offending field on failure.
    pub fn validate(&self) -> Result<()> {
        if self.path_loss_exponent.is_nan() || self.path_loss_exponent <= 2.0 {
            return Err(Error::Validation(format!(
                "path_loss_exponent={} must be > 2",
                self.path_loss_exponent
            )));
        }
        if self.alpha_c.is_nan() || self.alpha_c <= 0.0 || self.alpha_c >= 1.0 {
            return Err(Error::Validation(format!("alpha_c={} must be in (0,1)", self.alpha_c)));
        }
        if self.mean_gain.is_nan() || self.mean_gain <= 0.0 {
            return Err(Error::Validation(format!("mean_gain={} must be > 0", self.mean_gain)));
        }
        if self.users.is_empty() {
            return Err(Error::Validation("users list must be non-empty".into()));
        }
        let mut sum = self.alpha_c;
        for (i, u) in self.users.iter().enumerate() {
            u.validate(i)?;
            sum += u.alpha_p;
        }
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::Validation(format!(
                "power shares must sum to 1: alpha_c + sum(alpha_p) = {sum}"
            )));
        }
        Ok(())
    }

    fn user(&self, idx: usize) -> Result<&UserConfig> {
        self.users
            .get(idx)
            .ok_or_else(|| Error::domain(format!("user index {idx} out of range")))
    }

    /// Sum of the *other* users' private shares, the private-stage
    /// interference coefficient. Equals `1 - alpha_c - alpha_p_k` under the
    /// power-sum constraint.
    pub fn other_private_share(&self, idx: usize) -> f64 {
        self.users
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != idx)
            .map(|(_, u)| u.alpha_p)
            .sum()
    }

    /// Copy of this config with user `idx` forced to a single fixed
    /// antenna (the TAS baseline shares every other parameter).
    pub fn with_single_port_user(&self, idx: usize) -> SystemConfig {
        let mut cfg = self.clone();
        if let Some(u) = cfg.users.get_mut(idx) {
            u.grid = PortGrid::single();
        }
        cfg
    }
}

/// Path loss `L = d^-beta` toward a user.
pub fn path_loss(cfg: &SystemConfig, user_index: usize) -> Result<f64> {
    let user = cfg.user(user_index)?;
    let d = distance(cfg.bs_position, user.position);
    if d == 0.0 {
        return Err(Error::domain(format!(
            "user {user_index} coincides with the BS: singular path loss"
        )));
    }
    Ok(d.powf(-cfg.path_loss_exponent))
}

fn distance(a: [f64; 3], b: [f64; 3]) -> f64 {
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    let dz = a[2] - b[2];
    (dx * dx + dy * dy + dz * dz).sqrt()
}

/// Common-stage SINR: all private streams act as noise.
/// `snr` is the linear average transmit SNR.
pub fn sinr_common(gain: f64, snr: f64, alpha_c: f64, path_loss: f64) -> f64 {
    let p = snr * path_loss * gain;
    p * alpha_c / (p * (1.0 - alpha_c) + 1.0)
}

/// Private-stage SINR of the indexed user: the other users' private streams
/// act as noise (the common stream has been removed).
pub fn sinr_private(gain: f64, snr: f64, cfg: &SystemConfig, user_index: usize) -> Result<f64> {
    let user = cfg.user(user_index)?;
    let l = path_loss(cfg, user_index)?;
    let p = snr * l * gain;
    Ok(p * user.alpha_p / (p * cfg.other_private_share(user_index) + 1.0))
}

/// Effective gain thresholds of the two decode stages. `None` marks an
/// infeasible stage (SINR ceiling below the threshold: outage certain).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveThreshold {
    pub common: Option<f64>,
    pub private: Option<f64>,
}

impl EffectiveThreshold {
    /// The combined gain threshold `max(common, private)`; `None` when
    /// either stage is infeasible.
    pub fn value(&self) -> Option<f64> {
        match (self.common, self.private) {
            (Some(c), Some(p)) => Some(c.max(p)),
            _ => None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        self.value().is_some()
    }
}

/// Threshold transforms of the outage event at average SNR `snr_db`:
/// `common = th_c / (snr L (alpha_c - (1-alpha_c) th_c))` and
/// `private = th_p / (snr L (alpha_p - (other shares) th_p))`, each `None`
/// when its denominator is non-positive.
pub fn effective_threshold(
    cfg: &SystemConfig,
    user_index: usize,
    snr_db: f64,
) -> Result<EffectiveThreshold> {
    let user = cfg.user(user_index)?;
    let snr = db_to_linear(snr_db);
    if snr.is_nan() || snr <= 0.0 {
        return Err(Error::domain(format!("snr_db={snr_db} produced non-positive linear SNR")));
    }
    let l = path_loss(cfg, user_index)?;
    let denom_c = cfg.alpha_c - (1.0 - cfg.alpha_c) * user.threshold_common;
    let denom_p = user.alpha_p - cfg.other_private_share(user_index) * user.threshold_private;
    let common = (denom_c > 0.0).then(|| user.threshold_common / (snr * l * denom_c));
    let private = (denom_p > 0.0).then(|| user.threshold_private / (snr * l * denom_p));
    Ok(EffectiveThreshold { common, private })
}

/// Precomputed per-user evaluation context: path loss and the gain-copula
/// spec built from the user's port grid.
#[derive(Debug, Clone)]
pub struct UserLink {
    pub user_index: usize,
    pub path_loss: f64,
    pub copula: CopulaSpec,
}

impl UserLink {
    pub fn new(cfg: &SystemConfig, user_index: usize) -> Result<Self> {
        let user = cfg.user(user_index)?;
        let field = build_correlation_matrix(&user.grid, DEFAULT_JITTER_LADDER)?;
        let copula = CopulaSpec::student_t(field.gain_correlation()?, user.nu)?;
        Ok(Self { user_index, path_loss: path_loss(cfg, user_index)?, copula })
    }
}

/// Exact outage probability at `snr_db`: the gain CDF at the effective
/// threshold, or exactly 1 when the threshold is infeasible.
pub fn outage_probability(
    cfg: &SystemConfig,
    user_index: usize,
    snr_db: f64,
    settings: &MvtSettings,
) -> Result<MvtResult> {
    let link = UserLink::new(cfg, user_index)?;
    outage_with_link(cfg, &link, snr_db, settings)
}

pub(crate) fn outage_with_link(
    cfg: &SystemConfig,
    link: &UserLink,
    snr_db: f64,
    settings: &MvtSettings,
) -> Result<MvtResult> {
    match effective_threshold(cfg, link.user_index, snr_db)?.value() {
        None => Ok(MvtResult::exact(1.0)),
        Some(th) => {
            let u = -(-th / cfg.mean_gain).exp_m1();
            common_marginal_cdf(u, &link.copula, settings)
        }
    }
}

/// High-SNR asymptote: the gain CDF with the exponential marginal
/// linearized to `th / mean_gain`. Errors when `th / mean_gain >= 1`
/// (the linearized marginal stops being a probability) or when the
/// threshold is infeasible.
pub fn asymptotic_outage(
    cfg: &SystemConfig,
    user_index: usize,
    snr_db: f64,
    settings: &MvtSettings,
) -> Result<MvtResult> {
    let link = UserLink::new(cfg, user_index)?;
    asymptotic_with_link(cfg, &link, snr_db, settings)
}

pub(crate) fn asymptotic_with_link(
    cfg: &SystemConfig,
    link: &UserLink,
    snr_db: f64,
    settings: &MvtSettings,
) -> Result<MvtResult> {
    let th = effective_threshold(cfg, link.user_index, snr_db)?
        .value()
        .ok_or_else(|| {
            Error::domain(format!(
                "asymptote invalid: threshold infeasible for user {} (outage certain)",
                link.user_index
            ))
        })?;
    let x = th / cfg.mean_gain;
    if x >= 1.0 {
        return Err(Error::domain(format!(
            "asymptote invalid at snr {snr_db} dB: linearized marginal {x} >= 1"
        )));
    }
    common_marginal_cdf(x, &link.copula, settings)
}
