//! Multivariate normal / Student-t CDF over upper-limit rectangles
//! (-inf, b_1] x ... x (-inf, b_N], evaluated by separation of variables
//! with a randomized rank-1 Kronecker lattice.
//!
//! The transformation follows the standard sequence: factor the correlation
//! matrix, condition coordinate i on the previous ones, and map the problem
//! onto the unit hypercube where a low-discrepancy point set integrates it.
//! For finite degrees of freedom one extra cube coordinate drives the
//! chi-based scale mixing; the Gaussian case drops it. Each randomized
//! shift is an independent estimate, so the spread across shifts gives the
//! reported standard error.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channel::CorrelationMatrix;
use crate::error::{Error, Result};
use crate::numerics::special::{
    inv_reg_inc_gamma_p, norm_cdf, norm_quantile, student_t_cdf,
};

/// Degrees of freedom at and above which the t evaluator routes to the
/// Gaussian limit: the chi mixing term loses accuracy there while the
/// limit is exact far below our tolerances.
pub const GAUSSIAN_LIMIT_NU: f64 = 1e6;

/// Hard cap on points per shift when `error_target` escalation is active.
const MAX_QMC_POINTS: u32 = 1 << 20;

/// Controls for the randomized-QMC multivariate CDF evaluator.
#[derive(Debug, Clone, PartialEq)]
pub struct MvtSettings {
    /// Lattice points per randomized shift (>= 16).
    pub qmc_points: u32,
    /// Independent randomizations used for error estimation (>= 2).
    pub shifts: u32,
    /// Requested absolute error on the CDF value; 0 disables adaptation.
    /// When positive, the evaluator doubles `qmc_points` (deterministically)
    /// until `3 * std_error <= error_target` or the point cap is reached.
    pub error_target: f64,
    /// Diagonal regularization applied as a last resort when the supplied
    /// correlation matrix fails to factor (must stay < 1e-3 so that
    /// correlations are not visibly distorted).
    pub jitter: f64,
    /// Seed for the randomized shifts; identical settings give bit-identical
    /// results regardless of internal parallelism.
    pub seed: u64,
}

impl MvtSettings {
    pub fn new(qmc_points: u32, shifts: u32, error_target: f64, jitter: f64, seed: u64) -> Result<Self> {
        if qmc_points < 16 {
            return Err(Error::domain(format!("MvtSettings: qmc_points={qmc_points} < 16")));
        }
        if shifts < 2 {
            return Err(Error::domain(format!(
                "MvtSettings: shifts={shifts} < 2 (error estimation needs replicates)"
            )));
        }
        if error_target.is_nan() || error_target < 0.0 {
            return Err(Error::domain(format!("MvtSettings: error_target={error_target} < 0")));
        }
        if !(0.0..1e-3).contains(&jitter) {
            return Err(Error::domain(format!("MvtSettings: jitter={jitter} outside [0, 1e-3)")));
        }
        Ok(Self { qmc_points, shifts, error_target, jitter, seed })
    }
}

impl Default for MvtSettings {
    fn default() -> Self {
        Self { qmc_points: 8192, shifts: 12, error_target: 0.0, jitter: 1e-10, seed: 1 }
    }
}

/// A CDF estimate with its empirical standard error across shifts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MvtResult {
    /// Probability in [0, 1].
    pub value: f64,
    /// Standard error over the independent randomized shifts; exactly 0 for
    /// the deterministic one-dimensional reductions.
    pub std_error: f64,
}

impl MvtResult {
    pub(crate) fn exact(value: f64) -> Self {
        Self { value, std_error: 0.0 }
    }
}

/// SplitMix64 step, used to derive independent per-shift / per-block seeds.
pub(crate) fn mix_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// CDF of the multivariate t-distribution with `nu` degrees of freedom and
/// correlation matrix `sigma`, at the upper limits `upper`.
///
/// Entries of `upper` may be `+inf` (those coordinates are marginalized
/// away exactly). `nu >= 1e6` routes to [`mvn_cdf`]; a single remaining
/// coordinate reduces to the univariate CDF with zero standard error.
pub fn mvt_cdf(
    upper: &[f64],
    sigma: &CorrelationMatrix,
    nu: f64,
    settings: &MvtSettings,
) -> Result<MvtResult> {
    if nu <= 0.0 || nu.is_nan() {
        return Err(Error::domain(format!("mvt_cdf: nu={nu} must be positive")));
    }
    if nu >= GAUSSIAN_LIMIT_NU {
        return mvn_cdf(upper, sigma, settings);
    }
    evaluate(upper, sigma, Some(nu), settings)
}

/// CDF of the multivariate normal distribution (the `nu -> inf` limit of
/// [`mvt_cdf`], with the scale-mixing coordinate removed).
pub fn mvn_cdf(upper: &[f64], sigma: &CorrelationMatrix, settings: &MvtSettings) -> Result<MvtResult> {
    evaluate(upper, sigma, None, settings)
}

fn evaluate(
    upper: &[f64],
    sigma: &CorrelationMatrix,
    nu: Option<f64>,
    settings: &MvtSettings,
) -> Result<MvtResult> {
    if upper.len() != sigma.dim() {
        return Err(Error::dimension(format!(
            "upper has length {} but correlation matrix is {}x{}",
            upper.len(),
            sigma.dim(),
            sigma.dim()
        )));
    }
    for (i, b) in upper.iter().enumerate() {
        if b.is_nan() || *b == f64::NEG_INFINITY {
            return Err(Error::domain(format!("mvt_cdf: upper[{i}]={b} must be finite or +inf")));
        }
    }

    // Marginalize exhausted coordinates exactly (principal submatrix).
    let keep: Vec<usize> = (0..upper.len()).filter(|&i| upper[i].is_finite()).collect();
    if keep.is_empty() {
        return Ok(MvtResult::exact(1.0));
    }
    let sigma = sigma.submatrix(&keep);
    let mut limits: Vec<f64> = keep.iter().map(|&i| upper[i]).collect();

    if limits.len() == 1 {
        let v = match nu {
            Some(nu) => student_t_cdf(limits[0], nu)?,
            None => norm_cdf(limits[0]),
        };
        return Ok(MvtResult::exact(v));
    }

    // Reorder by limit tightness (ascending) to reduce integration variance,
    // permuting the correlation matrix accordingly.
    let mut order: Vec<usize> = (0..limits.len()).collect();
    order.sort_by(|&a, &b| limits[a].total_cmp(&limits[b]));
    let sigma = sigma.submatrix(&order);
    limits = order.iter().map(|&i| limits[i]).collect();

    let n = limits.len();
    let chol = sigma.repaired_cholesky(settings.jitter)?;

    let qmc_dim = if nu.is_some() { n } else { n - 1 };
    let generator = kronecker_generator(qmc_dim);

    let mut points = settings.qmc_points;
    loop {
        let result = run_shifts(&limits, &chol, nu, settings, points, &generator);
        if settings.error_target <= 0.0
            || 3.0 * result.std_error <= settings.error_target
            || points >= MAX_QMC_POINTS
        {
            return Ok(result);
        }
        points = (points * 2).min(MAX_QMC_POINTS);
    }
}

fn run_shifts(
    limits: &[f64],
    chol: &[f64],
    nu: Option<f64>,
    settings: &MvtSettings,
    points: u32,
    generator: &[f64],
) -> MvtResult {
    let shift_means: Vec<f64> = (0..settings.shifts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(settings.seed, r as u64));
            let delta: Vec<f64> = (0..generator.len()).map(|_| rng.random::<f64>()).collect();
            shift_mean(limits, chol, nu, points, generator, &delta)
        })
        .collect();
    // Aggregate sequentially in shift order: bit-identical for any degree
    // of parallelism above.
    let r = shift_means.len() as f64;
    let mean = shift_means.iter().sum::<f64>() / r;
    let var = shift_means.iter().map(|m| (m - mean) * (m - mean)).sum::<f64>() / (r - 1.0);
    MvtResult { value: mean.clamp(0.0, 1.0), std_error: (var / r).sqrt() }
}

fn shift_mean(
    limits: &[f64],
    chol: &[f64],
    nu: Option<f64>,
    points: u32,
    generator: &[f64],
    delta: &[f64],
) -> f64 {
    let n = limits.len();
    let mut y = vec![0.0_f64; n - 1];
    let mut acc = 0.0;
    for j in 0..points {
        let jf = j as f64 + 1.0;
        let mut coord = 0usize;
        // chi-based scale mixing: s = chi_nu / sqrt(nu)
        let scale = match nu {
            Some(nu) => {
                let w = baker(jf * generator[coord] + delta[coord]);
                coord += 1;
                // the inverse cannot fail for validated (nu, clamped w);
                // the fallback is the chi-square mean, never reached
                (2.0 * inv_reg_inc_gamma_p(0.5 * nu, clamp_unit(w)).unwrap_or(0.5 * nu) / nu)
                    .sqrt()
            }
            None => 1.0,
        };
        let mut f = 1.0;
        for i in 0..n {
            let mut t = limits[i] * scale;
            for (k, yk) in y.iter().enumerate().take(i) {
                t -= chol[i * n + k] * yk;
            }
            let e = norm_cdf(t / chol[i * n + i]);
            f *= e;
            if i < n - 1 {
                let w = baker(jf * generator[coord] + delta[coord]);
                coord += 1;
                let u = clamp_unit(e * w);
                y[i] = norm_quantile(u).unwrap_or(0.0);
            }
        }
        acc += f;
    }
    acc / points as f64
}

#[inline]
fn clamp_unit(u: f64) -> f64 {
    u.clamp(1e-300, 1.0 - 1e-16)
}

/// Baker (tent) transformation: periodizes the integrand over the lattice.
#[inline]
fn baker(x: f64) -> f64 {
    let f = x.fract();
    1.0 - (2.0 * f - 1.0).abs()
}

/// Fractional parts of square roots of the first `dim` primes: the classic
/// Kronecker generator, uniformly distributed in any dimension.
fn kronecker_generator(dim: usize) -> Vec<f64> {
    let mut primes = Vec::with_capacity(dim);
    let mut candidate = 2u64;
    while primes.len() < dim {
        if (2..candidate).take_while(|d| d * d <= candidate).all(|d| !candidate.is_multiple_of(d)) {
            primes.push(candidate);
        }
        candidate += 1;
    }
    primes.iter().map(|&p| (p as f64).sqrt().fract()).collect()
}
