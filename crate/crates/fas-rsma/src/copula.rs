//! Elliptical copulas (Student-t and Gaussian) and the analytical
//! distribution of the fluid-antenna equivalent channel gain.
//!
//! The best-port gain is the max of correlated exponential port gains, so
//! its CDF is the joint CDF at equal arguments; Sklar's theorem writes it
//! as a copula of the common exponential marginal. The copula dependence
//! matrix must describe the *gain* variables: see
//! [`CorrelationMatrix::gain_correlation`] for how it derives from the
//! field correlation.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};

use crate::channel::{ChannelRealization, CorrelationMatrix};
use crate::error::{Error, Result};
use crate::numerics::special::{
    ln_gamma, norm_cdf, norm_quantile, student_t_cdf, student_t_quantile,
};
use crate::numerics::{mvn_cdf, mvt_cdf, MvtResult, MvtSettings, GAUSSIAN_LIMIT_NU};

/// Clamp applied to probabilities before quantile transforms inside
/// composite operations, keeping floating-point saturation away from the
/// copula boundaries.
pub(crate) const UNIT_CLAMP: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CopulaFamily {
    StudentT,
    Gaussian,
}

/// An elliptical copula: family, dependence matrix, and (for Student-t)
/// degrees of freedom.
#[derive(Debug, Clone, PartialEq)]
pub struct CopulaSpec {
    pub family: CopulaFamily,
    pub sigma: CorrelationMatrix,
    /// Degrees of freedom; ignored for the Gaussian family.
    pub nu: f64,
}

impl CopulaSpec {
    pub fn student_t(sigma: CorrelationMatrix, nu: f64) -> Result<Self> {
        if nu <= 0.0 || nu.is_nan() {
            return Err(Error::domain(format!("CopulaSpec: nu={nu} must be positive")));
        }
        Ok(Self { family: CopulaFamily::StudentT, sigma, nu })
    }

    pub fn gaussian(sigma: CorrelationMatrix) -> Self {
        Self { family: CopulaFamily::Gaussian, sigma, nu: f64::INFINITY }
    }

    pub fn dim(&self) -> usize {
        self.sigma.dim()
    }

    fn quantile(&self, u: f64) -> Result<f64> {
        match self.family {
            CopulaFamily::StudentT if self.nu < GAUSSIAN_LIMIT_NU => {
                student_t_quantile(u, self.nu)
            }
            _ => norm_quantile(u),
        }
    }

    fn joint_cdf(&self, upper: &[f64], settings: &MvtSettings) -> Result<MvtResult> {
        match self.family {
            CopulaFamily::StudentT => mvt_cdf(upper, &self.sigma, self.nu, settings),
            CopulaFamily::Gaussian => mvn_cdf(upper, &self.sigma, settings),
        }
    }
}

/// Copula CDF C(u_1, ..., u_N): the joint elliptical CDF at the per-
/// coordinate quantiles. A zero coordinate grounds the copula to 0; a unit
/// coordinate drops out of the problem.
pub fn copula_cdf(u: &[f64], spec: &CopulaSpec, settings: &MvtSettings) -> Result<MvtResult> {
    if u.len() != spec.dim() {
        return Err(Error::dimension(format!(
            "u has length {}, copula dimension is {}",
            u.len(),
            spec.dim()
        )));
    }
    for (i, &ui) in u.iter().enumerate() {
        if !(0.0..=1.0).contains(&ui) || ui.is_nan() {
            return Err(Error::domain(format!("copula_cdf: u[{i}]={ui} outside [0,1]")));
        }
    }
    if u.contains(&0.0) {
        return Ok(MvtResult::exact(0.0));
    }
    let keep: Vec<usize> = (0..u.len()).filter(|&i| u[i] < 1.0).collect();
    if keep.is_empty() {
        return Ok(MvtResult::exact(1.0));
    }
    if keep.len() == 1 {
        // one effective coordinate: C(u) = u for any copula
        return Ok(MvtResult::exact(u[keep[0]]));
    }
    let sigma = spec.sigma.submatrix(&keep);
    let sub = CopulaSpec { family: spec.family, sigma, nu: spec.nu };
    let upper: Vec<f64> = keep
        .iter()
        .map(|&i| sub.quantile(u[i]))
        .collect::<Result<_>>()?;
    sub.joint_cdf(&upper, settings)
}

/// CDF of the equivalent (best-port) channel gain: the copula evaluated at
/// the common exponential marginal `1 - exp(-g / mean_gain)`.
pub fn fas_gain_cdf(
    g: f64,
    spec: &CopulaSpec,
    mean_gain: f64,
    settings: &MvtSettings,
) -> Result<MvtResult> {
    if g < 0.0 || g.is_nan() {
        return Err(Error::domain(format!("fas_gain_cdf: g={g} must be >= 0")));
    }
    if mean_gain <= 0.0 {
        return Err(Error::domain(format!("fas_gain_cdf: mean_gain={mean_gain} must be positive")));
    }
    if g == 0.0 {
        return Ok(MvtResult::exact(0.0));
    }
    let u = -(-g / mean_gain).exp_m1();
    common_marginal_cdf(u, spec, settings)
}

/// Joint CDF at a common marginal probability `u` across all coordinates.
/// Shared by the exact gain CDF and its high-SNR linearization.
pub(crate) fn common_marginal_cdf(
    u: f64,
    spec: &CopulaSpec,
    settings: &MvtSettings,
) -> Result<MvtResult> {
    if u <= 0.0 {
        return Ok(MvtResult::exact(0.0));
    }
    if u >= 1.0 {
        return Ok(MvtResult::exact(1.0));
    }
    if spec.dim() == 1 {
        return Ok(MvtResult::exact(u));
    }
    let u = u.clamp(UNIT_CLAMP, 1.0 - UNIT_CLAMP);
    let q = spec.quantile(u)?;
    spec.joint_cdf(&vec![q; spec.dim()], settings)
}

/// PDF of the equivalent channel gain, defined as the adaptive central
/// finite difference of [`fas_gain_cdf`]. Evaluating both sides with the
/// same settings keeps the QMC errors correlated, so they largely cancel
/// in the difference.
pub fn fas_gain_pdf(
    g: f64,
    spec: &CopulaSpec,
    mean_gain: f64,
    settings: &MvtSettings,
) -> Result<f64> {
    if g <= 0.0 || g.is_nan() {
        return Err(Error::domain(format!("fas_gain_pdf: g={g} must be positive")));
    }
    let h = (1e-4 * g.max(mean_gain)).min(0.5 * g);
    let hi = fas_gain_cdf(g + h, spec, mean_gain, settings)?.value;
    let lo = fas_gain_cdf(g - h, spec, mean_gain, settings)?.value;
    Ok(((hi - lo) / (2.0 * h)).max(0.0))
}

/// The multivariate-t density evaluated at the common quantile vector of
/// the gain marginal. This is the elliptical-density kernel only: it lacks
/// the marginal-density chain-rule factors of the true gain PDF and is
/// exposed purely for side-by-side comparison with [`fas_gain_pdf`].
pub fn fas_gain_mvt_density(g: f64, spec: &CopulaSpec, mean_gain: f64) -> Result<f64> {
    if g <= 0.0 || g.is_nan() {
        return Err(Error::domain(format!("fas_gain_mvt_density: g={g} must be positive")));
    }
    if spec.family != CopulaFamily::StudentT {
        return Err(Error::Unsupported(
            "fas_gain_mvt_density is defined for the student_t family".into(),
        ));
    }
    let n = spec.dim();
    let nu = spec.nu;
    let u = (-(-g / mean_gain).exp_m1()).clamp(UNIT_CLAMP, 1.0 - UNIT_CLAMP);
    let q = student_t_quantile(u, nu)?;
    let chol = spec.sigma.repaired_cholesky(0.0)?;
    let y = crate::numerics::linalg::forward_solve(n, &chol, &vec![q; n]);
    let quad: f64 = y.iter().map(|v| v * v).sum();
    let ln_det: f64 = (0..n).map(|i| 2.0 * chol[i * n + i].ln()).sum();
    let ln_c = ln_gamma(0.5 * (nu + n as f64))
        - ln_gamma(0.5 * nu)
        - 0.5 * (n as f64) * (std::f64::consts::PI * nu).ln()
        - 0.5 * ln_det;
    Ok((ln_c - 0.5 * (nu + n as f64) * (quad / nu).ln_1p()).exp())
}

/// Exact elliptical-copula sampler.
///
/// Student-t path: `Z ~ N(0, Sigma)`, `S ~ chi^2_nu`, `t = Z sqrt(nu/S)`,
/// `u_i = t_cdf(t_i)`. Gaussian path: `u_i = Phi(Z_i)`. Marginals are
/// uniform; dependence follows the spec.
pub struct CopulaSampler {
    family: CopulaFamily,
    nu: f64,
    dim: usize,
    chol: Vec<f64>,
    chi2: Option<ChiSquared<f64>>,
    rng: ChaCha8Rng,
}

impl CopulaSampler {
    pub fn new(spec: &CopulaSpec, seed: u64) -> Result<Self> {
        let use_t = spec.family == CopulaFamily::StudentT && spec.nu < GAUSSIAN_LIMIT_NU;
        Ok(Self {
            family: if use_t { CopulaFamily::StudentT } else { CopulaFamily::Gaussian },
            nu: spec.nu,
            dim: spec.dim(),
            chol: spec.sigma.repaired_cholesky(0.0)?,
            chi2: if use_t {
                Some(ChiSquared::new(spec.nu).map_err(|e| Error::domain(e.to_string()))?)
            } else {
                None
            },
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }

    pub fn sample(&mut self) -> Vec<f64> {
        let n = self.dim;
        let z: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut self.rng)).collect();
        let scale = match (&self.family, &self.chi2) {
            (CopulaFamily::StudentT, Some(chi2)) => {
                let s: f64 = chi2.sample(&mut self.rng);
                (self.nu / s.max(f64::MIN_POSITIVE)).sqrt()
            }
            _ => 1.0,
        };
        let mut u = Vec::with_capacity(n);
        for i in 0..n {
            let mut x = 0.0;
            for (k, zk) in z.iter().enumerate().take(i + 1) {
                x += self.chol[i * n + k] * zk;
            }
            let t = x * scale;
            let ui = match self.family {
                CopulaFamily::StudentT => student_t_cdf(t, self.nu).unwrap_or(0.5),
                CopulaFamily::Gaussian => norm_cdf(t),
            };
            u.push(ui);
        }
        u
    }
}

impl Iterator for CopulaSampler {
    type Item = Vec<f64>;

    fn next(&mut self) -> Option<Vec<f64>> {
        Some(self.sample())
    }
}

/// Stream of `count` copula samples (probability vectors), deterministic
/// given the seed.
pub fn sample_copula(
    spec: &CopulaSpec,
    count: usize,
    seed: u64,
) -> Result<impl Iterator<Item = Vec<f64>>> {
    Ok(CopulaSampler::new(spec, seed)?.take(count))
}

/// Inverse exponential marginal: `g_i = -mean_gain ln(1 - u_i)`.
/// `u_i = 1` has no finite preimage and is a domain error; composite
/// pipelines clamp before calling.
pub fn gains_from_uniforms(u: &[f64], mean_gain: f64) -> Result<ChannelRealization> {
    if mean_gain <= 0.0 {
        return Err(Error::domain(format!("gains_from_uniforms: mean_gain={mean_gain} must be positive")));
    }
    let mut gains = Vec::with_capacity(u.len());
    for (i, &ui) in u.iter().enumerate() {
        if !(0.0..1.0).contains(&ui) {
            return Err(Error::domain(format!(
                "gains_from_uniforms: u[{i}]={ui} outside [0,1)"
            )));
        }
        gains.push(-mean_gain * (-ui).ln_1p());
    }
    Ok(ChannelRealization { gains })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid_2x2_spec(nu: f64) -> CopulaSpec {
        let grid = crate::channel::PortGrid::new(2, 2, 1.0, 1.0).unwrap();
        let field =
            crate::channel::build_correlation_matrix(&grid, crate::channel::DEFAULT_JITTER_LADDER)
                .unwrap();
        CopulaSpec::student_t(field.gain_correlation().unwrap(), nu).unwrap()
    }

    fn settings(seed: u64) -> MvtSettings {
        MvtSettings { seed, ..MvtSettings::default() }
    }

    #[test]
    fn copula_boundary_conditions() {
        let spec = CopulaSpec::student_t(CorrelationMatrix::equicorrelated(3, 0.4).unwrap(), 5.0)
            .unwrap();
        let s = settings(1);
        assert_eq!(copula_cdf(&[1.0, 1.0, 1.0], &spec, &s).unwrap().value, 1.0);
        assert_eq!(copula_cdf(&[0.3, 0.0, 0.9], &spec, &s).unwrap().value, 0.0);
        // all-but-one exhausted: C(u, 1, 1) = u exactly
        assert_eq!(copula_cdf(&[0.37, 1.0, 1.0], &spec, &s).unwrap().value, 0.37);
        assert!(copula_cdf(&[0.5, 0.5], &spec, &s).is_err());
        assert!(copula_cdf(&[0.5, 1.2, 0.1], &spec, &s).is_err());
    }

    #[test]
    fn bivariate_t_copula_matches_quadrature_oracle() {
        // frozen from 2-D quadrature of the copula density:
        // C(0.3, 0.7; nu=4, theta=0.6) = 0.2717340107069709 (+- 1e-12)
        let spec = CopulaSpec::student_t(CorrelationMatrix::equicorrelated(2, 0.6).unwrap(), 4.0)
            .unwrap();
        let r = copula_cdf(&[0.3, 0.7], &spec, &settings(21)).unwrap();
        let oracle = 0.2717340107069709;
        assert!(
            (r.value - oracle).abs() < (3.0 * r.std_error).max(1e-6),
            "value {} vs oracle {oracle} (se {})",
            r.value,
            r.std_error
        );
    }

    #[test]
    fn gain_cdf_zero_and_median() {
        let spec = grid_2x2_spec(40.0);
        let s = settings(2);
        assert_eq!(fas_gain_cdf(0.0, &spec, 1.0, &s).unwrap().value, 0.0);
        assert!(fas_gain_cdf(-0.1, &spec, 1.0, &s).is_err());
        // N = 1 collapses to the exponential marginal: median at g ln 2
        let one = CopulaSpec::student_t(CorrelationMatrix::identity(1), 40.0).unwrap();
        let mean_gain = 1.7;
        let r = fas_gain_cdf(mean_gain * std::f64::consts::LN_2, &one, mean_gain, &s).unwrap();
        assert!((r.value - 0.5).abs() < 1e-12);
        assert_eq!(r.std_error, 0.0);
    }

    #[test]
    fn gain_cdf_matches_copula_sampling_oracle() {
        // empirical CDF from the sampling pipeline, compared pointwise at
        // 20 gain quantiles with a two-sided binomial test at the 1% level
        let spec = grid_2x2_spec(40.0);
        let mean_gain = 1.0;
        let n = 2_000_000usize;
        let thresholds: Vec<f64> = (1..=20).map(|i| 0.25 * i as f64 * mean_gain).collect();
        let mut hits = vec![0u64; thresholds.len()];
        for u in sample_copula(&spec, n, 924).unwrap() {
            let clamped: Vec<f64> = u.iter().map(|v| v.min(1.0 - 1e-16)).collect();
            let gains = gains_from_uniforms(&clamped, mean_gain).unwrap().gains;
            let max = gains.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            for (h, &t) in hits.iter_mut().zip(thresholds.iter()) {
                if max <= t {
                    *h += 1;
                }
            }
        }
        let s = settings(8);
        let z01 = 2.5758293035489004; // two-sided 1% critical value
        for (&t, &h) in thresholds.iter().zip(hits.iter()) {
            let r = fas_gain_cdf(t, &spec, mean_gain, &s).unwrap();
            let p = r.value;
            let sigma = (p * (1.0 - p) / n as f64).sqrt();
            let emp = h as f64 / n as f64;
            assert!(
                (emp - p).abs() <= z01 * sigma + 3.0 * r.std_error + 1e-9,
                "g={t}: empirical {emp} vs analytic {p} (sigma {sigma:.2e})"
            );
        }
    }

    #[test]
    fn gain_pdf_exponential_case() {
        let one = CopulaSpec::student_t(CorrelationMatrix::identity(1), 40.0).unwrap();
        let mean_gain = 2.0;
        let s = settings(3);
        for g in [0.5, 1.0, 2.0, 5.0] {
            let pdf = fas_gain_pdf(g, &one, mean_gain, &s).unwrap();
            let exact = (-g / mean_gain).exp() / mean_gain;
            assert!(
                (pdf - exact).abs() / exact < 1e-6,
                "pdf({g}) = {pdf}, exact {exact}"
            );
        }
        assert!(fas_gain_pdf(0.0, &one, mean_gain, &s).is_err());
    }

    #[test]
    fn gain_pdf_integrates_to_one() {
        // composite Simpson over [0, 12 mean_gain] captures ~all mass;
        // coarse QMC settings keep this affordable (errors average out
        // across panels)
        let spec = grid_2x2_spec(40.0);
        let s = MvtSettings { qmc_points: 1024, shifts: 6, seed: 4, ..MvtSettings::default() };
        let mean_gain = 1.0;
        let panels = 60;
        let hmax = 12.0 * mean_gain;
        let h = hmax / panels as f64;
        let mut integral = 0.0;
        for i in 0..panels {
            let a = i as f64 * h + 1e-9;
            let m = a + 0.5 * h;
            let b = a + h;
            let fa = fas_gain_pdf(a, &spec, mean_gain, &s).unwrap();
            let fm = fas_gain_pdf(m, &spec, mean_gain, &s).unwrap();
            let fb = fas_gain_pdf(b, &spec, mean_gain, &s).unwrap();
            integral += h / 6.0 * (fa + 4.0 * fm + fb);
        }
        assert!((integral - 1.0).abs() < 1e-3, "pdf mass {integral}");
    }

    #[test]
    fn gain_pdf_matches_cdf_slope() {
        let spec = grid_2x2_spec(40.0);
        let s = settings(5);
        let g = 1.0;
        let pdf = fas_gain_pdf(g, &spec, 1.0, &s).unwrap();
        let h = 0.01;
        let hi = fas_gain_cdf(g + h, &spec, 1.0, &s).unwrap().value;
        let lo = fas_gain_cdf(g - h, &spec, 1.0, &s).unwrap().value;
        let slope = (hi - lo) / (2.0 * h);
        assert!(
            (pdf - slope).abs() < 5e-3 * pdf.max(slope),
            "pdf {pdf} vs coarse slope {slope}"
        );
    }

    #[test]
    fn mvt_density_kernel_vs_derivative_pdf() {
        // the literal elliptical-density kernel lacks the marginal Jacobian
        // factors; both must at least be positive and finite, and differ
        let spec = grid_2x2_spec(40.0);
        let s = settings(6);
        let g = 1.0;
        let kernel = fas_gain_mvt_density(g, &spec, 1.0).unwrap();
        let pdf = fas_gain_pdf(g, &spec, 1.0, &s).unwrap();
        assert!(kernel.is_finite() && kernel > 0.0);
        assert!(pdf.is_finite() && pdf > 0.0);
    }

    fn ks_statistic_uniform(sorted: &[f64]) -> f64 {
        let n = sorted.len() as f64;
        let mut d: f64 = 0.0;
        for (i, &u) in sorted.iter().enumerate() {
            d = d.max((u - i as f64 / n).abs()).max(((i + 1) as f64 / n - u).abs());
        }
        d
    }

    #[test]
    fn copula_sample_marginals_are_uniform() {
        let spec = grid_2x2_spec(4.0);
        let n = 1_000_000usize;
        let mut cols: Vec<Vec<f64>> = (0..4).map(|_| Vec::with_capacity(n)).collect();
        for u in sample_copula(&spec, n, 55).unwrap() {
            for (c, v) in cols.iter_mut().zip(u.iter()) {
                c.push(*v);
            }
        }
        let crit = 1.6276 / (n as f64).sqrt();
        for (i, mut col) in cols.into_iter().enumerate() {
            col.sort_by(f64::total_cmp);
            let d = ks_statistic_uniform(&col);
            assert!(d < crit, "marginal {i}: KS {d} above 1% critical {crit}");
        }
    }

    #[test]
    fn independent_gaussian_copula_has_zero_rank_correlation() {
        let spec = CopulaSpec::gaussian(CorrelationMatrix::identity(2));
        let n = 400_000usize;
        // Pearson on the uniforms = Spearman rank correlation of the pair
        let (mut sx, mut sy, mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for u in sample_copula(&spec, n, 77).unwrap() {
            sx += u[0];
            sy += u[1];
            sxx += u[0] * u[0];
            syy += u[1] * u[1];
            sxy += u[0] * u[1];
        }
        let nf = n as f64;
        let cov = sxy / nf - (sx / nf) * (sy / nf);
        let vx = sxx / nf - (sx / nf) * (sx / nf);
        let vy = syy / nf - (sy / nf) * (sy / nf);
        let r = cov / (vx * vy).sqrt();
        assert!(r.abs() < 0.005, "rank correlation {r} should be ~0");
    }

    /// O(n log n) Kendall tau via merge-sort inversion counting.
    fn kendall_tau(pairs: &mut [(f64, f64)]) -> f64 {
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut ys: Vec<f64> = pairs.iter().map(|p| p.1).collect();
        let n = ys.len() as u64;
        let inversions = count_inversions(&mut ys);
        let total = n * (n - 1) / 2;
        1.0 - 2.0 * inversions as f64 / total as f64
    }

    fn count_inversions(a: &mut [f64]) -> u64 {
        let n = a.len();
        if n <= 1 {
            return 0;
        }
        let mid = n / 2;
        let mut left = a[..mid].to_vec();
        let mut right = a[mid..].to_vec();
        let mut inv = count_inversions(&mut left) + count_inversions(&mut right);
        let (mut i, mut j) = (0, 0);
        for slot in a.iter_mut() {
            if i < left.len() && (j >= right.len() || left[i] <= right[j]) {
                *slot = left[i];
                i += 1;
            } else {
                inv += (left.len() - i) as u64;
                *slot = right[j];
                j += 1;
            }
        }
        inv
    }

    #[test]
    fn t_copula_kendall_tau_matches_arcsine_relation() {
        // elliptical copulas: tau = (2/pi) asin(theta); frozen:
        // (2/pi) asin(0.8) = 0.5903344706017332
        let spec = CopulaSpec::student_t(CorrelationMatrix::equicorrelated(2, 0.8).unwrap(), 4.0)
            .unwrap();
        let n = 120_000usize;
        let mut pairs: Vec<(f64, f64)> =
            sample_copula(&spec, n, 202).unwrap().map(|u| (u[0], u[1])).collect();
        let tau = kendall_tau(&mut pairs);
        assert!(
            (tau - 0.5903344706017332).abs() < 0.01,
            "kendall tau {tau} vs 0.59033"
        );
    }

    #[test]
    fn gains_from_uniforms_examples() {
        let r = gains_from_uniforms(&[0.0, 1.0 - (-1.0_f64).exp()], 1.0).unwrap();
        assert_eq!(r.gains[0], 0.0);
        assert!((r.gains[1] - 1.0).abs() < 1e-12);
        assert!(gains_from_uniforms(&[1.0], 1.0).is_err());
        assert!(gains_from_uniforms(&[0.5], 0.0).is_err());
    }

    #[test]
    fn transformed_sample_mean_is_mean_gain() {
        let spec = CopulaSpec::gaussian(CorrelationMatrix::identity(2));
        let mean_gain = 3.0;
        let n = 1_000_000usize;
        let mut sum = 0.0;
        for u in sample_copula(&spec, n, 31).unwrap() {
            let clamped: Vec<f64> = u.iter().map(|v| v.min(1.0 - 1e-16)).collect();
            sum += gains_from_uniforms(&clamped, mean_gain).unwrap().gains[0];
        }
        let m = sum / n as f64;
        // exponential sd = mean, so 5 sigma of the sample mean:
        let tol = 5.0 * mean_gain / (n as f64).sqrt();
        assert!((m - mean_gain).abs() < tol, "sample mean {m}");
    }

    #[test]
    fn perfect_dependence_collapses_to_marginal() {
        // all-ones dependence: the max of identical variables has the
        // marginal CDF itself
        let rows = vec![vec![1.0; 3]; 3];
        let sigma = CorrelationMatrix::from_rows(&rows, &[1e-10, 1e-6, 1e-4]).unwrap();
        let spec = CopulaSpec::student_t(sigma, 7.0).unwrap();
        let s = settings(9);
        for g in [0.2, 1.0, 3.0] {
            let r = fas_gain_cdf(g, &spec, 1.0, &s).unwrap();
            let marginal = -(-g / 1.0_f64).exp_m1();
            assert!(
                (r.value - marginal).abs() < (3.0 * r.std_error).max(2e-4),
                "g={g}: {} vs marginal {marginal} (se {:.2e})",
                r.value,
                r.std_error
            );
        }
    }

    #[test]
    fn gain_cdf_monotone_with_saturating_tail() {
        let spec = grid_2x2_spec(40.0);
        let s = settings(10);
        let mut prev = 0.0;
        for g in [0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0] {
            let v = fas_gain_cdf(g, &spec, 1.0, &s).unwrap().value;
            assert!(v >= prev - 1e-12, "not monotone at g={g}");
            prev = v;
        }
        let tail = fas_gain_cdf(50.0, &spec, 1.0, &s).unwrap().value;
        assert!(tail > 1.0 - 1e-6, "tail {tail}");
    }

    #[test]
    fn nu_limit_matches_gaussian_copula() {
        let grid = crate::channel::PortGrid::new(2, 2, 1.0, 1.0).unwrap();
        let field =
            crate::channel::build_correlation_matrix(&grid, crate::channel::DEFAULT_JITTER_LADDER)
                .unwrap();
        let sigma = field.gain_correlation().unwrap();
        let t_spec = CopulaSpec::student_t(sigma.clone(), 1e6).unwrap();
        let g_spec = CopulaSpec::gaussian(sigma);
        let s = settings(11);
        for u in [0.05, 0.3, 0.8] {
            let a = copula_cdf(&[u; 4], &t_spec, &s).unwrap().value;
            let b = copula_cdf(&[u; 4], &g_spec, &s).unwrap().value;
            assert!((a - b).abs() < 1e-4, "u={u}: t {a} vs gaussian {b}");
        }
    }

    #[test]
    fn sampling_is_seed_deterministic() {
        let spec = grid_2x2_spec(4.0);
        let a: Vec<_> = sample_copula(&spec, 8, 123).unwrap().collect();
        let b: Vec<_> = sample_copula(&spec, 8, 123).unwrap().collect();
        assert_eq!(a, b);
    }
}
