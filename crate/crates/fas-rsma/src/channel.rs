//! Fluid-antenna port geometry, the Jakes spatial-correlation matrix, and
//! correlated Rayleigh / Rician channel generation for physical-model
//! validation.
//!
//! Ports live on an `n1 x n2` grid spanning `w1 x w2` wavelengths. Port
//! indices are 1-based and row-major with the second dimension fastest,
//! matching the Kronecker order of the steering vector. The field
//! correlation between two ports is `J0(2 pi d)` with `d` the normalized
//! separation; a dimension with a single port contributes zero separation
//! (a point antenna has no extent, which resolves the `N-1` denominator
//! degeneracy).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::numerics::linalg::cholesky_lower;
use crate::numerics::special::bessel_j0;

/// Default diagonal-regularization escalation ladder for nearly singular
/// correlation matrices (tiny apertures produce near-all-ones matrices).
pub const DEFAULT_JITTER_LADDER: &[f64] = &[1e-10, 1e-6, 1e-4];

/// 2D fluid-antenna port layout: `n1 x n2` ports over `w1 x w2` wavelengths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PortGrid {
    n1: u32,
    n2: u32,
    w1: f64,
    w2: f64,
}

impl PortGrid {
    pub fn new(n1: u32, n2: u32, w1: f64, w2: f64) -> Result<Self> {
        if n1 == 0 || n2 == 0 {
            return Err(Error::domain("PortGrid: port counts must be >= 1"));
        }
        if !(w1 >= 0.0 && w2 >= 0.0) {
            return Err(Error::domain(format!("PortGrid: apertures w1={w1}, w2={w2} must be >= 0")));
        }
        Ok(Self { n1, n2, w1, w2 })
    }

    /// Single fixed antenna (the TAS special case).
    pub fn single() -> Self {
        Self { n1: 1, n2: 1, w1: 0.0, w2: 0.0 }
    }

    pub fn n1(&self) -> u32 {
        self.n1
    }

    pub fn n2(&self) -> u32 {
        self.n2
    }

    pub fn w1(&self) -> f64 {
        self.w1
    }

    pub fn w2(&self) -> f64 {
        self.w2
    }

    pub fn total_ports(&self) -> u32 {
        self.n1 * self.n2
    }

    /// Normalized position of a 0-based per-dimension index: `k W / (N-1)`,
    /// zero when the dimension has a single port.
    fn coord(&self, dim1: bool, k: u32) -> f64 {
        let (n, w) = if dim1 { (self.n1, self.w1) } else { (self.n2, self.w2) };
        if n <= 1 {
            0.0
        } else {
            k as f64 * w / (n - 1) as f64
        }
    }
}

/// 1-based flat port index -> 1-based 2D indices, row-major with the
/// second dimension fastest.
pub fn port_to_2d(n: u32, grid: &PortGrid) -> Result<(u32, u32)> {
    if n == 0 || n > grid.total_ports() {
        return Err(Error::domain(format!(
            "port index {n} outside 1..={}",
            grid.total_ports()
        )));
    }
    let z = n - 1;
    Ok((z / grid.n2 + 1, z % grid.n2 + 1))
}

/// Inverse of [`port_to_2d`].
pub fn port_from_2d(idx: (u32, u32), grid: &PortGrid) -> Result<u32> {
    let (i, j) = idx;
    if i == 0 || i > grid.n1 || j == 0 || j > grid.n2 {
        return Err(Error::domain(format!(
            "2D port index ({i},{j}) outside ({},{})",
            grid.n1, grid.n2
        )));
    }
    Ok((i - 1) * grid.n2 + j)
}

/// Jakes field correlation between two ports:
/// `J0(2 pi sqrt(((dn1/(N1-1)) W1)^2 + ((dn2/(N2-1)) W2)^2))`.
pub fn spatial_correlation(grid: &PortGrid, n: u32, m: u32) -> Result<f64> {
    let (a1, a2) = port_to_2d(n, grid)?;
    let (b1, b2) = port_to_2d(m, grid)?;
    let d1 = grid.coord(true, a1.abs_diff(b1));
    let d2 = grid.coord(false, a2.abs_diff(b2));
    bessel_j0(2.0 * std::f64::consts::PI * d1.hypot(d2))
}

/// Symmetric unit-diagonal correlation matrix with positive-semidefiniteness
/// repair metadata.
///
/// The stored entries always have an exactly unit diagonal; `applied_jitter`
/// records the diagonal regularization needed for `entries + jitter * I` to
/// admit a Cholesky factorization (0 when none was needed).
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    dim: usize,
    entries: Vec<f64>,
    applied_jitter: f64,
}

impl CorrelationMatrix {
    /// Validates shape, exact symmetry, unit diagonal and entry range, then
    /// determines the jitter (from `ladder`, starting at zero) required for
    /// a successful factorization.
    pub fn from_rows(rows: &[Vec<f64>], ladder: &[f64]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::dimension("correlation matrix must be non-empty"));
        }
        let mut entries = vec![0.0; dim * dim];
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::dimension(format!(
                    "row {i} has length {}, expected {dim}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() || !(-1.0..=1.0).contains(&v) {
                    return Err(Error::domain(format!("entry ({i},{j})={v} outside [-1,1]")));
                }
                entries[i * dim + j] = v;
            }
        }
        for i in 0..dim {
            if entries[i * dim + i] != 1.0 {
                return Err(Error::domain(format!(
                    "diagonal entry ({i},{i})={} must be exactly 1",
                    entries[i * dim + i]
                )));
            }
            for j in 0..i {
                if entries[i * dim + j] != entries[j * dim + i] {
                    return Err(Error::domain(format!("entries ({i},{j}) and ({j},{i}) differ")));
                }
            }
        }
        Self::with_repair(dim, entries, ladder)
    }

    fn with_repair(dim: usize, entries: Vec<f64>, ladder: &[f64]) -> Result<Self> {
        let mut attempted = 0.0;
        for &jitter in std::iter::once(&0.0).chain(ladder.iter()) {
            attempted = jitter;
            if try_cholesky(dim, &entries, jitter).is_some() {
                return Ok(Self { dim, entries, applied_jitter: jitter });
            }
        }
        Err(Error::SingularMatrix { jitter: attempted })
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![0.0; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = 1.0;
        }
        Self { dim, entries, applied_jitter: 0.0 }
    }

    /// All off-diagonal entries equal to `rho`.
    pub fn equicorrelated(dim: usize, rho: f64) -> Result<Self> {
        let rows: Vec<Vec<f64>> = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { 1.0 } else { rho }).collect())
            .collect();
        Self::from_rows(&rows, DEFAULT_JITTER_LADDER)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.dim + j]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn applied_jitter(&self) -> f64 {
        self.applied_jitter
    }

    /// Principal submatrix on the kept indices (order defines the new
    /// ordering). Stays factorable with the same jitter.
    pub fn submatrix(&self, keep: &[usize]) -> CorrelationMatrix {
        let dim = keep.len();
        let mut entries = vec![0.0; dim * dim];
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                entries[a * dim + b] = self.entry(i, j);
            }
        }
        CorrelationMatrix { dim, entries, applied_jitter: self.applied_jitter }
    }

    /// Entry-wise square: the correlation of the channel *gains* implied by
    /// this field correlation. For jointly complex-Gaussian port envelopes
    /// with field correlation `rho`, the squared envelopes have correlation
    /// `rho^2`, and a copula is invariant under the monotone map
    /// `|h| -> |h|^2`, so elliptical-copula dependence parameters must be
    /// matched to this matrix rather than to the field correlation itself.
    /// PSD is preserved exactly (Schur product theorem), so the repair
    /// ladder rarely engages.
    pub fn gain_correlation(&self) -> Result<CorrelationMatrix> {
        let entries: Vec<f64> = self.entries.iter().map(|&v| v * v).collect();
        Self::with_repair(self.dim, entries, DEFAULT_JITTER_LADDER)
    }

    /// Lower Cholesky factor of `entries + (applied_jitter + extra) * I`,
    /// escalating to `extra` only if the recorded jitter no longer
    /// suffices. Fails with the attempted jitter on a singular matrix.
    pub(crate) fn repaired_cholesky(&self, extra: f64) -> Result<Vec<f64>> {
        if let Some(l) = try_cholesky(self.dim, &self.entries, self.applied_jitter) {
            return Ok(l);
        }
        let bumped = self.applied_jitter + extra;
        if extra > 0.0 {
            if let Some(l) = try_cholesky(self.dim, &self.entries, bumped) {
                return Ok(l);
            }
        }
        Err(Error::SingularMatrix { jitter: bumped })
    }
}

fn try_cholesky(dim: usize, entries: &[f64], jitter: f64) -> Option<Vec<f64>> {
    if jitter == 0.0 {
        return cholesky_lower(dim, entries);
    }
    let mut a = entries.to_vec();
    for i in 0..dim {
        a[i * dim + i] += jitter;
    }
    cholesky_lower(dim, &a)
}

/// Assembles the Jakes correlation matrix of a port grid, escalating
/// through `jitter_ladder` when the raw matrix fails to factor.
pub fn build_correlation_matrix(grid: &PortGrid, jitter_ladder: &[f64]) -> Result<CorrelationMatrix> {
    let dim = grid.total_ports() as usize;
    let mut entries = vec![0.0; dim * dim];
    for i in 0..dim {
        entries[i * dim + i] = 1.0;
        for j in 0..i {
            let v = spatial_correlation(grid, (i + 1) as u32, (j + 1) as u32)?;
            // mirror the same value: bit-exact symmetry
            entries[i * dim + j] = v;
            entries[j * dim + i] = v;
        }
    }
    CorrelationMatrix::with_repair(dim, entries, jitter_ladder)
}

/// Rician channel parameters: LoS component plus `num_paths` scattered
/// components with per-path angles of arrival.
#[derive(Debug, Clone, PartialEq)]
pub struct RiceChannelParams {
    /// Rice factor (>= 0); 0 recovers Rayleigh scattering.
    pub rice_factor: f64,
    /// Phase of the LoS component, radians.
    pub los_phase: f64,
    /// LoS azimuth / elevation, radians.
    pub los_azimuth: f64,
    pub los_elevation: f64,
    /// Scattered-path angles; both vectors must have length `num_paths`.
    pub azimuths: Vec<f64>,
    pub elevations: Vec<f64>,
}

impl RiceChannelParams {
    pub fn validate(&self) -> Result<()> {
        if self.rice_factor < 0.0 {
            return Err(Error::domain(format!(
                "rice_factor={} must be >= 0",
                self.rice_factor
            )));
        }
        if self.azimuths.is_empty() {
            return Err(Error::domain("at least one scattered path is required"));
        }
        if self.azimuths.len() != self.elevations.len() {
            return Err(Error::dimension(format!(
                "azimuths ({}) and elevations ({}) differ in length",
                self.azimuths.len(),
                self.elevations.len()
            )));
        }
        Ok(())
    }

    pub fn num_paths(&self) -> usize {
        self.azimuths.len()
    }
}

/// Per-port channel gains `g_n = |h_n|^2` of one realization.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub gains: Vec<f64>,
}

/// Receive steering vector of the grid toward (azimuth, elevation): unit
/// modulus phases `exp(j 2 pi (x sin(az) cos(el) + y sin(az) sin(el)))`
/// with (x, y) the normalized port position, in Kronecker (dim-2-fastest)
/// order.
pub fn steering_vector(grid: &PortGrid, azimuth: f64, elevation: f64) -> Vec<(f64, f64)> {
    let u = azimuth.sin() * elevation.cos();
    let v = azimuth.sin() * elevation.sin();
    let total = grid.total_ports() as usize;
    let mut out = Vec::with_capacity(total);
    for a in 0..grid.n1 {
        for b in 0..grid.n2 {
            let phase =
                2.0 * std::f64::consts::PI * (grid.coord(true, a) * u + grid.coord(false, b) * v);
            out.push((phase.cos(), phase.sin()));
        }
    }
    out
}

/// Correlated Rayleigh gain sampler: complex circular Gaussians with
/// per-real-component covariance `sigma/2`, scaled so `E[|h|^2] = mean_gain`.
pub struct RayleighGainSampler {
    dim: usize,
    chol: Vec<f64>,
    amplitude: f64,
    rng: ChaCha8Rng,
    scratch: Vec<f64>,
}

impl RayleighGainSampler {
    pub fn new(sigma: &CorrelationMatrix, mean_gain: f64, seed: u64) -> Result<Self> {
        if mean_gain <= 0.0 {
            return Err(Error::domain(format!("mean_gain={mean_gain} must be positive")));
        }
        Ok(Self {
            dim: sigma.dim(),
            chol: sigma.repaired_cholesky(0.0)?,
            amplitude: (0.5 * mean_gain).sqrt(),
            rng: ChaCha8Rng::seed_from_u64(seed),
            scratch: vec![0.0; 2 * sigma.dim()],
        })
    }

    /// Real and imaginary component vectors of one field realization.
    pub fn sample_field(&mut self) -> (Vec<f64>, Vec<f64>) {
        let n = self.dim;
        for z in self.scratch.iter_mut() {
            *z = StandardNormal.sample(&mut self.rng);
        }
        let mut re = vec![0.0; n];
        let mut im = vec![0.0; n];
        for i in 0..n {
            let mut sr = 0.0;
            let mut si = 0.0;
            for k in 0..=i {
                let c = self.chol[i * n + k];
                sr += c * self.scratch[k];
                si += c * self.scratch[n + k];
            }
            re[i] = self.amplitude * sr;
            im[i] = self.amplitude * si;
        }
        (re, im)
    }

    pub fn sample(&mut self) -> ChannelRealization {
        let (re, im) = self.sample_field();
        ChannelRealization {
            gains: re.iter().zip(im.iter()).map(|(r, i)| r * r + i * i).collect(),
        }
    }
}

impl Iterator for RayleighGainSampler {
    type Item = ChannelRealization;

    fn next(&mut self) -> Option<ChannelRealization> {
        Some(self.sample())
    }
}

/// Stream of `count` correlated Rayleigh realizations; deterministic given
/// the seed. Blocks seeded via `mix_seed(seed, block)` give independent
/// substreams for deterministic parallel sampling.
pub fn generate_rayleigh_gains(
    sigma: &CorrelationMatrix,
    mean_gain: f64,
    count: usize,
    seed: u64,
) -> Result<impl Iterator<Item = ChannelRealization>> {
    Ok(RayleighGainSampler::new(sigma, mean_gain, seed)?.take(count))
}

/// Rician sampler: deterministic LoS steering plus CLT sum of scattered
/// steering vectors with i.i.d. standard complex Gaussian coefficients.
pub struct RiceChannelSampler {
    los: Vec<(f64, f64)>,
    scattered: Vec<Vec<(f64, f64)>>,
    los_amp: f64,
    scatter_amp: f64,
    los_phase: (f64, f64),
    rng: ChaCha8Rng,
}

impl RiceChannelSampler {
    pub fn new(grid: &PortGrid, params: &RiceChannelParams, seed: u64) -> Result<Self> {
        params.validate()?;
        let k = params.rice_factor;
        let paths = params.num_paths() as f64;
        let scattered = params
            .azimuths
            .iter()
            .zip(params.elevations.iter())
            .map(|(&az, &el)| steering_vector(grid, az, el))
            .collect();
        Ok(Self {
            los: steering_vector(grid, params.los_azimuth, params.los_elevation),
            scattered,
            los_amp: (k / (k + 1.0)).sqrt(),
            scatter_amp: (1.0 / (paths * (k + 1.0))).sqrt(),
            los_phase: (params.los_phase.cos(), params.los_phase.sin()),
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }

    pub fn sample(&mut self) -> ChannelRealization {
        let n = self.los.len();
        let mut re = vec![0.0; n];
        let mut im = vec![0.0; n];
        // LoS: sqrt(K/(K+1)) e^{j omega} a(theta0, psi0)
        for i in 0..n {
            let (ar, ai) = self.los[i];
            re[i] = self.los_amp * (self.los_phase.0 * ar - self.los_phase.1 * ai);
            im[i] = self.los_amp * (self.los_phase.0 * ai + self.los_phase.1 * ar);
        }
        // scattered: sqrt(1/(L(K+1))) sum_l kappa_l a(theta_l, psi_l)
        for a in &self.scattered {
            let kr: f64 = StandardNormal.sample(&mut self.rng);
            let ki: f64 = StandardNormal.sample(&mut self.rng);
            // unit-variance complex Gaussian: (kr + j ki)/sqrt(2)
            let (kr, ki) = (kr / std::f64::consts::SQRT_2, ki / std::f64::consts::SQRT_2);
            for i in 0..n {
                let (ar, ai) = a[i];
                re[i] += self.scatter_amp * (kr * ar - ki * ai);
                im[i] += self.scatter_amp * (kr * ai + ki * ar);
            }
        }
        ChannelRealization {
            gains: re.iter().zip(im.iter()).map(|(r, i)| r * r + i * i).collect(),
        }
    }
}

impl Iterator for RiceChannelSampler {
    type Item = ChannelRealization;

    fn next(&mut self) -> Option<ChannelRealization> {
        Some(self.sample())
    }
}

/// Stream of `count` Rician realizations per the grid's steering structure.
pub fn generate_rice_channel(
    grid: &PortGrid,
    params: &RiceChannelParams,
    count: usize,
    seed: u64,
) -> Result<impl Iterator<Item = ChannelRealization>> {
    Ok(RiceChannelSampler::new(grid, params, seed)?.take(count))
}


#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn port_round_trip(n1 in 1u32..12, n2 in 1u32..12, k in 0u32..144) {
            let g = PortGrid::new(n1, n2, 1.0, 1.0).unwrap();
            let n = k % g.total_ports() + 1;
            let idx = port_to_2d(n, &g).unwrap();
            prop_assert_eq!(port_from_2d(idx, &g).unwrap(), n);
        }

        #[test]
        fn correlation_symmetric_and_bounded(n1 in 1u32..5, n2 in 1u32..5, w in 0.0f64..3.0) {
            let g = PortGrid::new(n1, n2, w, w).unwrap();
            for n in 1..=g.total_ports() {
                for m in 1..=g.total_ports() {
                    let a = spatial_correlation(&g, n, m).unwrap();
                    let b = spatial_correlation(&g, m, n).unwrap();
                    prop_assert_eq!(a, b);
                    prop_assert!(a.abs() <= 1.0 + 1e-12);
                }
            }
        }
    }
}
