//! Simulated quantiles of extreme-value functionals of correlated standard
//! normal vectors, which calibrate the confidence limits and the
//! moment-selection tests.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::math::{normal_cdf, sorted_quantile, sqrt};
use crate::par::{derive_seed, map_indexed, substream};
use crate::{Error, OrdinalCdf, Result, SymMatrix};

/// Draws per RNG substream.
const CHUNK: usize = 4096;

pub const DEFAULT_DRAWS: usize = 100_000;
pub const MIN_DRAWS: usize = 1000;

/// Functional applied to each simulated vector `Z`.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Statistic {
    Min,
    Max,
    MaxAbs,
    /// `max_i s_i Z_i` with every `s_i` equal to `+1` or `-1`.
    MaxSigned(Vec<i8>),
}

impl Statistic {
    fn apply(&self, z: &[f64]) -> f64 {
        match self {
            Statistic::Min => z.iter().copied().fold(f64::INFINITY, f64::min),
            Statistic::Max => z.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            Statistic::MaxAbs => z.iter().fold(f64::NEG_INFINITY, |m, v| m.max(v.abs())),
            Statistic::MaxSigned(s) => z
                .iter()
                .zip(s)
                .fold(f64::NEG_INFINITY, |m, (v, s)| m.max(f64::from(*s) * v)),
        }
    }

    fn validate(&self, dim: usize) -> Result<()> {
        if let Statistic::MaxSigned(s) = self {
            if s.len() != dim {
                return Err(Error::invalid(format!("sign vector has {} entries for dimension {dim}", s.len())));
            }
            if s.iter().any(|v| *v != 1 && *v != -1) {
                return Err(Error::invalid("sign vector entries must be +1 or -1"));
            }
        }
        Ok(())
    }

    /// Same statistic on the coordinates `idx`.
    fn restrict(&self, idx: &[usize]) -> Statistic {
        match self {
            Statistic::MaxSigned(s) => Statistic::MaxSigned(idx.iter().map(|&i| s[i]).collect()),
            other => other.clone(),
        }
    }
}

/// Number of simulation draws and the base seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SimConfig {
    pub draws: usize,
    pub seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig { draws: DEFAULT_DRAWS, seed: 0 }
    }
}

impl SimConfig {
    pub fn new(draws: usize, seed: u64) -> Self {
        SimConfig { draws, seed }
    }

    pub fn validate(&self) -> Result<()> {
        if self.draws < MIN_DRAWS {
            return Err(Error::invalid(format!("draws must be at least {MIN_DRAWS}, got {}", self.draws)));
        }
        Ok(())
    }

    /// Independent child configuration for sub-analysis `tag`.
    pub fn child(&self, tag: u64) -> SimConfig {
        SimConfig { draws: self.draws, seed: derive_seed(self.seed, tag) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CritValConfig {
    pub draws: usize,
    pub seed: u64,
    pub statistic: Statistic,
}

/// Correlation matrix of the non-degenerate coordinates of a covariance.
#[derive(Debug, Clone, PartialEq)]
pub struct Correlation {
    pub matrix: SymMatrix,
    /// Original indices (0-based) of the coordinates kept in `matrix`.
    pub kept: Vec<usize>,
    /// Zero-variance coordinates; their standardized limits cover with
    /// probability one and need no simulation.
    pub dropped: Vec<usize>,
}

/// `R_jk = Σ_jk / √(Σ_jj Σ_kk)` over coordinates with positive variance.
pub fn correlation_from_sigma(sigma: &SymMatrix) -> Result<Correlation> {
    let scale = sigma.diagonal().iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
    if !sigma.is_symmetric(1e-12 * scale) {
        return Err(Error::NotPositiveSemidefinite("covariance matrix is not symmetric".into()));
    }
    let mut kept = Vec::new();
    let mut dropped = Vec::new();
    for (i, d) in sigma.diagonal().into_iter().enumerate() {
        if d < -1e-10 || d.is_nan() {
            return Err(Error::NotPositiveSemidefinite(format!("negative variance {d} at index {i}")));
        }
        if d > 0.0 {
            kept.push(i);
        } else {
            dropped.push(i);
        }
    }
    let sub = sigma.select(&kept);
    let inv_sd: Vec<f64> = sub.diagonal().iter().map(|d| 1.0 / sqrt(*d)).collect();
    let mut r = sub.scale_by(&inv_sd);
    for i in 0..r.dim() {
        r.set(i, i, 1.0);
        for j in 0..i {
            let v = r.get(i, j);
            if v.abs() > 1.0 + 1e-8 {
                return Err(Error::NotPositiveSemidefinite(format!("correlation {v} exceeds 1 in magnitude")));
            }
        }
    }
    if r.dim() > 0 {
        r.cholesky_jittered()?;
    }
    Ok(Correlation { matrix: r, kept, dropped })
}

/// Sorted simulated values of a statistic, ready for quantile lookups. One
/// instance serves every quantile level of an analysis (common random
/// numbers).
#[derive(Debug, Clone)]
pub struct StatisticDraws {
    sorted: Vec<f64>,
}

impl StatisticDraws {
    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    /// Empirical `p`-quantile of the raw statistic.
    pub fn quantile(&self, p: f64) -> f64 {
        sorted_quantile(&self.sorted, p)
    }

    /// Empirical `p`-quantile of `Φ(statistic)`.
    pub fn phi_quantile(&self, p: f64) -> f64 {
        normal_cdf(self.quantile(p))
    }
}

/// Draws `Z ~ N(0, R)` via Cholesky and collects `statistic(Z)`.
///
/// Draw `i` comes from RNG substream `i / 4096` of `seed`, so the output is
/// independent of how the work is scheduled.
pub fn simulate_statistic(
    r: &SymMatrix,
    statistic: &Statistic,
    draws: usize,
    seed: u64,
) -> Result<StatisticDraws> {
    let dim = r.dim();
    if dim == 0 {
        return Err(Error::invalid("cannot simulate a zero-dimensional statistic"));
    }
    if draws == 0 {
        return Err(Error::invalid("draws must be positive"));
    }
    if (0..dim).any(|i| (r.get(i, i) - 1.0).abs() > 1e-8) {
        return Err(Error::invalid("correlation matrix must have a unit diagonal"));
    }
    statistic.validate(dim)?;
    let chol = r.cholesky_jittered()?;
    let chunks = draws.div_ceil(CHUNK);
    let parts = map_indexed(chunks, |c| {
        let mut rng = substream(seed, c as u64);
        let count = CHUNK.min(draws - c * CHUNK);
        let mut z = vec![0.0; dim];
        let mut x = vec![0.0; dim];
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            for zi in z.iter_mut() {
                *zi = rng.sample(StandardNormal);
            }
            chol.mul_into(&z, &mut x);
            out.push(statistic.apply(&x));
        }
        out
    });
    let mut sorted: Vec<f64> = parts.into_iter().flatten().collect();
    sorted.sort_unstable_by(f64::total_cmp);
    Ok(StatisticDraws { sorted })
}

/// Simulated `p`-quantile of `Φ(s(Z))`, `Z ~ N(0, R)`.
pub fn simulate_phi_quantile(r: &SymMatrix, cfg: &CritValConfig, p: f64) -> Result<f64> {
    check_prob(p)?;
    SimConfig::new(cfg.draws, cfg.seed).validate()?;
    Ok(simulate_statistic(r, &cfg.statistic, cfg.draws, cfg.seed)?.phi_quantile(p))
}

fn check_prob(p: f64) -> Result<()> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::invalid(format!("probability must lie in (0, 1), got {p}")));
    }
    Ok(())
}

/// Raw `p`-quantile of `statistic` applied to the standardized estimator of
/// a covariance, after dropping zero-variance coordinates. `None` when every
/// coordinate is degenerate.
pub(crate) fn standardized_quantile(
    sigma: &SymMatrix,
    statistic: &Statistic,
    p: f64,
    cfg: &SimConfig,
) -> Result<Option<f64>> {
    let corr = correlation_from_sigma(sigma)?;
    if corr.kept.is_empty() {
        return Ok(None);
    }
    let stat = statistic.restrict(&corr.kept);
    Ok(Some(simulate_statistic(&corr.matrix, &stat, cfg.draws, cfg.seed)?.quantile(p)))
}

/// Critical levels of one confidence-set method together with the normal
/// multipliers applied to the standard errors of each group.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CriticalValues {
    pub tilde_alpha: f64,
    pub tilde_beta: f64,
    /// Multiplier for the `X` limits (`z_{1-α̃}`, or `z_{1-α̃/2}` for the
    /// two-sided method).
    pub z_x: f64,
    pub z_y: f64,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::invalid(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    Ok(())
}

// An all-degenerate side covers with probability one for any multiplier; use 0.
fn or_zero(q: Option<f64>) -> f64 {
    q.unwrap_or(0.0)
}

/// One-sided levels for the between-group set: `α̃` is the `1 - √(1-α)`
/// quantile of `Φ(min_j t_X(j))`, `1 - β̃` the `√(1-α)` quantile of
/// `Φ(max_j t_Y(j))`.
pub fn critvals_method1(
    cdf_x: &OrdinalCdf,
    cdf_y: &OrdinalCdf,
    alpha: f64,
    cfg: &SimConfig,
) -> Result<CriticalValues> {
    check_alpha(alpha)?;
    cfg.validate()?;
    let root = sqrt(1.0 - alpha);
    let qx = or_zero(standardized_quantile(cdf_x.sigma(), &Statistic::Min, 1.0 - root, &cfg.child(1))?);
    let qy = or_zero(standardized_quantile(cdf_y.sigma(), &Statistic::Max, root, &cfg.child(2))?);
    Ok(CriticalValues { tilde_alpha: normal_cdf(qx), tilde_beta: 1.0 - normal_cdf(qy), z_x: -qx, z_y: qy })
}

/// Levels for a fixed pair `j < k` (1-based): `1 - α̃` is the `√(1-α)`
/// quantile of `Φ(max{-t_X(j), t_X(k)})`, and `1 - β̃` that of
/// `Φ(max{t_Y(j), -t_Y(k)})`.
pub fn critvals_method2(
    cdf_x: &OrdinalCdf,
    cdf_y: &OrdinalCdf,
    j: usize,
    k: usize,
    alpha: f64,
    cfg: &SimConfig,
) -> Result<CriticalValues> {
    check_alpha(alpha)?;
    cfg.validate()?;
    crate::sample::check_same_categories(cdf_x, cdf_y)?;
    crate::identify::check_pair(cdf_x.categories(), j, k)?;
    let root = sqrt(1.0 - alpha);
    let idx = [j - 1, k - 1];
    let sx = cdf_x.sigma().select(&idx);
    let sy = cdf_y.sigma().select(&idx);
    let qx = or_zero(standardized_quantile(&sx, &Statistic::MaxSigned(vec![-1, 1]), root, &cfg.child(1))?);
    let qy = or_zero(standardized_quantile(&sy, &Statistic::MaxSigned(vec![1, -1]), root, &cfg.child(2))?);
    Ok(CriticalValues { tilde_alpha: 1.0 - normal_cdf(qx), tilde_beta: 1.0 - normal_cdf(qy), z_x: qx, z_y: qy })
}

/// Two-sided levels: `1 - α̃/2` is the `√(1-α)` quantile of
/// `Φ(max_j |t_X(j)|)`, likewise `1 - β̃/2` for `Y`.
pub fn critvals_method3(
    cdf_x: &OrdinalCdf,
    cdf_y: &OrdinalCdf,
    alpha: f64,
    cfg: &SimConfig,
) -> Result<CriticalValues> {
    check_alpha(alpha)?;
    cfg.validate()?;
    let root = sqrt(1.0 - alpha);
    let qx = or_zero(standardized_quantile(cdf_x.sigma(), &Statistic::MaxAbs, root, &cfg.child(1))?);
    let qy = or_zero(standardized_quantile(cdf_y.sigma(), &Statistic::MaxAbs, root, &cfg.child(2))?);
    Ok(CriticalValues {
        tilde_alpha: 2.0 * (1.0 - normal_cdf(qx)),
        tilde_beta: 2.0 * (1.0 - normal_cdf(qy)),
        z_x: qx,
        z_y: qy,
    })
}
