//! Frequentist tests of ordinal first-order stochastic dominance (SD1),
//! its negation, and single crossing, all in terms of
//! `θ_j = F_X(j) - F_Y(j)`.
//!
//! The SD1 null `θ <= 0` is tested with a moment-selection max-t test: the
//! statistic is `max_j t_j`, and the critical value is simulated from the
//! maximum over the inequalities with `t_j > -κ`, `κ = max(1, √(2 ln ln n̄))`,
//! treating those as binding. This stands in for refined moment selection.

use alloc::format;
use alloc::vec::Vec;

use crate::gauss::{correlation_from_sigma, simulate_statistic, SimConfig, Statistic};
use crate::math::{log, normal_quantile, sqrt};
use crate::sample::check_same_categories;
use crate::{Error, OrdinalCdf, Result, SymMatrix};

/// Null hypotheses about `X` relative to `Y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Hypothesis {
    /// `θ_j <= 0` for all `j`.
    Sd1,
    /// `θ_j > 0` for some `j`.
    NonSd1,
    /// `θ` changes sign once, from negative to positive.
    SingleCrossing,
}

/// One max-t test of `s ⊙ θ <= 0` for a fixed sign pattern `s`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MaxTTest {
    /// Crossing category for single-crossing subtests; 0 for plain SD1.
    pub k: usize,
    pub statistic: f64,
    pub critical_value: f64,
    pub reject: bool,
    /// 1-based categories whose inequality was kept by moment selection.
    pub selected: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TestReport {
    pub hypothesis: Hypothesis,
    pub alpha: f64,
    pub statistic: f64,
    pub critical_value: f64,
    pub reject: bool,
    /// `θ̂_j / se_j`; `±inf` (or 0) where the standard error vanishes.
    pub t_stats: Vec<f64>,
    pub selected_moments: Vec<usize>,
    pub per_k: Vec<MaxTTest>,
    pub kappa: Option<f64>,
}

/// Pooled covariance of `θ̂`: `Σ_X / n_X + Σ_Y / n_Y`.
fn pooled_covariance(cdf_x: &OrdinalCdf, cdf_y: &OrdinalCdf) -> SymMatrix {
    cdf_x.sigma().combine(1.0 / cdf_x.n(), cdf_y.sigma(), 1.0 / cdf_y.n())
}

fn t_stat(value: f64, var: f64) -> f64 {
    if var > 0.0 {
        value / sqrt(var)
    } else if value > 0.0 {
        f64::INFINITY
    } else if value < 0.0 {
        f64::NEG_INFINITY
    } else {
        0.0
    }
}

/// `θ̂` and its standardized components.
pub fn t_statistics(cdf_x: &OrdinalCdf, cdf_y: &OrdinalCdf) -> Result<Vec<f64>> {
    let th = crate::theta(cdf_x, cdf_y)?;
    let v = pooled_covariance(cdf_x, cdf_y);
    Ok(th.iter().enumerate().map(|(i, t)| t_stat(*t, v.get(i, i))).collect())
}

/// Moment-selection threshold `κ = max(1, √(2 ln ln n̄))`.
pub fn selection_threshold(n_bar: f64) -> f64 {
    let ll = if n_bar > core::f64::consts::E { log(log(n_bar)) } else { 0.0 };
    sqrt(2.0 * ll.max(0.0)).max(1.0)
}

fn max_t_test(
    values: &[f64],
    cov: &SymMatrix,
    kappa: f64,
    alpha: f64,
    cfg: &SimConfig,
    k: usize,
) -> Result<MaxTTest> {
    let t: Vec<f64> = values.iter().enumerate().map(|(i, v)| t_stat(*v, cov.get(i, i))).collect();
    let statistic = t.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let selected: Vec<usize> = (0..t.len()).filter(|&i| t[i] > -kappa).collect();
    let critical_value = if selected.is_empty() {
        f64::INFINITY
    } else {
        let corr = correlation_from_sigma(&cov.select(&selected))?;
        if corr.kept.is_empty() {
            0.0
        } else {
            simulate_statistic(&corr.matrix, &Statistic::Max, cfg.draws, cfg.seed)?.quantile(1.0 - alpha)
        }
    };
    Ok(MaxTTest {
        k,
        statistic,
        critical_value,
        reject: statistic > critical_value,
        selected: selected.iter().map(|i| i + 1).collect(),
    })
}

fn n_bar(cdf_x: &OrdinalCdf, cdf_y: &OrdinalCdf) -> f64 {
    cdf_x.n().min(cdf_y.n())
}

/// Moment-selection test of `H0: X SD1 Y` (`θ_j <= 0` for every `j`).
pub fn test_sd1(cdf_x: &OrdinalCdf, cdf_y: &OrdinalCdf, alpha: f64, cfg: &SimConfig) -> Result<TestReport> {
    check_same_categories(cdf_x, cdf_y)?;
    if !(alpha > 0.0 && alpha < 0.5) {
        return Err(Error::invalid(format!("alpha must lie in (0, 0.5), got {alpha}")));
    }
    cfg.validate()?;
    let th = crate::theta(cdf_x, cdf_y)?;
    let cov = pooled_covariance(cdf_x, cdf_y);
    let kappa = selection_threshold(n_bar(cdf_x, cdf_y));
    let sub = max_t_test(&th, &cov, kappa, alpha, cfg, 0)?;
    Ok(TestReport {
        hypothesis: Hypothesis::Sd1,
        alpha,
        statistic: sub.statistic,
        critical_value: sub.critical_value,
        reject: sub.reject,
        t_stats: t_statistics(cdf_x, cdf_y)?,
        selected_moments: sub.selected.clone(),
        per_k: Vec::new(),
        kappa: Some(kappa),
    })
}

/// Intersection–union test of `H0: X not SD1 Y`: rejects iff every
/// `t_j < -z_{1-α}`, i.e. iff `max_j t_j < -z_{1-α}`.
pub fn test_nonsd1(cdf_x: &OrdinalCdf, cdf_y: &OrdinalCdf, alpha: f64) -> Result<TestReport> {
    check_same_categories(cdf_x, cdf_y)?;
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::invalid(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    let t = t_statistics(cdf_x, cdf_y)?;
    let statistic = t.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let critical_value = -normal_quantile(1.0 - alpha);
    Ok(TestReport {
        hypothesis: Hypothesis::NonSd1,
        alpha,
        statistic,
        critical_value,
        reject: statistic < critical_value,
        t_stats: t,
        selected_moments: Vec::new(),
        per_k: Vec::new(),
        kappa: None,
    })
}

/// Two-step test of `H0: X SC Y`. For each crossing point `k = 1..J-2` the
/// null `θ_j < 0 (j <= k), θ_j > 0 (j > k)` is tested at level `α` with the
/// moment-selection max-t test on the sign-flipped `θ̂`; `H0` is rejected
/// iff every one of these is rejected.
///
/// The report's statistic is `min_k (T_k - c_k)` against critical value 0.
pub fn test_sc(cdf_x: &OrdinalCdf, cdf_y: &OrdinalCdf, alpha: f64, cfg: &SimConfig) -> Result<TestReport> {
    check_same_categories(cdf_x, cdf_y)?;
    let j = cdf_x.categories();
    if j < 3 {
        return Err(Error::invalid("single crossing needs at least 3 categories"));
    }
    if !(alpha > 0.0 && alpha < 0.5) {
        return Err(Error::invalid(format!("alpha must lie in (0, 0.5), got {alpha}")));
    }
    cfg.validate()?;
    let th = crate::theta(cdf_x, cdf_y)?;
    let cov = pooled_covariance(cdf_x, cdf_y);
    let kappa = selection_threshold(n_bar(cdf_x, cdf_y));
    let mut per_k = Vec::with_capacity(j - 2);
    for k in 1..=j - 2 {
        let signs: Vec<f64> = (1..j).map(|i| if i <= k { 1.0 } else { -1.0 }).collect();
        let values: Vec<f64> = th.iter().zip(&signs).map(|(t, s)| s * t).collect();
        per_k.push(max_t_test(&values, &cov.scale_by(&signs), kappa, alpha, &cfg.child(k as u64), k)?);
    }
    let statistic = per_k
        .iter()
        .map(|s| s.statistic - s.critical_value)
        .fold(f64::INFINITY, |m, v| if v.is_nan() { f64::NEG_INFINITY } else { m.min(v) });
    Ok(TestReport {
        hypothesis: Hypothesis::SingleCrossing,
        alpha,
        statistic,
        critical_value: 0.0,
        reject: per_k.iter().all(|s| s.reject),
        t_stats: t_statistics(cdf_x, cdf_y)?,
        selected_moments: Vec::new(),
        per_k,
        kappa: Some(kappa),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{estimate_cdf, OrdinalSample};
    use alloc::vec;

    fn cdf(v: &[f64], n: f64) -> OrdinalCdf {
        OrdinalCdf::from_values(v.to_vec(), n).unwrap()
    }

    fn cfg() -> SimConfig {
        SimConfig::new(20_000, 7)
    }

    const HIGH_EDU: [f64; 4] = [0.0161, 0.0734, 0.2957, 0.6427];
    const LOW_EDU: [f64; 4] = [0.0287, 0.1205, 0.3905, 0.6731];

    #[test]
    fn low_edu_sd1_rejected() {
        let r = test_sd1(&cdf(&LOW_EDU, 10_000.0), &cdf(&HIGH_EDU, 10_000.0), 0.05, &cfg()).unwrap();
        assert!(r.reject);
        assert!(r.statistic > r.critical_value);
    }

    #[test]
    fn high_edu_nonsd1_rejected() {
        let r = test_nonsd1(&cdf(&HIGH_EDU, 10_000.0), &cdf(&LOW_EDU, 10_000.0), 0.05).unwrap();
        assert!(r.reject);
        assert!(r.t_stats.iter().all(|t| *t < r.critical_value));
        let r = test_nonsd1(&cdf(&LOW_EDU, 10_000.0), &cdf(&HIGH_EDU, 10_000.0), 0.05).unwrap();
        assert!(!r.reject);
    }

    #[test]
    fn zero_theta_never_rejects() {
        let x = cdf(&[0.2, 0.5, 0.8], 500.0);
        let r = test_sd1(&x, &x, 0.05, &cfg()).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert!(r.critical_value > 0.0 && !r.reject);
        assert!(!test_sc(&x, &x, 0.05, &cfg()).unwrap().reject);
        assert!(!test_nonsd1(&x, &x, 0.05).unwrap().reject);
    }

    #[test]
    fn iut_threshold_arithmetic() {
        // J = 2 with se chosen so that t = -1.70
        let n = 1000.0;
        let fy: f64 = 0.5;
        let var = |f: f64| f * (1.0 - f) / n;
        // solve for fx by bisection: (fx - fy) / sqrt(var(fx) + var(fy)) = -1.70
        let (mut lo, mut hi) = (0.3, 0.5);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if (mid - fy) / sqrt(var(mid) + var(fy)) < -1.70 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let r = test_nonsd1(&cdf(&[lo], n), &cdf(&[fy], n), 0.05).unwrap();
        assert!((r.t_stats[0] + 1.70).abs() < 1e-9);
        assert!(r.reject);
        assert!((r.critical_value + 1.6448536269514722).abs() < 1e-12);
    }

    #[test]
    fn single_moment_critical_value_is_normal_quantile() {
        let x = cdf(&[0.5], 1000.0);
        let r = test_sd1(&x, &x, 0.05, &SimConfig::new(100_000, 3)).unwrap();
        // quantile of N(0,1) at 0.95: density 0.103, MC se ≈ sqrt(.95*.05/1e5)/0.103
        assert!((r.critical_value - 1.6448536269514722).abs() < 3.0 * 0.000689 / 0.1031);
    }

    #[test]
    fn slack_moments_are_dropped() {
        let x = cdf(&[0.1, 0.5], 2000.0);
        let y = cdf(&[0.3, 0.5], 2000.0);
        let r = test_sd1(&x, &y, 0.05, &cfg()).unwrap();
        assert_eq!(r.selected_moments, vec![2]);
    }

    #[test]
    fn zero_variance_t_stats() {
        let x = cdf(&[0.0, 0.5], 100.0);
        let y = cdf(&[0.0, 0.6], 100.0);
        let t = t_statistics(&x, &y).unwrap();
        assert_eq!(t[0], 0.0);
        let z = cdf(&[1.0, 1.0], 100.0);
        let w = cdf(&[0.0, 1.0], 100.0);
        assert_eq!(t_statistics(&z, &w).unwrap()[0], f64::INFINITY);
        assert_eq!(t_statistics(&w, &z).unwrap()[0], f64::NEG_INFINITY);
    }

    #[test]
    fn sc_double_crossing_rejected() {
        let x = cdf(&[0.2, 0.5, 0.7], 20_000.0);
        let y = cdf(&[0.25, 0.45, 0.75], 20_000.0);
        let r = test_sc(&x, &y, 0.05, &cfg()).unwrap();
        assert!(r.reject);
        assert_eq!(r.per_k.len(), 2);
        assert!(r.per_k.iter().all(|s| s.statistic > s.critical_value));
        assert!(r.statistic > 0.0);
    }

    #[test]
    fn sc_true_single_crossing_not_rejected() {
        let x = cdf(&[0.2, 0.45, 0.8], 20_000.0);
        let y = cdf(&[0.25, 0.5, 0.75], 20_000.0);
        let r = test_sc(&x, &y, 0.05, &cfg()).unwrap();
        assert!(!r.reject);
        assert!(!r.per_k[1].reject);
        assert!(test_sc(&cdf(&[0.4], 10.0), &cdf(&[0.5], 10.0), 0.05, &cfg()).is_err());
    }

    #[test]
    fn nonsd1_invariant_to_weight_scale() {
        let a = OrdinalSample::weighted("a", vec![10.0, 30.0, 60.0], 90, 150.0).unwrap();
        let b = OrdinalSample::weighted("b", vec![20.0, 30.0, 50.0], 95, 140.0).unwrap();
        let scale = |s: &OrdinalSample, c: f64| {
            OrdinalSample::weighted(
                "s",
                s.counts().iter().map(|v| v * c).collect(),
                s.n_raw(),
                s.weight_sq_sum().unwrap() * c * c,
            )
            .unwrap()
        };
        let r1 = test_nonsd1(&estimate_cdf(&a).unwrap(), &estimate_cdf(&b).unwrap(), 0.05).unwrap();
        let r2 = test_nonsd1(&estimate_cdf(&scale(&a, 3.7)).unwrap(), &estimate_cdf(&scale(&b, 3.7)).unwrap(), 0.05)
            .unwrap();
        assert_eq!(r1.reject, r2.reject);
        for (u, v) in r1.t_stats.iter().zip(&r2.t_stats) {
            assert!((u - v).abs() < 1e-9);
        }
    }

    #[test]
    fn kappa_floor() {
        assert_eq!(selection_threshold(5.0), 1.0);
        let k = selection_threshold(1000.0);
        assert!((k - sqrt(2.0 * log(log(1000.0)))).abs() < 1e-15);
    }
}
