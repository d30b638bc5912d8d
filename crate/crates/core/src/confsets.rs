//! Inner confidence sets: data-driven sets contained in the identified set
//! with asymptotic probability at least `1 - α`.
//!
//! Each method first builds joint confidence limits for the two ordinal
//! CDFs, at level `√(1-α)` per group, then forms the identified set implied
//! by the least favourable CDFs within those limits. Limits are compared
//! unclamped; only the resulting intervals are clipped to `(0, 1]`.

use alloc::vec;
use alloc::vec::Vec;

use crate::gauss::{critvals_method1, critvals_method2, critvals_method3, CriticalValues, SimConfig};
use crate::identify::pairwise_rects;
use crate::sample::check_same_categories;
use crate::{Interval, OrdinalCdf, QuantileSet, Rect, RectSet, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum CsMethod {
    /// Between-group set, one-sided limits.
    Between,
    /// Within-group rectangle for a fixed 1-based category pair `j < k`.
    WithinFixed { j: usize, k: usize },
    /// Within-group set over all pairs, two-sided limits.
    WithinAll,
}

/// Why a candidate piece of the set is (or is not) present.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum PieceStatus {
    /// The point estimates do not order the CDFs the required way.
    NoEvidence,
    /// The point estimates do, but the confidence limits overlap.
    LimitsCrossed,
    Nonempty,
}

/// Confidence limits behind an inner confidence set.
///
/// Vectors are indexed by category `j - 1`; `None` marks limits the method
/// does not use.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConfLimits {
    pub method: CsMethod,
    pub alpha: f64,
    pub critical: CriticalValues,
    pub x_upper: Vec<Option<f64>>,
    pub x_lower: Vec<Option<f64>>,
    pub y_upper: Vec<Option<f64>>,
    pub y_lower: Vec<Option<f64>>,
    /// Status of each `(Ĉ_XU(j), Ĉ_YL(j)]` piece.
    pub x_status: Vec<Option<PieceStatus>>,
    /// Status of each `(Ĉ_YU(k), Ĉ_XL(k)]` piece.
    pub y_status: Vec<Option<PieceStatus>>,
    /// Set when a simulated level put a normal multiplier below zero (very
    /// small samples); the limits then sit on the wrong side of the
    /// estimates and the set is usually empty.
    pub inverted_levels: bool,
}

/// An inner confidence set with the limits used to build it.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct InnerSet<S> {
    pub set: S,
    pub limits: ConfLimits,
}

fn shifted(cdf: &OrdinalCdf, j: usize, z: f64) -> f64 {
    let var = cdf.sigma().get(j - 1, j - 1);
    if var > 0.0 {
        cdf.at(j) + z * cdf.std_error(j)
    } else {
        // zero variance: the limit equals the estimate whatever the multiplier
        cdf.at(j)
    }
}

/// Piece `(lo, hi]` from raw limits, with its status. `evidence` reports
/// whether the point estimates already order the CDFs.
fn piece(lo: f64, hi: f64, evidence: bool) -> (Option<Interval>, PieceStatus) {
    if !evidence {
        return (None, PieceStatus::NoEvidence);
    }
    match (lo < hi).then(|| Interval::clamped(lo, hi)).flatten() {
        Some(iv) => (Some(iv), PieceStatus::Nonempty),
        None => (None, PieceStatus::LimitsCrossed),
    }
}

fn blank(method: CsMethod, alpha: f64, critical: CriticalValues, m: usize) -> ConfLimits {
    ConfLimits {
        method,
        alpha,
        critical,
        x_upper: vec![None; m],
        x_lower: vec![None; m],
        y_upper: vec![None; m],
        y_lower: vec![None; m],
        x_status: vec![None; m],
        y_status: vec![None; m],
        inverted_levels: critical.z_x < 0.0 || critical.z_y < 0.0,
    }
}

/// Inner confidence set for the between-group set `T_X`: the union of
/// `(Ĉ_XU(j), Ĉ_YL(j)]` over `j` with `Ĉ_XU(j) < Ĉ_YL(j)`.
pub fn cs_between(
    cdf_x: &OrdinalCdf,
    cdf_y: &OrdinalCdf,
    alpha: f64,
    cfg: &SimConfig,
) -> Result<InnerSet<QuantileSet>> {
    check_same_categories(cdf_x, cdf_y)?;
    let cv = critvals_method1(cdf_x, cdf_y, alpha, cfg)?;
    Ok(between_from_critvals(cdf_x, cdf_y, alpha, cv))
}

pub(crate) fn between_from_critvals(
    cdf_x: &OrdinalCdf,
    cdf_y: &OrdinalCdf,
    alpha: f64,
    cv: CriticalValues,
) -> InnerSet<QuantileSet> {
    let m = cdf_x.categories() - 1;
    let mut limits = blank(CsMethod::Between, alpha, cv, m);
    let mut pieces = Vec::new();
    for j in 1..=m {
        let xu = shifted(cdf_x, j, cv.z_x);
        let yl = shifted(cdf_y, j, -cv.z_y);
        let (iv, status) = piece(xu, yl, cdf_x.at(j) < cdf_y.at(j));
        limits.x_upper[j - 1] = Some(xu);
        limits.y_lower[j - 1] = Some(yl);
        limits.x_status[j - 1] = Some(status);
        pieces.extend(iv);
    }
    InnerSet { set: QuantileSet::from_intervals(pieces), limits }
}

/// Inner confidence set for `T_Xj × T_Yk` at a fixed pair `j < k`:
/// `(Ĉ_XU(j), Ĉ_YL(j)] × (Ĉ_YU(k), Ĉ_XL(k)]`, empty unless both sides are.
pub fn cs_within_fixed(
    cdf_x: &OrdinalCdf,
    cdf_y: &OrdinalCdf,
    j: usize,
    k: usize,
    alpha: f64,
    cfg: &SimConfig,
) -> Result<InnerSet<RectSet>> {
    let cv = critvals_method2(cdf_x, cdf_y, j, k, alpha, cfg)?;
    let m = cdf_x.categories() - 1;
    let mut limits = blank(CsMethod::WithinFixed { j, k }, alpha, cv, m);
    let xu = shifted(cdf_x, j, cv.z_x);
    let yl = shifted(cdf_y, j, -cv.z_y);
    let xl = shifted(cdf_x, k, -cv.z_x);
    let yu = shifted(cdf_y, k, cv.z_y);
    let (first, s1) = piece(xu, yl, cdf_x.at(j) < cdf_y.at(j));
    let (second, s2) = piece(yu, xl, cdf_y.at(k) < cdf_x.at(k));
    limits.x_upper[j - 1] = Some(xu);
    limits.y_lower[j - 1] = Some(yl);
    limits.x_lower[k - 1] = Some(xl);
    limits.y_upper[k - 1] = Some(yu);
    limits.x_status[j - 1] = Some(s1);
    limits.y_status[k - 1] = Some(s2);
    let set = match (first, second) {
        (Some(x), Some(y)) => RectSet::from_rects([Rect { x, y }]),
        _ => RectSet::empty(),
    };
    Ok(InnerSet { set, limits })
}

/// Inner confidence set for `∪_{j<k} T_Xj × T_Yk` from two-sided limits.
pub fn cs_within_all(
    cdf_x: &OrdinalCdf,
    cdf_y: &OrdinalCdf,
    alpha: f64,
    cfg: &SimConfig,
) -> Result<InnerSet<RectSet>> {
    check_same_categories(cdf_x, cdf_y)?;
    let cv = critvals_method3(cdf_x, cdf_y, alpha, cfg)?;
    let m = cdf_x.categories() - 1;
    let mut limits = blank(CsMethod::WithinAll, alpha, cv, m);
    let mut xs = Vec::with_capacity(m);
    let mut ys = Vec::with_capacity(m);
    for j in 1..=m {
        let xu = shifted(cdf_x, j, cv.z_x);
        let xl = shifted(cdf_x, j, -cv.z_x);
        let yu = shifted(cdf_y, j, cv.z_y);
        let yl = shifted(cdf_y, j, -cv.z_y);
        let (px, sx) = piece(xu, yl, cdf_x.at(j) < cdf_y.at(j));
        let (py, sy) = piece(yu, xl, cdf_y.at(j) < cdf_x.at(j));
        limits.x_upper[j - 1] = Some(xu);
        limits.x_lower[j - 1] = Some(xl);
        limits.y_upper[j - 1] = Some(yu);
        limits.y_lower[j - 1] = Some(yl);
        limits.x_status[j - 1] = Some(sx);
        limits.y_status[j - 1] = Some(sy);
        xs.push(px);
        ys.push(py);
    }
    Ok(InnerSet { set: pairwise_rects(&xs, &ys), limits })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identify::{between_set, within_all_set, within_pair_sets};

    fn cdf(v: &[f64], n: f64) -> OrdinalCdf {
        OrdinalCdf::from_values(v.to_vec(), n).unwrap()
    }

    fn cfg() -> SimConfig {
        SimConfig::new(20_000, 42)
    }

    #[test]
    fn identical_samples_give_empty_sets() {
        let x = cdf(&[0.2, 0.5, 0.8], 400.0);
        let b = cs_between(&x, &x, 0.1, &cfg()).unwrap();
        assert!(b.set.is_empty());
        assert!(b.limits.x_status.iter().all(|s| *s == Some(PieceStatus::NoEvidence)));
        assert!(cs_within_fixed(&x, &x, 1, 3, 0.1, &cfg()).unwrap().set.is_empty());
        assert!(cs_within_all(&x, &x, 0.1, &cfg()).unwrap().set.is_empty());
    }

    #[test]
    fn between_is_inside_point_estimate_set() {
        let x = cdf(&[0.0161, 0.0734, 0.2957, 0.6427], 3000.0);
        let y = cdf(&[0.0287, 0.1205, 0.3905, 0.6731], 3000.0);
        let cs = cs_between(&x, &y, 0.05, &cfg()).unwrap();
        assert!(!cs.set.is_empty());
        assert!(cs.set.is_subset_of(&between_set(&x, &y).unwrap()));
        assert!(cs.limits.critical.z_x > 0.0 && cs.limits.critical.z_y > 0.0);
    }

    #[test]
    fn nesting_in_alpha() {
        let x = cdf(&[0.1, 0.3, 0.55], 800.0);
        let y = cdf(&[0.15, 0.38, 0.6], 800.0);
        let sets: Vec<QuantileSet> =
            [0.01, 0.05, 0.10].iter().map(|a| cs_between(&x, &y, *a, &cfg()).unwrap().set).collect();
        assert!(sets[0].is_subset_of(&sets[1]) && sets[1].is_subset_of(&sets[2]));
        assert!(!sets[2].is_empty());
    }

    #[test]
    fn large_n_two_categories() {
        let x = cdf(&[0.3], 1e6);
        let y = cdf(&[0.7], 1e6);
        let cs = cs_between(&x, &y, 0.1, &cfg()).unwrap();
        let iv = cs.set.intervals()[0];
        assert!(iv.lo() > 0.3 && iv.hi() < 0.7);
        assert!((cs.set.measure() - 0.4).abs() < 0.01);
    }

    #[test]
    fn within_fixed_converges_to_point_rectangle() {
        let x = cdf(&[0.0439, 0.1560, 0.4558, 0.7062], 1e8);
        let y = cdf(&[0.0485, 0.1656, 0.4490, 0.6710], 1e8);
        let cs = cs_within_fixed(&x, &y, 2, 4, 0.05, &cfg()).unwrap();
        let r = cs.set.rects()[0];
        assert!((r.x.lo() - 0.1560).abs() < 2e-4 && (r.x.hi() - 0.1656).abs() < 2e-4);
        assert!((r.y.lo() - 0.6710).abs() < 2e-4 && (r.y.hi() - 0.7062).abs() < 2e-4);
        let (t1, t2) = within_pair_sets(&x, &y, 2, 4).unwrap();
        assert!(cs.set.is_subset_of(&RectSet::product(&t1, &t2)));
    }

    #[test]
    fn within_sets_inside_point_estimate_set() {
        let x = cdf(&[0.1, 0.3, 0.7, 0.9], 5000.0);
        let y = cdf(&[0.15, 0.35, 0.62, 0.8], 5000.0);
        let point = within_all_set(&x, &y).unwrap();
        let all = cs_within_all(&x, &y, 0.1, &cfg()).unwrap();
        assert!(!all.set.is_empty());
        assert!(all.set.is_subset_of(&point));
        let fixed = cs_within_fixed(&x, &y, 1, 4, 0.1, &cfg()).unwrap();
        assert!(!fixed.set.is_empty());
        assert!(fixed.set.is_subset_of(&point));
    }

    #[test]
    fn crossed_limits_are_reported() {
        let x = cdf(&[0.30], 30.0);
        let y = cdf(&[0.32], 30.0);
        let cs = cs_between(&x, &y, 0.1, &cfg()).unwrap();
        assert!(cs.set.is_empty());
        assert_eq!(cs.limits.x_status[0], Some(PieceStatus::LimitsCrossed));
    }
}
