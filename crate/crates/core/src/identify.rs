//! Identified quantile sets implied by a pair of ordinal CDFs.
//!
//! With `X = j` iff `γ_{j-1} < X* <= γ_j` and the `Y` thresholds shifted by
//! `Δ_j`:
//! - if every `Δ_j <= 0`, `Q_X*(τ) > Q_Y*(τ)` on [`between_set`];
//! - if all `Δ_j` are equal, the latent interquantile range of `X*` is the
//!   smaller one on every pair in [`within_all_set`].

use alloc::vec::Vec;

use crate::sample::check_same_categories;
use crate::{Error, Interval, OrdinalCdf, QuantileSet, RectSet, Result};

/// `(F_X(j), F_Y(j)]` when `F_X(j) < F_Y(j)`, for 1-based `j`.
pub fn x_piece(cdf_x: &OrdinalCdf, cdf_y: &OrdinalCdf, j: usize) -> Option<Interval> {
    let (fx, fy) = (cdf_x.at(j), cdf_y.at(j));
    (fx < fy).then(|| Interval::new(fx, fy).expect("CDF values lie in [0, 1]"))
}

/// `(F_Y(k), F_X(k)]` when `F_Y(k) < F_X(k)`.
pub fn y_piece(cdf_x: &OrdinalCdf, cdf_y: &OrdinalCdf, k: usize) -> Option<Interval> {
    x_piece(cdf_y, cdf_x, k)
}

/// Quantile indices at which the latent `X*` quantile exceeds that of `Y*`:
/// the union of `(F_X(j), F_Y(j)]` over categories with `F_X(j) < F_Y(j)`.
///
/// The mirror set for `Y*` is `between_set(cdf_y, cdf_x)`.
pub fn between_set(cdf_x: &OrdinalCdf, cdf_y: &OrdinalCdf) -> Result<QuantileSet> {
    check_same_categories(cdf_x, cdf_y)?;
    let j_max = cdf_x.categories() - 1;
    Ok(QuantileSet::from_intervals((1..=j_max).filter_map(|j| x_piece(cdf_x, cdf_y, j))))
}

/// `(T_1, T_2) = ((F_X(j), F_Y(j)], (F_Y(k), F_X(k)])` when the CDFs cross
/// with `F_X(j) < F_Y(j)` and `F_Y(k) < F_X(k)`; both empty otherwise.
///
/// For every `τ1 ∈ T_1`, `τ2 ∈ T_2` the `X*` interquantile range
/// `Q(τ2) - Q(τ1)` is below that of `Y*`. Swap the arguments for the
/// opposite orientation.
pub fn within_pair_sets(
    cdf_x: &OrdinalCdf,
    cdf_y: &OrdinalCdf,
    j: usize,
    k: usize,
) -> Result<(QuantileSet, QuantileSet)> {
    check_same_categories(cdf_x, cdf_y)?;
    check_pair(cdf_x.categories(), j, k)?;
    Ok(match (x_piece(cdf_x, cdf_y, j), y_piece(cdf_x, cdf_y, k)) {
        (Some(t1), Some(t2)) => (QuantileSet::from_interval(t1), QuantileSet::from_interval(t2)),
        _ => (QuantileSet::empty(), QuantileSet::empty()),
    })
}

pub(crate) fn check_pair(categories: usize, j: usize, k: usize) -> Result<()> {
    if !(1 <= j && j < k && k < categories) {
        return Err(Error::invalid(alloc::format!(
            "category pair ({j}, {k}) must satisfy 1 <= j < k <= {}",
            categories - 1
        )));
    }
    Ok(())
}

/// Category `m` at which the ordinal CDFs cross exactly once from below:
/// `F_X(j) < F_Y(j)` for `j <= m` and `F_X(j) > F_Y(j)` for `m < j < J`.
pub fn single_crossing(cdf_x: &OrdinalCdf, cdf_y: &OrdinalCdf) -> Option<usize> {
    if cdf_x.categories() != cdf_y.categories() {
        return None;
    }
    let signs: Vec<i8> = cdf_x
        .values()
        .iter()
        .zip(cdf_y.values())
        .map(|(x, y)| if x < y { -1 } else if x > y { 1 } else { 0 })
        .collect();
    let m = signs.iter().take_while(|s| **s == -1).count();
    (m >= 1 && m < signs.len() && signs[m..].iter().all(|s| *s == 1)).then_some(m)
}

/// `∪_{j<k} T_Xj × T_Yk`, the pairs `(τ1, τ2)` on which the `X*`
/// interquantile range is provably smaller. Equals `T_1 × T_2` under a
/// single crossing.
pub fn within_all_set(cdf_x: &OrdinalCdf, cdf_y: &OrdinalCdf) -> Result<RectSet> {
    check_same_categories(cdf_x, cdf_y)?;
    let j_max = cdf_x.categories() - 1;
    let xs: Vec<Option<Interval>> = (1..=j_max).map(|j| x_piece(cdf_x, cdf_y, j)).collect();
    let ys: Vec<Option<Interval>> = (1..=j_max).map(|k| y_piece(cdf_x, cdf_y, k)).collect();
    Ok(pairwise_rects(&xs, &ys))
}

/// Rectangles `xs[j] × ys[k]` over all `j < k` where both sides exist.
pub(crate) fn pairwise_rects(xs: &[Option<Interval>], ys: &[Option<Interval>]) -> RectSet {
    let mut rects = Vec::new();
    for (j, x) in xs.iter().enumerate() {
        let Some(x) = x else { continue };
        for y in ys[j + 1..].iter().flatten() {
            rects.push(crate::Rect { x: *x, y: *y });
        }
    }
    RectSet::from_rects(rects)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cdf(v: &[f64]) -> OrdinalCdf {
        OrdinalCdf::from_values(v.to_vec(), 1000.0).unwrap()
    }

    const HIGH_EDU: [f64; 4] = [0.0161, 0.0734, 0.2957, 0.6427];
    const LOW_EDU: [f64; 4] = [0.0287, 0.1205, 0.3905, 0.6731];
    const POOR_2006: [f64; 4] = [0.0439, 0.1560, 0.4558, 0.7062];
    const POOR_2008: [f64; 4] = [0.0485, 0.1656, 0.4490, 0.6710];

    #[test]
    fn education_between_set() {
        let s = between_set(&cdf(&HIGH_EDU), &cdf(&LOW_EDU)).unwrap();
        let want = QuantileSet::from_pairs(&[
            (0.0161, 0.0287),
            (0.0734, 0.1205),
            (0.2957, 0.3905),
            (0.6427, 0.6731),
        ])
        .unwrap();
        assert_eq!(s, want);
        assert!(between_set(&cdf(&LOW_EDU), &cdf(&HIGH_EDU)).unwrap().is_empty());
        assert!(between_set(&cdf(&HIGH_EDU), &cdf(&HIGH_EDU)).unwrap().is_empty());
    }

    #[test]
    fn poverty_single_crossing() {
        let (x, y) = (cdf(&POOR_2006), cdf(&POOR_2008));
        assert_eq!(single_crossing(&x, &y), Some(2));
        assert_eq!(single_crossing(&y, &x), None);
        let (t1, t2) = within_pair_sets(&x, &y, 2, 4).unwrap();
        assert_eq!(t1, QuantileSet::from_pairs(&[(0.1560, 0.1656)]).unwrap());
        assert_eq!(t2, QuantileSet::from_pairs(&[(0.6710, 0.7062)]).unwrap());
        assert!(t1.contains(0.16) && t2.contains(0.70));
    }

    #[test]
    fn no_crossing_gives_empty_pair() {
        let (x, y) = (cdf(&HIGH_EDU), cdf(&LOW_EDU));
        let (t1, t2) = within_pair_sets(&x, &y, 1, 3).unwrap();
        assert!(t1.is_empty() && t2.is_empty());
        assert!(within_pair_sets(&x, &y, 3, 3).is_err());
        assert!(within_pair_sets(&x, &y, 2, 5).is_err());
    }

    #[test]
    fn single_crossing_edge_cases() {
        assert_eq!(single_crossing(&cdf(&HIGH_EDU), &cdf(&HIGH_EDU)), None);
        // θ = (-, +, -)
        let x = cdf(&[0.1, 0.5, 0.6]);
        let y = cdf(&[0.2, 0.4, 0.7]);
        assert_eq!(single_crossing(&x, &y), None);
        // tie at a category breaks strictness
        assert_eq!(single_crossing(&cdf(&[0.1, 0.4, 0.8]), &cdf(&[0.2, 0.4, 0.7])), None);
    }

    #[test]
    fn within_all_matches_corollary_product() {
        let (x, y) = (cdf(&POOR_2006), cdf(&POOR_2008));
        let m = single_crossing(&x, &y).unwrap();
        let t1 = QuantileSet::from_intervals((1..=m).filter_map(|j| x_piece(&x, &y, j)));
        let t2 = QuantileSet::from_intervals((m + 1..=4).filter_map(|j| y_piece(&x, &y, j)));
        let all = within_all_set(&x, &y).unwrap();
        let prod = RectSet::product(&t1, &t2);
        assert!(all.is_subset_of(&prod) && prod.is_subset_of(&all));
    }

    #[test]
    fn within_all_double_crossing() {
        // θ = (-, +, -): only (1,2) contributes
        let x = cdf(&[0.1, 0.5, 0.6]);
        let y = cdf(&[0.2, 0.4, 0.7]);
        let all = within_all_set(&x, &y).unwrap();
        let want = RectSet::product(
            &QuantileSet::from_pairs(&[(0.1, 0.2)]).unwrap(),
            &QuantileSet::from_pairs(&[(0.4, 0.5)]).unwrap(),
        );
        assert_eq!(all, want);
        assert!(within_all_set(&x, &x).unwrap().is_empty());
    }
}
