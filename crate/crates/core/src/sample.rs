//! Ordinal samples, weighted empirical CDFs and their asymptotic covariance.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::str::FromStr;

use crate::math::sqrt;
use crate::{Error, Result, SymMatrix};

/// Tabulated responses of one group over categories `1..=J`.
///
/// `counts[j - 1]` is the total sampling weight in category `j`; with unit
/// weights it is the plain frequency. When `weight_sq_sum` is present the
/// sample is weighted and its effective size is Kish's `(Σw)² / Σw²`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OrdinalSample {
    label: String,
    counts: Vec<f64>,
    n_raw: u64,
    weight_sq_sum: Option<f64>,
}

impl OrdinalSample {
    /// Unit-weight sample: `n_raw` observations tabulated into `counts`.
    pub fn new(label: impl Into<String>, counts: Vec<f64>, n_raw: u64) -> Result<Self> {
        let s = OrdinalSample { label: label.into(), counts, n_raw, weight_sq_sum: None };
        s.validate()?;
        Ok(s)
    }

    /// Unit-weight sample whose observation count is the rounded total.
    pub fn from_counts(label: impl Into<String>, counts: Vec<f64>) -> Result<Self> {
        let total: f64 = counts.iter().sum();
        let n_raw = if total.is_finite() && total > 0.0 { libm::round(total).max(1.0) as u64 } else { 0 };
        Self::new(label, counts, n_raw)
    }

    /// Weighted sample with per-category weight totals and the sum of
    /// squared observation weights.
    pub fn weighted(
        label: impl Into<String>,
        counts: Vec<f64>,
        n_raw: u64,
        weight_sq_sum: f64,
    ) -> Result<Self> {
        let s = OrdinalSample { label: label.into(), counts, n_raw, weight_sq_sum: Some(weight_sq_sum) };
        s.validate()?;
        Ok(s)
    }

    fn validate(&self) -> Result<()> {
        let j = self.counts.len();
        if j < 2 {
            return Err(Error::invalid(format!("need at least 2 categories, got {j}")));
        }
        if let Some((i, c)) = self.counts.iter().enumerate().find(|(_, c)| !(c.is_finite() && **c >= 0.0)) {
            return Err(Error::invalid(format!("count for category {} is {c}; counts must be finite and >= 0", i + 1)));
        }
        if !(self.total_weight() > 0.0) {
            return Err(Error::invalid(format!("sample '{}' has zero total weight", self.label)));
        }
        let positive = self.counts.iter().filter(|c| **c > 0.0).count() as u64;
        if self.n_raw < positive {
            return Err(Error::invalid(format!(
                "n_raw = {} is smaller than the {positive} categories with positive weight",
                self.n_raw
            )));
        }
        if let Some(s) = self.weight_sq_sum {
            if !(s.is_finite() && s > 0.0) {
                return Err(Error::invalid("sum of squared weights must be finite and positive"));
            }
        }
        Ok(())
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn categories(&self) -> usize {
        self.counts.len()
    }

    pub fn counts(&self) -> &[f64] {
        &self.counts
    }

    pub fn n_raw(&self) -> u64 {
        self.n_raw
    }

    pub fn weight_sq_sum(&self) -> Option<f64> {
        self.weight_sq_sum
    }

    pub fn is_weighted(&self) -> bool {
        self.weight_sq_sum.is_some()
    }

    pub fn total_weight(&self) -> f64 {
        self.counts.iter().sum()
    }

    /// Sample size used for `√n` scaling: `n_raw` for unit weights, Kish's
    /// effective size otherwise.
    pub fn effective_n(&self) -> f64 {
        match self.weight_sq_sum {
            None => self.n_raw as f64,
            Some(sq) => {
                let w = self.total_weight();
                w * w / sq
            }
        }
    }

    /// Same data under a new label.
    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }
}

/// Ordinal CDF `F(1..J-1)` with the `√n`-scaled covariance of its estimator.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OrdinalCdf {
    values: Vec<f64>,
    n: f64,
    sigma: SymMatrix,
}

impl OrdinalCdf {
    /// Builds a CDF from its values at categories `1..J-1` (the value at `J`
    /// is implicitly 1) and a sample size, with the multinomial covariance
    /// `Σ_jk = F(j)(1 - F(k))` for `j <= k`.
    pub fn from_values(values: Vec<f64>, n: f64) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("a CDF needs at least 2 categories"));
        }
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::invalid(format!("sample size must be positive, got {n}")));
        }
        let mut prev = 0.0;
        for (i, &v) in values.iter().enumerate() {
            if !(0.0..=1.0).contains(&v) || v < prev {
                return Err(Error::invalid(format!(
                    "CDF value at category {} is {v}; values must be monotone within [0, 1]",
                    i + 1
                )));
            }
            prev = v;
        }
        let sigma = multinomial_covariance(&values);
        Ok(OrdinalCdf { values, n, sigma })
    }

    /// Number of categories `J`.
    pub fn categories(&self) -> usize {
        self.values.len() + 1
    }

    /// `F(1), …, F(J-1)`.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `F(j)` for 1-based `j` in `1..=J`.
    pub fn at(&self, j: usize) -> f64 {
        if j == self.categories() {
            1.0
        } else {
            self.values[j - 1]
        }
    }

    pub fn n(&self) -> f64 {
        self.n
    }

    pub fn sigma(&self) -> &SymMatrix {
        &self.sigma
    }

    /// Standard error of `F̂(j)` (1-based `j < J`).
    pub fn std_error(&self, j: usize) -> f64 {
        sqrt(self.sigma.get(j - 1, j - 1) / self.n)
    }
}

fn multinomial_covariance(f: &[f64]) -> SymMatrix {
    SymMatrix::from_fn(f.len(), |a, b| {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        f[lo] * (1.0 - f[hi])
    })
}

/// Weighted empirical CDF of a sample with its covariance estimate.
pub fn estimate_cdf(sample: &OrdinalSample) -> Result<OrdinalCdf> {
    let total = sample.total_weight();
    if !(total > 0.0) {
        return Err(Error::invalid("zero total weight"));
    }
    let j = sample.categories();
    let mut acc = 0.0;
    let values: Vec<f64> = sample.counts[..j - 1]
        .iter()
        .map(|c| {
            acc += c;
            acc / total
        })
        .collect();
    OrdinalCdf::from_values(values, sample.effective_n())
}

/// Contiguous 1-based category ranges that partition `1..=J`.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MergeSpec {
    groups: Vec<(usize, usize)>,
}

impl MergeSpec {
    /// Ranges are inclusive `(first, last)` pairs and must be ordered,
    /// contiguous and start at category 1.
    pub fn new(groups: Vec<(usize, usize)>) -> Result<Self> {
        if groups.is_empty() {
            return Err(Error::invalid("merge spec has no ranges"));
        }
        let mut next = 1;
        for &(a, b) in &groups {
            if a > b {
                return Err(Error::invalid(format!("range {a}-{b} is reversed")));
            }
            if a != next {
                return Err(Error::invalid(format!(
                    "range starting at {a} does not continue from category {next}; ranges must be contiguous and disjoint"
                )));
            }
            next = b + 1;
        }
        Ok(MergeSpec { groups })
    }

    /// Each category in its own range.
    pub fn identity(j: usize) -> Self {
        MergeSpec { groups: (1..=j).map(|c| (c, c)).collect() }
    }

    pub fn groups(&self) -> &[(usize, usize)] {
        &self.groups
    }

    /// Last category covered.
    pub fn covers(&self) -> usize {
        self.groups.last().map_or(0, |g| g.1)
    }
}

impl FromStr for MergeSpec {
    type Err = Error;

    /// Parses the comma-separated range grammar, e.g. `"1-12,13,14,19-25"`.
    fn from_str(s: &str) -> Result<Self> {
        let mut groups = Vec::new();
        for part in s.split(',') {
            let part = part.trim();
            let parse = |t: &str| {
                t.trim()
                    .parse::<usize>()
                    .ok()
                    .filter(|v| *v >= 1)
                    .ok_or_else(|| Error::invalid(format!("bad category '{t}' in merge spec")))
            };
            let range = match part.split_once('-') {
                Some((a, b)) => (parse(a)?, parse(b)?),
                None => {
                    let v = parse(part)?;
                    (v, v)
                }
            };
            groups.push(range);
        }
        MergeSpec::new(groups)
    }
}

/// Sums counts within each range of `spec`; `n_raw` and the squared-weight
/// total are unchanged.
pub fn merge_categories(sample: &OrdinalSample, spec: &MergeSpec) -> Result<OrdinalSample> {
    if spec.covers() != sample.categories() {
        return Err(Error::invalid(format!(
            "merge spec covers categories 1..={} but the sample has {}",
            spec.covers(),
            sample.categories()
        )));
    }
    let counts = spec
        .groups
        .iter()
        .map(|&(a, b)| sample.counts[a - 1..b].iter().sum())
        .collect();
    let merged = OrdinalSample { counts, ..sample.clone() };
    merged.validate()?;
    Ok(merged)
}

/// `θ_j = F_X(j) - F_Y(j)` for `j = 1..J-1`.
pub fn theta(cdf_x: &OrdinalCdf, cdf_y: &OrdinalCdf) -> Result<Vec<f64>> {
    check_same_categories(cdf_x, cdf_y)?;
    Ok(cdf_x.values.iter().zip(&cdf_y.values).map(|(x, y)| x - y).collect())
}

pub(crate) fn check_same_categories(a: &OrdinalCdf, b: &OrdinalCdf) -> Result<()> {
    if a.categories() != b.categories() {
        return Err(Error::invalid(format!(
            "category counts differ: {} vs {}",
            a.categories(),
            b.categories()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn table_cdf_from_scaled_counts() {
        let f = [0.0439, 0.1560, 0.4558, 0.7062];
        let n = 10_000.0;
        let mut prev = 0.0;
        let mut counts = Vec::new();
        for v in f.iter().chain([1.0].iter()) {
            counts.push(libm::round((v - prev) * n));
            prev = *v;
        }
        let cdf = estimate_cdf(&OrdinalSample::from_counts("2006", counts).unwrap()).unwrap();
        assert_eq!(cdf.values(), &f);
        assert_eq!(cdf.n(), n);
    }

    #[test]
    fn uniform_counts_give_linear_cdf() {
        let cdf = estimate_cdf(&OrdinalSample::from_counts("u", vec![7.0; 5]).unwrap()).unwrap();
        for (i, v) in cdf.values().iter().enumerate() {
            assert!((v - (i + 1) as f64 / 5.0).abs() < 1e-15);
        }
    }

    #[test]
    fn covariance_hand_value() {
        let s = OrdinalSample::new("x", vec![3.0, 1.0, 0.0, 4.0], 8).unwrap();
        let cdf = estimate_cdf(&s).unwrap();
        assert_eq!(cdf.values(), &[0.375, 0.5, 0.5]);
        assert!((cdf.sigma().get(0, 2) - 0.1875).abs() < 1e-15);
        assert_eq!(cdf.sigma().get(0, 2), cdf.sigma().get(2, 0));
    }

    #[test]
    fn kish_effective_size() {
        // weights 1,1,2,2 => (6)^2 / 10
        let s = OrdinalSample::weighted("w", vec![2.0, 4.0], 4, 10.0).unwrap();
        assert!((s.effective_n() - 3.6).abs() < 1e-12);
        let cdf = estimate_cdf(&s).unwrap();
        assert!((cdf.n() - 3.6).abs() < 1e-12);
    }

    #[test]
    fn invalid_samples() {
        assert!(OrdinalSample::new("x", vec![0.0, 0.0], 3).is_err());
        assert!(OrdinalSample::new("x", vec![1.0], 1).is_err());
        assert!(OrdinalSample::new("x", vec![1.0, -1.0], 1).is_err());
        assert!(OrdinalSample::new("x", vec![1.0, 1.0, 1.0], 2).is_err());
    }

    #[test]
    fn merge_examples() {
        let s = OrdinalSample::from_counts("x", vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let m = merge_categories(&s, &"1-2,3-4".parse().unwrap()).unwrap();
        assert_eq!(m.counts(), &[3.0, 7.0]);
        assert_eq!(m.n_raw(), 10);
        assert_eq!(merge_categories(&s, &MergeSpec::identity(4)).unwrap(), s);

        let s25 = OrdinalSample::from_counts("x", (1..=25).map(|v| v as f64).collect()).unwrap();
        let m5 = merge_categories(&s25, &"1-5,6-10,11-15,16-20,21-25".parse().unwrap()).unwrap();
        assert_eq!(m5.counts(), &[15.0, 40.0, 65.0, 90.0, 115.0]);
    }

    #[test]
    fn bad_merge_specs() {
        assert!("1-3,3-4".parse::<MergeSpec>().is_err());
        assert!("2-4".parse::<MergeSpec>().is_err());
        assert!("1-2,4".parse::<MergeSpec>().is_err());
        assert!("1-x".parse::<MergeSpec>().is_err());
        let s = OrdinalSample::from_counts("x", vec![1.0, 2.0, 3.0]).unwrap();
        assert!(merge_categories(&s, &"1-2".parse().unwrap()).is_err());
    }

    #[test]
    fn theta_examples() {
        let x = OrdinalCdf::from_values(vec![0.0161, 0.0734, 0.2957, 0.6427], 100.0).unwrap();
        let y = OrdinalCdf::from_values(vec![0.0287, 0.1205, 0.3905, 0.6731], 100.0).unwrap();
        let t = theta(&x, &y).unwrap();
        for (a, b) in t.iter().zip([-0.0126, -0.0471, -0.0948, -0.0304]) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(theta(&x, &x).unwrap().iter().all(|v| *v == 0.0));
        let a = OrdinalCdf::from_values(vec![0.3], 1.0).unwrap();
        let b = OrdinalCdf::from_values(vec![0.7], 1.0).unwrap();
        assert!((theta(&a, &b).unwrap()[0] + 0.4).abs() < 1e-15);
        assert!(theta(&a, &x).is_err());
    }

    #[test]
    fn non_monotone_cdf_rejected() {
        assert!(OrdinalCdf::from_values(vec![0.5, 0.4], 10.0).is_err());
        assert!(OrdinalCdf::from_values(vec![0.5, 1.2], 10.0).is_err());
    }
}
