//! Monte Carlo validation: exact latent-quantile oracles for the
//! identification results, and coverage / size studies for the inference
//! procedures.
//!
//! Latent laws are held as discrete grid distributions so that latent
//! quantiles, ordinal CDFs and the true identified sets are all exact.
//! Continuous laws are discretized onto 2000 cells whose right edges carry
//! the mass, so the grid CDF agrees with the continuous one at every edge.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::confsets::{cs_between, cs_within_all, cs_within_fixed, CsMethod};
use crate::gauss::SimConfig;
use crate::hypothesis::{test_nonsd1, test_sc, test_sd1};
use crate::identify::{between_set, within_all_set, within_pair_sets};
use crate::math::{exp, normal_cdf, sqrt};
use crate::par::{derive_seed, map_indexed, substream};
use crate::{estimate_cdf, Error, OrdinalCdf, OrdinalSample, RectSet, Result};

const GRID_CELLS: usize = 2000;

/// Discrete distribution on sorted support points.
#[derive(Debug, Clone, PartialEq)]
pub struct GridLaw {
    support: Vec<f64>,
    cum: Vec<f64>,
}

impl GridLaw {
    /// Law with the given strictly increasing support and nonnegative
    /// weights (normalized internally). Integer-valued weights give exact
    /// cumulative probabilities.
    pub fn new(support: Vec<f64>, weights: &[f64]) -> Result<Self> {
        if support.is_empty() || support.len() != weights.len() {
            return Err(Error::invalid("grid law needs matching nonempty support and weights"));
        }
        if support.len() > GRID_CELLS {
            return Err(Error::invalid(format!("grid law has more than {GRID_CELLS} points")));
        }
        if support.windows(2).any(|w| !(w[0] < w[1])) || support.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("grid support must be finite and strictly increasing"));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::invalid("grid weights must be finite and nonnegative"));
        }
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) {
            return Err(Error::invalid("grid weights sum to zero"));
        }
        let mut acc = 0.0;
        let mut cum: Vec<f64> = weights
            .iter()
            .map(|w| {
                acc += w;
                (acc / total).min(1.0)
            })
            .collect();
        *cum.last_mut().unwrap() = 1.0;
        Ok(GridLaw { support, cum })
    }

    fn from_cum(support: Vec<f64>, mut cum: Vec<f64>) -> Self {
        let mut run = 0.0f64;
        for c in cum.iter_mut() {
            run = run.max(c.clamp(0.0, 1.0));
            *c = run;
        }
        *cum.last_mut().unwrap() = 1.0;
        GridLaw { support, cum }
    }

    pub fn support(&self) -> &[f64] {
        &self.support
    }

    /// `F*(q)`.
    pub fn cdf(&self, q: f64) -> f64 {
        let idx = self.support.partition_point(|s| *s <= q);
        if idx == 0 {
            0.0
        } else {
            self.cum[idx - 1]
        }
    }

    /// Left-continuous generalized inverse `Q(τ) = inf{q : F*(q) >= τ}`
    /// for `τ ∈ (0, 1]`.
    pub fn quantile(&self, tau: f64) -> Result<f64> {
        if !(tau > 0.0 && tau <= 1.0) {
            return Err(Error::invalid(format!("quantile level {tau} outside (0, 1]")));
        }
        let idx = self.cum.partition_point(|c| *c < tau);
        Ok(self.support[idx.min(self.support.len() - 1)])
    }
}

/// One normal component of a mixture.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MixtureComponent {
    pub weight: f64,
    pub mean: f64,
    pub sd: f64,
}

/// Latent distribution of `X*` or `Y*`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "law", rename_all = "snake_case"))]
pub enum LatentLaw {
    Grid { support: Vec<f64>, weights: Vec<f64> },
    Normal { mean: f64, sd: f64 },
    Logistic { location: f64, scale: f64 },
    NormalMixture { components: Vec<MixtureComponent> },
}

impl LatentLaw {
    fn continuous_cdf(&self, q: f64) -> f64 {
        match self {
            LatentLaw::Normal { mean, sd } => normal_cdf((q - mean) / sd),
            LatentLaw::Logistic { location, scale } => 1.0 / (1.0 + exp(-(q - location) / scale)),
            LatentLaw::NormalMixture { components } => {
                let total: f64 = components.iter().map(|c| c.weight).sum();
                components.iter().map(|c| c.weight * normal_cdf((q - c.mean) / c.sd)).sum::<f64>() / total
            }
            LatentLaw::Grid { .. } => unreachable!("grid laws are discrete"),
        }
    }

    fn range(&self) -> (f64, f64) {
        match self {
            LatentLaw::Normal { mean, sd } => (mean - 8.0 * sd, mean + 8.0 * sd),
            LatentLaw::Logistic { location, scale } => (location - 30.0 * scale, location + 30.0 * scale),
            LatentLaw::NormalMixture { components } => components.iter().fold(
                (f64::INFINITY, f64::NEG_INFINITY),
                |(lo, hi), c| (lo.min(c.mean - 8.0 * c.sd), hi.max(c.mean + 8.0 * c.sd)),
            ),
            LatentLaw::Grid { .. } => unreachable!("grid laws are discrete"),
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match self {
            LatentLaw::Grid { .. } => true,
            LatentLaw::Normal { mean, sd } => mean.is_finite() && sd.is_finite() && *sd > 0.0,
            LatentLaw::Logistic { location, scale } => location.is_finite() && scale.is_finite() && *scale > 0.0,
            LatentLaw::NormalMixture { components } => {
                !components.is_empty()
                    && components.iter().all(|c| c.weight >= 0.0 && c.sd > 0.0 && c.mean.is_finite())
                    && components.iter().map(|c| c.weight).sum::<f64>() > 0.0
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::invalid(format!("invalid latent law parameters: {self:?}")))
        }
    }

    /// Exact grid law (grid input) or a 2000-cell discretization.
    pub fn discretize(&self) -> Result<GridLaw> {
        self.validate()?;
        if let LatentLaw::Grid { support, weights } = self {
            return GridLaw::new(support.clone(), weights);
        }
        let (lo, hi) = self.range();
        let width = (hi - lo) / GRID_CELLS as f64;
        let support: Vec<f64> = (1..=GRID_CELLS).map(|i| lo + width * i as f64).collect();
        let cum = support.iter().map(|e| self.continuous_cdf(*e)).collect();
        Ok(GridLaw::from_cum(support, cum))
    }
}

/// Restriction on the threshold shifts `Δ_j` between the groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ThresholdRule {
    /// All `Δ_j` equal (index shift).
    CommonShift,
    /// Every `Δ_j <= 0`.
    NonPositiveShift,
    /// No restriction; used for negative controls.
    Unrestricted,
}

/// Ordinal data-generating design: true ordinal CDFs and sample sizes.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OrdinalDesign {
    pub f_x: Vec<f64>,
    pub f_y: Vec<f64>,
    pub n_x: u64,
    pub n_y: u64,
}

impl OrdinalDesign {
    /// True CDFs with their population covariances.
    pub fn true_cdfs(&self) -> Result<(OrdinalCdf, OrdinalCdf)> {
        if self.n_x == 0 || self.n_y == 0 {
            return Err(Error::invalid("sample sizes must be positive"));
        }
        let x = OrdinalCdf::from_values(self.f_x.clone(), self.n_x as f64)?;
        let y = OrdinalCdf::from_values(self.f_y.clone(), self.n_y as f64)?;
        crate::sample::check_same_categories(&x, &y)?;
        Ok((x, y))
    }

    /// One iid sample per group.
    pub fn draw<R: Rng>(&self, rng: &mut R) -> Result<(OrdinalSample, OrdinalSample)> {
        Ok((draw_sample("x", &self.f_x, self.n_x, rng)?, draw_sample("y", &self.f_y, self.n_y, rng)?))
    }
}

/// `n` iid ordinal observations with CDF `f` (values at `1..J-1`).
pub fn draw_sample<R: Rng>(label: &str, f: &[f64], n: u64, rng: &mut R) -> Result<OrdinalSample> {
    let mut counts = vec![0.0; f.len() + 1];
    for _ in 0..n {
        let u: f64 = rng.random();
        counts[f.partition_point(|v| *v <= u)] += 1.0;
    }
    OrdinalSample::new(label, counts, n)
}

/// Latent laws, thresholds and sampling settings for one simulation design.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LatentScenario {
    pub x: LatentLaw,
    pub y: LatentLaw,
    /// `γ_1 < … < γ_{J-1}` for `X`.
    pub thresholds: Vec<f64>,
    /// `Δ_j`; the `Y` thresholds are `γ_j + Δ_j`.
    pub shifts: Vec<f64>,
    pub rule: ThresholdRule,
    pub n_x: u64,
    pub n_y: u64,
    pub replications: usize,
    pub seed: u64,
}

impl LatentScenario {
    pub fn validate(&self) -> Result<()> {
        let m = self.thresholds.len();
        if m == 0 || self.shifts.len() != m {
            return Err(Error::invalid("need J-1 >= 1 thresholds and one shift per threshold"));
        }
        let strictly_increasing = |v: &[f64]| v.iter().all(|t| t.is_finite()) && v.windows(2).all(|w| w[0] < w[1]);
        if !strictly_increasing(&self.thresholds) {
            return Err(Error::invalid("thresholds must be strictly increasing"));
        }
        if !strictly_increasing(&self.y_thresholds()) {
            return Err(Error::invalid("shifted Y thresholds must be strictly increasing"));
        }
        match self.rule {
            ThresholdRule::CommonShift if self.shifts.iter().any(|d| *d != self.shifts[0]) => {
                Err(Error::invalid("common-shift scenario has unequal shifts"))
            }
            ThresholdRule::NonPositiveShift if self.shifts.iter().any(|d| *d > 0.0) => {
                Err(Error::invalid("non-positive-shift scenario has a positive shift"))
            }
            _ => Ok(()),
        }
    }

    pub fn y_thresholds(&self) -> Vec<f64> {
        self.thresholds.iter().zip(&self.shifts).map(|(g, d)| g + d).collect()
    }

    /// Exact ordinal CDFs implied by the (discretized) latent laws.
    pub fn design(&self) -> Result<OrdinalDesign> {
        self.validate()?;
        let gx = self.x.discretize()?;
        let gy = self.y.discretize()?;
        Ok(OrdinalDesign {
            f_x: self.thresholds.iter().map(|g| gx.cdf(*g)).collect(),
            f_y: self.y_thresholds().iter().map(|g| gy.cdf(*g)).collect(),
            n_x: self.n_x,
            n_y: self.n_y,
        })
    }
}

/// Which identification result an oracle run checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Theorem {
    /// `Q_X*(τ) > Q_Y*(τ)` on the between-group set.
    BetweenGroup,
    /// Smaller `X*` interquantile range on the within-group set.
    WithinGroup,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Verification {
    /// Quantile levels (or pairs) inside the identified set that were checked.
    pub checked: u64,
    pub violations: u64,
}

impl core::ops::AddAssign for Verification {
    fn add_assign(&mut self, rhs: Self) {
        self.checked += rhs.checked;
        self.violations += rhs.violations;
    }
}

/// Grid levels `i / m` inside `(lo, hi]`, plus `hi` itself.
fn levels_in(lo: f64, hi: f64, m: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (1..=m)
        .map(|i| i as f64 / m as f64)
        .filter(|t| lo < *t && *t <= hi)
        .collect();
    if v.last() != Some(&hi) {
        v.push(hi);
    }
    v
}

/// Checks the chosen theorem's latent conclusion at every level of a
/// `step`-spaced grid (and every right endpoint) inside the identified set
/// computed from the exact ordinal CDFs. Returns the violation count.
pub fn verify_identification(scenario: &LatentScenario, theorem: Theorem, step: f64) -> Result<Verification> {
    if !(step > 0.0 && step < 1.0) {
        return Err(Error::invalid("grid step must lie in (0, 1)"));
    }
    let m = libm::round(1.0 / step) as usize;
    let design = scenario.design()?;
    let gx = scenario.x.discretize()?;
    let gy = scenario.y.discretize()?;
    let n = 1.0;
    let cx = OrdinalCdf::from_values(design.f_x, n)?;
    let cy = OrdinalCdf::from_values(design.f_y, n)?;
    let mut out = Verification::default();
    match theorem {
        Theorem::BetweenGroup => {
            for iv in between_set(&cx, &cy)?.intervals() {
                for tau in levels_in(iv.lo(), iv.hi(), m) {
                    out.checked += 1;
                    if !(gx.quantile(tau)? > gy.quantile(tau)?) {
                        out.violations += 1;
                    }
                }
            }
        }
        Theorem::WithinGroup => {
            for r in within_all_set(&cx, &cy)?.rects() {
                let t1 = levels_in(r.x.lo(), r.x.hi(), m);
                let t2 = levels_in(r.y.lo(), r.y.hi(), m);
                let q1: Vec<(f64, f64)> =
                    t1.iter().map(|t| Ok((gx.quantile(*t)?, gy.quantile(*t)?))).collect::<Result<_>>()?;
                for tau2 in &t2 {
                    let (x2, y2) = (gx.quantile(*tau2)?, gy.quantile(*tau2)?);
                    for (x1, y1) in &q1 {
                        out.checked += 1;
                        if !(x2 - x1 < y2 - y1) {
                            out.violations += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Random scenario satisfying the assumption behind `theorem`, with integer
/// support points, weights and thresholds so every comparison is exact.
/// Redraws until the identified set is nonempty.
pub fn random_scenario<R: Rng>(rng: &mut R, theorem: Theorem) -> Result<LatentScenario> {
    for _ in 0..10_000 {
        let g = rng.random_range(20..=300usize);
        let law = |rng: &mut R, support: Vec<f64>| -> LatentLaw {
            let weights = (0..support.len())
                .map(|_| if rng.random_bool(0.2) { 0.0 } else { rng.random_range(1..=20u32) as f64 })
                .collect();
            LatentLaw::Grid { support, weights }
        };
        let base: Vec<f64> = (0..g).map(|v| v as f64).collect();
        let x = law(rng, base.clone());
        let y = match rng.random_range(0..3u8) {
            0 => law(rng, base.clone()),
            // dilation about the centre: more dispersed Y*
            1 => law(rng, base.iter().map(|v| 2.0 * v - (g / 2) as f64).collect()),
            _ => {
                let s = rng.random_range(-(g as i64) / 4..=(g as i64) / 4) as f64;
                law(rng, base.iter().map(|v| v + s).collect())
            }
        };
        let cats = rng.random_range(3..=7usize);
        let mut cuts: Vec<f64> = Vec::new();
        while cuts.len() < cats - 1 {
            let c = rng.random_range(0..g as i64) as f64;
            if !cuts.contains(&c) {
                cuts.push(c);
            }
        }
        cuts.sort_by(f64::total_cmp);
        let (shifts, rule) = match theorem {
            Theorem::BetweenGroup => {
                let s: Vec<f64> = (0..cats - 1).map(|_| -(rng.random_range(0..=6u32) as f64)).collect();
                (s, ThresholdRule::NonPositiveShift)
            }
            Theorem::WithinGroup => {
                let d = rng.random_range(-10..=10i32) as f64;
                (vec![d; cats - 1], ThresholdRule::CommonShift)
            }
        };
        let scenario = LatentScenario {
            x,
            y,
            thresholds: cuts,
            shifts,
            rule,
            n_x: 1,
            n_y: 1,
            replications: 1,
            seed: 0,
        };
        if scenario.validate().is_err() {
            continue;
        }
        let d = scenario.design()?;
        let (cx, cy) = d.true_cdfs()?;
        let nonempty = match theorem {
            Theorem::BetweenGroup => !between_set(&cx, &cy)?.is_empty(),
            Theorem::WithinGroup => !within_all_set(&cx, &cy)?.is_empty(),
        };
        if nonempty {
            return Ok(scenario);
        }
    }
    Err(Error::Numerical("could not draw a scenario with a nonempty identified set".into()))
}

/// Outcome of verifying many random scenarios.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OracleRun {
    pub scenarios: usize,
    /// Scenarios with at least one violation.
    pub failing_scenarios: usize,
    pub total: Verification,
}

/// Verifies `count` random assumption-satisfying scenarios.
pub fn verify_random(theorem: Theorem, count: usize, seed: u64, step: f64) -> Result<OracleRun> {
    let results = map_indexed(count, |i| {
        let mut rng = substream(seed, i as u64);
        let s = random_scenario(&mut rng, theorem)?;
        verify_identification(&s, theorem, step)
    });
    let mut run = OracleRun { scenarios: count, failing_scenarios: 0, total: Verification::default() };
    for r in results {
        let v = r?;
        run.failing_scenarios += usize::from(v.violations > 0);
        run.total += v;
    }
    Ok(run)
}

/// Scenario that breaks the theorem's threshold assumption in a way that
/// makes its conclusion fail: identical latent laws, with the thresholds
/// shifted so the ordinal CDFs still differ.
pub fn negative_control(theorem: Theorem) -> LatentScenario {
    let uniform = LatentLaw::Grid { support: (0..100).map(|v| v as f64).collect(), weights: vec![1.0; 100] };
    let (thresholds, shifts) = match theorem {
        // Y thresholds raised: Y looks worse although X* and Y* coincide
        Theorem::BetweenGroup => (vec![24.0, 49.0, 74.0], vec![10.0, 10.0, 10.0]),
        // unequal shifts fake a crossing with no change in dispersion
        Theorem::WithinGroup => (vec![29.0, 69.0], vec![10.0, -10.0]),
    };
    LatentScenario {
        x: uniform.clone(),
        y: uniform,
        thresholds,
        shifts,
        rule: ThresholdRule::Unrestricted,
        n_x: 1,
        n_y: 1,
        replications: 1,
        seed: 0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CoverageResult {
    pub replications: usize,
    pub covered: usize,
    pub coverage: f64,
    pub mc_se: f64,
    /// Fraction of replications with an empty inner set.
    pub empty_fraction: f64,
}

/// Frequency with which an inner confidence set lies inside the true
/// identified set over `scenario.replications` simulated data sets.
pub fn coverage_study(
    scenario: &LatentScenario,
    method: CsMethod,
    alpha: f64,
    draws: usize,
) -> Result<CoverageResult> {
    coverage_study_design(&scenario.design()?, method, alpha, draws, scenario.replications, scenario.seed)
}

/// [`coverage_study`] on an ordinal design given directly.
pub fn coverage_study_design(
    design: &OrdinalDesign,
    method: CsMethod,
    alpha: f64,
    draws: usize,
    replications: usize,
    seed: u64,
) -> Result<CoverageResult> {
    if replications < 500 {
        return Err(Error::invalid("coverage studies need at least 500 replications"));
    }
    let (tx, ty) = design.true_cdfs()?;
    let truth: Truth = match method {
        CsMethod::Between => Truth::Line(between_set(&tx, &ty)?),
        CsMethod::WithinFixed { j, k } => {
            let (a, b) = within_pair_sets(&tx, &ty, j, k)?;
            Truth::Plane(RectSet::product(&a, &b))
        }
        CsMethod::WithinAll => Truth::Plane(within_all_set(&tx, &ty)?),
    };
    let outcomes = map_indexed(replications, |r| -> Result<(bool, bool)> {
        let mut rng = substream(seed, r as u64);
        let (sx, sy) = design.draw(&mut rng)?;
        let (cx, cy) = (estimate_cdf(&sx)?, estimate_cdf(&sy)?);
        let cfg = SimConfig::new(draws, derive_seed(seed, r as u64));
        Ok(match (&truth, method) {
            (Truth::Line(t), CsMethod::Between) => {
                let s = cs_between(&cx, &cy, alpha, &cfg)?.set;
                (s.is_subset_of(t), s.is_empty())
            }
            (Truth::Plane(t), CsMethod::WithinFixed { j, k }) => {
                let s = cs_within_fixed(&cx, &cy, j, k, alpha, &cfg)?.set;
                (s.is_subset_of(t), s.is_empty())
            }
            (Truth::Plane(t), CsMethod::WithinAll) => {
                let s = cs_within_all(&cx, &cy, alpha, &cfg)?.set;
                (s.is_subset_of(t), s.is_empty())
            }
            _ => unreachable!("truth matches method"),
        })
    });
    let mut covered = 0;
    let mut empty = 0;
    for o in outcomes {
        let (c, e) = o?;
        covered += usize::from(c);
        empty += usize::from(e);
    }
    let p = covered as f64 / replications as f64;
    Ok(CoverageResult {
        replications,
        covered,
        coverage: p,
        mc_se: sqrt(p * (1.0 - p) / replications as f64),
        empty_fraction: empty as f64 / replications as f64,
    })
}

enum Truth {
    Line(crate::QuantileSet),
    Plane(RectSet),
}

/// Test whose rejection rate a size study measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum TestKind {
    Sd1,
    NonSd1,
    SingleCrossing,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SizeResult {
    pub replications: usize,
    pub rejections: usize,
    pub rate: f64,
    pub mc_se: f64,
}

/// Empirical rejection rate of `test` on data drawn from `design`.
pub fn size_study(
    design: &OrdinalDesign,
    test: TestKind,
    alpha: f64,
    draws: usize,
    replications: usize,
    seed: u64,
) -> Result<SizeResult> {
    if replications == 0 {
        return Err(Error::invalid("need at least one replication"));
    }
    design.true_cdfs()?;
    let outcomes = map_indexed(replications, |r| -> Result<bool> {
        let mut rng = substream(seed, r as u64);
        let (sx, sy) = design.draw(&mut rng)?;
        let (cx, cy) = (estimate_cdf(&sx)?, estimate_cdf(&sy)?);
        let cfg = SimConfig::new(draws, derive_seed(seed, r as u64));
        Ok(match test {
            TestKind::Sd1 => test_sd1(&cx, &cy, alpha, &cfg)?.reject,
            TestKind::NonSd1 => test_nonsd1(&cx, &cy, alpha)?.reject,
            TestKind::SingleCrossing => test_sc(&cx, &cy, alpha, &cfg)?.reject,
        })
    });
    let mut rejections = 0;
    for o in outcomes {
        rejections += usize::from(o?);
    }
    let rate = rejections as f64 / replications as f64;
    Ok(SizeResult { replications, rejections, rate, mc_se: sqrt(rate * (1.0 - rate) / replications as f64) })
}
