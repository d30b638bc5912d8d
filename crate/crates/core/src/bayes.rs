//! Posterior probabilities of ordinal dominance relations under independent
//! Dirichlet–multinomial models for the two groups.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand_distr::Gamma;

use crate::par::{derive_seed, map_indexed, substream};
use crate::{Error, OrdinalSample, Result};

const CHUNK: usize = 1024;
pub const DEFAULT_POSTERIOR_DRAWS: usize = 10_000;
const IMPROPER_SHAPE: f64 = 1e-10;

/// Relation whose posterior probability is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Event {
    /// `F_X(j) <= F_Y(j)` for every `j`.
    Sd1Xy,
    /// `F_Y(j) <= F_X(j)` for every `j`.
    Sd1Yx,
    /// `F_X - F_Y` is strictly negative then strictly positive.
    ScXy,
    /// `F_Y - F_X` is strictly negative then strictly positive.
    ScYx,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Prior {
    /// Dirichlet(1, …, 1).
    #[default]
    Uniform,
    /// Dirichlet(ε, …, ε) with ε = 1e-10; empty categories get probability 0.
    Improper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PosteriorConfig {
    pub draws: usize,
    pub seed: u64,
    pub prior: Prior,
}

impl Default for PosteriorConfig {
    fn default() -> Self {
        PosteriorConfig { draws: DEFAULT_POSTERIOR_DRAWS, seed: 0, prior: Prior::Uniform }
    }
}

/// Posterior probabilities of all four relations from one set of draws.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PosteriorSummary {
    pub draws: usize,
    pub sd1_xy: f64,
    pub sd1_yx: f64,
    /// `None` for fewer than three categories.
    pub sc_xy: Option<f64>,
    pub sc_yx: Option<f64>,
}

impl PosteriorSummary {
    pub fn get(&self, event: Event) -> Option<f64> {
        match event {
            Event::Sd1Xy => Some(self.sd1_xy),
            Event::Sd1Yx => Some(self.sd1_yx),
            Event::ScXy => self.sc_xy,
            Event::ScYx => self.sc_yx,
        }
    }
}

fn sd1(theta: &[f64]) -> bool {
    theta.iter().all(|t| *t <= 0.0)
}

// some k in 1..=J-2 with θ_j < 0 for j <= k and θ_j > 0 for j > k
fn single_crossing(theta: &[f64]) -> bool {
    let k = theta.iter().take_while(|t| **t < 0.0).count();
    k >= 1 && k < theta.len() && theta[k..].iter().all(|t| *t > 0.0)
}

struct Posterior {
    gammas: Vec<Option<Gamma<f64>>>,
}

impl Posterior {
    fn new(counts: &[u64], prior: Prior) -> Result<Self> {
        let gammas = counts
            .iter()
            .map(|&c| {
                let shape = match prior {
                    Prior::Uniform => c as f64 + 1.0,
                    Prior::Improper if c == 0 => return Ok(None),
                    Prior::Improper => c as f64 + IMPROPER_SHAPE,
                };
                Gamma::new(shape, 1.0)
                    .map(Some)
                    .map_err(|e| Error::Numerical(format!("gamma({shape}) sampler: {e}")))
            })
            .collect::<Result<_>>()?;
        Ok(Posterior { gammas })
    }

    /// Writes a draw of the ordinal CDF `F(1..J-1)` into `out`.
    fn draw_cdf<R: Rng>(&self, rng: &mut R, weights: &mut [f64], out: &mut [f64]) {
        for (w, g) in weights.iter_mut().zip(&self.gammas) {
            *w = g.map_or(0.0, |g| rng.sample(g));
        }
        let total: f64 = weights.iter().sum();
        let mut acc = 0.0;
        for (o, w) in out.iter_mut().zip(weights.iter()) {
            acc += w;
            *o = acc / total;
        }
    }
}

/// Draws `draws` pairs of CDFs from the two posteriors and reports the
/// fraction of draws in each relation's region.
pub fn posterior_summary(counts_x: &[u64], counts_y: &[u64], cfg: &PosteriorConfig) -> Result<PosteriorSummary> {
    let j = counts_x.len();
    if j < 2 || counts_y.len() != j {
        return Err(Error::invalid(format!(
            "count vectors must share a length of at least 2 (got {} and {})",
            counts_x.len(),
            counts_y.len()
        )));
    }
    if counts_x.iter().sum::<u64>() == 0 || counts_y.iter().sum::<u64>() == 0 {
        return Err(Error::invalid("each group needs at least one observation"));
    }
    if cfg.draws < crate::gauss::MIN_DRAWS {
        return Err(Error::invalid(format!("draws must be at least {}", crate::gauss::MIN_DRAWS)));
    }
    let px = Posterior::new(counts_x, cfg.prior)?;
    let py = Posterior::new(counts_y, cfg.prior)?;
    let seed = derive_seed(cfg.seed, 0xBA7E5);
    let chunks = cfg.draws.div_ceil(CHUNK);
    let tallies = map_indexed(chunks, |c| {
        let mut rng = substream(seed, c as u64);
        let count = CHUNK.min(cfg.draws - c * CHUNK);
        let mut w = vec![0.0; j];
        let mut fx = vec![0.0; j - 1];
        let mut fy = vec![0.0; j - 1];
        let mut theta = vec![0.0; j - 1];
        let mut neg = vec![0.0; j - 1];
        let mut tally = [0usize; 4];
        for _ in 0..count {
            px.draw_cdf(&mut rng, &mut w, &mut fx);
            py.draw_cdf(&mut rng, &mut w, &mut fy);
            for i in 0..j - 1 {
                theta[i] = fx[i] - fy[i];
                neg[i] = -theta[i];
            }
            tally[0] += usize::from(sd1(&theta));
            tally[1] += usize::from(sd1(&neg));
            tally[2] += usize::from(single_crossing(&theta));
            tally[3] += usize::from(single_crossing(&neg));
        }
        tally
    });
    let mut total = [0usize; 4];
    for t in tallies {
        for (a, b) in total.iter_mut().zip(t) {
            *a += b;
        }
    }
    let frac = |k: usize| total[k] as f64 / cfg.draws as f64;
    let has_sc = j >= 3;
    Ok(PosteriorSummary {
        draws: cfg.draws,
        sd1_xy: frac(0),
        sd1_yx: frac(1),
        sc_xy: has_sc.then(|| frac(2)),
        sc_yx: has_sc.then(|| frac(3)),
    })
}

/// Posterior probability of one relation.
pub fn posterior_prob(counts_x: &[u64], counts_y: &[u64], event: Event, cfg: &PosteriorConfig) -> Result<f64> {
    if matches!(event, Event::ScXy | Event::ScYx) && counts_x.len() < 3 {
        return Err(Error::invalid("single crossing needs at least 3 categories"));
    }
    let s = posterior_summary(counts_x, counts_y, cfg)?;
    Ok(s.get(event).expect("checked above"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum BayesDecision {
    Support,
    Reject,
    Inconclusive,
}

/// `Support` above `1 - α`, `Reject` below `α`, otherwise `Inconclusive`.
pub fn bayes_decision(prob: f64, alpha: f64) -> BayesDecision {
    if prob > 1.0 - alpha {
        BayesDecision::Support
    } else if prob < alpha {
        BayesDecision::Reject
    } else {
        BayesDecision::Inconclusive
    }
}

/// Counts of an unweighted sample as integers; fails on fractional counts.
pub fn integer_counts(sample: &OrdinalSample) -> Result<Vec<u64>> {
    sample
        .counts()
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            if libm::trunc(c) == c && c <= u64::MAX as f64 {
                Ok(c as u64)
            } else {
                Err(Error::invalid(format!(
                    "category {} has non-integer count {c}; convert weighted data first",
                    i + 1
                )))
            }
        })
        .collect()
}

/// Weighted counts rescaled to the Kish effective sample size and rounded.
pub fn kish_scaled_counts(sample: &OrdinalSample) -> Vec<u64> {
    let scale = sample.effective_n() / sample.total_weight();
    sample.counts().iter().map(|c| libm::round(c * scale) as u64).collect()
}
