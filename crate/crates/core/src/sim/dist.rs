//! Interarrival and service-time distributions.

use rand::Rng;
use rand_distr::{Distribution, Exp, Normal};
use serde::{Deserialize, Serialize};
use statrs::distribution::{Continuous, ContinuousCDF, Normal as StdNormal};

use crate::error::{require, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DistSpec {
    Exponential { rate: f64 },
    /// Rate `rate1` with probability `prob`, otherwise `rate2`.
    #[serde(rename = "hyperexp2")]
    HyperExp2 { prob: f64, rate1: f64, rate2: f64 },
    /// Normal with the given mean and coefficient of variation, resampled
    /// until the draw is at least `floor`.
    TruncatedNormal { mean: f64, cv: f64, floor: f64 },
}

impl DistSpec {
    /// Truncated normal with the default floor `1e-6 * mean`.
    pub fn truncated_normal(mean: f64, cv: f64) -> Self {
        DistSpec::TruncatedNormal { mean, cv, floor: 1e-6 * mean }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            DistSpec::Exponential { rate } => require(rate > 0.0 && rate.is_finite(), "rate", rate, "must be positive"),
            DistSpec::HyperExp2 { prob, rate1, rate2 } => {
                require((0.0..=1.0).contains(&prob), "prob", prob, "must lie in [0, 1]")?;
                require(rate1 > 0.0 && rate1.is_finite(), "rate1", rate1, "must be positive")?;
                require(rate2 > 0.0 && rate2.is_finite(), "rate2", rate2, "must be positive")
            }
            DistSpec::TruncatedNormal { mean, cv, floor } => {
                require(mean > 0.0 && mean.is_finite(), "mean", mean, "must be positive")?;
                require(cv > 0.0 && cv.is_finite(), "cv", cv, "must be positive")?;
                require(floor > 0.0 && floor.is_finite(), "floor", floor, "must be positive")
            }
        }
    }

    /// Mean of the distribution actually sampled (truncation included).
    pub fn mean(&self) -> f64 {
        match *self {
            DistSpec::Exponential { rate } => 1.0 / rate,
            DistSpec::HyperExp2 { prob, rate1, rate2 } => prob / rate1 + (1.0 - prob) / rate2,
            DistSpec::TruncatedNormal { .. } => self.truncated_moments().0,
        }
    }

    /// Squared coefficient of variation of the sampled distribution.
    pub fn scv(&self) -> f64 {
        match *self {
            DistSpec::Exponential { .. } => 1.0,
            DistSpec::HyperExp2 { prob, rate1, rate2 } => {
                let m1 = self.mean();
                let m2 = 2.0 * prob / (rate1 * rate1) + 2.0 * (1.0 - prob) / (rate2 * rate2);
                m2 / (m1 * m1) - 1.0
            }
            DistSpec::TruncatedNormal { .. } => {
                let (m, v) = self.truncated_moments();
                v / (m * m)
            }
        }
    }

    /// `(mean, variance)` of a normal truncated below at `floor`.
    fn truncated_moments(&self) -> (f64, f64) {
        let DistSpec::TruncatedNormal { mean, cv, floor } = *self else {
            unreachable!("only called for the truncated normal")
        };
        let sigma = cv * mean;
        let z = StdNormal::standard();
        let a = (floor - mean) / sigma;
        let tail = 1.0 - z.cdf(a);
        let h = z.pdf(a) / tail;
        (mean + sigma * h, sigma * sigma * (1.0 + a * h - h * h))
    }

    pub(crate) fn sampler(&self) -> Result<Sampler> {
        self.validate()?;
        let exp = |rate: f64| Exp::new(rate).expect("validated rate");
        Ok(match *self {
            DistSpec::Exponential { rate } => Sampler::Exp(exp(rate)),
            DistSpec::HyperExp2 { prob, rate1, rate2 } => Sampler::Hyper(prob, exp(rate1), exp(rate2)),
            DistSpec::TruncatedNormal { mean, cv, floor } => {
                Sampler::Trunc(Normal::new(mean, cv * mean).expect("validated normal"), floor)
            }
        })
    }
}

pub(crate) enum Sampler {
    Exp(Exp<f64>),
    Hyper(f64, Exp<f64>, Exp<f64>),
    Trunc(Normal<f64>, f64),
}

impl Sampler {
    pub(crate) fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            Sampler::Exp(e) => e.sample(rng),
            Sampler::Hyper(p, a, b) => {
                if rng.random::<f64>() < *p {
                    a.sample(rng)
                } else {
                    b.sample(rng)
                }
            }
            Sampler::Trunc(n, floor) => loop {
                let x = n.sample(rng);
                if x >= *floor {
                    break x;
                }
            },
        }
    }
}
