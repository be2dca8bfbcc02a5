//! Disorder laws and reproducible random streams.
//!
//! Every random draw in the crate comes from a ChaCha8 keystream addressed by
//! `(seed, stream, domain)`. Replica `r` of a campaign uses stream `r`; the
//! domain separates weight sampling from Gibbs sampling and jitter so that the
//! consumers never share keystream words.

use crate::error::{Error, Result};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

/// A one-site distribution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum Law {
    Constant { value: f64 },
    Uniform { low: f64, high: f64 },
    Normal { mean: f64, sd: f64 },
    /// `v1` with probability `p`, otherwise `v0`.
    BernoulliShift { p: f64, v0: f64, v1: f64 },
    /// `shift + Exp(rate)`.
    ExponentialShift { rate: f64, shift: f64 },
}

impl Law {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            Law::Constant { value } => !value.is_nan() && value != f64::INFINITY,
            Law::Uniform { low, high } => low.is_finite() && high.is_finite() && low <= high,
            Law::Normal { mean, sd } => mean.is_finite() && sd.is_finite() && sd >= 0.0,
            Law::BernoulliShift { p, v0, v1 } => {
                (0.0..=1.0).contains(&p) && v0.is_finite() && v1.is_finite()
            }
            Law::ExponentialShift { rate, shift } => {
                rate.is_finite() && rate > 0.0 && shift.is_finite()
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Input(format!("invalid law parameters: {self:?}")))
        }
    }

    /// Inverse-CDF draw from a uniform `u ∈ (0, 1)`.
    pub fn quantile(&self, u: f64) -> f64 {
        match *self {
            Law::Constant { value } => value,
            Law::Uniform { low, high } => low + (high - low) * u,
            Law::Normal { mean, sd } => {
                if sd == 0.0 {
                    mean
                } else {
                    Normal::new(mean, sd)
                        .expect("validated normal parameters")
                        .inverse_cdf(u)
                }
            }
            Law::BernoulliShift { p, v0, v1 } => {
                if u < p {
                    v1
                } else {
                    v0
                }
            }
            Law::ExponentialShift { rate, shift } => shift - (-u).ln_1p() / rate,
        }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            Law::Constant { value } => value,
            Law::Uniform { low, high } => 0.5 * (low + high),
            Law::Normal { mean, .. } => mean,
            Law::BernoulliShift { p, v0, v1 } => (1.0 - p) * v0 + p * v1,
            Law::ExponentialShift { rate, shift } => shift + 1.0 / rate,
        }
    }

    pub fn variance(&self) -> f64 {
        match *self {
            Law::Constant { .. } => 0.0,
            Law::Uniform { low, high } => (high - low).powi(2) / 12.0,
            Law::Normal { sd, .. } => sd * sd,
            Law::BernoulliShift { p, v0, v1 } => p * (1.0 - p) * (v1 - v0).powi(2),
            Law::ExponentialShift { rate, .. } => 1.0 / (rate * rate),
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.variance() == 0.0
    }

    /// Upper end of the support, `+inf` when unbounded.
    pub fn sup(&self) -> f64 {
        match *self {
            Law::Constant { value } => value,
            Law::Uniform { high, .. } => high,
            Law::Normal { mean, sd } => {
                if sd == 0.0 {
                    mean
                } else {
                    f64::INFINITY
                }
            }
            Law::BernoulliShift { p, v0, v1 } => match p {
                0.0 => v0,
                1.0 => v1,
                _ => v0.max(v1),
            },
            Law::ExponentialShift { .. } => f64::INFINITY,
        }
    }

    /// Lower end of the support, `-inf` when unbounded.
    pub fn inf(&self) -> f64 {
        match *self {
            Law::Constant { value } => value,
            Law::Uniform { low, .. } => low,
            Law::Normal { mean, sd } => {
                if sd == 0.0 {
                    mean
                } else {
                    f64::NEG_INFINITY
                }
            }
            Law::BernoulliShift { p, v0, v1 } => match p {
                0.0 => v0,
                1.0 => v1,
                _ => v0.min(v1),
            },
            Law::ExponentialShift { shift, .. } => shift,
        }
    }
}

/// Independent laws for vertex weights `ν` and edge weights `ω`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DisorderSpec {
    pub vertex: Law,
    pub edge: Law,
}

impl DisorderSpec {
    pub fn new(vertex: Law, edge: Law) -> Result<Self> {
        let spec = Self { vertex, edge };
        spec.validate()?;
        Ok(spec)
    }

    pub fn constant(nu: f64, omega: f64) -> Self {
        Self {
            vertex: Law::Constant { value: nu },
            edge: Law::Constant { value: omega },
        }
    }

    pub fn standard_normal() -> Self {
        Self {
            vertex: Law::Normal { mean: 0.0, sd: 1.0 },
            edge: Law::Normal { mean: 0.0, sd: 1.0 },
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.vertex.validate()?;
        self.edge.validate()
    }

    pub fn is_degenerate(&self) -> bool {
        self.vertex.is_degenerate() && self.edge.is_degenerate()
    }
}

/// Consumers of random words; each gets a disjoint keystream.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u64)]
pub enum Domain {
    Weights = 0,
    Gibbs = 1,
    Jitter = 2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngSeed {
    pub seed: u64,
    pub stream: u64,
}

impl RngSeed {
    pub fn new(seed: u64, stream: u64) -> Self {
        Self { seed, stream }
    }

    pub fn uniforms(&self, domain: Domain) -> UniformStream {
        UniformStream::new(*self, domain)
    }
}

/// Uniform `(0, 1)` variates with 53 bits of resolution, one keystream word
/// pair per draw.
pub struct UniformStream {
    rng: ChaCha8Rng,
}

impl UniformStream {
    pub fn new(seed: RngSeed, domain: Domain) -> Self {
        assert!(seed.stream < 1 << 60, "stream id must fit in 60 bits");
        let mut rng = ChaCha8Rng::seed_from_u64(seed.seed);
        rng.set_stream((seed.stream << 4) | domain as u64);
        rng.set_word_pos(0);
        Self { rng }
    }

    pub fn next_open01(&mut self) -> f64 {
        let bits = self.rng.next_u64() >> 11;
        (bits as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    pub fn draw(&mut self, law: &Law) -> f64 {
        let u = self.next_open01();
        law.quantile(u)
    }
}
