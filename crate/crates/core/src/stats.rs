//! Sample statistics and goodness-of-fit helpers.

use crate::error::{Error, Result};
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};

fn std_normal() -> Normal {
    Normal::new(0.0, 1.0).expect("standard normal")
}

pub fn normal_cdf(z: f64) -> f64 {
    std_normal().cdf(z)
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Unbiased sample variance.
pub fn variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() as f64 - 1.0)
}

/// Moment summary of a sample.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Moments {
    pub count: usize,
    pub mean: f64,
    pub variance: f64,
    pub skewness: f64,
    pub excess_kurtosis: f64,
    /// Standard error of the sample variance.
    pub variance_se: f64,
}

impl Moments {
    pub fn of(xs: &[f64]) -> Result<Self> {
        let n = xs.len();
        if n < 2 {
            return Err(Error::InsufficientReplicas { needed: 2, got: n });
        }
        let nf = n as f64;
        let mean = mean(xs);
        let central = |k: i32| xs.iter().map(|x| (x - mean).powi(k)).sum::<f64>() / nf;
        let (m2, m3, m4) = (central(2), central(3), central(4));
        let variance = m2 * nf / (nf - 1.0);
        let (skewness, excess_kurtosis) = if m2 > 0.0 {
            (m3 / m2.powf(1.5), m4 / (m2 * m2) - 3.0)
        } else {
            (0.0, 0.0)
        };
        let variance_se = ((m4 - variance * variance * (nf - 3.0) / (nf - 1.0)) / nf).max(0.0).sqrt();
        Ok(Self {
            count: n,
            mean,
            variance,
            skewness,
            excess_kurtosis,
            variance_se,
        })
    }

    pub fn mean_se(&self) -> f64 {
        (self.variance / self.count as f64).sqrt()
    }
}

/// `sup |F_m − Φ|` for the sample standardized by its own mean and sd.
pub fn ks_normal(xs: &[f64]) -> f64 {
    let m = mean(xs);
    let sd = variance(xs).sqrt();
    if sd == 0.0 {
        return 1.0;
    }
    let mut z: Vec<f64> = xs.iter().map(|x| (x - m) / sd).collect();
    z.sort_by(|a, b| a.partial_cmp(b).expect("finite sample"));
    let n = z.len() as f64;
    z.iter()
        .enumerate()
        .map(|(i, &zi)| {
            let f = normal_cdf(zi);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// Sup-distance between the CDF of a lattice law `{(value, prob)}` after
/// standardization by `(mean, sd)` and `Φ`.
pub fn lattice_normal_distance(pmf: &[(f64, f64)], mean: f64, sd: f64) -> f64 {
    let mut atoms: Vec<(f64, f64)> = pmf.iter().map(|&(v, p)| ((v - mean) / sd, p)).collect();
    atoms.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite atom"));
    let mut below = 0.0;
    let mut worst: f64 = 0.0;
    for (z, p) in atoms {
        let phi = normal_cdf(z);
        worst = worst.max((phi - below).abs());
        below += p;
        worst = worst.max((below - phi).abs());
    }
    worst
}

/// Monte Carlo envelopes for `m` draws from a normal law, anchored at
/// `(0.15, 0.3, 0.035)` for `m = 2000` and scaled by `√(2000/m)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Envelopes {
    pub skewness: f64,
    pub excess_kurtosis: f64,
    pub ks: f64,
}

impl Envelopes {
    pub fn for_sample_size(m: usize) -> Self {
        let s = (2000.0 / m as f64).sqrt();
        Self {
            skewness: 0.15 * s,
            excess_kurtosis: 0.3 * s,
            ks: 0.035 * s,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChiSquareTest {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    pub bins: usize,
}

/// Pearson test of observed counts against probabilities. Cells with an
/// expected count below 5 are pooled, in order, with their neighbours.
pub fn chi_square(observed: &[u64], probs: &[f64]) -> Result<ChiSquareTest> {
    if observed.len() != probs.len() || observed.is_empty() {
        return Err(Error::Input("observed and expected cells differ".into()));
    }
    let total: u64 = observed.iter().sum();
    let t = total as f64;
    let mut cells: Vec<(f64, f64)> = Vec::new();
    let (mut o, mut e) = (0.0, 0.0);
    for (&obs, &p) in observed.iter().zip(probs) {
        o += obs as f64;
        e += p * t;
        if e >= 5.0 {
            cells.push((o, e));
            o = 0.0;
            e = 0.0;
        }
    }
    if e > 0.0 || o > 0.0 {
        match cells.last_mut() {
            Some(last) => {
                last.0 += o;
                last.1 += e;
            }
            None => cells.push((o, e)),
        }
    }
    let statistic: f64 = cells.iter().map(|(o, e)| (o - e) * (o - e) / e).sum();
    let dof = cells.len().saturating_sub(1);
    let p_value = if dof == 0 {
        1.0
    } else {
        1.0 - ChiSquared::new(dof as f64).expect("positive dof").cdf(statistic)
    };
    Ok(ChiSquareTest {
        statistic,
        dof,
        p_value,
        bins: cells.len(),
    })
}

/// Least-squares slope and intercept of `y` on `x`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let mx = mean(x);
    let my = mean(y);
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

pub fn correlation(x: &[f64], y: &[f64]) -> f64 {
    let mx = mean(x);
    let my = mean(y);
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let syy: f64 = y.iter().map(|b| (b - my) * (b - my)).sum();
    sxy / (sxx * syy).sqrt()
}

/// Total variation distance between two probability vectors.
pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}
