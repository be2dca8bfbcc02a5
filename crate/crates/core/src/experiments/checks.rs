use super::config::{AnnealedCheck, BrownianCheck, CltCheck, ExperimentConfig, GrowthCheck, JointCheck, LlnCheck, QuenchedCheck};
use super::replicas::{replica_weights, with_threads, ReplicaRow, ReplicaTable};
use crate::disorder::{Domain, RngSeed};
use crate::error::{Error, Result};
use crate::graph::CylinderGraph;
use crate::jacobi::{lyapunov_check, ThoulessReport};
use crate::mask::CountingMask;
use crate::sampler::{dyadic_grid, GibbsSampler, Observables};
use crate::stats::{self, correlation, ks_normal, lattice_normal_distance, linear_fit, Envelopes, Moments};
use crate::transfer::{restricted_polynomial, section_variances, Problem};
use crate::weights::WeightAssignment;
use rayon::prelude::*;
use serde::Serialize;

/// Metric accessor by name.
pub fn metric(name: &str) -> Option<fn(&ReplicaRow) -> Option<f64>> {
    match name {
        "log_z" => Some(|r| r.log_z),
        "mean_u" => Some(|r| r.mean_u),
        "m_n" => Some(|r| r.m_n),
        _ => None,
    }
}

fn moments_or_none(xs: &[f64]) -> Option<Moments> {
    Moments::of(xs).ok()
}

/// Disorder-replica estimates at one `n`. Variance estimates carry the
/// standard error of the sample variance, divided by `n` like the estimate.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimitRow {
    pub n: usize,
    pub replicas: usize,
    /// `mean(log Z)/n`.
    pub f_hat: f64,
    pub f_se: f64,
    /// `var(log Z)/n`.
    pub sigma_f2: f64,
    pub sigma_f2_se: f64,
    /// `mean⟨U⟩/n`.
    pub u_hat: f64,
    pub u_se: f64,
    /// `mean(Var_μ U)/n`.
    pub sigma_q2: f64,
    pub sigma_q2_se: f64,
    /// `var⟨U⟩/n`.
    pub sigma_a2: f64,
    pub sigma_a2_se: f64,
    /// Total variance of `U` over Gibbs and disorder randomness, `/n`,
    /// computed from second moments.
    pub sigma_total2: f64,
    /// `|sigma_total2 − mean(Var_μ U)/n − var_biased⟨U⟩/n|`.
    pub split_residual: f64,
    pub m_hat: Option<f64>,
    pub m_se: Option<f64>,
    pub sigma_m2: Option<f64>,
    pub sigma_m2_se: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Drift {
    pub from: usize,
    pub to: usize,
    pub f_hat: f64,
    pub sigma_f2: f64,
    pub u_hat: f64,
    pub m_hat: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Limits {
    pub rows: Vec<LimitRow>,
    /// Successive differences along the ladder.
    pub drift: Vec<Drift>,
}

impl Limits {
    pub fn top(&self) -> &LimitRow {
        self.rows.last().expect("nonempty limits")
    }

    pub fn row(&self, n: usize) -> Option<&LimitRow> {
        self.rows.iter().find(|r| r.n == n)
    }
}

fn limit_row(table: &ReplicaTable, n: usize) -> Result<LimitRow> {
    let nf = n as f64;
    let need = |xs: Vec<f64>| -> Result<Moments> {
        let got = xs.len();
        Moments::of(&xs).map_err(|_| Error::InsufficientReplicas { needed: 2, got })
    };
    let lz = need(table.column(n, |r| r.log_z))?;
    let mu = need(table.column(n, |r| r.mean_u))?;
    let vu = need(table.column(n, |r| r.var_u))?;
    let pairs: Vec<(f64, f64)> = table
        .at(n)
        .filter_map(|r| Some((r.mean_u?, r.var_u?)))
        .collect();
    let r = pairs.len() as f64;
    let second = pairs.iter().map(|(m, v)| v + m * m).sum::<f64>() / r;
    let first = pairs.iter().map(|(m, _)| m).sum::<f64>() / r;
    let sigma_total2 = (second - first * first) / nf;
    let biased_a = mu.variance * (r - 1.0) / r;
    let ms = table.column(n, |r| r.m_n);
    let mm = moments_or_none(&ms);
    Ok(LimitRow {
        n,
        replicas: lz.count,
        f_hat: lz.mean / nf,
        f_se: lz.mean_se() / nf,
        sigma_f2: lz.variance / nf,
        sigma_f2_se: lz.variance_se / nf,
        u_hat: mu.mean / nf,
        u_se: mu.mean_se() / nf,
        sigma_q2: vu.mean / nf,
        sigma_q2_se: vu.mean_se() / nf,
        sigma_a2: mu.variance / nf,
        sigma_a2_se: mu.variance_se / nf,
        sigma_total2,
        split_residual: (sigma_total2 - (vu.mean + biased_a) / nf).abs(),
        m_hat: mm.map(|m| m.mean / nf),
        m_se: mm.map(|m| m.mean_se() / nf),
        sigma_m2: mm.map(|m| m.variance / nf),
        sigma_m2_se: mm.map(|m| m.variance_se / nf),
    })
}

/// Per-`n` estimates of `f`, `σ_F²`, `u`, `σ_Q²`, `σ_A²`, `m`, `σ_M²` and
/// their drift along the ladder.
pub fn estimate_limits(table: &ReplicaTable) -> Result<Limits> {
    let rows = table.ns().into_iter().map(|n| limit_row(table, n)).collect::<Result<Vec<_>>>()?;
    if rows.is_empty() {
        return Err(Error::InsufficientReplicas { needed: 2, got: 0 });
    }
    let drift = rows
        .windows(2)
        .map(|w| Drift {
            from: w[0].n,
            to: w[1].n,
            f_hat: w[1].f_hat - w[0].f_hat,
            sigma_f2: w[1].sigma_f2 - w[0].sigma_f2,
            u_hat: w[1].u_hat - w[0].u_hat,
            m_hat: w[1].m_hat.zip(w[0].m_hat).map(|(a, b)| a - b),
        })
        .collect();
    Ok(Limits { rows, drift })
}

/// Shape statistics of one metric at one `n`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MetricStats {
    pub metric: String,
    pub n: usize,
    pub moments: Moments,
    pub ks: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trend {
    pub metric: String,
    /// Least-squares slope of `mean/n` against `n`.
    pub mean_slope: f64,
    /// Least-squares slope of `var/n` against `n`.
    pub var_slope: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StatsSummary {
    pub metrics: Vec<MetricStats>,
    pub trends: Vec<Trend>,
}

pub fn metric_stats(table: &ReplicaTable, n: usize, name: &str) -> Option<MetricStats> {
    let xs = table.column(n, metric(name)?);
    let moments = Moments::of(&xs).ok()?;
    Some(MetricStats {
        metric: name.to_string(),
        n,
        moments,
        ks: ks_normal(&xs),
    })
}

/// Moments and KS distances of every metric at every `n`.
pub fn stats_summary(table: &ReplicaTable) -> StatsSummary {
    let names = ["log_z", "mean_u", "m_n"];
    let ns = table.ns();
    let mut metrics = Vec::new();
    let mut trends = Vec::new();
    for name in names {
        let per_n: Vec<MetricStats> = ns.iter().filter_map(|&n| metric_stats(table, n, name)).collect();
        if per_n.len() >= 2 {
            let x: Vec<f64> = per_n.iter().map(|s| s.n as f64).collect();
            let mean: Vec<f64> = per_n.iter().map(|s| s.moments.mean / s.n as f64).collect();
            let var: Vec<f64> = per_n.iter().map(|s| s.moments.variance / s.n as f64).collect();
            trends.push(Trend {
                metric: name.to_string(),
                mean_slope: linear_fit(&x, &mean).0,
                var_slope: linear_fit(&x, &var).0,
            });
        }
        metrics.extend(per_n);
    }
    StatsSummary { metrics, trends }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    ZeroVariance,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CltVerdict {
    pub metric: String,
    pub stats: Option<MetricStats>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CltReport {
    pub n: usize,
    pub envelopes: Envelopes,
    pub verdicts: Vec<CltVerdict>,
    /// No metric failed; zero-variance metrics do not count as failures.
    pub passed: bool,
}

/// Skewness, excess kurtosis and KS distance of each metric against the
/// Gaussian-null envelopes for the replica count.
pub fn clt_checks(table: &ReplicaTable, check: &CltCheck) -> Result<CltReport> {
    let n = match check.n {
        Some(n) => n,
        None => *table.ns().last().ok_or(Error::InsufficientReplicas { needed: 2, got: 0 })?,
    };
    let mut verdicts = Vec::new();
    let mut count = 0;
    let env_for = |m: usize| Envelopes::for_sample_size(m);
    for name in &check.metrics {
        let stats = metric_stats(table, n, name);
        let verdict = match &stats {
            None => Verdict::ZeroVariance,
            Some(s) if s.moments.variance == 0.0 => Verdict::ZeroVariance,
            Some(s) => {
                count = s.moments.count;
                let e = env_for(s.moments.count);
                if s.moments.skewness.abs() <= e.skewness
                    && s.moments.excess_kurtosis.abs() <= e.excess_kurtosis
                    && s.ks <= e.ks
                {
                    Verdict::Pass
                } else {
                    Verdict::Fail
                }
            }
        };
        verdicts.push(CltVerdict {
            metric: name.clone(),
            stats,
            verdict,
        });
    }
    let passed = verdicts.iter().all(|v| v.verdict != Verdict::Fail);
    Ok(CltReport {
        n,
        envelopes: env_for(count.max(table.at(n).count()).max(1)),
        verdicts,
        passed,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LlnReport {
    pub prev: usize,
    pub top: usize,
    /// `|f̂_top − f̂_prev| / |f̂_prev|`.
    pub mean_drift: f64,
    /// `|σ̂_F²(top) − σ̂_F²(prev)| / σ̂_F²(prev)`.
    pub var_drift: f64,
    /// `σ̂_F²(top)` in standard errors.
    pub var_in_se: f64,
    pub free_energy_passed: bool,
    /// `|m̂_top − m̂_prev| / |m̂_prev|` when ground states were computed.
    pub ground_drift: Option<f64>,
    pub ground_passed: Option<bool>,
    pub passed: bool,
}

pub fn lln_check(limits: &Limits, check: &LlnCheck) -> Result<LlnReport> {
    let k = limits.rows.len();
    if k < 2 {
        return Err(Error::Config("the LLN check needs at least two ladder values".into()));
    }
    let (a, b) = (&limits.rows[k - 2], &limits.rows[k - 1]);
    let mean_drift = (b.f_hat - a.f_hat).abs() / a.f_hat.abs();
    let var_drift = (b.sigma_f2 - a.sigma_f2).abs() / a.sigma_f2.abs();
    let var_in_se = b.sigma_f2 / b.sigma_f2_se;
    let free_energy_passed = mean_drift < check.mean_drift && var_drift < check.var_drift && var_in_se > check.var_se;
    let ground_drift = b.m_hat.zip(a.m_hat).map(|(mb, ma)| (mb - ma).abs() / ma.abs());
    let ground_passed = ground_drift.map(|d| d < check.mean_drift);
    Ok(LlnReport {
        prev: a.n,
        top: b.n,
        mean_drift,
        var_drift,
        var_in_se,
        free_energy_passed,
        ground_drift,
        ground_passed,
        passed: free_energy_passed && ground_passed.unwrap_or(true),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnnealedReport {
    pub n: usize,
    pub sigma_a2: f64,
    pub sigma_a2_se: f64,
    pub in_se: f64,
    pub passed: bool,
}

/// `σ̂_A² > k·SE` at the top of the ladder.
pub fn annealed_positivity(limits: &Limits, check: &AnnealedCheck) -> AnnealedReport {
    let top = limits.top();
    let in_se = top.sigma_a2 / top.sigma_a2_se;
    AnnealedReport {
        n: top.n,
        sigma_a2: top.sigma_a2,
        sigma_a2_se: top.sigma_a2_se,
        in_se,
        passed: in_se > check.se,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuenchedPoint {
    pub n: usize,
    pub mean: f64,
    pub variance: f64,
    pub distance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuenchedReport {
    pub points: Vec<QuenchedPoint>,
    pub decreasing: bool,
    pub final_distance: f64,
    pub passed: bool,
}

/// Sup-distance between the standardized exact law of `U` and `Φ` for the
/// prefixes `[1:n]`, `n ∈ ladder`, of one environment.
pub fn quenched_clt_check(
    g: &CylinderGraph,
    w: &WeightAssignment<f64>,
    ladder: &[usize],
    max_distance: f64,
) -> Result<QuenchedReport> {
    let mut points = Vec::with_capacity(ladder.len());
    for &n in ladder {
        let p = restricted_polynomial(g, w, 1, n, &CountingMask::All)?;
        let c = p.cumulants(0.0, 2)?;
        let pmf: Vec<(f64, f64)> = p.pmf(0.0).into_iter().map(|(j, q)| (j as f64, q)).collect();
        let distance = if c[1] > 0.0 {
            lattice_normal_distance(&pmf, c[0], c[1].sqrt())
        } else {
            1.0
        };
        points.push(QuenchedPoint {
            n,
            mean: c[0],
            variance: c[1],
            distance,
        });
    }
    let decreasing = points.windows(2).all(|w| w[1].distance < w[0].distance);
    let final_distance = points.last().map_or(1.0, |p| p.distance);
    Ok(QuenchedReport {
        decreasing,
        final_distance,
        passed: decreasing && final_distance <= max_distance,
        points,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuenchedSummary {
    pub environments: usize,
    pub passing: usize,
    pub fraction: f64,
    pub worst_final_distance: f64,
    pub reports: Vec<QuenchedReport>,
    pub passed: bool,
}

/// The quenched check over environments `0..check.environments`, each at the
/// top of the ladder with its prefixes.
pub fn quenched_campaign(cfg: &ExperimentConfig, check: &QuenchedCheck) -> Result<QuenchedSummary> {
    let top = cfg.top_n();
    let reports = with_threads(cfg.run.threads, || {
        (0..check.environments as u64)
            .into_par_iter()
            .map(|r| {
                let (g, w) = replica_weights(cfg, top, r)?;
                quenched_clt_check(&g, &w, &cfg.ladder.n, check.max_distance)
            })
            .collect::<Result<Vec<_>>>()
    })??;
    let passing = reports.iter().filter(|r| r.passed).count();
    let fraction = passing as f64 / reports.len().max(1) as f64;
    Ok(QuenchedSummary {
        environments: reports.len(),
        passing,
        fraction,
        worst_final_distance: reports.iter().map(|r| r.final_distance).fold(0.0, f64::max),
        passed: fraction >= check.fraction,
        reports,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct JointReport {
    pub n: usize,
    pub cut: usize,
    pub t: f64,
    pub cov_per_n: f64,
    pub var_left_per_n: f64,
    pub var_right_per_n: f64,
    /// `Var_μ U / n`.
    pub sigma_q2: f64,
}

/// Exact section covariance and variances at `cut` for one environment.
pub fn joint_sections_check(g: &CylinderGraph, w: &WeightAssignment<f64>, cut: usize) -> Result<JointReport> {
    let s = section_variances(g, w, cut)?;
    let nf = g.n() as f64;
    Ok(JointReport {
        n: g.n(),
        cut,
        t: cut as f64 / nf,
        cov_per_n: s.covariance / nf,
        var_left_per_n: s.var_left / nf,
        var_right_per_n: s.var_right / nf,
        sigma_q2: s.var_total / nf,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JointSummary {
    pub environments: usize,
    /// Environment average of `|Cov|/n` at `cov_n`, over `σ̂_Q²` there.
    pub cov_ratio: f64,
    /// Environment averages of `Var(U_left)/n ÷ (t σ̂_Q²)` and
    /// `Var(U_right)/n ÷ ((1−t) σ̂_Q²)` at `var_n`.
    pub left_ratio: f64,
    pub right_ratio: f64,
    pub cov_passed: bool,
    pub var_passed: bool,
    pub passed: bool,
}

pub fn joint_campaign(cfg: &ExperimentConfig, check: &JointCheck) -> Result<JointSummary> {
    let at = |n: usize| -> Result<Vec<JointReport>> {
        with_threads(cfg.run.threads, || {
            (0..check.environments as u64)
                .into_par_iter()
                .map(|r| {
                    let (g, w) = replica_weights(cfg, n, r)?;
                    joint_sections_check(&g, &w, n / 2)
                })
                .collect::<Result<Vec<_>>>()
        })?
    };
    let cov = at(check.cov_n)?;
    let var = at(check.var_n)?;
    let avg = |xs: &[JointReport], f: fn(&JointReport) -> f64| stats::mean(&xs.iter().map(f).collect::<Vec<_>>());
    let cov_ratio = avg(&cov, |r| r.cov_per_n.abs()) / avg(&cov, |r| r.sigma_q2);
    let q = avg(&var, |r| r.sigma_q2);
    let t = var[0].t;
    let left_ratio = avg(&var, |r| r.var_left_per_n) / (t * q);
    let right_ratio = avg(&var, |r| r.var_right_per_n) / ((1.0 - t) * q);
    let cov_passed = cov_ratio <= check.cov_ratio;
    let var_passed = (left_ratio - 1.0).abs() <= check.var_tol && (right_ratio - 1.0).abs() <= check.var_tol;
    Ok(JointSummary {
        environments: check.environments,
        cov_ratio,
        left_ratio,
        right_ratio,
        cov_passed,
        var_passed,
        passed: cov_passed && var_passed,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IncrementStats {
    pub index: usize,
    pub dt: f64,
    /// Sample variance with the jitter variance `1/(12n)` removed.
    pub variance: f64,
    /// `variance / (σ̂² Δt)`.
    pub ratio: f64,
    pub ks: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BrownianReport {
    pub n: usize,
    pub samples: usize,
    pub grid: Vec<f64>,
    pub u_hat: f64,
    /// `σ̂_Q² + σ̂_A²` from the same environments.
    pub sigma2: f64,
    pub increments: Vec<IncrementStats>,
    pub max_abs_corr: f64,
    pub ks_envelope: f64,
    pub variance_passed: bool,
    pub corr_passed: bool,
    pub ks_passed: bool,
    pub passed: bool,
}

/// Increments of `θ̂` on a dyadic grid over environments `0..samples`, one
/// Gibbs draw each. Integer block counts get a `U(−1/2, 1/2)` jitter so the
/// KS statistic sees a continuous law.
pub fn brownian_fdd_check(cfg: &ExperimentConfig, check: &BrownianCheck) -> Result<BrownianReport> {
    let n = check.n;
    let nf = n as f64;
    let grid = dyadic_grid(check.grid_log2);
    let k = grid.len() - 1;
    // (⟨U⟩, Var_μ U, block counts + jitter)
    let per_env = with_threads(cfg.run.threads, || {
        (0..check.samples as u64)
            .into_par_iter()
            .map(|r| -> Result<(f64, f64, Vec<f64>)> {
                let (g, w) = replica_weights(cfg, n, r)?;
                let m = Problem::new(&g, &w).moments()?;
                let seed = RngSeed::new(cfg.run.seed, r);
                let sampler = GibbsSampler::new(&g, &w)?;
                let matching = sampler.draw(&mut seed.uniforms(Domain::Gibbs));
                let obs = Observables::of(&g, &matching);
                let mut jitter = seed.uniforms(Domain::Jitter);
                let blocks = (0..k)
                    .map(|i| {
                        let a = (nf * grid[i]).floor() as usize;
                        let b = (nf * grid[i + 1]).floor() as usize;
                        (obs.prefix[b] - obs.prefix[a]) as f64 + jitter.next_open01() - 0.5
                    })
                    .collect();
                Ok((m.mean, m.var, blocks))
            })
            .collect::<Result<Vec<_>>>()
    })??;
    let means: Vec<f64> = per_env.iter().map(|e| e.0).collect();
    let vars: Vec<f64> = per_env.iter().map(|e| e.1).collect();
    let u_hat = stats::mean(&means) / nf;
    let sigma2 = (stats::mean(&vars) + stats::variance(&means)) / nf;
    let columns: Vec<Vec<f64>> = (0..k)
        .map(|i| {
            let dt = grid[i + 1] - grid[i];
            per_env
                .iter()
                .map(|e| (e.2[i] - nf * dt * u_hat) / nf.sqrt())
                .collect()
        })
        .collect();
    let ks_envelope = Envelopes::for_sample_size(check.samples).ks;
    let increments: Vec<IncrementStats> = columns
        .iter()
        .enumerate()
        .map(|(i, col)| {
            let dt = grid[i + 1] - grid[i];
            let variance = stats::variance(col) - 1.0 / (12.0 * nf);
            IncrementStats {
                index: i,
                dt,
                variance,
                ratio: variance / (sigma2 * dt),
                ks: ks_normal(col),
            }
        })
        .collect();
    let mut max_abs_corr: f64 = 0.0;
    for i in 0..k {
        for j in i + 1..k {
            max_abs_corr = max_abs_corr.max(correlation(&columns[i], &columns[j]).abs());
        }
    }
    let variance_passed = increments.iter().all(|s| (s.ratio - 1.0).abs() <= check.var_tol);
    let corr_passed = max_abs_corr <= check.corr_max;
    let ks_passed = increments.iter().all(|s| s.ks <= ks_envelope);
    Ok(BrownianReport {
        n,
        samples: check.samples,
        grid,
        u_hat,
        sigma2,
        increments,
        max_abs_corr,
        ks_envelope,
        variance_passed,
        corr_passed,
        ks_passed,
        passed: variance_passed && corr_passed && ks_passed,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthReport {
    pub u_hat_top: f64,
    pub u_hat_prev: f64,
    /// `2/√R`.
    pub agreement_tol: f64,
    pub agreement: bool,
    /// `(m, |mean⟨U⟩_m − m û|)` along the ladder, `û` from the top.
    pub deviations: Vec<(usize, f64)>,
    pub slope: f64,
    pub max_deviation: f64,
    pub passed: bool,
}

pub fn linear_growth_check(table: &ReplicaTable, limits: &Limits, check: &GrowthCheck) -> Result<GrowthReport> {
    let k = limits.rows.len();
    if k < 2 {
        return Err(Error::Config("the growth check needs at least two ladder values".into()));
    }
    let (prev, top) = (&limits.rows[k - 2], &limits.rows[k - 1]);
    let u = top.u_hat;
    let deviations: Vec<(usize, f64)> = limits
        .rows
        .iter()
        .map(|r| {
            let mean = stats::mean(&table.column(r.n, |row| row.mean_u));
            (r.n, (mean - r.n as f64 * u).abs())
        })
        .collect();
    let x: Vec<f64> = deviations.iter().map(|d| d.0 as f64).collect();
    let y: Vec<f64> = deviations.iter().map(|d| d.1).collect();
    let slope = linear_fit(&x, &y).0;
    let max_deviation = y.iter().cloned().fold(0.0, f64::max);
    let agreement_tol = 2.0 / (top.replicas as f64).sqrt();
    let agreement = (top.u_hat - prev.u_hat).abs() <= agreement_tol;
    Ok(GrowthReport {
        u_hat_top: top.u_hat,
        u_hat_prev: prev.u_hat,
        agreement_tol,
        agreement,
        deviations,
        slope,
        max_deviation,
        passed: agreement && max_deviation <= check.max_deviation,
    })
}

/// The Thouless-type relation over the table, `h = 1`.
pub fn thouless_check(table: &ReplicaTable, nu_mean: f64, nu_sd: f64) -> ThoulessReport {
    let samples: Vec<(usize, f64, f64)> = table
        .rows
        .iter()
        .filter(|r| r.is_ok())
        .filter_map(|r| Some((r.n, r.log_z?, r.log_z_tilde?)))
        .collect();
    lyapunov_check(&samples, nu_mean, nu_sd)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disorder::{DisorderSpec, Law};
    use crate::experiments::config::{FiberConfig, Mode};
    use crate::experiments::replicas::run_replicas;

    #[test]
    fn fibonacci_free_energy() {
        let cfg = ExperimentConfig::new(FiberConfig::path(1), DisorderSpec::constant(0.0, 0.0), vec![20, 40, 80], 3);
        let t = run_replicas(&cfg).unwrap();
        let l = estimate_limits(&t).unwrap();
        let top = l.top();
        // Z_80 = Fib(81)
        let (mut a, mut b) = (1.0f64, 1.0f64);
        for _ in 2..81 {
            (a, b) = (b, a + b);
        }
        assert!((top.f_hat - b.ln() / 80.0).abs() < 1e-12);
        assert!((top.f_hat - 1.618_033_988_749_895f64.ln()).abs() < 0.01);
        assert_eq!((top.sigma_f2, top.sigma_a2), (0.0, 0.0));
        assert!(top.split_residual < 1e-12);
        let clt = clt_checks(&t, &CltCheck::default()).unwrap();
        assert!(clt.verdicts.iter().all(|v| v.verdict == Verdict::ZeroVariance));
        assert!(clt.passed);
    }

    #[test]
    fn u_hat_matches_exact_instance() {
        let cfg = ExperimentConfig::new(FiberConfig::path(1), DisorderSpec::constant(0.0, 0.0), vec![12], 2);
        let t = run_replicas(&cfg).unwrap();
        let l = estimate_limits(&t).unwrap();
        let g = CylinderGraph::path(12).unwrap();
        let w = WeightAssignment::<f64>::zeros(&g);
        let p = Problem::new(&g, &w).polynomial().unwrap();
        assert!((l.top().u_hat - p.cumulants(0.0, 1).unwrap()[0] / 12.0).abs() < 1e-12);
    }

    #[test]
    fn split_identity_on_random_rows() {
        let cfg = ExperimentConfig::new(FiberConfig::path(2), DisorderSpec::standard_normal(), vec![10], 40);
        let l = estimate_limits(&run_replicas(&cfg).unwrap()).unwrap();
        let r = l.top();
        assert!(r.sigma_a2 > 0.0);
        assert!(r.split_residual < 1e-10 * r.sigma_total2.max(1.0));
    }

    #[test]
    fn two_point_quenched_distance() {
        let g = CylinderGraph::path(2).unwrap();
        let w = WeightAssignment::<f64>::zeros(&g);
        let r = quenched_clt_check(&g, &w, &[2], 0.05).unwrap();
        assert!((r.final_distance - (stats::normal_cdf(1.0) - 0.5)).abs() < 1e-12);
        assert!(!r.passed);
    }

    #[test]
    fn disconnected_cut_has_no_covariance() {
        let g = CylinderGraph::path(6).unwrap();
        let mut omega = vec![0.0; g.n_edges()];
        omega[g.horizontal_edge(2, 0)] = f64::NEG_INFINITY;
        let w = WeightAssignment::new(&g, vec![0.3; 6], omega).unwrap();
        let r = joint_sections_check(&g, &w, 3).unwrap();
        assert!(r.cov_per_n.abs() < 1e-14);
    }

    #[test]
    fn constant_growth_is_bounded() {
        let cfg = ExperimentConfig::new(FiberConfig::path(1), DisorderSpec::constant(0.0, 0.0), vec![8, 16, 32, 64, 128], 2);
        let t = run_replicas(&cfg).unwrap();
        let l = estimate_limits(&t).unwrap();
        let r = linear_growth_check(&t, &l, &GrowthCheck::default()).unwrap();
        assert!(r.passed, "{r:?}");
        let d: Vec<f64> = r.deviations.iter().map(|d| d.1).collect();
        assert!(d.windows(2).skip(1).all(|w| w[1] <= w[0] + 1e-12));
    }

    #[test]
    fn thouless_constant_shift() {
        let mut cfg = ExperimentConfig::new(
            FiberConfig::path(1),
            DisorderSpec::new(Law::Constant { value: 0.7 }, Law::Constant { value: 0.2 }).unwrap(),
            vec![8, 16],
            2,
        );
        cfg.run.mode = Mode::Poly;
        let t = run_replicas(&cfg).unwrap();
        let rep = thouless_check(&t, 0.7, 0.0);
        for row in &rep.rows {
            assert!((row.f_hat - row.gamma_hat - 0.7).abs() < 1e-12);
        }
    }

    #[test]
    fn brownian_small_run_is_deterministic() {
        let cfg = ExperimentConfig::new(FiberConfig::path(2), DisorderSpec::standard_normal(), vec![16], 2);
        let check = BrownianCheck {
            enabled: true,
            n: 16,
            samples: 20,
            grid_log2: 2,
            var_tol: 0.15,
            corr_max: 0.1,
        };
        let a = brownian_fdd_check(&cfg, &check).unwrap();
        let b = brownian_fdd_check(&cfg, &check).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.increments.len(), 4);
    }
}
