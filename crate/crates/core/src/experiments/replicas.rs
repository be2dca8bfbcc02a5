use super::config::{ExperimentConfig, Mode};
use crate::disorder::RngSeed;
use crate::error::{Error, Result};
use crate::graph::CylinderGraph;
use crate::groundstate::max_weight;
use crate::jacobi::JacobiMatrix;
use crate::leeyang::{density_functionals, LeeYangSpectrum};
use crate::transfer::{section_variances, section_variances_scalar, Problem};
use crate::weights::{sample_weights, WeightAssignment};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::Write;

/// One `(n, stream)` cell of a campaign. Metrics that were not requested, or
/// that failed, are `None`; a failure also fills `error`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReplicaRow {
    pub n: usize,
    pub stream: u64,
    pub log_z: Option<f64>,
    pub sum_nu: Option<f64>,
    /// `log Z̃_n`: the Jacobi gauge determinant when `h = 1`, otherwise
    /// `log Z_n − Σν`.
    pub log_z_tilde: Option<f64>,
    pub mean_u: Option<f64>,
    pub var_u: Option<f64>,
    pub cut: usize,
    pub var_left: Option<f64>,
    pub var_right: Option<f64>,
    pub cov_sections: Option<f64>,
    pub m_n: Option<f64>,
    pub max_lambda: Option<f64>,
    pub u_n: Option<f64>,
    pub varq_n: Option<f64>,
    pub error: Option<String>,
}

impl ReplicaRow {
    fn empty(n: usize, stream: u64) -> Self {
        Self {
            n,
            stream,
            log_z: None,
            sum_nu: None,
            log_z_tilde: None,
            mean_u: None,
            var_u: None,
            cut: n / 2,
            var_left: None,
            var_right: None,
            cov_sections: None,
            m_n: None,
            max_lambda: None,
            u_n: None,
            varq_n: None,
            error: None,
        }
    }

    pub fn is_ok(&self) -> bool {
        self.error.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct ReplicaTable {
    pub rows: Vec<ReplicaRow>,
}

impl ReplicaTable {
    /// Layer counts present, ascending.
    pub fn ns(&self) -> Vec<usize> {
        let mut ns: Vec<usize> = self.rows.iter().map(|r| r.n).collect();
        ns.dedup();
        ns
    }

    /// Successful rows at `n`.
    pub fn at(&self, n: usize) -> impl Iterator<Item = &ReplicaRow> {
        self.rows.iter().filter(move |r| r.n == n && r.is_ok())
    }

    /// Values of one metric at `n`, skipping rows where it is missing.
    pub fn column(&self, n: usize, f: impl Fn(&ReplicaRow) -> Option<f64>) -> Vec<f64> {
        self.at(n).filter_map(f).collect()
    }

    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| !r.is_ok()).count()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(out);
        for r in &self.rows {
            wtr.serialize(r)?;
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn read_csv<R: std::io::Read>(input: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(input);
        let rows = rdr.deserialize().collect::<std::result::Result<Vec<ReplicaRow>, _>>()?;
        Ok(Self { rows })
    }
}

/// Runs `f` on a pool with `threads` workers (all cores when 0).
pub fn with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> Result<R> {
    if threads == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;
    Ok(pool.install(f))
}

/// Weights of replica `stream` at `n` layers.
pub fn replica_weights(cfg: &ExperimentConfig, n: usize, stream: u64) -> Result<(CylinderGraph, WeightAssignment<f64>)> {
    let g = cfg.fiber.cylinder(n)?;
    let w = sample_weights(&g, &cfg.disorder, RngSeed::new(cfg.run.seed, stream))?;
    Ok((g, w))
}

fn fill_row(cfg: &ExperimentConfig, row: &mut ReplicaRow) -> Result<()> {
    let (g, w) = replica_weights(cfg, row.n, row.stream)?;
    let sum_nu = w.gauge_offset();
    row.sum_nu = Some(sum_nu);
    match cfg.run.mode {
        Mode::Poly => {
            let p = Problem::new(&g, &w).polynomial()?;
            let c = p.cumulants(0.0, 2)?;
            row.log_z = Some(p.log_z(0.0));
            row.mean_u = Some(c[0]);
            row.var_u = Some(c[1]);
        }
        Mode::Scalar => {
            let m = Problem::new(&g, &w).moments()?;
            row.log_z = Some(m.log_mass);
            row.mean_u = Some(m.mean);
            row.var_u = Some(m.var);
        }
    }
    let log_z = row.log_z.expect("set above");
    row.log_z_tilde = Some(if g.h() == 1 {
        JacobiMatrix::from_weights(&g, &w)?.gauge()?.log_det()?.log_abs
    } else {
        log_z - sum_nu
    });
    if cfg.run.sections && g.n() >= 2 {
        let s = match cfg.run.mode {
            Mode::Poly => section_variances(&g, &w, row.cut)?,
            Mode::Scalar => section_variances_scalar(&g, &w, row.cut)?,
        };
        row.var_left = Some(s.var_left);
        row.var_right = Some(s.var_right);
        row.cov_sections = Some(s.covariance);
    }
    if cfg.run.ground {
        row.m_n = Some(max_weight(&g, &w)?.value);
    }
    if cfg.run.spectrum {
        let spec = LeeYangSpectrum::compute(&g, &w, None)?;
        let x = cfg.run.x_grid.first().copied().unwrap_or(0.0);
        let (u, v) = density_functionals(&spec, g.n(), x);
        row.max_lambda = Some(spec.max_lambda());
        row.u_n = Some(u);
        row.varq_n = Some(v);
    }
    Ok(())
}

/// One row; errors are recorded in the row rather than returned.
pub fn replica_row(cfg: &ExperimentConfig, n: usize, stream: u64) -> ReplicaRow {
    let mut row = ReplicaRow::empty(n, stream);
    if let Err(e) = fill_row(cfg, &mut row) {
        row = ReplicaRow::empty(n, stream);
        row.error = Some(e.to_string());
    }
    row
}

/// Every `(n, stream)` cell of the ladder, in `(n, stream)` order whatever
/// the scheduling. Replica `r` uses stream `r`, so its environments at
/// different `n` are prefixes of one another.
pub fn run_replicas(cfg: &ExperimentConfig) -> Result<ReplicaTable> {
    cfg.validate()?;
    let cells: Vec<(usize, u64)> = cfg
        .ladder
        .n
        .iter()
        .flat_map(|&n| (0..cfg.ladder.replicas as u64).map(move |r| (n, r)))
        .collect();
    let rows = with_threads(cfg.run.threads, || {
        cells.par_iter().map(|&(n, r)| replica_row(cfg, n, r)).collect::<Vec<_>>()
    })?;
    Ok(ReplicaTable { rows })
}
