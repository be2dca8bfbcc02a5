use super::checks::{
    annealed_positivity, brownian_fdd_check, clt_checks, estimate_limits, joint_campaign, linear_growth_check,
    lln_check, quenched_campaign, stats_summary, thouless_check, Limits, StatsSummary,
};
use super::config::ExperimentConfig;
use super::replicas::{run_replicas, ReplicaTable};
use crate::error::Result;
use serde::Serialize;
use serde_json::Value;
use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

/// Version of the `summary.json` / `report.json` / `replicas.csv` layout.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub status: Status,
    pub detail: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub schema: u32,
    pub checks: Vec<CheckOutcome>,
    pub failures: usize,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub schema: u32,
    pub failed_rows: usize,
    pub limits: Limits,
    pub stats: StatsSummary,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub table: ReplicaTable,
    pub summary: Summary,
    pub report: Report,
}

fn outcome(name: &str, passed: bool, detail: impl Serialize) -> Result<CheckOutcome> {
    Ok(CheckOutcome {
        name: name.into(),
        status: if passed { Status::Pass } else { Status::Fail },
        detail: serde_json::to_value(detail)?,
    })
}

fn skipped(name: &str, why: &str) -> CheckOutcome {
    CheckOutcome {
        name: name.into(),
        status: Status::Skipped,
        detail: Value::String(why.into()),
    }
}

/// Runs the campaign and every enabled check.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Outcome> {
    cfg.validate()?;
    let table = run_replicas(cfg)?;
    let limits = estimate_limits(&table)?;
    let stats = stats_summary(&table);
    let c = &cfg.checks;
    let mut checks = Vec::new();

    if c.lln.enabled {
        if limits.rows.len() >= 2 {
            let r = lln_check(&limits, &c.lln)?;
            checks.push(outcome("lln", r.passed, &r)?);
        } else {
            checks.push(skipped("lln", "needs two ladder values"));
        }
    }
    if c.clt.enabled {
        let r = clt_checks(&table, &c.clt)?;
        checks.push(outcome("clt", r.passed, &r)?);
    }
    if c.annealed.enabled {
        let r = annealed_positivity(&limits, &c.annealed);
        checks.push(outcome("annealed_positivity", r.passed, &r)?);
    }
    if c.quenched.enabled {
        let r = quenched_campaign(cfg, &c.quenched)?;
        checks.push(outcome("quenched_clt", r.passed, &r)?);
    }
    if let Some(j) = c.joint.as_ref().filter(|j| j.enabled) {
        let r = joint_campaign(cfg, j)?;
        checks.push(outcome("joint_sections", r.passed, &r)?);
    }
    if let Some(b) = c.brownian.as_ref().filter(|b| b.enabled) {
        let r = brownian_fdd_check(cfg, b)?;
        checks.push(outcome("brownian_fdd", r.passed, &r)?);
    }
    if c.growth.enabled {
        if limits.rows.len() >= 2 {
            let r = linear_growth_check(&table, &limits, &c.growth)?;
            checks.push(outcome("linear_growth", r.passed, &r)?);
        } else {
            checks.push(skipped("linear_growth", "needs two ladder values"));
        }
    }
    if c.thouless.enabled {
        let v = &cfg.disorder.vertex;
        let r = thouless_check(&table, v.mean(), v.variance().sqrt());
        checks.push(outcome("thouless", r.shrinking, &r)?);
    }
    let failures = checks.iter().filter(|c| c.status == Status::Fail).count();
    Ok(Outcome {
        summary: Summary {
            schema: SCHEMA_VERSION,
            failed_rows: table.failures(),
            limits,
            stats,
        },
        report: Report {
            schema: SCHEMA_VERSION,
            checks,
            failures,
        },
        table,
    })
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let f = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(f, value)?;
    Ok(())
}

/// Writes `replicas.csv`, `summary.json` and `report.json` into `dir`.
pub fn write_outputs(out: &Outcome, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    out.table.write_csv(BufWriter::new(File::create(dir.join("replicas.csv"))?))?;
    write_json(&dir.join("summary.json"), &out.summary)?;
    write_json(&dir.join("report.json"), &out.report)?;
    Ok(())
}
