//! Checks, run summaries and the CSV files written next to them.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;
use wulff_core::iamcf::FlowTrace;
use wulff_core::stability::SweepTable;

use crate::config::Task;

pub const SUMMARY_FILE: &str = "summary.json";
pub const TRACE_FILE: &str = "trace.csv";
pub const SWEEP_FILE: &str = "sweep.csv";

/// Bumped whenever a CSV header changes.
pub const CSV_VERSION: u32 = 1;

pub const TRACE_HEADER: [&str; 13] = [
    "t",
    "dt",
    "Q",
    "perimeter_F",
    "volume",
    "minHF",
    "supDistToWulff",
    "minHF_rescaled",
    "scale",
    "barrier_inner",
    "barrier_outer",
    "Q_rate",
    "gap",
];

pub const SWEEP_HEADER: [&str; 13] = [
    "delta",
    "eps1",
    "eps_p",
    "alpha",
    "hausdorff",
    "f1",
    "f2",
    "ratio_alpha",
    "ratio_hausdorff",
    "zero_over_zero",
    "isoperimetric_deficit",
    "quantitative_ratio",
    "p",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    /// `"<="` or `">="`.
    pub relation: &'static str,
    pub limit: f64,
    pub passed: bool,
}

impl Check {
    pub fn at_most(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Self {
            name: name.into(),
            value,
            relation: "<=",
            limit,
            passed: value <= limit,
        }
    }

    pub fn at_least(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Self {
            name: name.into(),
            value,
            relation: ">=",
            limit,
            passed: value >= limit,
        }
    }

    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        Self {
            name: name.into(),
            value: ok as u8 as f64,
            relation: ">=",
            limit: 1.0,
            passed: ok,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub task: Task,
    /// Echo of the resolved configuration.
    pub config: Value,
    pub results: Value,
    pub checks: Vec<Check>,
    pub trace: Option<FlowTrace>,
    pub sweep: Option<SweepTable>,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn exit_code(&self) -> u8 {
        if self.passed() {
            0
        } else {
            2
        }
    }

    pub fn summary(&self) -> Value {
        let mut files = vec![SUMMARY_FILE];
        if self.trace.is_some() {
            files.push(TRACE_FILE);
        }
        if self.sweep.is_some() {
            files.push(SWEEP_FILE);
        }
        serde_json::json!({
            "schema_version": crate::config::SCHEMA_VERSION,
            "csv_version": CSV_VERSION,
            "task": self.task.name(),
            "config": self.config,
            "results": self.results,
            "checks": self.checks,
            "passed": self.passed(),
            "files": files,
        })
    }

    /// Writes the summary and any CSV files into `dir`, returning their paths.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let mut written = Vec::new();
        let path = dir.join(SUMMARY_FILE);
        let mut text = serde_json::to_string_pretty(&self.summary())?;
        text.push('\n');
        fs::File::create(&path)
            .and_then(|mut f| f.write_all(text.as_bytes()))
            .with_context(|| format!("writing {}", path.display()))?;
        written.push(path);
        if let Some(trace) = &self.trace {
            let path = dir.join(TRACE_FILE);
            write_trace(trace, &path)?;
            written.push(path);
        }
        if let Some(sweep) = &self.sweep {
            let path = dir.join(SWEEP_FILE);
            write_sweep(sweep, &path)?;
            written.push(path);
        }
        Ok(written)
    }
}

fn num(x: f64) -> String {
    format!("{x}")
}

pub fn write_trace(trace: &FlowTrace, path: &Path) -> Result<()> {
    let mut w =
        csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
    w.write_record(TRACE_HEADER)?;
    for s in &trace.samples {
        w.write_record(
            [
                s.t,
                s.dt,
                s.q,
                s.perimeter,
                s.volume,
                s.min_hf,
                s.sup_dist,
                s.min_hf_rescaled,
                s.scale,
                s.barrier_inner,
                s.barrier_outer,
                s.q_rate,
                s.gap,
            ]
            .map(num),
        )?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_sweep(table: &SweepTable, path: &Path) -> Result<()> {
    let mut w =
        csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
    w.write_record(SWEEP_HEADER)?;
    for r in &table.rows {
        let mut rec: Vec<String> = [
            r.delta,
            r.eps1,
            r.eps_p,
            r.alpha,
            r.hausdorff,
            r.f1,
            r.f2,
            r.ratio_alpha,
            r.ratio_hausdorff,
        ]
        .map(num)
        .to_vec();
        rec.push(r.zero_over_zero.to_string());
        rec.extend([r.isoperimetric_deficit, r.quantitative_ratio, table.p].map(num));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checks_fail_on_nan() {
        assert!(!Check::at_most("x", f64::NAN, 1.0).passed);
        assert!(!Check::at_least("x", f64::NAN, 1.0).passed);
        assert!(Check::at_most("x", 1.0, 1.0).passed);
        assert!(Check::holds("x", true).passed);
    }
}
